"""Curved algebras and curved coalgebras over bigraded modules.

Conventions: maps act on the right and ``f >> g`` (or ``compose(f, g)``) is
"f then g".  A curved algebra carries ``m2 : A(x)A -> A``, a degree-1
derivation ``m1``, a degree-2 curvature ``m0 : 1 -> A`` and the unit ``eta``,
with an optional splitting ``v`` of the unit.  A curved coalgebra is the
mirror image with ``delta2, delta1, delta0, eps`` and the splitting ``w``.

Checkers never raise on a failed law; they return a :class:`Report`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable

from .gradedcore import (
    UNIT,
    BigradedModule,
    CoeffRing,
    GradedMap,
    StructuralError,
    compose,
    dual_module,
    identity,
    invert_diagonal,
    shift,
    sigma,
    tensor,
    tensor_power,
    transpose,
)
from .linalg import RowSolver

__all__ = [
    "AxiomResult",
    "Report",
    "CurvedAlgebraData",
    "CurvedCoalgebraData",
    "CurvedAlgMorphism",
    "CurvedCoalgMorphism",
    "AssociativeAlgebra",
    "Coalgebra",
    "compare_maps",
    "check_curved_algebra",
    "check_curved_coalgebra",
    "check_alg_morphism",
    "check_coalg_morphism",
    "check_associative_algebra",
    "check_coalgebra",
    "check_algebra_hom",
    "check_coalgebra_hom",
    "double_algebra",
    "double_coalgebra",
    "double_alg_morphism",
    "double_coalg_morphism",
    "compose_alg_morphisms",
    "compose_coalg_morphisms",
    "identity_alg_morphism",
    "identity_coalg_morphism",
    "ShiftedAlgebra",
    "ShiftedCoalgebra",
    "to_shifted_algebra",
    "from_shifted_algebra",
    "to_shifted_coalgebra",
    "from_shifted_coalgebra",
    "check_shifted_algebra",
    "check_shifted_coalgebra",
    "shifted_alg_morphism",
    "shifted_coalg_morphism",
    "dual_algebra",
    "dual_alg_morphism",
    "transport_algebra",
    "Splitting",
    "split_idempotent",
    "algebra_splitting",
    "coalgebra_splitting",
    "trivial_algebra",
    "trivial_coalgebra",
    "graded_commutator",
    "twist_algebra",
    "twist_morphism",
    "weight_quotient",
]


# ---------------------------------------------------------------- reports


@dataclass
class AxiomResult:
    name: str
    ok: bool
    counterexample: dict | None = None

    def to_dict(self) -> dict:
        d = {"name": self.name, "ok": self.ok}
        if self.counterexample is not None:
            d["counterexample"] = self.counterexample
        return d


@dataclass
class Report:
    subject: str
    results: list[AxiomResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def failed(self) -> list[str]:
        return [r.name for r in self.results if not r.ok]

    def result(self, name: str) -> AxiomResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def extend(self, other: "Report") -> "Report":
        self.results.extend(other.results)
        return self

    def to_dict(self) -> dict:
        return {"subject": self.subject, "ok": self.ok, "axioms": [r.to_dict() for r in self.results]}

    def __str__(self) -> str:
        lines = [f"{self.subject}: {'ok' if self.ok else 'FAILED'}"]
        for r in self.results:
            line = f"  [{'pass' if r.ok else 'FAIL'}] {r.name}"
            if r.counterexample:
                line += f"  at {r.counterexample.get('bidegree')} input {r.counterexample.get('input')!r}"
            lines.append(line)
        return "\n".join(lines)


def compare_maps(name: str, lhs: GradedMap, rhs: GradedMap, labels: Iterable | None = None) -> AxiomResult:
    """Equality of two maps on the given source labels, as an axiom result."""
    if lhs.degree != rhs.degree:
        return AxiomResult(name, False, {"reason": f"degrees {lhs.degree} and {rhs.degree}"})
    src = lhs.source
    for s in src.labels if labels is None else labels:
        if lhs.row(s) != rhs.row(s):
            return AxiomResult(name, False, {"input": s, "bidegree": tuple(src.degree_of(s))})
    return AxiomResult(name, True)


def _degree_result(name: str, pairs) -> AxiomResult:
    for label, f, d in pairs:
        if f is not None and f.degree != d:
            return AxiomResult(name, False, {"reason": f"{label} has degree {f.degree}, expected {d}"})
    return AxiomResult(name, True)


def _inputs(M: BigradedModule, k: int, trusted_length: int | None) -> list:
    """Labels of ``M^(x)k`` that can carry a nonzero law, filtered by length.

    With a trusted length the labels of ``M`` are words and only tuples of
    total length at most that value are produced (enumerated directly, since
    the full tensor power can be huge).
    """
    cap = M.max_weight
    if trusted_length is None:
        return list(tensor_power(M, k, cap).labels)
    by_len: dict = {}
    for l in M.labels:
        if len(l) <= trusted_length:
            by_len.setdefault(len(l), []).append(l)
    if k == 1:
        return [l for n in sorted(by_len) for l in by_len[n]]
    out = []
    for lens in itertools.product(sorted(by_len), repeat=k):
        if sum(lens) > trusted_length:
            continue
        for combo in itertools.product(*(by_len[n] for n in lens)):
            if sum(M.degree_of(x)[1] for x in combo) <= cap:
                out.append(combo)
    return out


# ---------------------------------------------------------------- data


@dataclass
class CurvedAlgebraData:
    """Curved algebra with an optional splitting ``v`` of the unit.

    ``trusted_length`` marks a carrier that is a truncation of a larger one
    (labels are words and products beyond the cap are dropped); laws are then
    only checked on inputs of total word length at most this value.
    """

    carrier: BigradedModule
    ring: CoeffRing
    m2: GradedMap
    m1: GradedMap
    m0: GradedMap
    eta: GradedMap
    v: GradedMap | None = None
    trusted_length: int | None = None

    def __post_init__(self) -> None:
        A = self.carrier
        checks = [
            ("m2", self.m2, tensor_power(A, 2), A),
            ("m1", self.m1, A, A),
            ("m0", self.m0, UNIT, A),
            ("eta", self.eta, UNIT, A),
        ]
        if self.v is not None:
            checks.append(("v", self.v, A, UNIT))
        for name, f, s, t in checks:
            if not (f.source.compatible(s) and f.target.compatible(t)):
                raise StructuralError(f"{name} has the wrong source or target")


@dataclass
class CurvedCoalgebraData:
    carrier: BigradedModule
    ring: CoeffRing
    delta2: GradedMap
    delta1: GradedMap
    delta0: GradedMap
    eps: GradedMap
    w: GradedMap | None = None

    def __post_init__(self) -> None:
        C = self.carrier
        checks = [
            ("delta2", self.delta2, C, tensor_power(C, 2)),
            ("delta1", self.delta1, C, C),
            ("delta0", self.delta0, C, UNIT),
            ("eps", self.eps, C, UNIT),
        ]
        if self.w is not None:
            checks.append(("w", self.w, UNIT, C))
        for name, f, s, t in checks:
            if not (f.source.compatible(s) and f.target.compatible(t)):
                raise StructuralError(f"{name} has the wrong source or target")


@dataclass
class CurvedAlgMorphism:
    source: CurvedAlgebraData
    target: CurvedAlgebraData
    f1: GradedMap
    f0: GradedMap


@dataclass
class CurvedCoalgMorphism:
    source: CurvedCoalgebraData
    target: CurvedCoalgebraData
    g1: GradedMap
    g0: GradedMap


@dataclass
class AssociativeAlgebra:
    carrier: BigradedModule
    ring: CoeffRing
    m2: GradedMap
    eta: GradedMap


@dataclass
class Coalgebra:
    carrier: BigradedModule
    ring: CoeffRing
    delta2: GradedMap
    eps: GradedMap


def trivial_algebra(ring: CoeffRing) -> CurvedAlgebraData:
    """The ground ring as a curved algebra on one generator ``1`` with zero differential and curvature."""
    K = BigradedModule([("1", (0, 0))])
    return CurvedAlgebraData(
        K, ring, GradedMap(tensor_power(K, 2), K, 0, ring, {("1", "1"): {"1": 1}}),
        GradedMap(K, K, 1, ring, {}), GradedMap(UNIT, K, 2, ring, {}),
        GradedMap(UNIT, K, 0, ring, {(): {"1": 1}}), GradedMap(K, UNIT, 0, ring, {"1": {(): 1}}),
    )


def trivial_coalgebra(ring: CoeffRing) -> CurvedCoalgebraData:
    K = BigradedModule([("1", (0, 0))])
    return CurvedCoalgebraData(
        K, ring, GradedMap(K, tensor_power(K, 2), 0, ring, {"1": {("1", "1"): 1}}),
        GradedMap(K, K, 1, ring, {}), GradedMap(K, UNIT, 2, ring, {}),
        GradedMap(K, UNIT, 0, ring, {"1": {(): 1}}), GradedMap(UNIT, K, 0, ring, {(): {"1": 1}}),
    )


def check_curved_algebra(A: CurvedAlgebraData, include_splitting: bool = True) -> Report:
    R, M = A.ring, A.carrier
    one = identity(M, R)
    tl = A.trusted_length
    rep = Report("curved algebra")
    rep.results.append(
        _degree_result("degrees", [("m2", A.m2, 0), ("m1", A.m1, 1), ("m0", A.m0, 2), ("eta", A.eta, 0), ("v", A.v, 0)])
    )
    in1, in2, in3 = _inputs(M, 1, tl), _inputs(M, 2, tl), _inputs(M, 3, tl)
    rep.results.append(
        compare_maps("associativity", tensor(A.m2, one) >> A.m2, tensor(one, A.m2) >> A.m2, in3)
    )
    rep.results.append(compare_maps("left unit", tensor(A.eta, one) >> A.m2, one, in1))
    rep.results.append(compare_maps("right unit", tensor(one, A.eta) >> A.m2, one, in1))
    rep.results.append(
        compare_maps("m1 Leibniz rule", A.m2 >> A.m1, (tensor(A.m1, one) + tensor(one, A.m1)) >> A.m2, in2)
    )
    rep.results.append(compare_maps("m1 kills unit", A.eta >> A.m1, GradedMap(UNIT, M, 1, R, {})))
    rep.results.append(
        compare_maps("m1^2 axiom", A.m1 >> A.m1, (tensor(A.m0, one) - tensor(one, A.m0)) >> A.m2, in1)
    )
    rep.results.append(compare_maps("m0 m1 = 0", A.m0 >> A.m1, GradedMap(UNIT, M, 3, R, {})))
    if include_splitting and A.v is not None:
        rep.results.append(compare_maps("unit splitting", A.eta >> A.v, identity(UNIT, R)))
    return rep


def check_curved_coalgebra(C: CurvedCoalgebraData, include_splitting: bool = True) -> Report:
    R, M = C.ring, C.carrier
    one = identity(M, R)
    rep = Report("curved coalgebra")
    rep.results.append(
        _degree_result(
            "degrees",
            [("delta2", C.delta2, 0), ("delta1", C.delta1, 1), ("delta0", C.delta0, 2), ("eps", C.eps, 0), ("w", C.w, 0)],
        )
    )
    rep.results.append(
        compare_maps("coassociativity", C.delta2 >> tensor(C.delta2, one), C.delta2 >> tensor(one, C.delta2))
    )
    rep.results.append(compare_maps("left counit", C.delta2 >> tensor(C.eps, one), one))
    rep.results.append(compare_maps("right counit", C.delta2 >> tensor(one, C.eps), one))
    rep.results.append(
        compare_maps(
            "delta1 coLeibniz rule", C.delta1 >> C.delta2, C.delta2 >> (tensor(C.delta1, one) + tensor(one, C.delta1))
        )
    )
    rep.results.append(compare_maps("delta1 kills counit", C.delta1 >> C.eps, GradedMap(M, UNIT, 1, R, {})))
    rep.results.append(
        compare_maps("delta1^2 axiom", C.delta1 >> C.delta1, C.delta2 >> (tensor(one, C.delta0) - tensor(C.delta0, one)))
    )
    rep.results.append(compare_maps("delta1 delta0 = 0", C.delta1 >> C.delta0, GradedMap(M, UNIT, 3, R, {})))
    if include_splitting and C.w is not None:
        rep.results.append(compare_maps("counit splitting", C.w >> C.eps, identity(UNIT, R)))
    return rep


def check_alg_morphism(f: CurvedAlgMorphism) -> Report:
    A, B = f.source, f.target
    R = A.ring
    oneB = identity(B.carrier, R)
    tl = A.trusted_length
    rep = Report("curved algebra morphism")
    rep.results.append(_degree_result("degrees", [("f1", f.f1, 0), ("f0", f.f0, 1)]))
    in1, in2 = _inputs(A.carrier, 1, tl), _inputs(A.carrier, 2, tl)
    rep.results.append(compare_maps("multiplicative", A.m2 >> f.f1, tensor(f.f1, f.f1) >> B.m2, in2))
    rep.results.append(compare_maps("unital", A.eta >> f.f1, B.eta))
    lhs = (f.f1 >> B.m1) + (f.f1 >> ((tensor(oneB, f.f0) - tensor(f.f0, oneB)) >> B.m2))
    rep.results.append(compare_maps("differential equation", lhs, A.m1 >> f.f1, in1))
    lhs0 = B.m0 - (f.f0 >> B.m1) - (tensor(f.f0, f.f0) >> B.m2)
    rep.results.append(compare_maps("curvature equation", lhs0, A.m0 >> f.f1))
    return rep


def check_coalg_morphism(g: CurvedCoalgMorphism) -> Report:
    C, D = g.source, g.target
    R = C.ring
    oneD = identity(D.carrier, R)
    rep = Report("curved coalgebra morphism")
    rep.results.append(_degree_result("degrees", [("g1", g.g1, 0), ("g0", g.g0, 1)]))
    rep.results.append(compare_maps("comultiplicative", g.g1 >> D.delta2, C.delta2 >> tensor(g.g1, g.g1)))
    rep.results.append(compare_maps("counital", g.g1 >> D.eps, C.eps))
    lhs = (C.delta1 >> g.g1) + (C.delta2 >> (tensor(g.g0, g.g1) - tensor(g.g1, g.g0)))
    rep.results.append(compare_maps("differential equation", lhs, g.g1 >> D.delta1))
    lhs0 = C.delta0 - (C.delta1 >> g.g0) - (C.delta2 >> tensor(g.g0, g.g0))
    rep.results.append(compare_maps("curvature equation", lhs0, g.g1 >> D.delta0))
    return rep


def check_associative_algebra(A: AssociativeAlgebra) -> Report:
    M, R = A.carrier, A.ring
    one = identity(M, R)
    rep = Report("associative algebra")
    rep.results.append(
        compare_maps("associativity", tensor(A.m2, one) >> A.m2, tensor(one, A.m2) >> A.m2, _inputs(M, 3, None))
    )
    rep.results.append(compare_maps("left unit", tensor(A.eta, one) >> A.m2, one))
    rep.results.append(compare_maps("right unit", tensor(one, A.eta) >> A.m2, one))
    return rep


def check_coalgebra(C: Coalgebra) -> Report:
    M, R = C.carrier, C.ring
    one = identity(M, R)
    rep = Report("coalgebra")
    rep.results.append(
        compare_maps("coassociativity", C.delta2 >> tensor(C.delta2, one), C.delta2 >> tensor(one, C.delta2))
    )
    rep.results.append(compare_maps("left counit", C.delta2 >> tensor(C.eps, one), one))
    rep.results.append(compare_maps("right counit", C.delta2 >> tensor(one, C.eps), one))
    return rep


def check_algebra_hom(A: AssociativeAlgebra, B: AssociativeAlgebra, f: GradedMap) -> Report:
    rep = Report("algebra homomorphism")
    rep.results.append(
        compare_maps("multiplicative", A.m2 >> f, tensor(f, f) >> B.m2, _inputs(A.carrier, 2, None))
    )
    rep.results.append(compare_maps("unital", A.eta >> f, B.eta))
    return rep


def check_coalgebra_hom(C: Coalgebra, D: Coalgebra, g: GradedMap) -> Report:
    rep = Report("coalgebra homomorphism")
    rep.results.append(compare_maps("comultiplicative", g >> D.delta2, C.delta2 >> tensor(g, g)))
    rep.results.append(compare_maps("counital", g >> D.eps, C.eps))
    return rep


# ---------------------------------------------------------------- doubling


def _doubled_module(M: BigradedModule, dz: int, tag: str) -> BigradedModule:
    return BigradedModule(
        [((tag, l), M.degree_of(l)) for l in M.labels]
        + [(("D", l), (M.degree_of(l)[0] + dz, M.degree_of(l)[1])) for l in M.labels]
    )


def _add(acc: dict, key, c) -> None:
    acc[key] = acc.get(key, 0) + c


def double_algebra(A: CurvedAlgebraData) -> AssociativeAlgebra:
    """The algebra ``A + D A`` with ``D`` of degree 1, ``D^2 = -m0`` and
    ``x D - (-1)^|x| D x = m1(x)``."""
    M, R = A.carrier, A.ring
    Md = _doubled_module(M, 1, "A")
    m2, m1, m0 = A.m2, A.m1, A.m0

    def mult(a, b):
        return m2.row((a, b))

    def rule(label):
        (ta, a), (tb, b) = label
        acc: dict = {}
        za = M.z(a)
        if ta == "A" and tb == "A":
            for c, x in mult(a, b).items():
                _add(acc, ("A", c), x)
        elif ta == "A" and tb == "D":
            s = -1 if za % 2 else 1
            for c, x in mult(a, b).items():
                _add(acc, ("D", c), s * x)
            for a1, x in m1.row(a).items():
                for c, y in mult(a1, b).items():
                    _add(acc, ("A", c), x * y)
        elif ta == "D" and tb == "A":
            for c, x in mult(a, b).items():
                _add(acc, ("D", c), x)
        else:
            s = 1 if za % 2 else -1
            for k, x in m0.row(()).items():
                for ka, y in mult(k, a).items():
                    for c, u in mult(ka, b).items():
                        _add(acc, ("A", c), s * x * y * u)
            for a1, x in m1.row(a).items():
                for c, y in mult(a1, b).items():
                    _add(acc, ("D", c), x * y)
        return acc

    prod = GradedMap(tensor_power(Md, 2), Md, 0, R, rule=rule)
    eta = GradedMap(UNIT, Md, 0, R, {(): {("A", l): c for l, c in A.eta.row(()).items()}})
    return AssociativeAlgebra(Md, R, prod, eta)


def double_alg_morphism(f: CurvedAlgMorphism) -> GradedMap:
    """``a -> f1(a)``, ``D a -> f0 f1(a) + D f1(a)``."""
    A, B = f.source, f.target
    R = A.ring
    Ad, Bd = double_algebra(A), double_algebra(B)

    def rule(label):
        tag, a = label
        acc: dict = {}
        img = f.f1.row(a)
        for b, x in img.items():
            _add(acc, (tag, b), x)
        if tag == "D":
            for k, x in f.f0.row(()).items():
                for b, y in img.items():
                    for c, u in B.m2.row((k, b)).items():
                        _add(acc, ("A", c), x * y * u)
        return acc

    return GradedMap(Ad.carrier, Bd.carrier, 0, R, rule=rule)


def double_coalgebra(C: CurvedCoalgebraData) -> Coalgebra:
    """The mirror construction on ``C + C[1]``: labels ``("C", c)``, ``("D", c)``."""
    M, R = C.carrier, C.ring
    Md = _doubled_module(M, -1, "C")
    d2, d1, d0 = C.delta2, C.delta1, C.delta0
    one = identity(M, R)
    d3 = compose(d2, tensor(d2, one))

    def rule(label):
        tag, c = label
        acc: dict = {}
        if tag == "C":
            for (c1, c2), x in d2.row(c).items():
                _add(acc, (("C", c1), ("C", c2)), x)
                for e, y in d1.row(c1).items():
                    _add(acc, (("C", e), ("D", c2)), x * y)
            for (c1, c2, c3), x in d3.row(c).items():
                k = d0.row(c1).get((), 0)
                if k:
                    s = -1 if M.z(c2) % 2 else 1
                    _add(acc, (("D", c2), ("D", c3)), s * x * k)
        else:
            for (c1, c2), x in d2.row(c).items():
                _add(acc, (("D", c1), ("C", c2)), x)
                s = -1 if M.z(c1) % 2 else 1
                _add(acc, (("C", c1), ("D", c2)), s * x)
                for e, y in d1.row(c1).items():
                    _add(acc, (("D", e), ("D", c2)), x * y)
        return acc

    delta = GradedMap(Md, tensor_power(Md, 2), 0, R, rule=rule)
    eps = GradedMap(Md, UNIT, 0, R, {("C", l): C.eps.row(l) for l in M.labels})
    return Coalgebra(Md, R, delta, eps)


def double_coalg_morphism(g: CurvedCoalgMorphism) -> GradedMap:
    """``c -> g1(c) - sum g0(c') D g1(c'')``, ``D c -> D g1(c)``."""
    C, D = g.source, g.target
    R = C.ring
    Cd, Dd = double_coalgebra(C), double_coalgebra(D)

    def rule(label):
        tag, c = label
        acc: dict = {}
        for e, x in g.g1.row(c).items():
            _add(acc, (tag, e), x)
        if tag == "C":
            for (c1, c2), x in C.delta2.row(c).items():
                k = g.g0.row(c1).get((), 0)
                if k:
                    for e, y in g.g1.row(c2).items():
                        _add(acc, ("D", e), -k * x * y)
        return acc

    return GradedMap(Cd.carrier, Dd.carrier, 0, R, rule=rule)


# ---------------------------------------------------------------- composition


def identity_alg_morphism(A: CurvedAlgebraData) -> CurvedAlgMorphism:
    return CurvedAlgMorphism(A, A, identity(A.carrier, A.ring), GradedMap(UNIT, A.carrier, 1, A.ring, {}))


def identity_coalg_morphism(C: CurvedCoalgebraData) -> CurvedCoalgMorphism:
    return CurvedCoalgMorphism(C, C, identity(C.carrier, C.ring), GradedMap(C.carrier, UNIT, 1, C.ring, {}))


def compose_alg_morphisms(f: CurvedAlgMorphism, g: CurvedAlgMorphism) -> CurvedAlgMorphism:
    """``f`` then ``g``: ``(f1 g1, f0 g1 + g0)``."""
    if not f.target.carrier == g.source.carrier:
        raise StructuralError("morphisms are not composable")
    return CurvedAlgMorphism(f.source, g.target, f.f1 >> g.f1, (f.f0 >> g.f1) + g.f0)


def compose_coalg_morphisms(f: CurvedCoalgMorphism, g: CurvedCoalgMorphism) -> CurvedCoalgMorphism:
    """``f`` then ``g``: ``(f1 g1, f0 + f1 g0)``."""
    if not f.target.carrier == g.source.carrier:
        raise StructuralError("morphisms are not composable")
    return CurvedCoalgMorphism(f.source, g.target, f.g1 >> g.g1, f.g0 + (f.g1 >> g.g0))


# ---------------------------------------------------------------- shifted form


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


def _sigma_power_inverse(S: BigradedModule, n: int, ring: CoeffRing) -> GradedMap:
    """Inverse of ``sigma^(x)n : S^(x)n -> S[1]^(x)n``."""
    if n == 0:
        return identity(UNIT, ring)
    return invert_diagonal(tensor(*([sigma(S, 1, ring)] * n)).materialize())


@dataclass
class ShiftedAlgebra:
    """Operations ``b0, b1, b2`` (degree 1) on ``A[1]`` with ``eta_s``, ``v_s``."""

    carrier: BigradedModule
    ring: CoeffRing
    b: dict
    eta: GradedMap
    v: GradedMap | None = None


@dataclass
class ShiftedCoalgebra:
    """Operations ``xi0, xi1, xi2`` (degree 1) on ``C[-1]`` with ``eps_s``, ``w_s``."""

    carrier: BigradedModule
    ring: CoeffRing
    xi: dict
    eps: GradedMap
    w: GradedMap | None = None


def to_shifted_algebra(A: CurvedAlgebraData) -> ShiftedAlgebra:
    R, M = A.ring, A.carrier
    s = sigma(M, 1, R)
    ops = {0: A.m0, 1: A.m1, 2: A.m2}
    b = {n: (_sigma_power_inverse(M, n, R) >> ops[n] >> s).scale(_sign(n)) for n in ops}
    v = None if A.v is None else invert_diagonal(s) >> A.v
    return ShiftedAlgebra(shift(M, 1), R, b, A.eta >> s, v)


def from_shifted_algebra(S: ShiftedAlgebra) -> CurvedAlgebraData:
    R, M1 = S.ring, S.carrier
    M = shift(M1, -1)
    s = sigma(M, 1, R)
    s_inv = invert_diagonal(s)
    m = {}
    for n, bn in S.b.items():
        pw = identity(UNIT, R) if n == 0 else tensor(*([s] * n))
        m[n] = (pw >> bn >> s_inv).scale(_sign(n))
    v = None if S.v is None else s >> S.v
    return CurvedAlgebraData(M, R, _retarget(m[2], M), m[1], m[0], S.eta >> s_inv, v)


def _retarget(f: GradedMap, M: BigradedModule) -> GradedMap:
    return GradedMap(tensor_power(M, 2), M, f.degree, f.ring, rule=f.row)


def check_shifted_algebra(S: ShiftedAlgebra, max_n: int = 3) -> Report:
    R, M = S.ring, S.carrier
    one = identity(M, R)
    rep = Report("shifted curved algebra")
    for n in range(max_n + 1):
        terms = []
        for k, bk in S.b.items():
            for r in range(n - k + 1):
                t = n - k - r
                if r + 1 + t not in S.b:
                    continue
                inner = tensor(*([one] * r + [bk] + [one] * t)) if (r or t) else bk
                terms.append(inner >> S.b[r + 1 + t])
        src = tensor_power(M, n, M.max_weight)
        total = GradedMap(src, M, 2, R, {})
        for t in terms:
            total = total + GradedMap(src, M, 2, R, rule=t.row)
        rep.results.append(compare_maps(f"combined identity n={n}", total, GradedMap(src, M, 2, R, {})))
    rep.results.append(compare_maps("right shifted unit", tensor(one, S.eta) >> S.b[2], one))
    rep.results.append(compare_maps("left shifted unit", tensor(S.eta, one) >> S.b[2], one.scale(-1)))
    rep.results.append(compare_maps("shifted unit closed", S.eta >> S.b[1], GradedMap(UNIT, M, 0, R, {})))
    if S.v is not None:
        rep.results.append(compare_maps("shifted unit splitting", S.eta >> S.v, identity(UNIT, R)))
    return rep


def to_shifted_coalgebra(C: CurvedCoalgebraData) -> ShiftedCoalgebra:
    R, M = C.ring, C.carrier
    Ms = shift(M, -1)
    s = sigma(Ms, 1, R)  # C[-1] -> C
    ops = {0: C.delta0, 1: C.delta1, 2: C.delta2}
    xi = {}
    for n, d in ops.items():
        inv = identity(UNIT, R) if n == 0 else invert_diagonal(tensor(*([s] * n)).materialize())
        xi[n] = (s >> d >> inv).scale(_sign(n))
    w = None if C.w is None else C.w >> sigma(M, -1, R)
    return ShiftedCoalgebra(Ms, R, xi, s >> C.eps, w)


def from_shifted_coalgebra(S: ShiftedCoalgebra) -> CurvedCoalgebraData:
    R, Ms = S.ring, S.carrier
    M = shift(Ms, 1)
    s = sigma(Ms, 1, R)
    s_inv = sigma(M, -1, R)
    d = {}
    for n, x in S.xi.items():
        pw = identity(UNIT, R) if n == 0 else tensor(*([s] * n))
        d[n] = (s_inv >> x >> pw).scale(_sign(n))
    w = None if S.w is None else S.w >> s
    d2 = GradedMap(M, tensor_power(M, 2), 0, R, rule=d[2].row)
    return CurvedCoalgebraData(M, R, d2, d[1], d[0], s_inv >> S.eps, w)


def check_shifted_coalgebra(S: ShiftedCoalgebra, max_n: int = 3) -> Report:
    R, M = S.ring, S.carrier
    one = identity(M, R)
    rep = Report("shifted curved coalgebra")
    for n in range(max_n + 1):
        tgt = tensor_power(M, n)
        total = GradedMap(M, tgt, 2, R, {})
        for k, xk in S.xi.items():
            for r in range(n - k + 1):
                t = n - k - r
                if r + 1 + t not in S.xi:
                    continue
                inner = tensor(*([one] * r + [xk] + [one] * t)) if (r or t) else xk
                term = S.xi[r + 1 + t] >> inner
                total = total + GradedMap(M, tgt, 2, R, rule=term.row)
        rep.results.append(compare_maps(f"combined identity n={n}", total, GradedMap(M, tgt, 2, R, {})))
    rep.results.append(compare_maps("right shifted counit", S.xi[2] >> tensor(one, S.eps), one.scale(-1)))
    rep.results.append(compare_maps("left shifted counit", S.xi[2] >> tensor(S.eps, one), one))
    rep.results.append(compare_maps("shifted counit closed", S.xi[1] >> S.eps, GradedMap(M, UNIT, 0, R, {})))
    if S.w is not None:
        rep.results.append(compare_maps("shifted counit splitting", S.w >> S.eps, identity(UNIT, R)))
    return rep


def shifted_alg_morphism(f: CurvedAlgMorphism) -> tuple[GradedMap, GradedMap]:
    """``(sigma^-1 f1 sigma, f0 sigma)`` on the shifted carriers."""
    R = f.source.ring
    sA = sigma(f.source.carrier, 1, R)
    sB = sigma(f.target.carrier, 1, R)
    return invert_diagonal(sA) >> f.f1 >> sB, f.f0 >> sB


def shifted_coalg_morphism(g: CurvedCoalgMorphism) -> tuple[GradedMap, GradedMap]:
    """``(sigma g1 sigma^-1, sigma g0)`` on ``C[-1] -> D[-1]``."""
    R = g.source.ring
    C, D = g.source.carrier, g.target.carrier
    sC = sigma(shift(C, -1), 1, R)
    return sC >> g.g1 >> sigma(D, -1, R), sC >> g.g0


# ---------------------------------------------------------------- dualization


def dual_algebra(A: CurvedAlgebraData) -> CurvedCoalgebraData:
    """Transpose of a finite curved algebra.

    ``delta2 = m2^T``, ``delta1 = m1^T``, ``delta0 = -m0^T``, ``eps = eta^T``,
    ``w = v^T``; the minus sign on the curvature is the only one.
    """
    R = A.ring
    C = dual_module(A.carrier)
    d2 = transpose(A.m2)
    d2 = GradedMap(C, tensor_power(C, 2), 0, R, rule=d2.row)
    w = None if A.v is None else transpose(A.v)
    return CurvedCoalgebraData(C, R, d2, transpose(A.m1), transpose(A.m0).scale(-1), transpose(A.eta), w)


def dual_alg_morphism(f: CurvedAlgMorphism, C: CurvedCoalgebraData, D: CurvedCoalgebraData) -> CurvedCoalgMorphism:
    """``f : A -> B`` gives ``(f1^T, -f0^T) : B* -> A*``; pass the two duals."""
    return CurvedCoalgMorphism(D, C, transpose(f.f1), transpose(f.f0).scale(-1))


def transport_algebra(A: CurvedAlgebraData, phi: GradedMap, phi_inv: GradedMap) -> CurvedAlgebraData:
    """Move the structure along an isomorphism ``phi : A -> A'``.

    Afterwards ``(phi, 0)`` is an isomorphism of curved algebras.
    """
    R = A.ring
    M = phi.target
    m2 = tensor(phi_inv, phi_inv) >> A.m2 >> phi
    m2 = GradedMap(tensor_power(M, 2), M, 0, R, rule=m2.row).materialize()
    m1 = (phi_inv >> A.m1 >> phi).materialize()
    m0 = (A.m0 >> phi).materialize()
    eta = (A.eta >> phi).materialize()
    v = None if A.v is None else (phi_inv >> A.v).materialize()
    return CurvedAlgebraData(M, R, m2, m1, m0, eta, v, A.trusted_length)


# ---------------------------------------------------------------- splittings


@dataclass
class Splitting:
    """Image of an idempotent with its inclusion ``inc`` and projection ``proj``."""

    module: BigradedModule
    inc: GradedMap
    proj: GradedMap


def split_idempotent(e: GradedMap) -> Splitting:
    """Split a degree-0 idempotent ``e`` on ``M`` by exact row reduction.

    Generators of the image keep the label ``l`` of ``M`` when the basis row is
    the unit vector at ``l``; otherwise they are labelled ``("bar", i)``.
    """
    M, R = e.source, e.ring
    gens = []
    inc_rows = {}
    proj_rows = {}
    counter = 0
    for bd in sorted(M.ranks):
        labs = M.labels_at(bd)
        rows = [[e.row(s).get(t, 0) for t in labs] for s in labs]
        solver = RowSolver(rows, len(labs), R)
        basis = solver.rows
        names = []
        for r in basis:
            nz = [j for j, x in enumerate(r) if x]
            if len(nz) == 1 and r[nz[0]] == 1:
                name = labs[nz[0]]
            else:
                name = ("bar", counter)
                counter += 1
            names.append(name)
            gens.append((name, bd))
            inc_rows[name] = {labs[j]: x for j, x in enumerate(r) if x}
        # coordinates of x e in the echelon basis
        bsolver = RowSolver(basis, len(labs), R) if basis else None
        for s in labs:
            img = [e.row(s).get(t, 0) for t in labs]
            if not any(img):
                continue
            coords = bsolver.solve(img)
            if coords is None:
                raise StructuralError(f"map is not idempotent at bidegree {tuple(bd)}")
            proj_rows[s] = {names[i]: c for i, c in enumerate(coords) if c}
    Mb = BigradedModule(gens)
    return Splitting(Mb, GradedMap(Mb, M, 0, R, inc_rows), GradedMap(M, Mb, 0, R, proj_rows))


def algebra_splitting(A: CurvedAlgebraData) -> Splitting:
    """Complement of the unit: the image of ``1 - v eta``."""
    if A.v is None:
        raise StructuralError("the algebra has no splitting of the unit")
    one = identity(A.carrier, A.ring)
    return split_idempotent((one - (A.v >> A.eta)).materialize())


def coalgebra_splitting(C: CurvedCoalgebraData) -> Splitting:
    """Kernel of the counit: the image of ``1 - eps w``."""
    if C.w is None:
        raise StructuralError("the coalgebra has no splitting of the counit")
    one = identity(C.carrier, C.ring)
    return split_idempotent((one - (C.eps >> C.w)).materialize())


# ---------------------------------------------------------------- twists and quotients


def graded_commutator(A: CurvedAlgebraData, c: dict) -> GradedMap:
    """``x -> x c - (-1)^|x| c x`` for an element ``c`` of degree 1."""
    M, R = A.carrier, A.ring

    def rule(x):
        acc: dict = {}
        s = -1 if M.z(x) % 2 else 1
        for y, k in c.items():
            for t, u in A.m2.row((x, y)).items():
                _add(acc, t, k * u)
            for t, u in A.m2.row((y, x)).items():
                _add(acc, t, -s * k * u)
        return acc

    return GradedMap(M, M, 1, R, rule=rule)


def _element_map(A: CurvedAlgebraData, c: dict, degree: int) -> GradedMap:
    return GradedMap(UNIT, A.carrier, degree, A.ring, {(): c})


def twist_algebra(A: CurvedAlgebraData, c: dict) -> CurvedAlgebraData:
    """``m1 + ad_c`` and ``m0 - m1(c) - c c`` for ``c`` of bidegree (1, 0)."""
    R = A.ring
    cm = _element_map(A, c, 1)
    m1 = (A.m1 + graded_commutator(A, c)).materialize()
    m0 = (A.m0 - (cm >> A.m1) - (tensor(cm, cm) >> A.m2)).materialize()
    return CurvedAlgebraData(A.carrier, R, A.m2, m1, m0, A.eta, A.v, A.trusted_length)


def twist_morphism(A: CurvedAlgebraData, c: dict) -> CurvedAlgMorphism:
    """The isomorphism ``(id, -c) : A -> twist_algebra(A, c)``."""
    B = twist_algebra(A, c)
    return CurvedAlgMorphism(A, B, identity(A.carrier, A.ring), _element_map(A, c, 1).scale(-1).materialize())


def weight_quotient(A: CurvedAlgebraData, k: int) -> CurvedAlgMorphism:
    """Projection onto the quotient by the ideal of weights above ``k``."""
    M, R = A.carrier, A.ring
    keep = [l for l in M.labels if M.degree_of(l)[1] <= k]
    Q = BigradedModule((l, M.degree_of(l)) for l in keep)
    ks = set(keep)

    def restrict(f: GradedMap, src) -> dict:
        return {s: {t: c for t, c in f.row(s).items() if t in ks} for s in src}

    m2 = GradedMap(tensor_power(Q, 2), Q, 0, R, restrict(A.m2, tensor_power(Q, 2).labels))
    m1 = GradedMap(Q, Q, 1, R, restrict(A.m1, keep))
    m0 = GradedMap(UNIT, Q, 2, R, restrict(A.m0, [()]))
    eta = GradedMap(UNIT, Q, 0, R, restrict(A.eta, [()]))
    v = None if A.v is None else GradedMap(Q, UNIT, 0, R, {s: A.v.row(s) for s in keep})
    B = CurvedAlgebraData(Q, R, m2, m1, m0, eta, v, A.trusted_length)
    proj = GradedMap(M, Q, 0, R, {l: {l: 1} for l in keep})
    return CurvedAlgMorphism(A, B, proj, GradedMap(UNIT, Q, 1, R, {}))
