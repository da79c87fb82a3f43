"""Cobar and Bar constructions, twisting cochains and the adjunction check.

``cobar`` builds the tensor algebra on the shifted counit complement of a
curved coalgebra, truncated by weight (and by word length when the
complement has weight-0 generators; laws are then trusted only for short
words).  ``bar`` builds a curved homotopy coalgebra on the shifted unit
complement.  A twisting cochain ``C -> A`` corresponds both to an algebra map
``Cobar C -> A`` and to an element of ``CCoalg(C, Bar A)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .chcoalg import (
    CCoalgElement,
    CHCMorphism,
    CurvedHomotopyCoalgebraData,
    PlusEmbedding,
    ccoalg_left_action,
    ccoalg_right_action,
    check_ccoalg_element,
    embed_plus,
    embed_plus_morphism,
    element_to_morphism,
    morphism_to_element,
)
from .curved import (
    AxiomResult,
    CurvedAlgebraData,
    CurvedAlgMorphism,
    CurvedCoalgebraData,
    CurvedCoalgMorphism,
    Report,
    Splitting,
    algebra_splitting,
    check_alg_morphism,
    check_coalg_morphism,
    check_curved_algebra,
    check_curved_coalgebra,
    coalgebra_splitting,
    compare_maps,
    compose_alg_morphisms,
    compose_coalg_morphisms,
    shifted_alg_morphism,
    shifted_coalg_morphism,
    to_shifted_algebra,
    to_shifted_coalgebra,
)
from .gradedcore import (
    UNIT,
    BigradedModule,
    GradedMap,
    StructuralError,
    as_parts,
    from_parts,
    identity,
    shift,
    sigma,
    tensor,
    tensor_power,
)
from .tensorcoalg import ComponentFamily, TensorCoalgebra

__all__ = [
    "TwistingCochain",
    "CobarAlgebra",
    "BarCoalgebra",
    "cobar",
    "cobar_morphism",
    "bar",
    "bar_morphism",
    "twisting_defect",
    "is_twisting_cochain",
    "from_alg_morphism",
    "to_alg_morphism",
    "from_ccoalg_element",
    "to_ccoalg_element",
    "tw_left_action",
    "tw_right_action",
    "adjunction_transpose",
    "adjunction_inverse",
    "adjunction_check",
    "AdjunctionSample",
]


# ---------------------------------------------------------------- cobar


@dataclass
class CobarAlgebra(CurvedAlgebraData):
    """Cobar of ``coalgebra``; words in ``generators`` are the basis labels."""

    coalgebra: CurvedCoalgebraData | None = None
    generators: BigradedModule | None = None
    inc: GradedMap | None = None  # generators -> C[-1]
    proj: GradedMap | None = None  # C[-1] -> generators
    weight_cap: int | None = None
    arity_cap: int | None = None


def _shifted_splitting(sp: Splitting, n: int, ring) -> tuple[BigradedModule, GradedMap, GradedMap]:
    """The splitting moved along ``[n]``; degree 0 maps keep their rows."""
    G = shift(sp.module, n)
    M = shift(sp.inc.target, n)
    inc = GradedMap(G, M, 0, ring, sp.inc.rows)
    proj = GradedMap(M, G, 0, ring, sp.proj.rows)
    return G, inc, proj


def _word(lab, k: int) -> tuple:
    return tuple(as_parts(lab, k))


def cobar(C: CurvedCoalgebraData, weight_cap: int, arity_cap: int | None = None) -> CobarAlgebra:
    """The curved algebra ``Cobar C``, truncated at ``weight_cap``.

    When the counit complement has weight-0 generators an ``arity_cap`` is
    required; the result then has ``trusted_length = arity_cap - 2``.
    """
    if C.w is None:
        raise StructuralError("cobar needs a splitting of the counit")
    R = C.ring
    rep = check_curved_coalgebra(C)
    if not rep.ok:
        raise StructuralError(f"input fails {', '.join(rep.failed())}")
    sp = coalgebra_splitting(C)
    G, inc, proj = _shifted_splitting(sp, -1, R)
    S = to_shifted_coalgebra(C)
    try:
        T = TensorCoalgebra(G, weight_cap, arity_cap)
    except ValueError as exc:
        raise StructuralError(str(exc)) from None
    W = T.module
    trusted = None if arity_cap is None else arity_cap - 2

    # generator images: x -> sum_n in xi_n pr^n
    gen_image: dict = {}
    for x in G.labels:
        acc: dict = {}
        for n, xi in S.xi.items():
            comp = inc >> xi
            if n >= 1:
                comp = comp >> tensor(*([proj] * n))
            for lab, c in comp.row(x).items():
                wd = _word(lab, n)
                acc[wd] = acc.get(wd, 0) + c
        gen_image[x] = {k: v for k, v in acc.items() if R.norm(v)}

    def concat_rows():
        rows = {}
        for a, b in tensor_power(W, 2, weight_cap).labels:
            ab = a + b
            if ab in W:
                rows[(a, b)] = {ab: 1}
        return rows

    m2 = GradedMap(tensor_power(W, 2), W, 0, R, concat_rows(), validate=False)

    def d_rule(word):
        acc: dict = {}
        zs = [G.z(x) for x in word]
        for i, x in enumerate(word):
            sign = -1 if sum(zs[i + 1 :]) % 2 else 1
            for img, c in gen_image[x].items():
                new = word[:i] + img + word[i + 1 :]
                if new in W:
                    acc[new] = acc.get(new, 0) + sign * c
        return acc

    m1 = GradedMap(W, W, 1, R, rule=d_rule).materialize()
    # m0 = -(w (x) w + sum_n w xi_n) pr T
    m0_acc: dict = {}
    ww = tensor(S.w, S.w) >> tensor(proj, proj)
    for lab, c in ww.row(()).items():
        wd = _word(lab, 2)
        m0_acc[wd] = m0_acc.get(wd, 0) - c
    for n, xi in S.xi.items():
        comp = S.w >> xi
        if n >= 1:
            comp = comp >> tensor(*([proj] * n))
        for lab, c in comp.row(()).items():
            wd = _word(lab, n)
            m0_acc[wd] = m0_acc.get(wd, 0) - c
    m0 = GradedMap(UNIT, W, 2, R, {(): {k: v for k, v in m0_acc.items() if k in W}})
    eta = GradedMap(UNIT, W, 0, R, {(): {(): 1}})
    v = GradedMap(W, UNIT, 0, R, {(): {(): 1}})
    return CobarAlgebra(
        W, R, m2, m1, m0, eta, v, trusted,
        coalgebra=C, generators=G, inc=inc, proj=proj, weight_cap=weight_cap, arity_cap=arity_cap,
    )


def _multiplicative(source: CobarAlgebra, target: CurvedAlgebraData, on_gens: dict) -> GradedMap:
    """Extend generator images (elements of ``target``) multiplicatively."""
    R = source.ring
    unit = target.eta.row(())
    m2 = target.m2

    def rule(word):
        acc = dict(unit)
        for x in word:
            nxt: dict = {}
            img = on_gens.get(x, {})
            for a, c in acc.items():
                for b, d in img.items():
                    for t, e in m2.row((a, b)).items():
                        nxt[t] = nxt.get(t, 0) + c * d * e
            acc = {k: v for k, v in nxt.items() if R.norm(v)}
            if not acc:
                break
        return acc

    return GradedMap(source.carrier, target.carrier, 0, R, rule=rule).materialize()


def cobar_morphism(g: CurvedCoalgMorphism, CC: CobarAlgebra, CD: CobarAlgebra) -> CurvedAlgMorphism:
    """``Cobar g : Cobar C -> Cobar D``; pass the two cobar algebras."""
    R = CC.ring
    g1s, g0s = shifted_coalg_morphism(g)
    on_gens = {}
    for x in CC.generators.labels:
        img: dict = {}
        for y, c in (CC.inc >> g1s >> CD.proj).row(x).items():
            img[(y,)] = img.get((y,), 0) + c
        for _, c in (CC.inc >> g0s).row(x).items():
            img[()] = img.get((), 0) + c
        on_gens[x] = img
    f1 = _multiplicative(CC, CD, on_gens)
    S = to_shifted_coalgebra(CC.coalgebra)
    acc: dict = {}
    for _, c in (S.w >> g0s).row(()).items():
        acc[()] = acc.get((), 0) + c
    for y, c in (S.w >> g1s >> CD.proj).row(()).items():
        acc[(y,)] = acc.get((y,), 0) + c
    f0 = GradedMap(UNIT, CD.carrier, 1, R, {(): acc})
    return CurvedAlgMorphism(CC, CD, f1, f0)


# ---------------------------------------------------------------- bar


@dataclass
class BarCoalgebra(CurvedHomotopyCoalgebraData):
    algebra: CurvedAlgebraData | None = None
    inc: GradedMap | None = None  # Abar[1] -> A[1]
    proj: GradedMap | None = None  # A[1] -> Abar[1]


def bar(A: CurvedAlgebraData, weight_cap: int | None = None) -> BarCoalgebra:
    """``Bar A`` on ``Abar[1]`` with components ``in^n b_n pr`` and ``-in^n b_n v``."""
    if A.v is None:
        raise StructuralError("bar needs a splitting of the unit")
    rep = check_curved_algebra(A)
    if not rep.ok:
        raise StructuralError(f"input fails {', '.join(rep.failed())}")
    R = A.ring
    sp = algebra_splitting(A)
    X, inc, proj = _shifted_splitting(sp, 1, R)
    S = to_shifted_algebra(A)
    d1, d0 = {}, {}
    for n, b in S.b.items():
        ins = identity(UNIT, R) if n == 0 else tensor(*([inc] * n))
        d1[n] = (ins >> b >> proj).materialize()
        d0[n] = (ins >> b >> S.v).scale(-1).materialize()
        d1[n] = GradedMap(tensor_power(X, n, weight_cap), X, 1, R, d1[n].rows, validate=False)
        d0[n] = GradedMap(tensor_power(X, n, weight_cap), UNIT, 2, R, d0[n].rows, validate=False)
    delta1 = ComponentFamily(X, X, 1, R, d1, 2, weight_cap)
    delta0 = ComponentFamily(X, UNIT, 2, R, d0, 2, weight_cap)
    return BarCoalgebra(X, R, delta1, delta0, weight_cap, algebra=A, inc=inc, proj=proj)


def bar_morphism(f: CurvedAlgMorphism, BA: BarCoalgebra, BB: BarCoalgebra) -> CHCMorphism:
    """``Bar f`` with ``g1 = (f0 pr, in f1 pr)`` and ``g0 = (f0 v, in f1 v)``."""
    R = f.source.ring
    f1s, f0s = shifted_alg_morphism(f)
    vB = to_shifted_algebra(f.target).v
    cap = BA.weight_cap
    X, Y = BA.carrier, BB.carrier
    g1 = {
        0: GradedMap(UNIT, Y, 0, R, (f0s >> BB.proj).materialize().rows),
        1: GradedMap(X, Y, 0, R, (BA.inc >> f1s >> BB.proj).materialize().rows),
    }
    g0 = {
        0: GradedMap(UNIT, UNIT, 1, R, (f0s >> vB).materialize().rows),
        1: GradedMap(X, UNIT, 1, R, (BA.inc >> f1s >> vB).materialize().rows),
    }
    g1 = {k: m for k, m in g1.items() if m.rows}
    g0 = {k: m for k, m in g0.items() if m.rows}
    return CHCMorphism(
        BA, BB,
        ComponentFamily(X, Y, 0, R, g1, 1, cap),
        ComponentFamily(X, UNIT, 1, R, g0, 1, cap),
    )


# ---------------------------------------------------------------- twisting cochains


@dataclass
class TwistingCochain:
    source: CurvedCoalgebraData
    target: CurvedAlgebraData
    theta: GradedMap

    def __post_init__(self) -> None:
        if self.theta.degree != 1:
            raise StructuralError("a twisting cochain has degree 1")


def twisting_defect(theta: GradedMap, C: CurvedCoalgebraData, A: CurvedAlgebraData, labels=None) -> GradedMap:
    """``theta m1 + delta1 theta - delta0 eta - eps m0 + delta2 (theta (x) theta) m2``."""
    R = A.ring
    lhs = (theta >> A.m1) + (C.delta1 >> theta) - (C.delta0 >> A.eta) - (C.eps >> A.m0)
    quad = C.delta2 >> tensor(theta, theta) >> A.m2
    total = lhs + quad
    if labels is None:
        return total
    return GradedMap(C.carrier, A.carrier, 2, R, {s: total.row(s) for s in labels}, validate=False)


def is_twisting_cochain(t: TwistingCochain) -> Report:
    C, A = t.source, t.target
    rep = Report("twisting cochain")
    if t.theta.degree != 1:
        rep.results.append(AxiomResult("degree", False, {"reason": f"degree {t.theta.degree}"}))
        return rep
    lhs = (t.theta >> A.m1) + (C.delta1 >> t.theta)
    rhs = (C.delta0 >> A.eta) + (C.eps >> A.m0) - (C.delta2 >> tensor(t.theta, t.theta) >> A.m2)
    rep.results.append(compare_maps("twisting cochain equation", lhs, rhs))
    return rep


def from_alg_morphism(f: CurvedAlgMorphism) -> TwistingCochain:
    """``theta = pr sigma f1|gen + eps f0`` for ``f : Cobar C -> A``."""
    CC = f.source
    if not isinstance(CC, CobarAlgebra):
        raise StructuralError("the source must be a cobar algebra")
    C, A = CC.coalgebra, f.target
    R = C.ring
    sp = coalgebra_splitting(C)
    gens = GradedMap(CC.generators, A.carrier, 0, R, {x: f.f1.row((x,)) for x in CC.generators.labels})
    theta = (sp.proj >> sigma(sp.module, -1, R) >> gens) + (C.eps >> f.f0)
    return TwistingCochain(C, A, theta.materialize())


def to_alg_morphism(t: TwistingCochain, CC: CobarAlgebra) -> CurvedAlgMorphism:
    """Inverse of :func:`from_alg_morphism`: generators go to ``sigma in theta``."""
    C, A = t.source, t.target
    R = C.ring
    sp = coalgebra_splitting(C)
    on_gens_map = sigma(CC.generators, 1, R) >> sp.inc >> t.theta
    on_gens = {x: on_gens_map.row(x) for x in CC.generators.labels}
    f1 = _multiplicative(CC, A, on_gens)
    f0 = (C.w >> t.theta).materialize()
    return CurvedAlgMorphism(CC, A, f1, f0)


def from_ccoalg_element(e: CCoalgElement) -> TwistingCochain:
    """``theta = g1 sigma in + g0 eta`` for ``e`` into ``Bar A``."""
    BA = e.target
    if not isinstance(BA, BarCoalgebra):
        raise StructuralError("the target must be a bar construction")
    A = BA.algebra
    R = A.ring
    sp = algebra_splitting(A)
    theta = (e.g1_check >> sigma(BA.carrier, -1, R) >> sp.inc) + (e.g0 >> A.eta)
    return TwistingCochain(e.source, A, theta.materialize())


def to_ccoalg_element(t: TwistingCochain, BA: BarCoalgebra) -> CCoalgElement:
    A = t.target
    R = A.ring
    sp = algebra_splitting(A)
    g1 = (t.theta >> sp.proj >> sigma(sp.module, 1, R)).materialize()
    g1 = GradedMap(t.source.carrier, BA.carrier, 0, R, g1.rows)
    g0 = (t.theta >> A.v).materialize()
    return CCoalgElement(t.source, BA, g1, g0)


def tw_left_action(g: CurvedCoalgMorphism, t: TwistingCochain) -> TwistingCochain:
    """``g . theta = g1 theta + g0 eta``."""
    if not g.target.carrier == t.source.carrier:
        raise StructuralError("morphism target is not the cochain's source")
    theta = (g.g1 >> t.theta) + (g.g0 >> t.target.eta)
    return TwistingCochain(g.source, t.target, theta.materialize())


def tw_right_action(t: TwistingCochain, f: CurvedAlgMorphism) -> TwistingCochain:
    """``theta . f = theta f1 + eps f0``."""
    if not t.target.carrier == f.source.carrier:
        raise StructuralError("cochain target is not the morphism's source")
    theta = (t.theta >> f.f1) + (t.source.eps >> f.f0)
    return TwistingCochain(t.source, f.target, theta.materialize())


# ---------------------------------------------------------------- adjunction


def adjunction_transpose(f: CurvedAlgMorphism, BA: BarCoalgebra, E: PlusEmbedding) -> CurvedCoalgMorphism:
    """``Cobar C -> A`` to ``C -> Bar A`` (embedded as a curved coalgebra)."""
    return element_to_morphism(to_ccoalg_element(from_alg_morphism(f), BA), E)


def adjunction_inverse(g: CurvedCoalgMorphism, E: PlusEmbedding, CC: CobarAlgebra) -> CurvedAlgMorphism:
    e = morphism_to_element(g, E)
    return to_alg_morphism(from_ccoalg_element(e), CC)


def _require_plus_module(M: BigradedModule, what: str) -> None:
    for l in M.labels:
        if M.degree_of(l)[1] == 0:
            raise StructuralError(f"the positive-weight condition fails for {what}: {l!r} has weight 0")


@dataclass
class AdjunctionSample:
    """Morphisms for one adjunction check.

    ``f : Cobar C -> A``; ``j : C' -> C`` with ``cobar_j : Cobar C' -> Cobar C``;
    ``h : A -> A'``.
    """

    f: CurvedAlgMorphism
    j: CurvedCoalgMorphism | None = None
    cobar_j: CurvedAlgMorphism | None = None
    h: CurvedAlgMorphism | None = None
    extra: dict = field(default_factory=dict)


def adjunction_check(
    CC: CobarAlgebra,
    A: CurvedAlgebraData,
    sample: AdjunctionSample,
    weight_cap: int,
) -> Report:
    """Roundtrips and both naturality squares of the bar-cobar adjunction."""
    C = CC.coalgebra
    _require_plus_module(CC.generators, "the coalgebra")
    BA = bar(A, weight_cap)
    _require_plus_module(BA.carrier, "the algebra")
    E = embed_plus(BA, weight_cap)
    rep = Report("bar-cobar adjunction")
    f = sample.f
    g = adjunction_transpose(f, BA, E)
    rep.extend(_prefixed(check_coalg_morphism(g), "transposed morphism"))
    back = adjunction_inverse(g, E, CC)
    rep.results.append(compare_maps("roundtrip from algebra side f1", back.f1, f.f1))
    rep.results.append(compare_maps("roundtrip from algebra side f0", back.f0, f.f0))
    again = adjunction_transpose(back, BA, E)
    rep.results.append(compare_maps("roundtrip from coalgebra side g1", again.g1, g.g1))
    rep.results.append(compare_maps("roundtrip from coalgebra side g0", again.g0, g.g0))
    if sample.j is not None:
        CCp = sample.cobar_j.source
        lhs = adjunction_transpose(compose_alg_morphisms(sample.cobar_j, f), BA, E)
        rhs = compose_coalg_morphisms(sample.j, g)
        rep.results.append(compare_maps("naturality in the coalgebra g1", lhs.g1, rhs.g1))
        rep.results.append(compare_maps("naturality in the coalgebra g0", lhs.g0, rhs.g0))
        del CCp
    if sample.h is not None:
        Ap = sample.h.target
        BAp = bar(Ap, weight_cap)
        Ep = embed_plus(BAp, weight_cap)
        lhs = adjunction_transpose(compose_alg_morphisms(f, sample.h), BAp, Ep)
        bh = embed_plus_morphism(bar_morphism(sample.h, BA, BAp), E, Ep)
        rhs = compose_coalg_morphisms(g, bh)
        rep.results.append(compare_maps("naturality in the algebra g1", lhs.g1, rhs.g1))
        rep.results.append(compare_maps("naturality in the algebra g0", lhs.g0, rhs.g0))
    return rep


def _prefixed(rep: Report, prefix: str) -> Report:
    for r in rep.results:
        r.name = f"{prefix}: {r.name}"
    return rep
