"""Curved homotopy coalgebras given by components ``X^(x)m -> X`` and ``X^(x)m -> 1``.

Everything here is finite: the structure maps have finite support, so each
component equation involves finitely many terms.  Checks run over arities
``n <= n_max`` where the default ``n_max`` is past the point where every sum
is identically zero.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .curved import (
    AxiomResult,
    CurvedCoalgebraData,
    CurvedCoalgMorphism,
    Report,
    compare_maps,
)
from .gradedcore import (
    UNIT,
    BigradedModule,
    CoeffRing,
    GradedMap,
    StructuralError,
    as_parts,
    compose,
    from_parts,
    identity,
    tensor,
    tensor_power,
)
from .tensorcoalg import (
    ComponentFamily,
    TensorCoalgebra,
    cofree_lift,
    compose_morphism_components,
    compositions,
    compose_precoderivation,
    cut_comultiplication,
    identity_family,
    map_sum,
    tensor_all,
)

__all__ = [
    "CurvedHomotopyCoalgebraData",
    "CHCMorphism",
    "CCoalgElement",
    "check_chc",
    "check_chc_morphism",
    "check_ccoalg_element",
    "compose_chc",
    "identity_chc_morphism",
    "ccoalg_left_action",
    "ccoalg_right_action",
    "embed_plus",
    "embed_plus_morphism",
    "element_to_morphism",
    "morphism_to_element",
    "PlusEmbedding",
]


@dataclass
class CurvedHomotopyCoalgebraData:
    carrier: BigradedModule
    ring: CoeffRing
    delta1: ComponentFamily
    delta0: ComponentFamily
    weight_cap: int | None = None

    def __post_init__(self) -> None:
        X = self.carrier
        if self.delta1.degree != 1 or self.delta0.degree != 2:
            raise StructuralError("delta1 must have degree 1 and delta0 degree 2")
        if not (self.delta1.source == X and self.delta1.target == X):
            raise StructuralError("delta1 must be a family X^m -> X")
        if not (self.delta0.source == X and self.delta0.target.compatible(UNIT)):
            raise StructuralError("delta0 must be a family X^m -> 1")

    @property
    def default_n_max(self) -> int:
        return 2 * max(self.delta1.K, self.delta0.K) + 1


@dataclass
class CHCMorphism:
    source: CurvedHomotopyCoalgebraData
    target: CurvedHomotopyCoalgebraData
    g1: ComponentFamily
    g0: ComponentFamily

    def __post_init__(self) -> None:
        if self.g1.degree != 0 or self.g0.degree != 1:
            raise StructuralError("g1 must have degree 0 and g0 degree 1")


@dataclass
class CCoalgElement:
    """A pair ``(g1_check : C -> X, g0 : C -> 1)`` from a curved coalgebra."""

    source: CurvedCoalgebraData
    target: CurvedHomotopyCoalgebraData
    g1_check: GradedMap
    g0: GradedMap


# ---------------------------------------------------------------- component sums


def _identity_power(X: BigradedModule, n: int, ring: CoeffRing) -> list[GradedMap]:
    return [identity(X, ring)] * n


def insert_sum(xi: ComponentFamily, h: ComponentFamily, n: int, cap: int | None = None) -> GradedMap:
    """``sum_{a+k+c=n} (1^a (x) xi_k (x) 1^c) h_{a+1+c} : X^(x)n -> target``."""
    X, ring = xi.source, xi.ring
    src = tensor_power(X, n, cap)
    terms = []
    for k in xi.components:
        for a in range(n - k + 1):
            c = n - k - a
            if a + 1 + c not in h.components:
                continue
            inner = tensor_all(_identity_power(X, a, ring) + [xi.component(k)] + _identity_power(X, c, ring), ring)
            terms.append(compose(inner, h.component(a + 1 + c)))
    return map_sum(terms, src, h.target, xi.degree + h.degree, ring)


@lru_cache(maxsize=None)
def positive_compositions(total: int, cap: int) -> tuple[tuple[int, ...], ...]:
    """Ordered tuples of integers in ``[1, cap]`` summing to ``total``."""
    if total == 0:
        return ((),)
    out = []
    for first in range(1, min(cap, total) + 1):
        for rest in positive_compositions(total - first, cap):
            out.append((first,) + rest)
    return tuple(out)


def cut_sum(g: ComponentFamily, h: ComponentFamily, n: int, cap: int | None = None) -> GradedMap:
    """``sum_{k1+...+kl=n} (g_k1 (x) ... (x) g_kl) h_l``.

    Empty blocks are allowed; the sum is finite because ``h`` has finite support.
    """
    ring = g.ring
    src = tensor_power(g.source, n, cap)
    terms = []
    for l in sorted(h.components):
        for ks in compositions(n, l, g.K):
            if any(k not in g.components for k in ks):
                continue
            terms.append(compose(tensor_all([g.component(k) for k in ks], ring), h.component(l)))
    return map_sum(terms, src, h.target, g.degree + h.degree, ring)


def _scan(name: str, pairs) -> AxiomResult:
    """First failure over ``(n, lhs, rhs, labels)`` tuples."""
    for n, lhs, rhs, labels in pairs:
        r = compare_maps(name, lhs, rhs, labels)
        if not r.ok:
            r.counterexample = {"arity": n, **(r.counterexample or {})}
            return r
    return AxiomResult(name, True)


# ---------------------------------------------------------------- checkers


def check_chc(X: CurvedHomotopyCoalgebraData, n_max: int | None = None) -> Report:
    n_max = X.default_n_max if n_max is None else n_max
    M, R, cap = X.carrier, X.ring, X.weight_cap
    d1, d0 = X.delta1, X.delta0
    one = identity(M, R)

    def square_pairs():
        for n in range(n_max + 1):
            src = tensor_power(M, n, cap)
            lhs = insert_sum(d1, d1, n, cap)
            if n == 0:
                rhs = GradedMap(src, M, 2, R, {})
            else:
                rhs = tensor(one, d0.component(n - 1)) - tensor(d0.component(n - 1), one)
                rhs = GradedMap(src, M, 2, R, rule=rhs.row)
            yield n, lhs, rhs, src.labels

    def curvature_pairs():
        for n in range(n_max + 1):
            src = tensor_power(M, n, cap)
            yield n, insert_sum(d1, d0, n, cap), GradedMap(src, UNIT, 3, R, {}), src.labels

    rep = Report("curved homotopy coalgebra")
    rep.results.append(_scan("delta1^2 axiom", square_pairs()))
    rep.results.append(_scan("delta1 delta0 axiom", curvature_pairs()))
    return rep


def check_chc_morphism(g: CHCMorphism, n_max: int | None = None) -> Report:
    X, Y = g.source, g.target
    M, R = X.carrier, X.ring
    cap = X.weight_cap if Y.weight_cap is None else (Y.weight_cap if X.weight_cap is None else min(X.weight_cap, Y.weight_cap))
    if n_max is None:
        ks = [X.delta1.K, X.delta0.K, g.g1.K, g.g0.K]
        n_max = max(2 * max(ks) + 1, g.g1.K * max(Y.delta1.K, Y.delta0.K, 1))

    def diff_pairs():
        for n in range(n_max + 1):
            src = tensor_power(M, n, cap)
            terms = [insert_sum(X.delta1, g.g1, n, cap)]
            for m in range(n + 1):
                if m not in g.g0.components or n - m not in g.g1.components:
                    continue
                ids = tensor_all(_identity_power(M, n - m, R), R)
                terms.append(compose(tensor(g.g0.component(m), ids), g.g1.component(n - m)))
                terms.append(compose(tensor(ids, g.g0.component(m)), g.g1.component(n - m)).scale(-1))
            lhs = map_sum(terms, src, Y.carrier, 1, R)
            yield n, lhs, cut_sum(g.g1, Y.delta1, n, cap), src.labels

    def curv_pairs():
        for n in range(n_max + 1):
            src = tensor_power(M, n, cap)
            terms = [X.delta0.component(n), insert_sum(X.delta1, g.g0, n, cap).scale(-1)]
            for a in range(n + 1):
                c = n - a
                if a in g.g0.components and c in g.g0.components:
                    terms.append(tensor(g.g0.component(a), g.g0.component(c)).scale(-1))
            lhs = map_sum(terms, src, UNIT, 2, R)
            yield n, lhs, cut_sum(g.g1, Y.delta0, n, cap), src.labels

    rep = Report("curved homotopy coalgebra morphism")
    rep.results.append(_scan("differential equation", diff_pairs()))
    rep.results.append(_scan("curvature equation", curv_pairs()))
    return rep


def identity_chc_morphism(X: CurvedHomotopyCoalgebraData) -> CHCMorphism:
    fam = identity_family(X.carrier, X.ring, X.weight_cap)
    zero = ComponentFamily(X.carrier, UNIT, 1, X.ring, {}, 0, X.weight_cap)
    return CHCMorphism(X, X, fam, zero)


def compose_chc(f: CHCMorphism, g: CHCMorphism) -> CHCMorphism:
    """``f`` then ``g``: ``h1 = f1 g1`` and ``h0 = f0 + sum (f_k1 .. f_kl) g0_l``."""
    if not f.target.carrier == g.source.carrier:
        raise StructuralError("morphisms are not composable")
    h1 = compose_morphism_components(f.g1, g.g1)
    h0 = f.g0 + compose_precoderivation(f.g1, g.g0)
    h1 = _trim(h1)
    return CHCMorphism(f.source, g.target, h1, _trim(h0))


def _trim(fam: ComponentFamily) -> ComponentFamily:
    """Drop identically zero components and shrink the support bound."""
    comps = {k: c.materialize() for k, c in fam.components.items() if fam.nonzero(k)}
    top = max(comps, default=0)
    return ComponentFamily(fam.source, fam.target, fam.degree, fam.ring, comps, top, fam.weight_cap)


# ---------------------------------------------------------------- CCoalg bimodule


def _cofree(e: CCoalgElement):
    C = e.source
    return cofree_lift(C.carrier, C.delta2, C.eps, e.g1_check, C.ring)


def _lifted_sum(e: CCoalgElement, fam: ComponentFamily) -> GradedMap:
    """``sum_k Delta_k g^(x)k fam_k : C -> target``."""
    lift = _cofree(e)
    terms = [compose(lift(k), fam.component(k)) for k in sorted(fam.components)]
    return map_sum(terms, e.source.carrier, fam.target, fam.degree, e.source.ring)


def check_ccoalg_element(e: CCoalgElement) -> Report:
    C, X = e.source, e.target
    R = C.ring
    one = identity(C.carrier, R)
    rep = Report("CCoalg element")
    lhs = (C.delta1 >> e.g1_check) + (C.delta2 >> (tensor(e.g0, one) - tensor(one, e.g0)) >> e.g1_check)
    rep.results.append(compare_maps("differential equation", lhs, _lifted_sum(e, X.delta1)))
    lhs0 = C.delta0 - (C.delta1 >> e.g0) - (C.delta2 >> tensor(e.g0, e.g0))
    rep.results.append(compare_maps("curvature equation", lhs0, _lifted_sum(e, X.delta0)))
    return rep


def ccoalg_left_action(j: CurvedCoalgMorphism, e: CCoalgElement) -> CCoalgElement:
    """``j . e = (j1 g1, j0 + j1 g0)`` for ``j : C' -> C``."""
    if not j.target.carrier == e.source.carrier:
        raise StructuralError("morphism target is not the element's source")
    return CCoalgElement(j.source, e.target, (j.g1 >> e.g1_check).materialize(), (j.g0 + (j.g1 >> e.g0)).materialize())


def ccoalg_right_action(e: CCoalgElement, h: CHCMorphism) -> CCoalgElement:
    """``e . h = (sum Delta_k g^k h1_k, g0 + sum Delta_k g^k h0_k)``."""
    if not e.target.carrier == h.source.carrier:
        raise StructuralError("element target is not the morphism's source")
    g1 = _lifted_sum(e, h.g1).materialize()
    g0 = (e.g0 + _lifted_sum(e, h.g0)).materialize()
    return CCoalgElement(e.source, h.target, g1, g0)


# ---------------------------------------------------------------- the "+" embedding


@dataclass
class PlusEmbedding:
    """A curved homotopy coalgebra seen as a curved coalgebra on its
    (weight-truncated) tensor coalgebra."""

    source: CurvedHomotopyCoalgebraData
    tensor_coalgebra: TensorCoalgebra
    coalgebra: CurvedCoalgebraData


def _require_plus(X: CurvedHomotopyCoalgebraData) -> None:
    M = X.carrier
    bad = [l for l in M.labels if M.degree_of(l)[1] == 0]
    if bad:
        raise StructuralError(f"the positive-weight condition fails: {bad[0]!r} has weight 0")


def _piece(word: tuple, a: int, b: int):
    return from_parts(word[a:b])


def embed_plus(X: CurvedHomotopyCoalgebraData, weight_cap: int) -> PlusEmbedding:
    """``(XT, cut, lifted delta1, sum of delta0, pr0, inj0)`` truncated at ``weight_cap``."""
    _require_plus(X)
    if X.delta1.nonzero(0) or X.delta0.nonzero(0):
        raise StructuralError("arity-0 structure maps must vanish in the positive-weight setting")
    R, M = X.ring, X.carrier
    T = TensorCoalgebra(M, weight_cap)
    W = T.module
    d1, d0 = X.delta1, X.delta0

    def d1_rule(word):
        n = len(word)
        acc: dict = {}
        zs = [M.z(x) for x in word]
        for k, comp in d1.components.items():
            for a in range(n - k + 1):
                sign = -1 if sum(zs[a + k :]) % 2 else 1
                for y, c in comp.row(_piece(word, a, a + k)).items():
                    new = word[:a] + (y,) + word[a + k :]
                    acc[new] = acc.get(new, 0) + sign * c
        return acc

    def d0_rule(word):
        if len(word) not in d0.components:
            return {}
        return d0.component(len(word)).row(_piece(word, 0, len(word)))

    delta1 = GradedMap(W, W, 1, R, rule=d1_rule).materialize()
    delta0 = GradedMap(W, UNIT, 2, R, rule=d0_rule).materialize()
    delta2 = cut_comultiplication(T, 2, R)
    delta2 = GradedMap(W, tensor_power(W, 2), 0, R, rule=delta2.row)
    eps = GradedMap(W, UNIT, 0, R, {(): {(): 1}})
    w = GradedMap(UNIT, W, 0, R, {(): {(): 1}})
    C = CurvedCoalgebraData(W, R, delta2, delta1, delta0, eps, w)
    return PlusEmbedding(X, T, C)


def _lift_words(g1: ComponentFamily, word: tuple) -> dict:
    """Image of a word under the coalgebra morphism generated by ``g1``."""
    acc: dict = {}
    n = len(word)
    for ks in positive_compositions(n, max(g1.K, 1)):
        if any(k not in g1.components for k in ks):
            continue
        partial = {(): 1}
        pos = 0
        for k in ks:
            row = g1.component(k).row(_piece(word, pos, pos + k))
            pos += k
            partial = {p + (y,): c * d for p, c in partial.items() for y, d in row.items()}
            if not partial:
                break
        for p, c in partial.items():
            acc[p] = acc.get(p, 0) + c
    return acc


def embed_plus_morphism(g: CHCMorphism, EX: PlusEmbedding, EY: PlusEmbedding) -> CurvedCoalgMorphism:
    R = g.source.ring
    src, tgt = EX.coalgebra.carrier, EY.coalgebra.carrier
    g1 = GradedMap(src, tgt, 0, R, {w: _lift_words(g.g1, w) for w in src.labels})

    def g0_rule(word):
        if len(word) not in g.g0.components:
            return {}
        return g.g0.component(len(word)).row(_piece(word, 0, len(word)))

    g0 = GradedMap(src, UNIT, 1, R, rule=g0_rule).materialize()
    return CurvedCoalgMorphism(EX.coalgebra, EY.coalgebra, g1, g0)


def element_to_morphism(e: CCoalgElement, EX: PlusEmbedding) -> CurvedCoalgMorphism:
    """``(g1_check, g0) -> (sum_k Delta_k g1_check^(x)k, g0)`` into the embedded ``XT``."""
    C = e.source
    R = C.ring
    T = EX.tensor_coalgebra
    lift = _cofree(e)
    rows: dict = {}
    for k in range(T.max_length + 1):
        comp = lift(k)
        for s in C.carrier.labels:
            for lab, c in comp.row(s).items():
                word = tuple(as_parts(lab, k))
                rows.setdefault(s, {})
                rows[s][word] = rows[s].get(word, 0) + c
    g1 = GradedMap(C.carrier, EX.coalgebra.carrier, 0, R, rows)
    return CurvedCoalgMorphism(C, EX.coalgebra, g1, e.g0)


def morphism_to_element(f: CurvedCoalgMorphism, EX: PlusEmbedding) -> CCoalgElement:
    """``(f1, f0) -> (f1 pr1, f0)``."""
    R = f.source.ring
    X = EX.source
    rows = {}
    for s in f.source.carrier.labels:
        row = {w[0]: c for w, c in f.g1.row(s).items() if len(w) == 1}
        if row:
            rows[s] = row
    return CCoalgElement(f.source, X, GradedMap(f.source.carrier, X.carrier, 0, R, rows), f.g0)
