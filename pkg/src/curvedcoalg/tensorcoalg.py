"""Tensor coalgebras, component families and their lifts.

A component family ``f = (f_k : X^(x)k -> Y)`` with finite support lifts to a
morphism (or coderivation) of the completed tensor coalgebras.  The completed
objects are never built; a lifted map is handled through its blocks

    block(n, m) : X^(x)|m| -> Y^(x)|n|,   n, m multi-indices of equal length,

which are the components of ``pr_n`` of the lift restricted to the ``m``-th
factor of the source product.  Blocks vanish unless ``m <= K n``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Mapping, Sequence

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
    tensor_modules,
    tensor_power,
)
from .ordcat import MultiIndex, OrdMap, compose_ord, enumerate_maps, multi_indices, pushforward

__all__ = [
    "ComponentFamily",
    "TensorCoalgebra",
    "Evaluator",
    "map_sum",
    "tensor_all",
    "compositions",
    "cut_comultiplication",
    "iterated_comultiplication",
    "lift_morphism",
    "lift_coderivation",
    "compose_evaluators",
    "extract_components",
    "compose_morphism_components",
    "compose_precoderivation",
    "compose_postcoderivation",
    "square_coderivation",
    "cofree_lift",
    "identity_family",
    "check_naturality",
    "check_monoidality",
]


@lru_cache(maxsize=None)
def compositions(total: int, parts: int, cap: int) -> tuple[tuple[int, ...], ...]:
    """Ordered tuples of ``parts`` integers in ``[0, cap]`` summing to ``total``."""
    if parts == 0:
        return ((),) if total == 0 else ()
    out = []
    for first in range(min(cap, total) + 1):
        for rest in compositions(total - first, parts - 1, cap):
            out.append((first,) + rest)
    return tuple(out)


def map_sum(
    terms: Sequence[GradedMap],
    source: BigradedModule,
    target: BigradedModule,
    degree: int,
    ring: CoeffRing,
) -> GradedMap:
    """Sum of maps sharing a source and target up to weight truncation."""
    terms = list(terms)
    for t in terms:
        if t.degree != degree:
            raise StructuralError(f"summand of degree {t.degree}, expected {degree}")
    if not terms:
        return GradedMap(source, target, degree, ring, {})

    def rule(s):
        acc: dict = {}
        for t in terms:
            for u, c in t.row(s).items():
                acc[u] = acc.get(u, 0) + c
        return acc

    return GradedMap(source, target, degree, ring, rule=rule)


def tensor_all(maps: Sequence[GradedMap], ring: CoeffRing) -> GradedMap:
    """Koszul tensor of a list; the empty product is the identity of the unit."""
    if not maps:
        return identity(UNIT, ring)
    return tensor(*maps)


@dataclass
class ComponentFamily:
    """Finite family ``k -> (X^(x)k -> Y)`` of maps of a fixed degree."""

    source: BigradedModule
    target: BigradedModule
    degree: int
    ring: CoeffRing
    components: dict = field(default_factory=dict)
    support_bound: int | None = None
    weight_cap: int | None = None

    def __post_init__(self) -> None:
        comps = {}
        for k, f in self.components.items():
            k = int(k)
            if k < 0:
                raise ValueError("negative arity")
            if f.degree != self.degree:
                raise StructuralError(f"component {k} has degree {f.degree}, expected {self.degree}")
            if not f.source.compatible(tensor_power(self.source, k)) or not f.target.compatible(self.target):
                raise StructuralError(f"component {k} has the wrong source or target")
            comps[k] = f
        self.components = comps
        top = max(comps, default=0)
        if self.support_bound is None:
            self.support_bound = top
        elif top > self.support_bound:
            raise StructuralError(f"component {top} beyond support bound {self.support_bound}")

    @property
    def K(self) -> int:
        return self.support_bound

    def domain(self, k: int) -> BigradedModule:
        return tensor_power(self.source, k, self.weight_cap)

    def component(self, k: int) -> GradedMap:
        f = self.components.get(k)
        if f is None:
            zeros = self.__dict__.setdefault("_zeros", {})
            if k not in zeros:
                zeros[k] = GradedMap(self.domain(k), self.target, self.degree, self.ring, {})
            return zeros[k]
        return f

    def nonzero(self, k: int) -> bool:
        f = self.components.get(k)
        return f is not None and not f.is_zero(self.domain(k).labels)

    def __add__(self, other: "ComponentFamily") -> "ComponentFamily":
        return self._combine(other, 1)

    def __sub__(self, other: "ComponentFamily") -> "ComponentFamily":
        return self._combine(other, -1)

    def _combine(self, other: "ComponentFamily", sign: int) -> "ComponentFamily":
        if other.degree != self.degree:
            raise StructuralError("degrees differ")
        comps = {}
        for k in set(self.components) | set(other.components):
            comps[k] = self.component(k) + other.component(k).scale(sign)
        return ComponentFamily(
            self.source, self.target, self.degree, self.ring, comps,
            max(self.K, other.K), _cap(self.weight_cap, other.weight_cap),
        )

    def scale(self, c: int) -> "ComponentFamily":
        return ComponentFamily(
            self.source, self.target, self.degree, self.ring,
            {k: f.scale(c) for k, f in self.components.items()}, self.K, self.weight_cap,
        )

    def equals(self, other: "ComponentFamily", up_to: int | None = None) -> bool:
        return self.first_difference(other, up_to) is None

    def first_difference(self, other: "ComponentFamily", up_to: int | None = None):
        """First ``(k, label)`` where the families differ, or None."""
        top = max(self.K, other.K) if up_to is None else up_to
        cap = _cap(self.weight_cap, other.weight_cap)
        for k in range(top + 1):
            labels = tensor_power(self.source, k, cap).labels
            a, b = self.component(k), other.component(k)
            for s in labels:
                if a.row(s) != b.row(s):
                    return (k, s)
        return None


def _cap(*caps):
    cs = [c for c in caps if c is not None]
    return min(cs) if cs else None


def identity_family(X: BigradedModule, ring: CoeffRing, weight_cap: int | None = None) -> ComponentFamily:
    return ComponentFamily(X, X, 0, ring, {1: identity(X, ring)}, 1, weight_cap)


# ---------------------------------------------------------------- XT itself


class TensorCoalgebra:
    """The tensor coalgebra on ``X`` truncated by weight and, optionally, length.

    Basis labels are words: tuples of labels of ``X``.  A length cap is needed
    when ``X`` has weight-0 generators.
    """

    def __init__(self, X: BigradedModule, weight_cap: int, arity_cap: int | None = None) -> None:
        self.X = X
        self.weight_cap = weight_cap
        if arity_cap is None:
            if any(X.degree_of(l)[1] == 0 for l in X.labels):
                raise ValueError("an arity cap is required when X has weight-0 generators")
        self.arity_cap = arity_cap
        words = []
        n = 0
        while arity_cap is None or n <= arity_cap:
            level = list(tensor_power(X, n, weight_cap).labels) if n != 1 else [
                l for l in X.labels if X.degree_of(l)[1] <= weight_cap
            ]
            if not level and n > 0:
                break
            for lab in level:
                w = as_parts(lab, n)
                z = sum(X.degree_of(x)[0] for x in w)
                wt = sum(X.degree_of(x)[1] for x in w)
                words.append((tuple(w), (z, wt)))
            n += 1
        self.module = BigradedModule(words)

    def words(self, length: int | None = None) -> list[tuple]:
        if length is None:
            return list(self.module.labels)
        return [w for w in self.module.labels if len(w) == length]

    @property
    def max_length(self) -> int:
        return max((len(w) for w in self.module.labels), default=0)


def cut_comultiplication(T: TensorCoalgebra, arity: int, ring: CoeffRing) -> GradedMap:
    """``Delta_I : XT -> XT^(x)I``, splitting each word into ``I`` ordered blocks."""
    M = T.module
    target = tensor_power(M, arity, T.weight_cap)
    if arity == 0:
        return GradedMap(M, UNIT, 0, ring, {(): {(): 1}} if () in M else {})
    if arity == 1:
        return identity(M, ring)

    def rule(word):
        out = {}
        n = len(word)
        for cuts in itertools.combinations_with_replacement(range(n + 1), arity - 1):
            bounds = (0,) + cuts + (n,)
            lab = tuple(word[bounds[i] : bounds[i + 1]] for i in range(arity))
            out[lab] = out.get(lab, 0) + 1
        return out

    return GradedMap(M, target, 0, ring, rule=rule)


def iterated_comultiplication(
    C: BigradedModule,
    delta2: GradedMap,
    eps: GradedMap,
    arity: int,
    ring: CoeffRing,
    weight_cap: int | None = None,
) -> GradedMap:
    """``Delta_I`` of an ordinary coalgebra: ``Delta_{I} = Delta (Delta_{I-1} (x) 1)``."""
    if arity == 0:
        return eps
    if arity == 1:
        return identity(C, ring)
    out = delta2
    for k in range(3, arity + 1):
        step = tensor(delta2, *([identity(C, ring)] * (k - 2)))
        out = compose(out, step)
    tgt = tensor_power(C, arity, weight_cap)
    return GradedMap(C, tgt, 0, ring, rule=out.row)


# ---------------------------------------------------------------- evaluators


class Evaluator:
    """Blockwise description of a map of completed tensor coalgebras.

    ``blockfn(n, m)`` returns the block ``X^(x)|m| -> Y^(x)|n|`` or None for a
    zero block.  Blocks are cached.
    """

    def __init__(
        self,
        source: BigradedModule,
        target: BigradedModule,
        degree: int,
        ring: CoeffRing,
        support: int,
        blockfn: Callable[[MultiIndex, MultiIndex], GradedMap | None],
        weight_cap: int | None = None,
    ) -> None:
        self.source = source
        self.target = target
        self.degree = degree
        self.ring = ring
        self.support = support
        self.weight_cap = weight_cap
        self._fn = blockfn
        self._cache: dict = {}

    def block(self, n: Iterable[int], m: Iterable[int]) -> GradedMap:
        n, m = MultiIndex(n), MultiIndex(m)
        if len(n) != len(m):
            raise ValueError("multi-indices of different lengths")
        key = (n, m)
        if key not in self._cache:
            src = tensor_power(self.source, m.norm, self.weight_cap)
            tgt = tensor_power(self.target, n.norm, self.weight_cap)
            b = None
            if all(a <= self.support * b_ for a, b_ in zip(m, n)):
                b = self._fn(n, m)
            if b is None:
                b = GradedMap(src, tgt, self.degree, self.ring, {})
            else:
                b = GradedMap(src, tgt, self.degree, self.ring, rule=b.row)
            self._cache[key] = b
        return self._cache[key]

    def support_indices(self, n: Iterable[int]) -> list[MultiIndex]:
        """All ``m <= K n`` (the finite support of ``pr_n``)."""
        n = MultiIndex(n)
        ranges = [range(self.support * k + 1) for k in n]
        return [MultiIndex(t) for t in itertools.product(*ranges)]

    def component(self, I: int, n: Iterable[int]) -> dict:
        n = MultiIndex(n)
        if len(n) != I:
            raise ValueError("multi-index length must equal I")
        return {m: self.block(n, m) for m in self.support_indices(n)}


def _groups(n: MultiIndex, m: MultiIndex, K: int) -> Iterator[tuple[int, ...]]:
    """All ``k in [K]^|n|`` whose pushforward along ``sqcup n_i -> I`` is ``m``."""
    per = [compositions(mi, ni, K) for ni, mi in zip(n, m)]
    for choice in itertools.product(*per):
        yield tuple(x for part in choice for x in part)


def lift_morphism(f: ComponentFamily) -> Evaluator:
    """Blocks of the homotopy-coalgebra morphism determined by ``f`` (degree 0)."""
    if f.degree != 0:
        raise StructuralError("a morphism family must have degree 0")
    K = f.K

    present = f.components

    def fn(n, m):
        terms = [
            tensor_all([f.component(k) for k in ks], f.ring)
            for ks in _groups(n, m, K)
            if all(k in present for k in ks)
        ]
        if not terms:
            return None
        src = tensor_power(f.source, m.norm, f.weight_cap)
        tgt = tensor_power(f.target, n.norm, f.weight_cap)
        return map_sum(terms, src, tgt, 0, f.ring)

    return Evaluator(f.source, f.target, 0, f.ring, K, fn, f.weight_cap)


def lift_coderivation(f: ComponentFamily, g: ComponentFamily, xi: ComponentFamily) -> Evaluator:
    """Blocks of the ``(f, g)``-coderivation determined by ``xi``."""
    if f.degree or g.degree:
        raise StructuralError("f and g must have degree 0")
    for fam in (g, xi):
        if not (fam.source == f.source and fam.target == f.target):
            raise StructuralError("families live on different carriers")
    K = max(f.K, g.K, xi.K)
    ring = xi.ring
    cap = _cap(f.weight_cap, g.weight_cap, xi.weight_cap)

    def fn(n, m):
        terms = []
        for ks in _groups(n, m, K):
            for u in range(len(ks)):
                if ks[u] not in xi.components:
                    continue
                if any(k not in f.components for k in ks[:u]) or any(k not in g.components for k in ks[u + 1 :]):
                    continue
                maps = (
                    [f.component(k) for k in ks[:u]]
                    + [xi.component(ks[u])]
                    + [g.component(k) for k in ks[u + 1 :]]
                )
                terms.append(tensor(*maps))
        if not terms:
            return None
        return map_sum(
            terms, tensor_power(xi.source, m.norm, cap), tensor_power(xi.target, n.norm, cap), xi.degree, ring
        )

    return Evaluator(xi.source, xi.target, xi.degree, ring, K, fn, cap)


def compose_evaluators(a: Evaluator, b: Evaluator) -> Evaluator:
    """``a`` followed by ``b``, summing over the intermediate support."""
    if not a.target == b.source:
        raise StructuralError("evaluators are not composable")
    cap = _cap(a.weight_cap, b.weight_cap)

    def fn(n, m):
        terms = []
        for l in b.support_indices(n):
            if all(x <= a.support * y for x, y in zip(m, l)):
                terms.append(compose(a.block(l, m), b.block(n, l)))
        return map_sum(
            terms, tensor_power(a.source, m.norm, cap), tensor_power(b.target, n.norm, cap),
            a.degree + b.degree, a.ring,
        )

    return Evaluator(a.source, b.target, a.degree + b.degree, a.ring, a.support * b.support, fn, cap)


def extract_components(E: Evaluator, K: int | None = None) -> ComponentFamily:
    """Recover the family from ``pr_1`` of the ``I = 1`` component."""
    K = E.support if K is None else K
    comps = {k: E.block((1,), (k,)) for k in range(K + 1)}
    comps = {k: c for k, c in comps.items() if not c.is_zero()}
    return ComponentFamily(E.source, E.target, E.degree, E.ring, comps, K, E.weight_cap)


# ---------------------------------------------------------------- composition formulas


def _check_chain(*pairs):
    for a, b in pairs:
        if not a == b:
            raise StructuralError("carriers do not chain")


def compose_morphism_components(f: ComponentFamily, g: ComponentFamily) -> ComponentFamily:
    """``h_m = sum (f_k1 (x) ... (x) f_kl) g_l`` over ``k1+...+kl = m``."""
    _check_chain((f.target, g.source))
    K, L = f.K, g.K
    cap = _cap(f.weight_cap, g.weight_cap)
    comps = {}
    for m in range(K * L + 1):
        terms = []
        for l in range(L + 1):
            if l not in g.components:
                continue
            for ks in compositions(m, l, K):
                terms.append(compose(tensor_all([f.component(k) for k in ks], f.ring), g.component(l)))
        if terms:
            comps[m] = map_sum(terms, tensor_power(f.source, m, cap), g.target, 0, f.ring)
    return ComponentFamily(f.source, g.target, 0, f.ring, comps, K * L, cap)


def compose_precoderivation(h: ComponentFamily, xi: ComponentFamily) -> ComponentFamily:
    """Components of ``h xi``: ``theta_m = sum (h_k1 (x) ... (x) h_kl) xi_l``."""
    _check_chain((h.target, xi.source))
    K, L = h.K, xi.K
    cap = _cap(h.weight_cap, xi.weight_cap)
    comps = {}
    for m in range(K * L + 1):
        terms = []
        for l in range(L + 1):
            if l not in xi.components:
                continue
            for ks in compositions(m, l, K):
                terms.append(compose(tensor_all([h.component(k) for k in ks], h.ring), xi.component(l)))
        if terms:
            comps[m] = map_sum(terms, tensor_power(h.source, m, cap), xi.target, xi.degree, h.ring)
    return ComponentFamily(h.source, xi.target, xi.degree, h.ring, comps, K * L, cap)


def compose_postcoderivation(
    f: ComponentFamily, g: ComponentFamily, xi: ComponentFamily, h: ComponentFamily
) -> ComponentFamily:
    """Components of ``xi h`` for an ``(f, g)``-coderivation ``xi``:
    ``theta_m = sum (f_k1 .. f_ka (x) xi_n (x) g_l1 .. g_lc) h_{a+1+c}``."""
    _check_chain((f.source, xi.source), (g.source, xi.source), (xi.target, h.source))
    K = max(f.K, g.K, xi.K)
    L = h.K
    cap = _cap(f.weight_cap, g.weight_cap, xi.weight_cap, h.weight_cap)
    comps = {}
    for m in range(K * L + 1):
        terms = []
        for r in range(1, L + 1):
            if r not in h.components:
                continue
            for ks in compositions(m, r, K):
                for u in range(r):
                    maps = (
                        [f.component(k) for k in ks[:u]]
                        + [xi.component(ks[u])]
                        + [g.component(k) for k in ks[u + 1 :]]
                    )
                    terms.append(compose(tensor(*maps), h.component(r)))
        if terms:
            comps[m] = map_sum(terms, tensor_power(xi.source, m, cap), h.target, xi.degree, xi.ring)
    return ComponentFamily(xi.source, h.target, xi.degree, xi.ring, comps, K * L, cap)


def square_coderivation(xi: ComponentFamily) -> ComponentFamily:
    """Components of the square of a coderivation of odd degree (``f = g = id``)."""
    if xi.degree % 2 == 0:
        raise StructuralError("square_coderivation needs an odd degree")
    _check_chain((xi.source, xi.target))
    X, ring, K = xi.source, xi.ring, xi.K
    one = identity(X, ring)
    comps = {}
    top = max(2 * K - 1, 0)
    for m in range(top + 1):
        terms = []
        for r in range(1, K + 1):
            if r not in xi.components:
                continue
            for a in range(r):
                c = r - 1 - a
                n = m - a - c
                if n < 0 or n > K or n not in xi.components:
                    continue
                inner = tensor_all([one] * a + [xi.component(n)] + [one] * c, ring)
                terms.append(compose(inner, xi.component(r)))
        if terms:
            comps[m] = map_sum(terms, tensor_power(X, m, xi.weight_cap), X, 2 * xi.degree, ring)
    return ComponentFamily(X, X, 2 * xi.degree, ring, comps, top, xi.weight_cap)


def cofree_lift(
    C: BigradedModule,
    delta2: GradedMap,
    eps: GradedMap,
    t: GradedMap,
    ring: CoeffRing,
    weight_cap: int | None = None,
) -> Callable[[int], GradedMap]:
    """``I -> Delta_I t^(x)I : C -> X^(x)I``, the components of the cofree lift."""
    if t.degree != 0:
        raise StructuralError("the map to the cogenerators must have degree 0")
    cache: dict = {}

    def component(I: int) -> GradedMap:
        if I not in cache:
            dI = iterated_comultiplication(C, delta2, eps, I, ring, weight_cap)
            cache[I] = compose(dI, tensor_all([t] * I, ring))
        return cache[I]

    return component


# ---------------------------------------------------------------- diagram checks


def _relabel_sum(blocks: Iterable[tuple[MultiIndex, GradedMap]]) -> dict:
    out: dict = {}
    for key, b in blocks:
        out.setdefault(key, []).append(b)
    return out


def check_naturality(E: Evaluator, max_I: int = 3, max_J: int = 3, max_norm: int = 3):
    """Compare ``E(J) pr_{phi_* n}`` with ``XT(phi) E(I) pr_n`` for all small ``phi``.

    Returns None on success, else ``(phi, n, m)`` where the blocks differ.
    """
    for I in range(max_I + 1):
        for J in range(max_J + 1):
            for phi in enumerate_maps(I, J):
                for n in multi_indices(I, max_norm):
                    pn = pushforward(phi, n)
                    grouped: dict = {}
                    for m in E.support_indices(n):
                        grouped.setdefault(pushforward(phi, m), []).append(E.block(n, m))
                    for mp in E.support_indices(pn):
                        lhs = E.block(pn, mp)
                        rhs = grouped.pop(mp, [])
                        rhs_sum = map_sum(rhs, lhs.source, lhs.target, E.degree, E.ring)
                        if lhs.first_difference(rhs_sum) is not None:
                            return (phi, n, mp)
                    for mp, rest in grouped.items():
                        for b in rest:
                            if not b.is_zero() and not _sum_zero(rest):
                                return (phi, n, mp)
    return None


def _sum_zero(maps):
    s = map_sum(maps, maps[0].source, maps[0].target, maps[0].degree, maps[0].ring)
    return s.is_zero()


def check_monoidality(
    E: Evaluator,
    max_I: int = 3,
    max_N: int = 3,
    max_norm: int = 3,
    left: Evaluator | None = None,
    right: Evaluator | None = None,
):
    """Compare ``(x)_i E(N_i) pr_{m^i}`` with ``E(N) pr_m`` across the concatenation.

    For an ``(f, g)``-coderivation pass the lifts of ``f`` and ``g`` as ``left``
    and ``right``; the left side then becomes the sum over the slot holding ``E``.
    Returns None on success, else the offending ``(m parts, l parts)``.
    """
    coder = left is not None
    for I in range(max_I + 1):
        for Ns in itertools.product(range(max_N + 1), repeat=I):
            if sum(Ns) > max_N:
                continue
            for m in multi_indices(sum(Ns), max_norm):
                parts = []
                i = 0
                for N in Ns:
                    parts.append(MultiIndex(m[i : i + N]))
                    i += N
                for ls in itertools.product(*(E.support_indices(p) for p in parts)):
                    l = MultiIndex(x for part in ls for x in part)
                    rhs = E.block(m, l)
                    if coder:
                        terms = []
                        for v in range(I):
                            maps = (
                                [left.block(p, q) for p, q in zip(parts[:v], ls[:v])]
                                + [E.block(parts[v], ls[v])]
                                + [right.block(p, q) for p, q in zip(parts[v + 1 :], ls[v + 1 :])]
                            )
                            terms.append(_reindex(tensor_all(maps, E.ring), rhs))
                        lhs = map_sum(terms, rhs.source, rhs.target, E.degree, E.ring)
                    else:
                        lhs = _reindex(tensor_all([E.block(p, q) for p, q in zip(parts, ls)], E.ring), rhs)
                    if rhs.first_difference(lhs) is not None:
                        return (tuple(parts), tuple(ls))
    return None


def _reindex(f: GradedMap, like: GradedMap) -> GradedMap:
    return GradedMap(like.source, like.target, f.degree, f.ring, rule=f.row)
