"""Exact bigraded linear algebra.

Modules are free with a finite labelled basis, every label carrying a
bidegree ``(z, w)``.  Maps act on the right (``x -> x f``) and are stored as
sparse rows ``{source label: {target label: coefficient}}``.  Rows may be
computed lazily through a rule and are cached on first use.

Tensor products are strict: a tensor module with ``k != 1`` factors labels its
basis by flat ``k``-tuples, the unit has the single label ``()`` and a product
with exactly one factor is that factor.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Iterator, Mapping, NamedTuple

__all__ = [
    "CoeffRing",
    "Integers",
    "PrimeField",
    "Bidegree",
    "BigradedModule",
    "GradedMap",
    "StructuralError",
    "UNIT",
    "compose",
    "tensor",
    "tensor_modules",
    "tensor_power",
    "shift",
    "sigma",
    "shift_map",
    "identity",
    "zero_map",
    "direct_sum",
    "dual_module",
    "transpose",
    "invert_diagonal",
    "as_parts",
    "from_parts",
]

Label = Hashable
Row = dict


class StructuralError(ValueError):
    """Raised when shapes, degrees or carriers do not match."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class CoeffRing:
    """Either the integers (``p is None``) or the prime field of order ``p``."""

    p: int | None = None

    def __post_init__(self) -> None:
        if self.p is not None:
            if not isinstance(self.p, int) or not (2 <= self.p < 2**16) or not _is_prime(self.p):
                raise ValueError(f"not a prime below 2^16: {self.p!r}")

    @property
    def kind(self) -> str:
        return "integers" if self.p is None else "prime_field"

    @property
    def is_field(self) -> bool:
        return self.p is not None

    def norm(self, x: int) -> int:
        return x % self.p if self.p is not None else x

    def inv(self, x: int) -> int:
        if self.p is not None:
            x %= self.p
            if x == 0:
                raise ZeroDivisionError("zero has no inverse")
            return pow(x, -1, self.p)
        if x in (1, -1):
            return x
        raise ZeroDivisionError(f"{x} is not a unit in ZZ")

    def __repr__(self) -> str:
        return "ZZ" if self.p is None else f"GF({self.p})"


def Integers() -> CoeffRing:
    return CoeffRing(None)


def PrimeField(p: int) -> CoeffRing:
    return CoeffRing(p)


class _BidegreeBase(NamedTuple):
    z: int
    w: int


class Bidegree(_BidegreeBase):
    """Cohomological degree ``z`` and weight ``w >= 0``."""

    __slots__ = ()

    def __new__(cls, z: int, w: int) -> "Bidegree":
        if w < 0:
            raise ValueError(f"weight must be non-negative, got {w}")
        return super().__new__(cls, int(z), int(w))


def as_parts(label: Label, k: int) -> tuple:
    """Split a label of a ``k``-fold tensor module into its factor labels."""
    if k == 1:
        return (label,)
    return label


def from_parts(parts: tuple) -> Label:
    if len(parts) == 1:
        return parts[0]
    return parts


class BigradedModule:
    """Free module of finite rank given by labelled generators.

    ``basis`` is an iterable of ``(label, (z, w))`` pairs.  Generators are kept
    in a canonical order: sorted by bidegree, ties broken by the given order.
    """

    __slots__ = ("_deg", "_labels", "_hash")

    nfactors = 1

    def __init__(self, basis: Iterable[tuple[Label, tuple[int, int]]] = ()) -> None:
        deg: dict = {}
        for label, bd in basis:
            z, w = bd
            if w < 0:
                raise ValueError(f"negative weight for generator {label!r}")
            if label in deg:
                raise ValueError(f"duplicate generator {label!r}")
            deg[label] = Bidegree(z, w)
        order = sorted(range(len(deg)), key=lambda i, v=list(deg.values()): v[i])
        keys = list(deg)
        self._labels = tuple(keys[i] for i in order)
        self._deg = {k: deg[k] for k in self._labels}
        self._hash = None

    @classmethod
    def from_ranks(cls, ranks: Mapping[tuple[int, int], int]) -> "BigradedModule":
        basis = []
        for bd in sorted(ranks):
            r = ranks[bd]
            if r < 0:
                raise ValueError("negative rank")
            basis.extend((None, bd) for _ in range(r))
        return cls((i, bd) for i, (_, bd) in enumerate(basis))

    # -- basic queries
    @property
    def factors(self) -> tuple["BigradedModule", ...]:
        return (self,)

    @property
    def weight_cap(self) -> int | None:
        return None

    @property
    def labels(self) -> tuple:
        return self._labels

    def degree_of(self, label: Label) -> Bidegree:
        return self._deg[label]

    def z(self, label: Label) -> int:
        return self._deg[label][0]

    def __contains__(self, label: Label) -> bool:
        return label in self._deg

    def __iter__(self) -> Iterator[Label]:
        return iter(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def ranks(self) -> dict[Bidegree, int]:
        out: dict = {}
        for lab in self.labels:
            bd = self.degree_of(lab)
            out[bd] = out.get(bd, 0) + 1
        return out

    @property
    def max_weight(self) -> int:
        return max((self.degree_of(l)[1] for l in self.labels), default=0)

    def labels_at(self, bd: tuple[int, int]) -> list:
        return [l for l in self.labels if self.degree_of(l) == bd]

    def _key(self):
        return ("plain", frozenset(self._deg.items()))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, BigradedModule):
            return NotImplemented
        return hash(self) == hash(other) and self._key() == other._key()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def compatible(self, other: "BigradedModule") -> bool:
        """Equal up to weight truncation."""
        if self is other:
            return True
        return self == other

    def __repr__(self) -> str:
        r = ", ".join(f"{tuple(b)}:{n}" for b, n in sorted(self.ranks.items()))
        return f"BigradedModule({{{r}}})"


class TensorModule(BigradedModule):
    """Strict tensor product of plain modules, optionally truncated by weight."""

    __slots__ = ("_factors", "_cap", "_lab_cache", "_rank_cache")

    def __init__(self, factors: tuple[BigradedModule, ...], cap: int | None = None) -> None:
        self._factors = tuple(factors)
        self._cap = cap
        self._lab_cache = None
        self._hash = None
        if len(self._factors) == 1:
            raise ValueError("a one-factor product is the factor itself")

    @property
    def nfactors(self) -> int:  # type: ignore[override]
        return len(self._factors)

    @property
    def factors(self) -> tuple[BigradedModule, ...]:
        return self._factors

    @property
    def weight_cap(self) -> int | None:
        return self._cap

    def degree_of(self, label: Label) -> Bidegree:
        z = w = 0
        for f, l in zip(self._factors, label):
            a, b = f.degree_of(l)
            z += a
            w += b
        return Bidegree(z, w)

    def z(self, label: Label) -> int:
        return sum(f.z(l) for f, l in zip(self._factors, label))

    def __contains__(self, label: Label) -> bool:
        if not isinstance(label, tuple) or len(label) != len(self._factors):
            return False
        w = 0
        for f, l in zip(self._factors, label):
            if l not in f:
                return False
            w += f.degree_of(l)[1]
        return self._cap is None or w <= self._cap

    def iter_labels(self, max_weight: int | None = None) -> Iterator[tuple]:
        """Generate labels in lexicographic factor order, pruned by weight."""
        cap = self._cap
        if max_weight is not None:
            cap = max_weight if cap is None else min(cap, max_weight)
        facs = self._factors
        if cap is None:
            yield from itertools.product(*(f.labels for f in facs))
            return
        minw = [min((f.degree_of(l)[1] for l in f.labels), default=0) for f in facs]
        tail = [0] * (len(facs) + 1)
        for i in range(len(facs) - 1, -1, -1):
            tail[i] = tail[i + 1] + minw[i]

        def rec(i: int, acc: tuple, w: int):
            if i == len(facs):
                yield acc
                return
            for l in facs[i].labels:
                ww = w + facs[i].degree_of(l)[1]
                if ww + tail[i + 1] <= cap:
                    yield from rec(i + 1, acc + (l,), ww)

        if any(len(f.labels) == 0 for f in facs):
            return
        yield from rec(0, (), 0)

    @property
    def labels(self) -> tuple:
        if self._lab_cache is None:
            labs = list(self.iter_labels())
            labs.sort(key=self.degree_of)
            self._lab_cache = tuple(labs)
        return self._lab_cache

    def _key(self):
        return ("tensor", tuple(f._key() for f in self._factors), self._cap)

    def compatible(self, other: BigradedModule) -> bool:
        if self is other:
            return True
        if not isinstance(other, TensorModule):
            return False
        return len(self._factors) == len(other._factors) and all(
            a == b for a, b in zip(self._factors, other._factors)
        )

    def __repr__(self) -> str:
        cap = "" if self._cap is None else f", cap={self._cap}"
        return f"TensorModule({len(self._factors)} factors{cap})"


UNIT = TensorModule(())


def _min_cap(*caps: int | None) -> int | None:
    cs = [c for c in caps if c is not None]
    return min(cs) if cs else None


def tensor_modules(*mods: BigradedModule, cap: int | None = None) -> BigradedModule:
    """Flattened tensor product; the unit is absorbed."""
    facs: list[BigradedModule] = []
    caps = [cap]
    for m in mods:
        facs.extend(m.factors)
        caps.append(m.weight_cap)
    if len(facs) == 1:
        return facs[0]
    return TensorModule(tuple(facs), _min_cap(*caps))


def tensor_power(M: BigradedModule, n: int, weight_cap: int | None = None) -> BigradedModule:
    """``M`` tensored with itself ``n`` times, dropping weights above the cap."""
    if n < 0:
        raise ValueError("negative tensor power")
    if n == 0 or M.nfactors == 0:
        return UNIT
    if n == 1:
        return M
    return TensorModule((M,) * n, weight_cap)


def shift(M: BigradedModule, n: int) -> BigradedModule:
    """``M[n]``: the generator of degree ``z`` moves to degree ``z - n``."""
    return BigradedModule((l, (M.degree_of(l)[0] - n, M.degree_of(l)[1])) for l in M.labels)


def direct_sum(*summands: tuple[Hashable, BigradedModule]) -> BigradedModule:
    """Direct sum with labels ``(tag, label)``."""
    return BigradedModule(
        ((tag, l), M.degree_of(l)) for tag, M in summands for l in M.labels
    )


def dual_module(M: BigradedModule) -> BigradedModule:
    """Graded dual: same labels, degrees negated, weights kept."""
    if M.nfactors != 1:
        return tensor_modules(*(dual_module(f) for f in M.factors), cap=M.weight_cap)
    return BigradedModule((l, (-M.degree_of(l)[0], M.degree_of(l)[1])) for l in M.labels)


_EMPTY: dict = {}


def _clean(acc: dict, ring: CoeffRing) -> dict:
    p = ring.p
    if p is None:
        return {k: v for k, v in acc.items() if v}
    out = {}
    for k, v in acc.items():
        v %= p
        if v:
            out[k] = v
    return out


class GradedMap:
    """Homogeneous map of z-degree ``degree``; weights are preserved."""

    __slots__ = ("source", "target", "degree", "ring", "_rows", "_rule", "_complete")

    def __init__(
        self,
        source: BigradedModule,
        target: BigradedModule,
        degree: int,
        ring: CoeffRing,
        rows: Mapping[Label, Mapping[Label, int]] | None = None,
        *,
        rule: Callable[[Label], dict] | None = None,
        validate: bool = True,
    ) -> None:
        self.source = source
        self.target = target
        self.degree = int(degree)
        self.ring = ring
        self._rule = rule
        if rule is not None:
            self._rows = {}
            self._complete = False
            return
        clean = {}
        for s, row in (rows or {}).items():
            r = _clean(dict(row), ring)
            if r:
                clean[s] = r
        self._rows = clean
        self._complete = True
        if validate:
            self.validate()

    # -- construction helpers
    @classmethod
    def from_blocks(cls, source, target, degree, ring, blocks) -> "GradedMap":
        rows: dict = {}
        for bd, mat in blocks.items():
            z, w = bd
            src = source.labels_at((z, w))
            tgt = target.labels_at((z + degree, w))
            if len(mat) != len(src) or any(len(r) != len(tgt) for r in mat):
                raise StructuralError(f"block at {tuple(bd)} has wrong shape")
            for s, r in zip(src, mat):
                rows[s] = {t: c for t, c in zip(tgt, r) if c}
        return cls(source, target, degree, ring, rows)

    def validate(self) -> None:
        for s, row in self._rows.items():
            if s not in self.source:
                raise StructuralError(f"row label {s!r} not in source")
            zs, ws = self.source.degree_of(s)
            for t in row:
                if t not in self.target:
                    raise StructuralError(f"entry {t!r} not in target (source bidegree {(zs, ws)})")
                zt, wt = self.target.degree_of(t)
                if zt != zs + self.degree or wt != ws:
                    raise StructuralError(
                        f"entry {s!r}->{t!r} breaks degree {self.degree} at bidegree {(zs, ws)}"
                    )

    # -- access
    def row(self, label: Label) -> dict:
        r = self._rows.get(label)
        if r is not None:
            return r
        if self._complete or label not in self.source:
            return _EMPTY
        r = _clean(self._rule(label), self.ring)
        self._rows[label] = r
        return r

    def materialize(self) -> "GradedMap":
        if self._complete:
            return self
        rows = {s: self.row(s) for s in self.source.labels}
        return GradedMap(self.source, self.target, self.degree, self.ring, rows, validate=False)

    @property
    def rows(self) -> dict:
        return {s: r for s, r in ((s, self.row(s)) for s in self.source.labels) if r}

    def apply(self, vec: Mapping[Label, int]) -> dict:
        acc: dict = {}
        for s, c in vec.items():
            for t, d in self.row(s).items():
                acc[t] = acc.get(t, 0) + c * d
        return _clean(acc, self.ring)

    def blocks(self) -> dict[Bidegree, list[list[int]]]:
        out = {}
        for bd in sorted(self.source.ranks):
            z, w = bd
            src = self.source.labels_at(bd)
            tgt = self.target.labels_at((z + self.degree, w))
            if not src or not tgt:
                continue
            out[bd] = [[self.row(s).get(t, 0) for t in tgt] for s in src]
        return out

    def is_zero(self, labels: Iterable[Label] | None = None) -> bool:
        it = self.source.labels if labels is None else labels
        return all(not self.row(s) for s in it)

    def first_difference(self, other: "GradedMap", labels: Iterable[Label] | None = None):
        """Return the first source label where the two maps differ, or None."""
        it = self.source.labels if labels is None else labels
        for s in it:
            if self.row(s) != other.row(s):
                return s
        return None

    # -- algebra
    def _same_shape(self, other: "GradedMap") -> None:
        if not isinstance(other, GradedMap):
            raise TypeError("expected a GradedMap")
        if other.degree != self.degree:
            raise StructuralError(f"degrees differ: {self.degree} vs {other.degree}")
        if not self.source.compatible(other.source) or not self.target.compatible(other.target):
            raise StructuralError("maps have different source or target")
        if self.ring != other.ring:
            raise StructuralError("maps live over different rings")

    def __add__(self, other: "GradedMap") -> "GradedMap":
        self._same_shape(other)

        def rule(s, f=self, g=other):
            acc = dict(f.row(s))
            for t, c in g.row(s).items():
                acc[t] = acc.get(t, 0) + c
            return acc

        return GradedMap(self.source, self.target, self.degree, self.ring, rule=rule)

    def scale(self, c: int) -> "GradedMap":
        def rule(s, f=self):
            return {t: c * v for t, v in f.row(s).items()}

        return GradedMap(self.source, self.target, self.degree, self.ring, rule=rule)

    def __neg__(self) -> "GradedMap":
        return self.scale(-1)

    def __sub__(self, other: "GradedMap") -> "GradedMap":
        return self + (-other)

    def __rmul__(self, c: int) -> "GradedMap":
        return self.scale(c)

    def __rshift__(self, other: "GradedMap") -> "GradedMap":
        return compose(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GradedMap):
            return NotImplemented
        if self.degree != other.degree or self.ring != other.ring:
            return False
        if not (self.source.compatible(other.source) and self.target.compatible(other.target)):
            return False
        labels = self.source.labels
        if other.source.weight_cap is not None and self.source.weight_cap != other.source.weight_cap:
            labels = [l for l in labels if l in other.source]
        return self.first_difference(other, labels) is None

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"GradedMap(deg={self.degree}, {self.source!r} -> {self.target!r})"


def _mismatch(a: BigradedModule, b: BigradedModule) -> str:
    ra, rb = a.ranks, b.ranks
    for bd in sorted(set(ra) | set(rb)):
        if ra.get(bd, 0) != rb.get(bd, 0):
            return f"ranks differ at bidegree {tuple(bd)}: {ra.get(bd, 0)} vs {rb.get(bd, 0)}"
    return "generators differ"


def compose(f: GradedMap, g: GradedMap) -> GradedMap:
    """``f`` followed by ``g``."""
    if not f.target.compatible(g.source):
        raise StructuralError("cannot compose: " + _mismatch(f.target, g.source))
    if f.ring != g.ring:
        raise StructuralError("cannot compose maps over different rings")

    def rule(s):
        acc: dict = {}
        for t, c in f.row(s).items():
            for u, d in g.row(t).items():
                acc[u] = acc.get(u, 0) + c * d
        return acc

    return GradedMap(f.source, g.target, f.degree + g.degree, f.ring, rule=rule)


def tensor(*maps: GradedMap) -> GradedMap:
    """Koszul-signed tensor product: on ``x (x) y`` the map ``f (x) g`` carries
    the sign ``(-1)^(z(y) deg f)``."""
    if not maps:
        raise ValueError("need at least one map")
    if len(maps) == 1:
        return maps[0]
    ring = maps[0].ring
    src = tensor_modules(*(m.source for m in maps))
    tgt = tensor_modules(*(m.target for m in maps))
    nsrc = [m.source.nfactors for m in maps]
    ntgt = [m.target.nfactors for m in maps]
    total = src.nfactors

    def rule(label):
        parts = as_parts(label, total)
        pieces = []
        i = 0
        for n in nsrc:
            pieces.append(from_parts(parts[i : i + n]))
            i += n
        # sign: each map is passed by the inputs to its right
        zs = [m.source.z(p) for m, p in zip(maps, pieces)]
        sign = 0
        right = 0
        for k in range(len(maps) - 1, -1, -1):
            sign += maps[k].degree * right
            right += zs[k]
        acc: dict = {(): (-1) ** (sign & 1)}
        for m, p, nt in zip(maps, pieces, ntgt):
            r = m.row(p)
            if not r:
                return {}
            nxt: dict = {}
            for pre, c in acc.items():
                for t, d in r.items():
                    key = pre + as_parts(t, nt)
                    nxt[key] = nxt.get(key, 0) + c * d
            acc = nxt
        out = {}
        for key, c in acc.items():
            lab = from_parts(key)
            out[lab] = out.get(lab, 0) + c
        return out

    return GradedMap(src, tgt, sum(m.degree for m in maps), ring, rule=rule)


def identity(M: BigradedModule, ring: CoeffRing) -> GradedMap:
    return GradedMap(M, M, 0, ring, rule=lambda s: {s: 1})


def zero_map(source: BigradedModule, target: BigradedModule, degree: int, ring: CoeffRing) -> GradedMap:
    return GradedMap(source, target, degree, ring, {})


def sigma(M: BigradedModule, n: int, ring: CoeffRing) -> GradedMap:
    """The identity ``M -> M[n]`` viewed as a map of degree ``-n``."""
    return GradedMap(M, shift(M, n), -n, ring, {l: {l: 1} for l in M.labels}, validate=False)


def shift_map(f: GradedMap, n: int) -> GradedMap:
    """``f[n] = (-1)^(n deg f) sigma^-n f sigma^n : X[n] -> Y[n]``."""
    down = sigma(shift(f.source, n), -n, f.ring)
    up = sigma(f.target, n, f.ring)
    g = compose(compose(down, f), up)
    return g.scale(-1) if (n * f.degree) % 2 else g


def invert_diagonal(f: GradedMap) -> GradedMap:
    """Inverse of a map whose rows are single unit entries (signed relabelling)."""
    rows = {}
    for s in f.source.labels:
        r = f.row(s)
        if len(r) != 1:
            raise StructuralError(f"row {s!r} is not a single unit entry")
        (t, c), = r.items()
        rows[t] = {s: f.ring.inv(c)}
    if len(rows) != len(f.target.labels):
        raise StructuralError("map is not bijective on generators")
    return GradedMap(f.target, f.source, -f.degree, f.ring, rows, validate=False)


def transpose(f: GradedMap) -> GradedMap:
    """Plain transpose between the graded duals; same degree."""
    src = dual_module(f.target)
    tgt = dual_module(f.source)
    rows: dict = {}
    for s in f.source.labels:
        for t, c in f.row(s).items():
            rows.setdefault(t, {})[s] = c
    return GradedMap(src, tgt, f.degree, f.ring, rows, validate=False)
