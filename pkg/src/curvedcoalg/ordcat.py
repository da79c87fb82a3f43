"""Finite ordinals ``{1..n}`` and nondecreasing maps between them."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

__all__ = [
    "OrdMap",
    "MultiIndex",
    "compose_ord",
    "identity_ord",
    "pushforward",
    "enumerate_maps",
    "multi_indices",
    "fibers",
]


@dataclass(frozen=True)
class OrdMap:
    source: int
    target: int
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        vals = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if self.source < 0 or self.target < 0:
            raise ValueError("ordinals are non-negative")
        if len(vals) != self.source:
            raise ValueError(f"expected {self.source} values, got {len(vals)}")
        if any(not 1 <= v <= self.target for v in vals):
            raise ValueError(f"values must lie in 1..{self.target}: {vals}")
        if any(a > b for a, b in zip(vals, vals[1:])):
            raise ValueError(f"values are not nondecreasing: {vals}")

    def __call__(self, i: int) -> int:
        return self.values[i - 1]


class MultiIndex(tuple):
    """Tuple of non-negative integers."""

    def __new__(cls, entries: Iterable[int] = ()) -> "MultiIndex":
        t = tuple(int(e) for e in entries)
        if any(e < 0 for e in t):
            raise ValueError(f"negative entry in {t}")
        return super().__new__(cls, t)

    @property
    def norm(self) -> int:
        return sum(self)


def identity_ord(n: int) -> OrdMap:
    return OrdMap(n, n, tuple(range(1, n + 1)))


def compose_ord(phi: OrdMap, psi: OrdMap) -> OrdMap:
    """``phi`` then ``psi``."""
    if phi.target != psi.source:
        raise ValueError(f"cannot compose {phi.source}->{phi.target} with {psi.source}->{psi.target}")
    return OrdMap(phi.source, psi.target, tuple(psi(v) for v in phi.values))


def pushforward(phi: OrdMap, n: Iterable[int]) -> MultiIndex:
    n = MultiIndex(n)
    if len(n) != phi.source:
        raise ValueError(f"multi-index of length {len(n)} for a map from {phi.source}")
    out = [0] * phi.target
    for v, k in zip(phi.values, n):
        out[v - 1] += k
    return MultiIndex(out)


def fibers(phi: OrdMap) -> list[tuple[int, int]]:
    """Half-open index ranges ``[a, b)`` (0-based) of the preimages of 1..J."""
    out = []
    i = 0
    for j in range(1, phi.target + 1):
        a = i
        while i < phi.source and phi.values[i] == j:
            i += 1
        out.append((a, i))
    return out


def enumerate_maps(I: int, J: int) -> list[OrdMap]:
    """All nondecreasing maps ``I -> J`` in lexicographic order."""
    return [
        OrdMap(I, J, vals)
        for vals in itertools.combinations_with_replacement(range(1, J + 1), I)
    ]


def multi_indices(length: int, total_max: int) -> list[MultiIndex]:
    """All multi-indices of the given length with ``norm <= total_max``."""
    return [
        MultiIndex(t)
        for t in itertools.product(range(total_max + 1), repeat=length)
        if sum(t) <= total_max
    ]
