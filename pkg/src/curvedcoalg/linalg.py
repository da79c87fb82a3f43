"""Exact row reduction over ZZ (Hermite form) and GF(p) (reduced echelon form).

Vectors are rows and matrices act on the right, so ``x M`` is the image of
``x``.  Everything returns plain lists of ints.
"""

from __future__ import annotations

from .gradedcore import CoeffRing


def _echelon(rows: list[list[int]], ring: CoeffRing, stop: int | None = None):
    """Echelon form of ``rows`` restricted to pivots in columns ``< stop``.

    Returns ``(reduced_rows, pivots)``; rows beyond ``len(pivots)`` have zero
    entries in all pivot-eligible columns.
    """
    p = ring.p
    rows = [[ring.norm(x) for x in r] for r in rows]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    stop = ncols if stop is None else stop
    pivots: list[int] = []
    top = 0
    for c in range(stop):
        if top == len(rows):
            break
        if p is not None:
            piv = next((i for i in range(top, len(rows)) if rows[i][c]), None)
            if piv is None:
                continue
            rows[top], rows[piv] = rows[piv], rows[top]
            inv = pow(rows[top][c], -1, p)
            rows[top] = [x * inv % p for x in rows[top]]
            for i in range(len(rows)):
                if i != top and rows[i][c]:
                    f = rows[i][c]
                    rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[top])]
        else:
            while True:
                nz = [i for i in range(top, len(rows)) if rows[i][c]]
                if not nz:
                    break
                best = min(nz, key=lambda i: abs(rows[i][c]))
                rows[top], rows[best] = rows[best], rows[top]
                done = True
                for i in range(top + 1, len(rows)):
                    if rows[i][c]:
                        q = rows[i][c] // rows[top][c]
                        rows[i] = [a - q * b for a, b in zip(rows[i], rows[top])]
                        if rows[i][c]:
                            done = False
                if done:
                    break
            if not rows[top][c]:
                continue
            if rows[top][c] < 0:
                rows[top] = [-x for x in rows[top]]
            for i in range(top):
                if rows[i][c]:
                    q = rows[i][c] // rows[top][c]
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[top])]
        pivots.append(c)
        top += 1
    return rows, pivots


def row_basis(rows: list[list[int]], ring: CoeffRing) -> list[list[int]]:
    """Echelon basis of the row span (a lattice basis over ZZ)."""
    red, piv = _echelon(rows, ring)
    return red[: len(piv)]


def rank(rows: list[list[int]], ring: CoeffRing) -> int:
    return len(_echelon(rows, ring)[1])


class RowSolver:
    """Precomputed reduction of a matrix ``M`` for solving ``x M = b``."""

    def __init__(self, matrix: list[list[int]], ncols: int, ring: CoeffRing) -> None:
        self.ring = ring
        self.nrows = len(matrix)
        self.ncols = ncols
        aug = [list(r) + [1 if j == i else 0 for j in range(self.nrows)] for i, r in enumerate(matrix)]
        red, piv = _echelon(aug, ring, stop=ncols)
        self.pivots = piv
        self.rows = [r[:ncols] for r in red[: len(piv)]]
        self.transforms = [r[ncols:] for r in red[: len(piv)]]
        self.kernel = [r[ncols:] for r in red[len(piv) :]]
        if ring.p is None:
            self.kernel = row_basis(self.kernel, ring) if self.kernel else []

    def solve(self, b: list[int]) -> list[int] | None:
        """Some ``x`` with ``x M = b``, or None when there is none."""
        ring = self.ring
        rest = [ring.norm(v) for v in b]
        x = [0] * self.nrows
        for r, t, c in zip(self.rows, self.transforms, self.pivots):
            if not rest[c]:
                continue
            if ring.p is None:
                q, rem = divmod(rest[c], r[c])
                if rem:
                    return None
            else:
                q = rest[c] * pow(r[c], -1, ring.p) % ring.p
            rest = [ring.norm(a - q * e) for a, e in zip(rest, r)]
            x = [ring.norm(a + q * e) for a, e in zip(x, t)]
        if any(rest):
            return None
        return x


def solve_left(matrix: list[list[int]], ncols: int, b: list[int], ring: CoeffRing) -> list[int] | None:
    return RowSolver(matrix, ncols, ring).solve(b)


def left_kernel(matrix: list[list[int]], ncols: int, ring: CoeffRing) -> list[list[int]]:
    return RowSolver(matrix, ncols, ring).kernel


def inverse(matrix: list[list[int]], ring: CoeffRing) -> list[list[int]] | None:
    n = len(matrix)
    s = RowSolver(matrix, n, ring)
    out = []
    for i in range(n):
        x = s.solve([1 if j == i else 0 for j in range(n)])
        if x is None:
            return None
        out.append(x)
    return out
