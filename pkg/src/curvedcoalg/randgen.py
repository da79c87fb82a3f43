"""Seeded random generation of valid structures for property checks.

Algebras are monomial algebras on a factor-closed set of words, equipped with
a square-zero derivation found by a kernel solve, an inner twist (which is
what makes them curved), a random change of basis and a random splitting of
the unit.  Coalgebras are their duals.  Twisting cochains are solved weight by
weight, where the equation becomes linear in the top weight.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .curved import (
    CurvedAlgebraData,
    CurvedAlgMorphism,
    CurvedCoalgebraData,
    CurvedCoalgMorphism,
    compose_alg_morphisms,
    dual_alg_morphism,
    dual_algebra,
    identity_alg_morphism,
    transport_algebra,
    twist_morphism,
    weight_quotient,
)
from .gradedcore import (
    UNIT,
    BigradedModule,
    CoeffRing,
    GradedMap,
    Integers,
    PrimeField,
    tensor_power,
)
from .linalg import RowSolver, inverse

__all__ = [
    "random_ring",
    "random_algebra",
    "random_coalgebra",
    "random_alg_morphism",
    "random_composable_alg_pair",
    "AlgebraWithDual",
    "with_dual",
    "dual_morphism_of",
    "random_element",
    "random_graded_map",
    "solve_twisting_cochain",
]

UNIT_WORD = "1"
LETTERS = "abc"


def random_ring(rng: random.Random, choices=("ZZ", 3, 5)) -> CoeffRing:
    c = rng.choice(choices)
    return Integers() if c == "ZZ" else PrimeField(c)


def _coef(rng: random.Random, ring: CoeffRing) -> int:
    if ring.p is None:
        return rng.choice((-2, -1, 1, 1, 2))
    return rng.randrange(1, ring.p)


# ---------------------------------------------------------------- monomial algebras


def _mul(words: set, a: str, b: str) -> str | None:
    if a == UNIT_WORD:
        return b
    if b == UNIT_WORD:
        return a
    w = a + b
    return w if w in words else None


def _word_degree(gens: dict, word: str) -> tuple[int, int]:
    if word == UNIT_WORD:
        return (0, 0)
    return (sum(gens[g][0] for g in word), sum(gens[g][1] for g in word))


def _random_generators(rng: random.Random, plus: bool, curved: bool) -> dict:
    """Generator bidegrees, biased so that nonzero derivations and curvature exist."""
    wmin = 1 if plus else 0

    def fresh():
        z, w = rng.randint(-2, 2), rng.randint(wmin, 2)
        return (rng.choice((-1, 1)), w) if (z, w) == (0, 0) else (z, w)

    first = (1, 0) if curved and not plus and rng.random() < 0.7 else fresh()
    degs = [first]
    for _ in range(rng.choice((0, 1, 1, 2))):
        a = rng.choice(degs)
        r = rng.random()
        if r < 0.4:
            d = (a[0] + 1, a[1])  # room for d(a) = new generator
        elif r < 0.7:
            d = (2 * a[0] - 1, 2 * a[1])  # room for d(new) = a a
        else:
            d = fresh()
        if d == (0, 0):
            d = fresh()
        degs.append(d)
    return {LETTERS[i]: d for i, d in enumerate(degs)}


def _word_set(rng: random.Random, gens: dict, max_rank: int, max_weight: int | None) -> set:
    """Factor-closed set of words with at most ``max_rank`` non-unit words."""
    letters = sorted(gens)
    if max_weight is not None:
        letters = [g for g in letters if gens[g][1] <= max_weight]
    rng.shuffle(letters)
    words = set(letters[:max_rank])
    for _ in range(6):
        if len(words) >= max_rank:
            break
        cands = sorted(
            a + g for a in words for g in gens
            if a + g not in words and a[1:] + g in words | {""} and g in words
        )
        if max_weight is not None:
            cands = [c for c in cands if _word_degree(gens, c)[1] <= max_weight]
        if not cands:
            break
        words.add(rng.choice(cands))
    return words | {UNIT_WORD}


def _module(gens: dict, words: set) -> BigradedModule:
    return BigradedModule((w, _word_degree(gens, w)) for w in words)


def _product_map(M: BigradedModule, words: set, ring: CoeffRing) -> GradedMap:
    rows = {}
    for a, b in itertools.product(M.labels, repeat=2):
        c = _mul(words, a, b)
        if c is not None:
            rows[(a, b)] = {c: 1}
    return GradedMap(tensor_power(M, 2), M, 0, ring, rows)


def _leibniz(word: str, images: dict, gens: dict, words: set, free: bool) -> dict:
    """Leibniz expansion of a derivation of degree 1 on a word.

    With ``free`` the products are formed in the free algebra and words outside
    the set are kept, so that the caller can test whether they vanish.
    """
    out: dict = {}
    if word == UNIT_WORD:
        return out
    # maps act on the right: passing the letters to the right of g costs their degrees
    zsum = sum(gens[g][0] for g in word)
    for i, g in enumerate(word):
        pre, post = word[:i], word[i + 1 :]
        zsum -= gens[g][0]
        sign = -1 if zsum % 2 else 1
        for img, c in images.get(g, {}).items():
            mid = "" if img == UNIT_WORD else img
            w = pre + mid + post
            w = w if w else UNIT_WORD
            if free or w in words:
                out[w] = out.get(w, 0) + sign * c
    return out


def _random_derivation(rng: random.Random, gens: dict, words: set, M: BigradedModule, ring: CoeffRing) -> dict:
    """Generator images of a random degree-1 derivation with square zero."""
    unknowns = []
    for g in sorted(gens):
        if g not in words:
            continue
        z, w = gens[g]
        for t in M.labels_at((z + 1, w)):
            unknowns.append((g, t))
    if not unknowns:
        return {}
    forbidden = sorted(
        {a + g for a in words for g in gens if (a + g if a != UNIT_WORD else g) not in words
         and a != UNIT_WORD and (a + g)[1:] in words}
        | {g for g in gens if g not in words}
    )
    cols: dict = {}
    rows = []
    for g, t in unknowns:
        row: dict = {}
        for f in forbidden:
            for w2, c in _leibniz(f, {g: {t: 1}}, gens, words, free=True).items():
                if w2 in words:
                    key = (f, w2)
                    cols.setdefault(key, len(cols))
                    row[cols[key]] = row.get(cols[key], 0) + c
        rows.append(row)
    ncols = max(len(cols), 1)
    mat = [[r.get(j, 0) for j in range(ncols)] for r in rows]
    kernel = RowSolver(mat, ncols, ring).kernel
    if not kernel:
        return {}
    for _ in range(4):
        coeffs = [rng.choice((0, 0, 1, -1, 2)) for _ in kernel]
        vec = [ring.norm(sum(c * k[i] for c, k in zip(coeffs, kernel))) for i in range(len(unknowns))]
        images: dict = {}
        for (g, t), c in zip(unknowns, vec):
            if c:
                images.setdefault(g, {})[t] = c
        if _square_zero(images, gens, words, ring):
            return images
    return {}


def _square_zero(images: dict, gens: dict, words: set, ring: CoeffRing) -> bool:
    for w in words:
        first = _leibniz(w, images, gens, words, free=False)
        acc: dict = {}
        for u, c in first.items():
            for v, d in _leibniz(u, images, gens, words, free=False).items():
                acc[v] = acc.get(v, 0) + c * d
        if any(ring.norm(c) for c in acc.values()):
            return False
    return True


def random_element(rng: random.Random, M: BigradedModule, bd: tuple[int, int], ring: CoeffRing, exclude=()) -> dict:
    out = {}
    for l in M.labels_at(bd):
        if l in exclude:
            continue
        if rng.random() < 0.7:
            out[l] = _coef(rng, ring)
    return out


def _random_invertible(rng: random.Random, n: int, ring: CoeffRing) -> list[list[int]]:
    """Product of random unit lower and upper triangular matrices."""
    def coef():
        return rng.choice((0, 0, 1, -1, 2)) if ring.p is None else rng.randrange(ring.p)

    L = [[1 if i == j else (coef() if j < i else 0) for j in range(n)] for i in range(n)]
    U = [[1 if i == j else (coef() if j > i else 0) for j in range(n)] for i in range(n)]
    if ring.p is not None and n:
        scale = [rng.randrange(1, ring.p) for _ in range(n)]
        U = [[x * scale[i] for x in row] for i, row in enumerate(U)]
    return [[ring.norm(sum(L[i][k] * U[k][j] for k in range(n))) for j in range(n)] for i in range(n)]


def random_basis_change(rng: random.Random, M: BigradedModule, ring: CoeffRing) -> tuple[GradedMap, GradedMap]:
    phi_rows, inv_rows = {}, {}
    for bd in M.ranks:
        labs = M.labels_at(bd)
        mat = _random_invertible(rng, len(labs), ring)
        inv = inverse(mat, ring)
        for i, s in enumerate(labs):
            phi_rows[s] = {t: mat[i][j] for j, t in enumerate(labs) if mat[i][j]}
            inv_rows[s] = {t: inv[i][j] for j, t in enumerate(labs) if inv[i][j]}
    return GradedMap(M, M, 0, ring, phi_rows), GradedMap(M, M, 0, ring, inv_rows)


def random_algebra(
    rng: random.Random,
    ring: CoeffRing,
    plus: bool = False,
    curved: bool = True,
    max_rank: int = 3,
    max_weight: int | None = None,
    basis_change: bool = True,
) -> CurvedAlgebraData:
    """A random unit-complemented curved algebra of total rank ``<= max_rank + 1``.

    With ``plus`` the complement of the unit lives in positive weights (and the
    curvature is then necessarily zero).
    """
    gens = _random_generators(rng, plus, curved)
    words = _word_set(rng, gens, max_rank, max_weight)
    M = _module(gens, words)
    m2 = _product_map(M, words, ring)
    d = _random_derivation(rng, gens, words, M, ring)
    m1 = GradedMap(M, M, 1, ring, {w: _leibniz(w, d, gens, words, free=False) for w in M.labels})
    eta = GradedMap(UNIT, M, 0, ring, {(): {UNIT_WORD: 1}})
    v_row = {UNIT_WORD: {(): 1}}
    for l in M.labels_at((0, 0)):
        if l != UNIT_WORD and rng.random() < 0.5:
            v_row[l] = {(): _coef(rng, ring)}
    v = GradedMap(M, UNIT, 0, ring, v_row)
    A = CurvedAlgebraData(M, ring, m2, m1, GradedMap(UNIT, M, 2, ring, {}), eta, v)
    if curved:
        u = random_element(rng, M, (1, 0), ring)
        if u:
            A = twist_morphism(A, u).target
    if basis_change:
        phi, phi_inv = random_basis_change(rng, M, ring)
        A = transport_algebra(A, phi, phi_inv)
    return A


# ---------------------------------------------------------------- morphisms


def random_alg_morphism(rng: random.Random, A: CurvedAlgebraData, allow_quotient: bool = True) -> CurvedAlgMorphism:
    """A random morphism out of ``A``: a chain of twists, isomorphisms and
    weight quotients."""
    f = identity_alg_morphism(A)
    for _ in range(rng.randint(1, 3)):
        B = f.target
        kind = rng.choice(("twist", "iso", "iso", "quotient" if allow_quotient else "iso"))
        if kind == "twist":
            c = random_element(rng, B.carrier, (1, 0), B.ring)
            step = twist_morphism(B, c)
        elif kind == "iso":
            phi, phi_inv = random_basis_change(rng, B.carrier, B.ring)
            C = transport_algebra(B, phi, phi_inv)
            step = CurvedAlgMorphism(B, C, phi, GradedMap(UNIT, C.carrier, 1, B.ring, {}))
        else:
            top = B.carrier.max_weight
            step = weight_quotient(B, rng.randint(max(top - 1, 0), top))
        f = compose_alg_morphisms(f, step)
    return f


def random_composable_alg_pair(rng: random.Random, A: CurvedAlgebraData):
    f = random_alg_morphism(rng, A)
    g = random_alg_morphism(rng, f.target)
    return f, g


# ---------------------------------------------------------------- coalgebras


@dataclass
class AlgebraWithDual:
    algebra: CurvedAlgebraData
    coalgebra: CurvedCoalgebraData


def with_dual(A: CurvedAlgebraData) -> AlgebraWithDual:
    return AlgebraWithDual(A, dual_algebra(A))


def dual_morphism_of(f: CurvedAlgMorphism, src: AlgebraWithDual, tgt: AlgebraWithDual) -> CurvedCoalgMorphism:
    """The transpose ``tgt* -> src*`` of ``f : src -> tgt``."""
    return dual_alg_morphism(f, src.coalgebra, tgt.coalgebra)


def random_coalgebra(rng: random.Random, ring: CoeffRing, **kw) -> CurvedCoalgebraData:
    return dual_algebra(random_algebra(rng, ring, **kw))


def random_graded_map(rng, source, target, degree, ring, density=0.5) -> GradedMap:
    rows = {}
    for s in source.labels:
        z, w = source.degree_of(s)
        row = {}
        for t in target.labels_at((z + degree, w)):
            if rng.random() < density:
                row[t] = _coef(rng, ring)
        if row:
            rows[s] = row
    return GradedMap(source, target, degree, ring, rows)


# ---------------------------------------------------------------- twisting cochains


def solve_twisting_cochain(
    rng: random.Random, C: CurvedCoalgebraData, A: CurvedAlgebraData, attempts: int = 6
) -> GradedMap | None:
    """A random solution ``theta : C -> A`` of the twisting cochain equation.

    Works weight by weight: with ``theta`` zero in weight 0 (so both sides
    must be uncurved there) the equation in weight ``w`` is linear in the
    weight-``w`` part of ``theta``.  Returns None if every attempt hits an
    obstruction.
    """
    from .barcobar import twisting_defect  # local import: barcobar builds on randgen-free code

    R = A.ring
    Cm, Am = C.carrier, A.carrier
    weights = sorted({w for (_, w) in Cm.ranks})
    for _ in range(attempts):
        rows: dict = {}
        ok = True
        for w in weights:
            if w == 0:
                theta = GradedMap(Cm, Am, 1, R, rows)
                if not twisting_defect(theta, C, A, [l for l in Cm.labels if Cm.degree_of(l)[1] == 0]).is_zero():
                    return None
                continue
            labs = [l for l in Cm.labels if Cm.degree_of(l)[1] == w]
            unknowns = [(s, t) for s in labs for t in Am.labels_at((Cm.z(s) + 1, w))]
            base = twisting_defect(GradedMap(Cm, Am, 1, R, rows), C, A, labs)
            # the defect is affine in the unknowns; collect its linear part
            target_cols: dict = {}
            lin = []
            for s, t in unknowns:
                trial = dict(rows)
                trial[s] = {**trial.get(s, {}), t: trial.get(s, {}).get(t, 0) + 1}
                d = twisting_defect(GradedMap(Cm, Am, 1, R, trial), C, A, labs)
                row = {}
                for x in labs:
                    diff = {k: d.row(x).get(k, 0) - base.row(x).get(k, 0) for k in set(d.row(x)) | set(base.row(x))}
                    for k, c in diff.items():
                        if R.norm(c):
                            j = target_cols.setdefault((x, k), len(target_cols))
                            row[j] = c
                lin.append(row)
            const = {}
            for x in labs:
                for k, c in base.row(x).items():
                    j = target_cols.setdefault((x, k), len(target_cols))
                    const[j] = c
            ncols = max(len(target_cols), 1)
            mat = [[r.get(j, 0) for j in range(ncols)] for r in lin]
            rhs = [-const.get(j, 0) for j in range(ncols)]
            if not unknowns:
                if any(R.norm(c) for c in rhs):
                    ok = False
                    break
                continue
            solver = RowSolver(mat, ncols, R)
            x = solver.solve(rhs)
            if x is None:
                ok = False
                break
            for k in solver.kernel:
                c = rng.choice((0, 1, -1, 2))
                x = [a + c * b for a, b in zip(x, k)]
            for (s, t), c in zip(unknowns, x):
                if R.norm(c):
                    rows.setdefault(s, {})[t] = R.norm(c)
        if ok:
            return GradedMap(Cm, Am, 1, R, rows)
    return None
