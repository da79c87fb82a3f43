"""Seeded property suites with shrinking.

Every suite is a function ``case(rng, size) -> list[Check]`` that builds a
random instance of the given size and evaluates a fixed list of named checks.
``run_suite`` derives one generator per case from ``(seed, suite, index)``, so
reports are reproducible byte for byte.  When a case fails, smaller sizes
(ranks and support bounds) are retried and the smallest failing one is kept.
"""

from __future__ import annotations

import itertools
import json
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

from . import randgen as rg
from .barcobar import (
    AdjunctionSample,
    adjunction_check,
    bar,
    bar_morphism,
    cobar,
    cobar_morphism,
    from_alg_morphism,
    from_ccoalg_element,
    is_twisting_cochain,
    to_alg_morphism,
    to_ccoalg_element,
    tw_left_action,
    tw_right_action,
)
from .chcoalg import (
    ccoalg_left_action,
    ccoalg_right_action,
    check_ccoalg_element,
    check_chc,
    check_chc_morphism,
    compose_chc,
    embed_plus,
    identity_chc_morphism,
)
from .curved import (
    check_algebra_hom,
    check_alg_morphism,
    check_associative_algebra,
    check_coalgebra,
    check_coalgebra_hom,
    check_coalg_morphism,
    check_curved_algebra,
    check_curved_coalgebra,
    check_shifted_algebra,
    check_shifted_coalgebra,
    compose_alg_morphisms,
    compose_coalg_morphisms,
    double_algebra,
    double_alg_morphism,
    double_coalgebra,
    double_coalg_morphism,
    dual_algebra,
    from_shifted_algebra,
    from_shifted_coalgebra,
    identity_alg_morphism,
    identity_coalg_morphism,
    to_shifted_algebra,
    to_shifted_coalgebra,
    twist_morphism,
    weight_quotient,
)
from .gradedcore import (
    UNIT,
    BigradedModule,
    GradedMap,
    Integers,
    PrimeField,
    compose,
    identity,
    shift,
    shift_map,
    sigma,
    tensor,
    tensor_power,
)
from .mutations import random_mutation
from .tensorcoalg import (
    ComponentFamily,
    TensorCoalgebra,
    check_monoidality,
    check_naturality,
    compose_evaluators,
    compose_morphism_components,
    compose_postcoderivation,
    compose_precoderivation,
    cut_comultiplication,
    extract_components,
    identity_family,
    iterated_comultiplication,
    lift_coderivation,
    lift_morphism,
    square_coderivation,
)

__all__ = ["SUITES", "Size", "Check", "SuiteReport", "run_suite", "run_suites", "suite_names"]


class Size(NamedTuple):
    rank: int
    support: int


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


def _check(name: str, ok: bool, detail="") -> Check:
    return Check(name, bool(ok), "" if ok else str(detail))


def _rep_check(name: str, rep) -> Check:
    """A checker report as a single check; the detail names the failed axioms."""
    if rep.ok:
        return Check(name, True)
    bad = [r for r in rep.results if not r.ok]
    return Check(name, False, "; ".join(f"{r.name} {r.counterexample}" for r in bad))


def _eq(name: str, a: GradedMap, b: GradedMap) -> Check:
    if a == b:
        return Check(name, True)
    if a.degree != b.degree:
        return Check(name, False, f"degrees {a.degree} and {b.degree}")
    return Check(name, False, f"first difference {a.first_difference(b)}")


def _fam_eq(name: str, a: ComponentFamily, b: ComponentFamily) -> Check:
    for k in range(max(a.K, b.K) + 1):
        x, y = a.component(k), b.component(k)
        labels = [l for l in x.source.labels if l in y.source]
        d = x.first_difference(y, labels)
        if d is not None:
            return Check(name, False, f"component {k}: {d}")
    return Check(name, True)


# ---------------------------------------------------------------- random building blocks


def _ring(rng: random.Random, choices=("ZZ", 5)):
    c = rng.choice(choices)
    return Integers() if c == "ZZ" else PrimeField(c)


def _module(rng: random.Random, rank: int, zs=(-1, 0, 1), ws=(0, 1), prefix="x", exact=False) -> BigradedModule:
    n = max(rank, 1) if exact else rng.randint(1, max(rank, 1))
    return BigradedModule((f"{prefix}{i}", (rng.choice(zs), rng.choice(ws))) for i in range(n))


def _map(rng, X, Y, degree, ring, density=0.6) -> GradedMap:
    return rg.random_graded_map(rng, X, Y, degree, ring, density)


def _family(rng, X, Y, degree, ring, K, cap, density=0.5, arities=None) -> ComponentFamily:
    comps = {}
    for k in arities if arities is not None else range(K + 1):
        f = _map(rng, tensor_power(X, k, cap), Y, degree, ring, density)
        if f.rows:
            comps[k] = f
    return ComponentFamily(X, Y, degree, ring, comps, K, cap)


# ---------------------------------------------------------------- koszul


def _block_product(f: GradedMap, g: GradedMap) -> dict:
    """Independent oracle: dense block matrices multiplied bidegree by bidegree."""
    rows = {}
    for bd in f.source.ranks:
        src = f.source.labels_at(bd)
        mid = f.target.labels_at((bd[0] + f.degree, bd[1]))
        tgt = g.target.labels_at((bd[0] + f.degree + g.degree, bd[1]))
        F = [[f.row(s).get(m, 0) for m in mid] for s in src]
        G = [[g.row(m).get(t, 0) for t in tgt] for m in mid]
        for i, s in enumerate(src):
            row = {}
            for j, t in enumerate(tgt):
                c = f.ring.norm(sum(F[i][k] * G[k][j] for k in range(len(mid))))
                if c:
                    row[t] = c
            if row:
                rows[s] = row
    return rows


def _koszul_oracle(f: GradedMap, g: GradedMap) -> dict:
    """``f (x) g`` on basis tensors with the sign ``(-1)^(z(y) deg f)`` written out."""
    rows = {}
    for x in f.source.labels:
        for y in g.source.labels:
            sign = -1 if (g.source.z(y) * f.degree) % 2 else 1
            row = {}
            for a, c in f.row(x).items():
                for b, d in g.row(y).items():
                    row[(a, b)] = row.get((a, b), 0) + sign * c * d
            row = {k: f.ring.norm(v) for k, v in row.items() if f.ring.norm(v)}
            if row:
                rows[(x, y)] = row
    return rows


def _rows_equal(f: GradedMap, rows: dict) -> bool:
    return all(f.row(s) == rows.get(s, {}) for s in f.source.labels) and all(s in f.source for s in rows)


def koszul_case(rng: random.Random, size: Size) -> list[Check]:
    R = _ring(rng)
    X, Y, W, Z, V = (_module(rng, size.rank, prefix=p) for p in "xywzv")
    a, b, c = rng.randint(-1, 1), rng.randint(-1, 1), rng.randint(-1, 1)
    f, g = _map(rng, X, Y, a, R), _map(rng, W, Z, b, R)
    h = _map(rng, Y, V, c, R)
    k = _map(rng, V, X, rng.randint(-1, 1), R)
    f0 = _map(rng, X, Y, 0, R)
    n, m = rng.randint(-2, 2), rng.randint(-2, 2)
    sgn = -1 if (a * b) % 2 else 1
    fg = tensor(f, g)
    checks = [
        _check("compose matches block product", _rows_equal(f >> h, _block_product(f, h))),
        _eq("compose associative", (f >> h) >> k, f >> (h >> k)),
        _check("tensor sign rule", _rows_equal(fg, _koszul_oracle(f, g))),
        _eq("interchange f then g", tensor(f, identity(W, R)) >> tensor(identity(Y, R), g), fg),
        _eq("interchange g then f", tensor(identity(X, R), g) >> tensor(f, identity(Z, R)), fg.scale(sgn)),
    ]
    # (f (x) g)(h (x) k') = (-1)^(|g||h|) fh (x) gk'
    g2 = _map(rng, Z, W, rng.randint(-1, 1), R)
    lhs = tensor(f, g) >> tensor(h, g2)
    rhs = tensor(f >> h, g >> g2).scale(-1 if (g.degree * h.degree) % 2 else 1)
    checks.append(_eq("general interchange", lhs, rhs))
    checks.append(_eq("sigma additivity", sigma(X, n, R) >> sigma(shift(X, n), m, R), sigma(X, n + m, R)))
    checks.append(_eq("shift by zero", shift_map(f, 0), f))
    checks.append(_eq("shift functoriality", shift_map(f >> h, n), shift_map(f, n) >> shift_map(h, n)))
    checks.append(_eq("sigma dinaturality", sigma(X, n, R) >> shift_map(f0, n), f0 >> sigma(Y, n, R)))
    s = -1 if (n * a) % 2 else 1
    checks.append(_eq("signed dinaturality", sigma(X, n, R) >> shift_map(f, n), (f >> sigma(Y, n, R)).scale(s)))
    return checks


# ---------------------------------------------------------------- cut comultiplication


def _splits(word: tuple, I: int):
    if I == 0:
        if not word:
            yield ()
        return
    if I == 1:
        yield (word,)
        return
    for k in range(len(word) + 1):
        for rest in _splits(word[k:], I - 1):
            yield (word[:k],) + rest


def cut_case(rng: random.Random, size: Size) -> list[Check]:
    R = _ring(rng)
    X = _module(rng, size.rank, ws=(0, 1), exact=True)
    L = size.support
    T = TensorCoalgebra(X, weight_cap=L, arity_cap=L)
    M = T.module
    one = identity(M, R)
    d2, d3 = cut_comultiplication(T, 2, R), cut_comultiplication(T, 3, R)
    eps = cut_comultiplication(T, 0, R)
    checks = [
        _eq("coassociativity left", d2 >> tensor(d2, one), d3),
        _eq("coassociativity right", d2 >> tensor(one, d2), d3),
        _eq("left counit", d2 >> tensor(eps, one), one),
        _eq("right counit", d2 >> tensor(one, eps), one),
    ]
    ok = True
    for I in range(0, 5):
        if iterated_comultiplication(M, d2, eps, I, R, L) != cut_comultiplication(T, I, R):
            ok = False
            break
    checks.append(_check("iterated equals cut", ok, f"arity {I}"))
    bad = None
    for I in range(0, 4):
        dI = cut_comultiplication(T, I, R)
        for word in M.labels:
            want = Counter(s if I != 1 else s[0] for s in _splits(word, I))
            got = Counter({k: v for k, v in dI.row(word).items()})
            if I == 0:
                got = Counter({(): v for v in dI.row(word).values()})
            if +want != +got:
                bad = (I, word)
                break
        if bad:
            break
    checks.append(_check("cut matches enumeration", bad is None, bad))
    return checks


# ---------------------------------------------------------------- lifting


def lift_case(rng: random.Random, size: Size) -> list[Check]:
    R = _ring(rng)
    cap = 3
    X = _module(rng, size.rank, ws=(1,), prefix="x")
    Y = _module(rng, size.rank, ws=(1,), prefix="y")
    K = max(size.support, 1)
    f = _family(rng, X, Y, 0, R, K, cap)
    g = _family(rng, X, Y, 0, R, K, cap)
    xi = _family(rng, X, Y, rng.choice((-1, 1)), R, K, cap)
    E = lift_morphism(f)
    C = lift_coderivation(f, g, xi)
    return [
        _check("lifted morphism natural", check_naturality(E) is None, check_naturality(E)),
        _check("lifted morphism monoidal", check_monoidality(E) is None, check_monoidality(E)),
        _fam_eq("reconstruction of morphism", extract_components(E, K), f),
        _check("lifted coderivation natural", check_naturality(C) is None, check_naturality(C)),
        _check(
            "lifted coderivation monoidal",
            check_monoidality(C, left=lift_morphism(f), right=lift_morphism(g)) is None,
        ),
        _fam_eq("reconstruction of coderivation", extract_components(C, K), xi),
    ]


# ---------------------------------------------------------------- composition formulas


def _blocks_agree(a, b, max_I=2, max_norm=3) -> bool:
    from .ordcat import multi_indices

    for I in range(1, max_I + 1):
        for n in multi_indices(I, max_norm):
            for m in a.support_indices(n):
                if a.block(n, m).first_difference(b.block(n, m)) is not None:
                    return False
    return True


def compose_case(rng: random.Random, size: Size) -> list[Check]:
    R = _ring(rng)
    cap = 3
    X = _module(rng, size.rank, ws=(1,), prefix="x")
    Y = _module(rng, size.rank, ws=(1,), prefix="y")
    Z = _module(rng, size.rank, ws=(1,), prefix="z")
    K = lambda: rng.randint(1, max(size.support, 1))  # noqa: E731
    f = _family(rng, X, Y, 0, R, K(), cap)
    g = _family(rng, Y, Z, 0, R, K(), cap)
    h = compose_morphism_components(f, g)
    direct = compose_evaluators(lift_morphism(f), lift_morphism(g))
    checks = [
        _fam_eq("morphism composition components", h, extract_components(direct, h.K)),
        _check("lift of composite equals composite of lifts", _blocks_agree(lift_morphism(h), direct)),
    ]
    # pre-composition h xi with xi an (a, b)-coderivation Y -> Z
    Kx = K()
    a, b = _family(rng, Y, Z, 0, R, Kx, cap), _family(rng, Y, Z, 0, R, Kx, cap)
    xi = _family(rng, Y, Z, 1, R, Kx, cap)
    pre = compose_precoderivation(f, xi)
    direct = compose_evaluators(lift_morphism(f), lift_coderivation(a, b, xi))
    checks.append(_fam_eq("pre-composition components", pre, extract_components(direct, pre.K)))
    # post-composition xi h with xi an (f1, f2)-coderivation X -> Y, h : Y -> Z
    Kp = K()
    f1, f2 = _family(rng, X, Y, 0, R, Kp, cap), _family(rng, X, Y, 0, R, Kp, cap)
    xi2 = _family(rng, X, Y, -1, R, Kp, cap)
    post = compose_postcoderivation(f1, f2, xi2, g)
    direct = compose_evaluators(lift_coderivation(f1, f2, xi2), lift_morphism(g))
    checks.append(_fam_eq("post-composition components", post, extract_components(direct, post.K)))
    # square of an odd coderivation of X with f = g = id
    Ks = K()
    xi3 = _family(rng, X, X, 1, R, Ks, cap)
    ids = identity_family(X, R, cap)
    ids = ComponentFamily(X, X, 0, R, ids.components, Ks, cap)
    lifted = lift_coderivation(ids, ids, xi3)
    sq = square_coderivation(xi3)
    checks.append(_fam_eq("square components", sq, extract_components(compose_evaluators(lifted, lifted), max(sq.K, 1))))
    return checks


# ---------------------------------------------------------------- curved


def _algebra(rng, size: Size, plus=None, ring_choices=("ZZ", 3, 5)):
    R = rg.random_ring(rng, ring_choices)
    plus = rng.random() < 0.3 if plus is None else plus
    return rg.random_algebra(rng, R, plus=plus, max_rank=size.rank, max_weight=size.support)


def curved_case(rng: random.Random, size: Size) -> list[Check]:
    A = _algebra(rng, size)
    f = rg.random_alg_morphism(rng, A)
    g = rg.random_alg_morphism(rng, f.target)
    h = rg.random_alg_morphism(rng, g.target)
    fg = compose_alg_morphisms(f, g)
    C = dual_algebra(A)
    dA = rg.with_dual(A)
    dB = rg.with_dual(f.target)
    df = rg.dual_morphism_of(f, dA, dB)
    checks = [
        _rep_check("algebra axioms", check_curved_algebra(A)),
        _rep_check("dual coalgebra axioms", check_curved_coalgebra(C)),
        _rep_check("morphism equations", check_alg_morphism(f)),
        _rep_check("composite equations", check_alg_morphism(fg)),
        _rep_check("dual morphism equations", check_coalg_morphism(df)),
    ]
    idA, idB = identity_alg_morphism(A), identity_alg_morphism(f.target)
    left, right = compose_alg_morphisms(idA, f), compose_alg_morphisms(f, idB)
    checks.append(_check("identity laws", left.f1 == f.f1 and left.f0 == f.f0 and right.f1 == f.f1 and right.f0 == f.f0))
    p = compose_alg_morphisms(fg, h)
    q = compose_alg_morphisms(f, compose_alg_morphisms(g, h))
    checks.append(_check("composition associative", p.f1 == q.f1 and p.f0 == q.f0))
    dg = rg.dual_morphism_of(g, dB, rg.with_dual(g.target))
    cg = compose_coalg_morphisms(dg, df)
    checks.append(_rep_check("coalgebra composite equations", check_coalg_morphism(cg)))
    cid = compose_coalg_morphisms(identity_coalg_morphism(dB.coalgebra), df)
    checks.append(_check("coalgebra identity law", cid.g1 == df.g1 and cid.g0 == df.g0))
    S = to_shifted_algebra(A)
    checks.append(_rep_check("shifted algebra identities", check_shifted_algebra(S)))
    checks.append(_check("shifted algebra roundtrip", from_shifted_algebra(S) == A))
    Sc = to_shifted_coalgebra(C)
    checks.append(_rep_check("shifted coalgebra identities", check_shifted_coalgebra(Sc)))
    checks.append(_check("shifted coalgebra roundtrip", from_shifted_coalgebra(Sc) == C))
    c = rg.random_element(rng, A.carrier, (1, 0), A.ring)
    checks.append(_rep_check("twist is a morphism", check_alg_morphism(twist_morphism(A, c))))
    return checks


# ---------------------------------------------------------------- doubling


def doubling_case(rng: random.Random, size: Size) -> list[Check]:
    """Checker verdict agrees with the doubled oracle on possibly mutated candidates."""
    A = _algebra(rng, size)
    f = rg.random_alg_morphism(rng, A)
    if rng.random() < 0.5:
        _, A = random_mutation(rng, A)
    if rng.random() < 0.5:
        _, f = random_mutation(rng, f)
    a1 = check_curved_algebra(A, include_splitting=False).ok
    a2 = check_associative_algebra(double_algebra(A)).ok
    checks = [_check("algebra verdicts agree", a1 == a2, f"checker {a1}, doubled {a2}")]
    if check_curved_algebra(f.source).ok and check_curved_algebra(f.target).ok:
        m1 = check_alg_morphism(f).ok
        m2 = check_algebra_hom(double_algebra(f.source), double_algebra(f.target), double_alg_morphism(f)).ok
        checks.append(_check("algebra morphism verdicts agree", m1 == m2, f"checker {m1}, doubled {m2}"))
    B = _algebra(rng, size)
    k = rg.random_alg_morphism(rng, B)
    dB, dK = rg.with_dual(B), rg.with_dual(k.target)
    C = dB.coalgebra
    g = rg.dual_morphism_of(k, dB, dK)
    if rng.random() < 0.5:
        _, C = random_mutation(rng, C)
    if rng.random() < 0.5:
        _, g = random_mutation(rng, g)
    c1 = check_curved_coalgebra(C, include_splitting=False).ok
    c2 = check_coalgebra(double_coalgebra(C)).ok
    checks.append(_check("coalgebra verdicts agree", c1 == c2, f"checker {c1}, doubled {c2}"))
    n1 = check_coalg_morphism(g).ok
    n2 = check_coalgebra_hom(double_coalgebra(g.source), double_coalgebra(g.target), double_coalg_morphism(g)).ok
    checks.append(_check("coalgebra morphism verdicts agree", n1 == n2, f"checker {n1}, doubled {n2}"))
    # functoriality of doubling on valid pairs
    p = rg.random_alg_morphism(rng, B)
    q = rg.random_alg_morphism(rng, p.target)
    lhs = double_alg_morphism(compose_alg_morphisms(p, q))
    rhs = double_alg_morphism(p) >> double_alg_morphism(q)
    checks.append(_eq("doubling preserves composition", lhs, rhs))
    return checks


# ---------------------------------------------------------------- chc


def _plus_pair(rng, size: Size, ring_choices=("ZZ", 3, 5)):
    A = _algebra(rng, size, plus=True, ring_choices=ring_choices)
    return A, rg.random_alg_morphism(rng, A)


def chc_case(rng: random.Random, size: Size) -> list[Check]:
    cap = size.support
    A = _algebra(rng, size)
    f = rg.random_alg_morphism(rng, A)
    g = rg.random_alg_morphism(rng, f.target)
    h = rg.random_alg_morphism(rng, g.target)
    BA, BB, BC, BD = bar(A, cap), bar(f.target, cap), bar(g.target, cap), bar(h.target, cap)
    bf, bg, bh = bar_morphism(f, BA, BB), bar_morphism(g, BB, BC), bar_morphism(h, BC, BD)
    bfg = compose_chc(bf, bg)
    checks = [
        _rep_check("structure equations", check_chc(BA)),
        _rep_check("morphism equations", check_chc_morphism(bf)),
        _rep_check("composite equations", check_chc_morphism(bfg)),
    ]
    idf = compose_chc(identity_chc_morphism(BA), bf)
    checks.append(_check("identity law", _fam_eq("", idf.g1, bf.g1).ok and _fam_eq("", idf.g0, bf.g0).ok))
    p, q = compose_chc(bfg, bh), compose_chc(bf, compose_chc(bg, bh))
    checks.append(_check("composition associative", _fam_eq("", p.g1, q.g1).ok and _fam_eq("", p.g0, q.g0).ok))
    # the structure axiom through the square of the lifted coderivation
    sq = square_coderivation(BA.delta1)
    ok = True
    X, R = BA.carrier, BA.ring
    for n in range(sq.K + 1):
        if n == 0:
            want = GradedMap(UNIT, X, 2, R, {})
        else:
            d0 = BA.delta0.component(n - 1)
            want = tensor(identity(X, R), d0) - tensor(d0, identity(X, R))
        got = sq.component(n)
        labels = [l for l in got.source.labels if l in want.source]
        if got.first_difference(GradedMap(got.source, X, 2, R, rule=want.row), labels) is not None:
            ok = False
    checks.append(_check("square of delta1 is the curvature bracket", ok))
    return checks


def bimodule_case(rng: random.Random, size: Size) -> list[Check]:
    """CCoalg bimodule laws on elements coming from the universal cochain."""
    cap = size.support
    A0 = _algebra(rng, size, plus=True)
    k = rg.random_alg_morphism(rng, A0)
    src, tgt = rg.with_dual(A0), rg.with_dual(k.target)
    C, Cp = src.coalgebra, tgt.coalgebra
    j = rg.dual_morphism_of(k, src, tgt)
    CC = cobar(C, cap)
    q = weight_quotient(CC, min(2, cap))
    A = q.target
    BA = bar(A, cap)
    e = to_ccoalg_element(from_alg_morphism(q), BA)
    hf = rg.random_alg_morphism(rng, A)
    BA2 = bar(hf.target, cap)
    hb = bar_morphism(hf, BA, BA2)
    je = ccoalg_left_action(j, e)
    eh = ccoalg_right_action(e, hb)
    checks = [
        _rep_check("element equations", check_ccoalg_element(e)),
        _rep_check("left action preserves equations", check_ccoalg_element(je)),
        _rep_check("right action preserves equations", check_ccoalg_element(eh)),
    ]
    a = ccoalg_right_action(je, hb)
    b = ccoalg_left_action(j, eh)
    checks.append(_check("mixed associativity", a.g1_check == b.g1_check and a.g0 == b.g0))
    ide = ccoalg_right_action(e, identity_chc_morphism(BA))
    checks.append(_check("identity actions", ide.g1_check == e.g1_check and ide.g0 == e.g0))
    return checks


# ---------------------------------------------------------------- cobar and bar


def _cobar_of(C, cap, plus):
    return cobar(C, cap, None if plus else 5)


def cobar_case(rng: random.Random, size: Size, ring_choices=(3, 5)) -> list[Check]:
    cap = size.support
    plus = rng.random() < 0.5
    A = _algebra(rng, size, plus=plus, ring_choices=ring_choices)
    f = rg.random_alg_morphism(rng, A)
    g = rg.random_alg_morphism(rng, f.target)
    dA, dB, dC = rg.with_dual(A), rg.with_dual(f.target), rg.with_dual(g.target)
    jf, jg = rg.dual_morphism_of(f, dA, dB), rg.dual_morphism_of(g, dB, dC)  # B* -> A*, C* -> B*
    CA, CB, CCC = (_cobar_of(d.coalgebra, cap, plus) for d in (dA, dB, dC))
    cf, cg = cobar_morphism(jf, CB, CA), cobar_morphism(jg, CCC, CB)
    checks = [
        _rep_check("cobar axioms", check_curved_algebra(CA)),
        _rep_check("cobar morphism equations", check_alg_morphism(cf)),
    ]
    cid = cobar_morphism(identity_coalg_morphism(dA.coalgebra), CA, CA)
    checks.append(_check("preserves identities", cid.f1 == identity(CA.carrier, CA.ring) and cid.f0.is_zero()))
    lhs = cobar_morphism(compose_coalg_morphisms(jg, jf), CCC, CA)
    rhs = compose_alg_morphisms(cg, cf)
    checks.append(_check("preserves composition", lhs.f1 == rhs.f1 and lhs.f0 == rhs.f0))
    return checks


def bar_case(rng: random.Random, size: Size, ring_choices=(3, 5)) -> list[Check]:
    cap = size.support
    A = _algebra(rng, size, ring_choices=ring_choices)
    f = rg.random_alg_morphism(rng, A)
    g = rg.random_alg_morphism(rng, f.target)
    BA, BB, BC = bar(A, cap), bar(f.target, cap), bar(g.target, cap)
    bf, bg = bar_morphism(f, BA, BB), bar_morphism(g, BB, BC)
    checks = [
        _rep_check("bar axioms", check_chc(BA)),
        _rep_check("bar morphism equations", check_chc_morphism(bf)),
    ]
    bid = bar_morphism(identity_alg_morphism(A), BA, BA)
    ident = identity_chc_morphism(BA)
    checks.append(_check("preserves identities", _fam_eq("", bid.g1, ident.g1).ok and _fam_eq("", bid.g0, ident.g0).ok))
    lhs = bar_morphism(compose_alg_morphisms(f, g), BA, BC)
    rhs = compose_chc(bf, bg)
    checks.append(_check("preserves composition", _fam_eq("", lhs.g1, rhs.g1).ok and _fam_eq("", lhs.g0, rhs.g0).ok))
    if all(BA.carrier.degree_of(l)[1] > 0 for l in BA.carrier.labels) and not BA.delta1.nonzero(0):
        checks.append(_rep_check("embedded bar is a curved coalgebra", check_curved_coalgebra(embed_plus(BA, cap).coalgebra)))
    return checks


# ---------------------------------------------------------------- twisting cochains


def _tw_setup(rng, size: Size):
    """``(C, Cp, j, CC, CCp, cobar j, f : Cobar C -> A)`` in the positive-weight setting."""
    cap = size.support
    A0 = _algebra(rng, size, plus=True)
    k = rg.random_alg_morphism(rng, A0)
    src, tgt = rg.with_dual(A0), rg.with_dual(k.target)
    j = rg.dual_morphism_of(k, src, tgt)
    CC, CCp = cobar(src.coalgebra, cap), cobar(tgt.coalgebra, cap)
    cj = cobar_morphism(j, CCp, CC)
    f = rg.random_alg_morphism(rng, CC)
    return j, CC, CCp, cj, f


def tw_case(rng: random.Random, size: Size) -> list[Check]:
    cap = size.support
    j, CC, CCp, cj, f = _tw_setup(rng, size)
    A = f.target
    h = rg.random_alg_morphism(rng, A)
    t = from_alg_morphism(f)
    BA, BAh = bar(A, cap), bar(h.target, cap)
    e = to_ccoalg_element(t, BA)
    back = to_alg_morphism(t, CC)
    checks = [
        _rep_check("image is a twisting cochain", is_twisting_cochain(t)),
        _check("algebra side roundtrip", back.f1 == f.f1 and back.f0 == f.f0),
        _check("cochain roundtrip through algebra side", from_alg_morphism(back).theta == t.theta),
        _rep_check("element image passes its equations", check_ccoalg_element(e)),
        _check("cochain roundtrip through coalgebra side", from_ccoalg_element(e).theta == t.theta),
    ]
    e2 = to_ccoalg_element(from_ccoalg_element(e), BA)
    checks.append(_check("coalgebra side roundtrip", e2.g1_check == e.g1_check and e2.g0 == e.g0))
    # right action: theta . h  <->  f h  and  e . Bar h
    th = tw_right_action(t, h)
    checks.append(_rep_check("right action gives a twisting cochain", is_twisting_cochain(th)))
    checks.append(_eq("algebra side right equivariance", from_alg_morphism(compose_alg_morphisms(f, h)).theta, th.theta))
    eh = ccoalg_right_action(e, bar_morphism(h, BA, BAh))
    te = to_ccoalg_element(th, BAh)
    checks.append(_check("coalgebra side right equivariance", eh.g1_check == te.g1_check and eh.g0 == te.g0))
    # left action: j . theta  <->  Cobar j then f  and  j . e
    jt = tw_left_action(j, t)
    checks.append(_rep_check("left action gives a twisting cochain", is_twisting_cochain(jt)))
    checks.append(_eq("algebra side left equivariance", from_alg_morphism(compose_alg_morphisms(cj, f)).theta, jt.theta))
    je = ccoalg_left_action(j, e)
    tj = to_ccoalg_element(jt, BA)
    checks.append(_check("coalgebra side left equivariance", je.g1_check == tj.g1_check and je.g0 == tj.g0))
    a, b = tw_right_action(jt, h), tw_left_action(j, th)
    checks.append(_eq("actions commute", a.theta, b.theta))
    checks.append(_eq("identity actions", tw_right_action(tw_left_action(identity_coalg_morphism(t.source), t), identity_alg_morphism(A)).theta, t.theta))
    return checks


def adjunction_case(rng: random.Random, size: Size) -> list[Check]:
    cap = size.support
    j, CC, CCp, cj, f = _tw_setup(rng, size)
    h = rg.random_alg_morphism(rng, f.target)
    rep = adjunction_check(CC, f.target, AdjunctionSample(f, j, cj, h), cap)
    return [Check(r.name, r.ok, "" if r.ok else str(r.counterexample)) for r in rep.results]


# ---------------------------------------------------------------- registry and runner


@dataclass(frozen=True)
class Suite:
    case: Callable[[random.Random, Size], list[Check]]
    size: Size
    min_size: Size
    summary: str


SUITES: dict[str, Suite] = {
    "koszul": Suite(koszul_case, Size(3, 1), Size(1, 1), "Koszul signs, interchange, shifts and sigma"),
    "cut": Suite(cut_case, Size(4, 5), Size(1, 1), "cut comultiplication of the tensor coalgebra"),
    "lift": Suite(lift_case, Size(2, 2), Size(1, 1), "naturality, monoidality and reconstruction of lifts"),
    "compose": Suite(compose_case, Size(2, 3), Size(1, 1), "composition component formulas"),
    "curved": Suite(curved_case, Size(3, 3), Size(1, 1), "curved (co)algebras, morphisms, shifted forms"),
    "doubling": Suite(doubling_case, Size(3, 3), Size(1, 1), "checker verdicts against the doubled oracles"),
    "chc": Suite(chc_case, Size(3, 3), Size(1, 1), "curved homotopy coalgebras and their morphisms"),
    "bimodule": Suite(bimodule_case, Size(3, 3), Size(1, 1), "CCoalg bimodule laws"),
    "cobar": Suite(cobar_case, Size(3, 4), Size(1, 1), "cobar closure and functoriality"),
    "bar": Suite(bar_case, Size(3, 4), Size(1, 1), "bar closure and functoriality"),
    "tw": Suite(tw_case, Size(3, 3), Size(1, 1), "twisting cochain bijections and actions"),
    "adjunction": Suite(adjunction_case, Size(3, 3), Size(1, 1), "bar-cobar adjunction in positive weights"),
}


def suite_names() -> list[str]:
    return list(SUITES)


def _case_rng(seed: int, suite: str, index, size: Size | None = None) -> random.Random:
    tag = f"{seed}:{suite}:{index}" if size is None else f"{seed}:{suite}:{index}:{size.rank}:{size.support}"
    return random.Random(tag)


def _run_case(suite: str, seed: int, index, size: Size) -> tuple[list[Check] | None, str | None]:
    try:
        return SUITES[suite].case(_case_rng(seed, suite, index, None if size == SUITES[suite].size else size), size), None
    except Exception as exc:  # a crash is a failure of the case, reported with its type
        return None, f"{type(exc).__name__}: {exc}"


@dataclass
class SuiteReport:
    suite: str
    seed: int
    iters: int
    cases: int = 0
    failed_cases: int = 0
    checks: dict = field(default_factory=dict)
    first_failure: dict | None = None

    @property
    def ok(self) -> bool:
        return self.failed_cases == 0

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "iters": self.iters,
            "ok": self.ok,
            "cases": self.cases,
            "failed_cases": self.failed_cases,
            "checks": {k: {"passed": v[0], "total": v[1]} for k, v in self.checks.items()},
            "first_failure": self.first_failure,
        }

    def to_text(self) -> str:
        lines = [
            f"suite {self.suite}: {'ok' if self.ok else 'FAILED'}  seed={self.seed} iters={self.iters}",
            f"  cases: {self.cases - self.failed_cases} passed, {self.failed_cases} failed",
        ]
        width = max((len(k) for k in self.checks), default=0)
        for k, (p, t) in self.checks.items():
            lines.append(f"  {k.ljust(width)}  {p}/{t}")
        if self.first_failure:
            ff = self.first_failure
            lines.append(f"  first failure: case {ff['case']} check {ff['check']!r}: {ff['detail']}")
            if ff.get("shrunk"):
                s = ff["shrunk"]
                lines.append(f"  shrunk to rank={s['rank']} support={s['support']} attempt {s['attempt']}: {s['detail']}")
        return "\n".join(lines)


def _first_bad(checks, err):
    if err is not None:
        return "crash", err
    for c in checks:
        if not c.ok:
            return c.name, c.detail
    return None


def _shrink(suite: str, seed: int, index: int, name: str, attempts: int = 4):
    S = SUITES[suite]
    sizes = [
        Size(r, s)
        for r, s in itertools.product(range(S.min_size.rank, S.size.rank + 1), range(S.min_size.support, S.size.support + 1))
        if Size(r, s) != S.size
    ]
    sizes.sort(key=lambda z: (z.rank + z.support, z))
    for size in sizes:
        for attempt in range(attempts):
            checks, err = _run_case(suite, seed, (index, attempt), size)
            bad = _first_bad(checks, err)
            if bad is not None and bad[0] == name:
                return {"rank": size.rank, "support": size.support, "attempt": attempt, "detail": bad[1]}
    return None


def run_suite(suite: str, seed: int = 0, iters: int = 20, shrink: bool = True, size: Size | None = None) -> SuiteReport:
    if suite not in SUITES:
        raise KeyError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    size = size or SUITES[suite].size
    rep = SuiteReport(suite, seed, iters)
    for i in range(iters):
        checks, err = _run_case(suite, seed, i, size)
        rep.cases += 1
        bad = _first_bad(checks, err)
        for c in checks or []:
            p, t = rep.checks.get(c.name, (0, 0))
            rep.checks[c.name] = (p + c.ok, t + 1)
        if bad is not None:
            rep.failed_cases += 1
            if rep.first_failure is None:
                rep.first_failure = {"case": i, "check": bad[0], "detail": bad[1], "shrunk": None}
                if shrink:
                    rep.first_failure["shrunk"] = _shrink(suite, seed, i, bad[0])
    return rep


def _run_one(args):
    suite, seed, iters, shrink = args
    return run_suite(suite, seed, iters, shrink)


def run_suites(names, seed: int = 0, iters: int = 20, shrink: bool = True, jobs: int = 1) -> list[SuiteReport]:
    """Run several suites, concurrently when ``jobs > 1``; the result order follows ``names``."""
    tasks = [(n, seed, iters, shrink) for n in names]
    if jobs <= 1 or len(tasks) <= 1:
        return [_run_one(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_one, tasks))


def reports_json(reports: list[SuiteReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], sort_keys=True, indent=1, default=str) + "\n"
