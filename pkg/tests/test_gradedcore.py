import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import rings, seeds, small_module
from curvedcoalg.gradedcore import (
    UNIT,
    BigradedModule,
    GradedMap,
    Integers,
    PrimeField,
    StructuralError,
    compose,
    dual_module,
    identity,
    invert_diagonal,
    shift,
    shift_map,
    sigma,
    tensor,
    tensor_modules,
    tensor_power,
    transpose,
    zero_map,
)
from curvedcoalg.linalg import RowSolver, inverse, rank
from curvedcoalg.randgen import random_graded_map

ZZ = Integers()


def _dense(f, src, tgt):
    return [[f.row(s).get(t, 0) for t in tgt] for s in src]


def _block_product_oracle(f, g):
    """Per-bidegree dense matrix product, computed without compose()."""
    out = {}
    for bd in f.source.ranks:
        src = f.source.labels_at(bd)
        mid = f.target.labels_at((bd[0] + f.degree, bd[1]))
        tgt = g.target.labels_at((bd[0] + f.degree + g.degree, bd[1]))
        F, G = _dense(f, src, mid), _dense(g, mid, tgt)
        for i, s in enumerate(src):
            row = {t: f.ring.norm(sum(F[i][k] * G[k][j] for k in range(len(mid)))) for j, t in enumerate(tgt)}
            row = {t: c for t, c in row.items() if c}
            if row:
                out[s] = row
    return out


# ---------------------------------------------------------------- modules


def test_tensor_power_zero_is_unit():
    X = BigradedModule([("a", (1, 1))])
    assert tensor_power(X, 0, 5) == UNIT
    assert UNIT.ranks == {(0, 0): 1}


def test_tensor_power_single_generator():
    X = BigradedModule([("a", (1, 1))])
    assert tensor_power(X, 2, 2).ranks == {(2, 2): 1}


def test_tensor_power_two_generators():
    X = BigradedModule([("a", (0, 1)), ("b", (1, 1))])
    assert tensor_power(X, 2, 2).ranks == {(0, 2): 1, (1, 2): 2, (2, 2): 1}


def test_tensor_power_drops_weights_above_cap():
    X = BigradedModule([("a", (0, 1)), ("b", (0, 2))])
    assert tensor_power(X, 2, 3).ranks == {(0, 2): 1, (0, 3): 2}


def test_unit_powers_collapse():
    assert tensor_power(UNIT, 3) == UNIT


def test_shift_moves_degree_down():
    X = BigradedModule([("a", (0, 1))])
    assert shift(X, 2).ranks == {(-2, 1): 1}
    assert shift(X, 0) == X


def test_dual_module_negates_degree():
    X = BigradedModule([("a", (2, 1))])
    assert dual_module(X).ranks == {(-2, 1): 1}


def test_weight_must_be_natural():
    with pytest.raises((ValueError, StructuralError)):
        BigradedModule([("a", (0, -1))])


# ---------------------------------------------------------------- maps


def test_entries_must_respect_degree():
    X = BigradedModule([("a", (0, 0)), ("b", (1, 0))])
    with pytest.raises(StructuralError):
        GradedMap(X, X, 0, ZZ, {"a": {"b": 1}})


def test_compose_identity_and_zero():
    X = BigradedModule([("a", (0, 0)), ("b", (1, 0))])
    f = GradedMap(X, X, 1, ZZ, {"a": {"b": 3}})
    assert compose(identity(X, ZZ), identity(X, ZZ)) == identity(X, ZZ)
    assert compose(f, zero_map(X, X, 0, ZZ)).is_zero()
    assert (f >> f).degree == 2


def test_compose_rejects_mismatch():
    X = BigradedModule([("a", (0, 0))])
    Y = BigradedModule([("b", (0, 0))])
    with pytest.raises(StructuralError):
        identity(X, ZZ) >> identity(Y, ZZ)


def test_compose_matches_block_product_over_z7():
    rng = random.Random(7)
    F7 = PrimeField(7)
    X, Y, Z = (small_module(rng, 4, p) for p in "xyz")
    f = random_graded_map(rng, X, Y, 1, F7, 0.7)
    g = random_graded_map(rng, Y, Z, 2, F7, 0.7)
    h = f >> g
    assert h.degree == 3
    oracle = _block_product_oracle(f, g)
    assert {s: h.row(s) for s in X.labels if h.row(s)} == oracle


def test_tensor_of_identities_is_identity():
    X = BigradedModule([("a", (1, 0)), ("b", (0, 1))])
    Y = BigradedModule([("c", (-1, 0))])
    assert tensor(identity(X, ZZ), identity(Y, ZZ)) == identity(tensor_modules(X, Y), ZZ)


def test_tensor_sign_on_basis():
    # f of degree 1 passes y of degree 1: sign -1; degree-0 y: sign +1
    X = BigradedModule([("a", (0, 0)), ("b", (1, 0))])
    Y = BigradedModule([("y0", (0, 0)), ("y1", (1, 0))])
    f = GradedMap(X, X, 1, ZZ, {"a": {"b": 1}})
    g = identity(Y, ZZ)
    fg = tensor(f, g)
    assert fg.row(("a", "y0")) == {("b", "y0"): 1}
    assert fg.row(("a", "y1")) == {("b", "y1"): -1}


def test_degree_zero_never_signs():
    X = BigradedModule([("a", (0, 0)), ("b", (1, 0))])
    f = GradedMap(X, X, 1, ZZ, {"a": {"b": 1}})
    g = GradedMap(X, X, 0, ZZ, {"a": {"a": 1}, "b": {"b": 1}})
    # exponent z(b) * deg f with z(b) = 0 for the source label "a" of g
    assert tensor(f, g).row(("a", "a")) == {("b", "a"): 1}


def test_interchange_rank_two_over_integers():
    X = BigradedModule([("a", (0, 0)), ("b", (1, 0))])
    f = GradedMap(X, X, 1, ZZ, {"a": {"b": 2}})
    g = GradedMap(X, X, 1, ZZ, {"a": {"b": -1}})
    one = identity(X, ZZ)
    assert tensor(f, one) >> tensor(one, g) == tensor(f, g)
    assert tensor(one, g) >> tensor(f, one) == tensor(f, g).scale(-1)


def test_sigma_zero_is_identity():
    X = BigradedModule([("a", (1, 1))])
    assert sigma(X, 0, ZZ) == identity(X, ZZ)


def test_shift_map_degree_one_sign():
    X = BigradedModule([("a", (0, 0)), ("b", (1, 0))])
    f = GradedMap(X, X, 1, ZZ, {"a": {"b": 1}})
    expected = (sigma(shift(X, 1), -1, ZZ) >> f >> sigma(X, 1, ZZ)).scale(-1)
    assert shift_map(f, 1) == expected


def test_transpose_involutive():
    rng = random.Random(3)
    X, Y = small_module(rng, 3, "x"), small_module(rng, 3, "y")
    f = random_graded_map(rng, X, Y, 0, ZZ, 0.8)
    assert transpose(transpose(f)) == f


def test_invert_diagonal():
    X = BigradedModule([("a", (0, 0)), ("b", (1, 0))])
    d = GradedMap(X, X, 0, ZZ, {"a": {"a": -1}, "b": {"b": 1}})
    assert d >> invert_diagonal(d) == identity(X, ZZ)


# ---------------------------------------------------------------- exact linear algebra


def test_row_solver_over_prime_field():
    F5 = PrimeField(5)
    m = [[1, 2, 0], [0, 1, 1], [1, 3, 1]]  # third row = first + second
    assert rank(m, F5) == 2
    s = RowSolver(m, 3, F5)
    assert len(s.kernel) == 1
    k = s.kernel[0]
    assert all(F5.norm(sum(k[i] * m[i][j] for i in range(3))) == 0 for j in range(3))


def test_inverse_over_integers():
    m = [[2, 1], [1, 1]]
    inv = inverse(m, ZZ)
    assert inv == [[1, -1], [-1, 2]]
    assert inverse([[2]], ZZ) is None


# ---------------------------------------------------------------- properties


@given(seeds, rings, st.integers(-2, 2), st.integers(-2, 2))
def test_sigma_composes_additively(seed, R, a, b):
    X = small_module(random.Random(seed))
    assert sigma(X, a, R) >> sigma(shift(X, a), b, R) == sigma(X, a + b, R)


@given(seeds, rings, st.integers(-2, 2))
def test_shift_is_a_functor(seed, R, n):
    rng = random.Random(seed)
    X, Y, Z = (small_module(rng, 3, p) for p in "xyz")
    f = random_graded_map(rng, X, Y, rng.randint(-1, 1), R)
    g = random_graded_map(rng, Y, Z, rng.randint(-1, 1), R)
    assert shift_map(f >> g, n) == shift_map(f, n) >> shift_map(g, n)
    assert shift_map(identity(X, R), n) == identity(shift(X, n), R)


@given(seeds, rings, st.integers(-2, 2))
def test_sigma_dinaturality(seed, R, n):
    rng = random.Random(seed)
    X, Y = small_module(rng, 3, "x"), small_module(rng, 3, "y")
    d = rng.randint(-1, 1)
    f = random_graded_map(rng, X, Y, d, R)
    sign = -1 if (n * d) % 2 else 1
    assert sigma(X, n, R) >> shift_map(f, n) == (f >> sigma(Y, n, R)).scale(sign)


@given(seeds, rings)
def test_general_interchange(seed, R):
    rng = random.Random(seed)
    X, Y, Z, U, V, W = (small_module(rng, 2, p) for p in "xyzuvw")
    f, g = random_graded_map(rng, X, Y, rng.randint(-1, 1), R), random_graded_map(rng, U, V, rng.randint(-1, 1), R)
    h, k = random_graded_map(rng, Y, Z, rng.randint(-1, 1), R), random_graded_map(rng, V, W, rng.randint(-1, 1), R)
    sign = -1 if (g.degree * h.degree) % 2 else 1
    assert tensor(f, g) >> tensor(h, k) == tensor(f >> h, g >> k).scale(sign)


@given(seeds, rings)
def test_compose_associative(seed, R):
    rng = random.Random(seed)
    X, Y, Z, W = (small_module(rng, 3, p) for p in "xyzw")
    f, g, h = (random_graded_map(rng, A, B, rng.randint(-1, 1), R) for A, B in ((X, Y), (Y, Z), (Z, W)))
    assert (f >> g) >> h == f >> (g >> h)
