import random

import pytest
from hypothesis import given, settings

from conftest import rings, seeds
from curvedcoalg.gradedcore import UNIT, BigradedModule, GradedMap, Integers, PrimeField, StructuralError, identity, tensor, tensor_power
from curvedcoalg.ordcat import MultiIndex
from curvedcoalg.randgen import random_graded_map
from curvedcoalg.tensorcoalg import (
    ComponentFamily,
    TensorCoalgebra,
    check_monoidality,
    check_naturality,
    cofree_lift,
    compose_evaluators,
    compose_morphism_components,
    compose_postcoderivation,
    compose_precoderivation,
    cut_comultiplication,
    extract_components,
    identity_family,
    lift_coderivation,
    lift_morphism,
    map_sum,
    square_coderivation,
)

ZZ = Integers()
F5 = PrimeField(5)
X = BigradedModule([("a", (0, 1)), ("b", (1, 1))])


def _family(rng, src, tgt, degree, ring, K, cap, arities=None):
    arities = range(K + 1) if arities is None else arities
    comps = {k: random_graded_map(rng, tensor_power(src, k, cap), tgt, degree, ring, 0.6) for k in arities}
    return ComponentFamily(src, tgt, degree, ring, comps, K, cap)


# ---------------------------------------------------------------- cut comultiplication


def test_cut_on_two_letter_word():
    T = TensorCoalgebra(X, 3)
    d2 = cut_comultiplication(T, 2, ZZ)
    assert d2.row(("a", "b")) == {((), ("a", "b")): 1, (("a",), ("b",)): 1, (("a", "b"), ()): 1}


def test_cut_arity_one_is_identity():
    T = TensorCoalgebra(X, 3)
    assert cut_comultiplication(T, 1, ZZ) == identity(T.module, ZZ)


def test_cut_arity_zero_is_projection_to_empty_word():
    T = TensorCoalgebra(X, 3)
    d0 = cut_comultiplication(T, 0, ZZ)
    assert d0.row(()) == {(): 1}
    assert d0.row(("a",)) == {}


def test_cut_three_enumerates_compositions():
    T = TensorCoalgebra(X, 3)
    d3 = cut_comultiplication(T, 3, ZZ)
    for w in T.words():
        n = len(w)
        expected = {}
        for i in range(n + 1):
            for j in range(i, n + 1):
                key = (w[:i], w[i:j], w[j:])
                expected[key] = expected.get(key, 0) + 1
        assert d3.row(w) == expected


def test_weight_zero_generators_need_arity_cap():
    Z0 = BigradedModule([("e", (0, 0))])
    with pytest.raises(ValueError):
        TensorCoalgebra(Z0, 2)
    assert TensorCoalgebra(Z0, 2, 3).max_length == 3


# ---------------------------------------------------------------- lifts


def test_identity_family_lifts_to_identity():
    E = lift_morphism(identity_family(X, ZZ, 3))
    for n in [(1,), (2,), (1, 1), (2, 1), (0, 3)]:
        for m in E.support_indices(n):
            b = E.block(n, m)
            if m == MultiIndex(n):
                assert b == identity(b.source, ZZ)
            else:
                assert b.is_zero()


def test_length_three_to_two_block():
    rng = random.Random(11)
    f1 = random_graded_map(rng, X, X, 0, ZZ, 1.0)
    f2 = random_graded_map(rng, tensor_power(X, 2, 3), X, 0, ZZ, 1.0)
    f = ComponentFamily(X, X, 0, ZZ, {1: f1, 2: f2}, 2, 3)
    b = lift_morphism(f).block((2,), (3,))
    expected = map_sum([tensor(f1, f2), tensor(f2, f1)], b.source, b.target, 0, ZZ)
    assert b.first_difference(expected) is None


def test_lift_rejects_nonzero_degree():
    f = ComponentFamily(X, X, 1, ZZ, {}, 1)
    with pytest.raises(StructuralError):
        lift_morphism(f)


def test_zero_coderivation_lifts_to_zero():
    idf = identity_family(X, ZZ, 3)
    E = lift_coderivation(idf, idf, ComponentFamily(X, X, 1, ZZ, {}, 2, 3))
    for n in [(1,), (2,), (1, 1)]:
        assert all(b.is_zero() for b in E.component(len(n), n).values())


def test_coderivation_along_identities():
    rng = random.Random(5)
    xi = _family(rng, X, X, 1, ZZ, 2, 3)
    idf = identity_family(X, ZZ, 3)
    E = lift_coderivation(idf, idf, xi)
    one = identity(X, ZZ)
    for n_len, m_len in [(1, 2), (2, 2), (2, 3), (3, 3)]:
        k = m_len + 1 - n_len
        b = E.block((n_len,), (m_len,))
        terms = [tensor(*([one] * u + [xi.component(k)] + [one] * (n_len - 1 - u))) for u in range(n_len)]
        assert b.first_difference(map_sum(terms, b.source, b.target, 1, ZZ)) is None


def test_extraction_recovers_components():
    rng = random.Random(2)
    f = _family(rng, X, X, 0, F5, 2, 3)
    assert extract_components(lift_morphism(f)).equals(f)


# ---------------------------------------------------------------- composition formulas


def test_compose_with_identity_family():
    rng = random.Random(8)
    f = _family(rng, X, X, 0, ZZ, 2, 3)
    idf = identity_family(X, ZZ, 3)
    assert compose_morphism_components(f, idf).equals(f)
    assert compose_morphism_components(idf, f).equals(f)


def test_strict_then_two_components():
    rng = random.Random(9)
    f1 = random_graded_map(rng, X, X, 0, ZZ, 1.0)
    f = ComponentFamily(X, X, 0, ZZ, {1: f1}, 1, 3)
    g = _family(rng, X, X, 0, ZZ, 2, 3, arities=(1, 2))
    h = compose_morphism_components(f, g)
    assert h.component(1).first_difference(f1 >> g.component(1)) is None
    h2 = tensor(f1, f1) >> g.component(2)
    assert h.component(2).first_difference(GradedMap(h.domain(2), X, 0, ZZ, rule=h2.row)) is None


def test_precoderivation_identity_and_zero():
    rng = random.Random(4)
    xi = _family(rng, X, X, 1, ZZ, 2, 3)
    idf = identity_family(X, ZZ, 3)
    assert compose_precoderivation(idf, xi).equals(xi)
    zero = ComponentFamily(X, X, 1, ZZ, {}, 2, 3)
    assert compose_precoderivation(idf, zero).equals(zero)
    assert compose_postcoderivation(idf, idf, zero, idf).equals(zero)


def test_square_of_linear_part_only():
    xi1 = GradedMap(X, X, 1, ZZ, {"a": {"b": 3}})
    xi = ComponentFamily(X, X, 1, ZZ, {1: xi1}, 1, 3)
    sq = square_coderivation(xi)
    assert sq.component(1) == xi1 >> xi1
    assert all(sq.component(k).is_zero() for k in (0, 2))
    with pytest.raises(StructuralError):
        square_coderivation(ComponentFamily(X, X, 0, ZZ, {}, 1))


def test_square_of_zero_is_zero():
    sq = square_coderivation(ComponentFamily(X, X, 1, ZZ, {}, 2, 3))
    assert all(sq.component(k).is_zero() for k in range(sq.K + 1))


# ---------------------------------------------------------------- cofree lift


def test_cofree_lift_of_zero_vanishes():
    C = BigradedModule([("1", (0, 0)), ("c", (0, 1))])
    d2 = GradedMap(C, tensor_power(C, 2), 0, ZZ, {"1": {("1", "1"): 1}, "c": {("1", "c"): 1, ("c", "1"): 1}})
    eps = GradedMap(C, UNIT, 0, ZZ, {"1": {(): 1}})
    lift = cofree_lift(C, d2, eps, GradedMap(C, X, 0, ZZ, {}), ZZ)
    assert all(lift(I).is_zero() for I in (1, 2, 3))


def test_cofree_lift_on_trivial_coalgebra():
    K = BigradedModule([("1", (0, 0))])
    Y = BigradedModule([("y", (0, 0))])
    d2 = GradedMap(K, tensor_power(K, 2), 0, ZZ, {"1": {("1", "1"): 1}})
    eps = GradedMap(K, UNIT, 0, ZZ, {"1": {(): 1}})
    t = GradedMap(K, Y, 0, ZZ, {"1": {"y": 2}})
    lift = cofree_lift(K, d2, eps, t, ZZ)
    assert lift(1) == t
    assert lift(3).row("1") == {("y", "y", "y"): 8}


def test_cofree_lift_first_component_is_t():
    rng = random.Random(1)
    C = BigradedModule([("1", (0, 0)), ("c", (1, 1)), ("e", (0, 1))])
    d2 = GradedMap(
        C, tensor_power(C, 2), 0, ZZ,
        {"1": {("1", "1"): 1}, "c": {("1", "c"): 1, ("c", "1"): 1}, "e": {("1", "e"): 1, ("e", "1"): 1}},
    )
    eps = GradedMap(C, UNIT, 0, ZZ, {"1": {(): 1}})
    t = random_graded_map(rng, C, X, 0, ZZ, 1.0)
    assert cofree_lift(C, d2, eps, t, ZZ)(1) == t


# ---------------------------------------------------------------- properties


@settings(max_examples=15)
@given(seeds, rings)
def test_lift_is_natural_and_monoidal(seed, R):
    rng = random.Random(seed)
    Y = BigradedModule([("p", (0, 1)), ("q", (1, 1))])
    f = _family(rng, X, Y, 0, R, 2, 3, arities=(1, 2))
    E = lift_morphism(f)
    assert check_naturality(E, 2, 2, 3) is None
    assert check_monoidality(E, 2, 2, 3) is None


@settings(max_examples=10)
@given(seeds, rings)
def test_composition_formula_matches_composed_lifts(seed, R):
    rng = random.Random(seed)
    f = _family(rng, X, X, 0, R, 2, 3, arities=(1, 2))
    g = _family(rng, X, X, 0, R, 2, 3, arities=(1, 2))
    h = compose_morphism_components(f, g)
    direct = compose_evaluators(lift_morphism(f), lift_morphism(g))
    for k in range(4):
        assert h.component(k).first_difference(direct.block((1,), (k,))) is None


@settings(max_examples=10)
@given(seeds)
def test_square_matches_composed_lift(seed):
    rng = random.Random(seed)
    xi = _family(rng, X, X, 1, ZZ, 2, 3, arities=(0, 1, 2))
    idf = identity_family(X, ZZ, 3)
    E = lift_coderivation(idf, idf, xi)
    EE = compose_evaluators(E, E)
    sq = square_coderivation(xi)
    for k in range(4):
        assert sq.component(k).first_difference(EE.block((1,), (k,))) is None


@settings(max_examples=10)
@given(seeds, rings)
def test_cut_is_coassociative_and_counital(seed, R):
    rng = random.Random(seed)
    gens = [(f"x{i}", (rng.randint(-1, 1), 1)) for i in range(rng.randint(1, 3))]
    T = TensorCoalgebra(BigradedModule(gens), 3)
    M = T.module
    d2, d0 = cut_comultiplication(T, 2, R), cut_comultiplication(T, 0, R)
    one = identity(M, R)
    assert d2 >> tensor(d2, one) == d2 >> tensor(one, d2) == cut_comultiplication(T, 3, R)
    assert (d2 >> tensor(d0, one)).first_difference(one) is None
    assert (d2 >> tensor(one, d0)).first_difference(one) is None
