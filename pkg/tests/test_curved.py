import random

import pytest
from hypothesis import given, settings

from conftest import rings, seeds, square_zero_algebra
from curvedcoalg import randgen as rg
from curvedcoalg.curved import (
    CurvedAlgMorphism,
    check_alg_morphism,
    check_algebra_hom,
    check_associative_algebra,
    check_coalg_morphism,
    check_coalgebra,
    check_coalgebra_hom,
    check_curved_algebra,
    check_curved_coalgebra,
    check_shifted_algebra,
    check_shifted_coalgebra,
    compose_alg_morphisms,
    compose_coalg_morphisms,
    double_alg_morphism,
    double_algebra,
    double_coalg_morphism,
    double_coalgebra,
    dual_algebra,
    from_shifted_algebra,
    from_shifted_coalgebra,
    identity_alg_morphism,
    identity_coalg_morphism,
    to_shifted_algebra,
    to_shifted_coalgebra,
    trivial_algebra,
    trivial_coalgebra,
    twist_algebra,
    twist_morphism,
    weight_quotient,
)
from curvedcoalg.gradedcore import UNIT, GradedMap, Integers, PrimeField, StructuralError
from curvedcoalg.mutations import apply_mutation, candidate_mutations

ZZ = Integers()
F3 = PrimeField(3)


def dual_numbers(a: int, ring=ZZ):
    return square_zero_algebra(ring, {"e": (-a, 0)})


def square_zero_with_differential(extra=None):
    m1 = {"x": {"y": 1}}
    m1.update(extra or {})
    return square_zero_algebra(ZZ, {"x": (1, 1), "y": (2, 1), "u": (3, 1)}, m1)


def curved_point():
    """``k 1 + k c`` with ``c`` of degree 2 as curvature."""
    return square_zero_algebra(ZZ, {"c": (2, 0)}, m0={"c": 1})


def _same_morphism(f, g):
    return f.f1 == g.f1 and f.f0 == g.f0


# ---------------------------------------------------------------- axioms


def test_trivial_algebra_and_coalgebra_pass():
    assert check_curved_algebra(trivial_algebra(ZZ)).ok
    assert check_curved_coalgebra(trivial_coalgebra(ZZ)).ok


@pytest.mark.parametrize("a", [1, 2, -1])
def test_dual_numbers_pass(a):
    assert check_curved_algebra(dual_numbers(a)).ok


def test_differential_that_squares_to_nonzero_fails_only_m1_squared():
    A = square_zero_with_differential({"y": {"u": 1}})
    rep = check_curved_algebra(A)
    assert rep.failed() == ["m1^2 axiom"]
    assert rep.result("m1^2 axiom").counterexample is not None


def test_curvature_is_allowed():
    assert check_curved_algebra(curved_point()).ok


def test_curvature_not_killed_by_differential_fails():
    A = square_zero_algebra(ZZ, {"c": (2, 0), "d": (3, 0)}, {"c": {"d": 1}}, m0={"c": 1})
    assert "m0 m1 = 0" in check_curved_algebra(A).failed()


def test_wrong_shapes_are_structural_errors():
    A = trivial_algebra(ZZ)
    with pytest.raises(StructuralError):
        type(A)(A.carrier, ZZ, A.m1, A.m1, A.m0, A.eta)


def test_dual_of_passing_algebra_passes():
    for A in (dual_numbers(1), square_zero_with_differential(), curved_point()):
        assert check_curved_coalgebra(dual_algebra(A)).ok


def test_mutated_coalgebra_differential_fails():
    C = dual_algebra(square_zero_with_differential())
    muts = [m for m in candidate_mutations(C) if m.field == "delta1"]
    assert muts
    assert not check_curved_coalgebra(apply_mutation(C, muts[0])).ok


# ---------------------------------------------------------------- doubling


def test_doubling_flat_algebra_is_exterior_extension():
    Ad = double_algebra(trivial_algebra(ZZ))
    assert len(Ad.carrier.labels) == 2
    assert Ad.m2.row((("D", "1"), ("D", "1"))) == {}
    assert Ad.m2.row((("A", "1"), ("D", "1"))) == {("D", "1"): 1}
    assert check_associative_algebra(Ad).ok


def test_doubling_squares_d_to_minus_curvature():
    Ad = double_algebra(curved_point())
    assert Ad.m2.row((("D", "1"), ("D", "1"))) == {("A", "c"): -1}
    assert check_associative_algebra(Ad).ok


def test_doubling_detects_failures():
    assert not check_associative_algebra(double_algebra(square_zero_with_differential({"y": {"u": 1}}))).ok
    A = square_zero_algebra(ZZ, {"c": (2, 0), "d": (3, 0)}, {"c": {"d": 1}}, m0={"c": 1})
    assert not check_associative_algebra(double_algebra(A)).ok


def test_doubled_coalgebra_of_dual():
    for A in (trivial_algebra(ZZ), curved_point(), square_zero_with_differential()):
        assert check_coalgebra(double_coalgebra(dual_algebra(A))).ok
    bad = dual_algebra(square_zero_with_differential({"y": {"u": 1}}))
    assert not check_coalgebra(double_coalgebra(bad)).ok


# ---------------------------------------------------------------- morphisms


def test_identity_morphisms_pass():
    A = curved_point()
    assert check_alg_morphism(identity_alg_morphism(A)).ok
    assert check_coalg_morphism(identity_coalg_morphism(dual_algebra(A))).ok


def test_twist_is_an_isomorphism():
    A = square_zero_algebra(ZZ, {"x": (1, 0), "y": (2, 0)}, {"x": {"y": 1}})
    B = twist_algebra(A, {"x": 1})
    assert B.m0.row(()) == {"y": -1}
    assert check_curved_algebra(B).ok
    f = twist_morphism(A, {"x": 1})
    assert check_alg_morphism(f).ok
    back = CurvedAlgMorphism(B, A, f.f1, f.f0.scale(-1))
    assert _same_morphism(compose_alg_morphisms(f, back), identity_alg_morphism(A))


def test_weight_quotient_is_a_morphism():
    q = weight_quotient(square_zero_with_differential(), 0)
    assert check_curved_algebra(q.target).ok
    assert check_alg_morphism(q).ok
    assert q.target.carrier.labels == ("1",)


def test_broken_curvature_equation():
    A = curved_point()
    f = identity_alg_morphism(A)
    f = CurvedAlgMorphism(A, A, f.f1, GradedMap(UNIT, A.carrier, 1, ZZ, {}))
    assert check_alg_morphism(f).ok
    g = CurvedAlgMorphism(A, A, GradedMap(A.carrier, A.carrier, 0, ZZ, {"1": {"1": 1}}), f.f0)
    assert "curvature equation" in check_alg_morphism(g).failed()


# ---------------------------------------------------------------- shifted operations


def test_shifted_form_of_examples():
    for A in (trivial_algebra(ZZ), curved_point(), square_zero_with_differential()):
        S = to_shifted_algebra(A)
        assert check_shifted_algebra(S).ok
        assert from_shifted_algebra(S) == A
        Sc = to_shifted_coalgebra(dual_algebra(A))
        assert check_shifted_coalgebra(Sc).ok
        assert from_shifted_coalgebra(Sc) == dual_algebra(A)


def test_shifted_form_sees_failures():
    S = to_shifted_algebra(square_zero_with_differential({"y": {"u": 1}}))
    assert not check_shifted_algebra(S).ok


# ---------------------------------------------------------------- properties


def _algebra(seed, R, plus=False):
    rng = random.Random(seed)
    return rng, rg.random_algebra(rng, R, plus=plus, max_rank=3, max_weight=3)


@settings(max_examples=25)
@given(seeds, rings)
def test_random_algebras_and_duals_pass(seed, R):
    _, A = _algebra(seed, R)
    assert check_curved_algebra(A).ok
    assert check_curved_coalgebra(dual_algebra(A)).ok
    assert check_associative_algebra(double_algebra(A)).ok


@settings(max_examples=25)
@given(seeds, rings)
def test_composition_is_associative_and_unital(seed, R):
    rng, A = _algebra(seed, R)
    f = rg.random_alg_morphism(rng, A)
    g = rg.random_alg_morphism(rng, f.target)
    h = rg.random_alg_morphism(rng, g.target)
    assert check_alg_morphism(compose_alg_morphisms(f, g)).ok
    assert _same_morphism(compose_alg_morphisms(compose_alg_morphisms(f, g), h), compose_alg_morphisms(f, compose_alg_morphisms(g, h)))
    assert _same_morphism(compose_alg_morphisms(identity_alg_morphism(A), f), f)
    assert _same_morphism(compose_alg_morphisms(f, identity_alg_morphism(f.target)), f)


@settings(max_examples=20)
@given(seeds, rings)
def test_morphism_verdict_matches_doubling(seed, R):
    rng, A = _algebra(seed, R)
    f = rg.random_alg_morphism(rng, A)
    Ad, Bd = double_algebra(A), double_algebra(f.target)
    assert check_algebra_hom(Ad, Bd, double_alg_morphism(f)).ok
    for m in candidate_mutations(f)[:3]:
        bad = apply_mutation(f, m)
        assert check_alg_morphism(bad).ok == check_algebra_hom(Ad, Bd, double_alg_morphism(bad)).ok


@settings(max_examples=20)
@given(seeds, rings)
def test_dual_morphisms_compose_contravariantly(seed, R):
    rng, A = _algebra(seed, R)
    f = rg.random_alg_morphism(rng, A)
    g = rg.random_alg_morphism(rng, f.target)
    dA, dB, dC = rg.with_dual(A), rg.with_dual(f.target), rg.with_dual(g.target)
    df, dg = rg.dual_morphism_of(f, dA, dB), rg.dual_morphism_of(g, dB, dC)
    comp = compose_coalg_morphisms(dg, df)
    assert check_coalg_morphism(comp).ok
    assert check_coalgebra_hom(double_coalgebra(comp.source), double_coalgebra(comp.target), double_coalg_morphism(comp)).ok
    direct = rg.dual_morphism_of(compose_alg_morphisms(f, g), dA, dC)
    assert comp.g1 == direct.g1 and comp.g0 == direct.g0
