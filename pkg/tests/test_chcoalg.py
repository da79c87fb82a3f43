import random

import pytest
from hypothesis import given, settings

from conftest import rings, seeds, square_zero_algebra
from curvedcoalg import randgen as rg
from curvedcoalg.barcobar import bar, bar_morphism, cobar, from_alg_morphism, to_ccoalg_element
from curvedcoalg.chcoalg import (
    CHCMorphism,
    CurvedHomotopyCoalgebraData,
    ccoalg_left_action,
    ccoalg_right_action,
    check_ccoalg_element,
    check_chc,
    check_chc_morphism,
    compose_chc,
    element_to_morphism,
    embed_plus,
    embed_plus_morphism,
    identity_chc_morphism,
    morphism_to_element,
)
from curvedcoalg.curved import (
    check_coalg_morphism,
    check_curved_coalgebra,
    compose_coalg_morphisms,
    identity_coalg_morphism,
    weight_quotient,
)
from curvedcoalg.gradedcore import UNIT, BigradedModule, GradedMap, Integers, StructuralError
from curvedcoalg.tensorcoalg import ComponentFamily, identity_family

ZZ = Integers()
CAP = 3


def chc(X, d1=None, d0=None, cap=CAP):
    delta1 = ComponentFamily(X, X, 1, ZZ, d1 or {}, max(d1 or {0: None}), cap)
    delta0 = ComponentFamily(X, UNIT, 2, ZZ, d0 or {}, max(d0 or {0: None}), cap)
    return CurvedHomotopyCoalgebraData(X, ZZ, delta1, delta0, cap)


X3 = BigradedModule([("m", (-1, 1)), ("a", (0, 1)), ("b", (1, 1)), ("c", (2, 1))])


def dg(rows):
    return chc(X3, {1: GradedMap(X3, X3, 1, ZZ, rows)})


def _families_equal(f, g):
    return f.g1.equals(g.g1) and f.g0.equals(g.g0)


# ---------------------------------------------------------------- structures


def test_zero_structure_passes():
    assert check_chc(chc(X3), 4).ok


def test_dg_case_passes():
    assert check_chc(dg({"a": {"b": 1}}), 4).ok


def test_dg_case_with_nonzero_square_fails():
    rep = check_chc(dg({"a": {"b": 1}, "b": {"c": 1}}), 4)
    assert rep.failed() == ["delta1^2 axiom"]


def test_degrees_are_enforced():
    fam = ComponentFamily(X3, X3, 0, ZZ, {}, 0)
    with pytest.raises(StructuralError):
        CurvedHomotopyCoalgebraData(X3, ZZ, fam, ComponentFamily(X3, UNIT, 2, ZZ, {}, 0))


def test_bar_of_plus_algebra_passes():
    A = square_zero_algebra(ZZ, {"a": (0, 1), "b": (1, 1)}, {"a": {"b": 2}})
    assert check_chc(bar(A, CAP)).ok


# ---------------------------------------------------------------- morphisms


def test_identity_morphism_passes():
    X = dg({"a": {"b": 1}})
    assert check_chc_morphism(identity_chc_morphism(X), 4).ok


def test_perturbed_g0_fails_curvature_equation():
    # g0 only sees weight 0, so use a weight-0 carrier
    Y = BigradedModule([("n", (-1, 0)), ("a", (0, 0)), ("b", (1, 0))])
    X = chc(Y, {1: GradedMap(Y, Y, 1, ZZ, {"a": {"b": 1}})})
    assert check_chc_morphism(identity_chc_morphism(X), 4).ok
    g0 = ComponentFamily(Y, UNIT, 1, ZZ, {1: GradedMap(Y, UNIT, 1, ZZ, {"n": {(): 1}})}, 1, CAP)
    g = CHCMorphism(X, X, identity_family(Y, ZZ, CAP), g0)
    assert "curvature equation" in check_chc_morphism(g, 4).failed()


def test_compose_with_identity_is_unchanged():
    X = dg({"a": {"b": 1}})
    g1 = ComponentFamily(X3, X3, 0, ZZ, {1: GradedMap(X3, X3, 0, ZZ, {x: {x: 1} for x in X3.labels})}, 1, CAP)
    g = CHCMorphism(X, X, g1, ComponentFamily(X3, UNIT, 1, ZZ, {}, 0, CAP))
    ident = identity_chc_morphism(X)
    assert _families_equal(compose_chc(ident, g), g)
    assert _families_equal(compose_chc(g, ident), g)


# ---------------------------------------------------------------- the positive-weight embedding


def test_embedding_of_zero_structure():
    E = embed_plus(chc(X3), CAP)
    C = E.coalgebra
    assert C.delta1.is_zero() and C.delta0.is_zero()
    assert check_curved_coalgebra(C).ok


def test_embedding_of_dg_case_is_a_tensor_coalgebra_differential():
    E = embed_plus(dg({"a": {"b": 1}}), CAP)
    C = E.coalgebra
    # the differential passes the letter to its right with a Koszul sign
    assert C.delta1.row(("a", "b")) == {("b", "b"): -1}
    assert C.delta1.row(("b", "a")) == {("b", "b"): 1}
    assert check_curved_coalgebra(C).ok


def test_embedding_needs_positive_weight():
    Y = BigradedModule([("e", (0, 0))])
    with pytest.raises(StructuralError):
        embed_plus(chc(Y), CAP)


# ---------------------------------------------------------------- properties


def _plus_algebra(seed, R):
    rng = random.Random(seed)
    return rng, rg.random_algebra(rng, R, plus=True, max_rank=3, max_weight=CAP)


@settings(max_examples=20)
@given(seeds, rings)
def test_bar_embeds_as_curved_coalgebra(seed, R):
    rng, A = _plus_algebra(seed, R)
    f = rg.random_alg_morphism(rng, A, allow_quotient=False)
    BA, BB = bar(A, CAP), bar(f.target, CAP)
    EA, EB = embed_plus(BA, CAP), embed_plus(BB, CAP)
    assert check_curved_coalgebra(EA.coalgebra).ok
    assert check_coalg_morphism(embed_plus_morphism(bar_morphism(f, BA, BB), EA, EB)).ok


@settings(max_examples=20)
@given(seeds, rings)
def test_composition_of_bar_morphisms(seed, R):
    rng, A = _plus_algebra(seed, R)
    f = rg.random_alg_morphism(rng, A)
    g = rg.random_alg_morphism(rng, f.target)
    BA, BB, BC = bar(A, CAP), bar(f.target, CAP), bar(g.target, CAP)
    bf, bg = bar_morphism(f, BA, BB), bar_morphism(g, BB, BC)
    h = compose_chc(bf, bg)
    assert check_chc_morphism(h).ok
    assert _families_equal(compose_chc(identity_chc_morphism(BA), bf), bf)


def _element_setup(seed, R):
    rng, A0 = _plus_algebra(seed, R)
    k = rg.random_alg_morphism(rng, A0)
    src, tgt = rg.with_dual(A0), rg.with_dual(k.target)
    j = rg.dual_morphism_of(k, src, tgt)
    q = weight_quotient(cobar(src.coalgebra, CAP), 2)
    BA = bar(q.target, CAP)
    return rng, j, q.target, BA, to_ccoalg_element(from_alg_morphism(q), BA)


@settings(max_examples=15)
@given(seeds, rings)
def test_actions_preserve_equations_and_associate(seed, R):
    rng, j, A, BA, e = _element_setup(seed, R)
    assert check_ccoalg_element(e).ok
    hf = rg.random_alg_morphism(rng, A)
    h = bar_morphism(hf, BA, bar(hf.target, CAP))
    je, eh = ccoalg_left_action(j, e), ccoalg_right_action(e, h)
    assert check_ccoalg_element(je).ok and check_ccoalg_element(eh).ok
    a, b = ccoalg_right_action(je, h), ccoalg_left_action(j, eh)
    assert a.g1_check == b.g1_check and a.g0 == b.g0
    ide = ccoalg_right_action(e, identity_chc_morphism(BA))
    assert ide.g1_check == e.g1_check and ide.g0 == e.g0
    idl = ccoalg_left_action(identity_coalg_morphism(e.source), e)
    assert idl.g1_check == e.g1_check and idl.g0 == e.g0
    jj = compose_coalg_morphisms(j, identity_coalg_morphism(j.target))
    assert ccoalg_left_action(jj, e).g1_check == je.g1_check


@settings(max_examples=15)
@given(seeds, rings)
def test_elements_match_morphisms_into_embedding(seed, R):
    _, _, _, BA, e = _element_setup(seed, R)
    E = embed_plus(BA, CAP)
    f = element_to_morphism(e, E)
    assert check_coalg_morphism(f).ok
    back = morphism_to_element(f, E)
    assert back.g1_check == e.g1_check and back.g0 == e.g0
