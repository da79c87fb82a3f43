import itertools
from math import comb

import pytest

from curvedcoalg.ordcat import (
    MultiIndex,
    OrdMap,
    compose_ord,
    enumerate_maps,
    fibers,
    identity_ord,
    multi_indices,
    pushforward,
)


def test_identity_composes_to_identity():
    assert compose_ord(identity_ord(3), identity_ord(3)) == identity_ord(3)


def test_constant_then_identity():
    const = OrdMap(2, 1, (1, 1))
    assert compose_ord(const, identity_ord(1)) == const


def test_pushforward_identity():
    assert pushforward(identity_ord(3), (4, 0, 2)) == MultiIndex((4, 0, 2))


def test_pushforward_sums_fibres():
    assert pushforward(OrdMap(3, 2, (1, 1, 2)), (2, 0, 5)) == MultiIndex((2, 5))


def test_pushforward_empty_fibre_gives_zero():
    assert pushforward(OrdMap(1, 3, (2,)), (4,)) == MultiIndex((0, 4, 0))


def test_enumerate_from_empty():
    maps = enumerate_maps(0, 3)
    assert len(maps) == 1 and maps[0].values == ()


def test_enumerate_two_to_two():
    assert len(enumerate_maps(2, 2)) == 3


@pytest.mark.parametrize("I,J", [(I, J) for I in range(6) for J in range(1, 6)])
def test_counts_are_binomial(I, J):
    assert len(enumerate_maps(I, J)) == comb(I + J - 1, I)


def test_values_must_be_monotone():
    with pytest.raises(ValueError):
        OrdMap(2, 2, (2, 1))
    with pytest.raises(ValueError):
        OrdMap(1, 2, (3,))


def test_fibres_are_intervals():
    assert fibers(OrdMap(3, 3, (1, 1, 3))) == [(0, 2), (2, 2), (2, 3)]


def test_multi_indices_bounded_by_norm():
    idx = multi_indices(2, 2)
    assert all(m.norm <= 2 for m in idx)
    assert len(idx) == 6


def test_composition_agrees_with_function_tables():
    for I, J, K in itertools.product(range(4), range(1, 4), range(1, 4)):
        for phi in enumerate_maps(I, J):
            for psi in enumerate_maps(J, K):
                table = tuple(psi.values[v - 1] for v in phi.values)
                assert compose_ord(phi, psi).values == table


def test_pushforward_is_functorial():
    for I, J, K in itertools.product(range(4), range(1, 4), range(1, 4)):
        for phi in enumerate_maps(I, J):
            for psi in enumerate_maps(J, K):
                for n in itertools.product(range(3), repeat=I):
                    assert pushforward(compose_ord(phi, psi), n) == pushforward(psi, pushforward(phi, n))
