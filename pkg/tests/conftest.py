import random
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from curvedcoalg.curved import CurvedAlgebraData
from curvedcoalg.gradedcore import UNIT, BigradedModule, GradedMap, Integers, PrimeField, tensor_power

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

FIXTURES = Path(__file__).parent / "fixtures"

rings = st.sampled_from([Integers(), PrimeField(3), PrimeField(5)])
seeds = st.integers(min_value=0, max_value=2**32 - 1)


def small_module(rng: random.Random, rank: int = 3, prefix: str = "x", zs=(-1, 0, 1), ws=(0, 1)) -> BigradedModule:
    n = rng.randint(1, rank)
    return BigradedModule((f"{prefix}{i}", (rng.choice(zs), rng.choice(ws))) for i in range(n))


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


def square_zero_algebra(ring, gens: dict, m1: dict | None = None, m0: dict | None = None) -> CurvedAlgebraData:
    """``k 1 + span(gens)``, all products of generators zero, given differential and curvature."""
    M = BigradedModule([("1", (0, 0))] + list(gens.items()))
    rows = {("1", x): {x: 1} for x in M.labels}
    rows.update({(x, "1"): {x: 1} for x in gens})
    return CurvedAlgebraData(
        M, ring, GradedMap(tensor_power(M, 2), M, 0, ring, rows), GradedMap(M, M, 1, ring, m1 or {}),
        GradedMap(UNIT, M, 2, ring, {(): m0} if m0 else {}),
        GradedMap(UNIT, M, 0, ring, {(): {"1": 1}}), GradedMap(M, UNIT, 0, ring, {"1": {(): 1}}),
    )
