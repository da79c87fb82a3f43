import pytest

from conftest import FIXTURES
from curvedcoalg.mutations import (
    MUTABLE_FIELDS,
    Mutation,
    apply_mutation,
    candidate_mutations,
    dump_mutations,
    load_mutations,
    oracle_valid,
    primary_check,
)
from curvedcoalg.serialize import load

LIB = FIXTURES / "library"
KINDS = sorted(p.stem for p in LIB.glob("*.json") if not p.name.endswith(".mutations.json"))


def _library(kind):
    inst = load(LIB / f"{kind}.json")
    return inst.structures["base"], inst.weight_cap, load_mutations((LIB / f"{kind}.mutations.json").read_text())


def test_library_covers_every_structure_type():
    assert len(KINDS) == len(MUTABLE_FIELDS) == 8


@pytest.mark.parametrize("kind", KINDS)
def test_base_passes_both_routes(kind):
    base, cap, _ = _library(kind)
    assert primary_check(base).ok
    assert oracle_valid(base, cap)


@pytest.mark.parametrize("kind", KINDS)
def test_library_mutations_rejected(kind):
    base, cap, muts = _library(kind)
    assert len(muts) == 10
    assert len(set(muts)) == 10
    for m in muts:
        bad = apply_mutation(base, m)
        assert not oracle_valid(bad, cap), m
        assert not primary_check(bad).ok, m


@pytest.mark.parametrize("kind", KINDS)
def test_mutations_are_single_entry_changes(kind):
    base, _, muts = _library(kind)
    cands = set(candidate_mutations(base))
    assert all(m in cands for m in muts)
    for m in muts:
        # a +1 anywhere degree-compatible, or a sign flip of an existing entry
        e = _entry(base, m)
        assert m.delta == 1 or (e != 0 and m.delta == -2 * e)
        assert _entry(apply_mutation(base, m), m) != e


def _entry(obj, m: Mutation) -> int:
    f = getattr(obj, m.field)
    if m.arity is not None:
        f = f.component(m.arity)
    return f.row(m.source).get(m.target, 0)


def test_mutation_file_roundtrip():
    _, _, muts = _library(KINDS[0])
    assert load_mutations(dump_mutations(muts)) == muts
