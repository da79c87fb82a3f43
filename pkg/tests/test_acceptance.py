"""Acceptance criteria 1-10, one pass/fail line each.

    pytest -v tests/test_acceptance.py      # lines appear in the pytest output
    python3 tests/test_acceptance.py        # lines only

Every criterion runs the seeded property suites (or the frozen mutation
library) at the stated sizes and checks the stated time limits.
"""

import sys
import time
from pathlib import Path

import pytest

from curvedcoalg.mutations import MUTABLE_FIELDS, apply_mutation, load_mutations, oracle_valid, primary_check
from curvedcoalg.serialize import load
from curvedcoalg.suites import Size, run_suite

SEED = 20240601
LIB = Path(__file__).parent / "fixtures" / "library"


def _line(n: int, title: str, ok: bool, detail: str, elapsed: float) -> str:
    return f"criterion {n:2d} [{'PASS' if ok else 'FAIL'}] {title}: {detail} ({elapsed:.1f} s)"


def _summary(reports) -> str:
    return ", ".join(f"{r.suite} {r.cases - r.failed_cases}/{r.cases}" for r in reports)


def _failure(reports) -> str:
    for r in reports:
        if r.first_failure:
            ff = r.first_failure
            return f"; {r.suite} case {ff['case']} failed {ff['check']!r}: {ff['detail']}"
    return ""


def _suites(n, title, runs, limit=None):
    t0 = time.perf_counter()
    reports = [run_suite(name, SEED, iters, size=size) for name, iters, size in runs]
    elapsed = time.perf_counter() - t0
    ok = all(r.ok for r in reports) and (limit is None or elapsed < limit)
    detail = _summary(reports) + _failure(reports)
    if limit is not None:
        detail += f", limit {limit} s"
    return ok, _line(n, title, ok, detail, elapsed), reports


def criterion_1():
    return _suites(1, "Koszul signs and shifts, 200 instances", [("koszul", 200, None)], 5)


def criterion_2():
    # one carrier of each exact rank 1..4, all words of length <= 5
    runs = [("cut", 1, Size(r, 5)) for r in range(1, 5)]
    return _suites(2, "cut comultiplication, ranks 1-4, words <= 5", runs, 10)


def criterion_3():
    return _suites(3, "lift naturality, monoidality, reconstruction", [("lift", 5, None)])


def criterion_4():
    return _suites(4, "composition formulas vs composed lifts, 100 instances", [("compose", 100, None)])


def criterion_5():
    return _suites(5, "checker verdict equals doubled oracle, 50 instances", [("doubling", 50, None)])


_cache: dict = {}


def criterion_6():
    if 6 not in _cache:
        _cache[6] = _suites(
            6, "cobar and bar closure, 50 each, Z/3 and Z/5, weight cap 4",
            [("cobar", 50, Size(3, 4)), ("bar", 50, Size(3, 4))], 60,
        )
    return _cache[6]


def criterion_7():
    _, _, reports = criterion_6()
    rows, ok = [], True
    for r in reports:
        for check in ("preserves identities", "preserves composition"):
            passed, total = r.checks.get(check, (0, 0))
            ok &= total == 50 and passed == total
            rows.append(f"{r.suite} {check} {passed}/{total}")
    return ok, _line(7, "functoriality of cobar and bar", ok, ", ".join(rows), 0.0), reports


def criterion_8():
    return _suites(8, "twisting cochain bijections and equivariance, 50 instances", [("tw", 50, None)])


def criterion_9():
    return _suites(9, "bar-cobar adjunction, 20 quadruples", [("adjunction", 20, None)], 120)


def criterion_10():
    t0 = time.perf_counter()
    kinds = sorted(p.stem for p in LIB.glob("*.json") if not p.name.endswith(".mutations.json"))
    rows, ok = [], len(kinds) == len(MUTABLE_FIELDS)
    for kind in kinds:
        inst = load(LIB / f"{kind}.json")
        base = inst.structures["base"]
        muts = load_mutations((LIB / f"{kind}.mutations.json").read_text())
        rejected = sum(not primary_check(apply_mutation(base, m)).ok for m in muts)
        confirmed = sum(not oracle_valid(apply_mutation(base, m), inst.weight_cap) for m in muts)
        ok &= len(muts) == 10 and rejected == confirmed == 10 and primary_check(base).ok
        rows.append(f"{kind} {rejected}/{len(muts)}")
    line = _line(10, "checkers reject the curated mutations", ok, ", ".join(rows), time.perf_counter() - t0)
    return ok, line, None


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.slow
@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda c: c.__name__)
def test_acceptance(criterion, capsys):
    ok, line, _ = criterion()
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    for ok, line, _ in results:
        print(line)
    sys.exit(0 if all(ok for ok, _, _ in results) else 1)
