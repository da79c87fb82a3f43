"""Command-line front end.

    curvedcoalg check FILE [--bound N]
    curvedcoalg cobar FILE NAME [--cap W] [--bound L] [-o OUT]
    curvedcoalg bar FILE NAME [--cap W] [-o OUT]
    curvedcoalg tw-verify FILE [NAME ...] [--cap W]
    curvedcoalg proptest [--suite S ...] [--seed S] [--iters N] [--jobs J]

Exit status is 0 when everything passes, 1 on a mathematical failure and 2 on
unreadable or inconsistent input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import serialize
from .barcobar import TwistingCochain, bar, cobar, is_twisting_cochain, to_alg_morphism, to_ccoalg_element
from .chcoalg import CHCMorphism, CurvedHomotopyCoalgebraData, check_ccoalg_element, check_chc, check_chc_morphism
from .curved import (
    AssociativeAlgebra,
    Coalgebra,
    CurvedAlgebraData,
    CurvedCoalgebraData,
    Report,
    check_alg_morphism,
    check_associative_algebra,
    check_coalgebra,
    check_curved_algebra,
)
from .gradedcore import StructuralError
from .mutations import primary_check
from .suites import SUITES, reports_json, run_suites

ENV_CAP = "CURVEDCOALG_WEIGHT_CAP"
DEFAULT_CAP = 4

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def default_cap() -> int:
    raw = os.environ.get(ENV_CAP)
    if raw is None or raw == "":
        return DEFAULT_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise InputError(f"{ENV_CAP}={raw!r} is not an integer") from None
    if cap < 0:
        raise InputError(f"{ENV_CAP} must be non-negative")
    return cap


def _cap(args, inst=None) -> int:
    if getattr(args, "cap", None) is not None:
        return args.cap
    if inst is not None and inst.weight_cap is not None:
        return inst.weight_cap
    return default_cap()


def _load(path: str) -> serialize.Instance:
    try:
        return serialize.load(path)
    except FileNotFoundError:
        raise InputError(f"{path}: no such file") from None
    except serialize.InstanceError as exc:
        raise InputError(f"{path}: {exc}") from None


def _pick(inst, name: str, kinds: tuple, what: str):
    if name not in inst.structures:
        known = ", ".join(inst.structures) or "none"
        raise InputError(f"no structure named {name!r} (known: {known})")
    obj = inst.structures[name]
    if type(obj) not in kinds and not isinstance(obj, kinds):
        raise InputError(f"{name!r} is a {serialize.kind_of(obj)}, expected {what}")
    return obj


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=1, default=str) + "\n")
    else:
        sys.stdout.write(text + "\n")


def _report_text(name: str, rep: Report) -> str:
    lines = [f"{name} ({rep.subject}): {'ok' if rep.ok else 'FAILED'}"]
    for r in rep.results:
        line = f"  [{'pass' if r.ok else 'FAIL'}] {r.name}"
        if not r.ok and r.counterexample:
            line += f"  at {json.dumps(r.counterexample, sort_keys=True, default=str)}"
        lines.append(line)
    return "\n".join(lines)


def _check_one(obj, bound: int | None) -> Report:
    if type(obj) is AssociativeAlgebra:
        return check_associative_algebra(obj)
    if type(obj) is Coalgebra:
        return check_coalgebra(obj)
    if isinstance(obj, CurvedHomotopyCoalgebraData):
        return check_chc(obj, bound)
    if isinstance(obj, CHCMorphism):
        return check_chc_morphism(obj, bound)
    return primary_check(obj)


# ---------------------------------------------------------------- commands


def cmd_check(args) -> int:
    inst = _load(args.path)
    bound = args.bound if args.bound is not None else inst.bounds.get("n_max")
    reports = {}
    for name, obj in inst.structures.items():
        try:
            reports[name] = _check_one(obj, bound)
        except StructuralError as exc:
            raise InputError(f"{name}: {exc}") from None
    ok = all(r.ok for r in reports.values())
    _emit(
        args,
        {"file": str(args.path), "ok": ok, "structures": {n: r.to_dict() for n, r in reports.items()}},
        "\n".join(_report_text(n, r) for n, r in reports.items()) or "no structures",
    )
    return EXIT_OK if ok else EXIT_FAIL


def _write_result(args, items: dict, inst, cap: int) -> None:
    text = serialize.dumps(items, weight_cap=cap, bounds=inst.bounds, ring=inst.ring)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _construct(args, build, kinds, what, prefix) -> int:
    inst = _load(args.path)
    obj = _pick(inst, args.name, kinds, what)
    cap = _cap(args, inst)
    rep = _check_one(obj, None)
    if not rep.ok:
        sys.stderr.write(_report_text(args.name, rep) + "\n")
        return EXIT_FAIL
    try:
        out = build(obj, cap)
    except StructuralError as exc:
        raise InputError(str(exc)) from None
    _write_result(args, {f"{prefix}_{args.name}": out}, inst, cap)
    return EXIT_OK


def cmd_cobar(args) -> int:
    def build(C, cap):
        if args.bound is not None:
            return cobar(C, cap, args.bound)
        try:
            return cobar(C, cap)
        except StructuralError as exc:
            raise StructuralError(f"{exc}; pass --bound to truncate word length") from None

    return _construct(args, build, (CurvedCoalgebraData,), "a curved coalgebra", "cobar")


def cmd_bar(args) -> int:
    return _construct(args, lambda A, cap: bar(A, cap), (CurvedAlgebraData,), "a curved algebra", "bar")


def cmd_tw_verify(args) -> int:
    """Twisting cochain equation, and the matching morphism out of the cobar construction."""
    inst = _load(args.path)
    cap = _cap(args, inst)
    names = args.names or [n for n, o in inst.structures.items() if isinstance(o, TwistingCochain)]
    if not names:
        raise InputError("no twisting cochains in the file")
    reports = {}
    for name in names:
        t = _pick(inst, name, (TwistingCochain,), "a twisting cochain")
        rep = is_twisting_cochain(t)
        try:
            CC = cobar(t.source, cap, args.bound)
            f = to_alg_morphism(t, CC)
            rep.extend(_renamed(check_alg_morphism(f), "cobar side: "))
        except StructuralError as exc:
            sys.stderr.write(f"{name}: cobar side skipped ({exc})\n")
        if t.target.v is not None and check_curved_algebra(t.target).ok:
            BA = bar(t.target, cap)
            rep.extend(_renamed(check_ccoalg_element(to_ccoalg_element(t, BA)), "bar side: "))
        reports[name] = rep
    ok = all(r.ok for r in reports.values())
    _emit(
        args,
        {"file": str(args.path), "ok": ok, "cochains": {n: r.to_dict() for n, r in reports.items()}},
        "\n".join(_report_text(n, r) for n, r in reports.items()),
    )
    return EXIT_OK if ok else EXIT_FAIL


def _renamed(rep: Report, prefix: str) -> Report:
    for r in rep.results:
        r.name = prefix + r.name
    return rep


def cmd_proptest(args) -> int:
    names = args.suite or list(SUITES)
    for n in names:
        if n not in SUITES:
            raise InputError(f"unknown suite {n!r}; choose from {', '.join(SUITES)}")
    reports = run_suites(names, seed=args.seed, iters=args.iters, shrink=not args.no_shrink, jobs=args.jobs)
    if args.format == "json":
        sys.stdout.write(reports_json(reports))
    else:
        sys.stdout.write("\n".join(r.to_text() for r in reports) + "\n")
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="curvedcoalg", description="Check curved (co)algebras, bar and cobar constructions.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--cap", type=int, help=f"weight cap (default: file value, then ${ENV_CAP}, then {DEFAULT_CAP})")
    common.add_argument("--bound", type=int, help="arity bound for checks and word-length bound for cobar")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="run the axiom checker on every structure in a file")
    c.add_argument("path")
    c.set_defaults(func=cmd_check)

    for name, fn, what in (("cobar", cmd_cobar, "curved coalgebra"), ("bar", cmd_bar, "curved algebra")):
        c = sub.add_parser(name, parents=[common], help=f"build the {name} construction of a {what}")
        c.add_argument("path")
        c.add_argument("name", help=f"name of the {what} in the file")
        c.add_argument("-o", "--output", help="output file (default: standard output)")
        c.set_defaults(func=fn)

    c = sub.add_parser("tw-verify", parents=[common], help="verify twisting cochains")
    c.add_argument("path")
    c.add_argument("names", nargs="*", help="cochains to verify (default: all)")
    c.set_defaults(func=cmd_tw_verify)

    c = sub.add_parser("proptest", parents=[common], help="run seeded property suites")
    c.add_argument("--suite", action="append", choices=list(SUITES), help="suite to run (repeatable; default: all)")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--iters", type=int, default=20)
    c.add_argument("--jobs", type=int, default=1, help="run suites in parallel processes")
    c.add_argument("--no-shrink", action="store_true", help="report the first failure without shrinking")
    c.set_defaults(func=cmd_proptest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.cap is not None and args.cap < 0:
            raise InputError("--cap must be non-negative")
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
