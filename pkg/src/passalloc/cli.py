"""Command-line interface: ``passalloc <command> ...``.

Exit status: 0 on success, 1 when a check fails (invalid problem, axiom
failure, missing witness, Owen mismatch), 2 on usage or parse errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from decimal import Decimal, localcontext
from fractions import Fraction
from pathlib import Path

from . import __version__
from .axioms import AxiomId, audit, axioms_for, independence_witnesses, replay, DEFAULT_AUDIT_CONFIG
from .games import GameBoundError, game_report
from .io import ProblemFileError, dumps, format_ratio, parse_problem, serialize_problem, violation_to_dict
from .problem import InvalidProblemError, revenue, validate
from .randgen import GenConfig, generate
from .rules import RuleId, allocate
from .transforms import (
    ConsortiumSplitSpec,
    MuseumSplitSpec,
    TransformError,
    reduce_problem,
    split_consortium,
    split_museum,
)

OK, CHECK_FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def approx(x: Fraction) -> str:
    with localcontext() as ctx:
        ctx.prec = 30
        return format(Decimal(x.numerator) / Decimal(x.denominator), ".6g")


def show(x: Fraction) -> str:
    """``21/5 (4.2)`` style rendering for tables."""
    x = Fraction(x)
    return format_ratio(x) if x.denominator == 1 else f"{format_ratio(x)} ({approx(x)})"


def _emit(payload: dict, command: str, out):
    out.write(dumps({"meta": {"command": command, "version": __version__}, "result": payload}))


def _range(text: str):
    lo, _, hi = text.partition(":")
    try:
        return (int(lo), int(hi or lo))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or LO:HI, got {text!r}") from None


def _fractions(text: str):
    try:
        return [Fraction(p.strip()) for p in text.split(",") if p.strip()]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected comma-separated rationals, got {text!r}") from None


def _default_seed() -> int:
    raw = os.environ.get("PASSALLOC_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"PASSALLOC_SEED must be an integer, got {raw!r}") from None


def _add_config_flags(p, base: GenConfig):
    g = p.add_argument_group("generator")
    g.add_argument("--seed", type=int, default=None, help="seed (default: $PASSALLOC_SEED or 0)")
    g.add_argument("--museums", type=_range, default=base.museums, metavar="LO:HI")
    g.add_argument("--consortia", type=_range, default=base.consortia, metavar="LO:HI")
    g.add_argument("--general-holders", type=_range, default=base.general_holders, metavar="LO:HI")
    g.add_argument("--consortium-holders", type=_range, default=base.consortium_holders, metavar="LO:HI")
    g.add_argument("--individual-holders", type=_range, default=base.individual_holders, metavar="LO:HI")
    g.add_argument("--max-holders", type=int, default=base.max_holders)
    g.add_argument("--price-num", type=int, default=base.price_numerator)
    g.add_argument("--price-den", type=int, default=base.price_denominator)
    g.add_argument("--density", type=float, default=base.density)


def _config(args) -> GenConfig:
    seed = args.seed if args.seed is not None else _default_seed()
    try:
        return GenConfig(
            museums=args.museums, consortia=args.consortia,
            general_holders=args.general_holders, consortium_holders=args.consortium_holders,
            individual_holders=args.individual_holders, max_holders=args.max_holders,
            price_numerator=args.price_num, price_denominator=args.price_den,
            density=args.density, seed=seed,
        )
    except ValueError as e:
        raise UsageError(str(e)) from None


def _write(path, data: bytes, out):
    if path in (None, "-"):
        out.write(data.decode("utf-8"))
    else:
        Path(path).write_bytes(data)


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args, out):
    problem = parse_problem(args.file, check=False)
    report = validate(problem)
    if args.format == "json":
        _emit({"ok": report.ok, "violations": [violation_to_dict(v) for v in report.violations]}, "validate", out)
    elif report.ok:
        out.write(f"OK  m={problem.m} s={problem.s} E={show(revenue(problem))}\n")
    else:
        for v in report.violations:
            out.write(f"{v.code}: {v.detail}\n")
    return OK if report.ok else CHECK_FAILED


def cmd_allocate(args, out):
    problem = parse_problem(args.file)
    rules = list(RuleId) if args.rule == "all" else [RuleId.parse(args.rule)]
    allocs = {r: allocate(r, problem) for r in rules}
    E = revenue(problem)
    if args.format == "json":
        _emit({
            "revenue": format_ratio(E),
            "allocations": {r.value: [format_ratio(x) for x in a] for r, a in allocs.items()},
        }, "allocate", out)
        return OK
    for r, a in allocs.items():
        out.write(f"rule {r.value}\n")
        out.write(f"  {'museum':>6}  payout\n")
        for i, x in enumerate(a, 1):
            out.write(f"  {i:>6}  {show(x)}\n")
        out.write(f"  {'total':>6}  {show(a.total)}\n")
    out.write(f"revenue E = {show(E)}\n")
    return OK


def _axiom_list(text, rule):
    if text == "all":
        return axioms_for(rule)
    try:
        return tuple(AxiomId.parse(a) for a in text.split(",") if a.strip())
    except ValueError as e:
        raise UsageError(str(e)) from None


def cmd_audit(args, out):
    rule = RuleId.parse(args.rule)
    report = audit(rule, _config(args), _axiom_list(args.axioms, rule), args.instances, args.condition)
    payload = report.to_dict()
    if args.output:
        Path(args.output).write_text(dumps(payload), "utf-8")
    if args.format == "json":
        _emit(payload, "audit", out)
    else:
        out.write(f"audit of rule {rule.value}: {args.instances} instances, seed {report.config.seed}\n")
        out.write(f"  {'axiom':<22}{'checked':>8}{'passed':>8}{'failed':>8}{'n/a':>8}{'vacuous':>9}\n")
        for a, t in report.tallies.items():
            out.write(f"  {a.value:<22}{t.checked:>8}{t.passed:>8}{t.failed:>8}{t.not_applicable:>8}{t.vacuous:>9}\n")
        out.write("ALL PASS\n" if report.ok else "FAILURES FOUND\n")
    return OK if report.ok else CHECK_FAILED


def cmd_independence(args, out):
    config = _config(args)
    entries = independence_witnesses(args.theorem, config, args.budget, args.sample, args.condition)
    outdir = Path(args.output) if args.output else None
    if outdir:
        outdir.mkdir(parents=True, exist_ok=True)
    rows = []
    for e in entries:
        path = None
        if outdir and e.found:
            path = outdir / f"theorem{e.theorem}-{e.rule.value}-{e.axiom.value}.json"
            path.write_text(dumps(e.witness), "utf-8")
        row = e.to_dict()
        row["file"] = str(path) if path else None
        rows.append(row)
    if args.format == "json":
        _emit({"theorem": args.theorem, "config": config.to_dict(), "entries": rows}, "independence", out)
    else:
        out.write(f"independence witnesses for theorem {args.theorem}, seed {config.seed}\n")
        for e, row in zip(entries, rows):
            status = f"found after {e.searched}" if e.found else f"NOT FOUND in {e.searched}"
            extra = f"  also fails: {', '.join(a.value for a in e.discrepancies)}" if e.discrepancies else ""
            where = f"  -> {row['file']}" if row["file"] else ""
            out.write(f"  {e.rule.value:<4} violates {e.axiom.value:<22} {status}{extra}{where}\n")
    return OK if all(e.found for e in entries) else CHECK_FAILED


def cmd_owen(args, out):
    problem = parse_problem(args.file)
    try:
        rep = game_report(problem, args.bound)
    except GameBoundError as e:
        raise UsageError(str(e)) from None
    verdict = "EQUAL" if rep["equal"] else "DIFFERENT"
    if args.format == "json":
        _emit({
            "game": [{"coalition": s, "value": format_ratio(v)} for s, v in rep["game"].items()],
            "owen": [format_ratio(x) for x in rep["owen"]],
            "ee": [format_ratio(x) for x in rep["ee"]],
            "verdict": verdict,
        }, "owen", out)
    else:
        out.write("coalition  v(S)\n")
        for s, v in rep["game"].items():
            out.write(f"  {'{' + ','.join(map(str, s)) + '}':<12}{show(v)}\n")
        out.write(f"{'museum':>6}  {'owen':<16}ee\n")
        for i, (o, e) in enumerate(zip(rep["owen"], rep["ee"]), 1):
            out.write(f"{i:>6}  {show(o):<16}{show(e)}\n")
        out.write(verdict + "\n")
    return OK if rep["equal"] else CHECK_FAILED


def cmd_gen(args, out):
    _write(args.output, serialize_problem(generate(_config(args))), out)
    return OK


def cmd_transform(args, out):
    problem = parse_problem(args.file)
    chosen = [x for x in (args.split_museum, args.split_consortium) if x is not None]
    if len(chosen) + bool(args.reduce) != 1:
        raise UsageError("choose exactly one of --split-museum, --split-consortium, --reduce")
    try:
        if args.split_museum is not None:
            if not args.prices:
                raise UsageError("--split-museum needs --prices")
            result = split_museum(problem, MuseumSplitSpec(args.split_museum, args.prices)).problem
        elif args.split_consortium is not None:
            if not args.pass_prices:
                raise UsageError("--split-consortium needs --pass-prices")
            museum_prices = [row for row in (args.museum_prices or [])]
            spec = ConsortiumSplitSpec(args.split_consortium, args.pass_prices, museum_prices)
            result = split_consortium(problem, spec).problem
        else:
            result = reduce_problem(problem)
    except TransformError as e:
        raise UsageError(str(e)) from None
    _write(args.output, serialize_problem(result), out)
    return OK


def cmd_replay(args, out):
    try:
        witness = json.loads(Path(args.file).read_text("utf-8"))
        result = replay(witness)
    except (KeyError, TypeError) as e:
        raise ProblemFileError(f"not a witness file: missing {e}") from None
    out.write(f"{result.rule.value} {result.axiom.value}: {result.status}\n")
    return CHECK_FAILED if result.failed else OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="passalloc", description="Museum pass revenue allocation with consortia.")
    parser.add_argument("--version", action="version", version=f"passalloc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def fmt(p):
        p.add_argument("--format", choices=("table", "json"), default="table")

    p = sub.add_parser("validate", help="check a problem file")
    p.add_argument("file")
    fmt(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("allocate", help="payouts of a rule")
    p.add_argument("--rule", required=True, help="ee, pp, pe, ep, r1..r10 or all")
    p.add_argument("file")
    fmt(p)
    p.set_defaults(func=cmd_allocate)

    p = sub.add_parser("audit", help="randomized axiom audit of a rule")
    p.add_argument("--rule", required=True)
    p.add_argument("--axioms", default="all", help="comma-separated axiom tags or 'all'")
    p.add_argument("--instances", type=int, default=200)
    p.add_argument("--condition", choices=("per_holder", "aggregate"), default="per_holder",
                   help="reading of the general-pass condition in symmetry between consortia")
    p.add_argument("-o", "--output", help="also write the JSON report here")
    _add_config_flags(p, DEFAULT_AUDIT_CONFIG)
    fmt(p)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("independence", help="search counterexamples for a characterization")
    p.add_argument("--theorem", type=int, choices=(2, 3, 4, 5), required=True)
    p.add_argument("--budget", type=int, default=500)
    p.add_argument("--sample", type=int, default=50, help="instances sampled for the other axioms")
    p.add_argument("--condition", choices=("per_holder", "aggregate"), default="per_holder")
    p.add_argument("-o", "--output", help="directory for witness files")
    _add_config_flags(p, DEFAULT_AUDIT_CONFIG)
    fmt(p)
    p.set_defaults(func=cmd_independence)

    p = sub.add_parser("owen", help="game table, Owen value and EE allocation")
    p.add_argument("file")
    p.add_argument("--bound", type=int, default=12)
    fmt(p)
    p.set_defaults(func=cmd_owen)

    p = sub.add_parser("gen", help="write a seeded random problem")
    p.add_argument("-o", "--output", default="-")
    _add_config_flags(p, GenConfig())
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("transform", help="split a museum or consortium, or reduce")
    p.add_argument("file")
    p.add_argument("--split-museum", type=int, metavar="I")
    p.add_argument("--prices", type=_fractions, metavar="A,B[,...]")
    p.add_argument("--split-consortium", type=int, metavar="K")
    p.add_argument("--pass-prices", type=_fractions, metavar="A,B[,...]")
    p.add_argument("--museum-prices", type=_fractions, action="append", metavar="A,B[,...]",
                   help="individual prices of one copy, in block order; repeat per copy")
    p.add_argument("--reduce", action="store_true")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("replay", help="re-run the check stored in a witness file")
    p.add_argument("file")
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return OK if e.code == 0 else USAGE
    try:
        return args.func(args, out)
    except (UsageError, ProblemFileError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE
    except InvalidProblemError as e:
        for v in e.violations:
            print(f"invalid problem: {v.code}: {v.detail}", file=sys.stderr)
        return USAGE
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE
