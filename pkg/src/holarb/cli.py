"""Command line interface: ``holarb <command> [SPEC] [options]``.

SPEC is a market-spec path, ``-`` for standard input (the default), or
``builtin:simple`` / ``builtin:stronger`` for the shipped fixtures.
Exit status is 0 on success, 1 on parse/validation failure and 2 on usage
errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import marketspec, report
from .errors import HolarbError, ParseError, ValidationError
from .filtration import check_cocycle, distortion, is_F_martingale, validate_filtration
from .holonomy import classify_loop, holonomy_trace, scan
from .measure import RandomVariable, as_rational
from .strategy import ab_wealth, check_admissibility, wab_wealth, with_admissibility

MAX_LOOPS_ENV = "HOLARB_MAX_LOOPS"


def _read_spec(ref: str, validate: bool = True) -> marketspec.MarketSpec:
    if ref.startswith("builtin:"):
        return marketspec.parse_market_spec(marketspec.fixture_text(ref.split(":", 1)[1]), validate)
    if ref == "-":
        return marketspec.parse_market_spec(sys.stdin.read(), validate)
    return marketspec.load_market_spec(ref, validate)


def _emit(args, data, text):
    if args.format == "json":
        print(json.dumps(data, indent=2))
    else:
        print(text)


def cmd_validate(args):
    try:
        spec = _read_spec(args.spec, validate=False)
        rep = validate_filtration(spec.filtration())
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    _emit(args, report.validation_data(rep), report.validation_text(rep))
    return 0 if rep.ok else 1


def cmd_distortion(args):
    filt = _read_spec(args.spec).filtration()
    ids = [args.arrow] if args.arrow else [a.id for a in filt.category.arrows]
    values = {i: distortion(filt, i) for i in ids}
    _emit(args, report.distortion_data(filt, values), report.distortion_text(filt, values))
    return 0


def cmd_cocycle(args):
    filt = _read_spec(args.spec).filtration()
    reps = [check_cocycle(filt, i, j) for i, j in filt.category.composable_pairs()]
    _emit(args, report.cocycle_data(filt, reps), report.cocycle_text(filt, reps))
    return 0 if all(r.ok for r in reps) else 1


def cmd_holonomy(args):
    spec = _read_spec(args.spec)
    filt = spec.filtration()
    trace = holonomy_trace(filt, spec.resolve_loop(args.loop))
    _emit(args, report.holonomy_data(filt, trace), report.holonomy_text(filt, trace))
    return 0


def _max_loops():
    raw = os.environ.get(MAX_LOOPS_ENV)
    if not raw:
        return None
    try:
        cap = int(raw)
    except ValueError:
        raise ValidationError(f"{MAX_LOOPS_ENV} must be an integer, got {raw!r}") from None
    return cap if cap > 0 else None


def cmd_scan(args):
    filt = _read_spec(args.spec).filtration()
    result = scan(filt, args.base, args.max_len, args.epsilon,
                  allow_repeat_arrows=args.allow_repeats, max_loops=_max_loops())
    _emit(args, report.scan_data(filt, result), report.scan_text(filt, result))
    return 0


def _load_family(path, filt):
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, line=exc.lineno) from None
    if not isinstance(doc, dict):
        raise ParseError("family file must map objects to values")
    family = {}
    for obj, vals in doc.items():
        space = filt.space(obj)
        if isinstance(vals, dict):
            missing = [p for p in space.points if p not in vals]
            if missing:
                raise ParseError(f"no value for points {missing}", field=obj)
            vals = [vals[p] for p in space.points]
        if not isinstance(vals, list) or any(isinstance(v, float) for v in vals):
            raise ParseError("values must be a list or map of exact rationals", field=obj)
        try:
            family[obj] = RandomVariable.of(space, vals)
        except (TypeError, ValueError) as exc:
            raise ParseError(str(exc), field=obj) from None
    return family


def cmd_martingale(args):
    filt = _read_spec(args.spec).filtration()
    rep = is_F_martingale(filt, _load_family(args.family, filt))
    _emit(args, report.martingale_data(filt, rep), report.martingale_text(filt, rep))
    return 0


def cmd_strategy(args):
    spec = _read_spec(args.spec)
    filt = spec.filtration()
    ids = spec.resolve_loop(args.loop)
    hr = classify_loop(filt, ids, args.epsilon)
    base = filt.space(hr.loop.base)
    if args.mode == "ab":
        sr = ab_wealth(hr.hol, base)
    else:
        sr = wab_wealth(hr.hol, base, args.epsilon)
    decl = spec.declaration(ids)
    verdict = None
    if decl is not None:
        verdict = check_admissibility(hr.loop, decl, filt)
        sr = with_admissibility(sr, verdict, hr.p_gt_1)
    _emit(args, report.strategy_data(base, sr, verdict), report.strategy_text(base, sr, verdict))
    return 0


def cmd_gen(args):
    spec = marketspec.generate_random_system(
        args.seed, args.objects, args.max_points, args.arrows,
        measure_preserving=args.measure_preserving, null_points=args.null_points,
    )
    sys.stdout.write(spec.dumps())
    return 0


def cmd_example(args):
    sys.stdout.write(marketspec.fixture_text(args.name))
    return 0


def _rational_arg(text):
    try:
        q = as_rational(text)
    except (TypeError, ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from None
    if q < 0:
        raise argparse.ArgumentTypeError("epsilon must be nonnegative")
    return q


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("text", "json"), default="text")
    spec = argparse.ArgumentParser(add_help=False)
    spec.add_argument("spec", nargs="?", default="-", help="market-spec file, '-' or builtin:NAME")

    parser = argparse.ArgumentParser(prog="holarb", description="Loop holonomy and arbitrage in filtered markets.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[fmt, spec], help="check shapes and null preservation")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("distortion", parents=[fmt, spec], help="distortion of one or all arrows")
    p.add_argument("--arrow")
    p.set_defaults(func=cmd_distortion)

    p = sub.add_parser("cocycle", parents=[fmt, spec], help="check the cocycle law on composable pairs")
    p.set_defaults(func=cmd_cocycle)

    p = sub.add_parser("holonomy", parents=[fmt, spec], help="holonomy of a loop with its h_k trace")
    p.add_argument("--loop", required=True, help="loop name or comma-separated arrow ids")
    p.set_defaults(func=cmd_holonomy)

    p = sub.add_parser("scan", parents=[fmt, spec], help="classify every loop at a base object")
    p.add_argument("--base", required=True)
    p.add_argument("--max-len", type=int, default=3)
    p.add_argument("--epsilon", type=_rational_arg, default=0)
    p.add_argument("--allow-repeats", action="store_true", help="let a loop reuse an arrow")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("martingale", parents=[fmt, spec], help="check an F-martingale family")
    p.add_argument("--family", required=True, help="JSON file mapping objects to values")
    p.set_defaults(func=cmd_martingale)

    p = sub.add_parser("strategy", parents=[fmt, spec], help="wealth of the loop strategy")
    p.add_argument("--loop", required=True)
    p.add_argument("--mode", choices=("ab", "wab"), default="ab")
    p.add_argument("--epsilon", type=_rational_arg, default=0)
    p.set_defaults(func=cmd_strategy)

    p = sub.add_parser("gen", help="print a random valid market spec")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--objects", type=int, default=3)
    p.add_argument("--max-points", type=int, default=3)
    p.add_argument("--arrows", type=int)
    p.add_argument("--measure-preserving", action="store_true")
    p.add_argument("--null-points", action="store_true")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("example", help="print a shipped fixture")
    p.add_argument("name", choices=marketspec.FIXTURES)
    p.set_defaults(func=cmd_example)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (HolarbError, KeyError, OSError) as exc:
        print(f"holarb: error: {exc}", file=sys.stderr)
        if isinstance(exc, ValidationError) and exc.report is not None:
            print(report.validation_text(exc.report), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
