"""Command line: ``fqconics <subcommand> ...``.

Exit codes: 0 success or accepted verdict, 1 rejected verdict, 2 usage error,
bad input, or an infeasible request.
"""

from __future__ import annotations

import argparse
import sys

from .constructions import (
    BudgetExceeded,
    verify_conical_kakeya,
    verify_conical_nikodym,
    verify_elliptic_coverage,
    lower_bounds,
)
from .field import FieldError, field_for_order, find_nonsquare, norm_one_subgroup, quadratic_extension
from .grid import CONSTRUCTIONS, GridSpecError, build, parse_grid, rows_to_csv, run_grid
from .proofs import KAKEYA, NIKODYM, TraceError, run_trace
from .serialize import SchemaError, dumps, load, poly_to_json, save, set_from_json, set_to_json, trace_to_json
from .vanishing import InfeasibleError, vanishing_polynomial_with_multiplicity

OK, REJECTED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _field(q: int):
    try:
        return field_for_order(q)
    except (FieldError, ValueError) as e:
        raise UsageError(f"--q: {e}") from None


def _load_set(path: str):
    return set_from_json(load(path))


def cmd_field_info(args) -> int:
    F = _field(args.q)
    g = find_nonsquare(F)
    E = quadratic_extension(F, g)
    print(f"q={F.q}")
    print(f"p={F.p}")
    print(f"k={F.k}")
    print("modulus=" + ",".join(str(c) for c in F.modulus))
    print(f"nonsquare={F.format(g)}")
    print(f"norm_one_order={len(norm_one_subgroup(E))}")
    return OK


def cmd_construct(args) -> int:
    F = _field(args.q)
    n = 2 if args.construction == "ellipse-family" and args.n is None else args.n
    if n is None:
        raise UsageError("--n is required for this construction")
    try:
        W = build(args.construction, F, n)
    except ValueError as e:
        raise UsageError(str(e)) from None
    save(args.out, set_to_json(W))
    print(f"{args.construction}: {len(W)} points, {len(W.witnesses)} witnesses -> {args.out}")
    return OK


def cmd_verify(args) -> int:
    W = _load_set(args.set)
    if args.mode == "kakeya":
        v = verify_conical_kakeya(W, args.exhaustive, args.budget)
    elif args.mode == "nikodym":
        v = verify_conical_nikodym(W, args.exhaustive, args.budget)
    else:
        v = verify_elliptic_coverage(W)
    print(v.summary())
    for line in v.found:
        print("found " + line)
    return OK if v.accepted else REJECTED


def cmd_vanish(args) -> int:
    W = _load_set(args.set)
    f = vanishing_polynomial_with_multiplicity(W.field, sorted(W.points), args.degree, args.mult, W.n)
    save(args.out, poly_to_json(f))
    print(f"degree {f.degree} polynomial with {len(f.terms)} terms -> {args.out}")
    return OK


def cmd_trace(args) -> int:
    W = _load_set(args.set)
    mult = args.mult is not None or args.l is not None
    R = run_trace(W, args.mode, multiplicity=mult, l=args.l or 2, m=args.mult)
    save(args.out, trace_to_json(R, W.field))
    print(f"{R.status}: {R.message}")
    return OK


def cmd_bounds(args) -> int:
    try:
        B = lower_bounds(args.q, args.n)
    except ValueError as e:
        raise UsageError(str(e)) from None
    print(f"thm1={B.thm1}")
    print(f"kakeya_mult={B.kakeya_mult}")
    print(f"nikodym_mult={B.nikodym_mult}")
    return OK


def cmd_report(args) -> int:
    cells = parse_grid(args.grid)
    rows = run_grid(cells, timing=args.timing, workers=args.workers)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(rows_to_csv(rows))
    bad = sum(1 for r in rows if r["verified"] != "true")
    print(f"{len(rows)} rows ({bad} unverified) -> {args.out}")
    return OK


def make_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="fqconics", description="Conical Kakeya and Nikodym sets over finite fields.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("field-info", help="describe F_q")
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(func=cmd_field_info)

    p = sub.add_parser("construct", help="build a witnessed set")
    p.add_argument("construction", choices=CONSTRUCTIONS)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="check a witnessed set")
    p.add_argument("--set", required=True)
    p.add_argument("--mode", choices=("kakeya", "nikodym", "elliptic-coverage"), required=True)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--budget", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("vanish", help="solve for a polynomial vanishing on a set")
    p.add_argument("--set", required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--mult", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_vanish)

    p = sub.add_parser("trace", help="replay the polynomial-method argument on a set")
    p.add_argument("--set", required=True)
    p.add_argument("--mode", choices=(KAKEYA, NIKODYM), required=True)
    p.add_argument("--mult", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("bounds", help="print the three lower bounds")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("report", help="run an experiment grid to CSV")
    p.add_argument("--grid", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--timing", action="store_true", help="fill the wall_time column (output no longer bit-stable)")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_report)
    return ap


def main(argv: list[str] | None = None) -> int:
    try:
        args = make_parser().parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"fqconics: {e}", file=sys.stderr)
    except (SchemaError, GridSpecError, InfeasibleError, TraceError, BudgetExceeded) as e:
        print(f"fqconics: {e}", file=sys.stderr)
    except OSError as e:
        print(f"fqconics: {e.filename}: {e.strerror}", file=sys.stderr)
    return USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
