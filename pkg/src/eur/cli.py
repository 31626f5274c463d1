"""Command-line entry point ``eur``.

Exit codes: 0 success, 1 invalid input, 2 a bound was violated.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager

from . import scan, spin
from .bounds import SLACK_TOL
from .entropy import as_order
from .errors import ValidationError

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_VIOLATION = 2


def _vector(text: str) -> tuple[float, float, float]:
    try:
        parts = [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected X,Y,Z, got {text!r}") from None
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected 3 components, got {len(parts)}")
    return tuple(parts)


def _orders(text: str):
    try:
        return [as_order(x) for x in text.split(",") if x.strip()]
    except ValidationError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _grid(text: str) -> tuple[int, int]:
    try:
        t, f = text.lower().split("x")
        return int(t), int(f)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected THETAxPHI, e.g. 361x721, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eur",
        description="Renyi-entropy uncertainty relations for successive qubit measurements.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="randomised check of every bound")
    v.add_argument("--samples", type=int, default=100_000)
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--tol", type=float, default=SLACK_TOL)
    v.add_argument("--json", action="store_true", help="print the full summary as JSON")
    v.add_argument("--emit-golden", metavar="FILE", help="also write the JSON summary to FILE")

    f = sub.add_parser("figure", help="ratio curves of spin figure 1, 2 or 3")
    f.add_argument("figure", type=int, choices=sorted(spin.FIGURE_PANELS))
    f.add_argument("--alpha", type=_orders, default=None, help="comma-separated orders, e.g. 1/2,1,2,inf")
    f.add_argument("--points", type=int, default=spin.DEFAULT_POINTS)
    f.add_argument("--out", required=True, help="output CSV path ('-' for stdout)")

    r = sub.add_parser("region4", help="states where the Shannon REUR bound beats the improved MU bound")
    r.add_argument("--p", type=_vector, default=scan.FIG4_P)
    r.add_argument("--q", type=_vector, default=scan.FIG4_Q)
    r.add_argument("--grid", type=_grid, default=(361, 721))
    r.add_argument("--bloch-radius", type=float, default=1.0)
    r.add_argument("--out", required=True, help="output CSV path ('-' for stdout)")

    pt = sub.add_parser("point", help="evaluate every bound at one (p, q, r)")
    pt.add_argument("--p", type=_vector, required=True)
    pt.add_argument("--q", type=_vector, required=True)
    pt.add_argument("--r", type=_vector, required=True)
    pt.add_argument("--alpha", type=_orders, default=None)
    pt.add_argument("--json", action="store_true")
    return parser


@contextmanager
def _output(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            yield fh


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False)


def _verify(args) -> int:
    summary = scan.verify_theorems(args.samples, args.seed, args.tol)
    text = _dump(summary)
    if args.emit_golden:
        with open(args.emit_golden, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    if args.json:
        print(text)
    else:
        for check in summary["inequalities"]:
            status = "ok  " if check["passed"] else "FAIL"
            print(f"{status} {check['check']:<18} alpha={check['order']:<10} min slack {check['min_slack']:+.3e}")
        for check in summary["equalities"] + summary["residuals"]:
            status = "ok  " if check["passed"] else "FAIL"
            print(f"{status} {check['check']:<30} alpha={check['order']:<10} max residual {check['max_residual']:.3e}")
        print("PASS" if summary["passed"] else "FAIL")
    return EXIT_OK if summary["passed"] else EXIT_VIOLATION


def _figure(args) -> int:
    orders = args.alpha or spin.FIGURE_ORDERS
    records = scan.figure_curves(args.figure, orders, args.points)
    with _output(args.out) as fh:
        scan.write_csv(records, fh)
    return EXIT_VIOLATION if any(r.violation for r in records) else EXIT_OK


def _region(args) -> int:
    region = scan.region_fig4(args.p, args.q, args.grid, args.bloch_radius)
    with _output(args.out) as fh:
        scan.write_region_csv(region, fh)
    print(
        f"tighter cells: {int(region.tighter.sum())} of {region.tighter.size}, "
        f"components: {region.components()}",
        file=sys.stderr,
    )
    return EXIT_VIOLATION if region.violation() else EXIT_OK


def _point(args) -> int:
    orders = args.alpha or scan.VERIFY_ORDERS
    records = scan.eval_point(args.p, args.q, args.r, orders)
    if args.json:
        print(_dump([scan.record_json(r) for r in records]))
    else:
        scan.write_csv(records, sys.stdout)
    return EXIT_VIOLATION if any(r.violation for r in records) else EXIT_OK


COMMANDS = {"verify": _verify, "figure": _figure, "region4": _region, "point": _point}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on bad usage; that code is reserved for violations
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    try:
        return COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"eur: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
