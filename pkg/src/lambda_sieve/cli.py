"""Command line front end.

Subcommands map one-to-one onto library entry points and share the
output plumbing: --format {text,csv,json}, --out PATH, and a bound
guard read from LAMBDA_SIEVE_MAX_BOUND (default 10**7) so a typo does
not start a week-long scan.  Output is byte-identical for a given
command and format regardless of --workers.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from .gaussfact import scan_exceptional
from .jacobi import scan_lambda
from .pell import pell_search
from .quadfields import make_field, squarefree_values
from .specialnums import euler_mod, glaisher_mod
from .verify import report_lines, run_checks

SCHEMA_TAG = "lambda-sieve/v1"
DEFAULT_MAX_BOUND = 10**7

_FIELDS = {
    "scan-exceptional": ["p", "m", "xi", "verdict"],
    "scan-lambda": ["d", "p", "method", "value"],
    "pell": ["q", "digits", "status", "p", "x"],
    "glaisher-table": ["p", "residue_p", "residue_p2", "verdict"],
    "euler-check": ["p", "residue_p2", "verdict"],
    "class-numbers": ["d", "D", "discriminant", "h", "maximal"],
}

# JSON encodes these as decimal strings: values can exceed 2**53
_BIG_FIELDS = {"scan-lambda": {"value"}, "pell": {"p", "x"}}


def _max_bound() -> int:
    raw = os.environ.get("LAMBDA_SIEVE_MAX_BOUND", "")
    try:
        return int(raw) if raw else DEFAULT_MAX_BOUND
    except ValueError:
        return DEFAULT_MAX_BOUND


def _check_bound(parser: argparse.ArgumentParser, value: int, name: str) -> None:
    limit = _max_bound()
    if value > limit:
        parser.error(
            f"{name} {value} exceeds the safety limit {limit}; "
            "raise LAMBDA_SIEVE_MAX_BOUND to allow it"
        )


def _emit(args, command: str, params: dict, rows: list[dict]) -> None:
    fields = _FIELDS[command]
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(fields)
        for row in rows:
            w.writerow([_csv_cell(row[f]) for f in fields])
        text = buf.getvalue()
    elif args.format == "json":
        big = _BIG_FIELDS.get(command, set())
        enc_rows = []
        for row in rows:
            enc = {
                f: str(row[f]) if f in big and isinstance(row[f], int) else row[f]
                for f in fields
            }
            enc_rows.append(enc)
        doc = {
            "schema": SCHEMA_TAG,
            "command": command,
            "params": params,
            "rows": enc_rows,
        }
        text = json.dumps(doc, indent=2) + "\n"
    else:
        lines = []
        for row in rows:
            lines.append("  ".join(f"{f}={row[f]}" for f in fields))
        lines.append(f"{len(rows)} rows")
        text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    return v


def cmd_scan_exceptional(args, parser) -> int:
    _check_bound(parser, args.bound, "--bound")
    verdicts = scan_exceptional(
        args.m, args.bound, workers=args.workers, checkpoint=args.checkpoint
    )
    if not args.all:
        verdicts = [v for v in verdicts if v.verdict]
    rows = [
        {"p": v.p, "m": v.m, "xi": int(v.xi), "verdict": v.verdict} for v in verdicts
    ]
    params = {"m": args.m, "bound": args.bound, "all": args.all}
    _emit(args, "scan-exceptional", params, rows)
    return 0


def cmd_scan_lambda(args, parser) -> int:
    _check_bound(parser, args.bound, "--bound")
    field = make_field(args.d)
    hits = scan_lambda(field, args.bound, workers=args.workers)
    rows = [
        {"d": args.d, "p": v.p, "method": v.method, "value": int(v.criterion_value)}
        for v in hits
    ]
    _emit(args, "scan-lambda", {"d": args.d, "bound": args.bound}, rows)
    return 0


def cmd_pell(args, parser) -> int:
    _check_bound(parser, args.q_bound, "--q-bound")
    recs = pell_search(args.q_bound, workers=args.workers, checkpoint=args.checkpoint)
    rows = [
        {
            "q": r.q,
            "digits": r.digits,
            "status": r.status,
            "p": r.p_candidate,
            "x": r.x,
        }
        for r in recs
    ]
    _emit(args, "pell", {"q_bound": args.q_bound}, rows)
    return 0


def cmd_glaisher_table(args, parser) -> int:
    _check_bound(parser, args.bound, "--bound")
    rows = []
    from .modmath import PrimeRange, sieve_primes

    for p in sieve_primes(PrimeRange(7, args.bound, (3, 1))):
        r2 = int(glaisher_mod(p - 1, p * p)[p - 1])
        rows.append(
            {"p": p, "residue_p": r2 % p, "residue_p2": r2, "verdict": r2 == 0}
        )
    _emit(args, "glaisher-table", {"bound": args.bound}, rows)
    return 0


def cmd_euler_check(args, parser) -> int:
    _check_bound(parser, args.bound, "--bound")
    rows = []
    from .modmath import PrimeRange, sieve_primes

    for p in sieve_primes(PrimeRange(5, args.bound, (4, 1))):
        r2 = int(euler_mod(p - 1, p * p)[p - 1])
        rows.append({"p": p, "residue_p2": r2, "verdict": r2 == 0})
    _emit(args, "euler-check", {"bound": args.bound}, rows)
    return 0


def cmd_class_numbers(args, parser) -> int:
    _check_bound(parser, args.bound, "--bound")
    rows = []
    for d in squarefree_values(args.bound):
        f = make_field(d)
        rows.append(
            {
                "d": d,
                "D": f.D,
                "discriminant": f.discriminant,
                "h": f.h,
                "maximal": f.maximal,
            }
        )
    _emit(args, "class-numbers", {"bound": args.bound}, rows)
    return 0


def cmd_verify(args, parser) -> int:
    results = run_checks(only=args.only)
    if not results:
        parser.error(f"no checks match {args.only!r}")
    text = "\n".join(report_lines(results)) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if all(r.ok for r in results) else 1


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--workers", type=int, default=1, help="process count")
    sp.add_argument(
        "--format", choices=("text", "csv", "json"), default="text", help="output form"
    )
    sp.add_argument("--out", default=None, help="write output to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lambda-sieve",
        description="detect imaginary quadratic fields whose lambda invariant "
        "exceeds one at a given prime, plus the related special-number tables",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("scan-exceptional", help="Gauss-factorial power scan")
    sp.add_argument("--m", type=int, required=True, help="divisor of p - 1")
    sp.add_argument("--bound", type=int, required=True, help="prime upper bound")
    sp.add_argument(
        "--all", action="store_true", help="emit every tested prime, not only hits"
    )
    sp.add_argument("--checkpoint", default=None, help="resume file path")
    _add_common(sp)
    sp.set_defaults(fn=cmd_scan_exceptional)

    sp = sub.add_parser("scan-lambda", help="scan one field for non-trivial primes")
    sp.add_argument("--d", type=int, required=True, help="squarefree parameter")
    sp.add_argument("--bound", type=int, required=True, help="prime upper bound")
    _add_common(sp)
    sp.set_defaults(fn=cmd_scan_lambda)

    sp = sub.add_parser("pell", help="prime-index Pell candidates")
    sp.add_argument("--q-bound", type=int, required=True, help="index upper bound")
    sp.add_argument("--checkpoint", default=None, help="resume file path")
    _add_common(sp)
    sp.set_defaults(fn=cmd_pell)

    sp = sub.add_parser("glaisher-table", help="G_(p-1) residues mod p**2")
    sp.add_argument("--bound", type=int, default=200, help="prime upper bound")
    _add_common(sp)
    sp.set_defaults(fn=cmd_glaisher_table)

    sp = sub.add_parser("euler-check", help="E_(p-1) residues mod p**2")
    sp.add_argument("--bound", type=int, default=200, help="prime upper bound")
    _add_common(sp)
    sp.set_defaults(fn=cmd_euler_check)

    sp = sub.add_parser("class-numbers", help="field table for squarefree d")
    sp.add_argument("--bound", type=int, required=True, help="largest d")
    _add_common(sp)
    sp.set_defaults(fn=cmd_class_numbers)

    sp = sub.add_parser("verify", help="run the named self-checks")
    sp.add_argument("--only", default=None, help="substring filter on name or group")
    sp.add_argument("--out", default=None, help="write report to this file")
    sp.set_defaults(fn=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.fn(args, parser)


if __name__ == "__main__":
    sys.exit(main())
