"""Command-line interface: analyze | verify | report.

Exit codes: 0 success, 1 verification mismatch, 2 usage / invalid curve,
3 resource caps or unwritable output.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from .errors import DomainError, InvalidModelError, ResourceLimitError
from .report import RunConfig, analyze, records_report, render, write_text
from .suites import (
    DEFAULT_D_BOUND,
    DEFAULT_Q_BOUND,
    DEFAULT_R_MAX,
    SUITES,
    battery_curves,
)

USAGE_ERROR = 2
RESOURCE_ERROR = 3


def _parse_curve(text: str) -> tuple[int, int]:
    try:
        a_str, b_str = text.split(",")
        return int(a_str), int(b_str)
    except ValueError as exc:
        raise DomainError(f"curve must be 'a,b' with integers: {text!r}") from exc


def _add_bounds(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--q-bound", type=int, default=DEFAULT_Q_BOUND)
    parser.add_argument("--r-max", type=int, default=DEFAULT_R_MAX)
    parser.add_argument("--d-bound", type=int, default=DEFAULT_D_BOUND)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="isoselmer")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("analyze", "report"):
        p = sub.add_parser(name, help="run the twist pipeline for one curve")
        p.add_argument("--curve", required=True, help="'a,b' for y^2 = x(x^2+ax+b)")
        _add_bounds(p)
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", required=(name == "report"))

    v = sub.add_parser("verify", help="run the verification suites")
    v.add_argument("--suites", default=",".join(SUITES), help="comma-separated subset")
    v.add_argument("--curve", action="append", default=[], help="extra battery curve 'a,b'")
    _add_bounds(v)
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--format", choices=("json", "csv"), default="json")
    v.add_argument("--out")
    return parser


def _cmd_analyze(args: argparse.Namespace) -> int:
    a, b = _parse_curve(args.curve)
    if args.r_max % 2 == 0 or min(args.q_bound, args.r_max, args.d_bound) <= 0:
        raise DomainError("bounds must be positive and r-max odd")
    config = RunConfig(a, b, args.q_bound, args.r_max, args.d_bound, args.jobs)
    text = render(analyze(config), args.format)
    if args.out:
        write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    names = [s for s in args.suites.split(",") if s]
    unknown = [s for s in names if s not in SUITES]
    if unknown:
        raise DomainError(f"unknown suites: {unknown}; choose from {sorted(SUITES)}")
    curves = battery_curves([_parse_curve(c) for c in args.curve])
    all_records = []
    failed = None
    for name in names:
        records = SUITES[name](
            curves, q_bound=args.q_bound, r_max=args.r_max, d_bound=args.d_bound
        )
        all_records.extend(records)
        good = sum(r.passed for r in records)
        print(f"{name}: {good}/{len(records)} passed")
        if failed is None:
            failed = next((r for r in records if not r.passed), None)
    if args.out:
        write_text(args.out, render_records(all_records, args.format))
    if failed is not None:
        print("FIRST FAILURE:")
        print(f"  suite:    {failed.suite}")
        print(f"  instance: {failed.key}")
        print(f"  expected: {failed.expected}")
        print(f"  observed: {failed.observed}")
        return 1
    return 0


def render_records(records, fmt: str) -> str:
    from .report import render_json

    report = records_report(records)
    if fmt == "json":
        return render_json(report)
    lines = ["suite,key,expected,observed,passed"]
    for r in report["records"]:
        lines.append(
            ",".join(
                str(x).replace(",", ";")
                for x in (r["suite"], r["key"], r["expected"], r["observed"], r["passed"])
            )
        )
    return "\n".join(lines) + "\n"


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    try:
        if args.command in ("analyze", "report"):
            return _cmd_analyze(args)
        return _cmd_verify(args)
    except (DomainError, InvalidModelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (ResourceLimitError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return RESOURCE_ERROR


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
