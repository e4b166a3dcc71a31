"""Command-line entry point: ``collindiag analyze data.csv --dependent y``.

Exit codes: 0 success (collinearity findings included), 1 usage error,
2 data or parse error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .dataset import ColumnRole, build_design, load_csv
from .diagnose import diagnose, render
from .errors import DataError, NotApplicableError, NumericalError
from .thresholds import ThresholdConfig

log = logging.getLogger("collindiag")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3
FORMAT_ENV = "COLLINDIAG_FORMAT"
# excluded from the default regressor set; name it in --regressors to use it
DEFAULT_EXCLUDED = ("year",)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _role(text: str) -> tuple[str, ColumnRole]:
    name, sep, role = text.partition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError(f"expected NAME=dummy|quantitative, got {text!r}")
    try:
        r = ColumnRole(role.strip().lower())
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown role {role!r}") from None
    if r is ColumnRole.INTERCEPT:
        raise argparse.ArgumentTypeError("use --no-intercept with an all-ones column instead")
    return name.strip(), r


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="collindiag", description="Multicollinearity diagnostics for linear regression designs.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    a = sub.add_parser("analyze", help="diagnose the regressors of a CSV file")
    a.add_argument("csv", type=Path, help="comma-separated file with a header row")
    a.add_argument("--dependent", help="name of the dependent-variable column (required)")
    a.add_argument(
        "--regressors",
        help="comma-separated regressor columns (default: every other column except 'year')",
    )
    a.add_argument("--role", action="append", type=_role, default=[], metavar="NAME=ROLE",
                   help="override the inferred role of a column (dummy|quantitative); repeatable")
    a.add_argument("--no-intercept", action="store_true", help="do not add an intercept column")
    a.add_argument("--include-dummies-in-legacy-measures", action="store_true",
                   help="also compute correlations and VIFs for dummy columns")
    a.add_argument("--format", choices=("text", "json"), default=None,
                   help=f"output format (default: ${FORMAT_ENV} or text)")
    defaults = ThresholdConfig()
    a.add_argument("--cn-threshold", type=float, default=defaults.cn_problematic)
    a.add_argument("--cn-moderate-threshold", type=float, default=defaults.cn_moderate)
    a.add_argument("--vif-threshold", type=float, default=defaults.vif)
    a.add_argument("--corr-threshold", type=float, default=defaults.corr)
    a.add_argument("--cv-threshold", type=float, default=defaults.cv)
    a.add_argument("--vdp-threshold", type=float, default=defaults.vdp)
    a.add_argument("--dummy-proportion-threshold", type=float, default=defaults.dummy_proportion)
    a.add_argument("-o", "--output", type=Path, help="write the report here instead of stdout")
    a.add_argument("-v", "--verbose", action="store_true")
    return p


def _analyze(args) -> bytes:
    fmt = args.format or os.environ.get(FORMAT_ENV) or "text"
    if fmt not in ("text", "json"):
        raise UsageError(f"unknown format {fmt!r} (from ${FORMAT_ENV})")

    ds, y = load_csv(args.csv, args.dependent)
    if args.regressors:
        names = [s.strip() for s in args.regressors.split(",") if s.strip()]
        if not names:
            raise UsageError("--regressors is empty")
    else:
        names = [nm for nm in ds.names if nm.lower() not in DEFAULT_EXCLUDED]
    ds = ds.select(names)
    overrides = dict(args.role)
    log.info("regressors: %s", ", ".join(names))

    x = build_design(ds, include_intercept=not args.no_intercept, roles=overrides)
    log.info("roles: %s", ", ".join(f"{n}={r.value}" for n, r in zip(x.names, x.roles)))
    thresholds = ThresholdConfig(
        cn_problematic=args.cn_threshold,
        cn_moderate=min(args.cn_moderate_threshold, args.cn_threshold),
        vif=args.vif_threshold,
        corr=args.corr_threshold,
        vdp=args.vdp_threshold,
        cv=args.cv_threshold,
        dummy_proportion=args.dummy_proportion_threshold,
    )
    report = diagnose(
        x,
        y,
        thresholds,
        include_dummies=args.include_dummies_in_legacy_measures,
        dataset_id=args.csv.name,
    )
    return render(report, fmt)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command != "analyze":
            raise UsageError(parser.format_usage().strip())
        if not args.dependent:
            raise UsageError("analyze: --dependent is required")
    except UsageError as exc:
        print(parser.format_usage().rstrip(), file=sys.stderr)
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE

    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        out = _analyze(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (DataError, NotApplicableError) as exc:
        print(f"collindiag: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        cols = getattr(exc, "columns", ())
        extra = f" [columns: {', '.join(cols)}]" if cols else ""
        print(f"collindiag: numerical failure: {exc}{extra}", file=sys.stderr)
        return EXIT_NUMERIC

    if args.output:
        args.output.write_bytes(out)
    else:
        sys.stdout.buffer.write(out)
        sys.stdout.flush()
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
