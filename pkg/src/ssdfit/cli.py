"""Command-line interface.

Subcommands:

    fit        fit distributions, write report JSON / curve CSV / SVG plot
    turnbull   nonparametric CDF steps as CSV
    transform  discard left/right-censored rows, midpoint the intervals
    summary    print observation counts by censoring kind

Exit codes: 0 success, 2 parse error, 3 fit error, 4 bootstrap did not
converge under --strict, 5 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bootstrap import BootstrapPlan
from .data import parse_dataset, serialize_dataset, summarize, transform_to_noncensored
from .errors import (
    BootstrapError,
    DatasetError,
    FitError,
    NonConvergenceError,
    SSDFitError,
)
from .report import (
    build_report,
    curves_csv,
    render_plot_data,
    report_json,
    turnbull_csv,
)
from .turnbull import turnbull_estimate

__all__ = ["main"]

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_FIT = 3
EXIT_BOOTSTRAP = 4
EXIT_IO = 5


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ssdfit",
        description="Fit species sensitivity distributions to censored toxicity data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("fit", help="fit distributions and report HC estimates")
    fit.add_argument("--input", required=True, help="dataset file")
    fit.add_argument(
        "--dist",
        default="lognormal,loglogistic",
        help="comma-separated families: lognormal[,loglogistic]",
    )
    fit.add_argument(
        "--method",
        default="mle",
        choices=["mle", "moments", "cvm"],
        help="estimation method (mle is always computed and anchors the report)",
    )
    fit.add_argument("--hc", default="5,10,20,50", help="comma-separated HC levels in %%")
    fit.add_argument("--bootstrap", action="store_true", help="compute bootstrap CIs")
    fit.add_argument("--batches", type=int, default=5, help="bootstrap batches K")
    fit.add_argument("--batch-size", type=int, default=1000, help="replicates per batch B")
    fit.add_argument("--seed", type=int, default=0, help="bootstrap seed")
    fit.add_argument(
        "--time-limit", type=float, default=300.0, help="bootstrap time budget (seconds)"
    )
    fit.add_argument("--workers", type=int, default=1, help="parallel bootstrap workers")
    fit.add_argument(
        "--strict",
        action="store_true",
        help="exit 4 when the bootstrap did not converge",
    )
    fit.add_argument("--out", help="report JSON path (stdout when omitted)")
    fit.add_argument("--curves", help="curve table CSV path")
    fit.add_argument("--svg", help="CDF figure path (rendered with matplotlib)")
    fit.add_argument(
        "--full-precision",
        action="store_true",
        help="serialize full-precision numbers instead of 6 significant digits",
    )

    tb = sub.add_parser("turnbull", help="nonparametric CDF estimate as CSV steps")
    tb.add_argument("--input", required=True)
    tb.add_argument("--out", help="CSV path (stdout when omitted)")

    tr = sub.add_parser("transform", help="discard/midpoint transform to exact data")
    tr.add_argument("--input", required=True)
    tr.add_argument("--out", help="output dataset path (stdout when omitted)")

    sm = sub.add_parser("summary", help="print observation counts")
    sm.add_argument("--input", required=True)

    return parser


def _read_input(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _write_output(path: str | None, content: str) -> None:
    if path is None:
        sys.stdout.write(content)
    else:
        Path(path).write_text(content, encoding="utf-8")


def _hc_brackets(est) -> str:
    if est.ci_lower is None:
        return f"{est.point:.6g}"
    return f"{est.point:.6g} [{est.ci_lower:.6g}; {est.ci_upper:.6g}]"


def _text_summary(report) -> str:
    lines = []
    for family, rows in report.hc_table.items():
        fit = report.fits[family]["mle"]
        lines.append(
            f"{family}: mu={fit.model.mu:.6g}, sigma={fit.model.sigma:.6g}, "
            f"logLik={fit.log_lik:.6g}"
        )
        for est in rows:
            lines.append(f"  HC{est.p:g} = {_hc_brackets(est)}")
    if report.bootstrap:
        for family, result in report.bootstrap.items():
            lines.append(f"{family} bootstrap: {result.advisory}")
    for warning in report.warnings:
        lines.append(f"warning: {warning}")
    return "\n".join(lines) + "\n"


def _cmd_fit(args) -> int:
    dataset = parse_dataset(_read_input(args.input), label=Path(args.input).stem)
    families = [token for token in args.dist.split(",") if token.strip()]
    hc_levels = [float(token) for token in args.hc.split(",") if token.strip()]
    plan = None
    if args.bootstrap:
        plan = BootstrapPlan(
            batches=args.batches,
            batch_size=args.batch_size,
            seed=args.seed,
            time_budget=args.time_limit,
        )
    report = build_report(
        dataset,
        families=families,
        methods=(args.method,),
        plan=plan,
        hc_levels=hc_levels,
        workers=args.workers,
    )
    _write_output(args.out, report_json(report, full_precision=args.full_precision))
    if args.out is not None:
        sys.stdout.write(_text_summary(report))

    if args.curves or args.svg:
        mle_fits = [per["mle"] for per in report.fits.values() if "mle" in per]
        table = render_plot_data(dataset, mle_fits)
        if args.curves:
            _write_output(args.curves, curves_csv(table, full_precision=args.full_precision))
        if args.svg:
            from .plotting import render_figure

            render_figure(table, report.hc_table, args.svg)

    if args.strict and plan is not None:
        results = report.bootstrap or {}
        bad = [f for f in report.hc_table if f not in results or not results[f].converged]
        if bad:
            print(
                f"error: bootstrap did not converge for: {', '.join(bad)}",
                file=sys.stderr,
            )
            return EXIT_BOOTSTRAP
    return EXIT_OK


def _cmd_turnbull(args) -> int:
    dataset = parse_dataset(_read_input(args.input))
    curve = turnbull_estimate(dataset)
    _write_output(args.out, turnbull_csv(curve))
    return EXIT_OK


def _cmd_transform(args) -> int:
    dataset = parse_dataset(_read_input(args.input))
    _write_output(args.out, serialize_dataset(transform_to_noncensored(dataset)))
    return EXIT_OK


def _cmd_summary(args) -> int:
    dataset = parse_dataset(_read_input(args.input))
    census = summarize(dataset)
    if dataset.label:
        print(f"label: {dataset.label}")
    if dataset.unit:
        print(f"unit: {dataset.unit}")
    print(f"n_total: {census.n_total}")
    print(f"n_exact: {census.n_exact}")
    print(f"n_left: {census.n_left}")
    print(f"n_right: {census.n_right}")
    print(f"n_interval: {census.n_interval}")
    print(f"fraction_censored: {census.fraction_censored:.6g}")
    return EXIT_OK


_COMMANDS = {
    "fit": _cmd_fit,
    "turnbull": _cmd_turnbull,
    "transform": _cmd_transform,
    "summary": _cmd_summary,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except DatasetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (FitError, NonConvergenceError, BootstrapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FIT
    except (ValueError, SSDFitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
