"""Command-line entry point.

Exit status: 0 on completion (whatever the test decides), 2 on invalid input
or arguments, 3 when the long-run variance estimate is zero.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import replace
from importlib import resources
from pathlib import Path

from ._io import atomic_write_csv, atomic_write_json
from .decision import METHODS, AnalysisConfig, build_table, minimal_delta, prepare, run_test
from .harness import PlanError, StudyPlan, run_study
from .locator import default_locator_cmin, locate_first_deviation
from .lrv import DegenerateVarianceError
from .series import InvalidSeriesError, TimeSeries
from .synthetic import ErrorModel, MeanSpec, gen_series

EXIT_OK, EXIT_INPUT, EXIT_DEGENERATE = 0, 2, 3


class InputError(ValueError):
    pass


def read_series_csv(path) -> TimeSeries:
    """One value per row, with an optional ``value`` header on the first line."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except UnicodeDecodeError:
        raise InputError(f"{path} is not UTF-8 text") from None
    values = []
    for number, row in enumerate(rows, start=1):
        if number == 1 and [c.strip().lower() for c in row] == ["value"]:
            continue
        if not row or (len(row) == 1 and not row[0].strip()):
            if all(not "".join(r).strip() for r in rows[number:]):
                break
            raise InputError(f"row {number}: empty row")
        if len(row) != 1:
            raise InputError(f"row {number}: expected one value, got {len(row)} fields")
        try:
            value = float(row[0])
        except ValueError:
            raise InputError(f"row {number}: not a number: {row[0]!r}") from None
        if not math.isfinite(value):
            raise InputError(f"row {number}: non-finite value {row[0].strip()!r}")
        values.append(value)
    if len(values) < 2:
        raise InputError(f"{path}: need at least 2 values, got {len(values)}")
    return TimeSeries(values)


def _emit(data, out) -> None:
    if out is None:
        json.dump(data, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    else:
        atomic_write_json(out, data)


def _baseline_kwargs(args) -> dict:
    if args.t0 is not None:
        return {"t0": args.t0}
    if args.cutoff_row is not None:
        return {"cutoff": args.cutoff_row}
    if args.first_year is None:
        raise InputError("--cutoff-year needs --first-year")
    return {"cutoff": args.cutoff_year - args.first_year + 1}


def _config(args, series, delta=None) -> AnalysisConfig:
    reps = {}
    if args.reps is not None:
        key = "gaussian_reps" if args.method == "conservative" else "bootstrap_reps"
        reps[key] = args.reps
    config = AnalysisConfig(delta=args.delta[0] if delta is None else delta,
                            c_min=args.cmin, m=args.m, alpha=args.alpha,
                            grid_step=args.grid_step, seed=args.seed,
                            cache_dir=args.cache_dir, standardize=args.standardize,
                            lrv_form=args.lrv_form, **reps, **_baseline_kwargs(args))
    need = max(2 * config.m, config.baseline(series.n).k0 + config.c_min)
    if series.n < need:
        raise InputError(f"series has {series.n} rows; at least {need} are needed "
                         f"for this baseline, --cmin and --m")
    return config.resolved()


def _locator_dict(series, prep, args, delta) -> dict:
    c_min = args.locator_cmin or default_locator_cmin(series.n)
    if prep.spec.n - prep.spec.k0 < c_min:
        raise InputError(f"--locator-cmin {c_min} exceeds the {series.n - prep.spec.k0} "
                         "rows after the baseline")
    result = locate_first_deviation(series, prep.spec, c_min, delta, prep.sigma, prep.sigma2)
    return result.to_dict(args.first_year)


def cmd_test(args) -> int:
    series = read_series_csv(args.input)
    config = _config(args, series)
    table = build_table(series, config, args.method)
    delta_hat = minimal_delta(series, config, table, args.method).delta_hat
    prep = prepare(series, config)
    reports = []
    for delta in args.delta:
        report = run_test(series, config.with_delta(delta), args.method, table)
        data = replace(report, delta_hat_alpha=delta_hat).to_dict()
        if report.reject or args.force_locate:
            data["locator"] = _locator_dict(series, prep, args, delta)
        reports.append(data)
    _emit(reports[0] if len(reports) == 1 else reports, args.out)
    return EXIT_OK


def cmd_locate(args) -> int:
    series = read_series_csv(args.input)
    config = _config(args, series)
    prep = prepare(series, config)
    results = [_locator_dict(series, prep, args, d) for d in args.delta]
    _emit(results[0] if len(results) == 1 else results, args.out)
    return EXIT_OK


def cmd_delta_min(args) -> int:
    series = read_series_csv(args.input)
    config = _config(args, series)
    found = minimal_delta(series, config, method=args.method)
    spec = config.baseline(series.n)
    _emit({"delta_hat_alpha": found.delta_hat, "alpha": found.alpha,
           "threshold": found.threshold, "method": args.method, "n": series.n,
           "t0": spec.t0, "k0": spec.k0, "c_min": config.c_min, "m": config.m,
           "seed": config.seed}, args.out)
    return EXIT_OK


def bundled_plan_names() -> list[str]:
    folder = resources.files("relevantscan") / "plans"
    return sorted(p.name[:-5] for p in folder.iterdir() if p.name.endswith(".json"))


def load_plan(source: str) -> dict:
    """Plan JSON from a path, or from a bundled plan name such as ``table1-desk``."""
    path = Path(source)
    if not path.exists() and source in bundled_plan_names():
        text = (resources.files("relevantscan") / "plans" / f"{source}.json").read_text()
    else:
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read plan {source}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"plan is not valid JSON: {exc}") from None


def cmd_simulate(args) -> int:
    data = load_plan(args.plan)
    overrides = {"seed": args.seed, "replications": args.replications,
                 "workers": args.workers, "output": args.out}
    data.update({k: v for k, v in overrides.items() if v is not None})
    plan = StudyPlan.from_dict(data)
    result = run_study(plan)
    for path in result.write().values():
        print(path)
    return EXIT_OK


def cmd_generate(args) -> int:
    mean = MeanSpec("mu_a", a=args.a, t0=args.t0)
    series = gen_series(mean, ErrorModel(args.error, args.ar_form), args.n, args.seed)
    rows = [[repr(float(v))] for v in series.values]
    if args.out is None:
        sys.stdout.write("value\n" + "".join(r[0] + "\n" for r in rows))
    else:
        atomic_write_csv(args.out, ["value"], rows)
    return EXIT_OK


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _analysis_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", required=True, help="CSV file, one value per row")
    base = common.add_mutually_exclusive_group(required=True)
    base.add_argument("--t0", type=float, help="baseline as a fraction of the sample")
    base.add_argument("--cutoff-row", type=_positive_int,
                      help="baseline = rows 1..CUTOFF_ROW")
    base.add_argument("--cutoff-year", type=int,
                      help="baseline = rows through this year (needs --first-year)")
    common.add_argument("--delta", type=float, action="append",
                        help="relevance threshold; repeat to scan several (default 1.0)")
    common.add_argument("--alpha", type=float, default=0.05)
    common.add_argument("--method", choices=METHODS, default="bootstrap")
    common.add_argument("--cmin", type=_positive_int, default=20,
                        help="smallest window length")
    common.add_argument("--m", type=_positive_int, default=5, help="variance block length")
    common.add_argument("--reps", type=_positive_int,
                        help="Monte-Carlo replications of the calibrating table")
    common.add_argument("--grid-step", type=float, default=0.001)
    common.add_argument("--seed", type=int, help="master seed (echoed in the output)")
    common.add_argument("--first-year", type=int, help="calendar year of row 1")
    common.add_argument("--out", help="output JSON path (default: stdout)")
    common.add_argument("--locator-cmin", type=_positive_int,
                        help="locator window length (default 20 + isqrt(n))")
    common.add_argument("--cache-dir", help="reuse Gaussian quantile tables from here")
    common.add_argument("--standardize", action="store_true",
                        help="scale the penalty by the estimated standard deviation")
    common.add_argument("--lrv-form", choices=("sums", "printed"), default="sums")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relevantscan",
        description="Test whether a series' mean departs relevantly from its baseline.")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _analysis_parser()

    p = sub.add_parser("test", parents=[common], help="run the relevance test")
    p.add_argument("--force-locate", action="store_true",
                   help="report the first deviation even when the test does not reject")
    p.set_defaults(func=cmd_test)
    p = sub.add_parser("locate", parents=[common], help="estimate the first deviation time")
    p.set_defaults(func=cmd_locate)
    p = sub.add_parser("delta-min", parents=[common],
                       help="smallest threshold at which the test stops rejecting")
    p.set_defaults(func=cmd_delta_min)

    p = sub.add_parser("simulate", help="run a replication study from a plan")
    p.add_argument("plan", help=f"plan JSON path or a bundled name "
                   f"({', '.join(bundled_plan_names())})")
    p.add_argument("--out", help="output prefix (overrides the plan)")
    p.add_argument("--seed", type=int)
    p.add_argument("--replications", type=int)
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("generate", help="write a synthetic series as CSV")
    p.add_argument("--a", type=float, default=2.0, help="drift size")
    p.add_argument("--error", choices=("IID", "MA", "AR", "none"), default="IID")
    p.add_argument("--ar-form", choices=("stationary", "printed"), default="stationary")
    p.add_argument("--n", type=_positive_int, default=500)
    p.add_argument("--t0", type=float, default=0.25)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "delta", None) is None and hasattr(args, "delta"):
        args.delta = [1.0]
    try:
        return args.func(args)
    except DegenerateVarianceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except PlanError as exc:
        print(f"error: invalid plan field {exc.field!r}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, InvalidSeriesError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
