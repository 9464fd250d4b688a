"""Replication studies: rejection rates and locator accuracy over scenario grids.

A study writes four files next to ``<output>``:

``<output>.csv``
    one summary row per cell and method (``panel, a, n, method,
    rate_or_mean, std_or_se, nondetect, replications, seed``);
``<output>.raw.csv``
    every replication's outcome, so summaries can be audited without a rerun;
``<output>.json``
    a manifest with the normalized plan and per-cell summaries;
``<output>.timing.json``
    wall-clock times, kept apart so the other three are byte-reproducible.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from ._io import atomic_write_csv, atomic_write_json
from .decision import (METHODS, AnalysisConfig, bootstrap_table_for, decide,
                       gaussian_table_for, prepare)
from .gaussian import fresh_seed
from .locator import default_locator_cmin, locate_first_deviation
from .lrv import estimate_lrv, require_positive
from .synthetic import ErrorModel, MeanSpec, gen_series, oracle_t_star

PANELS = {"IID": "A", "MA": "B", "AR": "C", "none": "-"}
REJECTION_COLUMNS = ("panel", "a", "n", "method", "replication", "statistic",
                     "threshold", "p_value", "reject", "sigma2_hat")
LOCATOR_COLUMNS = ("panel", "a", "n", "method", "replication", "detected", "k_hat",
                   "t_hat", "sigma2_hat")
SUMMARY_COLUMNS = ("panel", "a", "n", "method", "rate_or_mean", "std_or_se",
                   "nondetect", "replications", "seed")


class PlanError(ValueError):
    """Invalid study plan; ``field`` names the offending entry."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


def parse_a(value) -> tuple[str, float]:
    """Drift size from a number or a fraction string such as ``"128/81"``."""
    if isinstance(value, bool):
        raise PlanError("cells.a", f"not a number: {value!r}")
    if isinstance(value, (int, float)):
        return repr(float(value)), float(value)
    try:
        return str(value), float(Fraction(str(value)))
    except (ValueError, ZeroDivisionError):
        raise PlanError("cells.a", f"not a number: {value!r}") from None


@dataclass(frozen=True)
class Cell:
    a_label: str
    a: float
    error: str
    n: int

    @property
    def panel(self) -> str:
        return PANELS[self.error]


@dataclass(frozen=True)
class StudyPlan:
    """Scenario grid plus the analysis settings shared by every cell."""

    cells: tuple[Cell, ...]
    replications: int = 300
    methods: tuple[str, ...] = METHODS
    locator: bool = False
    seed: int | None = None
    output: str | None = None
    delta: float = 1.0
    t0: float = 0.25
    c_min: int = 20
    m: int = 5
    alpha: float = 0.05
    bootstrap_reps: int = 200
    gaussian_reps: int = 1000
    grid_step: float = 0.001
    locator_cmin: int | None = None
    ar_form: str = "stationary"
    lrv_form: str = "sums"
    standardize: bool = False
    workers: int = 1

    def __post_init__(self):
        if not self.cells:
            raise PlanError("cells", "at least one cell is required")
        if self.replications < 50:
            raise PlanError("replications", f"must be >= 50, got {self.replications}")
        for method in self.methods:
            if method not in METHODS:
                raise PlanError("methods", f"unknown method {method!r}")
        if not self.methods and not self.locator:
            raise PlanError("methods", "nothing to run: no methods and locator off")
        if self.seed is not None and not 0 <= self.seed < 2**63:
            raise PlanError("seed", f"must be a non-negative integer, got {self.seed}")
        if self.ar_form not in ("stationary", "printed"):
            raise PlanError("ar_form", f"unknown AR form {self.ar_form!r}")
        if self.workers < 1:
            raise PlanError("workers", f"must be >= 1, got {self.workers}")
        if self.locator_cmin is not None and self.locator_cmin < 1:
            raise PlanError("locator_cmin", f"must be >= 1, got {self.locator_cmin}")
        try:
            config = self.config(seed=0)
        except ValueError as exc:
            raise PlanError(_config_field(str(exc)), str(exc)) from None
        for cell in self.cells:
            if cell.error not in PANELS:
                raise PlanError("cells.error", f"unknown error kind {cell.error!r}")
            if not math.isfinite(cell.a):
                raise PlanError("cells.a", f"must be finite, got {cell.a}")
            if cell.n < 2:
                raise PlanError("cells.n", f"must be >= 2, got {cell.n}")
            k0 = math.floor(cell.n * self.t0)
            if k0 < 1 or cell.n - k0 < self.c_min:
                raise PlanError("cells.n", f"n={cell.n} leaves fewer than c_min="
                                f"{self.c_min} observations after the baseline")
            if cell.n // self.m < 2:
                raise PlanError("cells.n", f"n={cell.n} too short for m={config.m}")
            if self.locator and cell.n - k0 < self.locator_c_min(cell.n):
                raise PlanError("locator_cmin", f"exceeds the post-baseline length "
                                f"for n={cell.n}")

    def config(self, seed) -> AnalysisConfig:
        return AnalysisConfig(t0=self.t0, delta=self.delta, c_min=self.c_min, m=self.m,
                              alpha=self.alpha, bootstrap_reps=self.bootstrap_reps,
                              gaussian_reps=self.gaussian_reps, grid_step=self.grid_step,
                              seed=seed, standardize=self.standardize,
                              lrv_form=self.lrv_form)

    def locator_c_min(self, n: int) -> int:
        return self.locator_cmin if self.locator_cmin is not None else default_locator_cmin(n)

    def resolved(self) -> "StudyPlan":
        if self.seed is not None:
            return self
        return replace(self, seed=fresh_seed())

    def to_dict(self) -> dict:
        out = asdict(self)
        out["cells"] = [{"a": c.a_label, "error": c.error, "n": c.n} for c in self.cells]
        out["methods"] = list(self.methods)
        del out["workers"], out["output"]
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "StudyPlan":
        """Build a plan from JSON data.

        ``cells`` is either a list of ``{a, error, n}`` objects or a grid
        ``{a: [...], error: [...], n: [...]}`` expanded in that nesting order.
        """
        if not isinstance(data, dict):
            raise PlanError("plan", "must be a JSON object")
        known = {f for f in cls.__dataclass_fields__}
        for key in data:
            if key not in known:
                raise PlanError(key, "unknown field")
        if "cells" not in data:
            raise PlanError("cells", "missing")
        kwargs = dict(data)
        kwargs["cells"] = tuple(_parse_cells(data["cells"]))
        if "methods" in kwargs:
            if not isinstance(kwargs["methods"], list):
                raise PlanError("methods", "must be a list")
            kwargs["methods"] = tuple(kwargs["methods"])
        for name, kind in _FIELD_TYPES.items():
            if name in kwargs and kwargs[name] is not None:
                kwargs[name] = _coerce(name, kwargs[name], kind)
        return cls(**kwargs)


_FIELD_TYPES = {"replications": int, "seed": int, "delta": float, "t0": float,
                "c_min": int, "m": int, "alpha": float, "bootstrap_reps": int,
                "gaussian_reps": int, "grid_step": float, "locator_cmin": int,
                "workers": int, "locator": bool, "standardize": bool,
                "output": str, "ar_form": str, "lrv_form": str}


def _coerce(name, value, kind):
    if kind is bool or kind is str:
        if not isinstance(value, kind):
            raise PlanError(name, f"expected {kind.__name__}, got {value!r}")
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise PlanError(name, f"expected a number, got {value!r}")
    if kind is int and float(value) != int(value):
        raise PlanError(name, f"expected an integer, got {value!r}")
    return kind(value)


def _config_field(message: str) -> str:
    for name in ("bootstrap_reps", "gaussian_reps", "grid_step", "lrv_form", "c_min",
                 "delta", "alpha", "t0", "m"):
        if message.startswith(name) or f" {name}" in message:
            return name
    return "plan"


def _parse_cells(spec):
    if isinstance(spec, dict):
        for key in ("a", "error", "n"):
            if not isinstance(spec.get(key), list):
                raise PlanError(f"cells.{key}", "grid axis must be a list")
        return [_cell(a, e, n) for a in spec["a"] for e in spec["error"] for n in spec["n"]]
    if not isinstance(spec, list):
        raise PlanError("cells", "must be a list or a grid object")
    out = []
    for item in spec:
        if not isinstance(item, dict):
            raise PlanError("cells", f"cell must be an object, got {item!r}")
        for key in ("a", "error", "n"):
            if key not in item:
                raise PlanError(f"cells.{key}", "missing")
        out.append(_cell(item["a"], item["error"], item["n"]))
    return out


def _cell(a, error, n):
    label, value = parse_a(a)
    if isinstance(n, bool) or not isinstance(n, int):
        raise PlanError("cells.n", f"expected an integer, got {n!r}")
    if not isinstance(error, str):
        raise PlanError("cells.error", f"expected a string, got {error!r}")
    return Cell(label, value, error, n)


def replication_seeds(master: int, cell: int, rep: int) -> tuple[int, int]:
    """Data and resampling seeds of one replication, a pure function of its indices."""
    data, resample = np.random.SeedSequence([master, cell, rep]).generate_state(2)
    return int(data), int(resample)


@dataclass
class StudyResult:
    """Summaries plus raw per-replication outcomes of one study."""

    plan: StudyPlan
    summary: list[tuple] = field(default_factory=list)
    rejection_raw: list[tuple] = field(default_factory=list)
    locator_raw: list[tuple] = field(default_factory=list)
    cells: list[dict] = field(default_factory=list)
    timing: dict = field(default_factory=dict)

    def rates(self) -> dict[tuple[str, str, int, str], float]:
        """``(error, a_label, n, method) -> rejection rate``."""
        panels = {v: k for k, v in PANELS.items()}
        return {(panels[r[0]], r[1], r[2], r[3]): r[4] for r in self.summary
                if r[3] != "locator"}

    def write(self, output=None) -> dict[str, Path]:
        prefix = Path(output or self.plan.output or "study")
        paths = {"summary": prefix.with_name(prefix.name + ".csv"),
                 "raw": prefix.with_name(prefix.name + ".raw.csv"),
                 "locator_raw": prefix.with_name(prefix.name + ".locator.raw.csv"),
                 "manifest": prefix.with_name(prefix.name + ".json"),
                 "timing": prefix.with_name(prefix.name + ".timing.json")}
        atomic_write_csv(paths["summary"], SUMMARY_COLUMNS, self.summary)
        written = {"summary": paths["summary"]}
        if self.rejection_raw:
            atomic_write_csv(paths["raw"], REJECTION_COLUMNS, self.rejection_raw)
            written["raw"] = paths["raw"]
        if self.locator_raw:
            atomic_write_csv(paths["locator_raw"], LOCATOR_COLUMNS, self.locator_raw)
            written["locator_raw"] = paths["locator_raw"]
        manifest = {"version": __version__, "plan": self.plan.to_dict(),
                    "cells": self.cells,
                    "files": sorted(p.name[len(prefix.name):] for p in written.values())}
        atomic_write_json(paths["manifest"], manifest)
        atomic_write_json(paths["timing"], self.timing)
        written.update(manifest=paths["manifest"], timing=paths["timing"])
        return written


def _rejection_cell(plan: StudyPlan, index: int, tables: dict) -> tuple[list, float]:
    cell = plan.cells[index]
    mean = MeanSpec("mu_a", a=cell.a, t0=plan.t0)
    model = ErrorModel(cell.error, plan.ar_form)
    start = time.perf_counter()
    rows = []
    for rep in range(plan.replications):
        data_seed, resample_seed = replication_seeds(plan.seed, index, rep)
        series = gen_series(mean, model, cell.n, data_seed)
        config = plan.config(resample_seed)
        prep = prepare(series, config)
        for method in plan.methods:
            if method == "conservative":
                table = tables[(cell.n, prep.spec.k0)]
            else:
                table = bootstrap_table_for(prep, config)
            rep_out = decide(prep, config, method, table)
            rows.append((cell.panel, cell.a_label, cell.n, method, rep,
                         rep_out.statistic, rep_out.threshold, rep_out.p_value,
                         int(rep_out.reject), rep_out.sigma2_hat))
    return rows, time.perf_counter() - start


def _locator_cell(plan: StudyPlan, index: int) -> tuple[list, float]:
    cell = plan.cells[index]
    mean = MeanSpec("mu_a", a=cell.a, t0=plan.t0)
    model = ErrorModel(cell.error, plan.ar_form)
    c_min = plan.locator_c_min(cell.n)
    start = time.perf_counter()
    rows = []
    for rep in range(plan.replications):
        data_seed, _ = replication_seeds(plan.seed, index, rep)
        series = gen_series(mean, model, cell.n, data_seed)
        spec = plan.config(0).baseline(cell.n)
        est = estimate_lrv(series, plan.m, plan.lrv_form)
        result = locate_first_deviation(series, spec, c_min, plan.delta,
                                        require_positive(est), est.sigma2)
        rows.append((cell.panel, cell.a_label, cell.n, "locator", rep,
                     int(result.detected), result.k_hat if result.detected else "",
                     result.t_hat if result.detected else "", result.sigma2_hat))
    return rows, time.perf_counter() - start


def _map_cells(plan, func, *args):
    indices = range(len(plan.cells))
    if plan.workers == 1 or len(plan.cells) == 1:
        return [func(plan, i, *args) for i in indices]
    with ProcessPoolExecutor(max_workers=plan.workers) as pool:
        futures = [pool.submit(func, plan, i, *args) for i in indices]
        return [f.result() for f in futures]


def _gaussian_tables(plan: StudyPlan) -> dict:
    tables = {}
    if "conservative" not in plan.methods:
        return tables
    config = plan.config(plan.seed)
    for cell in plan.cells:
        spec = config.baseline(cell.n)
        if (cell.n, spec.k0) not in tables:
            tables[(cell.n, spec.k0)] = gaussian_table_for(spec, config)
    return tables


def run_rejection_study(plan: StudyPlan, result: StudyResult | None = None) -> StudyResult:
    """Rejection rates with standard errors ``sqrt(r (1 - r) / R)`` per cell and method."""
    plan = plan.resolved()
    result = result if result is not None else StudyResult(plan)
    start = time.perf_counter()
    tables = _gaussian_tables(plan)
    result.timing["gaussian_tables_s"] = time.perf_counter() - start
    outputs = _map_cells(plan, _rejection_cell, tables)
    for index, (rows, elapsed) in enumerate(outputs):
        cell = plan.cells[index]
        result.rejection_raw.extend(rows)
        result.timing[f"rejection/{index}"] = elapsed
        summary = {"a": cell.a_label, "error": cell.error, "n": cell.n,
                   "study": "rejection"}
        for method in plan.methods:
            picked = [r for r in rows if r[3] == method]
            rejects = np.array([r[8] for r in picked], dtype=float)
            rate = float(rejects.mean())
            se = math.sqrt(rate * (1.0 - rate) / rejects.size)
            mean_stat = float(np.mean([r[5] for r in picked]))
            result.summary.append((cell.panel, cell.a_label, cell.n, method, rate, se,
                                   "", plan.replications, plan.seed))
            summary[method] = {"rate": rate, "se": se, "mean_statistic": mean_stat}
        result.cells.append(summary)
    return result


def run_locator_study(plan: StudyPlan, result: StudyResult | None = None) -> StudyResult:
    """Mean and spread of the detected deviation time per cell, with non-detection rate.

    The manifest also records the noise-free target ``t_star`` and the
    root-mean-square error of detected times around it.
    """
    plan = plan.resolved()
    result = result if result is not None else StudyResult(plan)
    outputs = _map_cells(plan, _locator_cell)
    for index, (rows, elapsed) in enumerate(outputs):
        cell = plan.cells[index]
        result.locator_raw.extend(rows)
        result.timing[f"locator/{index}"] = elapsed
        hits = np.array([r[7] for r in rows if r[5]], dtype=float)
        nondetect = 1.0 - hits.size / len(rows)
        t_star = oracle_t_star(MeanSpec("mu_a", a=cell.a, t0=plan.t0), plan.delta)
        if hits.size:
            mean_t = float(hits.mean())
            std_t = float(hits.std(ddof=1)) if hits.size > 1 else 0.0
        else:
            mean_t = std_t = math.nan
        rmse = (float(np.sqrt(np.mean((hits - t_star) ** 2)))
                if hits.size and t_star is not None else None)
        result.summary.append((cell.panel, cell.a_label, cell.n, "locator",
                               "" if math.isnan(mean_t) else mean_t,
                               "" if math.isnan(std_t) else std_t,
                               nondetect, plan.replications, plan.seed))
        result.cells.append({"a": cell.a_label, "error": cell.error, "n": cell.n,
                             "study": "locator", "c_min": plan.locator_c_min(cell.n),
                             "mean_t_hat": None if math.isnan(mean_t) else mean_t,
                             "std_t_hat": None if math.isnan(std_t) else std_t,
                             "nondetect": nondetect, "t_star": t_star, "rmse": rmse})
    return result


def run_study(plan: StudyPlan) -> StudyResult:
    """Every study the plan asks for, collected into one result."""
    plan = plan.resolved()
    result = StudyResult(plan)
    if plan.methods:
        run_rejection_study(plan, result)
    if plan.locator:
        run_locator_study(plan, result)
    return result
