"""Simulation scenarios and numerically computed ground truth.

Mean functions, the three Gaussian error processes (independent, moving
average and autoregressive, each with marginal variance 1/4) and brute-force
oracles for the sup-deviation and the first relevant-deviation time.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, optimize, signal

from .series import TimeSeries

BOUNDARY_A = 128 / 81
AR_BURN_IN = 200
ORACLE_GRID = 100_000


@dataclass(frozen=True)
class MeanSpec:
    """A mean function on ``[0, 1]`` with its baseline cutoff ``t0``.

    ``kind`` is ``"mu_a"`` (sinusoid plus a quadratic drift of size ``a``
    after 1/4), ``"constant"`` (value ``c``) or ``"piecewise"``. Piecewise
    means are a tuple of ``(start, end, xs, ys)`` pieces, each linearly
    interpolating its samples; jumps may occur between pieces.
    """

    kind: str = "mu_a"
    a: float = 2.0
    c: float = 0.0
    t0: float = 0.25
    pieces: tuple = field(default=())

    def __post_init__(self):
        if self.kind not in ("mu_a", "constant", "piecewise"):
            raise ValueError(f"unknown mean kind {self.kind!r}")
        if self.kind == "piecewise":
            if not self.pieces:
                raise ValueError("piecewise mean needs at least one piece")
            cover = sorted((float(p[0]), float(p[1])) for p in self.pieces)
            if cover[0][0] > 0 or cover[-1][1] < 1:
                raise ValueError("pieces must cover [0, 1]")
            for (_, e0), (s1, _) in zip(cover, cover[1:]):
                if not math.isclose(e0, s1):
                    raise ValueError("pieces must be contiguous")
            for p in self.pieces:
                if not np.all(np.isfinite(p[3])):
                    raise ValueError("piece samples must be finite")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "mu_a":
            return eval_mu_a(x, self.a)
        if self.kind == "constant":
            return np.full_like(x, self.c)
        flat = np.atleast_1d(x)
        out = np.empty_like(flat)
        pieces = sorted(self.pieces, key=lambda p: p[0])
        for i, (start, end, xs, ys) in enumerate(pieces):
            upper = flat <= end if i == len(pieces) - 1 else flat < end
            sel = (flat >= start) & upper
            out[sel] = np.interp(flat[sel], xs, ys)
        return out.reshape(x.shape)

    @property
    def breakpoints(self) -> list[float]:
        if self.kind == "mu_a":
            return [0.25]
        if self.kind == "piecewise":
            return sorted({float(p[0]) for p in self.pieces} - {0.0})
        return []


def eval_mu_a(x, a: float):
    """``10 + sin(8 pi x) / 2 + a (x - 1/4)^2 [x > 1/4]``."""
    x = np.asarray(x, dtype=float)
    drift = np.where(x > 0.25, a * (x - 0.25) ** 2, 0.0)
    out = 10.0 + 0.5 * np.sin(8.0 * np.pi * x) + drift
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ErrorModel:
    """Error process ``IID``, ``MA`` or ``AR`` driven by standard normals.

    ``"none"`` gives identically zero errors (noise-free sanity runs).

    ``ar_form="stationary"`` uses ``eps_i = (sqrt3/4) eta_i + eps_{i-1}/2``
    (marginal variance 1/4). ``"printed"`` uses
    ``eps_i = (sqrt3/4)(eta_i + eps_{i-1}/2)`` whose variance is 12/61.
    """

    kind: str = "IID"
    ar_form: str = "stationary"

    def __post_init__(self):
        if self.kind not in ("IID", "MA", "AR", "none"):
            raise ValueError(f"unknown error kind {self.kind!r}")
        if self.ar_form not in ("stationary", "printed"):
            raise ValueError(f"unknown AR form {self.ar_form!r}")

    @property
    def _ar(self):
        gain = math.sqrt(3.0) / 4.0
        coef = 0.5 if self.ar_form == "stationary" else gain / 2.0
        return gain, coef

    @property
    def true_lrv(self) -> float:
        if self.kind == "none":
            return 0.0
        if self.kind == "IID":
            return 0.25
        if self.kind == "MA":
            return (1.0 + 0.5) ** 2 / 5.0
        gain, coef = self._ar
        return gain**2 / (1.0 - coef) ** 2

    @property
    def marginal_variance(self) -> float:
        if self.kind == "none":
            return 0.0
        if self.kind == "AR":
            gain, coef = self._ar
            return gain**2 / (1.0 - coef**2)
        return 0.25


def gen_errors(model: ErrorModel, n: int, rng) -> np.ndarray:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if model.kind == "none":
        return np.zeros(n)
    if model.kind == "IID":
        return 0.5 * rng.standard_normal(n)
    if model.kind == "MA":
        eta = rng.standard_normal(n + 1)
        return (eta[1:] + 0.5 * eta[:-1]) / math.sqrt(5.0)
    gain, coef = model._ar
    eta = rng.standard_normal(n + AR_BURN_IN)
    eps = signal.lfilter([gain], [1.0, -coef], eta)
    return eps[AR_BURN_IN:]


def gen_series(mean: MeanSpec, model: ErrorModel, n: int, seed) -> TimeSeries:
    """``x_i = mu(i/n) + eps_i`` for ``i = 1..n``."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    grid = np.arange(1, n + 1) / n
    return TimeSeries(mean(grid) + gen_errors(model, n, rng))


def oracle_baseline(mean: MeanSpec) -> float:
    """Average of the mean function over ``[0, t0]``."""
    points = [p for p in mean.breakpoints if 0 < p < mean.t0] or None
    value, _ = integrate.quad(lambda x: float(mean(x)), 0.0, mean.t0, points=points,
                              epsabs=1e-12, epsrel=1e-10, limit=200)
    return value / mean.t0


def _deviation(mean, base):
    return lambda t: np.abs(mean(t) - base)


def oracle_d_inf(mean: MeanSpec) -> float:
    """Sup of ``|mu(t) - baseline|`` over ``[t0, 1]``: dense grid then local refinement."""
    base = oracle_baseline(mean)
    dev = _deviation(mean, base)
    grid = np.linspace(mean.t0, 1.0, ORACLE_GRID + 1)
    values = dev(grid)
    i = int(np.argmax(values))
    best = float(values[i])
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    res = optimize.minimize_scalar(lambda t: -float(dev(t)), bounds=(lo, hi),
                                   method="bounded", options={"xatol": 1e-10})
    return max(best, -float(res.fun))


def oracle_t_star(mean: MeanSpec, delta: float) -> float | None:
    """First ``t >= t0`` with ``|mu(t) - baseline| >= delta``; ``None`` if never."""
    base = oracle_baseline(mean)
    dev = _deviation(mean, base)
    grid = np.linspace(mean.t0, 1.0, ORACLE_GRID + 1)
    hits = np.flatnonzero(dev(grid) >= delta)
    if hits.size == 0:
        return None
    i = int(hits[0])
    if i == 0:
        return float(grid[0])
    lo, hi = float(grid[i - 1]), float(grid[i])
    while hi - lo > 1e-9:
        mid = 0.5 * (lo + hi)
        if dev(mid) >= delta:
            hi = mid
        else:
            lo = mid
    return hi


def mean_from_dict(spec: dict, t0: float = 0.25) -> MeanSpec:
    kind = spec.get("kind", "mu_a")
    if kind == "mu_a":
        return MeanSpec("mu_a", a=float(spec["a"]), t0=t0)
    if kind == "constant":
        return MeanSpec("constant", c=float(spec.get("c", 0.0)), t0=t0)
    if kind == "piecewise":
        pieces = tuple((float(p["start"]), float(p["end"]), tuple(p["x"]), tuple(p["y"]))
                       for p in spec["pieces"])
        return MeanSpec("piecewise", t0=t0, pieces=pieces)
    raise ValueError(f"unknown mean kind {kind!r}")


def scenario_from_dict(data: dict):
    """Parse ``{mean: {kind, a?}, error: {kind}, n, t0, delta, seed}``."""
    t0 = float(data.get("t0", 0.25))
    mean = mean_from_dict(data["mean"], t0)
    error = ErrorModel(data["error"]["kind"], data["error"].get("ar_form", "stationary"))
    return mean, error, int(data["n"]), float(data.get("delta", 1.0)), data.get("seed")
