"""Monte-Carlo quantiles of the distribution-free Gaussian bound.

The bound is the supremum over grid pairs ``t0 <= s < t <= 1`` of
``|sqrt(t-s) B(t0)/t0 - (B(t)-B(s))/sqrt(t-s)| - sqrt(2 log(e/(t-s)))``
for a standard Brownian motion ``B``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _backend

GRID_STEP = 0.001
GAUSSIAN_REPLICATIONS = 1000
_GRID_TOL = 1e-9


@dataclass(frozen=True)
class BrownianPath:
    step: float
    values: np.ndarray

    @property
    def horizon(self) -> float:
        return (self.values.size - 1) * self.step


@dataclass(frozen=True)
class QuantileTable:
    """Sorted Monte-Carlo draws; ``label`` is ``gaussian_bound`` or ``bootstrap``."""

    draws: np.ndarray
    label: str
    seed: int | None = None

    def __post_init__(self):
        draws = np.sort(np.asarray(self.draws, dtype=float))
        if draws.size < 1:
            raise ValueError("quantile table needs at least one draw")
        if self.label not in ("gaussian_bound", "bootstrap"):
            raise ValueError(f"unknown table label {self.label!r}")
        draws.setflags(write=False)
        object.__setattr__(self, "draws", draws)

    def __len__(self):
        return int(self.draws.size)


def replication_rngs(seed, replications):
    """Independent generators, one per replication index, derived from ``seed``."""
    children = np.random.SeedSequence(seed).spawn(replications)
    return [np.random.default_rng(child) for child in children]


def fresh_seed() -> int:
    return int(np.random.SeedSequence().entropy % (2**63))


def _grid_points(span, step):
    return int(math.floor(span / step + _GRID_TOL))


def simulate_brownian(step: float, horizon: float, rng) -> BrownianPath:
    """Brownian motion on ``0, step, 2 step, ...`` up to ``horizon``."""
    if not step > 0:
        raise ValueError(f"step must be positive, got {step}")
    if step > horizon * (1 + _GRID_TOL):
        raise ValueError(f"step {step} exceeds horizon {horizon}")
    points = _grid_points(horizon, step)
    values = np.zeros(points + 1)
    np.cumsum(rng.standard_normal(points) * math.sqrt(step), out=values[1:])
    return BrownianPath(float(step), values)


def _grid_index(t0, step, last):
    i0 = int(round(t0 / step))
    if abs(i0 * step - t0) > _GRID_TOL or not 0 < i0 < last:
        raise ValueError(f"t0={t0} is not an interior multiple of the grid step {step}")
    return i0


def draw_M(path: BrownianPath, t0: float) -> float:
    last = path.values.size - 1
    if abs(path.horizon - 1.0) > 1e-6:
        raise ValueError(f"path must cover [0, 1], horizon is {path.horizon}")
    i0 = _grid_index(t0, path.step, last)
    return float(_backend.kernels.draws_m(path.values[None, :], i0, path.step, t0)[0])


def snap_to_grid(t0: float, step: float) -> float:
    """Nearest interior grid multiple of ``step`` to ``t0``."""
    last = _grid_points(1.0, step)
    i0 = min(max(int(round(t0 / step)), 1), last - 1)
    return i0 * step


def build_gaussian_quantile_table(t0: float, step: float = GRID_STEP,
                                  replications: int = GAUSSIAN_REPLICATIONS,
                                  seed=None) -> QuantileTable:
    if replications < 100:
        raise ValueError(f"need at least 100 replications, got {replications}")
    if seed is None:
        seed = fresh_seed()
    points = _grid_points(1.0, step)
    i0 = _grid_index(t0, step, points)
    paths = np.zeros((replications, points + 1))
    for r, rng in enumerate(replication_rngs(seed, replications)):
        paths[r] = simulate_brownian(step, 1.0, rng).values
    draws = _backend.kernels.draws_m(paths, i0, step, t0)
    return QuantileTable(draws, "gaussian_bound", seed)


def quantile(table: QuantileTable, level: float) -> float:
    """Order statistic with 1-based index ``ceil(level * N)``."""
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must lie in (0, 1), got {level}")
    size = len(table)
    rank = min(max(math.ceil(level * size - _GRID_TOL), 1), size)
    return float(table.draws[rank - 1])


def rejection_budget(size: int, alpha: float) -> int:
    """Largest count ``K`` of exceeding draws with ``(1 + K) / (size + 1) <= alpha``.

    Returns ``-1`` when even a statistic above every draw cannot reach ``alpha``.
    """
    k = -1
    while k < size and (1 + (k + 1)) / (size + 1) <= alpha:
        k += 1
    return k


def critical_value(table: QuantileTable, alpha: float, scale: float = 1.0) -> float:
    """Threshold ``t`` with ``statistic >= t`` iff ``p_value <= alpha``.

    This is the scaled order statistic of rank ``ceil((1 - alpha)(N + 1))``.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    size = len(table)
    budget = rejection_budget(size, alpha)
    if budget < 0:
        return math.inf
    if budget >= size:
        return -math.inf
    return float((scale * table.draws)[size - budget - 1])


def p_value(statistic: float, table: QuantileTable, scale: float = 1.0) -> float:
    """``(1 + #{scale * draw > statistic}) / (N + 1)``."""
    if not scale > 0:
        raise ValueError(f"scale must be positive, got {scale}")
    size = len(table)
    count = int(np.count_nonzero(scale * table.draws > statistic))
    return (1 + count) / (size + 1)


def table_cache_path(cache_dir, t0, step, replications, seed) -> Path:
    name = f"gauss_t0={t0!r}_step={step!r}_reps={replications}_seed={seed}.npy"
    return Path(cache_dir) / name


def save_table(table: QuantileTable, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp.npy")
    np.save(tmp, table.draws)
    tmp.replace(path)


def load_table(path, label="gaussian_bound", seed=None) -> QuantileTable:
    return QuantileTable(np.load(path), label, seed)


def cached_gaussian_table(t0, step=GRID_STEP, replications=GAUSSIAN_REPLICATIONS,
                          seed=0, cache_dir=None) -> QuantileTable:
    """Build the table, reusing ``cache_dir`` when it already holds one."""
    if cache_dir is None:
        return build_gaussian_quantile_table(t0, step, replications, seed)
    path = table_cache_path(cache_dir, t0, step, replications, seed)
    if path.exists():
        return load_table(path, seed=seed)
    table = build_gaussian_quantile_table(t0, step, replications, seed)
    save_table(table, path)
    return table
