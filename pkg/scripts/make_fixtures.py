"""Regenerate the station-shaped synthetic CSV fixtures in ``data/``.

Each series covers the years 1901-2020 (120 rows); the baseline ends at
1950, i.e. ``--first-year 1901 --cutoff-year 1950``.
"""
from pathlib import Path

import numpy as np

from relevantscan._io import atomic_write_csv

FIRST_YEAR, LAST_YEAR, SEED = 1901, 2020, 1950
OUT = Path(__file__).resolve().parent.parent / "data"


def main():
    years = np.arange(FIRST_YEAR, LAST_YEAR + 1)
    rng = np.random.default_rng(SEED)
    noise = 0.45 * rng.standard_normal(years.size)
    after = np.clip(years - 1950, 0, None) / (LAST_YEAR - 1950)
    series = {
        "station_warming.csv": 24.0 + 2.2 * after**2 + noise,
        "station_flat.csv": 24.0 + noise[::-1],
        "station_spike.csv": 24.0 + noise + np.where((years >= 1990) & (years < 2000), 2.5, 0.0),
    }
    for name, values in series.items():
        atomic_write_csv(OUT / name, ["value"], [[repr(float(v))] for v in values])
        print(OUT / name)


if __name__ == "__main__":
    main()
