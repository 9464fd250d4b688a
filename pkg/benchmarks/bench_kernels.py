"""Time the compiled and numpy kernel backends on the same inputs.

    python3 benchmarks/bench_kernels.py [--n 1000] [--repeat 5]

Both backends must agree exactly; the script checks that before timing.
"""
import argparse
import timeit

import numpy as np

from relevantscan import _backend
from relevantscan.bootstrap import estimate_extremal_sets
from relevantscan.series import BaselineSpec, build_prefix
from relevantscan.synthetic import ErrorModel, MeanSpec, gen_series


def workloads(n):
    series = gen_series(MeanSpec("mu_a", a=2.5), ErrorModel("IID"), n, seed=0)
    prefix = build_prefix(series)
    spec = BaselineSpec.from_t0(n, 0.25)
    family = estimate_extremal_sets(prefix, spec, 20, 0.5)
    rng = np.random.default_rng(1)
    paths = np.zeros((200, n + 1))
    np.cumsum(rng.standard_normal((200, n)), axis=1, out=paths[:, 1:])
    bm = np.zeros((20, 1001))
    np.cumsum(rng.standard_normal((20, 1000)) * np.sqrt(1e-3), axis=1, out=bm[:, 1:])
    s, k0 = prefix.sums, spec.k0
    return {
        "scan_max": lambda k: k.scan_max(s, k0, 20, 1.0),
        "min_delta_scan": lambda k: k.min_delta_scan(s, k0, 20, 1.5),
        "locate_first": lambda k: k.locate_first(s, k0, 20, 1.0, 0.5 * np.log(n)),
        "draws_t_star(200)": lambda k: k.draws_t_star(
            paths, k0, family.run_c, family.run_start, family.run_stop,
            family.run_sign, 0.5),
        "draws_m(20)": lambda k: k.draws_m(bm, 250, 0.001, 0.25),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=1000)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    names = _backend.available()
    if "cython" not in names:
        print("compiled kernels not built; only the numpy backend is available")
    backends = {name: _backend.get_backend(name) for name in names}
    print(f"{'kernel':<20}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for label, work in workloads(args.n).items():
        outputs = [work(k) for k in backends.values()]
        for other in outputs[1:]:
            np.testing.assert_array_equal(np.asarray(outputs[0]), np.asarray(other))
        times = [min(timeit.repeat(lambda: work(k), number=1, repeat=args.repeat))
                 for k in backends.values()]
        speed = f"{times[-1] / times[0]:>9.1f}x" if len(times) > 1 else ""
        print(f"{label:<20}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times) + speed)


if __name__ == "__main__":
    main()
