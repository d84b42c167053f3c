"""Compare the numba and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import math
import timeit

import numpy as np

from pdroots import _kernels


def _cases(rng):
    shifts = np.sort(rng.uniform(-50, 50, 400))
    coefs = rng.uniform(0.1, 1.0, 400)
    x = rng.uniform(-60, 60, 200_000)
    t = rng.uniform(-50, 50, 100_000)
    c, w, s = rng.normal(size=64), rng.uniform(0, 30, 64), rng.uniform(-math.pi, math.pi, 64)
    xt = rng.uniform(10, 120, 200_000)
    return {
        "translate_sum": lambda k: getattr(_kernels, f"translate_sum_{k}")(x, shifts, coefs, 0.5, 1.0),
        "geometric_tail": lambda k: getattr(_kernels, f"geometric_tail_{k}")(xt, 15.0, 1.0, 0.5, 0.5, 1.0, 1.0),
        "cosine_sum": lambda k: getattr(_kernels, f"cosine_sum_{k}")(t, c, w, s),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    kinds = ["numpy"] + (["numba"] if _kernels.NUMBA_AVAILABLE else [])
    cases = _cases(np.random.default_rng(0))
    print(f"{'kernel':<16}" + "".join(f"{k:>12}" for k in kinds) + f"{'speedup':>10}  max|diff|")
    for name, run in cases.items():
        for k in kinds:
            run(k)                      # warm-up (jit compile)
        best = {k: min(timeit.repeat(lambda: run(k), number=1, repeat=args.repeat)) for k in kinds}
        diff = float(np.max(np.abs(run("numpy") - run(kinds[-1]))))
        speed = best["numpy"] / best[kinds[-1]]
        print(f"{name:<16}" + "".join(f"{best[k] * 1e3:>10.2f}ms" for k in kinds) + f"{speed:>9.1f}x  {diff:.1e}")


if __name__ == "__main__":
    main()
