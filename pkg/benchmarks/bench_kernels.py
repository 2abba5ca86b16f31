"""Time the numba and numpy forms of every hot kernel, then a short
end-to-end learner run under each backend.

    python benchmarks/bench_kernels.py [--repeat 5] [--skip-e2e]
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from rankfeed import _kernels

E2E = """
import time
import numpy as np
from rankfeed import BACKEND
from rankfeed.environments import RankingEnvironment, gen_bounded_variation
from rankfeed.learners import LearnerConfig, run_learner
from rankfeed.oracles import OracleConfig
from rankfeed.ranking_model import RankingParams
seq = gen_bounded_variation(20000, 0.3, 0, 10)
cfg = LearnerConfig("inst_full", 10, 1.0, 500, OracleConfig("hedge", lam=0.01))
run_learner(RankingEnvironment(seq, RankingParams(1.0)), cfg, 200, 0)  # warm up / compile
t0 = time.perf_counter()
run_learner(RankingEnvironment(seq, RankingParams(1.0)), cfg, 20000, 0)
print(BACKEND, time.perf_counter() - t0)
"""


def cases(rng):
    A, k, m = 10, 10, 500
    scores = rng.uniform(-1, 1, k)
    uni = rng.random(k)
    rows = rng.integers(0, A, (m, k))
    ranking = rows[0]
    numer = np.zeros((A, k * k + 1), dtype=np.int64)
    count = np.zeros_like(numer)
    abuf = np.zeros((m, A), dtype=np.int64)
    tbuf = np.zeros_like(abuf)
    ahead, total = _kernels.IMPLEMENTATIONS["pair_tallies"][1](ranking, A)
    denoms = np.arange(k * k + 1, dtype=np.float64)
    denoms[0] = 1.0
    return {
        "sample_order": (scores, uni),
        "sample_orders": (rng.uniform(-1, 1, (m, k)), rng.random((m, k))),
        "pair_tallies": (ranking, A),
        "window_tallies": (rows, A),
        "project_simplex": (rng.normal(size=50),),
        "window_push": (numer, count, abuf, tbuf, 0, False, ahead, total),
        "reduce_fractions": (numer, count, denoms),
    }


def bench_kernels(repeat):
    args = cases(np.random.default_rng(0))
    print(f"{'kernel':<18}{'numba us':>12}{'numpy us':>12}{'speedup':>10}")
    for name, (nb, npy) in _kernels.IMPLEMENTATIONS.items():
        a = args[name]
        nb(*a)  # compile outside the timed region
        times = []
        for fn in (nb, npy):
            t = timeit.Timer(lambda fn=fn: fn(*a))
            n, _ = t.autorange()
            times.append(min(t.repeat(repeat, n)) / n * 1e6)
        print(f"{name:<18}{times[0]:>12.2f}{times[1]:>12.2f}{times[1] / times[0]:>10.1f}x")


def bench_end_to_end():
    print("\nend-to-end inst_full, |A| = 10, T = 20000")
    for flag in ("0", "1"):
        env = dict(os.environ, RANKFEED_DISABLE_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", E2E], env=env, capture_output=True, text=True, check=True)
        backend, secs = out.stdout.split()
        print(f"  {backend:<6} {float(secs):8.2f} s")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--skip-e2e", action="store_true")
    args = ap.parse_args()
    if _kernels.numba is None:
        sys.exit("numba is not importable; nothing to compare")
    bench_kernels(args.repeat)
    if not args.skip_e2e:
        bench_end_to_end()


if __name__ == "__main__":
    main()
