"""Time the numba kernels against the pure-numpy fallback.

    python benchmarks/bench_kernels.py            # kernel micro-benchmarks
    python benchmarks/bench_kernels.py --verify   # also exhaustive verify, t=400, per backend

The ``--verify`` mode runs each backend in a fresh interpreter, selected with
MULTISTAGE_GT_DISABLE_NUMBA, because the backend is fixed at import.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from multistage_gt import _kernels_numba, _kernels_numpy
from multistage_gt.codes import outcome_vector, random_constant_weight_code
from multistage_gt.strategy_s2 import S2Params, build_design

BACKENDS = {"numpy": _kernels_numpy, "numba": _kernels_numba}


def timeit(fn, *args, repeat=5, number=200):
    fn(*args)  # warm-up; includes JIT compilation for numba
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        for _ in range(number):
            fn(*args)
        best = min(best, (time.perf_counter() - start) / number)
    return best


def kernel_cases():
    design = build_design(S2Params(q=20, n_hat=2, n_prime=6, inner_weight=3, t=400))
    code = design.code
    r = outcome_vector(code, [3, 250]).words
    everyone = np.arange(code.n_cols, dtype=np.int64)
    members = design.classes[0][5]
    mask = np.zeros(code.n_cols, dtype=bool)
    mask[[3, 250]] = True
    pools = design.code.row_pools
    flat = np.concatenate(pools)
    offsets = np.concatenate(([0], np.cumsum([len(p) for p in pools]))).astype(np.int64)
    yield "pool_hits    (t=400, 12 pools)", "pool_hits", (mask, flat, offsets), 2000
    yield "or_columns   (t=400, 2 cols)", "or_columns", (code.packed, np.array([3, 250])), 2000
    yield "covered      (t=400, all)", "covered", (code.packed, everyone, r), 2000
    yield "partner_mask (t=400, class)", "partner_mask", (code.packed, members, 3, r), 2000

    generic = random_constant_weight_code(12, 20, 3, seed=1)
    r = outcome_vector(generic, [1, 7, 13]).words
    everyone = np.arange(generic.n_cols, dtype=np.int64)
    cand = everyone[_kernels_numpy.covered(generic.packed, everyone, r)]
    yield f"edges        (pool={len(cand)}, s=3)", "consistent_edges", (generic.packed, cand, r, 3), 200

    wide = random_constant_weight_code(16, 40, 8, seed=2)
    r = np.full(wide.n_words, np.uint64((1 << 16) - 1))
    everyone = np.arange(wide.n_cols, dtype=np.int64)
    yield "edges        (pool=40, s=3)", "consistent_edges", (wide.packed, everyone, r, 3), 20


VERIFY_SNIPPET = """
import time
from multistage_gt import BACKEND
from multistage_gt.analysis import verify_exhaustive
from multistage_gt.strategy_s2 import S2Params, build_design
p = S2Params(q=20, n_hat=2, n_prime=6, inner_weight=3, t=400)
build_design(p)
start = time.perf_counter()
s = verify_exhaustive(p, 400, 2)
print(BACKEND, s.n_sets, s.all_correct, f"{time.perf_counter() - start:.1f}")
"""


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--verify", action="store_true")
    args = parser.parse_args()

    print(f"{'kernel':32s} {'numpy us':>10s} {'numba us':>10s} {'speedup':>8s}")
    for label, name, call_args, number in kernel_cases():
        t_np = timeit(getattr(_kernels_numpy, name), *call_args, number=number)
        t_nb = timeit(getattr(_kernels_numba, name), *call_args, number=number)
        print(f"{label:32s} {t_np * 1e6:10.2f} {t_nb * 1e6:10.2f} {t_np / t_nb:7.1f}x")

    if args.verify:
        print("\nexhaustive verify, t=400 (80201 defect sets)")
        for flag in ("1", ""):
            env = dict(os.environ, MULTISTAGE_GT_DISABLE_NUMBA=flag)
            out = subprocess.run(
                [sys.executable, "-c", VERIFY_SNIPPET], env=env, capture_output=True, text=True, check=True
            )
            backend, n, ok, secs = out.stdout.split()
            print(f"  {backend:6s} {n} sets, all_correct={ok}, {secs}s")


if __name__ == "__main__":
    main()
