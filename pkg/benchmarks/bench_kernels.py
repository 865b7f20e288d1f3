"""Numba kernels against their numpy fallbacks.

Kernel rows call both implementations directly, after one warm-up call so
JIT compilation is excluded.  The end-to-end rows time random global Gamma
evaluations in a subprocess per backend, since GRASTOR_BACKEND is read at
import time.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from grastor import _kernels as K
from grastor.scalars import prime_field
from grastor.setgamma import VectorSetEngine

E2E = """
import time, numpy as np
from grastor import exactlinalg as el, geometry as geo
from grastor.scalars import prime_field
pts = el.enumerate_subspaces({n}, prime_field({p}))
rng = np.random.default_rng(0)
R = rng.integers(0, len(pts), size=(400, 5))
geo.gamma_global(*(pts[i] for i in R[0]))
geo.left_op.cache_clear()
t = time.perf_counter()
for row in R:
    geo.gamma_global(*(pts[i] for i in row))
print(time.perf_counter() - t)
"""


def _tables(p):
    add, mul, neg, inv = prime_field(p).tables
    return add, mul, neg, inv


def bench_kernels(repeat):
    rows = []
    rng = np.random.default_rng(1)
    for p, shape in ((3, (20, 8)), (5, (40, 16)), (7, (80, 32))):
        add, mul, neg, inv = _tables(p)
        M = rng.integers(0, p, size=shape).astype(np.int64)
        O = rng.integers(0, p, size=(shape[0], shape[1] // 2)).astype(np.int64)
        res = {}
        for name, impl in K.IMPLS.items():
            f = impl["left_null_project"]
            res[name] = f(M, O, add, mul, neg, inv)
            t = min(timeit.repeat(lambda: f(M, O, add, mul, neg, inv), number=20, repeat=repeat)) / 20
            rows.append((f"left_null_project GF({p}) {shape}", name, t))
        assert np.array_equal(res["numba"], res["numpy"]), "backends disagree"
        for name, impl in K.IMPLS.items():
            f = impl["rref"]
            t = min(timeit.repeat(lambda: f(M.copy(), add, mul, neg, inv), number=20, repeat=repeat)) / 20
            rows.append((f"rref GF({p}) {shape}", name, t))
    for p, n in ((2, 4), (3, 3)):
        out = {}
        for name in ("numba", "numpy"):
            E = VectorSetEngine(prime_field(p), n, backend=name)
            out[name] = E.triple_table(1, 2, 3)
            t = min(timeit.repeat(lambda: E.triple_table(1, 2, 3), number=3, repeat=repeat)) / 3
            rows.append((f"vector-set triple table GF({p})^{n}", name, t))
        assert np.array_equal(out["numba"], out["numpy"]), "backends disagree"
    return rows


def bench_end_to_end():
    rows = []
    for p, n in ((3, 4), (5, 4)):
        for name in ("numba", "numpy"):
            env = dict(os.environ, GRASTOR_BACKEND=name)
            r = subprocess.run([sys.executable, "-c", E2E.format(p=p, n=n)], env=env,
                               capture_output=True, text=True, check=True)
            rows.append((f"400 x gamma_global GF({p})^{n}", name, float(r.stdout.strip()) / 400))
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--skip-e2e", action="store_true")
    args = ap.parse_args()
    rows = bench_kernels(args.repeat)
    if not args.skip_e2e:
        rows += bench_end_to_end()
    by_case = {}
    for case, name, t in rows:
        by_case.setdefault(case, {})[name] = t
    print(f"{'case':45s} {'numba':>12s} {'numpy':>12s} {'speedup':>8s}")
    for case, t in by_case.items():
        print(f"{case:45s} {t['numba'] * 1e6:10.1f}us {t['numpy'] * 1e6:10.1f}us {t['numpy'] / t['numba']:7.1f}x")


if __name__ == "__main__":
    main()
