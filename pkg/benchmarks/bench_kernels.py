"""Compare the numba and numpy kernel backends.

    python3 benchmarks/bench_kernels.py            # kernels + end-to-end
    python3 benchmarks/bench_kernels.py --quick    # smaller sizes

Kernel timings call both backends in-process.  The end-to-end timing runs a
decomposition workload twice in subprocesses, once with
PROTORI_DISABLE_NUMBA=1, so the whole library goes through each path.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from protori.kernels import NEG_INF, backends, maxexp_table


def best_of(fn, repeat=5):
    fn()  # warm-up (includes numba compilation)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def kernel_cases(scale):
    rng = np.random.default_rng(0)
    rad = rng.integers(2, 13, size=8).astype(np.int64)
    m = 20000 * scale
    x = np.stack([rng.integers(0, r, size=m) for r in rad], axis=1).astype(np.int64)
    y = np.stack([rng.integers(0, r, size=m) for r in rad], axis=1).astype(np.int64)
    z = rng.integers(-10**9, 10**9, size=m).astype(np.int64)
    src = np.array([12, 24, 48 * scale], dtype=np.int64)
    tgt = np.array([6, 12], dtype=np.int64)
    mat = np.array([[1, 5, 3], [7, 2, 11]], dtype=np.int64)
    r, s = 3, 5
    grid = np.arange(-6, 7)
    cands = np.array(np.meshgrid(*[grid] * r)).reshape(r, -1).T.astype(np.int64)
    cands = np.repeat(cands, scale, axis=0)
    scan_args = (
        cands, np.array([1, 2, 0], dtype=np.int64), 6,
        rng.integers(-6, 7, size=(s, r)).astype(np.int64),
        rng.integers(1, 30, size=s).astype(np.int64),
        np.array([2, 3, 5], dtype=np.int64),
        rng.integers(-2, 3, size=(s, 3)).astype(np.int64),
        np.full(s, NEG_INF, dtype=np.int64),
        np.zeros(s, dtype=np.bool_),
        maxexp_table(6 * 30 + 2),
    )
    return {
        "carry_add": lambda k: k.carry_add(x, y, rad),
        "negate": lambda k: k.negate(x, rad),
        "window": lambda k: k.window(x, rad, 6),
        "from_ints": lambda k: k.from_ints(z, rad),
        "hom_images": lambda k: k.hom_images(mat, src, tgt),
        "functional_scan": lambda k: k.functional_scan(*scan_args),
    }


WORKLOAD = """
import random, sys, time
sys.path.insert(0, "tests")
from helpers import planted_instance
from protori.decomp import main_decompose
from protori.kernels import BACKEND
rng = random.Random(0)
insts = [planted_instance(rng)[0] for _ in range(12)]
t0 = time.perf_counter()
for g in insts:
    main_decompose(g, 8)
print(BACKEND, time.perf_counter() - t0)
"""


def end_to_end():
    out = {}
    for flag in ("0", "1"):
        env = dict(os.environ, PROTORI_DISABLE_NUMBA=flag)
        proc = subprocess.run([sys.executable, "-c", WORKLOAD], env=env, capture_output=True,
                              text=True, check=True,
                              cwd=os.path.join(os.path.dirname(__file__), ".."))
        name, secs = proc.stdout.split()
        out[name] = float(secs)
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true")
    ap.add_argument("--no-e2e", action="store_true", help="skip the subprocess workload")
    args = ap.parse_args()
    scale = 1 if args.quick else 5
    impls = backends()
    names = sorted(impls)
    print(f"{'kernel':<18}" + "".join(f"{n:>12}" for n in names) + f"{'speedup':>10}")
    for case, fn in kernel_cases(scale).items():
        ts = {n: best_of(lambda: fn(impls[n])) for n in names}
        ref = impls["numpy"]
        for n in names:
            a, b = fn(impls[n]), fn(ref)
            assert np.array_equal(a, b), f"{case}: {n} disagrees with numpy"
        speed = ts["numpy"] / ts["numba"] if "numba" in ts else float("nan")
        print(f"{case:<18}" + "".join(f"{ts[n] * 1e3:10.2f}ms" for n in names) + f"{speed:9.1f}x")
    if not args.no_e2e:
        e2e = end_to_end()
        print("\nend to end: main_decompose on 12 planted instances at bound 8")
        for n, secs in sorted(e2e.items()):
            print(f"  {n:<8}{secs:8.2f}s")


if __name__ == "__main__":
    main()
