"""Benchmark the compiled kernels against the pure-Python fallback.

Times the individual hot operations and one end-to-end sampler loop (the
dominant cost of the experiment suites). The sampler row reflects whichever
backend the installed package selected; per-op rows call both backends
directly. Run: python benchmarks/bench_kernels.py [--trials N]
"""

import argparse
import time
from random import Random

from bdga import KERNEL_BACKEND
from bdga._kernels import _pykernels

try:
    from bdga._kernels import _ckernels
except ImportError:
    _ckernels = None

from bdga.platforms import preset
from bdga.security_lab import sample_real


def _time(fn, reps):
    t0 = time.perf_counter()
    for _ in range(reps):
        fn()
    return (time.perf_counter() - t0) / reps


def bench_ops(reps):
    rng = Random(1)
    s8 = list(range(1, 9))
    rng.shuffle(s8)
    a = bytes(s8)
    rng.shuffle(s8)
    b = bytes(s8)
    rng.shuffle(s8)
    c = bytes(s8)
    m1 = bytes((1, 2, 0, 1))
    m2 = bytes((3, 1, 4, 2))
    m3 = bytes((2, 0, 1, 3))
    seq_p = [a, b, c] * 4
    seq_m = [m1, m2, m3] * 4
    cases = [
        ("perm_compose(deg 8)", lambda k: k.perm_compose(a, b)),
        ("perm_conjugate(deg 8)", lambda k: k.perm_conjugate(a, b)),
        ("perm_sandwich(deg 8)", lambda k: k.perm_sandwich(a, b, c)),
        ("perm_product(12 terms)", lambda k: k.perm_product(seq_p, bytes(range(1, 9)))),
        ("mat2_compose(p=5)", lambda k: k.mat2_compose(m1, m2, 5)),
        ("mat2_conjugate(p=5)", lambda k: k.mat2_conjugate(m1, m2, 5)),
        ("mat2_twisted(p=5)", lambda k: k.mat2_twisted(m1, m2, m3, 5)),
        ("mat2_product(12 terms)", lambda k: k.mat2_product(seq_m, bytes((1, 0, 0, 1)), 5)),
    ]
    print(f"{'operation':<26}{'python':>12}{'compiled':>12}{'speedup':>9}")
    for label, op in cases:
        t_py = _time(lambda: op(_pykernels), reps)
        if _ckernels is None:
            print(f"{label:<26}{t_py * 1e9:>10.0f}ns{'n/a':>12}{'':>9}")
            continue
        t_c = _time(lambda: op(_ckernels), reps)
        print(f"{label:<26}{t_py * 1e9:>10.0f}ns{t_c * 1e9:>10.0f}ns{t_py / t_c:>8.1f}x")


def bench_sampler(trials):
    pf = preset("s4_conj")
    t0 = time.perf_counter()
    for t in range(trials):
        sample_real(pf, 8, Random(t))
    dt = time.perf_counter() - t0
    print(
        f"\nsample_real(s4_conj, n=8) x{trials} under the '{KERNEL_BACKEND}' backend: "
        f"{dt:.2f}s ({dt / trials * 1e6:.0f}us/sample)"
    )
    print("re-run with BDGA_PURE_PYTHON=1 to time the fallback end to end")


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument("--trials", type=int, default=20000)
    args = parser.parse_args()
    bench_ops(max(args.trials, 1000))
    bench_sampler(args.trials)
