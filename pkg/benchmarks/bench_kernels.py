"""Benchmark: compiled kernels vs the pure-numpy fallback.

Run with::

    python benchmarks/bench_kernels.py

Workloads mirror where the package actually spends time: the fixed-point
inner loop on a slowly converging clearing system, the 3^n boundary-pattern
enumeration, and batches of small row-system solves.
"""

import time

import numpy as np

from netequil import _kernels_py as pure

try:
    from netequil import _kernels as compiled
except ImportError:
    compiled = None

W_SEVEN = np.array([
    [0.0, 0.4, 0.15, 0.0, 0.4, 0.05, 0.0],
    [0.4, 0.0, 0.15, 0.25, 0.0, 0.2, 0.0],
    [0.3, 0.1, 0.0, 0.25, 0.15, 0.2, 0.0],
    [0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
])


def timed(fn, repeat=3):
    best = np.inf
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def bench_clamp_iterate(backend):
    # plain monotone iteration on the seven-agent clearing system: the
    # nearly-degenerate shocks make this take hundreds of thousands of steps
    n = 7
    eps = 1e-5 * np.array([2.0, 1.0, -1.0, 3.0, 2.0, -1.0, -2.0])
    hi = np.array([5.0, 10.0, 10.0, 8.0, 10.0, 10.0, 6.0])
    args = (W_SEVEN, eps, np.zeros(n), np.ones(n), np.zeros(n), hi,
            hi.copy(), 1e-5, 2_000_000)
    return timed(lambda: backend.clamp_iterate(*args))


def bench_pattern_scan(backend, n=9, seed=5):
    rng = np.random.default_rng(seed)
    w = rng.uniform(0.1, 1.0, (n, n))
    w /= w.sum(axis=1, keepdims=True)
    lo = rng.uniform(-2.0, 0.0, n)
    hi = lo + rng.uniform(0.5, 3.0, n)
    eps = rng.uniform(-1.0, 1.0, n)
    return timed(lambda: backend.pattern_scan(w, eps, lo, hi, 1e-9), repeat=1)


def bench_gauss(backend, trials=2000, n=8, seed=9):
    rng = np.random.default_rng(seed)
    systems = [(rng.normal(size=(n, n)) + n * np.eye(n), rng.normal(size=n))
               for _ in range(trials)]

    def run():
        for a, b in systems:
            backend.gauss_solve(a, b)

    return timed(run)


def main():
    backends = [("python", pure)]
    if compiled is not None:
        backends.append(("cython", compiled))
    else:
        print("compiled kernels unavailable; timing the fallback only")

    rows = []
    for label, fn, note in (
        ("clamp_iterate", bench_clamp_iterate,
         "7-agent clearing, plain iteration to 1e-5"),
        ("pattern_scan", bench_pattern_scan, "3^9 = 19683 patterns"),
        ("gauss_solve", bench_gauss, "2000 solves of 8x8 row systems"),
    ):
        times = {}
        checks = {}
        for name, backend in backends:
            seconds, result = fn(backend)
            times[name] = seconds
            checks[name] = result
        if len(backends) == 2:
            a, b = checks["python"], checks["cython"]
            if label == "clamp_iterate":
                assert a[2] == b[2], "iteration counts diverged"
            elif label == "pattern_scan":
                assert a[1] == b[1] and a[2] == b[2], "patterns diverged"
        rows.append((label, note, times))

    print(f"{'kernel':<14} {'python':>10} {'cython':>10} {'speedup':>8}  note")
    for label, note, times in rows:
        py = times["python"]
        cy = times.get("cython")
        speed = f"{py / cy:7.1f}x" if cy else "      --"
        cy_text = f"{cy * 1e3:9.1f}ms" if cy else "       --"
        print(f"{label:<14} {py * 1e3:9.1f}ms {cy_text} {speed}  {note}")


if __name__ == "__main__":
    main()
