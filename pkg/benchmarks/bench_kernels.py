#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Times the three hot loops (weighted ridge fit, logistic-regression
epochs, perceptron epochs) on explanation- and training-shaped inputs
and prints the speedup.  Both backends are imported side by side, so no
environment switching is needed:

    python benchmarks/bench_kernels.py
"""

import random
import time

from greybox._kernels import _pure

try:
    from greybox._kernels import _speedups
except ImportError:
    _speedups = None


def timeit(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def ridge_case(rng, n, d):
    x = [rng.choice((0.0, 1.0)) for _ in range(n * d)]
    y = [rng.uniform(0.0, 1.0) for _ in range(n)]
    w = [rng.uniform(0.05, 1.0) for _ in range(n)]
    return x, y, w


def csr_case(rng, n, d, density):
    indptr, indices, vals = [0], [], []
    for _ in range(n):
        for f in sorted(rng.sample(range(d), density)):
            indices.append(f)
            vals.append(float(rng.randint(1, 3)))
        indptr.append(len(indices))
    return indptr, indices, vals


def bench_ridge(rows):
    rng = random.Random(1)
    for n, d in [(1000, 10), (1000, 50), (1000, 150)]:
        x, y, w = ridge_case(rng, n, d)
        pure = timeit(lambda: _pure.ridge_fit(x, y, w, n, d, 1.0))
        compiled = (timeit(lambda: _speedups.ridge_fit(x, y, w, n, d, 1.0))
                    if _speedups else None)
        rows.append((f"ridge_fit n={n} d={d}", pure, compiled))


def bench_logreg(rows):
    rng = random.Random(2)
    for n, d, iters in [(200, 400, 300), (1000, 2000, 100)]:
        indptr, indices, vals = csr_case(rng, n, d, density=8)
        y = [rng.randrange(2) for _ in range(n)]
        init = [rng.uniform(-0.01, 0.01) for _ in range(2 * d)]
        args = (indptr, indices, vals, y, n, 2, d)
        pure = timeit(
            lambda: _pure.logreg_epochs(*args, list(init), [0.0, 0.0],
                                        0.5, 1e-4, iters), repeat=1)
        compiled = (timeit(
            lambda: _speedups.logreg_epochs(*args, list(init), [0.0, 0.0],
                                            0.5, 1e-4, iters), repeat=1)
            if _speedups else None)
        rows.append((f"logreg n={n} d={d} iters={iters}", pure, compiled))


def bench_perceptron(rows):
    rng = random.Random(3)
    for n, bits, epochs in [(200, 18, 10), (2000, 18, 10)]:
        d = 1 << bits
        indptr, indices, vals = csr_case(rng, n, d, density=12)
        y = [rng.randrange(2) for _ in range(n)]
        order = []
        base = list(range(n))
        for _ in range(epochs):
            rng.shuffle(base)
            order.extend(base)
        args = (indptr, indices, vals, y, 2, d, order)
        pure = timeit(lambda: _pure.perceptron_epochs(*args), repeat=1)
        compiled = (timeit(lambda: _speedups.perceptron_epochs(*args), repeat=1)
                    if _speedups else None)
        rows.append((f"perceptron n={n} bits={bits} epochs={epochs}",
                     pure, compiled))


def main():
    rows = []
    bench_ridge(rows)
    bench_logreg(rows)
    bench_perceptron(rows)
    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{width}}  {'pure':>10}  {'compiled':>10}  {'speedup':>8}")
    for name, pure, compiled in rows:
        if compiled is None:
            print(f"{name:<{width}}  {pure:>9.4f}s  {'absent':>10}  {'-':>8}")
        else:
            print(f"{name:<{width}}  {pure:>9.4f}s  {compiled:>9.4f}s"
                  f"  {pure / compiled:>7.1f}x")
    if _speedups is None:
        print("\ncompiled extension not built; showing pure backend only")


if __name__ == "__main__":
    main()
