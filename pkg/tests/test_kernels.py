"""Backend equivalence: the compiled kernels must match the pure ones bitwise."""

import random

import pytest

from greybox._kernels import _pure

speedups = pytest.importorskip(
    "greybox._kernels._speedups",
    reason="compiled extension not built; pure backend only",
)


def _random_ridge_case(rng, n, d):
    x = [rng.choice((0.0, 1.0)) for _ in range(n * d)]
    y = [rng.uniform(0.0, 1.0) for _ in range(n)]
    w = [rng.uniform(0.05, 1.0) for _ in range(n)]
    return x, y, w


@pytest.mark.parametrize("n,d,lam", [(50, 4, 1.0), (200, 9, 0.5), (64, 6, 0.0)])
def test_ridge_fit_bitwise_equal(n, d, lam):
    rng = random.Random(1234 + n)
    x, y, w = _random_ridge_case(rng, n, d)
    a = _pure.ridge_fit(x, y, w, n, d, lam)
    b = speedups.ridge_fit(x, y, w, n, d, lam)
    assert a == b  # exact float equality, not approximate


def _random_csr(rng, n, d, density=4):
    indptr = [0]
    indices = []
    vals = []
    for _ in range(n):
        feats = sorted(rng.sample(range(d), rng.randint(1, density)))
        for f in feats:
            indices.append(f)
            vals.append(float(rng.randint(1, 3)))
        indptr.append(len(indices))
    return indptr, indices, vals


def test_logreg_epochs_bitwise_equal():
    rng = random.Random(77)
    n, d, classes = 60, 25, 3
    indptr, indices, vals = _random_csr(rng, n, d)
    y = [rng.randrange(classes) for _ in range(n)]
    init = [rng.uniform(-0.01, 0.01) for _ in range(classes * d)]
    args = (indptr, indices, vals, y, n, classes, d)
    wa, ba = _pure.logreg_epochs(*args, list(init), [0.0] * classes, 0.5, 1e-4, 50)
    wb, bb = speedups.logreg_epochs(*args, list(init), [0.0] * classes, 0.5, 1e-4, 50)
    assert wa == wb and ba == bb


def test_perceptron_epochs_bitwise_equal():
    rng = random.Random(99)
    n, d, classes = 80, 1 << 10, 2
    indptr, indices, vals = _random_csr(rng, n, d, density=6)
    y = [rng.randrange(classes) for _ in range(n)]
    order = []
    base = list(range(n))
    for _ in range(5):
        rng.shuffle(base)
        order.extend(base)
    wa, ba = _pure.perceptron_epochs(indptr, indices, vals, y, classes, d, order)
    wb, bb = speedups.perceptron_epochs(indptr, indices, vals, y, classes, d, order)
    assert wa == wb and ba == bb


def test_backend_selection_env():
    import subprocess
    import sys

    code = ("import greybox._kernels as k; print(k.BACKEND)")
    out = subprocess.run([sys.executable, "-c", code], capture_output=True,
                         text=True, env={"PATH": "/usr/bin:/bin"})
    assert out.stdout.strip() == "compiled"
    out = subprocess.run([sys.executable, "-c", code], capture_output=True,
                         text=True,
                         env={"PATH": "/usr/bin:/bin", "GREYBOX_PURE": "1"})
    assert out.stdout.strip() == "pure"


def test_ridge_raises_on_singular_system():
    # a feature that never fires makes the lam=0 normal matrix singular
    x = [0.0, 0.0, 0.0, 0.0]
    y = [0.5, 0.7]
    w = [1.0, 1.0]
    with pytest.raises(ArithmeticError):
        _pure.ridge_fit(x, y, w, 2, 2, 0.0)
    with pytest.raises(ArithmeticError):
        speedups.ridge_fit(x, y, w, 2, 2, 0.0)
