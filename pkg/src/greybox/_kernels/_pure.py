"""Pure-Python kernels: the fallback backend.

These functions mirror the Cython versions in ``_speedups.pyx`` operation
for operation.  Keep the floating-point evaluation order of the two files
in lockstep: tests assert bit-identical outputs between backends, and the
reproducibility guarantees depend on it.
"""

from __future__ import annotations

from math import exp, sqrt

BACKEND_NAME = "pure"


def ridge_fit(x_flat, y, w, n, d, lam):
    """Weighted ridge regression via normal equations.

    ``x_flat`` is the row-major n*d design matrix (mask bits as floats),
    ``y`` the regression targets, ``w`` the per-sample weights.  The
    intercept is prepended internally and never penalized.  Returns a list
    of d+1 coefficients: ``[intercept, beta_0, ..., beta_{d-1}]``.
    """
    m = d + 1
    a = [0.0] * (m * m)
    b = [0.0] * m
    for s in range(n):
        ws = w[s]
        ys = y[s]
        row = s * d
        a[0] += ws
        b[0] += ws * ys
        for i in range(d):
            wxi = ws * x_flat[row + i]
            a[i + 1] += wxi
            b[i + 1] += wxi * ys
            base = (i + 1) * m
            for j in range(i, d):
                a[base + j + 1] += wxi * x_flat[row + j]
    for i in range(1, m):
        a[i * m + i] += lam
    # mirror the upper triangle (row 0 built the first row already)
    for i in range(m):
        for j in range(i + 1, m):
            a[j * m + i] = a[i * m + j]
    low = _cholesky(a, m)
    return _cho_solve(low, b, m)


def _cholesky(a, m):
    low = [0.0] * (m * m)
    for j in range(m):
        s = a[j * m + j]
        for k in range(j):
            v = low[j * m + k]
            s -= v * v
        if s <= 0.0:
            raise ArithmeticError("matrix not positive definite")
        root = sqrt(s)
        low[j * m + j] = root
        for i in range(j + 1, m):
            t = a[i * m + j]
            for k in range(j):
                t -= low[i * m + k] * low[j * m + k]
            low[i * m + j] = t / root
    return low


def _cho_solve(low, b, m):
    z = [0.0] * m
    for i in range(m):
        t = b[i]
        for k in range(i):
            t -= low[i * m + k] * z[k]
        z[i] = t / low[i * m + i]
    out = [0.0] * m
    for i in range(m - 1, -1, -1):
        t = z[i]
        for k in range(i + 1, m):
            t -= low[k * m + i] * out[k]
        out[i] = t / low[i * m + i]
    return out


def logreg_epochs(indptr, indices, vals, y, n, n_classes, n_features,
                  weights, biases, lr, l2, iters):
    """Full-batch gradient descent for multinomial logistic regression.

    Documents arrive as CSR count features.  ``weights`` (flat, row-major
    n_classes x n_features) and ``biases`` are the starting point; a fixed
    number of iterations is run and fresh ``(weights, biases)`` lists are
    returned.  The L2 penalty never touches the biases.
    """
    c_count = n_classes
    weights = list(weights)
    biases = list(biases)
    gw = [0.0] * (c_count * n_features)
    gb = [0.0] * c_count
    scores = [0.0] * c_count
    exps = [0.0] * c_count
    inv_n = 1.0 / n
    for _ in range(iters):
        for i in range(c_count * n_features):
            gw[i] = 0.0
        for c in range(c_count):
            gb[c] = 0.0
        for doc in range(n):
            lo = indptr[doc]
            hi = indptr[doc + 1]
            for c in range(c_count):
                s = biases[c]
                base = c * n_features
                for p in range(lo, hi):
                    s += weights[base + indices[p]] * vals[p]
                scores[c] = s
            top = scores[0]
            for c in range(1, c_count):
                if scores[c] > top:
                    top = scores[c]
            total = 0.0
            for c in range(c_count):
                e = exp(scores[c] - top)
                exps[c] = e
                total += e
            yc = y[doc]
            for c in range(c_count):
                g = exps[c] / total
                if c == yc:
                    g -= 1.0
                gb[c] += g
                base = c * n_features
                for p in range(lo, hi):
                    gw[base + indices[p]] += g * vals[p]
        for c in range(c_count):
            biases[c] -= lr * gb[c] * inv_n
        for i in range(c_count * n_features):
            weights[i] -= lr * (gw[i] * inv_n + l2 * weights[i])
    return weights, biases


def perceptron_epochs(indptr, indices, vals, y, n_classes, n_features, order):
    """Averaged multiclass perceptron over CSR count features.

    ``order`` is the flat visit sequence (all epochs concatenated), which
    makes any shuffling the caller's responsibility and keeps this kernel
    deterministic.  Returns ``(avg_weights, avg_biases)`` as flat lists.
    """
    c_count = n_classes
    w = [0.0] * (c_count * n_features)
    b = [0.0] * c_count
    u = [0.0] * (c_count * n_features)
    ub = [0.0] * c_count
    scores = [0.0] * c_count
    cnt = 1.0
    for doc in order:
        lo = indptr[doc]
        hi = indptr[doc + 1]
        for c in range(c_count):
            s = b[c]
            base = c * n_features
            for p in range(lo, hi):
                s += w[base + indices[p]] * vals[p]
            scores[c] = s
        pred = 0
        for c in range(1, c_count):
            if scores[c] > scores[pred]:
                pred = c
        yc = y[doc]
        if pred != yc:
            ybase = yc * n_features
            pbase = pred * n_features
            for p in range(lo, hi):
                f = indices[p]
                v = vals[p]
                w[ybase + f] += v
                u[ybase + f] += cnt * v
                w[pbase + f] -= v
                u[pbase + f] -= cnt * v
            b[yc] += 1.0
            ub[yc] += cnt
            b[pred] -= 1.0
            ub[pred] -= cnt
        cnt += 1.0
    avg_w = [0.0] * (c_count * n_features)
    avg_b = [0.0] * c_count
    for i in range(c_count * n_features):
        avg_w[i] = w[i] - u[i] / cnt
    for c in range(c_count):
        avg_b[c] = b[c] - ub[c] / cnt
    return avg_w, avg_b
