# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: the fast backend.

Each function mirrors its twin in ``_pure.py`` operation for operation so
the two backends produce bit-identical doubles.  Any change here must be
made in ``_pure.py`` as well (and vice versa); the equivalence tests will
catch drift.  Compiled with -ffp-contract=off so no FMA contraction can
reorder roundings.
"""

import array

from cpython cimport array
from libc.math cimport exp, sqrt

BACKEND_NAME = "compiled"


def ridge_fit(x_flat, y, w, int n, int d, double lam):
    """Weighted ridge via normal equations; see ``_pure.ridge_fit``."""
    cdef array.array xa = array.array("d", x_flat)
    cdef array.array ya = array.array("d", y)
    cdef array.array wa = array.array("d", w)
    cdef int m = d + 1
    cdef array.array aa = array.array("d", bytes(8 * m * m))
    cdef array.array ba = array.array("d", bytes(8 * m))
    cdef double[::1] x = xa
    cdef double[::1] yv = ya
    cdef double[::1] wv = wa
    cdef double[::1] a = aa
    cdef double[::1] b = ba
    cdef int s, i, j, row, base
    cdef double ws, ys, wxi
    for s in range(n):
        ws = wv[s]
        ys = yv[s]
        row = s * d
        a[0] += ws
        b[0] += ws * ys
        for i in range(d):
            wxi = ws * x[row + i]
            a[i + 1] += wxi
            b[i + 1] += wxi * ys
            base = (i + 1) * m
            for j in range(i, d):
                a[base + j + 1] += wxi * x[row + j]
    for i in range(1, m):
        a[i * m + i] += lam
    for i in range(m):
        for j in range(i + 1, m):
            a[j * m + i] = a[i * m + j]
    cdef array.array la = array.array("d", bytes(8 * m * m))
    cdef double[::1] low = la
    _cholesky(a, low, m)
    cdef array.array oa = array.array("d", bytes(8 * m))
    cdef array.array za = array.array("d", bytes(8 * m))
    _cho_solve(low, b, za, oa, m)
    return list(oa)


cdef int _cholesky(double[::1] a, double[::1] low, int m) except -1:
    cdef int i, j, k
    cdef double s, t, v, root
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
    return 0


cdef void _cho_solve(double[::1] low, double[::1] b, double[::1] z,
                     double[::1] out, int m) noexcept:
    cdef int i, k
    cdef double t
    for i in range(m):
        t = b[i]
        for k in range(i):
            t -= low[i * m + k] * z[k]
        z[i] = t / low[i * m + i]
    for i in range(m - 1, -1, -1):
        t = z[i]
        for k in range(i + 1, m):
            t -= low[k * m + i] * out[k]
        out[i] = t / low[i * m + i]


def logreg_epochs(indptr, indices, vals, y, int n, int n_classes,
                  int n_features, weights, biases, double lr, double l2,
                  int iters):
    """Full-batch logistic regression; see ``_pure.logreg_epochs``."""
    cdef array.array pa = array.array("i", indptr)
    cdef array.array ia = array.array("i", indices)
    cdef array.array va = array.array("d", vals)
    cdef array.array yarr = array.array("i", y)
    cdef array.array warr = array.array("d", weights)
    cdef array.array barr = array.array("d", biases)
    cdef int c_count = n_classes
    cdef array.array gwa = array.array("d", bytes(8 * c_count * n_features))
    cdef array.array gba = array.array("d", bytes(8 * c_count))
    cdef array.array sa = array.array("d", bytes(8 * c_count))
    cdef array.array ea = array.array("d", bytes(8 * c_count))
    cdef int[::1] ip = pa
    cdef int[::1] ix = ia
    cdef double[::1] vv = va
    cdef int[::1] yv = yarr
    cdef double[::1] wv = warr
    cdef double[::1] bv = barr
    cdef double[::1] gw = gwa
    cdef double[::1] gb = gba
    cdef double[::1] scores = sa
    cdef double[::1] exps = ea
    cdef double inv_n = 1.0 / n
    cdef int it, i, c, doc, lo, hi, p, base, yc, total_w
    cdef double s, top, total, e, g
    total_w = c_count * n_features
    for it in range(iters):
        for i in range(total_w):
            gw[i] = 0.0
        for c in range(c_count):
            gb[c] = 0.0
        for doc in range(n):
            lo = ip[doc]
            hi = ip[doc + 1]
            for c in range(c_count):
                s = bv[c]
                base = c * n_features
                for p in range(lo, hi):
                    s += wv[base + ix[p]] * vv[p]
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
            yc = yv[doc]
            for c in range(c_count):
                g = exps[c] / total
                if c == yc:
                    g -= 1.0
                gb[c] += g
                base = c * n_features
                for p in range(lo, hi):
                    gw[base + ix[p]] += g * vv[p]
        for c in range(c_count):
            bv[c] -= lr * gb[c] * inv_n
        for i in range(total_w):
            wv[i] -= lr * (gw[i] * inv_n + l2 * wv[i])
    return list(warr), list(barr)


def perceptron_epochs(indptr, indices, vals, y, int n_classes,
                      int n_features, order):
    """Averaged multiclass perceptron; see ``_pure.perceptron_epochs``."""
    cdef array.array pa = array.array("i", indptr)
    cdef array.array ia = array.array("i", indices)
    cdef array.array va = array.array("d", vals)
    cdef array.array yarr = array.array("i", y)
    cdef array.array oarr = array.array("i", order)
    cdef int c_count = n_classes
    cdef array.array wa = array.array("d", bytes(8 * c_count * n_features))
    cdef array.array ba = array.array("d", bytes(8 * c_count))
    cdef array.array ua = array.array("d", bytes(8 * c_count * n_features))
    cdef array.array uba = array.array("d", bytes(8 * c_count))
    cdef array.array sa = array.array("d", bytes(8 * c_count))
    cdef int[::1] ip = pa
    cdef int[::1] ix = ia
    cdef double[::1] vv = va
    cdef int[::1] yv = yarr
    cdef int[::1] ov = oarr
    cdef double[::1] w = wa
    cdef double[::1] b = ba
    cdef double[::1] u = ua
    cdef double[::1] ub = uba
    cdef double[::1] scores = sa
    cdef double cnt = 1.0
    cdef int step, doc, lo, hi, c, p, pred, yc, base, ybase, pbase, f, i
    cdef double s, v
    for step in range(ov.shape[0]):
        doc = ov[step]
        lo = ip[doc]
        hi = ip[doc + 1]
        for c in range(c_count):
            s = b[c]
            base = c * n_features
            for p in range(lo, hi):
                s += w[base + ix[p]] * vv[p]
            scores[c] = s
        pred = 0
        for c in range(1, c_count):
            if scores[c] > scores[pred]:
                pred = c
        yc = yv[doc]
        if pred != yc:
            ybase = yc * n_features
            pbase = pred * n_features
            for p in range(lo, hi):
                f = ix[p]
                v = vv[p]
                w[ybase + f] += v
                u[ybase + f] += cnt * v
                w[pbase + f] -= v
                u[pbase + f] -= cnt * v
            b[yc] += 1.0
            ub[yc] += cnt
            b[pred] -= 1.0
            ub[pred] -= cnt
        cnt += 1.0
    cdef array.array awa = array.array("d", bytes(8 * c_count * n_features))
    cdef array.array aba = array.array("d", bytes(8 * c_count))
    cdef double[::1] avg_w = awa
    cdef double[::1] avg_b = aba
    for i in range(c_count * n_features):
        avg_w[i] = w[i] - u[i] / cnt
    for c in range(c_count):
        avg_b[c] = b[c] - ub[c] / cnt
    return list(awa), list(aba)
