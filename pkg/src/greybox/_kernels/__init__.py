"""Numeric kernels with a compiled fast path and a pure-Python fallback.

At import time the Cython extension is preferred; if it is missing (source
install without a compiler) the pure backend takes over transparently.
Set ``GREYBOX_PURE=1`` to force the fallback.  Both backends are written
to produce bit-identical doubles, so which one is active never changes
any result, only how long it takes.
"""

from __future__ import annotations

import os

if os.environ.get("GREYBOX_PURE") == "1":
    from . import _pure as _impl
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]
    except ImportError:
        from . import _pure as _impl  # type: ignore[no-redef]

BACKEND = _impl.BACKEND_NAME

ridge_fit = _impl.ridge_fit
logreg_epochs = _impl.logreg_epochs
perceptron_epochs = _impl.perceptron_epochs


def fit_weighted_ridge(rows, y, w, lam):
    """Fit ``y ~ intercept + beta . row`` with per-sample weights.

    ``rows`` is a sequence of equal-length feature sequences.  Returns
    ``(intercept, betas)``.  The L2 penalty ``lam`` applies to the betas
    only.
    """
    n = len(rows)
    if n == 0:
        raise ValueError("no samples")
    d = len(rows[0])
    flat = [0.0] * (n * d)
    pos = 0
    for row in rows:
        for v in row:
            flat[pos] = float(v)
            pos += 1
    coefs = ridge_fit(flat, [float(v) for v in y], [float(v) for v in w],
                      n, d, float(lam))
    return coefs[0], coefs[1:]
