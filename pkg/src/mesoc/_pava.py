"""Pool-adjacent-violators kernel for nonincreasing isotonic regression.

The merging loop is the only hot path in the package; it is JIT-compiled
with numba when available and falls back to the same pure-Python loop
otherwise. Block values are maintained as running means (weighted pooling),
so every output block equals the arithmetic mean of its inputs.
"""

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None


def _pava_nonincreasing_impl(z):
    n = z.shape[0]
    means = np.empty(n)
    counts = np.empty(n, dtype=np.int64)
    out = np.empty(n)
    m = 0
    for i in range(n):
        means[m] = z[i]
        counts[m] = 1
        m += 1
        # adjacent violation for a nonincreasing fit: left mean < right mean
        while m >= 2 and means[m - 2] < means[m - 1]:
            c = counts[m - 2] + counts[m - 1]
            means[m - 2] = (means[m - 2] * counts[m - 2] + means[m - 1] * counts[m - 1]) / c
            counts[m - 2] = c
            m -= 1
    k = 0
    for b in range(m):
        v = means[b]
        for _ in range(counts[b]):
            out[k] = v
            k += 1
    return out


if njit is not None:
    pava_nonincreasing_kernel = njit(cache=True)(_pava_nonincreasing_impl)
else:  # pragma: no cover
    pava_nonincreasing_kernel = _pava_nonincreasing_impl


def warmup():
    """Trigger JIT compilation so later calls are steady-state."""
    pava_nonincreasing_kernel(np.array([0.0, 1.0]))
