"""Rounding to the (1+eps) power grid.

All radii and rounded edge weights in this package live on grids
{(1+eps)^j : j >= 0} for some eps > 0.  Everything goes through the two
functions below so that equal values are equal bit for bit everywhere.
"""

import math

import numpy as np

INF = math.inf


def pow_value(base: float, j: int) -> float:
    # single authoritative way to evaluate base**j
    return float(base) ** float(j)


def pow_index(x: float, base: float) -> int:
    """Smallest integer j >= 0 with base**j >= x.  Requires x > 0 finite."""
    if x <= 0 or not math.isfinite(x):
        raise ValueError(f"pow_index needs a positive finite value, got {x!r}")
    if base <= 1.0:
        raise ValueError(f"base must exceed 1, got {base!r}")
    if x <= 1.0:
        return 0
    j = math.ceil(math.log(x) / math.log(base))
    if j < 0:
        j = 0
    # float log can be off by an ulp in either direction; fix up exactly
    while j > 0 and pow_value(base, j - 1) >= x:
        j -= 1
    while pow_value(base, j) < x:
        j += 1
    return j


def round_up_pow(x: float, eps: float) -> float:
    """Round x up to the nearest power (1+eps)**j with integer j >= 0.

    x = 0 maps to 0, +inf maps to +inf.  Idempotent on its own outputs.
    """
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps!r}")
    if x == 0:
        return 0.0
    if x == INF:
        return INF
    return pow_value(1.0 + eps, pow_index(x, 1.0 + eps))


def _values_for_indices(base: float, j: np.ndarray) -> np.ndarray:
    # evaluate base**j elementwise through pow_value so the result is bit
    # identical to the scalar path (np.power can differ by an ulp)
    uniq, inv = np.unique(j, return_inverse=True)
    vals = np.asarray([pow_value(base, int(jj)) for jj in uniq], dtype=np.float64)
    return vals[inv]


def round_up_pow_array(w: np.ndarray, base: float) -> np.ndarray:
    """Vectorised round_up_pow for positive finite arrays, same grid.

    Agrees bit for bit with round_up_pow(x, base - 1) elementwise.
    """
    w = np.asarray(w, dtype=np.float64)
    if w.size == 0:
        return w.copy()
    lb = math.log(base)
    j = np.ceil(np.log(np.maximum(w, 1.0)) / lb).astype(np.int64)
    j = np.maximum(j, 0)
    while True:
        vals = _values_for_indices(base, j)
        prev = np.where(j > 0, _values_for_indices(base, np.maximum(j - 1, 0)), -1.0)
        down = (j > 0) & (prev >= w)
        up = vals < w
        if not bool(np.any(down) or np.any(up)):
            return vals
        j = j - down.astype(np.int64) + up.astype(np.int64)


def is_on_grid(x: float, base: float) -> bool:
    """True if x is exactly base**j for some integer j >= 0 (or 0 / inf)."""
    if x == 0 or x == INF:
        return True
    if x < 1.0:
        return False
    j = round(math.log(x) / math.log(base))
    for jj in (j - 1, j, j + 1):
        if jj >= 0 and pow_value(base, jj) == x:
            return True
    return False
