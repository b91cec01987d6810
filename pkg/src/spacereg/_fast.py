"""Compiled inner loops for the pointwise fits.

All arrays must be float64 and the design ``z`` sorted ascending.  Kernels
are selected by the integer codes defined in :mod:`spacereg.kernels`.  The
cores release the GIL so replications can run on worker threads.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True, inline="always")
def _kernel_value(code, u):
    a = abs(u)
    if a >= 1.0:
        return 0.0
    if code == 0:  # tricube
        b = 1.0 - a * a * a
        return (70.0 / 81.0) * b * b * b
    if code == 1:  # epanechnikov
        return 0.75 * (1.0 - u * u)
    return 1.0 - a  # triangular


@njit(cache=True, nogil=True)
def linear_fit(z, x, pw, t_arr, h, code, floor_coef):
    """Local linear fit with weights K_h(t - z_i) * pw_i at each t.

    Returns (values, valid).  A point is invalid when its window is empty
    or the weighted design denominator falls below floor_coef * h**2.
    """
    m = t_arr.size
    values = np.full(m, np.nan)
    valid = np.zeros(m, np.bool_)
    floor = floor_coef * h * h
    for j in range(m):
        t = t_arr[j]
        lo = np.searchsorted(z, t - h, side="left")
        hi = np.searchsorted(z, t + h, side="right")
        if hi <= lo:
            continue
        s0 = 0.0
        s1 = 0.0
        s2 = 0.0
        b0 = 0.0
        b1 = 0.0
        for i in range(lo, hi):
            d = t - z[i]
            k = _kernel_value(code, d / h)
            if k <= 0.0:
                continue
            w = (k / h) * pw[i]
            s0 += w
            s1 += d * w
            s2 += d * d * w
            b0 += w * x[i]
            b1 += d * w * x[i]
        den = s0 * s2 - s1 * s1
        if s0 > 0.0 and den >= floor:
            values[j] = (s2 * b0 - s1 * b1) / den
            valid[j] = True
    return values, valid


@njit(cache=True, nogil=True)
def constant_fit(z, x, pw, t_arr, h, code):
    """Local constant fit: ratio of K_h * pw weighted response sums."""
    m = t_arr.size
    values = np.full(m, np.nan)
    valid = np.zeros(m, np.bool_)
    for j in range(m):
        t = t_arr[j]
        lo = np.searchsorted(z, t - h, side="left")
        hi = np.searchsorted(z, t + h, side="right")
        if hi <= lo:
            continue
        num = 0.0
        den = 0.0
        for i in range(lo, hi):
            d = t - z[i]
            k = _kernel_value(code, d / h)
            if k <= 0.0:
                continue
            w = (k / h) * pw[i]
            den += w
            num += w * x[i]
        if den > 0.0:
            values[j] = num / den
            valid[j] = True
    return values, valid


@njit(cache=True, nogil=True)
def loess1_fit(z, x, t_arr, r, fixed_h, code):
    """Degree-1 local regression with nearest-neighbour or fixed bandwidth.

    With r > 0 the bandwidth at t is the distance to the r-th nearest
    design point; otherwise fixed_h is used.  Weights are K(d / h_t) with
    no spacing factors.  Points with fewer than two positively weighted
    neighbours, or a degenerate local design, are invalid.
    """
    n = z.size
    m = t_arr.size
    values = np.full(m, np.nan)
    valid = np.zeros(m, np.bool_)
    for j in range(m):
        t = t_arr[j]
        if r > 0:
            pos = np.searchsorted(z, t, side="left")
            left = pos - 1
            right = pos
            h_t = 0.0
            for _ in range(r):
                dl = t - z[left] if left >= 0 else np.inf
                dr = z[right] - t if right < n else np.inf
                if dl <= dr:
                    h_t = dl
                    left -= 1
                else:
                    h_t = dr
                    right += 1
        else:
            h_t = fixed_h
        if not h_t > 0.0:
            continue
        lo = np.searchsorted(z, t - h_t, side="left")
        hi = np.searchsorted(z, t + h_t, side="right")
        s0 = 0.0
        s1 = 0.0
        s2 = 0.0
        b0 = 0.0
        b1 = 0.0
        cnt = 0
        for i in range(lo, hi):
            d = t - z[i]
            k = _kernel_value(code, d / h_t)
            if k <= 0.0:
                continue
            cnt += 1
            s0 += k
            s1 += d * k
            s2 += d * d * k
            b0 += k * x[i]
            b1 += d * k * x[i]
        den = s0 * s2 - s1 * s1
        if cnt >= 2 and den > 1e-10 * h_t * h_t * s0 * s0:
            values[j] = (s2 * b0 - s1 * b1) / den
            valid[j] = True
    return values, valid


@njit(cache=True, nogil=True)
def local_moment_sums(z, pw, t, h, code):
    """Windowed moment sums w_j(t) = sum (t - z_i)^j K_h(t - z_i) pw_i, j = 0..3."""
    lo = np.searchsorted(z, t - h, side="left")
    hi = np.searchsorted(z, t + h, side="right")
    w = np.zeros(4)
    for i in range(lo, hi):
        d = t - z[i]
        k = _kernel_value(code, d / h)
        if k <= 0.0:
            continue
        base = (k / h) * pw[i]
        w[0] += base
        w[1] += d * base
        w[2] += d * d * base
        w[3] += d * d * d * base
    return w
