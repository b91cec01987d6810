"""Spacing-weighted kernel regression estimators.

The two headline estimators solve, at every evaluation point t, the
weighted least-squares problem

    min_{a,b} sum_i (X_i - a - b (t - z_i))^2 K_h(t - z_i) D_i      (degree 1)
    min_{a}   sum_i (X_i - a)^2 K_h(t - z_i) D_i                    (degree 0)

where the weights carry the design spacings D_i (plain left gaps or Voronoi
cells).  The spacing factors make the fits insensitive to how the design
points are distributed inside the window, which is what buys consistency
under arbitrary dependence: the only requirement on the design is that its
maximum gap shrinks.  The Nadaraya-Watson comparator drops the spacing
factors; the LOESS-1 comparator is a clean-room degree-1 local regression
with tricube weights and a nearest-neighbour span bandwidth (no
robustifying iterations).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _fast
from .design import OrderedSample
from .exceptions import InvalidArgumentError, SingularWindowError
from .kernels import Kernel, moments

__all__ = [
    "LocalWeights",
    "FittedCurve",
    "local_weights",
    "beta_weights",
    "fit_ull",
    "fit_ulc",
    "fit_nw",
    "fit_loess1",
    "theoretical_interior_bias",
    "theoretical_variance_ratio",
]

ESTIMATOR_KINDS = ("ull", "ulc", "nw", "loess1")


@dataclass(frozen=True)
class LocalWeights:
    """Windowed empirical moments at one evaluation point.

    ``w[j] = sum_i (t - z_i)^j K_h(t - z_i) D_i`` over the window
    ``|t - z_i| < h``; ``denom = w[0] w[2] - w[1]^2`` is the local design
    denominator, non-negative by Cauchy-Bunyakovsky.
    """

    t: float
    w: np.ndarray
    denom: float


@dataclass(frozen=True)
class FittedCurve:
    """Estimator values on a grid with per-point validity flags."""

    grid: np.ndarray
    values: np.ndarray
    valid: np.ndarray
    h: float
    estimator_kind: str
    spacing_kind: str | None = None

    @property
    def n_invalid(self) -> int:
        return int(self.valid.size - np.count_nonzero(self.valid))

    def to_csv(self, path) -> None:
        """Write columns ``t,estimate,valid`` (valid as 0/1)."""
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("t,estimate,valid\n")
            for t, v, ok in zip(self.grid, self.values, self.valid):
                fh.write(f"{float(t)!r},{float(v)!r},{1 if ok else 0}\n")


def _denom_floor_coef(kernel: Kernel) -> float:
    # Window declared singular when denom < 1e-12 * h^2 * max(1, kappa2).
    return 1e-12 * max(1.0, moments(kernel).kappa[2])


def _check_h(h: float, domain: tuple[float, float]) -> float:
    h = float(h)
    half = (domain[1] - domain[0]) / 2.0
    if not 0.0 < h < half:
        raise InvalidArgumentError(
            f"bandwidth must lie in (0, {half}) for domain {domain}, got {h}"
        )
    return h


def _check_grid(grid, domain: tuple[float, float]) -> np.ndarray:
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    if grid.ndim != 1 or grid.size == 0:
        raise InvalidArgumentError("evaluation grid must be a non-empty 1-d array")
    if np.any(np.diff(grid) < 0):
        raise InvalidArgumentError("evaluation grid must be non-decreasing")
    if grid[0] < domain[0] or grid[-1] > domain[1]:
        raise InvalidArgumentError("evaluation grid must lie within the domain")
    return grid


def local_weights(sample: OrderedSample, kernel: Kernel, h: float, t: float,
                  spacing: str = "plain") -> LocalWeights:
    """Windowed moments w_0..w_3 at t (all-zero for an empty window)."""
    if not h > 0:
        raise InvalidArgumentError(f"bandwidth must be positive, got {h}")
    pw = sample.point_spacings(spacing)
    w = _fast.local_moment_sums(sample.z, pw, float(t), float(h), kernel.code)
    return LocalWeights(t=float(t), w=w, denom=float(w[0] * w[2] - w[1] ** 2))


def beta_weights(sample: OrderedSample, kernel: Kernel, h: float, t: float,
                 spacing: str = "plain"):
    """Local-linear intercept weights over the window at t.

    Returns ``(indices, beta)`` where ``beta[k]`` multiplies
    ``X[indices[k]] * K_h(t - z[indices[k]]) * D[indices[k]]`` in the
    estimator.  Raises :class:`SingularWindowError` when the local design
    denominator is below the floor.
    """
    lw = local_weights(sample, kernel, h, t, spacing)
    floor = _denom_floor_coef(kernel) * h * h
    if lw.denom < floor:
        raise SingularWindowError(
            f"degenerate window at t={t}: denom={lw.denom} < floor={floor}"
        )
    idx = np.nonzero(np.abs(t - sample.z) < h)[0]
    d = t - sample.z[idx]
    beta = (lw.w[2] - d * lw.w[1]) / lw.denom
    return idx, beta


def _as_curve(grid, values, valid, h, kind, spacing=None) -> FittedCurve:
    return FittedCurve(grid=grid, values=values, valid=valid, h=float(h),
                       estimator_kind=kind, spacing_kind=spacing)


def fit_ull(sample: OrderedSample, kernel: Kernel, h: float, grid,
            spacing: str = "voronoi", indicator: bool = False) -> FittedCurve:
    """Universal local linear fit on a grid.

    Solves the degree-1 weighted least squares with kernel-times-spacing
    weights at every grid point and returns the intercept.  ``spacing``
    selects plain or Voronoi spacing factors (Voronoi is the practical
    default; plain is the theoretical form).  With ``indicator=True`` the
    whole curve is zeroed and flagged invalid when the maximum design gap
    exceeds ``c_star * h``, reproducing the gated theoretical estimator.
    """
    h = _check_h(h, sample.domain)
    grid = _check_grid(grid, sample.domain)
    pw = sample.point_spacings(spacing)
    if indicator and sample.delta_max > moments(kernel).c_star * h:
        values = np.zeros(grid.size)
        valid = np.zeros(grid.size, dtype=bool)
        return _as_curve(grid, values, valid, h, "ull", spacing)
    values, valid = _fast.linear_fit(sample.z, sample.x, pw, grid, h,
                                     kernel.code, _denom_floor_coef(kernel))
    return _as_curve(grid, values, valid, h, "ull", spacing)


def fit_ulc(sample: OrderedSample, kernel: Kernel, h: float, grid,
            spacing: str = "voronoi") -> FittedCurve:
    """Universal local constant fit: spacing-weighted kernel average."""
    h = _check_h(h, sample.domain)
    grid = _check_grid(grid, sample.domain)
    pw = sample.point_spacings(spacing)
    values, valid = _fast.constant_fit(sample.z, sample.x, pw, grid, h, kernel.code)
    return _as_curve(grid, values, valid, h, "ulc", spacing)


def fit_nw(sample: OrderedSample, kernel: Kernel, h: float, grid) -> FittedCurve:
    """Nadaraya-Watson fit (kernel average without spacing factors)."""
    h = _check_h(h, sample.domain)
    grid = _check_grid(grid, sample.domain)
    ones = np.ones(sample.n)
    values, valid = _fast.constant_fit(sample.z, sample.x, ones, grid, h, kernel.code)
    return _as_curve(grid, values, valid, h, "nw")


def fit_loess1(sample: OrderedSample, kernel: Kernel, grid, span: float | None = None,
               h: float | None = None) -> FittedCurve:
    """Degree-1 LOESS with a span (nearest-neighbour) or fixed bandwidth.

    Exactly one of ``span`` (fraction of the sample, in (0, 1]) and ``h``
    (fixed bandwidth, > 0) must be given.  With a span, the bandwidth at t
    is the distance to the ``ceil(span * n)``-th nearest design point.
    """
    grid = _check_grid(grid, sample.domain)
    if (span is None) == (h is None):
        raise InvalidArgumentError("give exactly one of span= and h=")
    if span is not None:
        if not 0.0 < span <= 1.0:
            raise InvalidArgumentError(f"span must lie in (0, 1], got {span}")
        r = int(np.ceil(span * sample.n))
        fixed_h = 0.0
        bw = float(span)
    else:
        if not h > 0:
            raise InvalidArgumentError(f"bandwidth must be positive, got {h}")
        r = 0
        fixed_h = float(h)
        bw = float(h)
    values, valid = _fast.loess1_fit(sample.z, sample.x, grid, r, fixed_h, kernel.code)
    return _as_curve(grid, values, valid, bw, "loess1")


def theoretical_interior_bias(second_derivative: float, kernel: Kernel, h: float) -> float:
    """Leading interior bias f''(t) * kappa2 * h^2 / 2 (oracle helper)."""
    if not h > 0:
        raise InvalidArgumentError(f"bandwidth must be positive, got {h}")
    return 0.5 * second_derivative * moments(kernel).kappa[2] * h * h


_VARIANCE_RATIOS = {
    ("ulc-plain", "nw"): 2.0,
    ("ulc-voronoi", "nw"): 1.5,
}


def theoretical_variance_ratio(kind_a: str, kind_b: str) -> float:
    """Asymptotic interior variance ratio for supported estimator pairs.

    Under an i.i.d. design with positive density, the plain-spacing local
    constant estimator has twice the Nadaraya-Watson variance and the
    Voronoi-spacing variant 1.5 times it.  Identical kinds give 1.
    """
    if kind_a == kind_b:
        return 1.0
    try:
        return _VARIANCE_RATIOS[(kind_a, kind_b)]
    except KeyError:
        raise InvalidArgumentError(
            f"no tabulated variance ratio for pair ({kind_a!r}, {kind_b!r})"
        ) from None
