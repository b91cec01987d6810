"""Mean and covariance estimation for dense functional data.

Each of N independent trajectory copies is smoothed on its own design with
the local linear estimator, then the fitted curves are averaged pointwise.
Averages run over the copies whose fit is valid at the point (the count is
tracked), which coincides with the plain all-copy average whenever every
copy covers the point.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .design import RawSample, prepare_sample
from .estimators import fit_ulc, fit_ull
from .exceptions import InvalidArgumentError
from .kernels import Kernel

__all__ = [
    "TrajectoryBatch",
    "MeanCurve",
    "mean_function",
    "second_moment_surface",
    "covariance_surface",
]


@dataclass(frozen=True)
class TrajectoryBatch:
    """N independent noisy trajectories sharing one domain."""

    copies: tuple[RawSample, ...]
    domain: tuple[float, float]

    def __post_init__(self):
        if len(self.copies) < 1:
            raise InvalidArgumentError("batch needs at least one trajectory copy")
        for c in self.copies:
            if c.domain != self.domain:
                raise InvalidArgumentError("all copies must share the batch domain")
        object.__setattr__(self, "copies", tuple(self.copies))

    @property
    def n_copies(self) -> int:
        return len(self.copies)


@dataclass(frozen=True)
class MeanCurve:
    """Pointwise average of per-copy fits with contribution counts."""

    grid: np.ndarray
    values: np.ndarray
    counts: np.ndarray
    h: float

    @property
    def valid(self) -> np.ndarray:
        return self.counts > 0


def _fit_batch(batch: TrajectoryBatch, kernel: Kernel, h: float, grid,
               estimator_kind: str, spacing: str):
    """Fit every copy on the grid; returns (values NxM, valid NxM, grid)."""
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    fits = np.empty((batch.n_copies, grid.size))
    valid = np.zeros((batch.n_copies, grid.size), dtype=bool)
    for j, copy in enumerate(batch.copies):
        sample = prepare_sample(copy)
        if estimator_kind == "ull":
            curve = fit_ull(sample, kernel, h, grid, spacing=spacing)
        elif estimator_kind == "ulc":
            curve = fit_ulc(sample, kernel, h, grid, spacing=spacing)
        else:
            raise InvalidArgumentError(
                f"mean estimation supports 'ull' and 'ulc', got {estimator_kind!r}"
            )
        fits[j] = np.where(curve.valid, curve.values, 0.0)
        valid[j] = curve.valid
    return fits, valid, grid


def mean_function(batch: TrajectoryBatch, kernel: Kernel, h: float, grid,
                  estimator_kind: str = "ull", spacing: str = "voronoi") -> MeanCurve:
    """Fit each copy, then average pointwise over the valid copies."""
    fits, valid, grid = _fit_batch(batch, kernel, h, grid, estimator_kind, spacing)
    counts = valid.sum(axis=0)
    sums = fits.sum(axis=0)
    values = np.divide(sums, counts, out=np.full(grid.size, np.nan), where=counts > 0)
    return MeanCurve(grid=grid, values=values, counts=counts, h=float(h))


def second_moment_surface(batch: TrajectoryBatch, kernel: Kernel, h: float,
                          grid1, grid2=None, estimator_kind: str = "ull",
                          spacing: str = "voronoi") -> np.ndarray:
    """Average of fit_j(t1) * fit_j(t2) over copies valid at both points."""
    grid1 = np.atleast_1d(np.asarray(grid1, dtype=float))
    same = grid2 is None or np.array_equal(grid1, np.atleast_1d(np.asarray(grid2, dtype=float)))
    if same:
        f1, v1, _ = _fit_batch(batch, kernel, h, grid1, estimator_kind, spacing)
        f2, v2 = f1, v1
    else:
        joint = np.concatenate([grid1, np.atleast_1d(np.asarray(grid2, dtype=float))])
        order = np.argsort(joint, kind="stable")
        fits, valid, _ = _fit_batch(batch, kernel, h, joint[order], estimator_kind, spacing)
        inv = np.argsort(order, kind="stable")
        fits, valid = fits[:, inv], valid[:, inv]
        f1, v1 = fits[:, : grid1.size], valid[:, : grid1.size]
        f2, v2 = fits[:, grid1.size :], valid[:, grid1.size :]
    return _pair_average(f1, v1, f2, v2)


def _pair_average(f1, v1, f2, v2):
    counts = (v1.astype(float).T @ v2.astype(float))
    sums = (np.where(v1, f1, 0.0).T @ np.where(v2, f2, 0.0))
    return np.divide(sums, counts, out=np.full(sums.shape, np.nan), where=counts > 0)


def covariance_surface(batch: TrajectoryBatch, kernel: Kernel, h: float, grid,
                       estimator_kind: str = "ull", spacing: str = "voronoi") -> np.ndarray:
    """Second-moment surface minus the outer product of the mean curve.

    Uses a single set of per-copy fits for both terms, so the result is
    symmetric by construction and exactly zero for N = 1.  Negative
    round-off on the diagonal is clamped to zero (with a warning when any
    clamping happened).
    """
    fits, valid, grid = _fit_batch(batch, kernel, h, grid, estimator_kind, spacing)
    second = _pair_average(fits, valid, fits, valid)
    counts = valid.sum(axis=0)
    sums = fits.sum(axis=0)
    mean = np.divide(sums, counts, out=np.full(grid.size, np.nan), where=counts > 0)
    cov = second - np.outer(mean, mean)
    diag = np.einsum("ii->i", cov)
    negative = diag < 0.0
    n_clamped = int(np.count_nonzero(negative))
    if n_clamped:
        warnings.warn(
            f"clamped {n_clamped} negative diagonal covariance entries to zero",
            RuntimeWarning,
            stacklevel=2,
        )
        diag[negative] = 0.0
    return cov
