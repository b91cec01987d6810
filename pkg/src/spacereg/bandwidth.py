"""Bandwidth and span selection by k-fold cross-validation.

The default candidate grid is logarithmic from
``max(0.0001 * |domain|, 1.1 * delta_max)`` up to ``0.9 * |domain|`` (the
grid bounds scale with the domain length; spans for LOESS are dimensionless
and use the fixed grid 0.0001 .. 0.9).  Held-out points whose prediction is
invalid are scored against the training-mean response, so candidates too
small to cover the design pay for it instead of silently dropping points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import streams
from .design import OrderedSample, RawSample, prepare_sample
from .estimators import fit_loess1, fit_nw, fit_ulc, fit_ull
from .exceptions import (
    DegenerateGridError,
    InvalidArgumentError,
    NoSolutionError,
    NoValidBandwidthError,
)
from .kernels import Kernel

__all__ = [
    "CvPlan",
    "log_grid",
    "default_h_grid",
    "default_span_grid",
    "make_folds",
    "cross_validate",
    "rate_heuristic_h",
]


def log_grid(lo: float, hi: float, count: int) -> np.ndarray:
    """``count`` geometrically spaced values from lo to hi, endpoints exact."""
    if not (0.0 < lo < hi):
        raise InvalidArgumentError(f"need 0 < lo < hi, got lo={lo}, hi={hi}")
    if count < 2:
        raise InvalidArgumentError(f"need at least 2 grid values, got {count}")
    grid = np.geomspace(lo, hi, count)
    grid[0] = lo
    grid[-1] = hi
    return grid


def default_h_grid(sample: OrderedSample, count: int = 20) -> np.ndarray:
    """Default bandwidth candidates for the kernel estimators."""
    length = sample.domain[1] - sample.domain[0]
    lo = max(1e-4 * length, 1.1 * sample.delta_max)
    hi = 0.9 * length
    if lo >= hi:
        raise DegenerateGridError(
            f"degenerate bandwidth grid: lo={lo} >= hi={hi} (max spacing {sample.delta_max})"
        )
    return log_grid(lo, hi, count)


def default_span_grid(count: int = 20) -> np.ndarray:
    """Default span candidates for LOESS-1 (dimensionless fractions)."""
    return log_grid(1e-4, 0.9, count)


def make_folds(n: int, folds: int, rng: np.random.Generator) -> np.ndarray:
    """Random fold index per observation: a seeded permutation cut into
    contiguous blocks (block sizes differ by at most one)."""
    if folds < 2:
        raise InvalidArgumentError(f"need at least 2 folds, got {folds}")
    if n < folds:
        raise InvalidArgumentError(f"need at least one observation per fold ({n} < {folds})")
    perm = rng.permutation(n)
    sizes = np.full(folds, n // folds)
    sizes[: n % folds] += 1
    assign = np.empty(n, dtype=np.int64)
    start = 0
    for f, s in enumerate(sizes):
        assign[perm[start : start + s]] = f
        start += s
    return assign


@dataclass
class CvPlan:
    """Candidate grid plus fold layout for one cross-validation run."""

    grid: np.ndarray
    folds: int = 10
    fold_assignment: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        grid = np.atleast_1d(np.asarray(self.grid, dtype=float))
        if grid.size < 1 or np.any(np.diff(grid) <= 0) or not np.all(grid > 0):
            raise InvalidArgumentError("candidate grid must be strictly increasing and positive")
        self.grid = grid


def _fit_for_cv(train: OrderedSample, kernel: Kernel, kind: str, value: float,
                points: np.ndarray, spacing: str):
    if kind == "ull":
        return fit_ull(train, kernel, value, points, spacing=spacing)
    if kind == "ulc":
        return fit_ulc(train, kernel, value, points, spacing=spacing)
    if kind == "nw":
        return fit_nw(train, kernel, value, points)
    if kind == "loess1":
        return fit_loess1(train, kernel, points, span=value)
    raise InvalidArgumentError(f"unknown estimator kind {kind!r}")


def cross_validate(sample: OrderedSample, kernel: Kernel, estimator_kind: str,
                   plan: CvPlan, seed: int = 0, spacing: str = "voronoi"):
    """k-fold CV over the candidate grid; returns (best_value, scores).

    For every candidate and fold, the estimator is fitted on the fold's
    complement and scored at the held-out design points against their noisy
    responses.  Invalid predictions (empty window or singular local design)
    incur the squared error of the training-mean response, so candidates
    too small to cover the design pay instead of silently dropping points.
    Candidates that cannot be fitted at all (they violate the estimator's
    bandwidth precondition, e.g. exceed half the domain) score +inf and are
    never selected.  Ties in the mean squared error break toward the
    smaller candidate.
    """
    n = sample.n
    if plan.fold_assignment is not None:
        assign = np.asarray(plan.fold_assignment)
        if assign.shape != (n,):
            raise InvalidArgumentError("fold assignment length must match the sample")
    else:
        assign = make_folds(n, plan.folds, streams.generator(seed, 0, streams.FOLDS_FULL))
    folds = int(assign.max()) + 1

    # Precompute per-fold training samples and sorted held-out points.
    fold_data = []
    for f in range(folds):
        held = assign == f
        z_out, x_out = sample.z[held], sample.x[held]
        z_tr, x_tr = sample.z[~held], sample.x[~held]
        train = None
        if z_tr.size >= 2 and np.unique(z_tr).size >= 2:
            train = prepare_sample(RawSample(z_tr, x_tr, sample.domain))
        x_bar = float(np.mean(train.x)) if train is not None else float(np.mean(x_tr))
        fold_data.append((train, z_out, x_out, x_bar))

    scores = np.empty(plan.grid.size)
    any_valid = np.zeros(plan.grid.size, dtype=bool)
    for ci, cand in enumerate(plan.grid):
        sse = 0.0
        unfittable = False
        for train, z_out, x_out, x_bar in fold_data:
            curve = None
            if train is not None:
                try:
                    curve = _fit_for_cv(train, kernel, estimator_kind, cand, z_out, spacing)
                except InvalidArgumentError:
                    unfittable = True
                    break
            if curve is None:
                sse += float(np.sum((x_bar - x_out) ** 2))
                continue
            pred = np.where(curve.valid, curve.values, x_bar)
            any_valid[ci] |= bool(np.any(curve.valid))
            sse += float(np.sum((pred - x_out) ** 2))
        scores[ci] = np.inf if unfittable else sse / n
    if not np.any(any_valid & np.isfinite(scores)):
        raise NoValidBandwidthError(
            f"no candidate produced a single valid prediction (grid {plan.grid})"
        )
    best = float(plan.grid[int(np.argmin(scores))])
    return best, scores


def rate_heuristic_h(modulus, expected_delta: float, h_max: float = 1.0) -> float:
    """Bandwidth balancing the smoothness and noise error terms.

    Solves ``h * d(h) = sqrt(expected_delta)`` for an increasing continuity
    modulus bound ``d`` with ``d(0+) = 0``, by bisection to 1e-10.
    """
    if not expected_delta > 0:
        raise InvalidArgumentError(f"expected_delta must be positive, got {expected_delta}")
    if not h_max > 0:
        raise InvalidArgumentError(f"h_max must be positive, got {h_max}")
    target = math.sqrt(expected_delta)

    def g(h: float) -> float:
        return h * float(modulus(h)) - target

    lo, hi = 0.0, float(h_max)
    if g(hi) < 0.0:
        raise NoSolutionError(
            f"h * d(h) never reaches sqrt(expected_delta)={target} on (0, {h_max}]"
        )
    while hi - lo > 1e-10:
        mid = 0.5 * (lo + hi)
        if g(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
