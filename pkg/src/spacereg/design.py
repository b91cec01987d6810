"""Ordered designs and their spacings.

Raw ``(z, x)`` observations are sorted by design value, tied design points
are merged (their responses averaged), and the spacings between consecutive
order statistics are computed with the declared domain endpoints acting as
the outermost "virtual" points.  Every estimator in the package consumes
the resulting :class:`OrderedSample`.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .exceptions import InvalidArgumentError

__all__ = ["RawSample", "OrderedSample", "prepare_sample", "max_spacing"]


@dataclass(frozen=True)
class RawSample:
    """Unordered observations on a finite interval.

    ``z`` are the design points, ``x`` the paired responses and ``domain``
    the closed interval the regression function lives on.  All design
    points must lie inside the domain and there must be at least two
    observations.
    """

    z: np.ndarray
    x: np.ndarray
    domain: tuple[float, float]

    def __post_init__(self):
        z = np.atleast_1d(np.asarray(self.z, dtype=float))
        x = np.atleast_1d(np.asarray(self.x, dtype=float))
        a, b = (float(self.domain[0]), float(self.domain[1]))
        if not (np.isfinite(a) and np.isfinite(b) and a < b):
            raise InvalidArgumentError(f"domain must be a finite interval, got {self.domain}")
        if z.ndim != 1 or z.shape != x.shape:
            raise InvalidArgumentError("z and x must be 1-d arrays of equal length")
        if z.size < 2:
            raise InvalidArgumentError("need at least 2 observations")
        if not np.all(np.isfinite(z)) or not np.all(np.isfinite(x)):
            raise InvalidArgumentError("observations must be finite")
        if z.min() < a or z.max() > b:
            raise InvalidArgumentError("design points must lie within the domain")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "domain", (a, b))


@dataclass(frozen=True)
class OrderedSample:
    """Sorted, deduplicated design with concomitant responses and spacings.

    Attributes
    ----------
    z : ndarray, shape (n,)
        Strictly increasing design points (after duplicate merging).
    x : ndarray, shape (n,)
        Responses reordered with the design; tied observations averaged.
    delta : ndarray, shape (n + 1,)
        Spacings between consecutive order statistics with the domain
        endpoints prepended/appended, so they sum to the domain length.
    delta_voronoi : ndarray, shape (n,)
        Voronoi cell lengths: interior cells are half-sums of the two
        adjacent spacings, boundary cells absorb the full outer gap.
    delta_max : float
        Largest spacing (including the two boundary gaps).
    domain : (float, float)
    deduplicated : bool
        False only when duplicates were deliberately kept.
    """

    z: np.ndarray
    x: np.ndarray
    delta: np.ndarray
    delta_voronoi: np.ndarray
    delta_max: float
    domain: tuple[float, float]
    deduplicated: bool = True

    @property
    def n(self) -> int:
        return self.z.size

    def point_spacings(self, kind: str) -> np.ndarray:
        """Per-point weights: left-gap spacings ("plain") or Voronoi cells."""
        if kind == "plain":
            return self.delta[:-1]
        if kind == "voronoi":
            return self.delta_voronoi
        raise InvalidArgumentError(f"spacing kind must be 'plain' or 'voronoi', got {kind!r}")

    def with_responses(self, x_new) -> "OrderedSample":
        """Same design, new responses (given in design order)."""
        x_new = np.asarray(x_new, dtype=float)
        if x_new.shape != self.z.shape:
            raise InvalidArgumentError("replacement responses must match the design size")
        return replace(self, x=x_new)

    def as_raw(self) -> RawSample:
        return RawSample(self.z.copy(), self.x.copy(), self.domain)


def _spacings(z: np.ndarray, domain: tuple[float, float]):
    a, b = domain
    delta = np.diff(z, prepend=a, append=b)
    n = z.size
    voronoi = np.empty(n)
    voronoi[0] = delta[0] + delta[1] / 2.0
    voronoi[-1] = delta[n - 1] / 2.0 + delta[n]
    if n > 2:
        voronoi[1:-1] = (delta[1 : n - 1] + delta[2:n]) / 2.0
    return delta, voronoi


def prepare_sample(raw: RawSample, dedup: bool = True) -> OrderedSample:
    """Sort, merge ties, and compute spacings.

    Observations sharing an identical design value are replaced by a single
    point carrying their mean response, so no sample information is lost
    while every spacing stays positive.  With ``dedup=False`` ties are kept
    (their spacings are zero), which only the constant-type comparators can
    meaningfully consume.
    """
    order = np.argsort(raw.z, kind="stable")
    z = raw.z[order]
    x = raw.x[order]
    if dedup:
        z_unique, start, counts = np.unique(z, return_index=True, return_counts=True)
        if z_unique.size < 2:
            raise InvalidArgumentError("need at least 2 distinct design points")
        x = np.add.reduceat(x, start) / counts
        z = z_unique
    delta, voronoi = _spacings(z, raw.domain)
    return OrderedSample(
        z=z,
        x=x,
        delta=delta,
        delta_voronoi=voronoi,
        delta_max=float(delta.max()),
        domain=raw.domain,
        deduplicated=dedup,
    )


def max_spacing(sample: OrderedSample) -> float:
    """Largest gap of the ordered design, boundary gaps included."""
    return sample.delta_max
