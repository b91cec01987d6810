"""Compactly supported kernel densities and their moment constants.

Every kernel here is a symmetric probability density on ``[-1, 1]`` that
vanishes at the endpoints and satisfies a Lipschitz condition with constant
``L >= 1``.  From the density we derive the constants the estimators and
their diagnostics need:

* ``kappa[j]`` -- absolute moments ``int |u|^j K(u) du``, j = 0..3,
* ``ksq`` -- the squared L2 norm ``int K(u)^2 du``,
* ``c_star`` -- the spacing threshold gating the indicator form of the
  local linear estimator,
* signed partial moments ``int_{-1}^{alpha} t^j K(t) dt`` and the boundary
  bias factor built from them.

Moments are computed once per kernel by adaptive quadrature (relative
tolerance 1e-9) and cached, so all downstream constants are bit-stable
within a run.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .exceptions import InvalidArgumentError

__all__ = [
    "Kernel",
    "KernelMoments",
    "KERNEL_IDS",
    "get_kernel",
    "eval_scaled",
    "moments",
    "partial_moment",
    "boundary_bias_factor",
]

_QUAD_OPTS = {"epsabs": 1e-12, "epsrel": 1e-9, "limit": 200}

# Integer tags used by the compiled fit cores (see _fast.py).
TRICUBE_CODE = 0
EPANECHNIKOV_CODE = 1
TRIANGULAR_CODE = 2


@dataclass(frozen=True)
class Kernel:
    """A symmetric density on [-1, 1] with a known Lipschitz constant.

    Attributes
    ----------
    id : str
        One of ``"tricube"``, ``"epanechnikov"``, ``"triangular"``.
    evaluate : callable
        Vectorized density; zero outside ``(-1, 1)``.
    lipschitz : float
        Lipschitz constant of the density, clamped to >= 1.
    code : int
        Integer tag consumed by the compiled estimator cores.
    """

    id: str
    evaluate: Callable[[np.ndarray], np.ndarray]
    lipschitz: float
    code: int

    def __call__(self, t):
        return self.evaluate(t)


def _tricube(t):
    t = np.asarray(t, dtype=float)
    a = np.minimum(np.abs(t), 1.0)
    return (70.0 / 81.0) * (1.0 - a**3) ** 3


def _epanechnikov(t):
    t = np.asarray(t, dtype=float)
    return 0.75 * np.maximum(0.0, 1.0 - t * t)


def _triangular(t):
    t = np.asarray(t, dtype=float)
    return np.maximum(0.0, 1.0 - np.abs(t))


# Lipschitz constants: sup |K'|, clamped to >= 1.
# tricube: |K'| peaks at |t| = 4**(-1/3) with value (35/8) * 2**(-4/3).
_TRICUBE_LIPSCHITZ = (35.0 / 8.0) * 2.0 ** (-4.0 / 3.0)

_KERNELS = {
    "tricube": Kernel("tricube", _tricube, max(1.0, _TRICUBE_LIPSCHITZ), TRICUBE_CODE),
    "epanechnikov": Kernel("epanechnikov", _epanechnikov, 1.5, EPANECHNIKOV_CODE),
    "triangular": Kernel("triangular", _triangular, 1.0, TRIANGULAR_CODE),
}

KERNEL_IDS = tuple(_KERNELS)


def get_kernel(name: str) -> Kernel:
    """Look up a kernel by id; raises for unknown names."""
    try:
        return _KERNELS[name]
    except KeyError:
        raise InvalidArgumentError(
            f"unknown kernel {name!r}; choose from {', '.join(KERNEL_IDS)}"
        ) from None


def eval_scaled(kernel: Kernel, h: float, t):
    """Evaluate the rescaled density ``K_h(t) = K(t / h) / h``.

    ``K_h`` is a probability density supported on ``[-h, h]``.  Accepts a
    scalar or an array ``t`` and preserves the shape.
    """
    if not h > 0:
        raise InvalidArgumentError(f"bandwidth must be positive, got {h}")
    out = kernel.evaluate(np.asarray(t, dtype=float) / h) / h
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class KernelMoments:
    """Cached moment constants of a kernel.

    ``kappa[j]`` are the absolute moments, ``ksq`` the squared L2 norm and
    ``c_star`` the spacing threshold
    ``(kappa2 - kappa1^2) / (96 L (6 L + kappa2 + kappa1 / 2))``,
    which is always below ``1 / (864 L)``.
    """

    kappa: tuple[float, float, float, float]
    ksq: float
    c_star: float


_MOMENT_CACHE: dict[str, KernelMoments] = {}


def moments(kernel: Kernel) -> KernelMoments:
    """Absolute moments, L2 norm and spacing threshold of a kernel."""
    cached = _MOMENT_CACHE.get(kernel.id)
    if cached is not None:
        return cached
    kappa = tuple(
        quad(lambda u, j=j: abs(u) ** j * float(kernel.evaluate(u)), -1.0, 1.0,
             points=[0.0], **_QUAD_OPTS)[0]
        for j in range(4)
    )
    ksq = quad(lambda u: float(kernel.evaluate(u)) ** 2, -1.0, 1.0,
               points=[0.0], **_QUAD_OPTS)[0]
    lip = kernel.lipschitz
    c_star = (kappa[2] - kappa[1] ** 2) / (96.0 * lip * (6.0 * lip + kappa[2] + kappa[1] / 2.0))
    result = KernelMoments(kappa=kappa, ksq=ksq, c_star=c_star)
    _MOMENT_CACHE[kernel.id] = result
    return result


def partial_moment(kernel: Kernel, j: int, alpha: float) -> float:
    """Signed partial moment ``int_{-1}^{alpha} t^j K(t) dt``.

    Unlike ``moments().kappa[j]`` the integrand is signed, so odd j give
    negative values for alpha <= 0.
    """
    if j not in (0, 1, 2, 3):
        raise InvalidArgumentError(f"moment order must be in 0..3, got {j}")
    if not 0.0 <= alpha <= 1.0:
        raise InvalidArgumentError(f"alpha must lie in [0, 1], got {alpha}")
    points = [0.0] if alpha > 0.0 else None
    return quad(lambda t: t**j * float(kernel.evaluate(t)), -1.0, float(alpha),
                points=points, **_QUAD_OPTS)[0]


def boundary_bias_factor(kernel: Kernel, alpha: float) -> float:
    """Bias factor of the local linear estimator at ``t = alpha * h``.

    Returns ``(k2(a)^2 - k3(a) k1(a)) / (k0(a) k2(a) - k1(a)^2)`` with the
    signed partial moments ``k_j``.  The denominator is strictly positive
    for every alpha (Cauchy-Bunyakovsky); a non-positive value indicates an
    internal quadrature failure.
    """
    if not 0.0 < alpha <= 1.0:
        raise InvalidArgumentError(f"alpha must lie in (0, 1], got {alpha}")
    k0, k1, k2, k3 = (partial_moment(kernel, j, alpha) for j in range(4))
    den = k0 * k2 - k1 * k1
    if not den > 0.0:
        raise RuntimeError(f"boundary factor denominator not positive: {den}")
    return (k2 * k2 - k3 * k1) / den
