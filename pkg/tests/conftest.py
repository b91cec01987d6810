import numpy as np
import pytest
from hypothesis import HealthCheck, settings

import spacereg as sr

settings.register_profile(
    "ci",
    max_examples=60,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture(params=sr.KERNEL_IDS)
def kernel(request):
    return sr.get_kernel(request.param)


@pytest.fixture
def tricube():
    return sr.get_kernel("tricube")


@pytest.fixture
def epanechnikov():
    return sr.get_kernel("epanechnikov")


@pytest.fixture
def triangular():
    return sr.get_kernel("triangular")


def simpson_integral(f, a, b, n=20001):
    """Fixed-grid Simpson rule; the tests' independent quadrature oracle."""
    if n % 2 == 0:
        n += 1
    t = np.linspace(a, b, n)
    y = np.asarray(f(t), dtype=float)
    w = np.ones(n)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return float((b - a) / (n - 1) / 3.0 * np.sum(w * y))


@pytest.fixture
def simpson():
    return simpson_integral


def equidistant_sample(n, domain=(0.0, 1.0), x=None):
    a, b = domain
    z = a + (b - a) * np.arange(1, n + 1) / (n + 1)
    if x is None:
        x = np.zeros(n)
    return sr.prepare_sample(sr.RawSample(z, x, domain))


@pytest.fixture
def make_equidistant():
    return equidistant_sample
