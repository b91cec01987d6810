import numpy as np
import pytest

import spacereg as sr
from spacereg.kernels import moments, partial_moment, boundary_bias_factor


class TestDensityInvariants:
    def test_nonnegative_and_compact_support(self, kernel):
        t = np.linspace(-2.0, 2.0, 2001)
        vals = kernel(t)
        assert np.all(vals >= 0.0)
        assert np.all(vals[np.abs(t) >= 1.0] == 0.0)
        assert kernel(np.array([1.0]))[0] == 0.0
        assert kernel(np.array([-1.0]))[0] == 0.0

    def test_symmetry(self, kernel):
        t = np.linspace(0.0, 1.0, 1501)
        assert np.max(np.abs(kernel(t) - kernel(-t))) < 1e-12

    def test_normalization(self, kernel, simpson):
        assert abs(simpson(kernel, -1.0, 1.0) - 1.0) < 1e-9

    def test_lipschitz_bound(self, kernel):
        t = np.linspace(-1.05, 1.05, 4001)
        vals = kernel(t)
        slopes = np.abs(np.diff(vals)) / np.diff(t)
        assert np.max(slopes) <= kernel.lipschitz + 1e-9
        assert kernel.lipschitz >= 1.0


class TestEvalScaled:
    def test_epanechnikov_at_zero(self, epanechnikov):
        assert sr.eval_scaled(epanechnikov, 1.0, 0.0) == pytest.approx(0.75, abs=1e-12)

    def test_outside_support_is_zero(self, kernel):
        assert sr.eval_scaled(kernel, 0.1, 0.2) == 0.0
        assert sr.eval_scaled(kernel, 0.1, -0.1) == 0.0

    def test_tricube_at_zero(self, tricube):
        assert sr.eval_scaled(tricube, 1.0, 0.0) == pytest.approx(70.0 / 81.0, abs=1e-12)

    def test_rescaling_preserves_mass(self, kernel, simpson):
        mass = simpson(lambda t: sr.eval_scaled(kernel, 0.25, t), -0.25, 0.25)
        assert mass == pytest.approx(1.0, abs=1e-8)

    def test_rejects_bad_bandwidth(self, kernel):
        with pytest.raises(sr.InvalidArgumentError):
            sr.eval_scaled(kernel, 0.0, 0.1)
        with pytest.raises(sr.InvalidArgumentError):
            sr.eval_scaled(kernel, -1.0, 0.1)


class TestMoments:
    def test_epanechnikov_closed_forms(self, epanechnikov):
        # kappa1 = 2 * int_0^1 t * 3/4 (1 - t^2) dt = 3/8, kappa2 = 1/5,
        # ||K||^2 = 2 * int_0^1 (3/4)^2 (1 - t^2)^2 dt = 3/5.
        m = moments(epanechnikov)
        assert m.kappa[1] == pytest.approx(0.375, abs=1e-9)
        assert m.kappa[2] == pytest.approx(0.2, abs=1e-9)
        assert m.ksq == pytest.approx(0.6, abs=1e-9)

    def test_triangular_closed_forms(self, triangular):
        m = moments(triangular)
        assert m.kappa[1] == pytest.approx(1.0 / 3.0, abs=1e-9)
        assert m.kappa[2] == pytest.approx(1.0 / 6.0, abs=1e-9)
        assert m.ksq == pytest.approx(2.0 / 3.0, abs=1e-9)

    def test_tricube_second_moment(self, tricube):
        # 2 * (70/81) * int_0^1 t^2 (1 - t^3)^3 dt = 35/243 by u = t^3.
        assert moments(tricube).kappa[2] == pytest.approx(35.0 / 243.0, abs=1e-9)

    def test_unit_mass(self, kernel):
        assert moments(kernel).kappa[0] == pytest.approx(1.0, abs=1e-9)

    def test_moment_variance_positive(self, kernel):
        m = moments(kernel)
        assert m.kappa[2] - m.kappa[1] ** 2 > 0.0

    def test_against_simpson_oracle(self, kernel, simpson):
        m = moments(kernel)
        for j in range(4):
            oracle = simpson(lambda t, j=j: np.abs(t) ** j * kernel(t), -1.0, 1.0)
            assert m.kappa[j] == pytest.approx(oracle, abs=1e-8)
        assert m.ksq == pytest.approx(simpson(lambda t: kernel(t) ** 2, -1.0, 1.0), abs=1e-8)

    def test_c_star_formula(self, epanechnikov):
        # Direct substitution with L = 3/2: (0.2 - 0.140625) / (144 * 9.3875).
        expected = (0.2 - 0.375**2) / (96.0 * 1.5 * (6.0 * 1.5 + 0.2 + 0.375 / 2.0))
        assert moments(epanechnikov).c_star == pytest.approx(expected, rel=1e-9)
        assert expected == pytest.approx(4.392e-5, rel=1e-3)

    def test_c_star_recomputed_from_moments(self, kernel):
        m = moments(kernel)
        lip = kernel.lipschitz
        expected = (m.kappa[2] - m.kappa[1] ** 2) / (96 * lip * (6 * lip + m.kappa[2] + m.kappa[1] / 2))
        assert m.c_star == pytest.approx(expected, rel=1e-12)

    def test_c_star_upper_bound(self, kernel):
        assert moments(kernel).c_star < 1.0 / (864.0 * kernel.lipschitz)


class TestPartialMoments:
    def test_full_mass(self, kernel):
        assert partial_moment(kernel, 0, 1.0) == pytest.approx(1.0, abs=1e-9)

    def test_half_mass_at_zero(self, kernel):
        assert partial_moment(kernel, 0, 0.0) == pytest.approx(0.5, abs=1e-9)

    def test_epanechnikov_first_moment_at_zero(self, epanechnikov):
        # By symmetry int_{-1}^0 t K = -kappa1 / 2.
        assert partial_moment(epanechnikov, 1, 0.0) == pytest.approx(-0.1875, abs=1e-9)

    def test_symmetry_at_one(self, kernel):
        m = moments(kernel)
        for j in (0, 2):
            assert partial_moment(kernel, j, 1.0) == pytest.approx(m.kappa[j], abs=1e-9)
        for j in (1, 3):
            assert partial_moment(kernel, j, 1.0) == pytest.approx(0.0, abs=1e-9)

    def test_against_simpson_oracle(self, kernel, simpson):
        for j in range(4):
            for alpha in (0.2, 0.7):
                oracle = simpson(lambda t, j=j: t**j * kernel(t), -1.0, alpha)
                assert partial_moment(kernel, j, alpha) == pytest.approx(oracle, abs=1e-8)

    def test_rejects_bad_arguments(self, kernel):
        with pytest.raises(sr.InvalidArgumentError):
            partial_moment(kernel, 4, 0.5)
        with pytest.raises(sr.InvalidArgumentError):
            partial_moment(kernel, 0, 1.5)
        with pytest.raises(sr.InvalidArgumentError):
            partial_moment(kernel, 0, -0.1)


class TestBoundaryBiasFactor:
    def test_alpha_one_equals_kappa2(self, kernel):
        assert boundary_bias_factor(kernel, 1.0) == pytest.approx(
            moments(kernel).kappa[2], abs=1e-9
        )

    def test_tricube_alpha_one(self, tricube):
        assert boundary_bias_factor(tricube, 1.0) == pytest.approx(35.0 / 243.0, abs=1e-6)

    def test_epanechnikov_half_from_oracle(self, epanechnikov, simpson):
        k = [simpson(lambda t, j=j: t**j * epanechnikov(t), -1.0, 0.5) for j in range(4)]
        expected = (k[2] ** 2 - k[3] * k[1]) / (k[0] * k[2] - k[1] ** 2)
        assert boundary_bias_factor(epanechnikov, 0.5) == pytest.approx(expected, rel=1e-6)

    def test_denominator_positive_on_sampled_alphas(self, kernel):
        for alpha in np.linspace(0.01, 1.0, 100):
            k0 = partial_moment(kernel, 0, alpha)
            k1 = partial_moment(kernel, 1, alpha)
            k2 = partial_moment(kernel, 2, alpha)
            assert k0 * k2 - k1 * k1 > 0.0
            boundary_bias_factor(kernel, alpha)  # must not raise

    def test_rejects_alpha_zero(self, kernel):
        with pytest.raises(sr.InvalidArgumentError):
            boundary_bias_factor(kernel, 0.0)


def test_get_kernel_unknown():
    with pytest.raises(sr.InvalidArgumentError):
        sr.get_kernel("gaussian")


def test_kernel_ids():
    assert set(sr.KERNEL_IDS) == {"tricube", "epanechnikov", "triangular"}
