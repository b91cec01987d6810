import numpy as np
import pytest
from hypothesis import given, strategies as st

import spacereg as sr
from spacereg import streams


def brute_force_spacings(z, domain):
    a, b = domain
    padded = np.concatenate([[a], z, [b]])
    return np.diff(padded)


class TestPrepareSample:
    def test_three_point_example(self):
        raw = sr.RawSample([0.5, 0.2, 0.8], [2.0, 1.0, 4.0], (0.0, 1.0))
        s = sr.prepare_sample(raw)
        np.testing.assert_allclose(s.z, [0.2, 0.5, 0.8])
        np.testing.assert_allclose(s.x, [1.0, 2.0, 4.0])
        np.testing.assert_allclose(s.delta, [0.2, 0.3, 0.3, 0.2])
        np.testing.assert_allclose(s.delta_voronoi, [0.35, 0.3, 0.35])
        assert s.delta_max == pytest.approx(0.3)
        np.testing.assert_allclose(s.delta, brute_force_spacings(s.z, s.domain))

    def test_duplicates_replaced_by_mean(self):
        raw = sr.RawSample([0.5, 0.5, 0.1], [1.0, 3.0, 0.0], (0.0, 1.0))
        s = sr.prepare_sample(raw)
        np.testing.assert_allclose(s.z, [0.1, 0.5])
        np.testing.assert_allclose(s.x, [0.0, 2.0])

    def test_equidistant(self):
        n = 9
        z = np.arange(1, n + 1) / (n + 1)
        s = sr.prepare_sample(sr.RawSample(z, np.zeros(n), (0.0, 1.0)))
        np.testing.assert_allclose(s.delta, np.full(n + 1, 0.1))
        assert s.delta_max == pytest.approx(0.1)

    def test_idempotent(self):
        rng = np.random.default_rng(3)
        raw = sr.RawSample(rng.uniform(0, 1, 50), rng.normal(size=50), (0.0, 1.0))
        once = sr.prepare_sample(raw)
        twice = sr.prepare_sample(once.as_raw())
        np.testing.assert_array_equal(once.z, twice.z)
        np.testing.assert_array_equal(once.x, twice.x)
        np.testing.assert_array_equal(once.delta, twice.delta)

    def test_merge_preserves_group_means(self):
        z = np.array([0.3, 0.3, 0.3, 0.6, 0.6])
        x = np.array([1.0, 2.0, 6.0, 4.0, 8.0])
        s = sr.prepare_sample(sr.RawSample(z, x, (0.0, 1.0)))
        np.testing.assert_allclose(s.x, [3.0, 6.0])

    def test_requires_two_distinct_points(self):
        with pytest.raises(sr.InvalidArgumentError):
            sr.prepare_sample(sr.RawSample([0.4, 0.4], [1.0, 2.0], (0.0, 1.0)))

    def test_keep_duplicates_mode(self):
        raw = sr.RawSample([0.5, 0.5, 0.1], [1.0, 3.0, 0.0], (0.0, 1.0))
        s = sr.prepare_sample(raw, dedup=False)
        assert s.n == 3
        assert not s.deduplicated
        assert np.sum(s.delta) == pytest.approx(1.0)
        assert np.min(s.delta) == 0.0


class TestRawSampleValidation:
    def test_rejects_points_outside_domain(self):
        with pytest.raises(sr.InvalidArgumentError):
            sr.RawSample([0.5, 1.5], [0.0, 0.0], (0.0, 1.0))

    def test_rejects_bad_domain(self):
        with pytest.raises(sr.InvalidArgumentError):
            sr.RawSample([0.1, 0.2], [0.0, 0.0], (1.0, 0.0))
        with pytest.raises(sr.InvalidArgumentError):
            sr.RawSample([0.1, 0.2], [0.0, 0.0], (0.0, np.inf))

    def test_rejects_single_point(self):
        with pytest.raises(sr.InvalidArgumentError):
            sr.RawSample([0.5], [1.0], (0.0, 1.0))

    def test_rejects_nan(self):
        with pytest.raises(sr.InvalidArgumentError):
            sr.RawSample([0.1, np.nan], [0.0, 0.0], (0.0, 1.0))


class TestSpacings:
    def test_max_spacing_examples(self):
        s = sr.prepare_sample(sr.RawSample([0.2, 0.5, 0.8], [0, 0, 0], (0.0, 1.0)))
        assert sr.max_spacing(s) == pytest.approx(0.3)
        s = sr.prepare_sample(sr.RawSample([0.01, 0.02], [0, 0], (0.0, 1.0)))
        assert sr.max_spacing(s) == pytest.approx(0.98)

    def test_point_spacings(self):
        s = sr.prepare_sample(sr.RawSample([0.2, 0.5, 0.8], [0, 0, 0], (0.0, 1.0)))
        np.testing.assert_allclose(s.point_spacings("plain"), [0.2, 0.3, 0.3])
        np.testing.assert_allclose(s.point_spacings("voronoi"), [0.35, 0.3, 0.35])
        with pytest.raises(sr.InvalidArgumentError):
            s.point_spacings("midpoint")

    def test_two_point_voronoi(self):
        s = sr.prepare_sample(sr.RawSample([0.25, 0.75], [0, 0], (0.0, 1.0)))
        np.testing.assert_allclose(s.delta_voronoi, [0.25 + 0.25, 0.25 + 0.25])
        assert np.sum(s.delta_voronoi) == pytest.approx(1.0)

    @given(
        st.lists(st.floats(min_value=0.0, max_value=10.0, allow_nan=False),
                 min_size=2, max_size=60),
    )
    def test_spacing_sums(self, zs):
        z = np.asarray(zs)
        if np.unique(z).size < 2:
            return
        s = sr.prepare_sample(sr.RawSample(z, np.zeros(z.size), (0.0, 10.0)))
        assert np.sum(s.delta) == pytest.approx(10.0, abs=1e-9 * 10.0)
        assert np.sum(s.delta_voronoi) == pytest.approx(10.0, abs=1e-9 * 10.0)
        assert s.delta_max == np.max(s.delta)
        assert np.all(np.diff(s.z) > 0)
        # Voronoi definition, brute force.
        d = s.delta
        n = s.n
        expect = np.empty(n)
        expect[0] = d[0] + d[1] / 2
        expect[-1] = d[n - 1] / 2 + d[n]
        for i in range(1, n - 1):
            expect[i] = (d[i] + d[i + 1]) / 2
        np.testing.assert_allclose(s.delta_voronoi, expect)

    def test_uniform_max_spacing_shrinks(self):
        meds = []
        for n in (100, 1000, 10000):
            vals = []
            for rep in range(10):
                rng = streams.generator(42, rep, n)
                s = sr.prepare_sample(
                    sr.RawSample(rng.uniform(0, 1, n), np.zeros(n), (0.0, 1.0))
                )
                vals.append(s.delta_max)
            meds.append(np.median(vals))
        assert meds[0] > meds[1] > meds[2]


def test_with_responses():
    s = sr.prepare_sample(sr.RawSample([0.2, 0.5, 0.8], [1, 2, 3], (0.0, 1.0)))
    s2 = s.with_responses([5.0, 6.0, 7.0])
    np.testing.assert_array_equal(s2.x, [5.0, 6.0, 7.0])
    np.testing.assert_array_equal(s2.z, s.z)
    np.testing.assert_array_equal(s2.delta, s.delta)
    with pytest.raises(sr.InvalidArgumentError):
        s.with_responses([1.0])
