import math

import numpy as np
import pytest
from scipy import integrate

from lhvsim import models
from lhvsim.models import AnalyzerPair, PhotonAnalyzerPair
from lhvsim.montecarlo import (
    CoincidenceModel,
    SampleStats,
    estimate_correlator,
    estimate_probability,
    quadrature,
    ratio_with_error,
    sample_hidden,
    sample_sphere,
)
from lhvsim.spin_algebra import Z_AXIS

from conftest import gaussian_directions

N = 10**6


@pytest.fixture(scope="module")
def pts():
    return sample_sphere(N, seed=1)


class TestSphereSampling:
    def test_unit_length(self, pts):
        np.testing.assert_allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-12)

    @pytest.mark.parametrize("col", [0, 1, 2])
    def test_component_means_zero(self, pts, col):
        x = pts[:, col]
        assert abs(x.mean()) <= 4 * x.std(ddof=1) / math.sqrt(N)

    def test_second_moment(self, pts):
        z2 = pts[:, 2] ** 2
        assert abs(z2.mean() - 1 / 3) <= 4 * z2.std(ddof=1) / math.sqrt(N)

    def test_deterministic(self):
        np.testing.assert_array_equal(sample_sphere(100, seed=42), sample_sphere(100, seed=42))
        assert not np.array_equal(sample_sphere(100, seed=42), sample_sphere(100, seed=43))

    def test_prefix_stable(self):
        # shards are fixed, so a longer run starts with the same samples
        np.testing.assert_array_equal(sample_sphere(100, seed=3), sample_sphere(200_000, seed=3)[:100])

    def test_circle_range(self):
        h = sample_hidden("circle", 10_000, seed=2)
        assert h.min() >= 0 and h.max() < 2 * np.pi


class TestEstimateProbability:
    def test_singlet_parallel(self):
        s = estimate_probability(models.singlet_model(AnalyzerPair(Z_AXIS, Z_AXIS)), N, seed=11)
        assert s.within(1 / 6)
        assert s.n == N and s.seed == 11

    def test_cascade_crossed(self):
        s = estimate_probability(models.cascade_model(PhotonAnalyzerPair(math.pi / 2)), N, seed=12)
        assert s.within(1 / 8)

    def test_constant_one(self):
        model = CoincidenceModel.from_integrand("sphere", lambda lam: np.ones(len(lam)))
        s = estimate_probability(model, 1000, seed=0)
        assert s.mean == 1.0 and s.stderr == 0.0

    def test_stderr_matches_direct_computation(self):
        pair = AnalyzerPair.at_angle(1.0)
        n = 300_000
        s = estimate_probability(models.singlet_model(pair), n, seed=5)
        vals = models.singlet_coincidence_integrand(sample_sphere(n, seed=5), pair)
        assert s.mean == pytest.approx(vals.mean(), rel=1e-12)
        assert s.stderr == pytest.approx(vals.std(ddof=1) / math.sqrt(n), rel=1e-9)

    def test_estimators_agree(self):
        model = models.singlet_model(AnalyzerPair.at_angle(2.0))
        p = estimate_probability(model, N, seed=3, estimator="product")
        b = estimate_probability(model, N, seed=3, estimator="bernoulli")
        assert abs(p.mean - b.mean) <= 4 * math.hypot(p.stderr, b.stderr)

    def test_bernoulli_cascade(self):
        b = estimate_probability(models.cascade_model(PhotonAnalyzerPair(0.0)), N, seed=4, estimator="bernoulli")
        assert b.within(3 / 8)

    def test_too_few_samples(self):
        with pytest.raises(ValueError):
            estimate_probability(models.singlet_model(AnalyzerPair(Z_AXIS, Z_AXIS)), 99)

    def test_integrand_out_of_range(self):
        model = CoincidenceModel.from_integrand("sphere", lambda lam: 2 * np.ones(len(lam)))
        with pytest.raises(ValueError):
            estimate_probability(model, 1000)

    def test_unknown_estimator(self):
        with pytest.raises(ValueError):
            estimate_probability(models.singlet_model(AnalyzerPair(Z_AXIS, Z_AXIS)), 1000, estimator="magic")

    @pytest.mark.parametrize("workers", [1, 2, 3, 8])
    def test_worker_count_does_not_change_result(self, workers):
        model = models.singlet_model(AnalyzerPair.at_angle(0.7))
        ref = estimate_probability(model, 500_001, seed=9, workers=1)
        assert estimate_probability(model, 500_001, seed=9, workers=workers) == ref

    def test_consistency_over_random_settings(self, rng):
        dirs = gaussian_directions(rng, 40)
        for k, (a, b) in enumerate(zip(dirs[::2], dirs[1::2])):
            pair = AnalyzerPair(a, b)
            q = quadrature(lambda om: models.singlet_coincidence_integrand(om, pair))
            s = estimate_probability(models.singlet_model(pair), N, seed=100 + k)
            assert abs(s.mean - q) <= 4 * s.stderr

    def test_stderr_scaling(self):
        model = models.singlet_model(AnalyzerPair.at_angle(0.3))
        small = estimate_probability(model, 10**4, seed=1)
        large = estimate_probability(model, 10**6, seed=1)
        assert small.stderr / large.stderr == pytest.approx(10.0, rel=0.2)


class TestRatios:
    def test_singlet_ratio(self):
        par = estimate_probability(models.singlet_model(AnalyzerPair(Z_AXIS, Z_AXIS)), N, seed=21, stream=0)
        anti = estimate_probability(models.singlet_model(AnalyzerPair(Z_AXIS, -Z_AXIS)), N, seed=21, stream=1)
        r, sig = ratio_with_error(par, anti)
        assert abs(r - 0.5) <= 4 * sig

    def test_cascade_ratio(self):
        orth = estimate_probability(models.cascade_model(PhotonAnalyzerPair(math.pi / 2)), N, seed=22, stream=0)
        par = estimate_probability(models.cascade_model(PhotonAnalyzerPair(0.0)), N, seed=22, stream=1)
        r, sig = ratio_with_error(orth, par)
        assert abs(r - 1 / 3) <= 4 * sig

    def test_propagation_formula(self):
        r, sig = ratio_with_error(SampleStats(0.2, 0.002, 100, 0), SampleStats(0.4, 0.004, 100, 0))
        assert r == 0.5
        assert sig == pytest.approx(0.5 * math.sqrt(2) * 0.01)


class TestCorrelator:
    def _sign(self, theta, seed=0):
        pair = AnalyzerPair.at_angle(theta)
        return estimate_correlator(models.sign_outcome(pair.a), models.sign_outcome(pair.b, flip=True), N, seed)

    def test_perfect_anticorrelation(self):
        s = self._sign(0.0)
        assert s.mean == -1.0 and s.stderr == 0.0

    def test_ninety_degrees(self):
        assert self._sign(math.pi / 2, seed=1).within(0.0)

    def test_sixty_degrees(self):
        assert self._sign(math.pi / 3, seed=2).within(-1 / 3)

    def test_bounded(self):
        s = self._sign(1.234, seed=3)
        assert abs(s.mean) <= 1 + 4 * s.stderr

    def test_rejects_non_pm_one(self):
        with pytest.raises(ValueError):
            estimate_correlator(lambda lam: np.zeros(len(lam)), lambda lam: np.ones(len(lam)), 1000)


class TestQuadrature:
    def test_constant_sphere(self):
        assert quadrature(lambda p: np.ones(len(p)), "sphere", 64) == pytest.approx(1.0, abs=1e-12)

    def test_constant_circle(self):
        assert quadrature(lambda h: np.ones(len(h)), "circle", 64) == pytest.approx(1.0, abs=1e-12)

    def test_singlet_parallel(self):
        pair = AnalyzerPair(Z_AXIS, Z_AXIS)
        assert quadrature(lambda om: models.singlet_coincidence_integrand(om, pair), "sphere", 256) == pytest.approx(
            1 / 6, abs=1e-9
        )

    def test_cascade_parallel(self):
        pair = PhotonAnalyzerPair(0.0)
        assert quadrature(lambda h: models.cascade_coincidence_integrand(h, pair), "circle", 256) == pytest.approx(
            3 / 8, abs=1e-9
        )

    def test_against_adaptive_integration(self):
        def f(p):
            return np.exp(p[..., 0] + 0.5 * p[..., 2])

        def g(phi, theta):
            s = math.sin(theta)
            return f(np.array([s * math.cos(phi), s * math.sin(phi), math.cos(theta)])) * s

        ref, _ = integrate.dblquad(g, 0, math.pi, 0, 2 * math.pi, epsabs=1e-13, epsrel=1e-13)
        assert quadrature(f, "sphere", 128) == pytest.approx(ref / (4 * math.pi), abs=1e-10)

    def test_resolution_floor(self):
        with pytest.raises(ValueError):
            quadrature(lambda p: np.ones(len(p)), "sphere", 63)

    def test_unsupported_domain(self):
        with pytest.raises(ValueError):
            quadrature(lambda p: np.ones(len(p)), "torus", 64)
