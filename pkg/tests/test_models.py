"""Coefficient-model tests: degree decomposition, seeding, periodic copies."""

import numpy as np
import pytest

from trigzeros.models import (
    CoefficientModel,
    decompose_degree,
    mix64,
    sample_coefficients,
    splitmix64,
    validate_model,
)


class TestDecomposeDegree:
    def test_divisible_case(self):
        d = decompose_degree(299, 3)
        assert (d.m, d.r) == (100, 0)

    def test_remainder_case(self):
        d = decompose_degree(300, 2)
        assert (d.m, d.r) == (150, 1)

    def test_ell_one_always_divides(self):
        d = decompose_degree(5, 1)
        assert (d.m, d.r) == (6, 0)

    def test_reconstruction_property(self):
        """n = ell*m - 1 + r with 0 <= r < ell for random (n, ell)."""
        rng = np.random.default_rng(7)
        for _ in range(300):
            ell = int(rng.integers(1, 12))
            n = int(rng.integers(max(1, ell - 1), 2000))
            d = decompose_degree(n, ell)
            assert d.ell * d.m - 1 + d.r == n
            assert 0 <= d.r < d.ell
            assert d.m >= 1
            assert (d.r == 0) == ((n + 1) % ell == 0)

    def test_rejects_degree_below_one_period(self):
        with pytest.raises(ValueError):
            decompose_degree(3, 5)

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            decompose_degree(10, 0)
        with pytest.raises(ValueError):
            decompose_degree(0, 1)


class TestValidateModel:
    def test_accepts_iid_trig(self):
        m = CoefficientModel(kind="trig", dep="iid")
        assert validate_model(m) is m

    def test_rejects_unknown_kind(self):
        with pytest.raises(ValueError):
            validate_model(CoefficientModel(kind="poly", dep="iid"))

    def test_rejects_unknown_dependence(self):
        with pytest.raises(ValueError):
            validate_model(CoefficientModel(kind="trig", dep="markov"))

    def test_periodic_requires_period(self):
        with pytest.raises(ValueError):
            validate_model(CoefficientModel(kind="trig", dep="periodic"))

    def test_iid_must_not_carry_period(self):
        with pytest.raises(ValueError):
            validate_model(CoefficientModel(kind="trig", dep="iid", ell=3))

    def test_rejects_nonpositive_sigma(self):
        with pytest.raises(ValueError):
            validate_model(CoefficientModel(kind="trig", dep="iid", sigma=0.0))
        with pytest.raises(ValueError):
            validate_model(CoefficientModel(kind="trig", dep="iid", sigma=-1.0))


class TestMixing:
    def test_splitmix64_known_value(self):
        # first output of the reference splitmix64 stream seeded at 0
        assert splitmix64(0) == 0xE220A8397B1DCDAF

    def test_splitmix64_range(self):
        for k in range(50):
            v = splitmix64(k)
            assert 0 <= v < (1 << 64)

    def test_mix64_order_sensitive(self):
        assert mix64(1, 2) != mix64(2, 1)
        assert mix64(0) != mix64(0, 0)

    def test_mix64_no_collisions_small_grid(self):
        seen = set()
        for seed in range(20):
            for n in (10, 11, 200):
                for t in range(25):
                    seen.add(mix64(seed, n, t))
        assert len(seen) == 20 * 3 * 25


class TestSampling:
    def test_deterministic_in_seed(self):
        model = CoefficientModel(kind="trig", dep="iid")
        s1 = sample_coefficients(model, 40, seed=123)
        s2 = sample_coefficients(model, 40, seed=123)
        assert np.array_equal(s1.a, s2.a)
        assert np.array_equal(s1.b, s2.b)

    def test_distinct_seeds_distinct_draws(self):
        model = CoefficientModel(kind="trig", dep="iid")
        s1 = sample_coefficients(model, 40, seed=1)
        s2 = sample_coefficients(model, 40, seed=2)
        assert not np.array_equal(s1.a, s2.a)

    def test_periodic_entries_are_bit_exact_copies(self):
        model = CoefficientModel(kind="trig", dep="periodic", ell=4)
        s = sample_coefficients(model, 42, seed=9)
        for j in range(s.n + 1):
            assert s.a[j] == s.a[j % 4]
            assert s.b[j] == s.b[j % 4]

    def test_cosine_kind_has_zero_sine_coefficients(self):
        for dep, ell in (("iid", None), ("periodic", 3)):
            model = CoefficientModel(kind="cosine", dep=dep, ell=ell)
            s = sample_coefficients(model, 30, seed=5)
            assert np.all(s.b == 0.0)

    def test_sigma_scales_amplitudes_exactly(self):
        m1 = CoefficientModel(kind="trig", dep="iid", sigma=1.0)
        m2 = CoefficientModel(kind="trig", dep="iid", sigma=2.5)
        s1 = sample_coefficients(m1, 25, seed=77)
        s2 = sample_coefficients(m2, 25, seed=77)
        assert np.allclose(s2.a, 2.5 * s1.a, rtol=0, atol=0)

    def test_arrays_are_read_only(self):
        model = CoefficientModel(kind="trig", dep="iid")
        s = sample_coefficients(model, 10, seed=0)
        with pytest.raises(ValueError):
            s.a[0] = 1.0

    def test_seed_collision_survey(self):
        """1e4 consecutive seeds give 1e4 distinct leading coefficients."""
        model = CoefficientModel(kind="cosine", dep="iid")
        vals = {sample_coefficients(model, 1, seed=s).a[0] for s in range(10_000)}
        assert len(vals) == 10_000

    def test_gaussian_moments_over_seeds(self):
        """Mean/variance of a[0] across 1e5 seeds match N(0, sigma^2)."""
        model = CoefficientModel(kind="cosine", dep="iid", sigma=1.0)
        vals = np.array(
            [sample_coefficients(model, 1, seed=s).a[0] for s in range(100_000)]
        )
        n = vals.size
        assert abs(vals.mean()) < 4.0 / np.sqrt(n)
        assert abs(vals.var() - 1.0) < 5.0 * np.sqrt(2.0 / n)
