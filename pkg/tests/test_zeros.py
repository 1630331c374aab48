"""Zero-counting tests: known counts, stability protocol, refinement."""

import numpy as np
import pytest

from trigzeros.models import CoefficientModel, mix64, sample_coefficients
from trigzeros.trigpoly import evaluate, reduce_periodic
from trigzeros.zeros import (
    ZeroCountReport,
    count_zeros,
    deterministic_zero_set,
    refine_root,
)


def _rigged_sample(n, a=None, b=None):
    """Sample with hand-set coefficients (test rig for known functions)."""
    model = CoefficientModel(kind="trig", dep="iid")
    s = sample_coefficients(model, n, seed=0)
    if a is not None:
        arr = np.asarray(a, dtype=float)
        arr.flags.writeable = False
        object.__setattr__(s, "a", arr)
    if b is not None:
        arr = np.asarray(b, dtype=float)
        arr.flags.writeable = False
        object.__setattr__(s, "b", arr)
    return s


class TestKnownCounts:
    def test_single_cosine_tone(self):
        a = np.zeros(11)
        a[7] = 1.0
        s = _rigged_sample(10, a=a, b=np.zeros(11))
        assert count_zeros(s).count == 14

    def test_single_sine_tone(self):
        b = np.zeros(6)
        b[5] = 1.0
        s = _rigged_sample(5, a=np.zeros(6), b=b)
        # sin(5x) vanishes at k pi/5; 0 is excluded, so 10 zeros remain
        assert count_zeros(s).count == 10

    def test_zero_near_wraparound_is_found(self):
        # cos(x - theta) with one zero 1e-5 below 2 pi
        theta = np.pi / 2 - 1e-5
        a = np.array([0.0, np.cos(theta)])
        b = np.array([0.0, np.sin(theta)])
        s = _rigged_sample(1, a=a, b=b)
        assert count_zeros(s).count == 2

    def test_ell_one_periodic_counts_exactly_2n(self):
        """All coefficients repeat with period one: 2n zeros, every seed."""
        model = CoefficientModel(kind="trig", dep="periodic", ell=1)
        for n in (20, 21, 50, 51):  # odd n exercises the anti-periodic wrap
            for trial in range(30):
                s = sample_coefficients(model, n, seed=mix64(3, n, trial))
                rep = count_zeros(s)
                assert rep.count == 2 * n
                assert rep.stable

    def test_r0_count_at_least_deterministic_floor(self):
        model = CoefficientModel(kind="trig", dep="periodic", ell=3)
        for trial in range(20):
            s = sample_coefficients(model, 59, seed=mix64(4, 59, trial))
            assert count_zeros(s).count >= 59 + 1 - 3


class TestDeterministicZeroSet:
    def test_explicit_small_case(self):
        zs = deterministic_zero_set(3, 2)
        expected = 2 * np.pi * np.array([1, 2, 4, 5]) / 6.0
        assert np.allclose(zs, expected, atol=1e-15)

    def test_cardinality(self):
        for m in (1, 2, 5, 9):
            for ell in (1, 2, 4):
                assert deterministic_zero_set(m, ell).size == ell * (m - 1)

    def test_m_one_is_empty(self):
        assert deterministic_zero_set(1, 5).size == 0

    def test_values_are_zeros_of_the_ratio(self):
        from trigzeros.trigpoly import dirichlet_ratio

        zs = deterministic_zero_set(7, 3)
        vals = dirichlet_ratio(7, 3, zs)
        assert np.abs(vals).max() < 1e-8 * 7


class TestStabilityProtocol:
    def test_report_fields(self):
        model = CoefficientModel(kind="trig", dep="iid")
        s = sample_coefficients(model, 25, seed=2)
        rep = count_zeros(s, grid_per_degree=32)
        assert isinstance(rep, ZeroCountReport)
        base = max(256, 32 * 25)
        assert rep.grid_size == base * 2 ** rep.doublings_used
        assert rep.doublings_used >= 2  # two equal doublings are required

    def test_insufficient_doubling_budget_is_flagged(self):
        model = CoefficientModel(kind="trig", dep="iid")
        s = sample_coefficients(model, 25, seed=2)
        assert not count_zeros(s, max_doublings=0).stable
        assert not count_zeros(s, max_doublings=1).stable

    def test_deterministic_reports(self):
        model = CoefficientModel(kind="cosine", dep="iid")
        s = sample_coefficients(model, 40, seed=11)
        r1 = count_zeros(s, want_roots=True)
        r2 = count_zeros(s, want_roots=True)
        assert r1.count == r2.count and r1.grid_size == r2.grid_size
        assert np.array_equal(r1.roots, r2.roots)

    def test_nan_coefficients_abort(self):
        a = np.zeros(4)
        a[1] = np.nan
        s = _rigged_sample(3, a=a, b=np.zeros(4))
        with pytest.raises(FloatingPointError):
            count_zeros(s)

    def test_counts_consistent_across_base_grids(self):
        """>= 99% of 500 random samples agree at grid_per_degree 32/64/128."""
        rng = np.random.default_rng(99)
        models = [
            CoefficientModel(kind="trig", dep="iid"),
            CoefficientModel(kind="cosine", dep="iid"),
            CoefficientModel(kind="trig", dep="periodic", ell=2),
            CoefficientModel(kind="trig", dep="periodic", ell=5),
            CoefficientModel(kind="cosine", dep="periodic", ell=3),
        ]
        agree = 0
        total = 500
        for i in range(total):
            model = models[i % len(models)]
            lo = max(20, (model.ell or 1) - 1)
            n = int(rng.integers(lo, 401))
            s = sample_coefficients(model, n, seed=mix64(7, n, i))
            c32 = count_zeros(s, grid_per_degree=32).count
            c64 = count_zeros(s, grid_per_degree=64).count
            c128 = count_zeros(s, grid_per_degree=128).count
            agree += int(c32 == c64 == c128)
        assert agree >= 0.99 * total


class TestRootRefinement:
    def test_refine_single_cosine_root(self):
        a = np.array([0.0, 1.0])
        s = _rigged_sample(1, a=a, b=np.zeros(2))
        root = refine_root(s, 1.0, 2.0, tol=1e-12)
        assert root == pytest.approx(np.pi / 2, abs=1e-11)

    def test_refine_rejects_non_bracketing(self):
        a = np.array([0.0, 1.0])
        s = _rigged_sample(1, a=a, b=np.zeros(2))
        with pytest.raises(ValueError):
            refine_root(s, 0.1, 0.5)

    def test_roots_match_count_and_interval(self):
        model = CoefficientModel(kind="trig", dep="iid")
        s = sample_coefficients(model, 60, seed=13)
        rep = count_zeros(s, want_roots=True, tol=1e-11)
        assert rep.roots.size == rep.count
        assert np.all(rep.roots > 0) and np.all(rep.roots < 2 * np.pi)
        assert np.all(np.diff(rep.roots) >= 0)

    def test_residuals_small_against_amplitude_scale(self):
        """Refined roots re-evaluate below 1e-8 of the iid amplitude sqrt(n+1)."""
        model = CoefficientModel(kind="trig", dep="iid", sigma=1.0)
        for seed in (1, 2, 3):
            s = sample_coefficients(model, 80, seed=seed)
            rep = count_zeros(s, want_roots=True, tol=1e-12)
            resid = np.abs(evaluate(s, rep.roots))
            assert resid.max() <= 1e-8 * np.sqrt(s.n + 1.0)

    def test_r0_roots_split_into_both_families(self):
        """Merged roots match the deterministic set or kill the reduced factor."""
        model = CoefficientModel(kind="trig", dep="periodic", ell=2)
        s = sample_coefficients(model, 39, seed=21)  # m = 20
        red = reduce_periodic(s)
        det = deterministic_zero_set(red.m, red.ell)
        rep = count_zeros(s, want_roots=True, tol=1e-12)
        scale = np.abs(red.a).sum() + np.abs(red.b).sum()
        for root in rep.roots:
            near_det = np.min(np.abs(det - root)) < 1e-9
            kills_reduced = abs(red.evaluate(root)) < 1e-6 * scale
            assert near_det or kills_reduced


class TestCeiling:
    def test_reported_counts_respect_2n(self):
        for kind in ("trig", "cosine"):
            model = CoefficientModel(kind=kind, dep="iid")
            for seed in range(10):
                s = sample_coefficients(model, 35, seed=seed)
                assert count_zeros(s).count <= 70
