"""Kac-Rice engine tests: closed forms vs literal sums, quadrature, limits."""

import math

import numpy as np
import pytest

from trigzeros.models import (
    CoefficientModel,
    decompose_degree,
    sample_coefficients,
)
from trigzeros.kacrice import (
    QuadConfig,
    abc_closed,
    abc_direct,
    abc_leading_order,
    abc_reduced,
    expected_zeros_exact_r0,
    expected_zeros_quadrature,
    limit_integrand_fpm,
    limit_integrand_g,
    _gl_nodes,
)
from trigzeros.trigpoly import reduce_periodic, u_ell


def _sample(kind, dep, n, ell=None, seed=0, sigma=1.0):
    model = CoefficientModel(kind=kind, dep=dep, ell=ell, sigma=sigma)
    return sample_coefficients(model, n, seed=seed)


def _interior_grid(points=257):
    return np.linspace(0.05, 2 * np.pi - 0.05, points)


class TestClosedVersusDirect:
    """abc_closed must reproduce the literal basis sums to roundoff."""

    def test_iid_trig_constants_are_exact_identities(self):
        s = _sample("trig", "iid", 37)
        x = _interior_grid(101)
        d = abc_direct(s, x)
        assert np.allclose(d.A, 38.0, rtol=1e-12)
        assert np.abs(d.B).max() < 1e-9 * 37**2
        assert np.allclose(d.C, 37 * 38 * 75 / 6.0, rtol=1e-12)
        c = abc_closed(s, x)
        assert np.array_equal(c.A, np.full_like(x, 38.0))
        assert np.array_equal(c.B, np.zeros_like(x))

    @pytest.mark.parametrize(
        "ell,n", [(4, 47), (3, 100), (5, 102), (2, 31), (7, 90)]
    )
    def test_periodic_trig_all_remainders(self, ell, n):
        s = _sample("trig", "periodic", n, ell=ell)
        x = _interior_grid(257)
        d = abc_direct(s, x)
        c = abc_closed(s, x)
        scale_a = np.maximum(np.abs(d.A), 1.0)
        scale_b = np.maximum(np.abs(d.B), float(n))
        scale_c = np.maximum(np.abs(d.C), 1.0)
        assert (np.abs(d.A - c.A) / scale_a).max() < 1e-10
        assert (np.abs(d.B - c.B) / scale_b).max() < 1e-9
        assert (np.abs(d.C - c.C) / scale_c).max() < 1e-10

    def test_closed_rejects_cosine(self):
        s = _sample("cosine", "periodic", 29, ell=3)
        with pytest.raises(ValueError):
            abc_closed(s, 1.0)


class TestReducedForms:
    def test_trig_reduced_is_stationary(self):
        s = _sample("trig", "periodic", 59, ell=4)  # m = 15, r = 0
        x = _interior_grid(64)
        red = abc_reduced(s, x)
        n, ell = 59, 4
        c_expected = ell * (3 * n**2 + ell**2 - 1) / 12.0
        assert np.array_equal(red.A, np.full_like(x, float(ell)))
        assert np.array_equal(red.B, np.zeros_like(x))
        assert np.allclose(red.C, c_expected, rtol=1e-14)

    def test_trig_reduced_matches_frequency_sum(self):
        s = _sample("trig", "periodic", 119, ell=6)
        red = reduce_periodic(s)
        nu = red.frequencies()
        got = abc_reduced(s, np.array([0.3])).C[0]
        assert got == pytest.approx(float((nu * nu).sum()), rel=1e-15)

    def test_cosine_reduced_against_literal_sums(self):
        s = _sample("cosine", "periodic", 53, ell=6)  # m = 9, r = 0
        red = reduce_periodic(s)
        nu = red.frequencies()
        x = _interior_grid(97)
        got = abc_reduced(s, x)
        fx = np.cos(np.multiply.outer(nu, x))
        fdx = -nu[:, None] * np.sin(np.multiply.outer(nu, x))
        assert np.allclose(got.A, (fx * fx).sum(axis=0), atol=1e-11 * 6)
        assert np.allclose(got.B, (fx * fdx).sum(axis=0), atol=1e-9 * 53)
        assert np.allclose(
            got.C, (fdx * fdx).sum(axis=0), atol=1e-9 * 53**2
        )

    def test_cosine_reduced_A_vanishes_only_at_known_points(self):
        # ell = 3, n = 299: A*(pi) = (3/2)(1 + cos(299 pi)) = 0
        s = _sample("cosine", "periodic", 299, ell=3)
        at_pi = abc_reduced(s, np.array([np.pi])).A[0]
        assert abs(at_pi) < 1e-10
        x = np.linspace(0.2, np.pi - 0.2, 500)
        assert abc_reduced(s, x).A.min() > 0.01


class TestDiscriminant:
    def test_cauchy_schwarz_everywhere(self):
        x = _interior_grid(401)
        cases = [
            _sample("trig", "iid", 40),
            _sample("cosine", "iid", 40),
            _sample("trig", "periodic", 41, ell=3),
            _sample("trig", "periodic", 40, ell=3),
            _sample("cosine", "periodic", 41, ell=2),
        ]
        for s in cases:
            d = abc_direct(s, x)
            disc = d.discriminant()
            assert np.all(disc >= 0.0)
            assert np.all(d.A > 0.0)

    def test_sigma_cancels(self):
        x = _interior_grid(33)
        narrow = _sample("trig", "periodic", 41, ell=3, sigma=1.0)
        wide = _sample("trig", "periodic", 41, ell=3, sigma=5.0)
        a = abc_closed(narrow, x)
        b = abc_closed(wide, x)
        assert np.array_equal(a.A, b.A)
        assert np.array_equal(a.B, b.B)
        assert np.array_equal(a.C, b.C)


class TestExactCount:
    def test_small_example(self):
        # ell = 2, n = 5: 4 lattice zeros plus sqrt(25 + 1) random ones
        assert expected_zeros_exact_r0(5, 2) == pytest.approx(
            4 + math.sqrt(26), rel=1e-15
        )

    def test_degree_299_example(self):
        got = expected_zeros_exact_r0(299, 3)
        assert got == pytest.approx(297 + math.sqrt(299**2 + 8 / 3.0), rel=1e-15)
        assert got == pytest.approx(596.004459, abs=5e-6)

    def test_period_one_gives_2n(self):
        for n in (5, 50, 321):
            assert expected_zeros_exact_r0(n, 1) == pytest.approx(
                2.0 * n, rel=1e-15
            )

    def test_rejects_nonzero_remainder(self):
        with pytest.raises(ValueError):
            expected_zeros_exact_r0(100, 3)

    def test_rejects_vacuous_period(self):
        with pytest.raises(ValueError):
            expected_zeros_exact_r0(4, 5)  # m = 1: coefficients never repeat


class TestQuadrature:
    def test_iid_trig_closed_value(self):
        s = _sample("trig", "iid", 200)
        res = expected_zeros_quadrature(s)
        theory = 2.0 * math.sqrt(200 * 401 / 6.0)
        assert res.value == pytest.approx(theory, rel=1e-15)
        assert res.abs_error_estimate == 0.0
        assert res.value == pytest.approx(2 * 200 / math.sqrt(3), rel=5e-3)

    def test_iid_cosine_near_universal_asymptote(self):
        s = _sample("cosine", "iid", 120)
        res = expected_zeros_quadrature(s)
        assert res.abs_error_estimate < 1e-6
        assert res.value == pytest.approx(240 / math.sqrt(3), rel=0.02)

    @pytest.mark.parametrize("ell,n", [(2, 199), (3, 299), (5, 499), (1, 60)])
    def test_r0_quadrature_matches_exact(self, ell, n):
        s = _sample("trig", "periodic", n, ell=ell)
        res = expected_zeros_quadrature(s)
        exact = expected_zeros_exact_r0(n, ell)
        assert res.total() == pytest.approx(exact, rel=1e-9)
        if ell > 1:
            assert res.deterministic_zeros == n + 1 - ell

    def test_panel_doubling_self_consistency(self):
        s = _sample("cosine", "iid", 60)
        v8 = expected_zeros_quadrature(s, QuadConfig(panels_per_degree=8))
        v16 = expected_zeros_quadrature(s, QuadConfig(panels_per_degree=16))
        assert abs(v8.value - v16.value) < 1e-6

    def test_lattice_windows_reported_for_nonzero_r(self):
        s = _sample("trig", "periodic", 100, ell=3)  # r = 1
        res = expected_zeros_quadrature(s)
        assert len(res.excluded_windows) == 4  # 0, 2pi/3, 4pi/3, 2pi
        assert res.excluded_mass_estimate > 0
        assert res.deterministic_zeros == 0

    def test_cosine_r0_windows_cover_singularities(self):
        s = _sample("cosine", "periodic", 299, ell=3)
        res = expected_zeros_quadrature(s)
        assert res.deterministic_zeros == 297
        lows = [a for a, b in res.excluded_windows]
        assert any(a <= np.pi <= b for a, b in res.excluded_windows)
        assert res.total() <= 2 * 299 + 0.5
        assert abs(res.total() - 2 * 299) <= 2 * res.abs_error_estimate

    def test_cosine_r0_total_tracks_2n_at_two_thirds_order(self):
        for n in (149, 299, 599):
            s = _sample("cosine", "periodic", n, ell=3)
            res = expected_zeros_quadrature(s)
            gap = abs(res.total() - 2.0 * n)
            assert gap <= 5.0 * n ** (2.0 / 3.0)

    def test_sigma_invariance_of_value(self):
        a = expected_zeros_quadrature(_sample("trig", "periodic", 100, ell=3))
        b = expected_zeros_quadrature(
            _sample("trig", "periodic", 100, ell=3, sigma=7.0)
        )
        assert a.value == b.value


class TestLeadingOrderRemainders:
    """Truncation errors of the large-n forms shrink at the documented rates.

    With lattice windows of half-width (2/ell) m^{-a} excluded and a = 0.225,
    the B^2 truncation error is O(n^{1+4a}) = O(n^1.9) and the C truncation
    error is O(n^{1+2a}) = O(n^1.45).  The constants are calibrated on the two
    smallest degrees and the larger degrees must stay within 3x of them.
    """

    ELL, R, A_EXP = 3, 1, 0.225
    DEGREES = (99, 201, 399, 801)

    def _sup_gaps(self, n):
        dec = decompose_degree(n, self.ELL)
        w = 2.0 * dec.m ** (-self.A_EXP) / self.ELL
        x = np.linspace(w, 2 * np.pi / self.ELL - w, 4001)
        s = _sample("trig", "periodic", n, ell=self.ELL)
        exact = abc_closed(s, x)
        trunc = abc_leading_order(s, x)
        gap_b2 = np.abs(exact.B**2 - trunc.B**2).max()
        gap_c = np.abs(exact.C - trunc.C).max()
        return gap_b2, gap_c

    def test_remainder_orders(self):
        sups = {n: self._sup_gaps(n) for n in self.DEGREES}
        k_b2 = max(sups[n][0] / n**1.9 for n in self.DEGREES[:2])
        k_c = max(sups[n][1] / n**1.45 for n in self.DEGREES[:2])
        assert k_b2 > 0 and k_c > 0  # the forms genuinely differ
        for n in self.DEGREES[2:]:
            assert sups[n][0] <= 3.0 * k_b2 * n**1.9
            assert sups[n][1] <= 3.0 * k_c * n**1.45

    def test_rejects_r0_and_iid(self):
        with pytest.raises(ValueError):
            abc_leading_order(_sample("trig", "periodic", 59, ell=3), 1.0)
        with pytest.raises(ValueError):
            abc_leading_order(_sample("trig", "iid", 59), 1.0)


class TestLimitIntegrands:
    def test_g_at_least_one_and_reaches_above(self):
        s = np.linspace(0.1, np.pi - 0.1, 40)
        t = np.linspace(0.1, np.pi - 0.1, 40)
        ss, tt = np.meshgrid(s, t)
        g = limit_integrand_g(3, 1, ss, tt)
        assert np.all(g >= 1.0)
        assert g.max() > 1.1

    def test_fpm_positive_and_unit_free(self):
        x = np.linspace(1e-3, np.pi / 2, 1000)
        fp = limit_integrand_fpm(3, 200, x, +1)
        fm = limit_integrand_fpm(3, 200, x, -1)
        assert np.all(fp >= 0) and np.all(fm >= 0)
        u = u_ell(3, x)
        assert np.allclose(
            fp * (1 + u * np.cos(200 * x)), np.sqrt(1 - u * u), atol=1e-12
        )

    @staticmethod
    def _i_pm(ell, n, sign, panels_per_degree=60):
        lo = math.pi / (2 * n) if sign < 0 else 0.0
        xs, ws = _gl_nodes(lo, math.pi / 2, panels_per_degree * n, 8)
        return float(np.dot(limit_integrand_fpm(ell, n, xs, sign), ws)) / math.pi

    def test_circle_averages_tend_to_half(self):
        """I+-(n) = 1/2 + O(n^{-1/3}), constant calibrated at n <= 200."""
        degs = (100, 200, 400, 800)
        gaps = {
            n: (
                abs(self._i_pm(3, n, +1) - 0.5),
                abs(self._i_pm(3, n, -1) - 0.5),
            )
            for n in degs
        }
        k = max(max(gaps[n]) * n ** (1.0 / 3.0) for n in degs[:2])
        for n in degs[2:]:
            assert max(gaps[n]) <= 3.0 * k * n ** (-1.0 / 3.0)
