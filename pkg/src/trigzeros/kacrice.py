"""Expected-zero counts via the Gaussian first-moment (Kac-Rice) integral.

For a centered Gaussian process T(x) = sum_j c_j f_j(x) with i.i.d. N(0, s^2)
coefficients, the expected number of zeros on (lo, hi) is

    E[N] = (1/pi) * integral over (lo, hi) of sqrt(A*C - B^2) / A dx,

with A = sum f_j^2, B = sum f_j f_j', C = sum (f_j')^2.  The variance s^2
cancels in the ratio, so everything here is sigma-free.

Three evaluation routes for (A, B, C):

* ``abc_direct``   -- literal sums over the independent Gaussian directions,
  O(basis size) per point.  Slow but assumption-free; the oracle the closed
  forms are tested against.
* ``abc_closed``   -- O(1)-per-point closed forms.  For periodic coefficient
  blocks the grouped basis collapses through the Dirichlet kernel
  phi_m(x) = sin(m*ell*x/2)/sin(ell*x/2), leaving a handful of phi_m / phi_m'
  terms plus integer frequency sums that are precomputed exactly.
* ``abc_reduced``  -- (A, B, C) of the *reduced* polynomial that remains after
  factoring phi_m out of a block-periodic sample with r = 0.  For the trig
  model the reduced process is stationary: A = ell, B = 0, C = const.

``expected_zeros_quadrature`` integrates the appropriate route with composite
Gauss-Legendre panels sized to the oscillation scale (panel width ~ 1/n), and
``expected_zeros_exact_r0`` returns the closed-form count for the fully
periodic trig model, where the stationary reduced process makes the integral
elementary.

Near the degree-grid lattice points x = 2*pi*k/ell the closed forms for r != 0
involve cancellations between O(n^2) terms, and A itself dips toward its
positive floor; quadrature there is dominated by narrow spikes of the
integrand.  The spike mass is O(width * n), so the engine excises shrinking
windows around the lattice (width prescribed by ``exclusion_exponent``) and
folds an estimate of the excised mass (average-density scale n/pi per unit
length) into the error estimate instead of chasing the spikes with panels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .models import PolySample, decompose_degree
from .trigpoly import (
    dirichlet_ratio,
    dirichlet_ratio_deriv,
    reduce_periodic,
    u_ell,
)

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# (A, B, C) triples
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AbcTriple:
    """Covariance data A = Var T, B = Cov(T, T'), C = Var T' at points x."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    x: np.ndarray

    def discriminant(self) -> np.ndarray:
        """A*C - B^2, clamped to zero when negative within roundoff."""
        d = self.A * self.C - self.B * self.B
        floor = -1e-12 * np.maximum(self.A * self.C, 1.0)
        if np.any(d < floor):
            worst = float((d / np.maximum(self.A * self.C, 1e-300)).min())
            raise FloatingPointError(
                f"A*C - B^2 < 0 beyond roundoff (relative {worst:.3e})"
            )
        return np.maximum(d, 0.0)

    def integrand(self) -> np.ndarray:
        """sqrt(A*C - B^2) / (pi * A), the Kac-Rice density."""
        return np.sqrt(self.discriminant()) / (math.pi * self.A)


def _basis_functions(sample: PolySample, x: np.ndarray):
    """Independent-direction basis values and derivatives, shape (dirs, len(x)).

    For i.i.d. coefficients every frequency is its own direction.  For
    ell-periodic coefficients the directions are the ell (or 2*ell) grouped
    sums sum_t cos((k + ell*t) x), one per distinct random coefficient.
    """
    n = sample.n
    model = sample.model
    if model.dep == "iid":
        j = np.arange(n + 1, dtype=float)
        jx = np.multiply.outer(j, x)
        rows_cos = np.cos(jx)
        rows_cos_d = -j[:, None] * np.sin(jx)
        if model.kind == "cosine":
            return rows_cos, rows_cos_d
        rows_sin = np.sin(jx)
        rows_sin_d = j[:, None] * np.cos(jx)
        return (
            np.vstack([rows_cos, rows_sin]),
            np.vstack([rows_cos_d, rows_sin_d]),
        )

    dec = decompose_degree(n, model.ell)
    j = np.arange(n + 1)
    rows = []
    rows_d = []
    for k in range(model.ell):
        freqs = j[j % model.ell == k].astype(float)
        fx = np.multiply.outer(freqs, x)
        rows.append(np.cos(fx).sum(axis=0))
        rows_d.append(-(freqs[:, None] * np.sin(fx)).sum(axis=0))
    if model.kind == "trig":
        for k in range(model.ell):
            freqs = j[j % model.ell == k].astype(float)
            fx = np.multiply.outer(freqs, x)
            rows.append(np.sin(fx).sum(axis=0))
            rows_d.append((freqs[:, None] * np.cos(fx)).sum(axis=0))
    del dec
    return np.vstack(rows), np.vstack(rows_d)


def abc_direct(sample: PolySample, x) -> AbcTriple:
    """Literal O(n)-per-point sums.  Oracle route; no closed-form shortcuts."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    f, fd = _basis_functions(sample, x)
    A = (f * f).sum(axis=0)
    B = (f * fd).sum(axis=0)
    C = (fd * fd).sum(axis=0)
    return AbcTriple(A=A, B=B, C=C, x=x)


def _iid_constants(kind: str, n: int):
    """A, C for the i.i.d. trig model (both constant in x)."""
    A = float(n + 1)
    C = n * (n + 1) * (2 * n + 1) / 6.0
    del kind
    return A, C


def _grouped_frequency_sums(ell: int, m: int, r: int):
    """Exact integer sums over the grouped/tail frequency sets.

    Grouped frequencies: nu_k = k + (m-1) ell / 2 for k < ell (stored twice).
    Tail frequencies:    beta_k = m ell + k        for k < r.
    Returns (S2, Sb, Sb2, Sab) = (sum nu^2, sum beta, sum beta^2,
    sum nu_k beta_k over k < r), all exact floats (integer/4 at worst).
    """
    ks = np.arange(ell, dtype=object)
    nu2 = 2 * ks + (m - 1) * ell  # 2*nu_k, exact integers
    S2 = int(sum(t * t for t in nu2))  # 4 * sum nu^2
    kr = np.arange(r, dtype=object)
    beta = m * ell + kr
    Sb = int(sum(beta))
    Sb2 = int(sum(t * t for t in beta))
    Sab = int(sum((2 * k + (m - 1) * ell) * (m * ell + k) for k in range(r)))
    return S2 / 4.0, float(Sb), float(Sb2), Sab / 2.0


def abc_closed(sample: PolySample, x) -> AbcTriple:
    """O(1)-per-point closed forms for the raw (unfactored) polynomial.

    i.i.d. trig: A = n+1, B = 0, C = n(n+1)(2n+1)/6.
    Periodic trig, with phi = phi_m, D = (m+1) ell x / 2, and the exact
    integer sums of ``_grouped_frequency_sums``:

        A = ell phi^2 + r + 2 r phi cos D
        B = ell phi phi' + r [phi' cos D - ((m+1) ell / 2) phi sin D]
        C = ell phi'^2 + phi^2 S2 + Sb2 - 2 phi' sin D Sb + 2 phi cos D Sab

    The cosine models have no closed form here (their A depends on x through
    slowly converging sums); use abc_direct or, for r = 0, abc_reduced.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    model = sample.model
    n = sample.n
    if model.dep == "iid":
        if model.kind != "trig":
            raise ValueError("closed forms cover i.i.d. trig only")
        A0, C0 = _iid_constants("trig", n)
        full = np.full_like(x, A0)
        return AbcTriple(A=full, B=np.zeros_like(x), C=np.full_like(x, C0), x=x)

    if model.kind != "trig":
        raise ValueError("closed forms cover periodic trig only")
    dec = decompose_degree(n, model.ell)
    ell, m, r = dec.ell, dec.m, dec.r
    S2, Sb, Sb2, Sab = _grouped_frequency_sums(ell, m, r)
    phi = dirichlet_ratio(m, ell, x)
    phid = dirichlet_ratio_deriv(m, ell, x)
    D = 0.5 * (m + 1) * ell * x
    cosD = np.cos(D)
    sinD = np.sin(D)
    A = ell * phi * phi + r + 2.0 * r * phi * cosD
    B = ell * phi * phid + r * (phid * cosD - 0.5 * (m + 1) * ell * phi * sinD)
    C = (
        ell * phid * phid
        + phi * phi * S2
        + Sb2
        - 2.0 * phid * sinD * Sb
        + 2.0 * phi * cosD * Sab
    )
    return AbcTriple(A=A, B=B, C=C, x=x)


def abc_reduced(sample: PolySample, x) -> AbcTriple:
    """(A, B, C) of the reduced polynomial after factoring out phi_m (r = 0).

    Trig: the reduced process is stationary -- A = ell, B = 0,
    C = sum nu_k^2 = ell (3 n^2 + ell^2 - 1) / 12, all constant.

    Cosine: A collapses to (ell/2)(1 + u_ell(x) cos(n x)) exactly; B and C
    stay literal O(ell) sums over the reduced frequencies.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    red = reduce_periodic(sample)
    nu = red.frequencies()
    if sample.model.kind == "trig":
        A0 = float(red.ell)
        C0 = float((nu * nu).sum())
        return AbcTriple(
            A=np.full_like(x, A0),
            B=np.zeros_like(x),
            C=np.full_like(x, C0),
            x=x,
        )
    # cosine: basis is cos(nu_k x), k < ell
    n = sample.n
    A = 0.5 * red.ell * (1.0 + u_ell(red.ell, x) * np.cos(n * x))
    two_nu_x = np.multiply.outer(2.0 * nu, x)
    B = -0.5 * (nu[:, None] * np.sin(two_nu_x)).sum(axis=0)
    C = 0.5 * float((nu * nu).sum()) - 0.5 * (
        (nu * nu)[:, None] * np.cos(two_nu_x)
    ).sum(axis=0)
    return AbcTriple(A=A, B=B, C=C, x=x)


def abc_leading_order(sample: PolySample, x) -> AbcTriple:
    """Truncated large-n forms for the periodic trig model with r != 0.

    Valid away from the lattice x = 2 pi k / ell; the dropped remainders are
    O(n^{1+4a}) in B^2 and O(n^{1+2a}) in C when the lattice is excluded at
    distance ~ (2/ell) m^{-a}.  Exposed so tests can measure those remainder
    orders against the exact forms.  B is returned with the sign of the exact
    B; only B^2 is asymptotically meaningful here.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    model = sample.model
    if model.dep != "periodic" or model.kind != "trig":
        raise ValueError("leading-order forms cover periodic trig only")
    dec = decompose_degree(sample.n, model.ell)
    ell, m, r = dec.ell, dec.m, dec.r
    if r == 0:
        raise ValueError("leading-order forms require r != 0")
    phi = dirichlet_ratio(m, ell, x)
    phid = dirichlet_ratio_deriv(m, ell, x)
    D = 0.5 * (m + 1) * ell * x
    half = np.sin(0.5 * ell * x)
    cos2m1 = np.cos(0.5 * (2 * m + 1) * ell * x)
    A = ell * phi * phi + r + 2.0 * r * phi * np.cos(D)
    B2 = (
        (ell * phi * phid) ** 2
        + (r * m * ell * cos2m1) ** 2 / (4.0 * half * half)
        + r * m * ell * ell * phi * phid * cos2m1 / half
    )
    C = (
        0.25 * (m * ell) ** 2 * A
        + 0.25 * r * (m * ell) ** 2
        - r * m * ell * phid * np.sin(D)
        + ell * phid * phid
    )
    B = np.sign(ell * phi * phid) * np.sqrt(np.maximum(B2, 0.0))
    return AbcTriple(A=A, B=B, C=C, x=x)


# ---------------------------------------------------------------------------
# Quadrature engine
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadConfig:
    """Composite Gauss-Legendre settings.

    panels_per_degree scales panel count with n (the integrand oscillates at
    wavelength ~ 2 pi / n); exclusion_exponent overrides the default window
    shrink rate around integrable-spike points when set.
    """

    panels_per_degree: int = 8
    nodes_per_panel: int = 16
    min_panels: int = 64
    exclusion_exponent: float | None = None


@dataclass(frozen=True)
class KacRiceResult:
    value: float
    abs_error_estimate: float
    panels_used: int
    nodes_per_panel: int
    excluded_windows: tuple = ()
    excluded_mass_estimate: float = 0.0
    deterministic_zeros: int = 0

    def total(self) -> float:
        """Deterministic zeros plus the integrated random-zero count."""
        return self.deterministic_zeros + self.value


def _gl_nodes(lo: float, hi: float, n_panels: int, nodes: int):
    """Composite Gauss-Legendre nodes/weights on (lo, hi)."""
    z, w = np.polynomial.legendre.leggauss(nodes)
    edges = np.linspace(lo, hi, n_panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    halfw = 0.5 * (edges[1:] - edges[:-1])
    xs = (mid[:, None] + halfw[:, None] * z[None, :]).ravel()
    ws = (halfw[:, None] * w[None, :]).ravel()
    return xs, ws


def _integrate_panels(func, intervals, n_panels_total: int, nodes: int):
    """Integrate func over the union of intervals with ~n_panels_total panels."""
    total_len = sum(hi - lo for lo, hi in intervals)
    value = 0.0
    panels_used = 0
    for lo, hi in intervals:
        share = max(1, int(round(n_panels_total * (hi - lo) / total_len)))
        xs, ws = _gl_nodes(lo, hi, share, nodes)
        value += float(np.dot(func(xs), ws))
        panels_used += share
    return value, panels_used


def _exclusion_windows(sample: PolySample, config: QuadConfig):
    """Centers and half-widths of integrable-spike windows to excise.

    Periodic trig r != 0: lattice points 2 pi k / ell, half-width
    (2/ell) m^{-a} with a = 1/5 by default (the remainder-balancing choice).
    Periodic cosine r = 0 (reduced route): {0, pi, 2 pi}, half-width n^{-a},
    a = 1/3 by default.  Everything else: none.
    """
    model = sample.model
    if model.dep != "periodic":
        return [], 0.0
    dec = decompose_degree(sample.n, model.ell)
    if dec.m == 1:
        return [], 0.0  # no repetition occurs; A stays bounded below
    if dec.r != 0:
        a = config.exclusion_exponent if config.exclusion_exponent else 0.2
        half = (2.0 / dec.ell) * dec.m ** (-a)
        half = min(half, math.pi / (4.0 * dec.ell))  # never swallow a cell
        centers = [TWO_PI * k / dec.ell for k in range(dec.ell + 1)]
        return [(c, half) for c in centers], half
    if model.kind == "cosine" and dec.r == 0:
        a = config.exclusion_exponent if config.exclusion_exponent else 1.0 / 3.0
        half = min(float(sample.n) ** (-a), 0.5)
        return [(c, half) for c in (0.0, math.pi, TWO_PI)], half
    return [], 0.0


def _excise(lo: float, hi: float, windows):
    """Subtract |windows| (center, half-width) from [lo, hi]; keep >0-length."""
    cuts = []
    for c, h in windows:
        a, b = c - h, c + h
        if b > lo and a < hi:
            cuts.append((max(a, lo), min(b, hi)))
    cuts.sort()
    intervals = []
    cursor = lo
    for a, b in cuts:
        if a > cursor:
            intervals.append((cursor, a))
        cursor = max(cursor, b)
    if cursor < hi:
        intervals.append((cursor, hi))
    return intervals, cuts


def expected_zeros_quadrature(
    sample: PolySample, config: QuadConfig | None = None
) -> KacRiceResult:
    """E[number of zeros on (0, 2 pi)] by Kac-Rice quadrature.

    Dispatch:
      * i.i.d. trig      -- stationary, integrand constant: no quadrature.
      * i.i.d. cosine    -- abc_direct over the full circle.
      * periodic r = 0   -- deterministic lattice zeros counted exactly, plus
        quadrature of the reduced factor (abc_reduced); cosine additionally
        excises n^{-1/3} windows where the reduced A touches zero.
      * periodic trig r != 0  -- abc_closed with lattice windows excised.
      * periodic cosine r != 0 -- abc_direct with the same windows.

    The error estimate is |I(2P) - I(P)| from panel doubling plus the excised
    mass estimate (n/pi per unit length, the circle-average density scale).
    """
    config = config or QuadConfig()
    model = sample.model
    n = sample.n

    if model.dep == "iid" and model.kind == "trig":
        A0, C0 = _iid_constants("trig", n)
        value = 2.0 * math.sqrt(C0 / A0)
        return KacRiceResult(
            value=value,
            abs_error_estimate=0.0,
            panels_used=0,
            nodes_per_panel=0,
        )

    det_zeros = 0
    windows, _ = _exclusion_windows(sample, config)

    if model.dep == "periodic":
        dec = decompose_degree(n, model.ell)
        if dec.r == 0:
            if dec.m == 1:
                # periodicity is vacuous: fall through to the direct route
                abc = lambda xs: abc_direct(sample, xs)  # noqa: E731
            else:
                det_zeros = dec.ell * (dec.m - 1)
                abc = lambda xs: abc_reduced(sample, xs)  # noqa: E731
        elif model.kind == "trig":
            abc = lambda xs: abc_closed(sample, xs)  # noqa: E731
        else:
            abc = lambda xs: abc_direct(sample, xs)  # noqa: E731
    else:
        abc = lambda xs: abc_direct(sample, xs)  # noqa: E731

    func = lambda xs: abc(xs).integrand()  # noqa: E731

    intervals, cuts = _excise(0.0, TWO_PI, windows)
    excluded_len = sum(b - a for a, b in cuts)
    # 2n zeros per 2 pi gives the average-density scale n/pi; the true window
    # mass is of this order (not a pointwise bound -- the density spikes there)
    mass_est = excluded_len * n / math.pi

    n_panels = max(config.min_panels, config.panels_per_degree * max(n, 1))
    value, panels_used = _integrate_panels(
        func, intervals, n_panels, config.nodes_per_panel
    )
    value2, _ = _integrate_panels(
        func, intervals, 2 * n_panels, config.nodes_per_panel
    )
    err = abs(value2 - value) + mass_est

    total = det_zeros + value2
    if total > 2.0 * n + 0.5:
        raise FloatingPointError(
            f"Kac-Rice total {total:.3f} exceeds the 2n ceiling for n={n}"
        )
    return KacRiceResult(
        value=value2,
        abs_error_estimate=err,
        panels_used=panels_used * 2,
        nodes_per_panel=config.nodes_per_panel,
        excluded_windows=tuple(cuts),
        excluded_mass_estimate=mass_est,
        deterministic_zeros=det_zeros,
    )


def expected_zeros_exact_r0(n: int, ell: int) -> float:
    """Closed-form E[N(0, 2 pi)] for the periodic trig model with ell | n+1.

    Deterministic lattice zeros contribute n + 1 - ell; the reduced factor is
    stationary with A = ell, C = ell (3 n^2 + ell^2 - 1)/12, so its Kac-Rice
    integral is 2 sqrt(C/A) = sqrt(n^2 + (ell^2 - 1)/3).
    """
    dec = decompose_degree(n, ell)
    if dec.r != 0:
        raise ValueError(f"n={n} is not of the form ell*m - 1 for ell={ell}")
    if dec.m == 1 and ell > 1:
        # no repetition actually occurs; the i.i.d. formula applies instead
        raise ValueError("m = 1 leaves the coefficients i.i.d.; no closed form")
    return (n + 1 - ell) + math.sqrt(n * n + (ell * ell - 1) / 3.0)


# ---------------------------------------------------------------------------
# Limit integrands (asymptotic shapes used by the constants module and tests)
# ---------------------------------------------------------------------------


def limit_integrand_g(ell: int, r: int, s, t) -> np.ndarray:
    """Integrand of the r != 0 trig limit constant on (0, pi)^2.

    g(s, t) = sqrt(1 + r (ell - r) sin^2 s / [(ell - r) sin^2 t
                                              + r sin^2(s + t)]^2).
    """
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    den = (ell - r) * np.sin(t) ** 2 + r * np.sin(s + t) ** 2
    den = np.maximum(den * den, 1e-300)
    return np.sqrt(1.0 + r * (ell - r) * np.sin(s) ** 2 / den)


def limit_integrand_fpm(ell: int, n: int, x, sign: int) -> np.ndarray:
    """f_n^{+/-}(x) = sqrt(1 - u_ell^2) / (1 +/- u_ell cos(n x)).

    The large-n Kac-Rice density of the reduced periodic cosine model, up to
    the factor n/2; its circle averages tend to 1/2.
    """
    x = np.asarray(x, dtype=float)
    u = u_ell(ell, x)
    den = 1.0 + sign * u * np.cos(n * x)
    den = np.maximum(den, 1e-300)
    return np.sqrt(np.maximum(1.0 - u * u, 0.0)) / den
