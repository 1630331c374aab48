"""Evaluation kernels and algebraic structure of the sampled polynomials.

Evaluation routes
-----------------
evaluate / evaluate_derivative   chunked dense summation at arbitrary
                                 abscissae, O(n) per point.
evaluate_on_grid                 all values on a uniform offset grid
                                 x_i = 2 pi (i + offset)/N through one
                                 inverse FFT, O(N log N) total; exact
                                 coefficient folding covers N <= n.

Structure of ell-periodic samples
---------------------------------
Grouping j = k + ell*t and summing the geometric series in t gives the
exact identity

    sum_{t=0}^{M-1} cos((k + ell t)x)
        = phi_M(x) * cos((k + (M-1) ell/2) x),
    phi_M(x) = sin(M ell x/2) / sin(ell x/2),

and likewise with sin on both sides.  When ell | n+1 (r = 0, M = m for
every residue k) the whole sample factors as

    T_n(x) = phi_m(x) * T*(x),

where T* keeps one coefficient pair per residue class at the shifted
frequencies k + (m-1) ell/2.  Those frequencies are half-integers when
(m-1) ell is odd; they are stored as exact integer numerators over 2,
so reduction introduces no frequency rounding at all.  phi_m vanishes
at ell(m-1) points per full period - the deterministic zeros - and
extends to +-m across the removable singularities at the lattice
x = 2 k pi / ell.

The same grouping applied to the algebraic polynomial P(z) = sum a_j z^j
with an ell-periodic coefficient vector of length ell*m yields

    P(z) = (z^(ell m) - 1)/(z^ell - 1) * sum_{k<ell} a_k z^k,

so P always carries the ell(m-1) = n+1-ell unimodular roots of the
quotient factor, independent of the draw.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .models import CoefficientModel, PolySample, decompose_degree

# half-width of the removable-singularity windows, measured on |sin(.)|
SINGULARITY_EPS = 1e-8

_CHUNK_BUDGET = 4_000_000  # max elements per (points x frequencies) block


def _eval_series_freq(a, b, freqs, x):
    """sum_k a_k cos(f_k x) + b_k sin(f_k x), chunked over x."""
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty(x_arr.shape, dtype=float)
    use_b = b is not None and np.any(b)
    chunk = max(1, _CHUNK_BUDGET // max(len(freqs), 1))
    for lo in range(0, x_arr.size, chunk):
        ang = x_arr[lo:lo + chunk, None] * freqs[None, :]
        vals = np.cos(ang) @ a
        if use_b:
            vals += np.sin(ang) @ b
        out[lo:lo + chunk] = vals
    if np.ndim(x) == 0:
        return float(out[0])
    return out


def evaluate(sample: PolySample, x):
    """T_n at scalar or array x by direct summation."""
    freqs = np.arange(sample.n + 1, dtype=float)
    return _eval_series_freq(sample.a, sample.b, freqs, x)


def evaluate_derivative(sample: PolySample, x):
    """T_n' at scalar or array x.

    Termwise, T_n' has cosine coefficients j*b_j and sine coefficients
    -j*a_j, so the same summation kernel applies.
    """
    freqs = np.arange(sample.n + 1, dtype=float)
    return _eval_series_freq(freqs * sample.b, -freqs * sample.a, freqs, x)


def grid_nodes(num_nodes: int, offset: float = 0.5) -> np.ndarray:
    """The uniform grid x_i = 2 pi (i + offset)/N, i = 0..N-1.

    The default half-cell offset keeps 0 and 2 pi out of the scan.
    """
    if num_nodes < 1:
        raise ValueError(f"need at least one node, got {num_nodes}")
    return (2.0 * np.pi / num_nodes) * (np.arange(num_nodes) + offset)


def evaluate_on_grid(sample: PolySample, num_nodes: int, offset: float = 0.5) -> np.ndarray:
    """T_n at every node of grid_nodes(num_nodes, offset) via one IFFT.

    T(x_i) = Re sum_j c_j e^{i j x_i} with c_j = a_j - i b_j.  The
    offset enters as a per-coefficient phase twist; frequencies at or
    above the grid size fold onto j mod N exactly (e^{2 pi i j i/N}
    depends on j only through j mod N once the twist is applied).
    """
    N = int(num_nodes)
    if N < 1:
        raise ValueError(f"need at least one node, got {num_nodes}")
    c = sample.a - 1j * sample.b
    j = np.arange(c.size)
    d = c * np.exp((2j * np.pi * offset / N) * j)
    if c.size <= N:
        folded = np.zeros(N, dtype=complex)
        folded[: c.size] = d
    else:
        pad = (-c.size) % N
        folded = np.concatenate([d, np.zeros(pad, dtype=complex)]).reshape(-1, N).sum(axis=0)
    return N * np.fft.ifft(folded).real


def dirichlet_ratio(m: int, ell: int, x, eps: float = SINGULARITY_EPS):
    """phi_m(x) = sin(m ell x/2)/sin(ell x/2) with singularities removed.

    Writing x = 2 k pi/ell + t reduces the quotient exactly to
    (-1)^(k(m-1)) sin(m ell t/2)/sin(ell t/2), which is numerically
    stable because the small argument is evaluated directly.  Within
    |sin(ell t/2)| < eps the quadratic Taylor form m(1 - (m^2-1)s^2/6),
    s = ell t/2, replaces the quotient; at the lattice itself this is
    the continuous extension +-m.
    """
    if m < 1 or ell < 1:
        raise ValueError(f"need m >= 1 and ell >= 1, got m={m}, ell={ell}")
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    period = 2.0 * np.pi / ell
    k = np.rint(x_arr / period).astype(np.int64)
    t = x_arr - k * period
    s = 0.5 * ell * t
    sin_s = np.sin(s)
    out = np.empty(x_arr.shape, dtype=float)
    near = np.abs(sin_s) < eps
    far = ~near
    out[far] = np.sin(m * s[far]) / sin_s[far]
    if near.any():
        ss = s[near]
        out[near] = m * (1.0 - (m * m - 1.0) * ss * ss / 6.0)
    if (m - 1) % 2 == 1:
        out[(k % 2) == 1] *= -1.0
    if np.ndim(x) == 0:
        return float(out[0])
    return out


def dirichlet_ratio_deriv(m: int, ell: int, x, eps: float = SINGULARITY_EPS):
    """d/dx of dirichlet_ratio(m, ell, .), stable across the lattice.

    Away from the lattice, with s = ell t/2 as in dirichlet_ratio,

        phi_m'(x) = sign * (ell/2) [m cos(ms) sin(s) - sin(ms) cos(s)] / sin(s)^2;

    inside the window the odd Taylor term -sign * m(m^2-1) ell^2 t / 12
    is used (phi_m' vanishes at the lattice points themselves).
    """
    if m < 1 or ell < 1:
        raise ValueError(f"need m >= 1 and ell >= 1, got m={m}, ell={ell}")
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    period = 2.0 * np.pi / ell
    k = np.rint(x_arr / period).astype(np.int64)
    t = x_arr - k * period
    s = 0.5 * ell * t
    sin_s = np.sin(s)
    out = np.empty(x_arr.shape, dtype=float)
    near = np.abs(sin_s) < eps
    far = ~near
    sf = s[far]
    out[far] = 0.5 * ell * (m * np.cos(m * sf) * sin_s[far] - np.sin(m * sf) * np.cos(sf)) / (sin_s[far] ** 2)
    if near.any():
        out[near] = -m * (m * m - 1.0) * ell * ell * t[near] / 12.0
    if (m - 1) % 2 == 1:
        out[(k % 2) == 1] *= -1.0
    if np.ndim(x) == 0:
        return float(out[0])
    return out


def trig_sum_cos(r: int, p: int, q: float, x, eps: float = SINGULARITY_EPS):
    """sum_{j=0}^{r-1} cos((2 p j + q) x) in closed form.

    Equals sin(r p x) cos(((r-1) p + q) x)/sin(p x) away from the zeros
    of sin(p x); within |sin(p x)| < eps the literal r-term sum is used,
    which IS the continuous value.
    """
    if r < 1 or p < 1:
        raise ValueError(f"need r >= 1 and p >= 1, got r={r}, p={p}")
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    sin_p = np.sin(p * x_arr)
    out = np.empty(x_arr.shape, dtype=float)
    near = np.abs(sin_p) < eps
    far = ~near
    xf = x_arr[far]
    out[far] = np.sin(r * p * xf) * np.cos(((r - 1) * p + q) * xf) / sin_p[far]
    if near.any():
        freqs = 2.0 * p * np.arange(r) + q
        out[near] = np.cos(x_arr[near, None] * freqs[None, :]).sum(axis=1)
    if np.ndim(x) == 0:
        return float(out[0])
    return out


def trig_sum_sin(r: int, p: int, q: float, x, eps: float = SINGULARITY_EPS):
    """sum_{j=0}^{r-1} sin((2 p j + q) x); closed form as trig_sum_cos."""
    if r < 1 or p < 1:
        raise ValueError(f"need r >= 1 and p >= 1, got r={r}, p={p}")
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    sin_p = np.sin(p * x_arr)
    out = np.empty(x_arr.shape, dtype=float)
    near = np.abs(sin_p) < eps
    far = ~near
    xf = x_arr[far]
    out[far] = np.sin(r * p * xf) * np.sin(((r - 1) * p + q) * xf) / sin_p[far]
    if near.any():
        freqs = 2.0 * p * np.arange(r) + q
        out[near] = np.sin(x_arr[near, None] * freqs[None, :]).sum(axis=1)
    if np.ndim(x) == 0:
        return float(out[0])
    return out


def u_ell(ell: int, x, eps: float = SINGULARITY_EPS):
    """Normalized kernel u_ell(x) = sin(ell x)/(ell sin x).

    Removable singularities at multiples of pi: u_ell -> 1 at even ones
    (x -> 0) and (-1)^(ell+1) at odd ones (x -> pi).  |u_ell| <= 1
    everywhere, with equality only at those points.
    """
    if ell < 1:
        raise ValueError(f"need ell >= 1, got ell={ell}")
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    k = np.rint(x_arr / np.pi).astype(np.int64)
    t = x_arr - k * np.pi
    sin_t = np.sin(t)
    out = np.empty(x_arr.shape, dtype=float)
    near = np.abs(sin_t) < eps
    far = ~near
    out[far] = np.sin(ell * t[far]) / (ell * sin_t[far])
    if near.any():
        tt = t[near]
        out[near] = 1.0 - (ell * ell - 1.0) * tt * tt / 6.0
    if (ell - 1) % 2 == 1:
        out[(k % 2) == 1] *= -1.0
    if np.ndim(x) == 0:
        return float(out[0])
    return out


@dataclass(frozen=True)
class ReducedSample:
    """The factor T* of an r = 0 periodic sample: T_n = phi_m * T*.

    Holds one coefficient pair per residue class k = 0..ell-1 at the
    shifted frequency k + (m-1) ell/2.  freq_twice stores the exact
    integer numerators 2k + (m-1) ell; dividing an integer float by two
    is exact, so frequencies carry no representation error.
    """

    model: CoefficientModel
    n: int
    ell: int
    m: int
    freq_twice: np.ndarray
    a: np.ndarray
    b: np.ndarray

    def frequencies(self) -> np.ndarray:
        return self.freq_twice.astype(float) / 2.0

    def evaluate(self, x):
        return _eval_series_freq(self.a, self.b, self.frequencies(), x)

    def evaluate_derivative(self, x):
        f = self.frequencies()
        return _eval_series_freq(f * self.b, -f * self.a, f, x)


def reduce_periodic(sample: PolySample) -> ReducedSample:
    """Split an r = 0 periodic sample into its random factor T*.

    Only defined when ell divides n+1 (r = 0); the identity
    T_n(x) = dirichlet_ratio(m, ell, x) * T*(x) then holds for all x.
    """
    model = sample.model
    if model.dep != "periodic":
        raise ValueError("reduction needs a periodic model")
    dec = decompose_degree(sample.n, int(model.ell))
    if dec.r != 0:
        raise ValueError(
            f"no reduced form: ell={dec.ell} does not divide n+1={sample.n + 1} (r={dec.r})"
        )
    ell, m = dec.ell, dec.m
    a = np.ascontiguousarray(sample.a[:ell])
    b = np.ascontiguousarray(sample.b[:ell])
    a.flags.writeable = False
    b.flags.writeable = False
    freq_twice = 2 * np.arange(ell, dtype=np.int64) + (m - 1) * ell
    freq_twice.flags.writeable = False
    return ReducedSample(
        model=model, n=sample.n, ell=ell, m=m, freq_twice=freq_twice, a=a, b=b
    )


@dataclass(frozen=True)
class AlgebraicFactorization:
    """P(z) = quotient(z) * base_poly(z) for an ell-periodic vector.

    quotient(z) = (z^(ell m) - 1)/(z^ell - 1) = sum_{t<m} z^(ell t) and
    base_poly(z) = sum_{k<ell} base_k z^k.  The quotient's roots are the
    (ell m)-th roots of unity that are not ell-th roots of unity:
    exactly ell(m-1) = n+1-ell deterministic unimodular roots.
    """

    ell: int
    m: int
    n: int
    base: np.ndarray

    def base_poly(self, z):
        return np.polyval(self.base[::-1], z)

    def quotient(self, z, eps: float = SINGULARITY_EPS):
        """(z^(ell m) - 1)/(z^ell - 1), geometric-sum fallback near z^ell = 1."""
        z_arr = np.atleast_1d(np.asarray(z, dtype=complex))
        w = z_arr ** self.ell
        out = np.empty(z_arr.shape, dtype=complex)
        near = np.abs(w - 1.0) < eps
        far = ~near
        out[far] = (w[far] ** self.m - 1.0) / (w[far] - 1.0)
        if near.any():
            # literal geometric sum: exact at w = 1 and stable beside it
            acc = np.zeros(near.sum(), dtype=complex)
            wp = np.ones(near.sum(), dtype=complex)
            for _ in range(self.m):
                acc += wp
                wp *= w[near]
            out[near] = acc
        if np.ndim(z) == 0:
            return complex(out[0])
        return out

    def evaluate(self, z):
        return self.quotient(z) * self.base_poly(z)

    def deterministic_roots(self) -> np.ndarray:
        """The n+1-ell unimodular roots shared by every draw.

        Roots of z^(ell m) = 1 excluding those with z^ell = 1; the
        excluded indices are exactly the multiples of m.
        """
        j = np.arange(self.ell * self.m)
        j = j[(j % self.m) != 0]
        return np.exp(2j * np.pi * j / (self.ell * self.m))

    def as_dict(self) -> dict:
        roots = self.deterministic_roots()
        return {
            "ell": int(self.ell),
            "m": int(self.m),
            "n": int(self.n),
            "base": [float(c) for c in self.base],
            "deterministic_roots": [[float(z.real), float(z.imag)] for z in roots],
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.as_dict(), indent=indent)


def factorize_algebraic(a, ell: int) -> AlgebraicFactorization:
    """Factor the algebraic polynomial of an ell-periodic coefficient vector.

    The vector must have length ell*m and be exactly ell-periodic
    (sampled periodic vectors are bit-exact copies, so equality is
    checked without tolerance).
    """
    a_arr = np.asarray(a, dtype=float)
    if ell < 1:
        raise ValueError(f"need ell >= 1, got ell={ell}")
    if a_arr.ndim != 1 or a_arr.size == 0 or a_arr.size % ell != 0:
        raise ValueError(
            f"coefficient vector length {a_arr.size} is not a positive multiple of ell={ell}"
        )
    m = a_arr.size // ell
    base = np.ascontiguousarray(a_arr[:ell])
    if not np.array_equal(a_arr, np.tile(base, m)):
        raise ValueError("coefficient vector is not ell-periodic")
    base.flags.writeable = False
    return AlgebraicFactorization(ell=int(ell), m=int(m), n=int(a_arr.size - 1), base=base)
