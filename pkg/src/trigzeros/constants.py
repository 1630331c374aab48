"""Limit constants of the expected-zero asymptotics, and the theory table.

The two families of constants are double integrals over a period square:

* ``compute_C(ell, r)`` -- the slope of E[zeros]/n for the block-periodic
  trig model whose degree leaves remainder r != 0:

      C = (1/pi^2) * int_0^pi int_0^pi sqrt(1 + r(ell-r) sin^2 s /
              [(ell-r) sin^2 t + r sin^2(s+t)]^2) ds dt.

  For r = 0 the square root collapses to 1 and C = 1 exactly.

* ``compute_K(ell)`` -- the analogous slope (relative to 2n/sqrt(3)) for
  cosine polynomials with palindromically identified blocks of length ell:

      K = (1/pi^2) * int_{t=0}^{pi} int_{s=0}^{pi/2}
              sqrt(1 + 3(1 - u_ell^2(s)) / (1 + u_ell(s) cos t)^2) ds dt,

  with u_ell(s) = sin(ell s)/(ell sin s).  K_1 = 1/2 exactly.

Both integrands are analytic except at isolated boundary corners where the
denominators vanish; panels graded dyadically toward every edge give
geometric convergence there.  ``compute_J`` and ``compute_I_alpha`` evaluate
the companion identities (J = 1 and I_alpha = pi^2/(sin a cos a)) that pin
down C's bounds and double as end-to-end checks of the quadrature machinery.

Values are cached on disk (JSON, atomic replace) keyed by integrand and grid,
since the graded grids are recomputed identically across runs.  Set
TRIGZEROS_CACHE to relocate the cache directory.
"""

from __future__ import annotations

import json
import math
import os
import tempfile

import numpy as np

from .models import CoefficientModel, decompose_degree
from .kacrice import limit_integrand_g
from .trigpoly import u_ell

_GRADE_LEVELS = 40
_NODES = 8


# ---------------------------------------------------------------------------
# Graded composite Gauss-Legendre grids
# ---------------------------------------------------------------------------


def _graded_edges(lo: float, hi: float, levels: int) -> np.ndarray:
    """Panel edges on [lo, hi], dyadically refined toward both endpoints."""
    width = hi - lo
    left = [lo + width * 0.5 ** (levels - j + 1) for j in range(levels)]
    right = [hi - width * 0.5 ** (j + 2) for j in range(levels - 1)]
    edges = [lo] + left + right + [hi]
    return np.array(edges)


def _graded_axis(lo: float, hi: float, levels: int, nodes: int):
    """Nodes/weights of composite GL on a dyadically graded partition."""
    z, w = np.polynomial.legendre.leggauss(nodes)
    edges = _graded_edges(lo, hi, levels)
    mid = 0.5 * (edges[1:] + edges[:-1])
    halfw = 0.5 * (edges[1:] - edges[:-1])
    xs = (mid[:, None] + halfw[:, None] * z[None, :]).ravel()
    ws = (halfw[:, None] * w[None, :]).ravel()
    return xs, ws


def _tensor_integral(func, s_range, t_range, levels: int, nodes: int) -> float:
    """integral of func(s, t) over s_range x t_range on the graded grid."""
    sx, sw = _graded_axis(*s_range, levels, nodes)
    tx, tw = _graded_axis(*t_range, levels, nodes)
    ss, tt = np.meshgrid(sx, tx, indexing="ij")
    vals = func(ss, tt)
    return float(sw @ vals @ tw)


def _tensor_with_error(func, s_range, t_range, levels: int, nodes: int):
    """Integral plus an error estimate from doubling the nodes per panel."""
    coarse = _tensor_integral(func, s_range, t_range, levels, nodes)
    fine = _tensor_integral(func, s_range, t_range, levels, 2 * nodes)
    return fine, abs(fine - coarse)


def _ridge_split_integral(func, levels: int, nodes: int) -> float:
    """integral of func over (0, pi)^2 with grading toward s + t = pi.

    The C/J/I integrands concentrate along the anti-diagonal (where
    sin(s + t) vanishes) as well as at the boundary.  Splitting the square
    into the two triangles s + t < pi and s + t > pi and mapping each onto a
    (s, w) square puts the ridge on a panel edge, where the dyadic grading
    already delivers geometric convergence:

        lower triangle:  t = (pi - s) w,        Jacobian pi - s
        upper triangle:  t = (pi - s) + s w,    Jacobian s
    """
    sx, sw = _graded_axis(0.0, math.pi, levels, nodes)
    wx, ww = _graded_axis(0.0, 1.0, levels, nodes)
    ss, wgrid = np.meshgrid(sx, wx, indexing="ij")
    lower = func(ss, (math.pi - ss) * wgrid) * (math.pi - ss)
    upper = func(ss, (math.pi - ss) + ss * wgrid) * ss
    return float(sw @ (lower + upper) @ ww)


def _ridge_split_with_error(func, levels: int, nodes: int):
    coarse = _ridge_split_integral(func, levels, nodes)
    fine = _ridge_split_integral(func, levels, 2 * nodes)
    return fine, abs(fine - coarse)


# ---------------------------------------------------------------------------
# Disk cache
# ---------------------------------------------------------------------------


def _cache_path() -> str:
    base = os.environ.get(
        "TRIGZEROS_CACHE", os.path.join(os.path.expanduser("~"), ".cache", "trigzeros")
    )
    return os.path.join(base, "constants.json")


def _cache_load() -> dict:
    try:
        with open(_cache_path(), "r", encoding="utf-8") as fh:
            data = json.load(fh)
        return data if isinstance(data, dict) else {}
    except (OSError, ValueError):
        return {}


def _cache_store(key: str, value: float, error: float) -> None:
    path = _cache_path()
    data = _cache_load()
    data[key] = {"value": value, "error": error}
    try:
        os.makedirs(os.path.dirname(path), exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), suffix=".tmp")
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(data, fh, sort_keys=True)
        os.replace(tmp, path)
    except OSError:
        pass  # caching is best-effort; recomputation is always available


def _cached(key: str):
    entry = _cache_load().get(key)
    if isinstance(entry, dict) and "value" in entry:
        return float(entry["value"])
    return None


# ---------------------------------------------------------------------------
# The constants
# ---------------------------------------------------------------------------


def compute_C(ell: int, r: int, use_cache: bool = True) -> float:
    """Limit of E[zeros]/n for the ell-periodic trig model with remainder r."""
    if ell < 1 or not 0 <= r < ell:
        raise ValueError(f"need 0 <= r < ell, got ell={ell}, r={r}")
    if r == 0:
        return 1.0  # integrand is identically 1
    key = f"C:{ell}:{r}:{_GRADE_LEVELS}:{_NODES}"
    if use_cache and (hit := _cached(key)) is not None:
        return hit
    value, err = _ridge_split_with_error(
        lambda s, t: limit_integrand_g(ell, r, s, t), _GRADE_LEVELS, _NODES
    )
    value /= math.pi**2
    if use_cache:
        _cache_store(key, value, err / math.pi**2)
    return value


def compute_J(ell: int, r: int) -> float:
    """Companion integral of compute_C; equals 1 for every 0 < r < ell."""
    if not 0 < r < ell:
        raise ValueError(f"need 0 < r < ell, got ell={ell}, r={r}")

    def integrand(s, t):
        den = (ell - r) * np.sin(t) ** 2 + r * np.sin(s + t) ** 2
        den = np.maximum(den, 1e-300)
        return math.sqrt(r * (ell - r)) * np.sin(s) / den

    value = _ridge_split_integral(integrand, _GRADE_LEVELS, _NODES)
    return value / math.pi**2


def compute_I_alpha(alpha: float) -> float:
    """int_0^pi int_0^pi sin s / (sin^2 a sin^2 t + cos^2 a sin^2(s+t)) ds dt.

    Equals pi^2 / (sin alpha cos alpha) for alpha in (0, pi/2).
    """
    if not 0.0 < alpha < math.pi / 2:
        raise ValueError("alpha must lie strictly inside (0, pi/2)")
    sa2 = math.sin(alpha) ** 2
    ca2 = math.cos(alpha) ** 2

    def integrand(s, t):
        den = sa2 * np.sin(t) ** 2 + ca2 * np.sin(s + t) ** 2
        return np.sin(s) / np.maximum(den, 1e-300)

    return _ridge_split_integral(integrand, _GRADE_LEVELS, _NODES)


def compute_K(ell: int, use_cache: bool = True) -> float:
    """Palindromic-block cosine slope relative to 2n/sqrt(3); K_1 = 1/2."""
    if ell < 1:
        raise ValueError(f"ell must be positive, got {ell}")
    if ell == 1:
        return 0.5  # u_1 == 1 makes the integrand identically 1
    key = f"K:{ell}:{_GRADE_LEVELS}:{_NODES}"
    if use_cache and (hit := _cached(key)) is not None:
        return hit

    def integrand(s, t):
        u = u_ell(ell, s)
        den = (1.0 + u * np.cos(t)) ** 2
        return np.sqrt(1.0 + 3.0 * (1.0 - u * u) / np.maximum(den, 1e-300))

    value, err = _tensor_with_error(
        integrand, (0.0, math.pi / 2), (0.0, math.pi), _GRADE_LEVELS, _NODES
    )
    value /= math.pi**2
    if use_cache:
        _cache_store(key, value, err / math.pi**2)
    return value


def poisson_average(u: float) -> float:
    """(1/pi) int_0^pi dt / (1 - u cos t), which equals 1/sqrt(1 - u^2).

    Machinery check: the graded axis must resolve the near-pole at t = 0 as
    |u| -> 1, the same boundary behavior the constants' integrands have.
    """
    if not -1.0 < u < 1.0:
        raise ValueError("u must lie strictly inside (-1, 1)")
    tx, tw = _graded_axis(0.0, math.pi, _GRADE_LEVELS, _NODES)
    vals = 1.0 / (1.0 - u * np.cos(tx))
    return float(np.dot(vals, tw)) / math.pi


def monte_carlo_C(
    ell: int,
    r: int,
    n_points: int = 10_000_000,
    seed: int = 0,
    chunk: int = 1_000_000,
):
    """Monte Carlo estimate of compute_C with a trustworthy standard error.

    The raw integrand spikes like 1/distance at the square's corners, which
    makes its *second* moment diverge -- a plain uniform average would report
    an understated stderr.  Sampling instead in smoothstep coordinates

        s = pi (3u^2 - 2u^3),   ds = 6 pi u (1 - u) du,

    (same for t) compresses the corners; the Jacobian vanishes linearly at
    the ends and cancels the spike, leaving a bounded integrand whose sample
    variance is finite and the reported mean +/- stderr honest.
    """
    if not 0 < r < ell:
        raise ValueError(f"need 0 < r < ell, got ell={ell}, r={r}")
    return _mc_smoothstep_square(
        lambda s, t: limit_integrand_g(ell, r, s, t),
        math.pi,
        math.pi,
        n_points,
        seed,
        chunk,
    )


def monte_carlo_K(
    ell: int,
    n_points: int = 10_000_000,
    seed: int = 0,
    chunk: int = 1_000_000,
):
    """Monte Carlo estimate of compute_K, same variance taming as above."""
    if ell < 1:
        raise ValueError(f"ell must be positive, got {ell}")

    def integrand(s, t):
        u = u_ell(ell, s)
        den = (1.0 + u * np.cos(t)) ** 2
        return np.sqrt(1.0 + 3.0 * (1.0 - u * u) / np.maximum(den, 1e-300))

    return _mc_smoothstep_square(
        integrand, math.pi / 2, math.pi, n_points, seed, chunk
    )


def _mc_smoothstep_square(func, s_hi, t_hi, n_points, seed, chunk):
    rng = np.random.default_rng(np.random.Philox(key=seed & (2**64 - 1)))
    norm = s_hi * t_hi / math.pi**2
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < n_points:
        take = min(chunk, n_points - done)
        u = rng.uniform(0.0, 1.0, take)
        v = rng.uniform(0.0, 1.0, take)
        s = s_hi * (3.0 * u * u - 2.0 * u**3)
        t = t_hi * (3.0 * v * v - 2.0 * v**3)
        jac = 36.0 * u * (1.0 - u) * v * (1.0 - v)  # (6 u (1-u)) (6 v (1-v))
        vals = func(s, t) * (jac * norm)
        total += float(vals.sum())
        total_sq += float((vals * vals).sum())
        done += take
    mean = total / n_points
    var = max(total_sq / n_points - mean * mean, 0.0)
    stderr = math.sqrt(var / n_points)
    return mean, stderr


# ---------------------------------------------------------------------------
# Theory table
# ---------------------------------------------------------------------------


def theoretical_mean(model: CoefficientModel, n: int):
    """(expected zero count on (0, 2 pi), order tag of the approximation).

    Tags: "exact" marks a closed form valid at every degree; the O tags give
    the error order of the asymptotic approximation returned.
    """
    if model.dep == "iid":
        if model.kind == "trig":
            return 2.0 * math.sqrt(n * (2 * n + 1) / 6.0), "exact"
        return 2.0 * n / math.sqrt(3.0), "o(n)"

    dec = decompose_degree(n, model.ell)
    if dec.m == 1:
        # the period exceeds the coefficient count: i.i.d. in disguise
        return theoretical_mean(
            CoefficientModel(kind=model.kind, dep="iid", sigma=model.sigma), n
        )
    if model.kind == "trig":
        if dec.r == 0:
            value = (n + 1 - dec.ell) + math.sqrt(
                n * n + (dec.ell**2 - 1) / 3.0
            )
            return value, "exact"
        return n * compute_C(dec.ell, dec.r), "O(n^(4/5))"
    # cosine
    if dec.r == 0:
        if dec.ell == 1:
            return 2.0 * n, "exact"
        return 2.0 * n, "O(n^(2/3))"
    raise ValueError(
        "no closed asymptotic is available for cosine polynomials with "
        f"partial trailing blocks (ell={model.ell}, n={n} leaves r={dec.r})"
    )
