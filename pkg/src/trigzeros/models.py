"""Coefficient models for random trigonometric and cosine polynomials.

A degree-n sample is

    T_n(x) = sum_{j=0}^{n} a_j cos(jx) + b_j sin(jx),

with the cosine kind fixing b = 0.  Coefficients are centered Gaussians
with a common standard deviation sigma, either independent ("iid") or
ell-periodic ("periodic"): a_{j+ell} = a_j for all j, so a periodic
sample carries only 2*ell (trig) or ell (cosine) independent values and
every later entry is a bit-exact copy of its representative.

Periodic degrees decompose as

    n = ell*m - 1 + r,    0 <= r <= ell - 1,    m >= 1,

that is m = (n+1) // ell and r = (n+1) % ell.  r = 0 exactly when ell
divides n+1; that case factors algebraically (trigpoly.reduce_periodic)
and carries n+1-ell deterministic real zeros.

Reproducibility: per-trial seeds are derived with mix64(), a splitmix64
fold of (master_seed, degree, trial_index).  Samples are drawn from a
counter-based Philox generator keyed by the folded seed, so any single
trial of any experiment can be regenerated in isolation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

KINDS = ("trig", "cosine")
DEPENDENCIES = ("iid", "periodic")

_MASK64 = (1 << 64) - 1


def splitmix64(state: int) -> int:
    """One splitmix64 step: the standard bijective 64-bit finalizer."""
    z = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def mix64(*keys: int) -> int:
    """Fold integer keys into one 64-bit seed.

    acc_0 = splitmix64(0), acc_{i+1} = splitmix64(acc_i XOR key_i).
    The fold is order-sensitive, so mix64(seed, n, trial) yields a
    distinct stream per (experiment seed, degree, trial index).
    """
    acc = splitmix64(0)
    for k in keys:
        acc = splitmix64(acc ^ (int(k) & _MASK64))
    return acc


@dataclass(frozen=True)
class PeriodDecomposition:
    """Degree split n = ell*m - 1 + r with 0 <= r < ell, m >= 1."""

    n: int
    ell: int
    m: int
    r: int


def decompose_degree(n: int, ell: int) -> PeriodDecomposition:
    """Split a degree against a coefficient period.

    Requires n >= ell - 1 so the sample holds at least one full period
    of coefficients (m >= 1).
    """
    if ell < 1:
        raise ValueError(f"period must be >= 1, got ell={ell}")
    if n < 1:
        raise ValueError(f"degree must be >= 1, got n={n}")
    if n < ell - 1:
        raise ValueError(
            f"degree n={n} holds fewer than one period of ell={ell} coefficients"
        )
    m, r = divmod(n + 1, ell)
    return PeriodDecomposition(n=n, ell=ell, m=m, r=r)


@dataclass(frozen=True)
class CoefficientModel:
    """Distribution of the coefficient vectors.

    kind  : "trig" (cosine and sine terms) or "cosine" (b = 0)
    dep   : "iid" or "periodic"
    ell   : coefficient period; required for periodic, None for iid
    sigma : common standard deviation of each Gaussian coefficient.
            Zero counts and Kac-Rice ratios are sigma-invariant; the
            field only scales sample amplitudes.
    """

    kind: str
    dep: str
    ell: Optional[int] = None
    sigma: float = 1.0


def validate_model(model: CoefficientModel) -> CoefficientModel:
    """Check model fields, returning the model unchanged if coherent."""
    if model.kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {model.kind!r}")
    if model.dep not in DEPENDENCIES:
        raise ValueError(f"dep must be one of {DEPENDENCIES}, got {model.dep!r}")
    if model.dep == "periodic":
        if model.ell is None or int(model.ell) < 1:
            raise ValueError(f"periodic model needs ell >= 1, got ell={model.ell}")
    elif model.ell is not None:
        raise ValueError("iid model must not carry a period; leave ell=None")
    sigma = float(model.sigma)
    if not np.isfinite(sigma) or sigma <= 0.0:
        raise ValueError(f"sigma must be finite and positive, got {model.sigma}")
    return model


@dataclass(frozen=True)
class PolySample:
    """One drawn coefficient vector pair; arrays are read-only views."""

    model: CoefficientModel
    n: int
    seed: int
    a: np.ndarray
    b: np.ndarray


def sample_coefficients(model: CoefficientModel, n: int, seed: int) -> PolySample:
    """Draw one sample of the model at degree n.

    Deterministic in (model, n, seed).  Draw order is fixed: the a
    vector (or its ell-long base) first, then b for the trig kind, so
    identical seeds reproduce identical samples regardless of caller.
    """
    validate_model(model)
    if n < 1:
        raise ValueError(f"degree must be >= 1, got n={n}")
    rng = np.random.Generator(np.random.Philox(key=int(seed) & _MASK64))
    if model.dep == "periodic":
        dec = decompose_degree(n, int(model.ell))
        base_a = model.sigma * rng.standard_normal(dec.ell)
        # tile copies bits exactly, so a[j] IS a[j % ell] to the last ulp
        a = np.tile(base_a, dec.m + 1)[: n + 1]
        if model.kind == "trig":
            base_b = model.sigma * rng.standard_normal(dec.ell)
            b = np.tile(base_b, dec.m + 1)[: n + 1]
        else:
            b = np.zeros(n + 1)
    else:
        a = model.sigma * rng.standard_normal(n + 1)
        if model.kind == "trig":
            b = model.sigma * rng.standard_normal(n + 1)
        else:
            b = np.zeros(n + 1)
    a = np.ascontiguousarray(a)
    b = np.ascontiguousarray(b)
    a.flags.writeable = False
    b.flags.writeable = False
    return PolySample(model=model, n=int(n), seed=int(seed), a=a, b=b)
