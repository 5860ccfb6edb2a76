"""Quantitative obstruction probe for dimension-free solution bounds.

A scalar profile with a doubly logarithmic radial factor has a conjugate
derivative whose coefficient sums, over diagonal truncation points, drift
like ln ln n.  The best uniform constant fit to those sums therefore has
unbounded sup deviation as the truncation grows, which is the obstruction
the scan tabulates.  All evaluations stay inside |zeta| < 0.6 where the
closed forms are real-analytic off the origin.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

DOMAIN_RADIUS = 0.6


def _domain(zeta, name: str = "zeta") -> complex:
    z = complex(zeta)
    if abs(z) >= DOMAIN_RADIUS:
        raise ValueError(f"{name} must satisfy |{name}| < {DOMAIN_RADIUS}, got |{name}| = {abs(z)}")
    return z


def _positive_int(p) -> int:
    if not isinstance(p, int) or isinstance(p, bool) or p < 1:
        raise ValueError(f"p must be a positive integer, got {p!r}")
    return p


def lambda_fn(zeta, p: int) -> complex:
    """Profile zeta^p ln ln |zeta|^(-2), extended by zero at the origin.

    On |zeta| < 0.6 the inner logarithm exceeds 1, so the outer one is
    real and positive.
    """
    z = _domain(zeta)
    _positive_int(p)
    if z == 0:
        return 0j
    inner = -2.0 * math.log(abs(z))
    return z**p * math.log(inner)


def phi_fn(zeta, p: int) -> complex:
    """Conjugate derivative of the profile: zeta^p / (conj(zeta) ln |zeta|^2).

    Extended by zero at the origin; satisfies |phi| <= |zeta|^(p-1) on the
    domain because the log factor exceeds 1 in modulus there.
    """
    z = _domain(zeta)
    _positive_int(p)
    if z == 0:
        return 0j
    return z**p / (z.conjugate() * (2.0 * math.log(abs(z))))


def _as_support(point, name: str) -> dict[int, complex]:
    if isinstance(point, dict):
        return {int(nu): complex(v) for nu, v in point.items()}
    try:
        seq = list(point)
    except TypeError:
        raise ValueError(f"{name} must be a mapping or a sequence") from None
    return {i + 1: complex(v) for i, v in enumerate(seq)}


def form_eval(z, xi, p: int) -> complex:
    """Antilinear pairing sum of phi over the coordinates of z against xi.

    z and xi are finite-support points given as index->value mappings or as
    sequences (1-based implicit indices).  Every coordinate of z must lie
    in the evaluation domain.
    """
    _positive_int(p)
    zs = _as_support(z, "z")
    xs = _as_support(xi, "xi")
    for nu, zv in zs.items():
        _domain(zv, f"z_{nu}")
    total = 0j
    for nu, zv in zs.items():
        xv = xs.get(nu)
        if xv:
            total += phi_fn(zv, p) * xv.conjugate()
    return total


@dataclass(frozen=True)
class CxConfig:
    """Scan configuration: exponent, ball radius, truncation sizes.

    n_grid, when given, records per-row grid sizes for table consumers; the
    scan itself is closed-form and does not consume it.
    """

    p: int
    big_r: float
    n_list: tuple[int, ...]
    n_grid: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        _positive_int(self.p)
        if not 0 < 2 * self.big_r < DOMAIN_RADIUS:
            raise ValueError("need 0 < 2R < 0.6")
        ns = tuple(int(n) for n in self.n_list)
        if not ns or any(n < 1 for n in ns):
            raise ValueError("n_list must be nonempty positive integers")
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError("n_list must be strictly ascending")
        object.__setattr__(self, "n_list", ns)
        ng = tuple(int(n) for n in self.n_grid)
        if ng and len(ng) != len(ns):
            raise ValueError("n_grid must be empty or match n_list in length")
        object.__setattr__(self, "n_grid", ng)


@dataclass(frozen=True)
class ScanRow:
    """One truncation size with its best constant fit and sup deviation."""

    n: int
    a_best: float
    deviation: float


def _profile_level(big_r: float, p: int, n: int) -> float:
    # ln ln of R^(-2) n^(2/p), the diagonal profile sum per unit R^p
    return math.log(math.log(big_r ** -2.0 * n ** (2.0 / p)))


def divergence_scan(cfg: CxConfig) -> list[ScanRow]:
    """Best uniform constant against the diagonal profile sums, per size.

    For each N the levels L_n, n = 1..N, are fitted by the midpoint
    constant (max + min)/2, which minimizes the sup deviation for a one
    parameter fit; the deviation column is R^p (max - min)/2.  The levels
    increase in n, so the deviation grows without bound along N.
    """
    rows: list[ScanRow] = []
    rp = cfg.big_r ** cfg.p
    for n_max in cfg.n_list:
        levels = [_profile_level(cfg.big_r, cfg.p, n) for n in range(1, n_max + 1)]
        lo, hi = min(levels), max(levels)
        rows.append(ScanRow(n_max, (hi + lo) / 2, rp * (hi - lo) / 2))
    return rows


def homogeneous_projection(zeta, p: int, samples: int = 256) -> complex:
    """Phase average of the profile against the degree-p character.

    Equals lambda_fn(zeta) because the profile is exactly homogeneous of
    degree p in the phase; the periodic trapezoid average converges
    spectrally, so the test tolerance can sit at machine level.
    """
    _positive_int(p)
    z = _domain(zeta)
    total = 0j
    for k in range(samples):
        t = k / samples
        rot = cmath.exp(2j * math.pi * t)
        total += cmath.exp(-2j * math.pi * p * t) * lambda_fn(rot * z, p)
    return total / samples


@dataclass(frozen=True)
class SmoothnessProbe:
    """Finite-difference derivative magnitudes of phi along a radial
    sequence: order p-1 stays bounded, order p grows."""

    p: int
    radii: tuple[float, ...]
    low_order: tuple[float, ...]
    top_order: tuple[float, ...]


def _fd_derivative(p: int, order: int, t: float, h: float) -> float:
    if order == 0:
        return abs(phi_fn(t, p))
    vals = [phi_fn(t + (k - order / 2) * h, p) for k in range(order + 1)]
    coeffs = [(-1) ** (order - k) * math.comb(order, k) for k in range(order + 1)]
    return abs(sum(c * v for c, v in zip(coeffs, vals)) / h**order)


def smoothness_probe(
    p: int,
    radii: tuple[float, ...] = (1e-2, 1e-3, 1e-4),
    step_frac: float = 0.01,
) -> SmoothnessProbe:
    """Central-difference regularity probe at real points approaching 0."""
    _positive_int(p)
    low = tuple(_fd_derivative(p, p - 1, t, step_frac * t) for t in radii)
    top = tuple(_fd_derivative(p, p, t, step_frac * t) for t in radii)
    return SmoothnessProbe(p, tuple(radii), low, top)
