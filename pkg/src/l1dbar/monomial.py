"""Monomial series on balls: evaluation, growth-weighted norms, extraction.

A series is a sparse map multi-index -> complex coefficient together with a
declared domain radius.  The weighted norm [h]_r weights coefficient k by
r^||k|| k^k / ||k||^||k||; it majorizes sup norms through the dominating
series and is the splitting criterion for the entire-part decomposition.

Extraction recovers coefficients of a black-box holomorphic function from
torus averages over a polydisc inside the ball (iterated trapezoid rule =
multidimensional DFT), divides by the polydisc monomial, and drops noise-level
results.  The rule is exact for polynomials of per-coordinate degree below the
grid size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .delta import Point, delta_enclose
from .multiindex import MultiIndex, enumerate_graded, log_coeff

DROP_THRESHOLD = 1e-14
MAX_EXTRACT_DIMS = 4


@dataclass(frozen=True)
class MonomialSeries:
    """Sparse monomial series with a declared domain radius.

    `provenance` records whether coefficients were given explicitly or
    recovered by quadrature; extracted series carry the recorded coefficient
    bound and the grade through which coefficients were kept, which together
    drive the rigorous evaluation tail bound.
    """

    coeffs: dict[MultiIndex, complex] = field(default_factory=dict)
    radius: float = math.inf
    provenance: str = "explicit"
    bound: float | None = None
    stored_grade: int | None = None

    def __post_init__(self) -> None:
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        if self.provenance not in ("explicit", "extracted"):
            raise ValueError("provenance must be 'explicit' or 'extracted'")

    @property
    def max_grade(self) -> int:
        return max((k.grade for k in self.coeffs), default=0)

    def sorted_indices(self) -> list[MultiIndex]:
        return sorted(self.coeffs, key=lambda k: (k.grade, k.pairs))


@dataclass(frozen=True)
class EvalResult:
    value: complex
    tail_bound: float


def eval_series(h: MonomialSeries, z: Point) -> EvalResult:
    """Evaluate the stored series at z, with a rigorous truncation tail bound.

    For an extracted series the tail over grades above `stored_grade` is
    bounded by the recorded coefficient bound times the enclosure width of the
    dominating series at z/R; explicit finite series evaluate exactly (zero
    tail).  Requires ||z|| < radius.
    """
    if z.l1_norm >= h.radius:
        raise ValueError("evaluation point must satisfy ||z|| < radius")
    zd = z.as_dict()
    value = 0j
    for k, c in h.coeffs.items():
        term = c
        for nu, exp in k:
            w = zd.get(nu, 0j)
            if w == 0:
                term = 0j
                break
            term *= w**exp
        value += term
    tail = 0.0
    if h.provenance == "extracted" and h.bound is not None and h.stored_grade is not None:
        enc = delta_enclose(1.0, z.scale(1.0 / h.radius), h.stored_grade)
        tail = h.bound * (enc.upper - enc.lower)
    return EvalResult(value, tail)


def bracket_norm(h: MonomialSeries, r: float) -> float:
    """Growth-weighted coefficient norm at radius r.

    sup over stored k of |a_k| r^||k|| k^k / ||k||^||k||, computed in log
    space through the graded coefficient.  Subadditive in the coefficients and
    absolutely homogeneous; monotone in r.
    """
    if r <= 0:
        raise ValueError("r must be positive")
    best = 0.0
    for k, c in h.coeffs.items():
        mag = abs(c)
        if mag == 0.0:
            continue
        val = math.exp(math.log(mag) + k.grade * math.log(r) - log_coeff(k)) if k.grade else mag
        best = max(best, val)
    return best


def coeff_bound(h: MonomialSeries, big_r: float) -> float:
    """Coefficient growth bound at radius big_r.

    Equals the bracket norm there; for a function bounded by M on the ball of
    radius big_r the true coefficients satisfy this bound with value at most
    M, which is what the extraction tests measure against ray-orbit sampling.
    """
    return bracket_norm(h, big_r)


def extract(
    hfun: Callable[[np.ndarray], complex],
    dims: int,
    radius: float,
    max_grade: int,
    grid: int | None = None,
) -> MonomialSeries:
    """Recover series coefficients of a black-box function by torus averaging.

    `hfun` receives a complex vector of length `dims` (coordinates 1..dims).
    Samples live on the product of circles |z_nu| = radius/(dims+1), whose
    radii sum to below the ball radius; the multidimensional DFT of the
    samples divided by the polydisc monomial gives the coefficients.  Exact
    for polynomials of per-coordinate degree < grid; `grid` must exceed
    `max_grade` (otherwise kept coefficients could alias) and defaults to
    2*max_grade + 1.  Results below 1e-14 in magnitude are dropped.  The
    returned series records the coefficient bound of what was kept at the
    declared radius and the extraction grade.
    """
    if not 1 <= dims <= MAX_EXTRACT_DIMS:
        raise ValueError(f"dims must be between 1 and {MAX_EXTRACT_DIMS}")
    if max_grade < 0:
        raise ValueError("max_grade must be nonnegative")
    if radius <= 0 or not math.isfinite(radius):
        raise ValueError("radius must be positive and finite")
    if grid is None:
        grid = 2 * max_grade + 1
    if grid <= max_grade:
        raise ValueError("grid must exceed max_grade (aliasing)")
    rho = radius / (dims + 1)
    t = np.arange(grid) / grid
    phases = np.exp(2j * np.pi * t)
    samples = np.empty((grid,) * dims, dtype=complex)
    for idx in np.ndindex(*samples.shape):
        zvec = np.array([rho * phases[i] for i in idx])
        samples[idx] = hfun(zvec)
    fhat = np.fft.fftn(samples) / grid**dims
    coeffs: dict[MultiIndex, complex] = {}
    for k in enumerate_graded(dims, max_grade):
        idx = tuple(k.get(nu) for nu in range(1, dims + 1))
        a = fhat[idx] / rho ** k.grade
        if abs(a) >= DROP_THRESHOLD:
            coeffs[k] = complex(a)
    out = MonomialSeries(coeffs, radius, "extracted", None, max_grade)
    return MonomialSeries(coeffs, radius, "extracted", bracket_norm(out, radius), max_grade)


def entire_split(
    h: MonomialSeries, r: float, epsilon: float
) -> tuple[MonomialSeries, list[MultiIndex]]:
    """Split off the part of h that is large in the bracket norm at radius r.

    Keeps exactly the indices with |a_k| r^||k|| k^k/||k||^||k|| >= epsilon;
    the kept part is returned as a series declared on the whole space, and by
    construction the remainder has bracket norm at r below epsilon (verified
    before returning).  Requires 0 < r < h.radius and epsilon > 0.
    """
    if not 0 < r < h.radius:
        raise ValueError("need 0 < r < radius")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    kept: dict[MultiIndex, complex] = {}
    dropped: dict[MultiIndex, complex] = {}
    for k, c in h.coeffs.items():
        single = MonomialSeries({k: c}, h.radius)
        if bracket_norm(single, r) >= epsilon:
            kept[k] = c
        else:
            dropped[k] = c
    psi = MonomialSeries(kept, math.inf, "explicit")
    remainder = MonomialSeries(dropped, h.radius)
    if bracket_norm(remainder, r) > epsilon * (1 + 1e-12):
        raise AssertionError("split remainder exceeds epsilon")
    kept_list = sorted(kept, key=lambda k: (k.grade, k.pairs))
    return psi, kept_list


def series_sub(a: MonomialSeries, b: MonomialSeries) -> MonomialSeries:
    """Difference of two series as an explicit series on the smaller ball."""
    coeffs = dict(a.coeffs)
    for k, c in b.coeffs.items():
        v = coeffs.get(k, 0j) - c
        if v == 0:
            coeffs.pop(k, None)
        else:
            coeffs[k] = v
    return MonomialSeries(coeffs, min(a.radius, b.radius))
