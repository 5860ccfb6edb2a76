"""Torus-orbit Fourier analysis and Fejer averaging.

A point with s nonzero coordinates generates an s-torus orbit by independent
rotations of those coordinates.  Functions on the ball restrict to the orbit;
their Fourier components along it are indexed by signed integer vectors over
the support.  Component k extends off the orbit as the monomial
prod (w_nu/z_nu)^(k_nu), with negative entries acting through conjugates, so
a component set evaluates anywhere the base coordinates are nonzero.

Fejer (Cesaro) averaging multiplies component k by prod max(0, 1-|k_nu|/j).
On a sampled grid this is circular convolution with the classical Fejer
kernel as long as the grid resolves every weighted mode (grid > 2(j-1)), and
then positivity and non-expansion hold exactly up to rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable

import numpy as np

from .delta import Point
from .multiindex import SignedIndex

DROP_THRESHOLD = 1e-14
MAX_ORBIT_DIMS = 4

Field = Callable[[Point], complex]


def fejer_coeff(k: SignedIndex, j: int) -> float:
    """Triangular weight prod max(0, 1 - |k_nu|/j) at averaging order j."""
    if j < 1:
        raise ValueError("j must be at least 1")
    w = 1.0
    for _, exp in k:
        w *= max(0.0, 1.0 - abs(exp) / j)
        if w == 0.0:
            return 0.0
    return w


def rotate(z: Point, angles: dict[int, float]) -> Point:
    """Rotate each coordinate nu of z by exp(i * angles[nu])."""
    zd = z.as_dict()
    return Point.from_dict(
        {nu: w * complex(np.exp(1j * angles.get(nu, 0.0))) for nu, w in zd.items()}
    )


@dataclass(frozen=True)
class SampledField:
    """Field values over the full torus orbit grid of a base point.

    `values` has one axis per nonzero base coordinate (in increasing
    coordinate order), each of length `grid`; entry (i_1,...,i_s) is the value
    at the base rotated by angles 2*pi*i/grid.
    """

    base: Point
    grid: int
    values: np.ndarray

    @property
    def axes(self) -> tuple[int, ...]:
        return self.base.support


def sample_orbit(v: Field, z: Point, grid: int) -> SampledField:
    """Tabulate v over the torus orbit of z on a uniform angle grid."""
    if grid < 1:
        raise ValueError("grid must be positive")
    axes = z.support
    if len(axes) > MAX_ORBIT_DIMS:
        raise ValueError(f"orbit dimension {len(axes)} exceeds {MAX_ORBIT_DIMS}")
    zd = z.as_dict()
    phases = np.exp(2j * np.pi * np.arange(grid) / grid)
    values = np.empty((grid,) * len(axes), dtype=complex)
    for idx in np.ndindex(*values.shape):
        w = Point.from_dict(
            {nu: zd[nu] * complex(phases[i]) for nu, i in zip(axes, idx)}
        )
        values[idx] = v(w)
    return SampledField(z, grid, values)


def fourier_component(v: Field, z: Point, k: SignedIndex, grid: int) -> complex:
    """Fourier component of v along the torus orbit of z at signed index k.

    Zero when k involves a coordinate outside the support of z (the orbit
    does not move it, so no oscillation in that direction survives the
    average).  `grid` must exceed 2*max|k_nu| so the target mode cannot
    collide with its reflection.
    """
    axes = z.support
    if any(nu not in axes for nu, _ in k):
        return 0j
    if grid <= 2 * k.max_abs:
        raise ValueError("grid must exceed twice the largest frequency")
    field = sample_orbit(v, z, grid)
    kvec = [k.get(nu) for nu in axes]
    total = 0j
    for idx in np.ndindex(*field.values.shape):
        phase = sum(ki * i for ki, i in zip(kvec, idx))
        total += field.values[idx] * complex(np.exp(-2j * np.pi * phase / grid))
    return total / grid ** len(axes)


@dataclass(frozen=True)
class FourierComponentSet:
    """Finitely many orbit Fourier components anchored at a base point."""

    base: Point
    max_abs: int
    components: dict[SignedIndex, complex]

    def component(self, k: SignedIndex) -> complex:
        return self.components.get(k, 0j)

    def eval(self, w: Point, j: int | None = None) -> complex:
        """Evaluate the (optionally Fejer-weighted) component sum at w.

        Component k contributes c_k * prod (w_nu/z_nu)^(k_nu), negative
        entries acting on conjugates; on the orbit of the base this is the
        plain Fourier sum.
        """
        zd = self.base.as_dict()
        wd = w.as_dict()
        total = 0j
        for k, c in self.components.items():
            weight = 1.0 if j is None else fejer_coeff(k, j)
            if weight == 0.0:
                continue
            term = complex(c) * weight
            for nu, exp in k:
                ratio = wd.get(nu, 0j) / zd[nu]
                term *= ratio**exp if exp > 0 else ratio.conjugate() ** (-exp)
            total += term
        return total


def extract_components(v: Field, z: Point, max_abs: int, grid: int) -> FourierComponentSet:
    """All orbit Fourier components of v at z with every |k_nu| <= max_abs.

    One FFT pass over the sampled orbit; `grid` must exceed 2*max_abs so the
    signed frequencies in range occupy distinct residues.  Components below
    1e-14 in magnitude are dropped.
    """
    if max_abs < 0:
        raise ValueError("max_abs must be nonnegative")
    if grid <= 2 * max_abs:
        raise ValueError("grid must exceed 2*max_abs")
    field = sample_orbit(v, z, grid)
    s = len(field.axes)
    fhat = np.fft.fftn(field.values) / grid**s
    comps: dict[SignedIndex, complex] = {}
    for kvec in product(range(-max_abs, max_abs + 1), repeat=s):
        c = complex(fhat[tuple(m % grid for m in kvec)])
        if abs(c) >= DROP_THRESHOLD:
            k = SignedIndex.from_dict(
                {nu: m for nu, m in zip(field.axes, kvec) if m != 0}
            )
            comps[k] = c
    return FourierComponentSet(z, max_abs, comps)


def cesaro_mean(comps: FourierComponentSet, w: Point, j: int) -> complex:
    """Fejer-weighted component sum of order j evaluated at w."""
    return comps.eval(w, j=j)


def fejer_mean_samples(values: np.ndarray, j: int) -> np.ndarray:
    """Fejer mean of order j of a sampled torus field, axis by axis.

    Multiplies FFT mode m by max(0, 1-|m|/j) on every axis (signed residues;
    for even length the Nyquist mode counts as -n/2).  Equals circular
    convolution with the nonnegative Fejer kernel whenever every axis length
    exceeds 2(j-1), which makes positivity and non-expansion exact for real
    input.  Real input comes back real.
    """
    if j < 1:
        raise ValueError("j must be at least 1")
    vals = np.asarray(values)
    real_in = np.isrealobj(vals)
    spec = np.fft.fftn(vals)
    for axis, n in enumerate(vals.shape):
        m = np.fft.fftfreq(n, d=1.0 / n)
        w = np.clip(1.0 - np.abs(m) / j, 0.0, None)
        shape = [1] * vals.ndim
        shape[axis] = n
        spec = spec * w.reshape(shape)
    out = np.fft.ifftn(spec)
    return out.real if real_in else out
