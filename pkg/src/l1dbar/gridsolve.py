"""Numerical conjugate-derivative solvers: disc quadrature and grid least
squares.

One complex variable: the area-integral inverse of the conjugate derivative
over a disc, discretized by a midpoint polar rule after subtracting the
second-order Taylor model of the data at the target (value plus both first
Wirtinger derivatives); the subtracted model integrates in closed form.  The
rule is then exact for data affine in (zeta, conj zeta) and converges fast
for smooth data since the remaining integrand vanishes at the singularity.

Several variables: a cell-centered lattice on the l1 ball, the fourth-order
centered difference model of the conjugate derivative at every node with a
full stencil, and conjugate-gradient least squares on the normal equations.
Equations sit only at interior nodes while unknowns live on all active
nodes, so the system is underdetermined and consistent for smooth data: its
residual measures solver convergence, not discretization error.  The
discrete operator also has a large kernel (lattice holomorphic functions);
starting CG at zero picks the minimum-norm representative.  Accuracy of
anything assembled from these node values must be judged by an independent
residual of the assembled object.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ._kernels import csr_conj_transpose, csr_matvec, pompeiu_sums

VecFun = Callable[[np.ndarray], np.ndarray]


@dataclass
class PompeiuSolution:
    """Quadrature state for the disc solver; evaluation is on demand."""

    f: VecFun
    center: complex
    radius: float
    nodes: np.ndarray
    weights: np.ndarray
    fvals: np.ndarray
    fd_step: float

    def eval(self, z) -> np.ndarray:
        """Solution values at targets strictly inside the disc.

        The data callable is evaluated at four nearby points per target for
        the derivative model, so it must accept points slightly outside the
        disc as well (up to fd_step beyond the targets).
        """
        targets = np.atleast_1d(np.asarray(z, dtype=complex))
        scalar = np.isscalar(z) or np.asarray(z).ndim == 0
        h = self.fd_step
        fz = self.f(targets)
        fx = (self.f(targets + h) - self.f(targets - h)) / (2 * h)
        fy = (self.f(targets + 1j * h) - self.f(targets - 1j * h)) / (2 * h)
        a = (fx - 1j * fy) / 2
        b = (fx + 1j * fy) / 2
        s1, s2, s4 = pompeiu_sums(self.nodes, self.weights, self.fvals, targets)
        w_total = self.weights.sum()
        quad = s1 - fz * s2 - a * w_total - b * s4
        zc = np.conj(targets - self.center)
        u = -quad / math.pi + zc * fz - a * self.radius**2 - b * zc**2 / 2
        return complex(u[0]) if scalar else u


def pompeiu_solve_1d(
    f: VecFun,
    radius: float,
    center: complex = 0j,
    nr: int = 64,
    ntheta: int = 128,
    fd_step: float | None = None,
) -> PompeiuSolution:
    """Inverse of the conjugate derivative on a disc by singular quadrature.

    `f` must be vectorized over complex arrays.  Midpoint rule in radius and
    angle; `fd_step` (default radius/100) sets the centered-difference step
    for the local derivative model.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    if nr < 2 or ntheta < 4:
        raise ValueError("quadrature grid too small")
    if fd_step is None:
        fd_step = radius / 100.0
    r = (np.arange(nr) + 0.5) * (radius / nr)
    t = (np.arange(ntheta) + 0.5) * (2 * math.pi / ntheta)
    rr, tt = np.meshgrid(r, t, indexing="ij")
    nodes = (center + rr * np.exp(1j * tt)).ravel()
    weights = (rr * (radius / nr) * (2 * math.pi / ntheta)).ravel()
    fvals = np.asarray(f(nodes), dtype=complex)
    return PompeiuSolution(f, complex(center), float(radius), nodes, weights, fvals, fd_step)


def dbar_residual_1d(
    u: Callable[[np.ndarray], np.ndarray],
    f: VecFun,
    points: np.ndarray,
    step: float = 1e-4,
) -> float:
    """Max deviation of the centered-difference conjugate derivative of u
    from f over the given points."""
    pts = np.asarray(points, dtype=complex)
    ux = (u(pts + step) - u(pts - step)) / (2 * step)
    uy = (u(pts + 1j * step) - u(pts - 1j * step)) / (2 * step)
    dbar = (ux + 1j * uy) / 2
    return float(np.abs(dbar - f(pts)).max())


@dataclass
class BallGrid:
    """Cell-centered lattice restricted to the open l1 ball.

    `coords` holds the active points as complex vectors (row per point);
    `flat_to_active` maps a box lattice flat index to the active index or -1;
    `interior` flags points whose full +-1,+-2 stencil stays active on every
    real axis.
    """

    dim: int
    radius: float
    nodes_per_axis: int
    spacing: float
    coords: np.ndarray
    lattice: np.ndarray
    flat_to_active: np.ndarray
    strides: np.ndarray
    interior: np.ndarray

    @property
    def n_active(self) -> int:
        return self.coords.shape[0]

    @property
    def n_interior(self) -> int:
        return int(self.interior.sum())


def build_ball_grid(dim: int, radius: float, nodes_per_axis: int) -> BallGrid:
    """Lattice over the box [-radius, radius]^(2 dim) masked to the l1 ball."""
    if dim < 1:
        raise ValueError("dim must be at least 1")
    m = nodes_per_axis
    if m < 8:
        raise ValueError("need at least 8 nodes per axis for the wide stencil")
    if m ** (2 * dim) > 2 * 10**7:
        raise ValueError("grid too large; reduce nodes_per_axis or dim")
    spacing = 2 * radius / m
    axis = -radius + (np.arange(m) + 0.5) * spacing
    mesh = np.meshgrid(*([axis] * (2 * dim)), indexing="ij")
    flat = np.stack([g.ravel() for g in mesh], axis=1)
    zs = flat[:, 0::2] + 1j * flat[:, 1::2]
    norms = np.abs(zs).sum(axis=1)
    active_mask = norms < radius
    coords = zs[active_mask]
    lattice_full = np.stack(
        np.meshgrid(*([np.arange(m)] * (2 * dim)), indexing="ij"), axis=-1
    ).reshape(-1, 2 * dim)
    lattice = lattice_full[active_mask].astype(np.int64)
    flat_to_active = np.full(m ** (2 * dim), -1, dtype=np.int64)
    flat_to_active[np.nonzero(active_mask)[0]] = np.arange(coords.shape[0])
    strides = np.array([m ** (2 * dim - 1 - a) for a in range(2 * dim)], dtype=np.int64)
    flat_idx = lattice @ strides
    interior = np.ones(coords.shape[0], dtype=bool)
    for a in range(2 * dim):
        for off in (-2, -1, 1, 2):
            t = lattice[:, a] + off
            ok = (t >= 0) & (t < m)
            nb = np.full(coords.shape[0], -1, dtype=np.int64)
            nb[ok] = flat_to_active[flat_idx[ok] + off * strides[a]]
            interior &= nb >= 0
    return BallGrid(
        dim, float(radius), m, spacing, coords, lattice, flat_to_active, strides, interior
    )


def dbar_operator(grid: BallGrid) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """CSR matrix of the fourth-order conjugate-derivative model.

    Rows: component nu major, interior points minor; one row per (nu, point).
    Columns: active points.  Entry pattern per row: four x-offsets and four
    y-offsets of the centered fourth-order first-difference divided by two
    (and by 2i for the y part folded as +i/2 factor).
    """
    h = grid.spacing
    int_idx = np.nonzero(grid.interior)[0]
    n_int = int_idx.shape[0]
    flat_idx = grid.lattice[int_idx] @ grid.strides
    offsets = (2, 1, -1, -2)
    base = (-1.0, 8.0, -8.0, 1.0)
    rows_cols = []
    rows_data = []
    for nu in range(1, grid.dim + 1):
        ax, ay = 2 * (nu - 1), 2 * nu - 1
        cols = np.empty((n_int, 8), dtype=np.int64)
        data = np.empty(8, dtype=complex)
        for j, (off, c) in enumerate(zip(offsets, base)):
            cols[:, j] = grid.flat_to_active[flat_idx + off * grid.strides[ax]]
            data[j] = c / (12 * h) / 2
        for j, (off, c) in enumerate(zip(offsets, base)):
            cols[:, 4 + j] = grid.flat_to_active[flat_idx + off * grid.strides[ay]]
            data[4 + j] = 1j * c / (12 * h) / 2
        rows_cols.append(cols)
        rows_data.append(np.broadcast_to(data, (n_int, 8)))
    indices = np.concatenate([c.ravel() for c in rows_cols])
    data_all = np.concatenate([d.ravel() for d in rows_data])
    n_rows = grid.dim * n_int
    indptr = np.arange(n_rows + 1, dtype=np.int64) * 8
    if (indices < 0).any():
        raise AssertionError("stencil escaped the active set on an interior point")
    return indptr, indices, data_all, n_rows


def _cg(matvec, b: np.ndarray, tol: float, maxiter: int) -> tuple[np.ndarray, int, bool]:
    x = np.zeros_like(b)
    r = b.copy()
    p = r.copy()
    rs = float(np.vdot(r, r).real)
    b_norm = math.sqrt(rs)
    if b_norm == 0.0:
        return x, 0, True
    for it in range(1, maxiter + 1):
        ap = matvec(p)
        denom = float(np.vdot(p, ap).real)
        if denom <= 0:
            return x, it, False
        alpha = rs / denom
        x = x + alpha * p
        r = r - alpha * ap
        rs_new = float(np.vdot(r, r).real)
        if math.sqrt(rs_new) <= tol * b_norm:
            return x, it, True
        p = r + (rs_new / rs) * p
        rs = rs_new
    return x, maxiter, False


@dataclass
class LsqSolution:
    grid: BallGrid
    values: np.ndarray
    residual_l2: float
    residual_rms: float
    residual_sup: float
    iterations: int
    converged: bool


def lsq_dbar_solve(
    grid: BallGrid,
    components: Sequence[VecFun],
    tol: float = 1e-10,
    maxiter: int = 400,
) -> LsqSolution:
    """Least-squares solution of the discrete conjugate-derivative system.

    `components[nu-1]` maps an (n, dim) complex array of points to the nu-th
    data component.  Returns node values (minimizer reached by CG from zero;
    defined up to the discrete kernel) and residual statistics of the
    discrete operator applied to them.
    """
    if len(components) != grid.dim:
        raise ValueError("need one data component per complex coordinate")
    indptr, indices, data, n_rows = dbar_operator(grid)
    t_indptr, t_indices, t_data = csr_conj_transpose(indptr, indices, data, grid.n_active)
    pts = grid.coords[grid.interior]
    b = np.concatenate([np.asarray(fn(pts), dtype=complex) for fn in components])
    if b.shape[0] != n_rows:
        raise ValueError("component callables returned the wrong length")

    def forward(x: np.ndarray) -> np.ndarray:
        return csr_matvec(indptr, indices, data, x)

    def backward(y: np.ndarray) -> np.ndarray:
        return csr_matvec(t_indptr, t_indices, t_data, y)

    def normal(x: np.ndarray) -> np.ndarray:
        return backward(forward(x))

    rhs = backward(b)
    x, iterations, converged = _cg(normal, rhs, tol, maxiter)
    resid = forward(x) - b
    l2 = float(np.linalg.norm(resid))
    return LsqSolution(
        grid,
        x,
        l2,
        l2 / math.sqrt(n_rows),
        float(np.abs(resid).max()),
        iterations,
        converged,
    )
