"""Disc quadrature solver, lattice operator, and kernel backends.

Oracles: data affine in (zeta, conj zeta) where the subtracted quadrature is
exact in closed form, polynomial lattice functions where the fourth-order
stencil is exact, and dense-matrix comparisons for the sparse kernels.
"""

from __future__ import annotations

import numpy as np
import pytest

from l1dbar import _kernels
from l1dbar.gridsolve import (
    build_ball_grid,
    dbar_operator,
    dbar_residual_1d,
    lsq_dbar_solve,
    pompeiu_solve_1d,
)


class TestPompeiuExact:
    def test_constant_data(self) -> None:
        sol = pompeiu_solve_1d(lambda z: np.ones_like(z), 1.0, nr=24, ntheta=48)
        pts = 0.6 * np.exp(2j * np.pi * np.arange(7) / 7)
        got = sol.eval(pts)
        assert np.abs(got - np.conj(pts)).max() < 1e-11

    def test_conjugate_data(self) -> None:
        # data conj(zeta) integrates to conj(z)^2/2
        sol = pompeiu_solve_1d(np.conj, 1.0, nr=24, ntheta=48)
        pts = np.array([0.3 + 0.2j, -0.5j, 0.7, -0.4 + 0.4j])
        got = sol.eval(pts)
        assert np.abs(got - np.conj(pts) ** 2 / 2).max() < 1e-10

    def test_holomorphic_data(self) -> None:
        # data zeta integrates to z conj(z) - radius^2
        sol = pompeiu_solve_1d(lambda z: z, 1.0, nr=24, ntheta=48)
        pts = np.array([0.25 + 0.55j, -0.6, 0.1j])
        got = sol.eval(pts)
        assert np.abs(got - (pts * np.conj(pts) - 1.0)).max() < 1e-10

    def test_off_center_disc(self) -> None:
        c = 0.2 - 0.1j
        sol = pompeiu_solve_1d(lambda z: np.ones_like(z), 0.5, center=c, nr=24, ntheta=48)
        pts = c + 0.3 * np.exp(2j * np.pi * np.arange(5) / 5)
        got = sol.eval(pts)
        assert np.abs(got - np.conj(pts - c)).max() < 1e-11

    def test_scalar_input(self) -> None:
        sol = pompeiu_solve_1d(lambda z: np.ones_like(z), 1.0, nr=16, ntheta=32)
        out = sol.eval(0.4 + 0.1j)
        assert isinstance(out, complex)
        assert out == pytest.approx((0.4 - 0.1j), abs=1e-11)


class TestPompeiuSmooth:
    def test_exponential_residual(self) -> None:
        sol = pompeiu_solve_1d(lambda z: np.exp(np.conj(z)), 1.0, nr=64, ntheta=128)
        pts = 0.5 * np.exp(2j * np.pi * np.arange(12) / 12)
        res = dbar_residual_1d(sol.eval, lambda z: np.exp(np.conj(z)), pts)
        assert res < 2e-4

    def test_modulus_squared_residual(self) -> None:
        f = lambda z: (z * np.conj(z)).astype(complex)
        sol = pompeiu_solve_1d(f, 1.0, nr=64, ntheta=128)
        pts = np.array([0.5, 0.3 + 0.3j, -0.2 + 0.55j, -0.6j])
        res = dbar_residual_1d(sol.eval, f, pts)
        assert res < 2e-4

    def test_residual_decreases_with_refinement(self) -> None:
        f = lambda z: np.exp(np.conj(z))
        pts = 0.5 * np.exp(2j * np.pi * np.arange(8) / 8)
        coarse = pompeiu_solve_1d(f, 1.0, nr=16, ntheta=32)
        fine = pompeiu_solve_1d(f, 1.0, nr=64, ntheta=128)
        rc = dbar_residual_1d(coarse.eval, f, pts)
        rf = dbar_residual_1d(fine.eval, f, pts)
        assert rf < rc / 2

    def test_near_boundary_targets(self) -> None:
        f = lambda z: np.exp(np.conj(z))
        sol = pompeiu_solve_1d(f, 1.0, nr=64, ntheta=128)
        pts = 0.9 * np.exp(2j * np.pi * np.arange(6) / 6)
        assert dbar_residual_1d(sol.eval, f, pts) < 2e-3


class TestBallGrid:
    def test_masking_and_lookup(self) -> None:
        g = build_ball_grid(1, 1.0, 16)
        assert np.abs(g.coords).sum(axis=1).max() < 1.0
        flat = g.lattice @ g.strides
        assert np.array_equal(g.flat_to_active[flat], np.arange(g.n_active))
        assert 0 < g.n_interior < g.n_active

    def test_two_complex_dims(self) -> None:
        g = build_ball_grid(2, 1.0, 10)
        norms = np.abs(g.coords).sum(axis=1)
        assert norms.max() < 1.0
        assert g.coords.shape[1] == 2
        assert g.n_interior > 0
        # every interior point survives a 2-step push along any real axis
        h = g.spacing
        pts = g.coords[g.interior]
        for axis in range(4):
            shift = np.zeros(2, complex)
            shift[axis // 2] = (2 * h) * (1 if axis % 2 == 0 else 1j)
            assert (np.abs(pts + shift).sum(axis=1) < 1.0).all()
            assert (np.abs(pts - shift).sum(axis=1) < 1.0).all()

    def test_size_guardrails(self) -> None:
        with pytest.raises(ValueError):
            build_ball_grid(1, 1.0, 6)
        with pytest.raises(ValueError):
            build_ball_grid(3, 1.0, 32)


class TestDbarOperator:
    def test_exact_on_polynomials(self) -> None:
        g = build_ball_grid(1, 1.0, 20)
        indptr, indices, data, n_rows = dbar_operator(g)
        z = g.coords[:, 0]

        def apply(values: np.ndarray) -> np.ndarray:
            return _kernels.csr_matvec(indptr, indices, data, values)

        assert np.abs(apply(np.conj(z)) - 1.0).max() < 1e-11
        assert np.abs(apply(z)).max() < 1e-11
        assert np.abs(apply(np.conj(z) ** 2) - 2 * np.conj(z)[g.interior]).max() < 1e-10

    def test_mixed_polynomial_two_dims(self) -> None:
        g = build_ball_grid(2, 1.0, 10)
        indptr, indices, data, n_rows = dbar_operator(g)
        z1, z2 = g.coords[:, 0], g.coords[:, 1]
        vals = np.conj(z1) * np.conj(z2)
        out = _kernels.csr_matvec(indptr, indices, data, vals)
        n_int = g.n_interior
        zi1 = np.conj(z1)[g.interior]
        zi2 = np.conj(z2)[g.interior]
        assert np.abs(out[:n_int] - zi2).max() < 1e-10
        assert np.abs(out[n_int:] - zi1).max() < 1e-10


class TestLsqSolve:
    def test_constant_data_one_dim(self) -> None:
        g = build_ball_grid(1, 1.0, 16)
        sol = lsq_dbar_solve(g, [lambda p: np.ones(p.shape[0], complex)], maxiter=3000)
        assert sol.converged
        assert sol.residual_sup < 1e-6

    def test_product_data_two_dims(self) -> None:
        g = build_ball_grid(2, 1.0, 10)
        comps = [
            lambda p: np.conj(p[:, 1]),
            lambda p: np.conj(p[:, 0]),
        ]
        sol = lsq_dbar_solve(g, comps, maxiter=3000)
        assert sol.converged
        assert sol.residual_sup < 1e-5

    def test_smooth_data_is_discretely_consistent(self) -> None:
        # equations only at interior nodes: the system is underdetermined,
        # so smooth data admits an exact discrete solution and the residual
        # reflects CG convergence at both resolutions
        f = [lambda p: np.exp(np.conj(p[:, 0]))]
        coarse = lsq_dbar_solve(build_ball_grid(1, 1.0, 12), f, maxiter=4000)
        fine = lsq_dbar_solve(build_ball_grid(1, 1.0, 24), f, maxiter=4000)
        assert coarse.residual_rms < 1e-8
        assert fine.residual_rms < 1e-8

    def test_minimum_norm_solution_is_tame(self) -> None:
        g = build_ball_grid(1, 1.0, 16)
        sol = lsq_dbar_solve(g, [lambda p: np.ones(p.shape[0], complex)], maxiter=3000)
        assert np.abs(sol.values).max() <= 2.0

    def test_deterministic_rerun(self) -> None:
        g = build_ball_grid(1, 1.0, 12)
        f = [lambda p: np.exp(np.conj(p[:, 0]))]
        a = lsq_dbar_solve(g, f, maxiter=2000)
        b = lsq_dbar_solve(g, f, maxiter=2000)
        assert np.array_equal(a.values, b.values)

    def test_component_count_checked(self) -> None:
        g = build_ball_grid(1, 1.0, 12)
        with pytest.raises(ValueError):
            lsq_dbar_solve(g, [])


def _random_csr(seed: int, n_rows: int, n_cols: int, density: float = 0.3):
    rng = np.random.default_rng(seed)
    dense = rng.normal(size=(n_rows, n_cols)) + 1j * rng.normal(size=(n_rows, n_cols))
    dense[rng.uniform(size=dense.shape) > density] = 0
    # force an empty middle row and an empty trailing row
    if n_rows >= 3:
        dense[1] = 0
        dense[-1] = 0
    indptr = [0]
    indices = []
    data = []
    for row in dense:
        nz = np.nonzero(row)[0]
        indices.extend(nz.tolist())
        data.extend(row[nz].tolist())
        indptr.append(len(indices))
    return (
        np.array(indptr, dtype=np.int64),
        np.array(indices, dtype=np.int64),
        np.array(data, dtype=complex),
        dense,
    )


class TestKernels:
    def test_csr_matvec_matches_dense(self) -> None:
        indptr, indices, data, dense = _random_csr(1, 9, 7)
        x = np.arange(7) + 1j * np.arange(7)[::-1]
        expect = dense @ x
        got_np = _kernels._csr_matvec_numpy(indptr, indices, data, x)
        assert np.abs(got_np - expect).max() < 1e-12
        if _kernels.HAS_NUMBA:
            got_nb = _kernels._csr_matvec_numba(indptr, indices, data.astype(complex), x.astype(complex))
            assert np.abs(got_nb - got_np).max() < 1e-13

    def test_conj_transpose_matches_dense(self) -> None:
        indptr, indices, data, dense = _random_csr(2, 6, 8)
        t_indptr, t_indices, t_data = _kernels.csr_conj_transpose(indptr, indices, data, 8)
        x = np.arange(6, dtype=complex) - 1j
        expect = dense.conj().T @ x
        got = _kernels._csr_matvec_numpy(t_indptr, t_indices, t_data, x)
        assert np.abs(got - expect).max() < 1e-12

    def test_pompeiu_sums_parity(self) -> None:
        if not _kernels.HAS_NUMBA:
            pytest.skip("numba unavailable")
        rng = np.random.default_rng(3)
        nodes = rng.normal(size=50) + 1j * rng.normal(size=50)
        w = rng.uniform(0.1, 1.0, size=50)
        fvals = rng.normal(size=50) + 1j * rng.normal(size=50)
        targets = rng.normal(size=9) + 1j * rng.normal(size=9)
        a = _kernels._pompeiu_sums_numba(nodes, w, fvals, targets)
        b = _kernels._pompeiu_sums_numpy(nodes, w, fvals, targets)
        for x, y in zip(a, b):
            assert np.abs(x - y).max() < 1e-10

    def test_env_flag_switches_backend(self, monkeypatch) -> None:
        if not _kernels.HAS_NUMBA:
            assert not _kernels.numba_active()
            return
        monkeypatch.delenv(_kernels.DISABLE_ENV, raising=False)
        assert _kernels.numba_active()
        monkeypatch.setenv(_kernels.DISABLE_ENV, "1")
        assert not _kernels.numba_active()
