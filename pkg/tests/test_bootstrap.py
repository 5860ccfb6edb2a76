"""Peeling recursion: projection, correction form, division remainder,
assembly, and the end-to-end two-coordinate solves."""

import numpy as np
import pytest
from fractions import Fraction

from l1dbar.bootstrap import (
    MAX_PEEL_DIM,
    bootstrap_solve,
    central_projection,
    correction_form,
    slice_form,
)
from l1dbar.forms_core import PolyForm, PolyFunction, RationalPolyFunction
from l1dbar.multiindex import MultiIndex


def zb(nu: int) -> PolyFunction:
    return PolyFunction.conj_coordinate(2, nu)


def product_data() -> PolyForm:
    # dbar of zbar1 zbar2
    return PolyForm(2, {1: zb(2), 2: zb(1)})


def const_last_data() -> PolyForm:
    return PolyForm(2, {2: PolyFunction.const(2, 1)})


class TestCentralProjection:
    def test_worked_point(self):
        proj = central_projection(1, Fraction(1, 2), 2)
        out = proj.apply({1: 0.2 + 0j, 2: 0.5 + 0j})
        assert out[1] == pytest.approx(0.2)

    def test_zero_center_fixes_slice(self):
        proj = central_projection(1, 0, 2)
        out = proj.apply({1: 0.3 - 0.1j, 2: 0j})
        assert out[1] == pytest.approx(0.3 - 0.1j)

    def test_round_trip(self):
        proj = central_projection(1, Fraction(1, 10), 2)
        zprime = {1: 0.17 + 0.05j}
        back = proj.apply(proj.embed(zprime))
        assert back[1] == pytest.approx(zprime[1], abs=1e-15)

    def test_prime_radius_exact(self):
        proj = central_projection(1, Fraction(1, 10), 2)
        assert proj.prime_radius(Fraction(1, 2)) == Fraction(9, 20)

    def test_ratio_preserved_exactly(self):
        proj = central_projection(1, Fraction(1, 10), 2)
        r_prime = proj.prime_radius(Fraction(1, 2))
        big_r_prime = proj.big_r - proj.center
        assert r_prime / big_r_prime == Fraction(1, 2)

    def test_center_at_or_above_radius_rejected(self):
        with pytest.raises(ValueError):
            central_projection(1, 1, 2)
        with pytest.raises(ValueError):
            central_projection(1, 2, 2)

    def test_negative_center_rejected(self):
        with pytest.raises(ValueError):
            central_projection(1, Fraction(-1, 10), 2)

    def test_needs_two_coordinates(self):
        with pytest.raises(ValueError):
            central_projection(1, 0, 1)

    def test_array_projection_matches_pointwise(self):
        proj = central_projection(1, Fraction(1, 10), 2)
        zs = np.array([[0.2 + 0.1j, 0.3 - 0.05j], [0.1j, -0.2 + 0.2j]])
        arr = proj.project_array(zs)
        for row, prime in zip(zs, arr):
            assert proj.apply({1: row[0], 2: row[1]})[1] == pytest.approx(prime[0])


class TestSliceForm:
    def test_product_data_slice_is_constant(self):
        proj = central_projection(1, Fraction(1, 10), 2)
        fs = slice_form(product_data(), proj)
        assert fs.dim == 1
        assert sorted(fs.comps) == [1]
        assert fs.component(1).equals(PolyFunction.const(1, Fraction(1, 10)))

    def test_last_differential_dropped(self):
        proj = central_projection(1, Fraction(1, 10), 2)
        fs = slice_form(const_last_data(), proj)
        assert fs.comps == {}


class TestCorrectionForm:
    def test_worked_components_exact(self):
        proj = central_projection(1, Fraction(1, 10), 2)
        corr = correction_form(product_data(), proj, Fraction(1, 2))
        one = PolyFunction.const(2, 1)
        num1 = zb(2).mul(one.sub(zb(2))).sub(PolyFunction.const(2, Fraction(9, 100)))
        num2 = zb(1).mul(one.sub(zb(2))).mul(one.sub(zb(2))).sub(
            zb(1).scale(Fraction(9, 100))
        )
        assert corr.correction.component(1).equals(
            RationalPolyFunction(num1, 2, Fraction(1), da=1)
        )
        assert corr.correction.component(2).equals(
            RationalPolyFunction(num2, 2, Fraction(1), da=2)
        )

    def test_slice_vanishing_and_closedness(self):
        proj = central_projection(1, Fraction(1, 10), 2)
        corr = correction_form(product_data(), proj, Fraction(1, 2))
        assert corr.slice_vanishing
        assert corr.correction_closed
        assert corr.correction.component(1).substitute(2, Fraction(1, 10)).is_zero

    def test_canonical_nontrivial_remainder(self):
        # f = zbar_N dzbar_N at center 0: the remainder is -(zbar_N/z_N) dzbar_N
        proj = central_projection(1, 0, 2)
        corr = correction_form(PolyForm(2, {2: zb(2)}), proj, Fraction(1, 2))
        pts = np.array([[0.2 + 0.1j, 0.3 - 0.2j], [0.1j, -0.25 + 0.05j]])
        g2 = corr.g_component(2)(pts)
        w = pts[:, 1]
        assert np.abs(g2 + np.conj(w) / w).max() < 1e-14
        assert np.abs(corr.g_component(1)(pts)).max() == 0.0
        assert corr.g_sup == pytest.approx(1.0, abs=1e-12)
        assert corr.g_check.passed

    def test_constant_last_component_has_zero_remainder(self):
        proj = central_projection(1, 0, 2)
        corr = correction_form(const_last_data(), proj, Fraction(1, 2))
        one = PolyFunction.const(2, 1)
        assert corr.correction.component(2).equals(
            RationalPolyFunction(one, 2, Fraction(1))
        )
        assert corr.correction.component(1).is_zero
        assert corr.g_sup == 0.0

    def test_zero_form_trivial(self):
        proj = central_projection(1, Fraction(1, 10), 2)
        corr = correction_form(PolyForm(2, {}), proj, Fraction(1, 2))
        pts = np.array([[0.2 + 0.1j, 0.3j]])
        for nu in (1, 2):
            assert np.abs(corr.g_component(nu)(pts)).max() == 0.0
        assert corr.g_sup == 0.0

    def test_plane_points_take_assigned_zero(self):
        proj = central_projection(1, Fraction(1, 10), 2)
        corr = correction_form(product_data(), proj, Fraction(1, 2))
        pts = np.array([[0.2 + 0.1j, 0.1 + 0j], [0.05j, 0.1 + 0j]])
        for nu in (1, 2):
            assert np.abs(corr.g_component(nu)(pts)).max() == 0.0

    def test_not_closed_rejected(self):
        proj = central_projection(1, Fraction(1, 10), 2)
        with pytest.raises(ValueError):
            correction_form(PolyForm(2, {1: zb(2)}), proj, Fraction(1, 2))

    def test_component_index_validated(self):
        proj = central_projection(1, Fraction(1, 10), 2)
        corr = correction_form(product_data(), proj, Fraction(1, 2))
        with pytest.raises(ValueError):
            corr.g_component(3)


class TestSingularProfile:
    def test_profile_derivative_reconstructs_remainder(self):
        # dbar of the profile equals g minus the regularized remainder
        proj = central_projection(1, Fraction(1, 10), 2)
        corr = correction_form(product_data(), proj, Fraction(1, 2))
        rng = np.random.default_rng(5)
        zs = rng.uniform(-0.25, 0.25, (30, 2)) + 1j * rng.uniform(-0.25, 0.25, (30, 2))
        zs = zs[np.abs(zs[:, 1] - 0.1) > 0.06]
        h = 1e-6
        for nu in (1, 2):
            shift = np.zeros(2, complex)
            shift[nu - 1] = h
            fx = (corr.singular_profile(zs + shift) - corr.singular_profile(zs - shift)) / (2 * h)
            fy = (corr.singular_profile(zs + 1j * shift) - corr.singular_profile(zs - 1j * shift)) / (2 * h)
            fd = (fx + 1j * fy) / 2
            diff = corr.g_component(nu)(zs) - corr.g_regular_component(nu)(zs)
            assert np.abs(fd - diff).max() < 1e-8

    def test_regularized_remainder_flattens_at_plane(self):
        # angular oscillation around the removable plane decays linearly,
        # while the raw remainder keeps a modulus-one direction dependence
        proj = central_projection(1, Fraction(1, 10), 2)
        corr = correction_form(product_data(), proj, Fraction(1, 2))

        def oscillation(fun, d):
            ring = np.column_stack([
                np.full(64, 0.2 + 0.1j),
                0.1 + d * np.exp(2j * np.pi * np.arange(64) / 64),
            ])
            vals = fun(ring)
            return np.abs(vals - vals.mean()).max()

        for nu in (1, 2):
            reg = corr.g_regular_component(nu)
            raw = corr.g_component(nu)
            osc_fine = oscillation(reg, 0.003)
            assert osc_fine < 5e-4
            assert osc_fine < 0.2 * oscillation(reg, 0.03) + 1e-12
            assert oscillation(raw, 0.003) > 50 * osc_fine

    def test_profile_vanishes_on_plane_and_linearly_near_it(self):
        proj = central_projection(1, Fraction(1, 10), 2)
        corr = correction_form(product_data(), proj, Fraction(1, 2))
        on_plane = np.array([[0.2 + 0.1j, 0.1 + 0j]])
        assert np.abs(corr.singular_profile(on_plane)).max() == 0.0
        d = 1e-3
        ring = np.column_stack([
            np.full(16, 0.2 + 0.1j),
            0.1 + d * np.exp(2j * np.pi * np.arange(16) / 16),
        ])
        assert np.abs(corr.singular_profile(ring)).max() < d


class TestBootstrapSolve:
    def test_constant_last_data_assembles_exactly(self):
        # U = zbar_2 - 0.1: all grid stages are exact for this data
        chain = bootstrap_solve(
            const_last_data(), (Fraction(1, 10), Fraction(1, 10)), 1, Fraction(1, 2),
            nodes_per_axis=16,
        )
        assert chain.all_passed
        assert chain.report.residual_sup < 1e-10
        assert chain.center_value_abs == 0.0
        top = chain.levels[0]
        expected = np.conj(top.assembled.grid.coords[:, 1]) - 0.1
        assert np.abs(top.assembled.node_values - expected).max() < 1e-12

    def test_product_data_two_coordinate_solve(self):
        chain = bootstrap_solve(
            product_data(), (Fraction(1, 10), Fraction(1, 10)), 1, Fraction(1, 2),
            nodes_per_axis=16,
        )
        assert chain.all_passed
        assert chain.report.residual_sup < 1e-3
        assert chain.center_value_abs <= 1e-4
        cm = chain.report.constants_measured
        assert cm["residual_sup_near_plane"] < 5e-3
        assert cm["q_measured"] >= 1.0
        assert 0 < cm["rows_excluded"] < cm["rows_total"]

    def test_two_levels_with_exact_ratio(self):
        chain = bootstrap_solve(
            product_data(), (Fraction(1, 10), Fraction(1, 10)), 1, Fraction(1, 2),
            nodes_per_axis=16,
        )
        assert len(chain.levels) == 2
        top, base = chain.levels
        assert top.dim == 2 and base.dim == 1
        assert base.big_r == Fraction(9, 10)
        assert base.r == Fraction(9, 20)
        assert base.r / base.big_r == top.r / top.big_r == Fraction(1, 2)

    def test_check_names_present(self):
        chain = bootstrap_solve(
            product_data(), (Fraction(1, 10), Fraction(1, 10)), 1, Fraction(1, 2),
            nodes_per_axis=16,
        )
        names = {c.name for c in chain.report.bound_checks}
        assert {
            "slice-vanishing",
            "center-value",
            "division-remainder-bound",
            "projection-lipschitz",
            "growth-exponent-threshold",
        } <= names

    def test_zero_form_zero_chain(self):
        chain = bootstrap_solve(
            PolyForm(2, {}), (Fraction(1, 10), Fraction(1, 10)), 1, Fraction(1, 2),
            nodes_per_axis=12,
        )
        assert chain.all_passed
        assert chain.report.residual_sup == 0.0
        assert np.abs(chain.levels[0].assembled.node_values).max() == 0.0

    def test_base_case_disc(self):
        f = PolyForm(1, {1: PolyFunction.const(1, 1)})
        chain = bootstrap_solve(f, (0,), 1, Fraction(1, 2))
        assert len(chain.levels) == 1
        assert chain.report.residual_sup < 1e-3
        assert chain.center_value_abs <= 1e-4
        # normalized solution sampled at a point: zbar up to quadrature error
        val = chain.levels[0].disc.eval(0.2 + 0.1j)[0]
        assert abs(val - (0.2 - 0.1j)) < 1e-6

    def test_deterministic_rerun(self):
        args = (product_data(), (Fraction(1, 10), Fraction(1, 10)), 1, Fraction(1, 2))
        a = bootstrap_solve(*args, nodes_per_axis=12)
        b = bootstrap_solve(*args, nodes_per_axis=12)
        assert a.report.residual_sup == b.report.residual_sup
        assert np.array_equal(a.levels[0].assembled.node_values,
                              b.levels[0].assembled.node_values)

    def test_dimension_cap(self):
        f = PolyForm(3, {3: PolyFunction.const(3, 1)})
        assert MAX_PEEL_DIM == 2
        with pytest.raises(ValueError):
            bootstrap_solve(f, (0, 0, 0), 1, Fraction(1, 2))

    def test_flattening_point_validation(self):
        f = const_last_data()
        with pytest.raises(ValueError):
            bootstrap_solve(f, (Fraction(3, 10), Fraction(3, 10)), 1, Fraction(1, 2))
        with pytest.raises(ValueError):
            bootstrap_solve(f, (Fraction(-1, 10), Fraction(1, 10)), 1, Fraction(1, 2))
        with pytest.raises(ValueError):
            bootstrap_solve(f, (Fraction(1, 10),), 1, Fraction(1, 2))

    def test_radius_validation(self):
        f = const_last_data()
        with pytest.raises(ValueError):
            bootstrap_solve(f, (0, 0), 1, 1)
        with pytest.raises(ValueError):
            bootstrap_solve(f, (0, 0), Fraction(1, 2), 1)

    def test_not_closed_rejected(self):
        with pytest.raises(ValueError):
            bootstrap_solve(
                PolyForm(2, {1: zb(2)}), (0, 0), 1, Fraction(1, 2)
            )
