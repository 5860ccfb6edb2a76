"""Obstruction probe: profile, conjugate derivative, diagonal scan."""

import math

import numpy as np
import pytest

from l1dbar.counterexample import (
    CxConfig,
    ScanRow,
    divergence_scan,
    form_eval,
    homogeneous_projection,
    lambda_fn,
    phi_fn,
    smoothness_probe,
)


def sample_points(count: int, lo: float = 0.05, hi: float = 0.55, seed: int = 2):
    rng = np.random.default_rng(seed)
    mags = rng.uniform(lo, hi, count)
    return mags * np.exp(2j * np.pi * rng.uniform(0, 1, count))


class TestLambda:
    def test_origin_extension(self):
        assert lambda_fn(0, 1) == 0j
        assert lambda_fn(0.0j, 3) == 0j

    def test_worked_value(self):
        assert lambda_fn(0.1, 1) == pytest.approx(0.1 * math.log(math.log(100)))
        assert abs(lambda_fn(0.1, 1) - 0.15272) < 5e-6

    def test_level_set_where_outer_log_is_one(self):
        # ln |zeta|^(-2) = e exactly on this circle, so the value is zeta^p
        mag = math.exp(-math.e / 2)
        for p in (1, 2):
            for angle in (0.0, 0.7, 2.1):
                z = mag * np.exp(1j * angle)
                assert abs(lambda_fn(z, p) - z**p) < 1e-15

    def test_domain_enforced(self):
        with pytest.raises(ValueError):
            lambda_fn(0.6, 1)
        with pytest.raises(ValueError):
            lambda_fn(0.5 + 0.4j, 1)

    def test_exponent_validated(self):
        with pytest.raises(ValueError):
            lambda_fn(0.1, 0)
        with pytest.raises(ValueError):
            lambda_fn(0.1, -2)


class TestPhi:
    def test_origin_extension(self):
        assert phi_fn(0, 1) == 0j

    def test_worked_value(self):
        assert phi_fn(0.5, 1) == pytest.approx(1 / math.log(0.25))
        assert abs(phi_fn(0.5, 1) - (-0.72135)) < 5e-6

    def test_growth_bound(self):
        # |phi| <= |zeta|^(p-1), with the log factor giving strict slack
        for p in (1, 2, 3):
            for z in sample_points(60):
                val = abs(phi_fn(z, p))
                assert val <= abs(z) ** (p - 1)
                assert val <= abs(z) ** (p - 1) / (-2 * math.log(abs(z))) * (1 + 1e-12)

    def test_conjugate_derivative_identity(self):
        # (d/dx + i d/dy)/2 of the profile matches phi to 1e-5 relative
        h = 1e-6
        for p in (1, 2):
            for z in sample_points(20, lo=0.05, hi=0.5):
                fx = (lambda_fn(z + h, p) - lambda_fn(z - h, p)) / (2 * h)
                fy = (lambda_fn(z + 1j * h, p) - lambda_fn(z - 1j * h, p)) / (2 * h)
                fd = (fx + 1j * fy) / 2
                ph = phi_fn(z, p)
                assert abs(fd - ph) <= 1e-5 * abs(ph)

    def test_domain_enforced(self):
        with pytest.raises(ValueError):
            phi_fn(0.61, 2)


class TestFormEval:
    def test_zero_pairing(self):
        assert form_eval({1: 0.3}, {}, 1) == 0j
        assert form_eval({1: 0.3}, {1: 0}, 1) == 0j

    def test_single_term(self):
        assert form_eval({5: 0.5}, {5: 1}, 1) == pytest.approx(phi_fn(0.5, 1))

    def test_sequence_and_mapping_agree(self):
        zs = [0.1, 0.2j, 0.05 - 0.1j]
        xi = [1, 2j, -0.5]
        as_map = form_eval(dict(enumerate(zs, start=1)), dict(enumerate(xi, start=1)), 2)
        assert form_eval(zs, xi, 2) == as_map

    def test_antilinear_in_xi(self):
        z = {1: 0.2, 2: 0.1j}
        xi = {1: 0.5 - 0.2j, 2: 1j}
        c = 0.7 + 0.3j
        scaled = {nu: c * v for nu, v in xi.items()}
        assert form_eval(z, scaled, 1) == pytest.approx(
            np.conj(c) * form_eval(z, xi, 1)
        )

    def test_holder_bound(self):
        rng = np.random.default_rng(9)
        for p in (1, 2, 3):
            for _ in range(25):
                n = rng.integers(1, 6)
                z = 0.3 * (rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n))
                xi = rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n)
                val = abs(form_eval(list(z), list(xi), p))
                zp = float(np.abs(z) ** p @ np.ones(n)) ** (1 / p)
                xip = float(np.abs(xi) ** p @ np.ones(n)) ** (1 / p)
                assert val <= zp ** (p - 1) * xip + 1e-12

    def test_domain_enforced_per_coordinate(self):
        with pytest.raises(ValueError):
            form_eval({1: 0.1, 2: 0.7}, {1: 1}, 1)


class TestDivergenceScan:
    def test_single_point_fits_exactly(self):
        rows = divergence_scan(CxConfig(1, 0.25, (1,)))
        assert rows == [ScanRow(1, math.log(math.log(16)), 0.0)]

    def test_closed_form_row(self):
        rows = divergence_scan(CxConfig(1, 0.25, (16,)))
        levels = [math.log(math.log(16 * n**2)) for n in range(1, 17)]
        assert rows[0].a_best == pytest.approx((levels[-1] + levels[0]) / 2)
        assert rows[0].deviation == pytest.approx(0.25 * (levels[-1] - levels[0]) / 2)

    def test_strictly_increasing_and_exceeds_margin(self):
        cfg = CxConfig(1, 0.25, (16, 64, 256, 1024, 4096))
        rows = divergence_scan(cfg)
        devs = [r.deviation for r in rows]
        assert all(b > a for a, b in zip(devs, devs[1:]))
        # closed-form margin between the end rows
        lvl = lambda n: math.log(math.log(16 * n**2))
        margin = 0.25 * (lvl(4096) - lvl(16)) / 2
        assert rows[-1].deviation == pytest.approx(rows[0].deviation + margin)
        assert margin > 0.1

    def test_doubling_increment_positive(self):
        for p in (1, 2):
            rows = divergence_scan(CxConfig(p, 0.2, (512, 1024)))
            lvl = lambda n: math.log(math.log(0.2**-2 * n ** (2 / p)))
            inc = 0.2**p * (lvl(1024) - lvl(512)) / 2
            assert inc > 0
            assert rows[1].deviation - rows[0].deviation == pytest.approx(inc)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            CxConfig(1, 0.3, (1, 2))
        with pytest.raises(ValueError):
            CxConfig(0, 0.25, (1, 2))
        with pytest.raises(ValueError):
            CxConfig(1, 0.25, (4, 2))
        with pytest.raises(ValueError):
            CxConfig(1, 0.25, ())
        with pytest.raises(ValueError):
            CxConfig(1, 0.25, (1, 2), n_grid=(8,))


class TestHomogeneity:
    def test_phase_average_reproduces_profile(self):
        for p, z in ((1, 0.2 + 0.1j), (2, 0.15j), (3, -0.25)):
            assert abs(homogeneous_projection(z, p) - lambda_fn(z, p)) < 1e-12

    def test_mismatched_character_averages_out(self):
        # degree-2 character against a degree-1 profile integrates to zero
        total = homogeneous_projection(0.2, 1, samples=128)
        off = sum(
            np.exp(-4j * np.pi * k / 128) * lambda_fn(np.exp(2j * np.pi * k / 128) * 0.2, 1)
            for k in range(128)
        ) / 128
        assert abs(off) < 1e-12
        assert abs(total) > 0.1


class TestSmoothness:
    def test_low_order_bounded_top_order_grows(self):
        for p in (1, 2):
            probe = smoothness_probe(p)
            assert max(probe.low_order) < 1.0
            assert all(b < a for a, b in zip(probe.low_order, probe.low_order[1:]))
            assert all(b > 3 * a for a, b in zip(probe.top_order, probe.top_order[1:]))

    def test_radii_recorded(self):
        probe = smoothness_probe(1, radii=(1e-2, 1e-3))
        assert probe.radii == (1e-2, 1e-3)
        assert len(probe.low_order) == len(probe.top_order) == 2
