"""The twelve acceptance gates, each as a callable returning a record.

Every gate re-derives its oracle independently of the code under test:
closed forms where they exist, sampled suprema with deterministic seeds
elsewhere.  Thresholds are the contract values; nothing here adapts them.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .bootstrap import bootstrap_solve
from .canonical import (
    canonical_solve,
    lemma51_check,
    node_point,
    restriction_consistency,
    truncation_tower,
)
from .counterexample import CxConfig, divergence_scan, lambda_fn, phi_fn
from .delta import Point, cap_for_width, corollary43_measure, delta_enclose
from .forms_core import PolyForm, PolyFunction, ball_samples
from .monomial import (
    MonomialSeries,
    bracket_norm,
    coeff_bound,
    entire_split,
    eval_series,
    extract,
    series_sub,
)
from .multiindex import MultiIndex
from .torus_fourier import SignedIndex, fejer_coeff, fejer_mean_samples

CORPUS_RADIUS = Fraction(1, 2)


@dataclass(frozen=True)
class CriterionResult:
    index: int
    name: str
    passed: bool
    details: dict[str, float] = field(default_factory=dict)
    runtime_s: float = 0.0

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        extras = "  ".join(f"{k}={v:.6g}" for k, v in self.details.items())
        return f"criterion {self.index:02d} {self.name}: {verdict}  [{self.runtime_s:.2f}s]  {extras}"


def _finish(index: int, name: str, passed: bool, details: dict[str, float], t0: float) -> CriterionResult:
    return CriterionResult(index, name, bool(passed), details, time.time() - t0)


def criterion_01_single_variable_enclosure() -> CriterionResult:
    """Geometric series brackets: enclosure of the one-coordinate sum."""
    t0 = time.time()
    worst_width = 0.0
    ok = True
    for i in range(1, 10):
        x = i / 10
        pt = Point.from_dict({1: x})
        cap = cap_for_width(1.0, pt, 1e-10)
        enc = delta_enclose(1.0, pt, cap)
        target = 1.0 / (1.0 - x)
        ok &= enc.lower <= target <= enc.upper
        ok &= enc.width < 1e-9
        worst_width = max(worst_width, enc.width)
    runtime = time.time() - t0
    ok &= runtime < 1.0
    return _finish(1, "single-variable-enclosure", ok,
                   {"worst_width": worst_width, "runtime": runtime}, t0)


def criterion_02_bounded_regime_refinement() -> CriterionResult:
    """Finite uppers at norm 0.3 with 50 coordinates; widths drop 10x per cap doubling."""
    t0 = time.time()
    rng = np.random.default_rng(41)
    ok = True
    worst_ratio = 0.0
    for _ in range(20):
        mags = rng.dirichlet(np.ones(50)) * 0.3
        phases = np.exp(2j * np.pi * rng.uniform(0, 1, 50))
        z = Point.from_dict({i + 1: complex(m * p) for i, (m, p) in enumerate(zip(mags, phases))})
        enc_a = delta_enclose(1.0, z, 20)
        enc_b = delta_enclose(1.0, z, 40)
        ok &= math.isfinite(enc_a.upper) and math.isfinite(enc_b.upper)
        ratio = enc_b.width / enc_a.width if enc_a.width > 0 else 0.0
        worst_ratio = max(worst_ratio, ratio)
        ok &= enc_b.width * 10.0 <= enc_a.width
    return _finish(2, "bounded-regime-refinement", ok, {"worst_width_ratio": worst_ratio}, t0)


def criterion_03_growth_constant_stability() -> CriterionResult:
    """Measured growth constant flat across support sizes 5..50."""
    t0 = time.time()
    rng = np.random.default_rng(43)
    cs = {}
    for n in (5, 10, 20, 50):
        batch = []
        for _ in range(12):
            mags = rng.dirichlet(np.ones(n)) * rng.uniform(0.2, 0.45)
            phases = np.exp(2j * np.pi * rng.uniform(0, 1, n))
            z = Point.from_dict({i + 1: complex(m * p) for i, (m, p) in enumerate(zip(mags, phases))})
            batch.append((1.0, z))
        cs[n] = corollary43_measure(0.5, batch)
    hi, lo = max(cs.values()), min(cs.values())
    runtime = time.time() - t0
    ok = hi / lo < 2.0 and runtime < 10.0
    details = {f"c_{n}": c for n, c in cs.items()}
    details["max_over_min"] = hi / lo
    return _finish(3, "growth-constant-stability", ok, details, t0)


def _extraction_candidates() -> list[tuple[int, Callable[[np.ndarray], complex]]]:
    # compositions of a nonnegative linear functional, so the 0.9-ball sup
    # is attained at the corner of the dominant coordinate
    return [
        (1, lambda v: 1.0 / (1.0 - 0.8 * v[0])),
        (2, lambda v: np.exp(0.7 * (v[0] + 0.5 * v[1]))),
        (2, lambda v: 1.0 / (1.0 - 0.6 * (0.9 * v[0] + v[1]))),
        (3, lambda v: np.cosh(0.8 * (v[0] + v[1] + v[2]))),
        (3, lambda v: (1.0 + 0.5 * (v[0] + 0.8 * v[1] + 0.6 * v[2])) ** 4),
    ]


def criterion_04_extracted_coefficient_bound() -> CriterionResult:
    """Coefficient growth norm of extracted series below the sampled sup."""
    t0 = time.time()
    ok = True
    least_slack = math.inf
    for dims, fn in _extraction_candidates():
        h = extract(fn, dims, 1.0, 6, grid=32)
        corner_vals = [abs(fn(0.9 * np.eye(dims)[i] + 0j)) for i in range(dims)]
        interior = ball_samples(dims, 0.9, 300, seed=3)
        m = max(corner_vals + [abs(fn(row)) for row in interior])
        cb = coeff_bound(h, 0.9)
        ok &= cb <= m * (1 + 1e-6)
        least_slack = min(least_slack, (m - cb) / m)
    return _finish(4, "extracted-coefficient-bound", ok, {"least_slack": least_slack}, t0)


def _random_series(rng: np.random.Generator, max_dim: int = 3, max_grade: int = 6) -> tuple[int, MonomialSeries]:
    dims = int(rng.integers(1, max_dim + 1))
    coeffs: dict[MultiIndex, complex] = {}
    for _ in range(int(rng.integers(3, 11))):
        exps = rng.multinomial(int(rng.integers(0, max_grade + 1)), np.ones(dims) / dims)
        k = MultiIndex(tuple((i + 1, int(e)) for i, e in enumerate(exps) if e))
        coeffs[k] = complex(rng.normal(), rng.normal())
    return dims, MonomialSeries(coeffs, 1.0)


def criterion_05_extraction_round_trip() -> CriterionResult:
    """extract after eval is the identity on random finite series."""
    t0 = time.time()
    rng = np.random.default_rng(47)
    ok = True
    worst = 0.0
    for _ in range(20):
        dims, h = _random_series(rng)

        def hfun(vec: np.ndarray) -> complex:
            return eval_series(h, Point.from_dict({i + 1: vec[i] for i in range(dims)})).value

        back = extract(hfun, dims, 1.0, max(h.max_grade, 1), grid=32)
        keys = set(h.coeffs) | set(back.coeffs)
        err = max(abs(h.coeffs.get(k, 0j) - back.coeffs.get(k, 0j)) for k in keys)
        worst = max(worst, err)
        ok &= err <= 1e-10
    runtime = time.time() - t0
    ok &= runtime < 30.0
    return _finish(5, "extraction-round-trip", ok, {"worst_coeff_err": worst, "runtime": runtime}, t0)


def criterion_06_entire_split_remainder() -> CriterionResult:
    """Split remainder stays below epsilon in the growth norm, re-verified."""
    t0 = time.time()
    rng = np.random.default_rng(53)
    ok = True
    for _ in range(20):
        _, h = _random_series(rng, max_grade=8)
        h = MonomialSeries(h.coeffs, 2.0)
        eps = float(10 ** rng.uniform(-4, -0.5))
        psi, kept = entire_split(h, 1.0, eps)
        rem = series_sub(h, psi)
        ok &= bracket_norm(rem, 1.0) <= eps
        ok &= all(bracket_norm(MonomialSeries({k: psi.coeffs[k]}, 2.0), 1.0) >= eps for k in kept)
        total = series_sub(series_sub(h, psi), rem)
        ok &= not total.coeffs
    return _finish(6, "entire-split-remainder", ok, {}, t0)


def criterion_07_fejer_uniform_contraction() -> CriterionResult:
    """Kernel means: error contraction on the fixed kink field, positivity,
    non-expansion across grids."""
    t0 = time.time()
    g = 256
    t = np.arange(g) / g
    v = np.abs(np.sin(np.pi * t))[:, None] + 0.5 * np.abs(np.sin(np.pi * t))[None, :]
    err8 = float(np.abs(fejer_mean_samples(v, 8) - v).max())
    err64 = float(np.abs(fejer_mean_samples(v, 64) - v).max())
    ok = err64 < 0.25 * err8
    for j in (2, 5, 16, 64):
        for a in range(-j - 2, j + 3):
            ok &= fejer_coeff(SignedIndex(((1, a),)) if a else SignedIndex.zero(), j) >= 0.0
            for b in (-j, -1, 1, j):
                k = SignedIndex(tuple(p for p in ((1, a), (2, b)) if p[1]))
                ok &= fejer_coeff(k, j) >= 0.0
    rng = np.random.default_rng(7)
    for shape, j in (((64, 64), 3), ((128, 128), 8), ((256, 256), 17), ((512,), 5)):
        w = rng.normal(size=shape)
        out = fejer_mean_samples(w, j)
        ok &= float(np.abs(out).max()) <= float(np.abs(w).max()) * (1 + 1e-12)
    return _finish(7, "fejer-uniform-contraction", ok,
                   {"err8": err8, "err64": err64, "ratio": err64 / err8}, t0)


def _corpus_potentials(dim: int) -> list[PolyFunction]:
    z = {nu: PolyFunction.coordinate(dim, nu) for nu in range(1, dim + 1)}
    zb = {nu: PolyFunction.conj_coordinate(dim, nu) for nu in range(1, dim + 1)}
    return [
        zb[1],
        zb[2],
        zb[1].mul(zb[2]),
        zb[1].mul(zb[1]).add(zb[2].mul(zb[2])),
        z[1].mul(zb[2]),
        zb[1].mul(zb[1]).mul(zb[2]),
        z[2].mul(zb[1]).mul(zb[1]),
        zb[1].mul(zb[1]).mul(zb[1]).add(zb[1].mul(zb[2]).mul(zb[2])),
        z[1].mul(z[1]).mul(zb[1]),
        zb[1].mul(zb[1]).mul(zb[2]).mul(zb[2]),
    ]


def _corpus_extras_c3() -> list[PolyFunction]:
    dim = 3
    z = {nu: PolyFunction.coordinate(dim, nu) for nu in range(1, dim + 1)}
    zb = {nu: PolyFunction.conj_coordinate(dim, nu) for nu in range(1, dim + 1)}
    return [
        zb[3],
        zb[3].mul(zb[3]),
        zb[1].mul(zb[3]),
        zb[2].mul(zb[3]),
        z[3].mul(zb[3]),
        zb[3].mul(zb[3]).mul(zb[3]),
        zb[1].mul(zb[1]).mul(zb[3]),
        zb[2].mul(zb[2]).mul(zb[3]),
        z[3].mul(z[3]).mul(zb[3]),
        zb[1].mul(zb[2]).mul(zb[3]),
    ]


def corpus_forms(dim: int) -> list[PolyForm]:
    """Closed polynomial test forms: the two-coordinate corpus, its slice
    restrictions, or its three-coordinate extensions."""
    if dim == 2:
        return [p.dbar() for p in _corpus_potentials(2)]
    if dim == 3:
        pots = _corpus_potentials(3)
        return [p.add(e).dbar() for p, e in zip(pots, _corpus_extras_c3())]
    if dim == 1:
        out = []
        for f in corpus_forms(2):
            g = f.restrict_to(1)
            if any(not c.is_zero for c in g.comps.values()):
                out.append(g)
        return out
    raise ValueError("corpus is defined for dimensions 1..3")


def criterion_08_canonical_corpus_exactness() -> CriterionResult:
    """Symbolic residual and node vanishing on the corpus, plus the sampled
    uniqueness-distance bound."""
    t0 = time.time()
    ok = True
    for f in corpus_forms(2):
        sol = canonical_solve(f, CORPUS_RADIUS)
        ok &= sol.solution.dbar().sub(f).is_zero
        for k, comp in sol.corrected_components.items():
            if k.is_nonnegative:
                val = comp.eval_exact(node_point(k, CORPUS_RADIUS))
                ok &= val.to_complex() == 0
        a_const = sol.report.constants_measured["node_value_sup"]
        ok &= lemma51_check(f, CORPUS_RADIUS, 2, a_const, 1.0, count=100).passed
    runtime = time.time() - t0
    ok &= runtime < 60.0
    return _finish(8, "canonical-corpus-exactness", ok, {"runtime": runtime}, t0)


def criterion_09_restriction_and_tower() -> CriterionResult:
    """Slice agreement with the extended corpus and exact tower stabilization."""
    t0 = time.time()
    ok = True
    worst_q = 0.0
    for f2, f3 in zip(corpus_forms(2), corpus_forms(3)):
        ok &= restriction_consistency(f2, f3, 2, CORPUS_RADIUS)
        tower = truncation_tower(f3, CORPUS_RADIUS, [1, 2, 3])
        ok &= tower.all_agree
        ok &= tower.growth_check.passed
        worst_q = max(worst_q, tower.q_measured)
    return _finish(9, "restriction-and-tower", ok, {"worst_q": worst_q}, t0)


def criterion_10_bootstrap_worked_examples(
    nodes_per_axis: int = 48, maxiter: int = 12000
) -> CriterionResult:
    """Two-coordinate peel on the worked data at the contract grid."""
    t0 = time.time()
    zb1 = PolyFunction.conj_coordinate(2, 1)
    zb2 = PolyFunction.conj_coordinate(2, 2)
    examples = {
        "const": PolyForm(2, {2: PolyFunction.const(2, 1)}),
        "product": PolyForm(2, {1: zb2, 2: zb1}),
    }
    zc = (Fraction(1, 10), Fraction(1, 10))
    ok = True
    details: dict[str, float] = {}
    for name, f in examples.items():
        chain = bootstrap_solve(f, zc, 1, Fraction(1, 2),
                                nodes_per_axis=nodes_per_axis, maxiter=maxiter)
        top = chain.levels[0]
        ok &= top.report.residual_sup < 1e-3
        ok &= chain.center_value_abs < 1e-4
        ok &= top.correction is not None and top.correction.slice_vanishing
        by_name = {c.name: c for c in top.report.bound_checks}
        ok &= by_name["projection-lipschitz"].passed
        details[f"residual_{name}"] = top.report.residual_sup
        details[f"center_{name}"] = chain.center_value_abs
        details[f"pi_lip_{name}"] = by_name["projection-lipschitz"].lhs
    return _finish(10, "bootstrap-worked-examples", ok, details, t0)


def criterion_11_obstruction_scan() -> CriterionResult:
    """Scan divergence with the closed-form increment, plus the derivative
    identity and the growth bound of the profile derivative."""
    t0 = time.time()
    cfg = CxConfig(1, 0.25, (16, 64, 256, 1024, 4096))
    rows = divergence_scan(cfg)
    devs = [r.deviation for r in rows]
    lvl = lambda n: math.log(math.log(0.25 ** -2 * n ** 2))
    increment = 0.25 * (lvl(4096) - lvl(16)) / 2
    ok = devs[-1] >= devs[0] + increment - 1e-12
    ok &= all(b > a for a, b in zip(devs, devs[1:]))

    rng = np.random.default_rng(2)
    pts = 0.4 * np.sqrt(rng.uniform(0.01, 1, 20)) * np.exp(2j * np.pi * rng.uniform(0, 1, 20))
    h = 1e-6
    worst_rel = 0.0
    for z0 in pts:
        fx = (lambda_fn(z0 + h, 1) - lambda_fn(z0 - h, 1)) / (2 * h)
        fy = (lambda_fn(z0 + 1j * h, 1) - lambda_fn(z0 - 1j * h, 1)) / (2 * h)
        fd = (fx + 1j * fy) / 2
        ph = phi_fn(z0, 1)
        worst_rel = max(worst_rel, abs(fd - ph) / abs(ph))
    ok &= worst_rel <= 1e-5

    mags = rng.uniform(1e-3, 0.599, 10_000)
    zs = mags * np.exp(2j * np.pi * rng.uniform(0, 1, 10_000))
    for p in (1, 2, 3):
        ok &= all(abs(phi_fn(z0, p)) <= abs(z0) ** (p - 1) for z0 in zs)
    return _finish(11, "obstruction-scan", ok,
                   {"deviation_span": devs[-1] - devs[0], "fd_rel_err": worst_rel}, t0)


def criterion_12_dimension_trend() -> CriterionResult:
    """Growth-constant fit of the canonical solutions across dimensions.

    For each dimension the least C with |u(z)| <= R C^(#z) |f|_0 over the
    sampled half-radius ball is recorded; the gate is stability of C within
    a factor of two, reported as a trend, never extrapolated."""
    t0 = time.time()
    radius = 0.5
    cs: dict[int, float] = {}
    amps: dict[int, float] = {}
    for dim in (1, 2, 3):
        worst = 1.0
        amp = 0.0
        for f in corpus_forms(dim):
            sol = canonical_solve(f, CORPUS_RADIUS)
            samples = ball_samples(dim, radius * 0.98, 120, seed=29)
            f0 = 0.0
            for row in samples:
                zd = {nu + 1: complex(c) for nu, c in enumerate(row)}
                comps = [f.component(nu).eval(zd) for nu in range(1, dim + 1)]
                f0 = max(f0, max(abs(v) for v in comps))
            if f0 == 0.0:
                continue
            for row in samples:
                zd = {nu + 1: complex(c) for nu, c in enumerate(row)}
                support = sum(1 for c in row if c != 0)
                if support == 0:
                    continue
                ratio = abs(sol.solution.eval(zd)) / (radius * f0)
                amp = max(amp, ratio)
                worst = max(worst, ratio ** (1.0 / support))
        cs[dim] = worst
        amps[dim] = amp
    hi, lo = max(cs.values()), min(cs.values())
    ok = hi / lo < 2.0
    details = {f"c_dim{d}": c for d, c in cs.items()}
    details.update({f"amp_dim{d}": a for d, a in amps.items()})
    details["max_over_min"] = hi / lo
    return _finish(12, "dimension-trend", ok, details, t0)


CRITERIA: list[Callable[[], CriterionResult]] = [
    criterion_01_single_variable_enclosure,
    criterion_02_bounded_regime_refinement,
    criterion_03_growth_constant_stability,
    criterion_04_extracted_coefficient_bound,
    criterion_05_extraction_round_trip,
    criterion_06_entire_split_remainder,
    criterion_07_fejer_uniform_contraction,
    criterion_08_canonical_corpus_exactness,
    criterion_09_restriction_and_tower,
    criterion_10_bootstrap_worked_examples,
    criterion_11_obstruction_scan,
    criterion_12_dimension_trend,
]


def run_all(indices: Optional[Sequence[int]] = None) -> list[CriterionResult]:
    """Run the selected criteria (1-based indices; default all twelve)."""
    chosen = sorted(set(indices)) if indices else list(range(1, 13))
    bad = [i for i in chosen if not 1 <= i <= 12]
    if bad:
        raise ValueError(f"criterion indices out of range: {bad}")
    return [CRITERIA[i - 1]() for i in chosen]
