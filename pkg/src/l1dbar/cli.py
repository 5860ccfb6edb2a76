"""Command-line front door.

One subcommand per experiment plus the acceptance-suite runner.  All output
is CSV (17 significant digits, '.' decimal, header row) or JSON with exact
rationals rendered as fraction strings, so reruns are byte-identical.
Exit status is 0 exactly when every verdict the run records has passed.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import IO, Iterable, Optional, Sequence

import numpy as np

from .acceptance import run_all
from .bootstrap import BootstrapChain, SolveReport, bootstrap_solve
from .canonical import canonical_solve, truncation_tower
from .counterexample import CxConfig, divergence_scan
from .delta import Point, delta_enclose
from .forms_core import PolyForm, PolyFunction, QC
from .monomial import MonomialSeries, bracket_norm, entire_split, series_sub
from .multiindex import MultiIndex
from .torus_fourier import fejer_mean_samples


def _fraction(text: str) -> Fraction:
    # accepts "1/2", "0.5", "2"
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


def _fraction_of(value) -> Fraction:
    if isinstance(value, str):
        return _fraction(value)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return _fraction(repr(value))
    raise ValueError(f"not a number: {value!r}")


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _write_csv(out: IO[str], header: Sequence[str], rows: Iterable[Sequence]) -> None:
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(_cell(v) for v in row) + "\n")


def _write_json(out: IO[str], obj) -> None:
    out.write(json.dumps(obj, indent=2, sort_keys=True, default=str) + "\n")


def _open_out(path: Optional[str]) -> IO[str]:
    if path is None or path == "-":
        return sys.stdout
    return open(path, "w", encoding="utf-8", newline="")


def _close_out(out: IO[str]) -> None:
    if out is not sys.stdout:
        out.close()


def load_form(path: str) -> PolyForm:
    """Read a polynomial (0,1)-form from its JSON description:
    {dim, comps: [{nu, terms: [{alpha, beta, re, im}]}]}."""
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict) or "dim" not in doc or "comps" not in doc:
        raise ValueError("form file must be an object with 'dim' and 'comps'")
    dim = int(doc["dim"])
    comps: dict[int, PolyFunction] = {}
    for entry in doc["comps"]:
        nu = int(entry["nu"])
        terms = {}
        for t in entry.get("terms", []):
            alpha = MultiIndex.parse(t.get("alpha", ""))
            beta = MultiIndex.parse(t.get("beta", ""))
            terms[(alpha, beta)] = QC(_fraction_of(t.get("re", 0)), _fraction_of(t.get("im", 0)))
        comps[nu] = PolyFunction(dim, terms)
    return PolyForm(dim, comps)


def _terms_json(fn: PolyFunction) -> list[dict]:
    out = []
    for (alpha, beta), c in sorted(fn.terms.items(), key=lambda kv: (kv[0][0].pairs, kv[0][1].pairs)):
        out.append({"alpha": alpha.format(), "beta": beta.format(),
                    "re": str(c.re), "im": str(c.im)})
    return out


def _report_json(report: SolveReport) -> dict:
    return {
        "residual_sup": report.residual_sup,
        "samples": report.samples,
        "constants_measured": dict(sorted(report.constants_measured.items())),
        "bound_checks": [
            {"name": c.name, "lhs": c.lhs, "rhs": c.rhs, "passed": c.passed}
            for c in report.bound_checks
        ],
    }


def cmd_delta_eval(args: argparse.Namespace) -> int:
    pt = Point.parse(args.z)
    enc = delta_enclose(args.q, pt, args.cap)
    out = _open_out(args.out)
    try:
        _write_csv(out, ["lower", "upper", "cap", "eta", "n", "s_eta"],
                   [(enc.lower, enc.upper, enc.degree_cap, enc.eta, enc.n_split, enc.s_eta)])
    finally:
        _close_out(out)
    return 0


def _load_series(path: str) -> MonomialSeries:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, list):
        raise ValueError("series file must be a list of {k, re, im} objects")
    coeffs: dict[MultiIndex, complex] = {}
    for t in doc:
        k = MultiIndex.parse(t.get("k", ""))
        coeffs[k] = complex(float(t.get("re", 0.0)), float(t.get("im", 0.0)))
    return MonomialSeries(coeffs)


def cmd_monomial_approx(args: argparse.Namespace) -> int:
    h = _load_series(args.series)
    psi, kept = entire_split(h, args.r, args.epsilon)
    remainder = bracket_norm(series_sub(h, psi), args.r)
    out = _open_out(args.out)
    try:
        _write_csv(out, ["kept", "dropped", "r", "epsilon", "remainder_norm"],
                   [(len(kept), len(h.coeffs) - len(kept), args.r, args.epsilon, remainder)])
    finally:
        _close_out(out)
    return 0 if remainder <= args.epsilon else 1


def cmd_fejer_demo(args: argparse.Namespace) -> int:
    g = 256
    t = np.arange(g) / g
    v = np.abs(np.sin(np.pi * t))[:, None] + 0.5 * np.abs(np.sin(np.pi * t))[None, :]
    rows = []
    for j in (1, 2, 4, 8, 16, 32, 64):
        err = float(np.abs(fejer_mean_samples(v, j) - v).max())
        rows.append((j, err))
    out = _open_out(args.out)
    try:
        _write_csv(out, ["j", "sup_error"], rows)
    finally:
        _close_out(out)
    errs = [e for _, e in rows]
    return 0 if all(b <= a for a, b in zip(errs, errs[1:])) else 1


def cmd_canonical_solve(args: argparse.Namespace) -> int:
    f = load_form(args.form)
    sol = canonical_solve(f, _fraction(args.r), args.j)
    doc = {
        "dim": sol.dim,
        "assembly_grade": sol.assembly_grade,
        "solution_terms": _terms_json(sol.solution),
        "report": _report_json(sol.report),
    }
    out = _open_out(args.out)
    try:
        _write_json(out, doc)
    finally:
        _close_out(out)
    return 0 if sol.report.all_passed else 1


def cmd_tower(args: argparse.Namespace) -> int:
    f = load_form(args.form)
    levels = [int(s) for s in args.levels.split(",") if s]
    rep = truncation_tower(f, _fraction(args.r), levels)
    doc = {
        "levels": [
            {"n": lvl.n, "component_count": lvl.component_count,
             "solution_terms": _terms_json(lvl.solution)}
            for lvl in rep.levels
        ],
        "agreements": [
            {"low": low, "high": high, "agree": agree}
            for low, high, agree in rep.agreements
        ],
        "all_agree": rep.all_agree,
        "q_measured": rep.q_measured,
        "seminorm_sup": rep.seminorm_sup,
        "seminorm_lip": rep.seminorm_lip,
        "growth_check": {"name": rep.growth_check.name, "lhs": rep.growth_check.lhs,
                         "rhs": rep.growth_check.rhs, "passed": rep.growth_check.passed},
    }
    out = _open_out(args.out)
    try:
        _write_json(out, doc)
    finally:
        _close_out(out)
    return 0 if rep.all_agree and rep.growth_check.passed else 1


def cmd_bootstrap_solve(args: argparse.Namespace) -> int:
    f = load_form(args.form)
    center = tuple(_fraction(s) for s in args.Z.split(","))
    chain: BootstrapChain = bootstrap_solve(
        f, center, _fraction(args.R), _fraction(args.r),
        nodes_per_axis=args.grid, maxiter=args.maxiter)
    doc = {
        "levels": [
            {"dim": lvl.dim, "big_r": str(lvl.big_r), "r": str(lvl.r),
             "report": _report_json(lvl.report)}
            for lvl in chain.levels
        ],
        "all_passed": chain.all_passed,
    }
    out = _open_out(args.out)
    try:
        _write_json(out, doc)
    finally:
        _close_out(out)
    return 0 if chain.all_passed else 1


def cmd_counterexample_scan(args: argparse.Namespace) -> int:
    ns = [1]
    while ns[-1] * 4 <= args.Nmax:
        ns.append(ns[-1] * 4)
    if ns[-1] != args.Nmax:
        ns.append(args.Nmax)
    cfg = CxConfig(args.p, args.R, tuple(ns))
    rows = divergence_scan(cfg)
    out = _open_out(args.out)
    try:
        _write_csv(out, ["N", "a_N", "deviation_N"],
                   [(r.n, r.a_best, r.deviation) for r in rows])
    finally:
        _close_out(out)
    devs = [r.deviation for r in rows]
    return 0 if all(b > a for a, b in zip(devs, devs[1:])) else 1


def cmd_accept(args: argparse.Namespace) -> int:
    indices = [int(s) for s in args.criteria.split(",") if s] if args.criteria else None
    recs = run_all(indices)
    for rec in recs:
        print(rec.line())
    if args.out:
        out = _open_out(args.out)
        try:
            _write_csv(out, ["index", "name", "passed", "runtime_s"],
                       [(r.index, r.name, r.passed, r.runtime_s) for r in recs])
        finally:
            _close_out(out)
    failed = [r.index for r in recs if not r.passed]
    if failed:
        print(f"FAILED criteria: {failed}")
        return 1
    print(f"all {len(recs)} criteria passed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="l1dbar", description=__doc__)
    sub = ap.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("delta-eval", help="enclose the dominating series at one point")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--z", required=True, help="point as nu:val pairs, e.g. '1:0.5,2:0.25'")
    p.add_argument("--cap", type=int, default=60)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_delta_eval)

    p = sub.add_parser("monomial-approx", help="entire split of a finite series")
    p.add_argument("--series", required=True, help="JSON list of {k, re, im}")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_monomial_approx)

    p = sub.add_parser("fejer-demo", help="kernel-mean sup errors on the built-in field")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_fejer_demo)

    p = sub.add_parser("canonical-solve", help="node-normalized solve of a polynomial form")
    p.add_argument("--form", required=True, help="PolyForm JSON file")
    p.add_argument("--r", required=True, help="ball radius, rational text")
    p.add_argument("--j", type=int, default=10**6)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_canonical_solve)

    p = sub.add_parser("tower", help="restriction tower across dimensions")
    p.add_argument("--form", required=True)
    p.add_argument("--r", required=True)
    p.add_argument("--levels", default="1,2,3")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_tower)

    p = sub.add_parser("bootstrap-solve", help="radius-shrinking peel on a smaller ball")
    p.add_argument("--form", required=True)
    p.add_argument("--Z", required=True, help="flattening point, comma-separated rationals")
    p.add_argument("--R", required=True)
    p.add_argument("--r", required=True)
    p.add_argument("--grid", type=int, default=24)
    p.add_argument("--maxiter", type=int, default=4000)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_bootstrap_solve)

    p = sub.add_parser("counterexample-scan", help="divergence scan of the obstruction profile")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--Nmax", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_counterexample_scan)

    p = sub.add_parser("accept", help="run the acceptance suite")
    p.add_argument("--criteria", default=None, help="comma-separated subset, e.g. '1,5,7'")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_accept)

    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
