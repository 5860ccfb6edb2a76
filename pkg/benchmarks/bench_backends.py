"""Timing comparison of the numba and pure-numpy kernel backends.

Run as a script; prints one CSV table to stdout.  Sizes mirror the solver's
real workloads: the disc quadrature kernel at its default node count and the
grid operator's sparse matvec at a few grid sizes.  Both backends are checked
for agreement before timing, so the table never reports a wrong fast path.
"""

from __future__ import annotations

import argparse
import time
from typing import Callable

import numpy as np

from l1dbar._kernels import (
    HAS_NUMBA,
    _csr_matvec_numba,
    _csr_matvec_numpy,
    _pompeiu_sums_numba,
    _pompeiu_sums_numpy,
)


def best_of(fn: Callable[[], object], repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def pompeiu_case(rng: np.random.Generator, n_nodes: int, n_targets: int):
    nodes = rng.normal(size=n_nodes) + 1j * rng.normal(size=n_nodes)
    weights = rng.uniform(0.5, 1.5, n_nodes)
    fvals = rng.normal(size=n_nodes) + 1j * rng.normal(size=n_nodes)
    targets = rng.normal(size=n_targets) + 1j * rng.normal(size=n_targets)
    return nodes, weights, fvals, targets


def csr_case(rng: np.random.Generator, n_rows: int, nnz_per_row: int):
    cols = rng.integers(0, n_rows, size=(n_rows, nnz_per_row))
    data = rng.normal(size=(n_rows, nnz_per_row)) + 1j * rng.normal(size=(n_rows, nnz_per_row))
    indptr = np.arange(0, n_rows * nnz_per_row + 1, nnz_per_row, dtype=np.int64)
    x = rng.normal(size=n_rows) + 1j * rng.normal(size=n_rows)
    return indptr, cols.ravel().astype(np.int64), data.ravel(), x


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(11)
    rows = []

    for n_nodes, n_targets in ((8192, 1024), (8192, 4096)):
        case = pompeiu_case(rng, n_nodes, n_targets)
        t_np = best_of(lambda: _pompeiu_sums_numpy(*case), args.repeats)
        if HAS_NUMBA:
            ref = _pompeiu_sums_numpy(*case)
            got = _pompeiu_sums_numba(*case)
            for a, b in zip(ref, got):
                assert np.allclose(a, b, rtol=1e-12, atol=1e-12)
            t_nb = best_of(lambda: _pompeiu_sums_numba(*case), args.repeats)
        else:
            t_nb = float("nan")
        rows.append(("pompeiu_sums", f"{n_nodes}x{n_targets}", t_nb, t_np))

    for m in (24, 48, 96):
        n_rows = 2 * m * m  # two stacked first-order difference blocks
        case = csr_case(rng, n_rows, 8)
        t_np = best_of(lambda: _csr_matvec_numpy(*case), args.repeats)
        if HAS_NUMBA:
            assert np.allclose(_csr_matvec_numpy(*case), _csr_matvec_numba(*case),
                               rtol=1e-12, atol=1e-12)
            t_nb = best_of(lambda: _csr_matvec_numba(*case), args.repeats)
        else:
            t_nb = float("nan")
        rows.append(("csr_matvec", f"{n_rows}x8", t_nb, t_np))

    print("kernel,case,numba_ms,numpy_ms,speedup")
    for name, case_id, t_nb, t_np in rows:
        speedup = t_np / t_nb if t_nb == t_nb and t_nb > 0 else float("nan")
        print(f"{name},{case_id},{t_nb * 1e3:.3f},{t_np * 1e3:.3f},{speedup:.2f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
