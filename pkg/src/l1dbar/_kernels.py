"""Hot numerical kernels with a numba path and a pure-numpy fallback.

Backend choice: numba when importable and the environment variable
L1DBAR_DISABLE_NUMBA is unset/empty, else numpy.  Checked at call time so a
process can switch for testing.  Numba kernels are serial; results are
byte-identical across runs for fixed input.

Both implementations of each kernel are importable for parity tests.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


DISABLE_ENV = "L1DBAR_DISABLE_NUMBA"


def numba_active() -> bool:
    return HAS_NUMBA and not os.environ.get(DISABLE_ENV)


@njit(cache=True)
def _pompeiu_sums_numba(nodes, weights, fvals, targets):  # pragma: no cover
    m = targets.shape[0]
    n = nodes.shape[0]
    s1 = np.zeros(m, np.complex128)
    s2 = np.zeros(m, np.complex128)
    s4 = np.zeros(m, np.complex128)
    for i in range(m):
        z = targets[i]
        a1 = 0.0 + 0.0j
        a2 = 0.0 + 0.0j
        a4 = 0.0 + 0.0j
        for j in range(n):
            d = nodes[j] - z
            if d == 0:
                continue
            inv = weights[j] / d
            a1 += fvals[j] * inv
            a2 += inv
            a4 += np.conj(d) * inv
        s1[i] = a1
        s2[i] = a2
        s4[i] = a4
    return s1, s2, s4


def _pompeiu_sums_numpy(nodes, weights, fvals, targets):
    m = targets.shape[0]
    s1 = np.empty(m, complex)
    s2 = np.empty(m, complex)
    s4 = np.empty(m, complex)
    chunk = max(1, (1 << 22) // max(1, nodes.shape[0]))
    for lo in range(0, m, chunk):
        t = targets[lo : lo + chunk, None]
        d = nodes[None, :] - t
        hit = d == 0
        d = np.where(hit, 1.0, d)
        inv = weights[None, :] / d
        inv[hit] = 0.0
        s1[lo : lo + chunk] = (fvals[None, :] * inv).sum(axis=1)
        s2[lo : lo + chunk] = inv.sum(axis=1)
        s4[lo : lo + chunk] = (np.conj(d) * inv).sum(axis=1)
    return s1, s2, s4


def pompeiu_sums(
    nodes: np.ndarray, weights: np.ndarray, fvals: np.ndarray, targets: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-target singular sums over quadrature nodes.

    Returns (sum w f/(node-z), sum w/(node-z), sum w conj(node-z)/(node-z));
    nodes coinciding with a target contribute nothing (their integrand is the
    subtracted one, which vanishes there).
    """
    nodes = np.ascontiguousarray(nodes, dtype=complex)
    weights = np.ascontiguousarray(weights, dtype=float)
    fvals = np.ascontiguousarray(fvals, dtype=complex)
    targets = np.ascontiguousarray(targets, dtype=complex)
    if numba_active():
        return _pompeiu_sums_numba(nodes, weights, fvals, targets)
    return _pompeiu_sums_numpy(nodes, weights, fvals, targets)


@njit(cache=True)
def _csr_matvec_numba(indptr, indices, data, x):  # pragma: no cover
    n = indptr.shape[0] - 1
    y = np.zeros(n, np.complex128)
    for i in range(n):
        acc = 0.0 + 0.0j
        for p in range(indptr[i], indptr[i + 1]):
            acc += data[p] * x[indices[p]]
        y[i] = acc
    return y


def _csr_matvec_numpy(indptr, indices, data, x):
    n = indptr.shape[0] - 1
    y = np.zeros(n, complex)
    if data.shape[0] == 0:
        return y
    prods = data * x[indices]
    # reduceat over nonempty rows only: their starts are strictly increasing
    # valid positions, and consecutive segments end exactly at the next start
    nonempty = np.nonzero(np.diff(indptr) > 0)[0]
    y[nonempty] = np.add.reduceat(prods, indptr[nonempty])
    return y


def csr_matvec(
    indptr: np.ndarray, indices: np.ndarray, data: np.ndarray, x: np.ndarray
) -> np.ndarray:
    """y = A x for a CSR matrix with complex data."""
    indptr = np.ascontiguousarray(indptr, dtype=np.int64)
    indices = np.ascontiguousarray(indices, dtype=np.int64)
    data = np.ascontiguousarray(data, dtype=complex)
    x = np.ascontiguousarray(x, dtype=complex)
    if numba_active():
        return _csr_matvec_numba(indptr, indices, data, x)
    return _csr_matvec_numpy(indptr, indices, data, x)


def csr_conj_transpose(
    indptr: np.ndarray, indices: np.ndarray, data: np.ndarray, ncols: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Conjugate transpose of a CSR matrix, again in CSR layout."""
    indptr = np.asarray(indptr, dtype=np.int64)
    indices = np.asarray(indices, dtype=np.int64)
    data = np.asarray(data, dtype=complex)
    n_rows = indptr.shape[0] - 1
    counts = np.bincount(indices, minlength=ncols)
    out_ptr = np.zeros(ncols + 1, dtype=np.int64)
    np.cumsum(counts, out=out_ptr[1:])
    order = np.argsort(indices, kind="stable")
    rows = np.repeat(np.arange(n_rows, dtype=np.int64), np.diff(indptr))
    return out_ptr, rows[order], np.conj(data[order])
