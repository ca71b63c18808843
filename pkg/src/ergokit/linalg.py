"""Dense complex linear algebra for small systems.

Hermitian eigendecomposition (cyclic Jacobi), Kronecker products, partial
traces and majorization. Matrices are plain ``numpy`` complex arrays.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from numba import njit

from .errors import DimensionMismatch, LengthMismatch, NoConvergence, NotHermitian

MAX_SWEEPS = 100
OFFDIAG_RTOL = 1e-12
CLUSTER_TOL = 1e-10


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    return a


def is_hermitian(m, tol: float = 1e-9) -> bool:
    a = as_matrix(m)
    return bool(np.max(np.abs(a - a.conj().T), initial=0.0) <= tol)


def is_unitary(m, tol: float = 1e-9) -> bool:
    a = as_matrix(m)
    eye = np.eye(a.shape[0])
    return bool(np.max(np.abs(a @ a.conj().T - eye), initial=0.0) <= tol)


@njit(cache=True)
def _jacobi(a, max_sweeps, rtol):
    # a is overwritten; returns (diag, V, sweeps) with sweeps == -1 on failure
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    norm = 0.0
    for i in range(n):
        for j in range(n):
            norm += a[i, j].real ** 2 + a[i, j].imag ** 2
    norm = np.sqrt(norm)
    target = rtol * norm
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += a[i, j].real ** 2 + a[i, j].imag ** 2
        if np.sqrt(off) <= target:
            w = np.empty(n)
            for i in range(n):
                w[i] = a[i, i].real
            return w, v, sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = a[p, q]
                t_abs = abs(g)
                if t_abs == 0.0:
                    continue
                phase = g / t_abs
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * t_abs)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # G = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                g00 = c + 0j
                g01 = s + 0j
                g10 = -s * np.conj(phase)
                g11 = c * np.conj(phase)
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = akp * g00 + akq * g10
                    a[k, q] = akp * g01 + akq * g11
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = np.conj(g00) * apk + np.conj(g10) * aqk
                    a[q, k] = np.conj(g01) * apk + np.conj(g11) * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = vkp * g00 + vkq * g10
                    v[k, q] = vkp * g01 + vkq * g11
    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i].real
    return w, v, -1


@njit(cache=True)
def _jacobi_batch(stack, max_sweeps, rtol):
    # ascending eigenvalues per matrix; second result is the first failing index or -1
    n, d = stack.shape[0], stack.shape[1]
    out = np.empty((n, d))
    for k in range(n):
        w, _, sweeps = _jacobi(stack[k].copy(), max_sweeps, rtol)
        if sweeps < 0:
            return out, k
        out[k] = np.sort(w)
    return out, -1


def eigvalsh_batch(stack, tol: float = 1e-9) -> np.ndarray:
    """Ascending eigenvalues of a stack of Hermitian matrices, shape ``(n, d)``."""
    a = np.asarray(stack, dtype=np.complex128)
    if a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise DimensionMismatch(f"expected a stack of square matrices, got shape {a.shape}")
    adj = np.conj(np.swapaxes(a, 1, 2))
    if a.size and np.max(np.abs(a - adj)) > tol:
        raise NotHermitian(f"a matrix in the stack deviates from its adjoint by more than {tol:g}")
    w, bad = _jacobi_batch(np.ascontiguousarray(0.5 * (a + adj)), MAX_SWEEPS, OFFDIAG_RTOL)
    if bad >= 0:
        raise NoConvergence(f"Jacobi did not converge within {MAX_SWEEPS} sweeps for matrix {bad}")
    return w


def _leading_index(vec: np.ndarray) -> int:
    mags = np.abs(vec)
    return int(np.flatnonzero(mags >= mags.max() - 1e-12)[0])


def _fix_phases(v: np.ndarray) -> np.ndarray:
    # first component within 1e-12 of the column maximum becomes real positive
    mags = np.abs(v)
    lead = np.argmax(mags >= mags.max(axis=0) - 1e-12, axis=0)
    top = v[lead, np.arange(v.shape[1])]
    return v * (np.abs(top) / top)


def _order_eigenpairs(w: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    order = np.argsort(w, kind="stable")
    w = w[order]
    v = _fix_phases(v[:, order])
    if w.size < 2 or np.min(np.diff(w)) >= CLUSTER_TOL:
        return w, v
    # stable tie-break inside clusters of (near-)degenerate eigenvalues
    start = 0
    n = len(w)
    while start < n:
        stop = start + 1
        while stop < n and w[stop] - w[stop - 1] < CLUSTER_TOL:
            stop += 1
        if stop - start > 1:
            cols = list(range(start, stop))
            cols.sort(key=lambda k: (_leading_index(v[:, k]), tuple(np.round(v[:, k].real, 12))))
            v[:, start:stop] = v[:, cols]
        start = stop
    return w, v


def eig_hermitian(m, tol: float = 1e-9) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(values, vectors)`` with ``values`` ascending and the
    eigenvectors as the columns of a unitary matrix, ordered to match.
    Within a cluster of eigenvalues closer than ``1e-10`` the columns are
    ordered by the index of their largest-magnitude component, then by
    their real parts; each column is phased so that component is real
    and positive.

    Raises
    ------
    NotHermitian
        if ``max|m - m^dagger| > tol``.
    NoConvergence
        if the off-diagonal mass does not drop below ``1e-12 * ||m||``
        within 100 sweeps.
    """
    a = as_matrix(m)
    if not is_hermitian(a, tol):
        raise NotHermitian(f"matrix deviates from its adjoint by more than {tol:g}")
    return eig_hermitian_unchecked(a)


def eig_hermitian_unchecked(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """:func:`eig_hermitian` for a complex matrix already known to be Hermitian."""
    if a.shape[0] == 0:
        return np.zeros(0), np.zeros((0, 0), dtype=np.complex128)
    work = np.ascontiguousarray(0.5 * (a + a.conj().T))
    w, v, sweeps = _jacobi(work, MAX_SWEEPS, OFFDIAG_RTOL)
    if sweeps < 0:
        raise NoConvergence(f"Jacobi did not converge within {MAX_SWEEPS} sweeps")
    return _order_eigenpairs(w, v)


def eigvals_hermitian(m, tol: float = 1e-9) -> np.ndarray:
    return eig_hermitian(m, tol)[0]


def tensor(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def tensor_all(mats: Sequence) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.complex128)
    for m in mats:
        out = np.kron(out, as_matrix(m))
    return out


def partial_trace(m, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Reduce ``m`` onto the subsystems listed in ``keep``.

    Kept subsystems appear in ascending index order in the result.
    """
    a = as_matrix(m)
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims) or int(np.prod(dims)) != a.shape[0]:
        raise DimensionMismatch(f"subsystem dims {dims} do not multiply to {a.shape[0]}")
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if not keep or any(k < 0 or k >= n for k in keep):
        raise DimensionMismatch(f"invalid subsystem selection {keep} for {n} subsystems")
    if len(keep) == n:
        return a.copy()
    traced = [k for k in range(n) if k not in keep]
    t = a.reshape(dims + dims)
    # move traced row/col indices to the back, then contract them pairwise
    perm = keep + traced + [n + k for k in keep] + [n + k for k in traced]
    t = t.transpose(perm)
    dk = int(np.prod([dims[k] for k in keep]))
    dt = int(np.prod([dims[k] for k in traced]))
    t = t.reshape(dk, dt, dk, dt)
    return np.einsum("ajbj->ab", t)


def majorizes(p, q, tol: float = 1e-12) -> bool:
    """True iff ``p`` is majorized by ``q`` (``p ≺ q``).

    Both vectors are sorted descending; every partial sum of ``q`` must
    dominate the corresponding partial sum of ``p``.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise LengthMismatch(f"cannot compare vectors of lengths {p.size} and {q.size}")
    cp = np.cumsum(np.sort(p)[::-1])
    cq = np.cumsum(np.sort(q)[::-1])
    return bool(np.all(cq >= cp - tol))
