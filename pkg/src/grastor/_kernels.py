"""Table-driven finite-field kernels.

Field elements are int64 codes; arithmetic goes through lookup tables
(add, mul, neg, inv), so one kernel serves GF(p) and GF(p^2) alike.
Every kernel has a numba version and a pure-numpy version with the same
signature.  GRASTOR_BACKEND=numpy selects the fallback at import time;
both stay importable for tests and benchmarks.
"""
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

BACKEND = os.environ.get("GRASTOR_BACKEND", "numba").strip().lower()
if BACKEND not in ("numba", "numpy"):
    raise ImportError(f"GRASTOR_BACKEND must be 'numba' or 'numpy', got {BACKEND!r}")
if numba is None:
    BACKEND = "numpy"


def _njit(fn):
    if numba is None:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)


# ---------------------------------------------------------------- numpy

def rref_numpy(M, add, mul, neg, inv):
    """In-place reduced row echelon form; returns (rank, pivot columns)."""
    rows, cols = M.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            M[[r, k]] = M[[k, r]]
        s = M[r, c]
        if s != 1:
            M[r] = mul[inv[s], M[r]]
        f = M[:, c].copy()
        f[r] = 0
        hit = np.flatnonzero(f)
        if hit.size:
            M[hit] = add[M[hit], mul[neg[f[hit]][:, None], M[r][None, :]]]
        pivots.append(c)
        r += 1
    return r, np.array(pivots, dtype=np.int64)


def matmul_numpy(A, B, add, mul):
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for k in range(A.shape[1]):
        out = add[out, mul[A[:, k][:, None], B[k][None, :]]]
    return out


def null_basis_numpy(R, rank, pivots, neg):
    """Rows spanning {v : R v = 0} from an RREF matrix."""
    cols = R.shape[1]
    free = np.setdiff1d(np.arange(cols), pivots[:rank])
    N = np.zeros((free.size, cols), dtype=np.int64)
    N[np.arange(free.size), free] = 1
    if rank:
        N[:, pivots[:rank]] = neg[R[:rank][:, free]].T
    return N


# ---------------------------------------------------------------- numba

def _rref_loops(M, add, mul, neg, inv):
    rows, cols = M.shape
    pivots = np.empty(min(rows, cols), dtype=np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        k = r
        while k < rows and M[k, c] == 0:
            k += 1
        if k == rows:
            continue
        if k != r:
            for j in range(cols):
                t = M[r, j]
                M[r, j] = M[k, j]
                M[k, j] = t
        s = M[r, c]
        if s != 1:
            si = inv[s]
            for j in range(c, cols):
                M[r, j] = mul[si, M[r, j]]
        for i in range(rows):
            if i != r:
                f = M[i, c]
                if f != 0:
                    nf = neg[f]
                    for j in range(c, cols):
                        if M[r, j] != 0:
                            M[i, j] = add[M[i, j], mul[nf, M[r, j]]]
        pivots[r] = c
        r += 1
    return r, pivots[:r].copy()


def _matmul_loops(A, B, add, mul):
    n, m = A.shape
    p = B.shape[1]
    out = np.zeros((n, p), dtype=np.int64)
    for i in range(n):
        for k in range(m):
            a = A[i, k]
            if a != 0:
                for j in range(p):
                    out[i, j] = add[out[i, j], mul[a, B[k, j]]]
    return out


def _null_basis_loops(R, rank, pivots, neg):
    cols = R.shape[1]
    is_piv = np.zeros(cols, dtype=np.bool_)
    for i in range(rank):
        is_piv[pivots[i]] = True
    N = np.zeros((cols - rank, cols), dtype=np.int64)
    row = 0
    for f in range(cols):
        if not is_piv[f]:
            N[row, f] = 1
            for i in range(rank):
                N[row, pivots[i]] = neg[R[i, f]]
            row += 1
    return N


rref_numba = _njit(_rref_loops)
matmul_numba = _njit(_matmul_loops)
null_basis_numba = _njit(_null_basis_loops)


@_njit
def left_null_project_numba(M, O, add, mul, neg, inv):
    # coefficient rows c with c.M = 0, then rref(c.O); the hot relation primitive
    Mt = M.T.copy()
    rank, piv = rref_numba(Mt, add, mul, neg, inv)
    C = null_basis_numba(Mt, rank, piv, neg)
    out = matmul_numba(C, O, add, mul)
    r2, _ = rref_numba(out, add, mul, neg, inv)
    return out[:r2].copy()


def left_null_project_numpy(M, O, add, mul, neg, inv):
    Mt = np.ascontiguousarray(M.T)
    rank, piv = rref_numpy(Mt, add, mul, neg, inv)
    C = null_basis_numpy(Mt, rank, piv, neg)
    out = matmul_numpy(C, O, add, mul)
    r2, _ = rref_numpy(out, add, mul, neg, inv)
    return out[:r2].copy()


IMPLS = {
    "numba": dict(rref=rref_numba, matmul=matmul_numba,
                  null_basis=null_basis_numba, left_null_project=left_null_project_numba),
    "numpy": dict(rref=rref_numpy, matmul=matmul_numpy,
                  null_basis=null_basis_numpy, left_null_project=left_null_project_numpy),
}

_active = IMPLS[BACKEND]
rref = _active["rref"]
matmul = _active["matmul"]
null_basis = _active["null_basis"]
left_null_project = _active["left_null_project"]
