"""Matrices and canonical subspaces over a scalar ring.

Conventions, used everywhere in the package:
  * vectors are rows; a subspace is stored by the rows of its RREF basis;
  * a matrix m acts on column vectors, so the image of a row vector v is
    v @ m.T and apply(m, x) is the row space of basis @ m.T.
"""
import itertools
import os

import numpy as np

from .errors import DimensionError, LimitExceeded, NotEnumerable, NotInvertible, NotTransversal, ParseError
from .scalars import ring_from_name

DEFAULT_LIMIT = 10**6


def enumeration_limit():
    """Cardinality cap for exhaustive work; GRASTOR_LIMIT overrides."""
    v = os.environ.get("GRASTOR_LIMIT")
    return int(v) if v else DEFAULT_LIMIT


class Subspace:
    """A subspace of K^n held in canonical RREF; equality is basis equality."""

    __slots__ = ("ring", "n", "basis", "_key")

    def __init__(self, ring, n, basis, canonical=False):
        self.ring = ring
        self.n = n
        basis = np.asarray(basis, dtype=ring.dtype).reshape(-1, n)
        if not canonical:
            R, rank, _ = ring.rref(basis)
            basis = R[:rank]
        if ring.dtype is not object:
            basis = np.ascontiguousarray(basis)
            basis.setflags(write=False)
        self.basis = basis
        self._key = (n, basis.shape[0], ring.key_of(basis))

    @property
    def dim(self):
        return self.basis.shape[0]

    def __eq__(self, other):
        return isinstance(other, Subspace) and self._key == other._key and self.ring == other.ring

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        rows = ["(" + ",".join(self.ring.format(v) for v in r) + ")" for r in self.basis]
        return f"<{self.ring.name}^{self.n} span{{{', '.join(rows)}}}>"

    def rows(self):
        return [[self.ring.format(v) for v in r] for r in self.basis]

    def to_json(self):
        return {"n": self.n, "ring": self.ring.name, "basis": self.rows()}

    @classmethod
    def from_json(cls, obj, ring=None):
        try:
            ring = ring or ring_from_name(obj["ring"])
            n = int(obj["n"])
            basis = ring.array(obj["basis"], n)
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, ParseError):
                raise
            raise ParseError(f"malformed subspace: {e}") from None
        if basis.shape[1] != n and basis.shape[0]:
            raise ParseError("basis width differs from n")
        s = cls(ring, n, basis)
        if s.dim != basis.shape[0] or not np.array_equal(np.asarray(s.basis), np.asarray(basis)):
            raise ParseError("basis is not in canonical reduced row echelon form")
        return s

    def contains(self, v):
        v = self.ring.array([v]) if not isinstance(v, np.ndarray) else v.reshape(1, -1)
        return join(self, span(self.ring, self.n, v)).dim == self.dim


# ---------------------------------------------------------------- matrices

def as_matrix(ring, m):
    if isinstance(m, np.ndarray) and (m.dtype == object) == (ring.dtype is object):
        return m
    return ring.array(m)


def rref(ring, m):
    """Canonical RREF of m without zero rows, and the rank."""
    R, rank, _ = ring.rref(as_matrix(ring, m))
    return R[:rank], rank


def rank(ring, m):
    return ring.rref(as_matrix(ring, m))[1]


def transpose(m):
    return np.ascontiguousarray(m.T)


def inverse(ring, m):
    m = as_matrix(ring, m)
    n = m.shape[0]
    if m.shape != (n, n):
        raise DimensionError("inverse of a non-square matrix")
    R, r, piv = ring.rref(np.concatenate([m, ring.eye(n)], axis=1))
    if r < n or any(piv[i] != i for i in range(n)):
        raise NotInvertible("singular matrix")
    return np.ascontiguousarray(R[:, n:])


def is_invertible_matrix(ring, m):
    try:
        inverse(ring, m)
        return True
    except NotInvertible:
        return False


def null_rows(ring, m):
    """Rows spanning {v : m v = 0} (column kernel), not canonicalised."""
    m = as_matrix(ring, m)
    cols = m.shape[1]
    if m.shape[0] == 0:
        return ring.eye(cols)
    R, r, piv = ring.rref(m)
    pivset = set(int(p) for p in piv)
    free = [f for f in range(cols) if f not in pivset]
    N = ring.zeros(len(free), cols)
    for row, f in enumerate(free):
        N[row, f] = ring.one
        for i in range(r):
            N[row, piv[i]] = ring.neg(R[i, f])
    return N


# ---------------------------------------------------------------- subspaces

def span(ring, n, rows):
    rows = as_matrix(ring, rows) if len(rows) else ring.zeros(0, n)
    return Subspace(ring, n, rows)


def zero_space(ring, n):
    return Subspace(ring, n, ring.zeros(0, n), canonical=True)


def full_space(ring, n):
    return Subspace(ring, n, ring.eye(n), canonical=True)


def kernel(ring, m):
    """{v : m v = 0} as a subspace of K^cols."""
    m = as_matrix(ring, m)
    return Subspace(ring, m.shape[1], null_rows(ring, m))


def image(ring, m):
    """Column space of m."""
    m = as_matrix(ring, m)
    return Subspace(ring, m.shape[0], transpose(m))


def _check(x, y):
    if x.n != y.n:
        raise DimensionError(f"ambient mismatch {x.n} vs {y.n}")
    if x.ring != y.ring:
        raise DimensionError(f"ring mismatch {x.ring} vs {y.ring}")


def join(x, y):
    _check(x, y)
    if x.dim == 0:
        return y
    if y.dim == 0:
        return x
    return Subspace(x.ring, x.n, np.concatenate([x.basis, y.basis]))


def project_solutions(ring, M, O, out_n):
    """Span of c @ O over all coefficient rows c with c @ M = 0.

    The single solver behind meet and every relation operation.
    """
    if M.shape[0] == 0:
        return zero_space(ring, out_n)
    R = ring.left_null_project(M, O)
    return Subspace(ring, out_n, R, canonical=True)


def meet(x, y):
    _check(x, y)
    ring = x.ring
    if x.dim == 0 or y.dim == 0:
        return zero_space(ring, x.n)
    # c.X - d.Y = 0, output c.X
    M = np.concatenate([x.basis, ring.mat_neg(y.basis)])
    O = np.concatenate([x.basis, ring.zeros(y.dim, x.n)])
    return project_solutions(ring, M, O, x.n)


def is_subspace(x, y):
    """x contained in y."""
    _check(x, y)
    return join(x, y).dim == y.dim


def is_transversal(x, a):
    _check(x, a)
    return x.dim + a.dim == x.n and join(x, a).dim == x.n


def complement(x):
    """Standard basis vectors at the non-pivot columns of x."""
    ring = x.ring
    R, r, piv = ring.rref(x.basis) if x.dim else (x.basis, 0, np.zeros(0, dtype=np.int64))
    pivset = set(int(p) for p in piv[:r])
    free = [c for c in range(x.n) if c not in pivset]
    rows = ring.eye(x.n)[free] if free else ring.zeros(0, x.n)
    return Subspace(ring, x.n, rows, canonical=True)


def annihilator_rows(x):
    """Rows h with h . v = 0 for all v in x; w in x iff H w = 0."""
    return null_rows(x.ring, x.basis) if x.dim else x.ring.eye(x.n)


def apply(m, x):
    """Direct image m(x) = row space of basis @ m.T."""
    ring = x.ring
    m = as_matrix(ring, m)
    if m.shape[1] != x.n:
        raise DimensionError(f"matrix with {m.shape[1]} columns applied to K^{x.n}")
    if x.dim == 0:
        return zero_space(ring, m.shape[0])
    return Subspace(ring, m.shape[0], ring.matmul(x.basis, transpose(m)))


def preimage(m, x):
    """{v : m v in x}."""
    ring = x.ring
    m = as_matrix(ring, m)
    if m.shape[0] != x.n:
        raise DimensionError(f"matrix with {m.shape[0]} rows, target K^{x.n}")
    if x.dim == x.n:
        return full_space(ring, m.shape[1])
    H = annihilator_rows(x)
    return kernel(ring, ring.matmul(H, m))


def projection_matrix(x, a):
    """P with image x and kernel a; requires x and a transversal."""
    _check(x, a)
    if not is_transversal(x, a):
        raise NotTransversal("projection needs W = x + a direct")
    ring = x.ring
    n = x.n
    T = transpose(np.concatenate([x.basis, a.basis]))
    D = ring.zeros(n, n)
    for i in range(x.dim):
        D[i, i] = ring.one
    return ring.matmul(ring.matmul(T, D), inverse(ring, T))


# ---------------------------------------------------------------- enumeration

def gaussian_binomial(n, k, q):
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def count_subspaces(n, ring):
    if not ring.is_finite:
        raise NotEnumerable(f"{ring.name} is infinite")
    q = ring.order
    return sum(gaussian_binomial(n, k, q) for k in range(n + 1))


def enumerate_subspaces(n, ring, dims=None, limit=None):
    """All subspaces of K^n, by dimension then lexicographic RREF basis."""
    total = count_subspaces(n, ring)
    limit = enumeration_limit() if limit is None else limit
    if total > limit:
        raise LimitExceeded(f"{total} subspaces exceed the limit {limit}")
    elems = list(ring.elements())
    out = []
    for k in range(n + 1) if dims is None else dims:
        level = []
        for piv in itertools.combinations(range(n), k):
            pset = set(piv)
            slots = [(i, j) for i, p in enumerate(piv) for j in range(p + 1, n) if j not in pset]
            for vals in itertools.product(elems, repeat=len(slots)):
                B = np.zeros((k, n), dtype=np.int64)
                for i, p in enumerate(piv):
                    B[i, p] = 1
                for (i, j), v in zip(slots, vals):
                    B[i, j] = v
                level.append(B)
        level.sort(key=lambda B: tuple(B.ravel().tolist()))
        out.extend(Subspace(ring, n, B, canonical=True) for B in level)
    return out
