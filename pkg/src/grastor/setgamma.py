"""Gamma evaluated literally on vector sets, for spaces with at most 64 vectors.

Each subspace of K^n is a bit mask over the q^n vectors.  The defining formula

    Gamma(x,a,y,b,z) = {zeta + alpha : alpha in a, zeta in z,
                        y meets (alpha + x) and (-zeta + b)}

becomes a few AND/OR operations on masks.  This shares no code with the
linear algebra routes, so it is a third independent evaluation of Gamma, and
it is fast enough for exhaustive sweeps over Gras(GF(2)^4).
"""
import itertools

import numpy as np

from . import exactlinalg as el
from ._kernels import BACKEND, _njit
from .errors import LimitExceeded, NotEnumerable

MAX_VECTORS = 64


# ---------------------------------------------------------------- kernels

def _gamma_loops(x, a, y, b, z, members, sizes, coset, vadd, vneg, ymask_of):
    ym = ymask_of[y]
    out = np.uint64(0)
    for i in range(sizes[a]):
        al = members[a, i]
        cx = coset[x, al] & ym
        if cx == 0:
            continue
        for j in range(sizes[z]):
            ze = members[z, j]
            if cx & coset[b, vneg[ze]]:
                out |= np.uint64(1) << np.uint64(vadd[ze, al])
    return out


def _batch_loops(T, members, sizes, coset, vadd, vneg, masks, lut, modulus):
    k = T.shape[0]
    res = np.empty(k, dtype=np.int64)
    for t in range(k):
        m = _gamma_nb(T[t, 0], T[t, 1], T[t, 2], T[t, 3], T[t, 4],
                      members, sizes, coset, vadd, vneg, masks)
        res[t] = lut[m % modulus]
    return res


def _triple_table_loops(a, y, b, members, sizes, coset, vadd, vneg, masks, lut, modulus, nvec):
    # T[x, z] = Gamma(x, a, y, b, z) for all x, z: R[zeta, x] collects the
    # contribution of each zeta, then T[:, z] is the OR over zeta in z
    S = masks.shape[0]
    ym = masks[y]
    R = np.zeros((nvec, S), dtype=np.uint64)
    for x in range(S):
        for i in range(sizes[a]):
            al = members[a, i]
            cx = coset[x, al] & ym
            if cx == 0:
                continue
            for ze in range(nvec):
                if cx & coset[b, vneg[ze]]:
                    R[ze, x] |= np.uint64(1) << np.uint64(vadd[ze, al])
    T = np.empty((S, S), dtype=np.int64)
    acc = np.empty(S, dtype=np.uint64)
    for z in range(S):
        acc[:] = 0
        for j in range(sizes[z]):
            acc |= R[members[z, j]]
        for x in range(S):
            T[x, z] = lut[acc[x] % modulus]
    return T


def _sweep_loops(perm, members, sizes, coset, vadd, vneg, masks, lut, modulus, nvec):
    # tau Gamma(x,a,y,b,z) == Gamma(tau z, tau a, tau y, tau b, tau x) for all tuples;
    # returns (x, a, y, b, z) of the first failure or -1s
    S = masks.shape[0]
    bad = np.full(5, -1, dtype=np.int64)
    for a in range(S):
        for y in range(S):
            for b in range(S):
                ta, ty, tb = perm[a], perm[y], perm[b]
                if (ta, ty, tb) < (a, y, b):
                    continue
                T = _triple_nb(a, y, b, members, sizes, coset, vadd, vneg, masks, lut, modulus, nvec)
                if (ta, ty, tb) == (a, y, b):
                    T2 = T
                else:
                    T2 = _triple_nb(ta, ty, tb, members, sizes, coset, vadd, vneg, masks, lut, modulus, nvec)
                for x in range(S):
                    for z in range(S):
                        if perm[T[x, z]] != T2[perm[z], perm[x]]:
                            bad[0] = x
                            bad[1] = a
                            bad[2] = y
                            bad[3] = b
                            bad[4] = z
                            return bad
    return bad


_gamma_nb = _njit(_gamma_loops)
_triple_nb = _njit(_triple_table_loops)
_batch_nb = _njit(_batch_loops)
_sweep_nb = _njit(_sweep_loops)


def _gamma_np(x, a, y, b, z, members, sizes, coset, vadd, vneg, masks):
    A = members[a, : sizes[a]]
    Z = members[z, : sizes[z]]
    hit = (coset[x, A][:, None] & masks[y] & coset[b, vneg[Z]][None, :]) != 0
    bits = vadd[Z[None, :], A[:, None]][hit].astype(np.uint64)
    return np.bitwise_or.reduce(np.uint64(1) << bits) if bits.size else np.uint64(0)


def _triple_np(a, y, b, members, sizes, coset, vadd, vneg, masks, lut, modulus, nvec, member_bool):
    A = members[a, : sizes[a]]
    ze = np.arange(nvec)
    # hit[x, alpha, zeta]
    hit = (coset[:, A][:, :, None] & masks[y] & coset[b, vneg[ze]][None, None, :]) != 0
    bits = np.uint64(1) << vadd[ze[None, :], A[:, None]].astype(np.uint64)
    R = np.bitwise_or.reduce(np.where(hit, bits[None], np.uint64(0)), axis=1)
    T = np.bitwise_or.reduce(np.where(member_bool[None, :, :], R[:, None, :], np.uint64(0)), axis=2)
    return lut[T % modulus]


# ---------------------------------------------------------------- engine

class VectorSetEngine:
    """Bit-mask Gamma on Gras(K^n) for q^n <= 64; subspaces addressed by index."""

    def __init__(self, ring, n, backend=None):
        if not ring.is_finite or ring.dtype is object:
            raise NotEnumerable("vector-set engine needs a finite field")
        nvec = ring.order ** n
        if nvec > MAX_VECTORS:
            raise LimitExceeded(f"{nvec} vectors exceed the 64-bit mask engine")
        self.ring, self.n, self.nvec = ring, n, nvec
        self.backend = backend or BACKEND
        q = ring.order
        vecs = np.array(list(itertools.product(range(q), repeat=n)), dtype=np.int64).reshape(nvec, n)
        self.vecs = vecs
        weights = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
        add_t, mul_t, neg_t, _ = ring.tables
        self.vadd = (add_t[vecs[:, None, :], vecs[None, :, :]] * weights).sum(axis=2)
        self.vneg = (neg_t[vecs] * weights).sum(axis=1)
        self.points = el.enumerate_subspaces(n, ring)
        S = len(self.points)
        self.index = {s: i for i, s in enumerate(self.points)}
        members = np.full((S, nvec), -1, dtype=np.int64)
        sizes = np.zeros(S, dtype=np.int64)
        for i, s in enumerate(self.points):
            k = s.dim
            if k == 0:
                idx = np.array([0])
            else:
                combos = np.array(list(itertools.product(range(q), repeat=k)), dtype=np.int64)
                span = ring.matmul(combos, np.asarray(s.basis))
                idx = np.unique((span * weights).sum(axis=1))
            members[i, : idx.size] = idx
            sizes[i] = idx.size
        self.members, self.sizes = members, sizes
        self.member_bool = np.zeros((S, nvec), dtype=bool)
        for i in range(S):
            self.member_bool[i, members[i, : sizes[i]]] = True
        # coset[s, v] = mask of v + s
        coset = np.zeros((S, nvec), dtype=np.uint64)
        for i in range(S):
            M = members[i, : sizes[i]]
            for v in range(nvec):
                coset[i, v] = np.bitwise_or.reduce(np.uint64(1) << self.vadd[v, M].astype(np.uint64))
        self.coset = coset
        self.masks = coset[:, 0].copy()
        # mask -> index through the smallest modulus separating all masks
        modulus = S
        while len(set((self.masks % np.uint64(modulus)).tolist())) < S:
            modulus += 1
        self.modulus = np.uint64(modulus)
        self.lut = np.full(modulus, -1, dtype=np.int64)
        self.lut[(self.masks % self.modulus).astype(np.int64)] = np.arange(S)

    def _args(self):
        return self.members, self.sizes, self.coset, self.vadd, self.vneg, self.masks

    def mask_to_index(self, m):
        return int(self.lut[np.uint64(m) % self.modulus])

    def gamma_index(self, x, a, y, b, z):
        f = _gamma_nb if self.backend == "numba" else _gamma_np
        return self.mask_to_index(f(x, a, y, b, z, *self._args()))

    def gamma(self, x, a, y, b, z):
        i = [self.index[s] for s in (x, a, y, b, z)]
        return self.points[self.gamma_index(*i)]

    def gamma_batch(self, T):
        """Gamma for each row (x, a, y, b, z) of an index array."""
        T = np.ascontiguousarray(T, dtype=np.int64)
        if self.backend == "numba":
            return _batch_nb(T, *self._args(), self.lut, self.modulus)
        f = _gamma_np
        ms = np.array([f(*row, *self._args()) for row in T], dtype=np.uint64)
        return self.lut[ms % self.modulus]

    def triple_table(self, a, y, b):
        """T[x, z] = Gamma(x, a, y, b, z) over all indices."""
        if self.backend == "numba":
            return _triple_nb(a, y, b, *self._args(), self.lut, self.modulus, self.nvec)
        return _triple_np(a, y, b, *self._args(), self.lut, self.modulus, self.nvec, self.member_bool)

    def permutation(self, f):
        """A map on subspaces as an index permutation."""
        return np.array([self.index[f(s)] for s in self.points], dtype=np.int64)

    def involution_sweep(self, f):
        """Check tau Gamma(x,a,y,b,z) = Gamma(tau z, tau a, tau y, tau b, tau x) on every tuple.

        Returns None or the first failing tuple as subspaces.
        """
        perm = self.permutation(f)
        if self.backend == "numba":
            bad = _sweep_nb(perm, *self._args(), self.lut, self.modulus, self.nvec)
        else:
            bad = self._sweep_numpy(perm)
        if bad[0] < 0:
            return None
        return tuple(self.points[i] for i in bad)

    def _sweep_numpy(self, perm):
        S = len(self.points)
        for a, y, b in itertools.product(range(S), repeat=3):
            t2 = (int(perm[a]), int(perm[y]), int(perm[b]))
            if t2 < (a, y, b):
                continue
            T = self.triple_table(a, y, b)
            T2 = T if t2 == (a, y, b) else self.triple_table(*t2)
            bad = perm[T] != T2[perm[None, :], perm[:, None]]
            if bad.any():
                x, z = np.argwhere(bad)[0]
                return np.array([x, a, y, b, z])
        return np.full(5, -1)
