"""Exact scalar rings with involution.

Elements are plain immutable values:
  GF(p)          int code 0..p-1
  GF(p^2)        int code a + b*p for a + b*t, t^2 = d (least nonresidue)
  QQ             fractions.Fraction
  dual towers    tuple of 2**depth base coefficients, index bits = epsilons present

Each ring also carries the matrix layer used by exactlinalg: finite
fields store matrices as int64 code arrays and run the compiled
kernels, the other rings use object arrays and Python Gauss-Jordan.
"""
import itertools
import re
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import NotInvertible, ParseError


def is_prime(p):
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def least_nonresidue(p):
    for d in range(2, p):
        if pow(d, (p - 1) // 2, p) == p - 1:
            return d
    raise ValueError(f"no quadratic nonresidue mod {p}")


class ScalarRing:
    """Common interface; subclasses fill in element arithmetic."""

    is_finite = False
    is_field = True
    has_conjugation = False
    characteristic = 0
    name = "?"

    def __eq__(self, other):
        return isinstance(other, ScalarRing) and self.name == other.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return self.name

    # element level
    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def from_int(self, k):
        raise NotImplementedError

    @property
    def zero(self):
        return self.from_int(0)

    @property
    def one(self):
        return self.from_int(1)

    def elements(self):
        raise NotImplementedError(f"{self.name} is not finite")

    def coerce(self, v):
        """Accept an int, a string or an existing element."""
        if isinstance(v, str):
            return self.parse(v)
        if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
            return self.from_int(int(v))
        return v

    def pow(self, x, e):
        r = self.one
        base = x
        while e:
            if e & 1:
                r = self.mul(r, base)
            base = self.mul(base, base)
            e >>= 1
        return r

    # matrix level, generic object-array implementation
    dtype = object

    def array(self, rows, cols=None):
        rows = [list(r) for r in rows]
        if not rows:
            return self.zeros(0, cols or 0)
        out = np.empty((len(rows), len(rows[0])), dtype=object)
        for i, r in enumerate(rows):
            if len(r) != out.shape[1]:
                raise ParseError("ragged matrix")
            for j, v in enumerate(r):
                out[i, j] = self.coerce(v)
        return out

    def zeros(self, r, c):
        out = np.empty((r, c), dtype=object)
        out.fill(self.zero)
        return out

    def eye(self, n):
        out = self.zeros(n, n)
        for i in range(n):
            out[i, i] = self.one
        return out

    def mat_add(self, A, B):
        return _elementwise2(self.add, A, B)

    def mat_sub(self, A, B):
        return _elementwise2(self.sub, A, B)

    def mat_neg(self, A):
        return _elementwise1(self.neg, A)

    def mat_conj(self, A):
        return _elementwise1(self.conj, A)

    def mat_scale(self, s, A):
        return _elementwise1(lambda v: self.mul(s, v), A)

    def matmul(self, A, B):
        n, m = A.shape
        if B.shape[0] != m:
            raise ValueError("shape mismatch")
        out = self.zeros(n, B.shape[1])
        for i in range(n):
            for j in range(B.shape[1]):
                acc = self.zero
                for k in range(m):
                    acc = self.add(acc, self.mul(A[i, k], B[k, j]))
                out[i, j] = acc
        return out

    def is_zero(self, v):
        return v == self.zero

    def rref(self, M):
        """Gauss-Jordan on a copy; returns (R, rank, pivots).

        Pivots are chosen as the first invertible entry of a column, which
        is canonical over fields and a valid elimination over local rings.
        """
        M = M.copy()
        rows, cols = M.shape
        pivots = []
        r = 0
        for c in range(cols):
            if r == rows:
                break
            k = next((i for i in range(r, rows) if self.is_invertible(M[i, c])), None)
            if k is None:
                continue
            if k != r:
                M[[r, k]] = M[[k, r]]
            s = self.inv(M[r, c])
            M[r] = [self.mul(s, v) for v in M[r]]
            for i in range(rows):
                if i != r and not self.is_zero(M[i, c]):
                    f = M[i, c]
                    M[i] = [self.sub(M[i, j], self.mul(f, M[r, j])) for j in range(cols)]
            pivots.append(c)
            r += 1
        return M, r, np.array(pivots, dtype=np.int64)

    def left_null_project(self, M, O):
        """Rows of rref(C @ O) where C spans {c : c @ M = 0}."""
        R, rank, piv = self.rref(M.T.copy())
        cols = R.shape[1]
        free = [f for f in range(cols) if f not in set(piv.tolist())]
        C = self.zeros(len(free), cols)
        for row, f in enumerate(free):
            C[row, f] = self.one
            for i in range(rank):
                C[row, piv[i]] = self.neg(R[i, f])
        out, r2, _ = self.rref(self.matmul(C, O))
        return out[:r2]

    def key_of(self, A):
        return tuple(tuple(r) for r in A)


def _elementwise1(f, A):
    out = np.empty(A.shape, dtype=object)
    for idx in np.ndindex(A.shape):
        out[idx] = f(A[idx])
    return out


def _elementwise2(f, A, B):
    if A.shape != B.shape:
        raise ValueError("shape mismatch")
    out = np.empty(A.shape, dtype=object)
    for idx in np.ndindex(A.shape):
        out[idx] = f(A[idx], B[idx])
    return out


class FiniteField(ScalarRing):
    """A finite field given by its code tables."""

    is_finite = True
    dtype = np.int64

    def _build(self, add, mul, conj):
        q = self.order
        self.add_t = np.ascontiguousarray(add, dtype=np.int64)
        self.mul_t = np.ascontiguousarray(mul, dtype=np.int64)
        self.neg_t = np.array([int(np.flatnonzero(self.add_t[x] == 0)[0]) for x in range(q)], dtype=np.int64)
        inv = np.zeros(q, dtype=np.int64)
        for x in range(1, q):
            inv[x] = int(np.flatnonzero(self.mul_t[x] == 1)[0])
        self.inv_t = inv
        self.conj_t = np.ascontiguousarray(conj, dtype=np.int64)
        for t in (self.add_t, self.mul_t, self.neg_t, self.inv_t, self.conj_t):
            t.setflags(write=False)
        self.tables = (self.add_t, self.mul_t, self.neg_t, self.inv_t)

    def from_int(self, k):
        return int(k) % self.characteristic

    def add(self, x, y):
        return int(self.add_t[x, y])

    def neg(self, x):
        return int(self.neg_t[x])

    def mul(self, x, y):
        return int(self.mul_t[x, y])

    def inv(self, x):
        if x == 0:
            raise NotInvertible(f"0 has no inverse in {self.name}")
        return int(self.inv_t[x])

    def conj(self, x):
        return int(self.conj_t[x])

    def is_invertible(self, x):
        return x != 0

    def elements(self):
        return range(self.order)

    # matrices
    def array(self, rows, cols=None):
        rows = [list(r) for r in rows]
        if not rows:
            return np.zeros((0, cols or 0), dtype=np.int64)
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ParseError("ragged matrix")
        return np.array([[self.coerce(v) for v in r] for r in rows], dtype=np.int64).reshape(len(rows), width)

    def coerce(self, v):
        if isinstance(v, str):
            return self.parse(v)
        v = int(v)
        if self.order == self.characteristic:
            return v % self.order
        if not 0 <= v < self.order:
            raise ParseError(f"code {v} out of range for {self.name}")
        return v

    def zeros(self, r, c):
        return np.zeros((r, c), dtype=np.int64)

    def eye(self, n):
        return np.eye(n, dtype=np.int64)

    def mat_add(self, A, B):
        return self.add_t[A, B]

    def mat_sub(self, A, B):
        return self.add_t[A, self.neg_t[B]]

    def mat_neg(self, A):
        return self.neg_t[A]

    def mat_conj(self, A):
        return self.conj_t[A]

    def mat_scale(self, s, A):
        return self.mul_t[s, A]

    def matmul(self, A, B):
        if A.shape[1] != B.shape[0]:
            raise ValueError("shape mismatch")
        if A.shape[1] == 0:
            return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        return _kernels.matmul(np.ascontiguousarray(A), np.ascontiguousarray(B), self.add_t, self.mul_t)

    def is_zero(self, v):
        return v == 0

    def rref(self, M):
        M = np.array(M, dtype=np.int64, copy=True, order="C")
        if M.size == 0:
            return M, 0, np.zeros(0, dtype=np.int64)
        rank, piv = _kernels.rref(M, *self.tables)
        return M, int(rank), piv

    def left_null_project(self, M, O):
        if M.shape[0] == 0:
            return np.zeros((0, O.shape[1]), dtype=np.int64)
        if M.shape[1] == 0:
            R, rank, _ = self.rref(O)
            return R[:rank]
        return _kernels.left_null_project(np.ascontiguousarray(M), np.ascontiguousarray(O), *self.tables)

    def key_of(self, A):
        return A.tobytes()


class PrimeField(FiniteField):
    def __init__(self, p):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = self.characteristic = self.order = p
        self.name = f"GF({p})"
        r = np.arange(p)
        self._build((r[:, None] + r[None, :]) % p, (r[:, None] * r[None, :]) % p, r)

    def parse(self, s):
        s = s.strip()
        try:
            v = int(s)
        except ValueError:
            raise ParseError(f"bad {self.name} element {s!r}") from None
        return v % self.p

    def format(self, x):
        return str(int(x))




class QuadraticField(FiniteField):
    """GF(p^2) = GF(p)[t]/(t^2 - d); involution a+bt -> a-bt (= x^p) when enabled."""

    def __init__(self, p, conjugation=True):
        if not is_prime(p) or p == 2:
            raise ValueError("quadratic extension needs an odd prime")
        self.p = self.characteristic = p
        self.order = p * p
        self.d = least_nonresidue(p)
        self.has_conjugation = bool(conjugation)
        self.name = f"GF({p}^2)" + ("" if conjugation else "[id]")
        q = p * p
        a, b = np.divmod(np.arange(q), p)[::-1]  # code = a + b*p
        add = ((a[:, None] + a[None, :]) % p) + p * ((b[:, None] + b[None, :]) % p)
        ra = (a[:, None] * a[None, :] + self.d * b[:, None] * b[None, :]) % p
        rb = (a[:, None] * b[None, :] + b[:, None] * a[None, :]) % p
        mul = ra + p * rb
        conj = a + p * ((-b) % p) if conjugation else np.arange(q)
        self._build(add, mul, conj)

    def make(self, a, b=0):
        return a % self.p + self.p * (b % self.p)

    def parts(self, x):
        return x % self.p, x // self.p

    def parse(self, s):
        """Accepts 'a', 'b*t', 'bt', 'a+b*t', 'a-t' and similar."""
        text = s.replace(" ", "")
        try:
            if "t" not in text:
                return self.make(int(text))
            if not text.endswith("t") or text.count("t") != 1:
                raise ValueError
            head = text[:-1].rstrip("*")
            cut = max(head.rfind("+"), head.rfind("-"))
            a_part, b_part = (head[:cut], head[cut:]) if cut > 0 else ("", head)
            if b_part in ("", "+", "-"):
                b_part += "1"
            return self.make(int(a_part) if a_part else 0, int(b_part))
        except ValueError:
            raise ParseError(f"bad {self.name} element {s!r}") from None

    def format(self, x):
        a, b = self.parts(int(x))
        if b == 0:
            return str(a)
        if a == 0:
            return f"{b}*t"
        return f"{a}+{b}*t"


class Rationals(ScalarRing):
    name = "QQ"

    def from_int(self, k):
        return Fraction(k)

    def add(self, x, y):
        return x + y

    def sub(self, x, y):
        return x - y

    def neg(self, x):
        return -x

    def mul(self, x, y):
        return x * y

    def inv(self, x):
        if x == 0:
            raise NotInvertible("0 has no inverse in QQ")
        return 1 / Fraction(x)

    def conj(self, x):
        return x

    def is_invertible(self, x):
        return x != 0

    def coerce(self, v):
        if isinstance(v, str):
            return self.parse(v)
        return Fraction(v)

    def parse(self, s):
        try:
            return Fraction(s.strip())
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad rational {s!r}") from None

    def format(self, x):
        return str(Fraction(x))


class DualTower(ScalarRing):
    """K[e1]...[e_depth] with e_i^2 = 0; coefficient index bit i = e_(i+1)."""

    is_field = False

    def __init__(self, base, depth):
        if depth not in (0, 1, 2):
            raise ValueError("depth must be 0, 1 or 2")
        self.base = base
        self.depth = depth
        self.size = 1 << depth
        self.characteristic = base.characteristic
        self.is_finite = base.is_finite
        self.has_conjugation = base.has_conjugation
        self.name = base.name + "".join(f"[e{i + 1}]" for i in range(depth))

    def from_int(self, k):
        b = self.base
        return (b.from_int(k),) + (b.zero,) * (self.size - 1)

    def embed(self, x):
        return (x,) + (self.base.zero,) * (self.size - 1)

    def eps(self, i, coeff=None):
        """The element coeff * e_i (i = 1..depth)."""
        b = self.base
        out = [b.zero] * self.size
        out[1 << (i - 1)] = b.one if coeff is None else coeff
        return tuple(out)

    def coeff(self, x, mask):
        return x[mask]

    def add(self, x, y):
        return tuple(self.base.add(u, v) for u, v in zip(x, y))

    def sub(self, x, y):
        return tuple(self.base.sub(u, v) for u, v in zip(x, y))

    def neg(self, x):
        return tuple(self.base.neg(u) for u in x)

    def mul(self, x, y):
        b = self.base
        out = [b.zero] * self.size
        for i, u in enumerate(x):
            if b.is_zero(u):
                continue
            for j, v in enumerate(y):
                if i & j == 0 and not b.is_zero(v):
                    out[i | j] = b.add(out[i | j], b.mul(u, v))
        return tuple(out)

    def conj(self, x):
        return tuple(self.base.conj(u) for u in x)

    def is_invertible(self, x):
        return self.base.is_invertible(x[0])

    def is_zero(self, v):
        return all(self.base.is_zero(u) for u in v)

    def inv(self, x):
        if not self.is_invertible(x):
            raise NotInvertible(f"{self.format(x)} is not invertible in {self.name}")
        # x = x0 (1 + m) with m nilpotent of order <= depth + 1
        s = self.embed(self.base.inv(x[0]))
        m = self.sub(self.mul(s, x), self.one)
        acc = self.one
        term = self.one
        for _ in range(self.depth):
            term = self.neg(self.mul(term, m))
            acc = self.add(acc, term)
        return self.mul(acc, s)

    def coerce(self, v):
        if isinstance(v, str):
            return self.parse(v)
        if isinstance(v, tuple):
            if len(v) != self.size:
                raise ParseError(f"need {self.size} coefficients")
            return tuple(self.base.coerce(u) for u in v)
        return self.embed(self.base.coerce(v))

    def parse(self, s):
        s = s.strip()
        if s.startswith("(") and s.endswith(")"):
            parts = [t for t in s[1:-1].split(",") if t.strip()]
            if len(parts) != self.size:
                raise ParseError(f"need {self.size} coefficients in {s!r}")
            return tuple(self.base.parse(t) for t in parts)
        return self.embed(self.base.parse(s))

    def format(self, x):
        return "(" + ",".join(self.base.format(u) for u in x) + ")"

    def elements(self):
        return list(itertools.product(list(self.base.elements()), repeat=self.size))


@lru_cache(maxsize=None)
def prime_field(p):
    return PrimeField(p)


@lru_cache(maxsize=None)
def quadratic_field(p, conjugation=True):
    return QuadraticField(p, conjugation)


@lru_cache(maxsize=None)
def rationals():
    return Rationals()


@lru_cache(maxsize=None)
def dual_tower(base, depth):
    return base if depth == 0 else DualTower(base, depth)


def make_ring(p=None, ext=False, conjugation=True):
    """Ring from CLI-style options: p=None gives QQ."""
    if p is None or p == 0:
        return rationals()
    return quadratic_field(p, conjugation) if ext else prime_field(p)


_NAME_RE = re.compile(r"^GF\((\d+)(\^2)?\)(\[id\])?$")


def ring_from_name(name):
    """Inverse of ScalarRing.name for the base rings."""
    name = name.strip()
    if name in ("QQ", "Q"):
        return rationals()
    m = _NAME_RE.match(name)
    if not m:
        raise ParseError(f"unknown ring {name!r}")
    p = int(m.group(1))
    if not is_prime(p):
        raise ParseError(f"{p} is not prime")
    if m.group(2):
        return quadratic_field(p, conjugation=not m.group(3))
    return prime_field(p)
