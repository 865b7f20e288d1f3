"""Nondegenerate (skew-)Hermitian forms, orthocomplements and involutions.

beta(v, w) = conj(v)^T B w: conjugate linear in the first slot, linear in
the second.  Over a ring with trivial involution this is an ordinary
symmetric or alternating bilinear form.
"""
from functools import lru_cache

import numpy as np

from . import exactlinalg as el
from .errors import DegenerateForm, DimensionError, NotCompatible, ParseError
from .scalars import ring_from_name

KINDS = ("hermitian", "skew_hermitian")
FAMILIES = ("symplectic", "hyperbolic", "signature")


class FormDescriptor:
    __slots__ = ("ring", "n", "gram", "kind", "alternating", "_key")

    def __init__(self, ring, gram, kind):
        gram = el.as_matrix(ring, gram)
        n = gram.shape[0]
        if gram.shape != (n, n):
            raise DimensionError("Gram matrix must be square")
        if kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        if not el.is_invertible_matrix(ring, gram):
            raise DegenerateForm("Gram matrix is singular")
        ct = el.transpose(ring.mat_conj(gram))
        target = gram if kind == "hermitian" else ring.mat_neg(gram)
        if not np.array_equal(ct, target):
            raise NotCompatible(f"Gram matrix is not {kind}")
        self.ring = ring
        self.n = n
        self.gram = gram
        self.kind = kind
        # beta(v, v) = 0 for all v; only possible with trivial involution
        self.alternating = (not ring.has_conjugation
                            and np.array_equal(el.transpose(gram), ring.mat_neg(gram))
                            and all(ring.is_zero(gram[i, i]) for i in range(n)))
        self._key = (ring.name, kind, ring.key_of(gram))

    def __eq__(self, other):
        return isinstance(other, FormDescriptor) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"<{self.kind} form on {self.ring.name}^{self.n}>"

    def value(self, v, w):
        ring = self.ring
        v = el.as_matrix(ring, [v]) if not isinstance(v, np.ndarray) else v.reshape(1, -1)
        w = el.as_matrix(ring, [w]) if not isinstance(w, np.ndarray) else w.reshape(1, -1)
        return ring.matmul(ring.matmul(ring.mat_conj(v), self.gram), el.transpose(w))[0, 0]

    def to_json(self):
        return {"n": self.n, "ring": self.ring.name, "kind": self.kind,
                "gram": [[self.ring.format(v) for v in r] for r in self.gram]}

    @classmethod
    def from_json(cls, obj, ring=None):
        try:
            ring = ring or ring_from_name(obj["ring"])
            return cls(ring, ring.array(obj["gram"]), obj["kind"])
        except ParseError:
            raise
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"malformed form: {e}") from None


def require_nondegenerate(form):
    if not isinstance(form, FormDescriptor):
        raise NotCompatible("expected a FormDescriptor")


def standard_gram(ring, family, m):
    """Omega_m, F_m or I_{m,m} on K^{2m}."""
    I = ring.eye(m)
    Z = ring.zeros(m, m)
    if family == "symplectic":
        return np.block([[Z, I], [ring.mat_neg(I), Z]]) if m else ring.zeros(0, 0)
    if family == "hyperbolic":
        return np.block([[Z, I], [I, Z]]) if m else ring.zeros(0, 0)
    if family == "signature":
        return np.block([[I, Z], [Z, ring.mat_neg(I)]]) if m else ring.zeros(0, 0)
    raise ParseError(f"unknown form family {family!r}")


@lru_cache(maxsize=None)
def standard_form(ring, family, m):
    kind = "skew_hermitian" if family == "symplectic" else "hermitian"
    return FormDescriptor(ring, standard_gram(ring, family, m), kind)


@lru_cache(maxsize=1 << 16)
def orthocomplement(form, x):
    """x^perp = {v : beta(v, xi) = 0 for xi in x} = kernel(conj(X B^T))."""
    if x.n != form.n or x.ring != form.ring:
        raise DimensionError("form and subspace live on different spaces")
    ring = form.ring
    if x.dim == 0:
        return el.full_space(ring, x.n)
    return el.kernel(ring, ring.mat_conj(ring.matmul(x.basis, el.transpose(form.gram))))


def is_isotropic(form, x):
    return el.is_subspace(x, orthocomplement(form, x))


def is_lagrangian(form, x):
    return orthocomplement(form, x) == x


def enumerate_lagrangians(form):
    if form.n % 2:
        return []
    return [x for x in el.enumerate_subspaces(form.n, form.ring, dims=[form.n // 2])
            if is_lagrangian(form, x)]


def is_adjoinable_pair(form, x, a):
    return el.is_transversal(x, a) and el.is_transversal(orthocomplement(form, x), orthocomplement(form, a))


def operator_adjoint(form, m):
    """m* = B^-1 conj(m)^T B."""
    ring = form.ring
    m = el.as_matrix(ring, m)
    return ring.matmul(ring.matmul(el.inverse(ring, form.gram), el.transpose(ring.mat_conj(m))), form.gram)


class InvolutionMap:
    """x -> g(x^perp) for a form and an optional invertible matrix g.

    Only the orthocomplement constructor and composition with inner
    automorphisms are offered, so every instance is a bijection of the
    whole Grassmannian; audit() checks order two pointwise.
    """

    __slots__ = ("form", "g", "mode", "label", "_cache")

    def __init__(self, form, g=None, mode="global", label=None):
        if mode not in ("restricted", "global"):
            raise ValueError("mode is 'restricted' or 'global'")
        self.form = form
        self.g = None if g is None else el.as_matrix(form.ring, g)
        self.mode = mode
        self.label = label or "perp"
        self._cache = {}

    @classmethod
    def orthocomplement(cls, form, mode="global"):
        return cls(form, None, mode, "perp")

    def composed(self, g, label=None):
        """The map x -> g(self(x))."""
        g = el.as_matrix(self.form.ring, g)
        g2 = g if self.g is None else self.form.ring.matmul(g, self.g)
        return InvolutionMap(self.form, g2, self.mode, label or f"g.{self.label}")

    @property
    def n(self):
        return self.form.n

    @property
    def ring(self):
        return self.form.ring

    def __call__(self, x):
        r = self._cache.get(x)
        if r is None:
            r = orthocomplement(self.form, x)
            if self.g is not None:
                r = el.apply(self.g, r)
            self._cache[x] = r
        return r

    def __repr__(self):
        return f"<involution {self.label} on {self.ring.name}^{self.n}>"

    def audit(self, points):
        """First x among points with tau(tau(x)) != x, or None."""
        for x in points:
            if self(self(x)) != x:
                return x
        return None

    def fixed_points(self, points):
        return [x for x in points if self(x) == x]
