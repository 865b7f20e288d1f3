"""Linear relations F in W + W, stored as canonical carriers (input | output).

compose(G, F) means "first F, then G", as in operator notation G o F.
compose, difference, sum and image all run through the one solver
exactlinalg.project_solutions; gen_projection is written down directly
from its generators, so the two routes can be checked against each other.
"""
from functools import lru_cache

import numpy as np

from . import exactlinalg as el
from .errors import DimensionError, InvariantViolation
from .exactlinalg import Subspace


class LinearRelation:
    __slots__ = ("n", "carrier")

    def __init__(self, carrier, n=None):
        if n is None:
            n = carrier.n // 2
        if carrier.n != 2 * n:
            raise DimensionError("carrier must live in W + W")
        self.n = n
        self.carrier = carrier

    @property
    def ring(self):
        return self.carrier.ring

    @property
    def dim(self):
        return self.carrier.dim

    def blocks(self):
        B = self.carrier.basis
        return B[:, : self.n], B[:, self.n:]

    def __eq__(self, other):
        return isinstance(other, LinearRelation) and self.carrier == other.carrier

    def __hash__(self):
        return hash(self.carrier)

    def __repr__(self):
        return f"<relation on {self.ring.name}^{self.n} dim {self.dim}>"

    def to_json(self):
        d = self.carrier.to_json()
        d["half_dim"] = self.n
        return d

    @classmethod
    def from_json(cls, obj, ring=None):
        return cls(Subspace.from_json(obj, ring), int(obj.get("half_dim", obj["n"] // 2)))

    def is_graph(self):
        """True when F is the graph of an everywhere defined map."""
        dom, _, _, indef = rel_parts(self)
        return dom.dim == self.n and indef.dim == 0

    def matrix(self):
        """The matrix m with F = graph(m); requires is_graph()."""
        if not self.is_graph():
            raise InvariantViolation("relation is not the graph of a map")
        Fi, Fo = self.blocks()
        # canonical carrier of a graph is [I | m^T]
        return el.transpose(Fo)


def _same(F, G):
    if F.n != G.n or F.ring != G.ring:
        raise DimensionError("relations on different spaces")


def _from_rows(ring, n, rows, canonical=False):
    return LinearRelation(Subspace(ring, 2 * n, rows, canonical=canonical), n)


def graph(ring, m):
    """{(v, m v)}: rows [I | m^T]."""
    m = el.as_matrix(ring, m)
    n = m.shape[0]
    if m.shape != (n, n):
        raise DimensionError("graph needs a square matrix")
    return _from_rows(ring, n, np.concatenate([ring.eye(n), el.transpose(m)], axis=1), canonical=True)


def identity(ring, n):
    return graph(ring, ring.eye(n))


def full_relation(ring, n):
    return LinearRelation(el.full_space(ring, 2 * n), n)


def zero_relation(ring, n):
    return LinearRelation(el.zero_space(ring, 2 * n), n)


def product_relation(x, y):
    """x times y as a relation {(v, w) : v in x, w in y}."""
    ring, n = x.ring, x.n
    rows = np.concatenate([
        np.concatenate([x.basis, ring.zeros(x.dim, n)], axis=1),
        np.concatenate([ring.zeros(y.dim, n), y.basis], axis=1),
    ])
    return _from_rows(ring, n, rows)


def _first_block(F):
    return el.Subspace(F.ring, F.n, F.blocks()[0])


def _second_block(F):
    return el.Subspace(F.ring, F.n, F.blocks()[1])


def rel_parts(F):
    """(domain, image, kernel, indefiniteness)."""
    ring, n = F.ring, F.n
    W = el.full_space(ring, n)
    Z = el.zero_space(ring, n)
    dom = _first_block(F)
    im = _second_block(F)
    ker = _first_block(LinearRelation(el.meet(F.carrier, product_relation(W, Z).carrier), n))
    indef = _second_block(LinearRelation(el.meet(F.carrier, product_relation(Z, W).carrier), n))
    return dom, im, ker, indef


def _solve(ring, n, M, O):
    return LinearRelation(el.project_solutions(ring, M, O, 2 * n), n)


def compose(G, F):
    """G o F = {(u, w) : exists v, (u, v) in F, (v, w) in G}."""
    _same(F, G)
    ring, n = F.ring, F.n
    Fi, Fo = F.blocks()
    Gi, Go = G.blocks()
    # c.Fo - d.Gi = 0, output (c.Fi, d.Go)
    M = np.concatenate([Fo, ring.mat_neg(Gi)])
    O = np.concatenate([
        np.concatenate([Fi, ring.zeros(F.dim, n)], axis=1),
        np.concatenate([ring.zeros(G.dim, n), Go], axis=1),
    ])
    return _solve(ring, n, M, O)


def rel_inverse(F):
    Fi, Fo = F.blocks()
    return _from_rows(F.ring, F.n, np.concatenate([Fo, Fi], axis=1))


def _combine(F, G, sign):
    # {(xi, alpha + sign*beta) : (xi, alpha) in F, (xi, beta) in G}
    _same(F, G)
    ring, n = F.ring, F.n
    Fi, Fo = F.blocks()
    Gi, Go = G.blocks()
    M = np.concatenate([Fi, ring.mat_neg(Gi)])
    Go = Go if sign > 0 else ring.mat_neg(Go)
    O = np.concatenate([
        np.concatenate([Fi, Fo], axis=1),
        np.concatenate([ring.zeros(G.dim, n), Go], axis=1),
    ])
    return _solve(ring, n, M, O)


def rel_diff(F, G):
    """F - G."""
    return _combine(F, G, -1)


def rel_sum(F, G):
    """F + G."""
    return _combine(F, G, +1)


def rel_neg(F):
    Fi, Fo = F.blocks()
    return _from_rows(F.ring, F.n, np.concatenate([Fi, F.ring.mat_neg(Fo)], axis=1))


def rel_scale(s, F):
    Fi, Fo = F.blocks()
    return _from_rows(F.ring, F.n, np.concatenate([Fi, F.ring.mat_scale(s, Fo)], axis=1))


def one_minus(F):
    return rel_diff(identity(F.ring, F.n), F)


def one_plus(F):
    return rel_sum(identity(F.ring, F.n), F)


def rel_apply(F, z):
    """F z = {delta : exists gamma in z, (gamma, delta) in F}."""
    if z.n != F.n or z.ring != F.ring:
        raise DimensionError("subspace and relation live on different spaces")
    ring, n = F.ring, F.n
    Fi, Fo = F.blocks()
    # c.Fi - e.Z = 0, output c.Fo
    M = np.concatenate([Fi, ring.mat_neg(z.basis)])
    O = np.concatenate([Fo, ring.zeros(z.dim, n)])
    if F.dim == 0:
        return el.zero_space(ring, n)
    return el.project_solutions(ring, M, O, n)


@lru_cache(maxsize=1 << 16)
def gen_projection(x, a):
    """P^a_x = {(zeta, omega) : omega in x, omega - zeta in a} (image x, kernel a).

    Spanned by (xi, xi) for xi in x and (-alpha, 0) for alpha in a.
    """
    el._check(x, a)
    ring, n = x.ring, x.n
    rows = np.concatenate([
        np.concatenate([x.basis, x.basis], axis=1),
        np.concatenate([ring.mat_neg(a.basis), ring.zeros(a.dim, n)], axis=1),
    ])
    return _from_rows(ring, n, rows)


def rel_conjugate(F, x, a):
    """Check F o P^a_x o F^-1 = P^{F(a)}_{F(x)} and return (F(x), F(a))."""
    lhs = compose(compose(F, gen_projection(x, a)), rel_inverse(F))
    fx, fa = rel_apply(F, x), rel_apply(F, a)
    if lhs != gen_projection(fx, fa):
        raise InvariantViolation("conjugated projection differs from projection of images")
    return fx, fa


def rel_adjoint(F, form):
    """F* = {(v', w') : beta(v', w) = beta(w', v) for all (v, w) in F}.

    beta(u, v) = conj(u)^T B v is conjugate linear in u, so the condition is
    linear after conjugation: rows [conj(w B^T) | -conj(v B^T)] annihilate (v', w').
    """
    from .forms import require_nondegenerate

    require_nondegenerate(form)
    if form.n != F.n or form.ring != F.ring:
        raise DimensionError("form and relation live on different spaces")
    ring, n = F.ring, F.n
    Fi, Fo = F.blocks()
    Bt = el.transpose(form.gram)
    rows = np.concatenate([
        ring.mat_conj(ring.matmul(Fo, Bt)),
        ring.mat_neg(ring.mat_conj(ring.matmul(Fi, Bt))),
    ], axis=1)
    if F.dim == 0:
        return full_relation(ring, n)
    return LinearRelation(el.kernel(ring, rows), n)
