"""The Grassmannian geometry: the product map Gamma and the structure built on it.

Three Gamma routes are provided and must agree:
  gamma_global    1 - P^x_a P^b_y as a linear relation, applied to z (default);
  gamma_oracle    the defining set formula solved as one block system;
  gamma_restricted  the invertible matrix P^a_x - P^z_b applied to y, on
                  admissible tuples only.
A fourth, vector-set evaluation lives in setgamma for tiny fields.
"""
from functools import lru_cache

import numpy as np

from . import exactlinalg as el
from . import relations as rel
from .errors import (CharacteristicTwo, InvariantViolation, MissingBasePoint, NotAdmissible,
                     NotCompatible, NotInvertible)
from .forms import InvolutionMap

MODES = ("global", "oracle", "restricted", "middle")


# ---------------------------------------------------------------- operators

@lru_cache(maxsize=1 << 15)
def left_op(x, a, y, b):
    """L_xayb = 1 - P^x_a P^b_y as a relation."""
    return rel.one_minus(rel.compose(rel.gen_projection(a, x), rel.gen_projection(y, b)))


@lru_cache(maxsize=1 << 15)
def middle_op(x, a, b, z):
    """M_xabz = P^a_x - P^z_b as a relation."""
    return rel.rel_diff(rel.gen_projection(x, a), rel.gen_projection(b, z))


def middle_matrix(x, a, b, z):
    """P^a_x - P^z_b; needs x transversal to a and z transversal to b."""
    if not (el.is_transversal(x, a) and el.is_transversal(b, z)):
        raise NotAdmissible("M_xabz needs x, a and b, z transversal")
    ring = x.ring
    return ring.mat_sub(el.projection_matrix(x, a), el.projection_matrix(b, z))


def left_matrix(x, a, y, b):
    """1 - P^x_a P^b_y; needs x, a and y, b transversal."""
    if not (el.is_transversal(x, a) and el.is_transversal(y, b)):
        raise NotAdmissible("L_xayb needs x, a and y, b transversal")
    ring = x.ring
    return ring.mat_sub(ring.eye(x.n), ring.matmul(el.projection_matrix(a, x), el.projection_matrix(y, b)))


# ---------------------------------------------------------------- Gamma

def gamma_global(x, a, y, b, z):
    return rel.rel_apply(left_op(x, a, y, b), z)


def gamma_middle(x, a, y, b, z):
    """(P^a_x - P^z_b)(y) as relations; equal to gamma_global on all tuples."""
    return rel.rel_apply(middle_op(x, a, b, z), y)


def gamma_oracle(x, a, y, b, z):
    """{omega : omega = zeta + alpha = zeta + eta + xi = xi + beta} solved directly.

    Unknowns are coefficient vectors over the bases of x, a, y, b, z; the
    constraints alpha - eta - xi = 0 and zeta + alpha - xi - beta = 0 are
    stacked side by side and omega = zeta + alpha is read off.
    """
    ring, n = x.ring, x.n
    for s in (a, y, b, z):
        el._check(x, s)
    X, A, Y, B, Z = x.basis, a.basis, y.basis, b.basis, z.basis
    neg = ring.mat_neg

    def zero(s):
        return ring.zeros(s.dim, n)

    M = np.concatenate([
        np.concatenate([neg(X), neg(X)], axis=1),
        np.concatenate([A, A], axis=1),
        np.concatenate([neg(Y), zero(y)], axis=1),
        np.concatenate([zero(b), neg(B)], axis=1),
        np.concatenate([zero(z), Z], axis=1),
    ])
    O = np.concatenate([zero(x), A, zero(y), zero(b), Z])
    return el.project_solutions(ring, M, O, n)


def is_admissible(x, a, y, b, z, strict=True):
    ok = all(el.is_transversal(s, a) and el.is_transversal(s, b) for s in (x, z))
    if strict:
        ok = ok and el.is_transversal(y, a) and el.is_transversal(y, b)
    return ok


def gamma_restricted(x, a, y, b, z, strict=True):
    """M_xabz(y) for x, z (and, when strict, y) in C_ab."""
    if not is_admissible(x, a, y, b, z, strict):
        raise NotAdmissible("restricted Gamma needs x, y, z transversal to a and b")
    return el.apply(middle_matrix(x, a, b, z), y)


def gamma(x, a, y, b, z, mode="global", strict=True):
    if mode == "global":
        return gamma_global(x, a, y, b, z)
    if mode == "oracle":
        return gamma_oracle(x, a, y, b, z)
    if mode == "restricted":
        return gamma_restricted(x, a, y, b, z, strict)
    if mode == "middle":
        return gamma_middle(x, a, y, b, z)
    raise ValueError(f"unknown mode {mode!r}")


def affine_sum(x, a, y, z):
    """x +_y z in the affine space U_a."""
    return gamma_restricted(x, a, y, a, z)


def pi_scalar(x, a, y, s):
    """Pi_s(x, a, y) = (s P^x_a + P^a_x)(y): y scaled by s about the origin x."""
    if not (el.is_transversal(x, a) and el.is_transversal(y, a)):
        raise NotAdmissible("Pi_s needs x and y transversal to a")
    ring = x.ring
    s = ring.coerce(s)
    m = ring.mat_add(ring.mat_scale(s, el.projection_matrix(a, x)), el.projection_matrix(x, a))
    return el.apply(m, y)


# ---------------------------------------------------------------- context

class GeometryContext:
    """Ambient K^n with optional base pair (o+, o-), unit e and involution."""

    def __init__(self, ring, n, o_plus=None, o_minus=None, e=None, involution=None):
        self.ring = ring
        self.n = n
        if (o_plus is None) != (o_minus is None):
            raise MissingBasePoint("base pair needs both o+ and o-")
        if o_plus is not None and not el.is_transversal(o_plus, o_minus):
            raise NotCompatible("o+ and o- must be transversal")
        if e is not None:
            if o_plus is None:
                raise MissingBasePoint("unit e needs a base pair")
            if not (el.is_transversal(e, o_plus) and el.is_transversal(e, o_minus)):
                raise NotCompatible("e must be transversal to o+ and o-")
        self.o_plus = o_plus
        self.o_minus = o_minus
        self.e = e
        self.involution = involution

    @classmethod
    def standard(cls, ring, p, q=None, involution=None):
        """W = K^p + K^q with o+ = K^p + 0, o- = 0 + K^q and, if p == q, e = diagonal."""
        q = p if q is None else q
        n = p + q
        o_plus = el.Subspace(ring, n, np.concatenate([ring.eye(p), ring.zeros(p, q)], axis=1), canonical=True)
        o_minus = el.Subspace(ring, n, np.concatenate([ring.zeros(q, p), ring.eye(q)], axis=1), canonical=True)
        e = None
        if p == q:
            e = el.Subspace(ring, n, np.concatenate([ring.eye(p), ring.eye(p)], axis=1), canonical=True)
        ctx = cls(ring, n, o_plus, o_minus, e, involution)
        ctx.p, ctx.q = p, q
        return ctx

    def require_pair(self):
        if self.o_plus is None:
            raise MissingBasePoint("this operation needs a base pair (o+, o-)")

    def require_triple(self):
        self.require_pair()
        if self.e is None:
            raise MissingBasePoint("this operation needs a base triple (o+, e, o-)")

    def minus_e(self):
        self.require_triple()
        return el.apply(minus_id(self), self.e)

    def frame(self):
        """Columns: basis of o+ then a basis of o- matched to it through e."""
        self.require_triple()
        ring = self.ring
        U, V, E = self.o_plus.basis, self.o_minus.basis, self.e.basis
        m = U.shape[0]
        # E = C1 U + C2 V; rows of C1^-1 E are u_i + v'_i
        coeff = el.transpose(el.inverse(ring, el.transpose(np.concatenate([U, V]))))
        C = ring.matmul(E, coeff)
        C1, C2 = C[:, :m], C[:, m:]
        Vp = ring.matmul(ring.matmul(el.inverse(ring, C1), C2), V)
        return el.transpose(np.concatenate([U, Vp]))

    def involution_type(self, tau=None):
        tau = tau or self.involution
        self.require_pair()
        t_plus, t_minus = tau(self.o_plus), tau(self.o_minus)
        return {
            "preserving": t_plus == self.o_plus and t_minus == self.o_minus,
            "exchanging": t_plus == self.o_minus and t_minus == self.o_plus,
            "unital": self.e is not None and tau(self.e) == self.e,
        }


def inversion_j(ctx):
    """j = M_{e o+ o- e}."""
    ctx.require_triple()
    return middle_matrix(ctx.e, ctx.o_plus, ctx.o_minus, ctx.e)


def minus_id(ctx):
    """M_{o+ o- o- o+}: multiplication by -1 on both charts."""
    ctx.require_pair()
    return middle_matrix(ctx.o_plus, ctx.o_minus, ctx.o_minus, ctx.o_plus)


def translation(ctx, a):
    """t~_a = M_{o+ a o- o+} o M_{o+ o- o- o+} for a transversal to o+."""
    ctx.require_pair()
    if not el.is_transversal(a, ctx.o_plus):
        raise NotAdmissible("translation needs a transversal to o+")
    ring = ctx.ring
    return ring.matmul(middle_matrix(ctx.o_plus, a, ctx.o_minus, ctx.o_plus), minus_id(ctx))


def dilation(ctx, lam):
    """delta^lam = lam P^{o+}_{o-} + P^{o-}_{o+}."""
    ctx.require_pair()
    ring = ctx.ring
    lam = ring.coerce(lam)
    if not ring.is_invertible(lam):
        raise NotInvertible("dilation needs an invertible scalar")
    return ring.mat_add(ring.mat_scale(lam, el.projection_matrix(ctx.o_minus, ctx.o_plus)),
                        el.projection_matrix(ctx.o_plus, ctx.o_minus))


def cayley(ctx):
    """The block matrix R = [[1, -1], [1, 1]] in the (o+, o+) frame."""
    ctx.require_triple()
    ring = ctx.ring
    if ring.characteristic == 2:
        raise CharacteristicTwo("the Cayley transform needs 2 invertible")
    m = ctx.o_plus.dim
    I = ring.eye(m)
    return np.block([[I, ring.mat_neg(I)], [I, I]])


def cayley_operator(ctx):
    """rho as a column operator on W: R acts on row vectors, so rho = T R^T T^-1."""
    R = cayley(ctx)
    ring = ctx.ring
    T = ctx.frame()
    return ring.matmul(ring.matmul(T, el.transpose(R)), el.inverse(ring, T))


def dual_involution(ctx, tau):
    """tau' = M_{o+ o- o- o+} o tau."""
    kind = ctx.involution_type(tau)
    if not (kind["preserving"] or kind["exchanging"]):
        raise NotCompatible("dual involution needs tau to preserve or exchange the base pair")
    out = tau.composed(minus_id(ctx), label=f"({tau.label})'")
    new = ctx.involution_type(out)
    if (new["preserving"], new["exchanging"]) != (kind["preserving"], kind["exchanging"]):
        raise InvariantViolation("dual involution changed the base point type")
    return out


def tilde_involution(ctx, tau):
    """tau~ = j o tau for a unital base point preserving tau."""
    ctx.require_triple()
    kind = ctx.involution_type(tau)
    if not (kind["preserving"] and kind["unital"]):
        raise NotCompatible("tau~ needs a unital base point preserving involution")
    out = tau.composed(inversion_j(ctx), label=f"({tau.label})~")
    new = ctx.involution_type(out)
    if not (new["exchanging"] and new["unital"]):
        raise InvariantViolation("tau~ is not unital base point exchanging")
    return out


# ---------------------------------------------------------------- torsors and groups

class TorsorHandle:
    """C_ab (or a subset of it) with (xyz) = Gamma(x, a, y, b, z)."""

    def __init__(self, a, b, members, label="U_ab"):
        self.a = a
        self.b = b
        self.members = list(members)
        self.index = {x: i for i, x in enumerate(self.members)}
        self.label = label
        for x in self.members:
            if not (el.is_transversal(x, a) and el.is_transversal(x, b)):
                raise InvariantViolation("torsor member not in C_ab")

    def __len__(self):
        return len(self.members)

    def __contains__(self, x):
        return x in self.index

    def product(self, x, y, z):
        return gamma_restricted(x, self.a, y, self.b, z)

    def table(self):
        """T[i, j, k] = index of (x_i x_j x_k), -1 when outside the member set."""
        n = len(self.members)
        T = np.full((n, n, n), -1, dtype=np.int64)
        for i, x in enumerate(self.members):
            for j, y in enumerate(self.members):
                for k, z in enumerate(self.members):
                    T[i, j, k] = self.index.get(self.product(x, y, z), -1)
        return T

    def is_closed(self):
        return bool((self.table() >= 0).all())


def common_complements(a, b, points):
    return [x for x in points if el.is_transversal(x, a) and el.is_transversal(x, b)]


def torsor(a, b, points):
    return TorsorHandle(a, b, common_complements(a, b, points))


def lagrangian_torsor(tau, a, points):
    """G(tau; a) = U_a cap Y as a subset of U_{a, tau(a)}."""
    members = [x for x in points if tau(x) == x and el.is_transversal(x, a)]
    return TorsorHandle(a, tau(a), members, label="G(tau;a)")


class GroupHandle:
    """A finite group given by its element list, unit and product."""

    def __init__(self, elements, unit, product, inverse=None, label="group"):
        self.elements = list(elements)
        self.index = {x: i for i, x in enumerate(self.elements)}
        self.unit = unit
        self._product = product
        self._inverse = inverse
        self.label = label

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return x in self.index

    def product(self, x, y):
        return self._product(x, y)

    def inverse(self, x):
        if self._inverse is None:
            raise NotImplementedError
        return self._inverse(x)

    def table(self):
        """Cayley table of indices; -1 marks a product leaving the set."""
        n = len(self.elements)
        T = np.full((n, n), -1, dtype=np.int64)
        for i, x in enumerate(self.elements):
            for j, y in enumerate(self.elements):
                T[i, j] = self.index.get(self.product(x, y), -1)
        return T

    def check_axioms(self):
        """Closure, unit, inverses and associativity on the table."""
        T = self.table()
        if (T < 0).any():
            return False
        u = self.index.get(self.unit)
        if u is None:
            return False
        n = len(self.elements)
        idx = np.arange(n)
        if not ((T[u] == idx).all() and (T[:, u] == idx).all()):
            return False
        if not all((T[i] == u).any() for i in range(n)):
            return False
        return bool((T[T[:, :, None], idx[None, None, :]] == T[idx[:, None, None], T[None, :, :]]).all())


def tau_unitary_group(tau, a, o, b, points):
    """U(tau; a, o, b) = {x in U_ab : tau(x) = M_oabo(x)} with origin o."""
    for s, name in ((a, "a"), (o, "o"), (b, "b")):
        if tau(s) != s:
            raise NotCompatible(f"{name} must be fixed by tau")
    if not (el.is_transversal(o, a) and el.is_transversal(o, b)):
        raise NotCompatible("o must lie in U_ab")
    inv = middle_matrix(o, a, b, o)
    members = [x for x in common_complements(a, b, points) if tau(x) == el.apply(inv, x)]
    return GroupHandle(members, o,
                       lambda x, y: gamma_restricted(x, a, o, b, y),
                       lambda x: el.apply(inv, x), label="U(tau;a,o,b)")


def torsor_group(a, b, o, points, members=None):
    """(U_ab, o) with xy = Gamma(x, a, o, b, y)."""
    members = common_complements(a, b, points) if members is None else members
    inv = middle_matrix(o, a, b, o)
    return GroupHandle(members, o, lambda x, y: gamma_restricted(x, a, o, b, y),
                       lambda x: el.apply(inv, x), label="U_ab")


class ConjugReport:
    def __init__(self, source, target, mapping, bijective, homomorphic, two_a):
        self.source = source
        self.target = target
        self.mapping = mapping
        self.bijective = bijective
        self.homomorphic = homomorphic
        self.two_a = two_a

    @property
    def ok(self):
        return self.bijective and self.homomorphic

    def to_json(self):
        return {"source_order": len(self.source), "target_order": len(self.target),
                "bijective": self.bijective, "homomorphic": self.homomorphic}


def double(ctx, a):
    """a + a in (A^-, o-), i.e. Gamma(a, o+, o-, o+, a)."""
    return gamma_restricted(a, ctx.o_plus, ctx.o_minus, ctx.o_plus, a)


def conjug_isomorphism(ctx, tau, a, points):
    """Check that t~_a maps G(tau'; a) isomorphically onto U(tau; 2a, o+, o-)."""
    kind = ctx.involution_type(tau)
    if not kind["preserving"]:
        raise NotCompatible("conjug needs a base point preserving involution")
    if tau(a) != a or not el.is_transversal(a, ctx.o_plus):
        raise NotCompatible("a must be tau-fixed and transversal to o+")
    tau_d = dual_involution(ctx, tau)
    minus_a = tau_d(a)
    src_members = [x for x in points if tau_d(x) == x and el.is_transversal(x, a)]
    source = torsor_group(a, minus_a, ctx.o_plus, points, members=src_members)
    two_a = double(ctx, a)
    target = tau_unitary_group(tau, two_a, ctx.o_plus, ctx.o_minus, points)
    t = translation(ctx, a)
    mapping = {x: el.apply(t, x) for x in source.elements}
    images = set(mapping.values())
    bijective = len(images) == len(source) and images == set(target.elements)
    homomorphic = bijective and all(
        mapping[source.product(x, y)] == target.product(mapping[x], mapping[y])
        for x in source.elements for y in source.elements)
    return ConjugReport(source, target, mapping, bijective, homomorphic, two_a)


# ---------------------------------------------------------------- charts

def chart_plus(ring, X):
    """X in M(p, q) -> rowspace [I | X] (an element of A+ = C_{o-})."""
    X = el.as_matrix(ring, X)
    p, q = X.shape
    return el.Subspace(ring, p + q, np.concatenate([ring.eye(p), X], axis=1), canonical=True)


def chart_minus(ring, B):
    """B in M(q, p) -> rowspace [B | I] (an element of A- = C_{o+})."""
    B = el.as_matrix(ring, B)
    q, p = B.shape
    return el.Subspace(ring, p + q, np.concatenate([B, ring.eye(q)], axis=1))


def plus_coordinates(x, p):
    """Inverse of chart_plus; x must be transversal to o- = 0 + K^q."""
    ring = x.ring
    B = x.basis
    if x.dim != p or not np.array_equal(B[:, :p], ring.eye(p)):
        raise NotAdmissible("subspace is not in the chart A+")
    return np.ascontiguousarray(B[:, p:])


def minus_coordinates(x, p):
    ring = x.ring
    q = x.n - p
    B = x.basis
    if x.dim != q:
        raise NotAdmissible("subspace is not in the chart A-")
    D = B[:, p:]
    try:
        Dinv = el.inverse(ring, D)
    except NotInvertible:
        raise NotAdmissible("subspace is not in the chart A-") from None
    return ring.matmul(Dinv, np.ascontiguousarray(B[:, :p]))


def _frame_projection(ring, image_cols, kernel_cols):
    T = np.concatenate([image_cols, kernel_cols], axis=1)
    k = image_cols.shape[1]
    D = ring.zeros(T.shape[0], T.shape[0])
    for i in range(k):
        D[i, i] = ring.one
    return ring.matmul(ring.matmul(T, D), el.inverse(ring, T))


def chart_gamma(ring, X, A, Y, B, Z):
    """Gamma(x, a, y, b, z) = (P^a_x - P^z_b)(y) with x, y, z in A+ and a, b in A-, in coordinates.

    Works over any ring in which the frames are invertible (dual numbers
    included), using only matrix inverses: x = rowspace [1 | X] has column
    basis [1; X^T], a = rowspace [A | 1] has column basis [A^T; 1].
    """
    X, A, Y, B, Z = (el.as_matrix(ring, m) for m in (X, A, Y, B, Z))
    p = X.shape[0]

    def plus_cols(M):
        return np.concatenate([ring.eye(p), el.transpose(M)])

    def minus_cols(M):
        return np.concatenate([el.transpose(M), ring.eye(M.shape[0])])

    P_ax = _frame_projection(ring, plus_cols(X), minus_cols(A))
    P_zb = _frame_projection(ring, minus_cols(B), plus_cols(Z))
    C = ring.matmul(ring.mat_sub(P_ax, P_zb), plus_cols(Y))
    R = el.transpose(C)
    return ring.matmul(el.inverse(ring, np.ascontiguousarray(R[:, :p])), np.ascontiguousarray(R[:, p:]))
