"""Classical groups as homotopes, Lie brackets from dual numbers, pair products
and orbit classification.

Group elements are affine chart matrices X with the product
X ._A Y = X + Y - X A Y; the map X -> 1 - A X turns this into matrix
multiplication, which is what the independent group oracles use.
"""
import itertools

import numpy as np

from . import exactlinalg as el
from . import geometry as geo
from .errors import (DimensionError, LimitExceeded, NotCompatible, NotEnumerable, NotInGroup,
                     NotInvertible)
from .scalars import dual_tower

FAMILIES = ("gl", "gl_rect", "orthogonal", "symplectic", "unitary")
STARS = ("transpose", "conjugate_transpose", "none")


def _star(ring, X, star):
    if star == "transpose":
        return el.transpose(X)
    if star == "conjugate_transpose":
        return el.transpose(ring.mat_conj(X))
    if star == "none":
        return X
    raise ValueError(f"unknown algebra involution {star!r}")


class MatrixAlgebraContext:
    """M(p, q; K) with an optional involution (square case only)."""

    def __init__(self, ring, p, q=None, star="transpose"):
        q = p if q is None else q
        if star != "none" and p != q:
            raise DimensionError("an algebra involution needs square matrices")
        if star not in STARS:
            raise ValueError(f"star must be one of {STARS}")
        self.ring, self.p, self.q, self.star = ring, p, q, star

    def involution(self, X):
        return _star(self.ring, el.as_matrix(self.ring, X), self.star)

    def matrices(self, limit=None):
        return enumerate_matrices(self.ring, (self.p, self.q), limit)

    def is_antiautomorphism(self, pairs):
        """(XY)* = Y*X* and X** = X on the given pairs."""
        ring, s = self.ring, self.involution
        for X, Y in pairs:
            if not np.array_equal(s(ring.matmul(X, Y)), ring.matmul(s(Y), s(X))):
                return False
            if not np.array_equal(s(s(X)), X):
                return False
        return True


def enumerate_matrices(ring, shape, limit=None):
    if not ring.is_finite:
        raise NotEnumerable(f"{ring.name} is infinite")
    r, c = shape
    total = ring.order ** (r * c)
    limit = el.enumeration_limit() if limit is None else limit
    if total > limit:
        raise LimitExceeded(f"{total} matrices exceed the limit {limit}")
    elems = list(ring.elements())
    return [ring.array(np.array(v, dtype=object).reshape(r, c).tolist()) if r * c else ring.zeros(r, c)
            for v in itertools.product(elems, repeat=r * c)]


# ---------------------------------------------------------------- homotopes

def homotope_product(x, y, a, ring):
    """x ._a y = x + y - x a y."""
    x, y, a = (el.as_matrix(ring, m) for m in (x, y, a))
    if x.shape != y.shape or a.shape != (x.shape[1], x.shape[0]):
        raise DimensionError("homotope product needs x, y in M(p,q) and a in M(q,p)")
    return ring.mat_sub(ring.mat_add(x, y), ring.matmul(ring.matmul(x, a), y))


def homotope_inverse(x, a, ring):
    """j_a(x) = -(1 - x a)^-1 x."""
    x, a = el.as_matrix(ring, x), el.as_matrix(ring, a)
    try:
        inv = el.inverse(ring, ring.mat_sub(ring.eye(x.shape[0]), ring.matmul(x, a)))
    except NotInvertible:
        raise NotInGroup("1 - x a is not invertible") from None
    return ring.mat_neg(ring.matmul(inv, x))


def to_linear(x, a, ring):
    """1 - a x; a homomorphism from (M, ._a) to (M(q,q), .)."""
    return ring.mat_sub(ring.eye(a.shape[0]), ring.matmul(a, x))


class HomotopeGroupSpec:
    """One of the homotope groups G(A), O(A), Sp(A), U(A)."""

    def __init__(self, family, A, ring, p=None):
        if family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}")
        A = el.as_matrix(ring, A)
        q, p_ = A.shape
        if family != "gl_rect" and q != p_:
            raise DimensionError(f"{family} needs a square parameter")
        At = el.transpose(A)
        if family == "orthogonal" and not np.array_equal(At, A):
            raise NotCompatible("orthogonal parameter must be symmetric")
        if family == "symplectic" and not np.array_equal(At, ring.mat_neg(A)):
            raise NotCompatible("symplectic parameter must be skew")
        if family == "unitary":
            if not ring.has_conjugation:
                raise NotCompatible("unitary family needs a ring with conjugation")
            if not np.array_equal(el.transpose(ring.mat_conj(A)), A):
                raise NotCompatible("unitary parameter must be Hermitian")
        self.family, self.A, self.ring = family, A, ring
        self.shape = (p_, q)

    def __repr__(self):
        return f"<{self.family} homotope over {self.ring.name}, shape {self.shape}>"

    def equation(self, X):
        """The family's defining equation, without the invertibility condition."""
        ring, A = self.ring, self.A
        X = el.as_matrix(ring, X)
        if self.family in ("gl", "gl_rect"):
            return True
        if self.family == "unitary":
            Xs = el.transpose(ring.mat_conj(X))
        else:
            Xs = el.transpose(X)
        rhs = ring.matmul(ring.matmul(Xs, A), X)
        if self.family == "symplectic":
            lhs = ring.mat_sub(Xs, X)
        else:
            lhs = ring.mat_add(X, Xs)
        return np.array_equal(lhs, rhs)

    def is_invertible_point(self, X):
        ring = self.ring
        X = el.as_matrix(ring, X)
        return el.is_invertible_matrix(ring, ring.mat_sub(ring.eye(X.shape[0]), ring.matmul(X, self.A)))

    def is_member(self, X):
        return self.is_invertible_point(X) and self.equation(X)

    def product(self, X, Y):
        return homotope_product(X, Y, self.A, self.ring)

    def inverse(self, X):
        return homotope_inverse(X, self.A, self.ring)

    def unit(self):
        return self.ring.zeros(*self.shape)


class GroupTable:
    """Indexed elements with a multiplication table; -1 marks a product leaving the set."""

    def __init__(self, ring, elements, product, unit):
        self.ring = ring
        self.elements = list(elements)
        self.keys = [ring.key_of(X) for X in self.elements]
        self.index = {k: i for i, k in enumerate(self.keys)}
        n = len(self.elements)
        T = np.full((n, n), -1, dtype=np.int64)
        for i, X in enumerate(self.elements):
            for j, Y in enumerate(self.elements):
                T[i, j] = self.index.get(ring.key_of(product(X, Y)), -1)
        self.table = T
        self.unit = self.index.get(ring.key_of(unit), -1)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, X):
        return self.ring.key_of(el.as_matrix(self.ring, X)) in self.index

    def is_closed(self):
        return bool((self.table >= 0).all())

    def is_associative(self):
        T = self.table
        if not self.is_closed():
            return False
        idx = np.arange(len(self))
        return bool((T[T[:, :, None], idx[None, None, :]] == T[idx[:, None, None], T[None, :, :]]).all())

    def is_group(self):
        T, u = self.table, self.unit
        if u < 0 or not self.is_closed():
            return False
        idx = np.arange(len(self))
        if not ((T[u] == idx).all() and (T[:, u] == idx).all()):
            return False
        if not all((T[i] == u).any() and (T[:, i] == u).any() for i in idx):
            return False
        return self.is_associative()

    def legend(self):
        fmt = self.ring.format
        return [[[fmt(v) for v in r] for r in X] for X in self.elements]

    def to_csv(self):
        n = len(self)
        lines = ["row," + ",".join(str(j) for j in range(n))]
        lines += [f"{i}," + ",".join(str(int(v)) for v in self.table[i]) for i in range(n)]
        lines.append("")
        lines.append("index,element")
        for i, X in enumerate(self.legend()):
            lines.append(f'{i},"{X}"')
        return "\n".join(lines) + "\n"


def enumerate_group(spec, limit=None):
    """All members of the homotope group with their Cayley table."""
    members = [X for X in enumerate_matrices(spec.ring, spec.shape, limit) if spec.is_member(X)]
    return GroupTable(spec.ring, members, spec.product, spec.unit())


def semigroup_hull(spec, limit=None):
    """All solutions of the defining equation, invertible or not."""
    members = [X for X in enumerate_matrices(spec.ring, spec.shape, limit) if spec.equation(X)]
    return GroupTable(spec.ring, members, spec.product, spec.unit())


def oracle_group_elements(spec, limit=None):
    """Independent count: g with g* A^-1 g = A^-1, pulled back by X = A^-1 (1 - g).

    For A = 1 this is X = 1 - g with g^t g = 1.
    """
    ring, A = spec.ring, spec.A
    if spec.family == "gl_rect":
        raise NotCompatible("no linear oracle for rectangular parameters")
    Ainv = el.inverse(ring, A)
    n = A.shape[0]
    out = []
    for g in enumerate_matrices(ring, (n, n), limit):
        if spec.family == "gl":
            ok = el.is_invertible_matrix(ring, g)
        else:
            gs = el.transpose(ring.mat_conj(g)) if spec.family == "unitary" else el.transpose(g)
            ok = np.array_equal(ring.matmul(ring.matmul(gs, Ainv), g), Ainv)
        if ok:
            out.append(ring.matmul(Ainv, ring.mat_sub(ring.eye(n), g)))
    return out


# ---------------------------------------------------------------- Lie brackets

def lie_bracket_homotope(X, Y, A, ring):
    """[X, Y]_A = X A Y - Y A X."""
    X, Y, A = (el.as_matrix(ring, m) for m in (X, Y, A))
    return ring.mat_sub(ring.matmul(ring.matmul(X, A), Y), ring.matmul(ring.matmul(Y, A), X))


def _embed(T, ring, X, eps=None):
    """Matrix over K as a matrix over T = K[e1][e2], optionally times e_eps."""
    out = T.zeros(*X.shape)
    for i in range(X.shape[0]):
        for j in range(X.shape[1]):
            out[i, j] = T.eps(eps, X[i, j]) if eps else T.embed(X[i, j])
    return out


def dual_group_product(X, Z, A, T):
    """X . Z = X + Z - Z A X."""
    return T.mat_sub(T.mat_add(X, Z), T.matmul(T.matmul(Z, A), X))


def dual_group_inverse(X, A, T):
    # X + W - W A X = 0  <=>  W (1 - A X) = -X
    return T.mat_neg(T.matmul(X, el.inverse(T, T.mat_sub(T.eye(A.shape[0]), T.matmul(A, X)))))


def first_order_product(X, Y, A, ring):
    """(e1 X)(e2 Y) over K[e1][e2]; returns the e1 e2 coefficient matrix."""
    T = dual_tower(ring, 2)
    A2 = _embed(T, ring, el.as_matrix(ring, A))
    P = dual_group_product(_embed(T, ring, el.as_matrix(ring, X), 1),
                           _embed(T, ring, el.as_matrix(ring, Y), 2), A2, T)
    return _coefficient(P, 3, ring)


def _coefficient(P, mask, ring):
    out = ring.zeros(*P.shape)
    for i in range(P.shape[0]):
        for j in range(P.shape[1]):
            out[i, j] = P[i, j][mask]
    return out


def lie_bracket_via_dual_numbers(X, Y, A, ring):
    """e1 e2 coefficient of the commutator (e1X)(e2Y)(e1X)^-1(e2Y)^-1.

    Raises NotCompatible if the commutator has nonzero e1 or e2 terms.
    """
    T = dual_tower(ring, 2)
    X, Y, A = (el.as_matrix(ring, m) for m in (X, Y, A))
    A2 = _embed(T, ring, A)
    x, y = _embed(T, ring, X, 1), _embed(T, ring, Y, 2)
    c = dual_group_product(x, y, A2, T)
    c = dual_group_product(c, dual_group_inverse(x, A2, T), A2, T)
    c = dual_group_product(c, dual_group_inverse(y, A2, T), A2, T)
    for mask in (0, 1, 2):
        if not all(ring.is_zero(v) for v in _coefficient(c, mask, ring).ravel()):
            raise NotCompatible("commutator has terms below order e1 e2")
    return _coefficient(c, 3, ring)


def torsor_lie_bracket(X, Z, A, ring):
    """Bracket of (G(tau; a), o+) at the origin, from Gamma over dual numbers.

    The group law is x.z = Gamma(x, a, o+, b, z) with a = chart-(A) and
    b = chart-(-A), evaluated in coordinates by geometry.chart_gamma.
    """
    T = dual_tower(ring, 2)
    X, Z, A = (el.as_matrix(ring, m) for m in (X, Z, A))
    p = X.shape[0]
    A2 = _embed(T, ring, A)
    B2 = T.mat_neg(A2)
    O = T.zeros(p, X.shape[1])

    def mul(u, v):
        return geo.chart_gamma(T, u, A2, O, B2, v)

    def inv(u):
        return geo.chart_gamma(T, O, A2, u, B2, O)

    x, z = _embed(T, ring, X, 1), _embed(T, ring, Z, 2)
    c = mul(mul(mul(x, z), inv(x)), inv(z))
    return _coefficient(c, 3, ring)


# ---------------------------------------------------------------- pairs and triples

def pair_product(ctx, u, v, w):
    """<u v w> = Gamma(u, o+, v, o-, w) for u, w in A+ and v in A- (or the dual configuration)."""
    ctx.require_pair()
    op, om = ctx.o_plus, ctx.o_minus
    plus = all(el.is_transversal(s, om) for s in (u, w)) and el.is_transversal(v, op)
    minus = all(el.is_transversal(s, op) for s in (u, w)) and el.is_transversal(v, om)
    if not (plus or minus):
        raise geo.NotAdmissible("pair product needs u, w in one chart and v in the other")
    return geo.gamma_global(u, op, v, om, w)


def algebra_product(ctx, u, v):
    """u v = Gamma(u, o+, e, o-, v) on A+ = C_{o-}."""
    ctx.require_triple()
    return pair_product(ctx, u, ctx.e, v)


def triple_product_second_kind(ctx, tau, x, y, z):
    """<x y z> = Gamma(x, o+, tau(y), o-, z) for a base point exchanging tau."""
    if not ctx.involution_type(tau)["exchanging"]:
        raise NotCompatible("second-kind triple product needs a base point exchanging involution")
    return pair_product(ctx, x, tau(y), z)


def restriction_involution(ctx, tau):
    """X -> coordinates of tau(chart(X)) on A+, for unital base point preserving tau."""
    kind = ctx.involution_type(tau)
    if not (kind["preserving"] and kind["unital"]):
        raise NotCompatible("restriction needs a unital base point preserving involution")
    ring, p = ctx.ring, ctx.o_plus.dim

    def star(X):
        return geo.plus_coordinates(tau(geo.chart_plus(ring, X)), p)
    return star


def functor2_geometry(alg):
    """Geometry of A + A with the involution built from (M(n,n;K), *).

    The skew form Omega_n (skew-Hermitian when * conjugates) gives the
    orthocomplement involution on Gras(K^2n).
    """
    from .forms import InvolutionMap, standard_form

    if alg.star == "none":
        raise NotCompatible("functor2 needs an involutive algebra")
    ring = alg.ring
    if (alg.star == "conjugate_transpose") != ring.has_conjugation:
        raise NotCompatible("conjugate transpose needs a ring with conjugation and vice versa")
    ctx = geo.GeometryContext.standard(ring, alg.p)
    tau = InvolutionMap.orthocomplement(standard_form(ring, "symplectic", alg.p))
    ctx.involution = tau
    return ctx, tau


def functor2_round_trip(alg, limit=None):
    """First matrix where the recovered involution differs from alg.star, or None."""
    ctx, tau = functor2_geometry(alg)
    star = restriction_involution(ctx, tau)
    for X in alg.matrices(limit):
        if not np.array_equal(star(X), alg.involution(X)):
            return X
    return None


def search_type_preserving(ring, p, q, limit=None):
    """All type preserving involutions of the pair (M(p,q), M(q,p)) over a finite field.

    tau+ runs over linear involutions of M(p,q); tau- is then forced by the
    linear conditions tau+<uvw> = <tau+ w, tau- v, tau+ u> and the result is
    checked against the second identity and tau-^2 = 1.  Returns a list of
    (tau+, tau-) matrices acting on row-major coordinates.
    """
    d = p * q
    basis_p = [_unit(ring, p, q, k) for k in range(d)]
    basis_m = [_unit(ring, q, p, k) for k in range(d)]
    I = ring.eye(d)
    found = []
    for Tp in enumerate_matrices(ring, (d, d), limit):
        if not np.array_equal(ring.matmul(Tp, Tp), I):
            continue
        for Tm in _solve_tau_minus(ring, p, q, Tp, basis_p, basis_m):
            if np.array_equal(ring.matmul(Tm, Tm), I) and _second_identity(ring, p, q, Tp, Tm, basis_p, basis_m):
                found.append((Tp, Tm))
    return found


def _unit(ring, r, c, k):
    E = ring.zeros(r, c)
    E[k // c, k % c] = ring.one
    return E


def _vec(M):
    return M.reshape(-1)


def _act(ring, T, M):
    return ring.matmul(T, _vec(M).reshape(-1, 1)).reshape(M.shape)


def _solve_tau_minus(ring, p, q, Tp, bp, bm):
    # unknown t = vec(Tm) (row-major, d x d); each equation is linear in t
    d = p * q
    rows, rhs = [], []
    for u in bp:
        for w in bp:
            tu, tw = _act(ring, Tp, u), _act(ring, Tp, w)
            for k, v in enumerate(bm):
                lhs = _vec(_act(ring, Tp, ring.matmul(ring.matmul(u, v), w)))
                # <tw, Tm v, tu> = sum_j Tm[j, k] tw E_j tu
                cols = [_vec(ring.matmul(ring.matmul(tw, bm[j]), tu)) for j in range(d)]
                for e in range(d):
                    row = ring.zeros(1, d * d)[0]
                    for j in range(d):
                        row[j * d + k] = cols[j][e]
                    rows.append(row)
                    rhs.append(lhs[e])
    M = np.array(rows, dtype=ring.dtype).reshape(len(rows), d * d)
    aug = np.concatenate([M, np.array(rhs, dtype=ring.dtype).reshape(-1, 1)], axis=1)
    R, r, piv = ring.rref(aug)
    pivs = [int(x) for x in piv[:r]]
    if d * d in pivs:
        return []
    t0 = ring.zeros(1, d * d)[0]
    for i in range(r):
        t0[pivs[i]] = R[i, -1]
    # every solution: particular one plus the kernel of M
    N = el.null_rows(ring, M) if r < d * d else ring.zeros(0, d * d)
    out = []
    for coeffs in itertools.product(list(ring.elements()), repeat=N.shape[0]):
        t = t0.copy()
        for c, row in zip(coeffs, N):
            t = ring.mat_add(t.reshape(1, -1), ring.mat_scale(c, row.reshape(1, -1)))[0]
        out.append(t.reshape(d, d))
    return out


def _second_identity(ring, p, q, Tp, Tm, bp, bm):
    for u in bm:
        for w in bm:
            for v in bp:
                lhs = _act(ring, Tm, ring.matmul(ring.matmul(u, v), w))
                rhs = ring.matmul(ring.matmul(_act(ring, Tm, w), _act(ring, Tp, v)), _act(ring, Tm, u))
                if not np.array_equal(lhs, rhs):
                    return False
    return True


# ---------------------------------------------------------------- orbits

ORBIT_FAMILIES = {"sym": "orthogonal", "asym": "symplectic", "herm": "unitary"}


def parameter_space(family, n, ring, limit=None):
    """Symmetric, alternating or Hermitian n x n matrices."""
    out = []
    for A in enumerate_matrices(ring, (n, n), limit):
        At = el.transpose(A)
        if family == "sym":
            ok = np.array_equal(At, A)
        elif family == "asym":
            ok = np.array_equal(At, ring.mat_neg(A)) and all(ring.is_zero(A[i, i]) for i in range(n))
        elif family == "herm":
            ok = np.array_equal(el.transpose(ring.mat_conj(A)), A)
        else:
            raise ValueError(f"unknown family {family!r}")
        if ok:
            out.append(A)
    return out


def gl_generators(n, ring):
    """Elementary transvections 1 + E_ij and diag(w, 1, ..., 1) with w generating K^x."""
    gens = []
    for i in range(n):
        for j in range(n):
            if i != j:
                g = ring.eye(n)
                g[i, j] = ring.one
                gens.append(g)
    units = [x for x in ring.elements() if ring.is_invertible(x)]
    for w in units:
        if len({ring.pow(w, k) for k in range(1, len(units) + 1)}) == len(units):
            g = ring.eye(n)
            g[0, 0] = w
            gens.append(g)
            break
    return gens


def classify_orbits(family, n, ring, scalars=False, group_orders=True, limit=None):
    """Orbits of A -> g A g* (g in GL_n) on the parameter space, by union-find.

    With scalars=True the action also rescales by units (A -> l A), which
    merges orbits whose homotope groups are isomorphic for that reason.
    Returns a list of dicts sorted by representative.
    """
    if family not in ORBIT_FAMILIES:
        raise ValueError(f"family must be one of {sorted(ORBIT_FAMILIES)}")
    if family == "herm" and not ring.has_conjugation:
        raise NotCompatible("Hermitian parameters need a ring with conjugation")
    space = parameter_space(family, n, ring, limit)
    keys = [ring.key_of(A) for A in space]
    index = {k: i for i, k in enumerate(keys)}
    parent = list(range(len(space)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    conj = family == "herm"
    gens = gl_generators(n, ring)
    for i, A in enumerate(space):
        for g in gens:
            gs = el.transpose(ring.mat_conj(g)) if conj else el.transpose(g)
            union(i, index[ring.key_of(ring.matmul(ring.matmul(g, A), gs))])
        if scalars:
            for lam in ring.elements():
                if ring.is_invertible(lam) and (not conj or lam == ring.conj(lam)):
                    union(i, index[ring.key_of(ring.mat_scale(lam, A))])
    orbits = {}
    for i in range(len(space)):
        orbits.setdefault(find(i), []).append(i)
    report = []
    for root, members in sorted(orbits.items()):
        rep = space[min(members, key=lambda i: tuple(np.asarray(space[i]).ravel().tolist()))]
        entry = {"representative": rep, "size": len(members),
                 "rank": el.rank(ring, rep), "members": [space[i] for i in members]}
        if group_orders:
            spec = HomotopeGroupSpec(ORBIT_FAMILIES[family], rep, ring)
            entry["group_order"] = sum(1 for X in enumerate_matrices(ring, (n, n), limit) if spec.is_member(X))
        report.append(entry)
    report.sort(key=lambda e: (e["rank"], tuple(np.asarray(e["representative"]).ravel().tolist())))
    return report


def orbit_oracle(family, n, ring, limit=None):
    """Orbits by applying every element of GL_n, as an independent count."""
    space = parameter_space(family, n, ring, limit)
    gl = [g for g in enumerate_matrices(ring, (n, n), limit) if el.is_invertible_matrix(ring, g)]
    conj = family == "herm"
    seen, orbits = set(), []
    for A in space:
        k = ring.key_of(A)
        if k in seen:
            continue
        orbit = set()
        for g in gl:
            gs = el.transpose(ring.mat_conj(g)) if conj else el.transpose(g)
            orbit.add(ring.key_of(ring.matmul(ring.matmul(g, A), gs)))
        seen |= orbit
        orbits.append(orbit)
    return orbits
