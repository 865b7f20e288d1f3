"""Executable theorem checks, grouped into named suites.

Every suite returns a SuiteReport: one PropertyResult per property with the
number of cases checked and the first counterexample, serialized so it can be
replayed with `grastor gamma`.  Sampling is driven by a seeded numpy
generator, so reports are deterministic for a fixed RunConfig.
"""
import itertools
from dataclasses import dataclass, field

import numpy as np

from . import classical as cl
from . import exactlinalg as el
from . import forms as fm
from . import geometry as geo
from . import relations as rel
from .errors import LimitExceeded, NotCompatible
from .scalars import make_ring, rationals

SUITES = ("para-assoc", "klein4", "torsor", "involution-restricted", "involution-global",
          "semitorsor-closure", "adjoint-lemmas", "lie-dualnumbers", "pair-identities",
          "conjug", "cayley")
GAMMA_MODES = ("global", "oracle", "middle", "vectorset")


@dataclass
class RunConfig:
    p: int = 2
    ext: bool = False
    n: int = 2
    form: str = "symplectic"
    family: str = "orthogonal"
    A: object = None
    mode: str = "global"
    samples: int = 1000
    seed: int = 0
    exhaustive: object = None  # None: decide by the cardinality limit
    limit: object = None
    workers: int = 1
    extra: dict = field(default_factory=dict)

    def ring(self):
        return make_ring(self.p, self.ext)

    def cap(self):
        return el.enumeration_limit() if self.limit is None else int(self.limit)


@dataclass
class PropertyResult:
    name: str
    checked: int
    counterexample: object = None
    note: str = ""

    @property
    def passed(self):
        return self.counterexample is None

    def to_json(self):
        d = {"property": self.name, "passed": self.passed, "checked": int(self.checked)}
        if self.counterexample is not None:
            d["counterexample"] = self.counterexample
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class SuiteReport:
    suite: str
    config: dict
    results: list

    @property
    def passed(self):
        return all(r.passed for r in self.results)

    def to_json(self):
        return {"suite": self.suite, "config": self.config, "passed": self.passed,
                "properties": sorted((r.to_json() for r in self.results), key=lambda d: d["property"])}


def _ser(**named):
    out = {}
    for k, v in named.items():
        if isinstance(v, el.Subspace):
            out[k] = v.to_json()
        elif isinstance(v, rel.LinearRelation):
            out[k] = v.to_json()
        elif isinstance(v, np.ndarray):
            out[k] = [[str(u) if not isinstance(u, (int, np.integer)) else int(u) for u in r] for r in v]
        else:
            out[k] = v
    return out


# ---------------------------------------------------------------- Gamma access by index

class GammaBackend:
    """Batch Gamma on subspace indices, by relation path, oracle, middle path or bit masks."""

    def __init__(self, ring, n, mode="global", limit=None):
        if mode not in GAMMA_MODES:
            raise ValueError(f"mode must be one of {GAMMA_MODES}")
        self.mode = mode
        if mode == "vectorset":
            from .setgamma import VectorSetEngine

            self.engine = VectorSetEngine(ring, n)
            self.points = self.engine.points
        else:
            self.points = el.enumerate_subspaces(n, ring, limit=limit)
            self.fn = {"global": geo.gamma_global, "oracle": geo.gamma_oracle,
                       "middle": geo.gamma_middle}[mode]
        self.index = {s: i for i, s in enumerate(self.points)}

    def __len__(self):
        return len(self.points)

    def batch(self, T):
        T = np.asarray(T, dtype=np.int64).reshape(-1, 5)
        if self.mode == "vectorset":
            return self.engine.gamma_batch(T)
        P, idx, f = self.points, self.index, self.fn
        return np.array([idx[f(P[a], P[b], P[c], P[d], P[e])] for a, b, c, d, e in T], dtype=np.int64)

    def table(self, cap):
        S = len(self.points)
        if S ** 5 > cap:
            raise LimitExceeded(f"{S ** 5} tuples exceed the limit {cap}")
        T = np.array(list(itertools.product(range(S), repeat=5)), dtype=np.int64)
        return self.batch(T).reshape((S,) * 5)


def _exhaustive(cfg, count):
    if cfg.exhaustive is True:
        if count > cfg.cap():
            raise LimitExceeded(f"{count} cases exceed the limit {cfg.cap()}")
        return True
    if cfg.exhaustive is False:
        return False
    return count <= cfg.cap()


def _form(cfg, ring, n):
    if isinstance(cfg.form, fm.FormDescriptor):
        if cfg.form.n != n:
            raise NotCompatible(f"form lives on K^{cfg.form.n}, not K^{n}")
        return cfg.form
    if n % 2:
        raise NotCompatible("the standard forms live on even-dimensional spaces")
    return fm.standard_form(ring, cfg.form, n // 2)


def _config_json(cfg, name):
    form = cfg.form.to_json() if isinstance(cfg.form, fm.FormDescriptor) else cfg.form
    return {"suite": name, "p": cfg.p, "ext": cfg.ext, "n": cfg.n, "form": form, "mode": cfg.mode,
            "samples": cfg.samples, "seed": cfg.seed, "exhaustive": cfg.exhaustive}


# ---------------------------------------------------------------- para-associativity / Klein 4

def _paraassoc_table(T, names=("x", "a", "y", "b", "z")):
    S = T.shape[0]
    ix = np.arange(S)
    for a in range(S):
        for b in range(S):
            t = T[:, a, :, b, :]
            x, y, z, u, v = np.ix_(ix, ix, ix, ix, ix)
            lhs = t[x, y, t[z, u, v]]
            mid = t[x, t[u, z, y], v]
            rhs = t[t[x, y, z], u, v]
            bad = (lhs != mid) | (lhs != rhs)
            if bad.any():
                w = tuple(int(i) for i in np.argwhere(bad)[0])
                return (a, b) + w, S ** 7
    return None, S ** 7


def _paraassoc_sampled(G, rng, k):
    S = len(G)
    R = rng.integers(0, S, size=(k, 7))
    a, b, x, y, z, u, v = R.T

    def g(p, q, r):
        return G.batch(np.stack([p, a, q, b, r], axis=1))
    lhs = g(x, y, g(z, u, v))
    mid = g(x, g(u, z, y), v)
    rhs = g(g(x, y, z), u, v)
    bad = np.flatnonzero((lhs != mid) | (lhs != rhs))
    return (tuple(int(i) for i in R[bad[0]]) if bad.size else None), k


def suite_para_assoc(cfg):
    ring = cfg.ring()
    G = GammaBackend(ring, cfg.n, cfg.mode, cfg.cap())
    S = len(G)
    if _exhaustive(cfg, S ** 7) and S ** 5 <= cfg.cap():
        bad, count = _paraassoc_table(G.table(cfg.cap()))
    else:
        bad, count = _paraassoc_sampled(G, np.random.default_rng(cfg.seed), cfg.samples)
    ce = None
    if bad is not None:
        P = G.points
        ce = _ser(**dict(zip(("a", "b", "x", "y", "z", "u", "v"), (P[i] for i in bad))))
    return SuiteReport("para-assoc", _config_json(cfg, "para-assoc"),
                       [PropertyResult("(xy(zuv)) = (x(uzy)v) = ((xyz)uv)", count, ce)])


def suite_klein4(cfg):
    ring = cfg.ring()
    G = GammaBackend(ring, cfg.n, cfg.mode, cfg.cap())
    S = len(G)
    P = G.points
    if _exhaustive(cfg, S ** 5):
        T = G.table(cfg.cap())
        res = []
        for name, perm in (("Gamma(x,a,y,b,z) = Gamma(a,x,y,z,b)", (1, 0, 2, 4, 3)),
                           ("Gamma(x,a,y,b,z) = Gamma(z,b,y,a,x)", (4, 3, 2, 1, 0))):
            bad = np.argwhere(T != T.transpose(perm))
            ce = None if not bad.size else _ser(**dict(zip("xaybz", (P[i] for i in bad[0]))))
            res.append(PropertyResult(name, S ** 5, ce))
        return SuiteReport("klein4", _config_json(cfg, "klein4"), res)
    rng = np.random.default_rng(cfg.seed)
    R = rng.integers(0, S, size=(cfg.samples, 5))
    base = G.batch(R)
    res = []
    for name, perm in (("Gamma(x,a,y,b,z) = Gamma(a,x,y,z,b)", (1, 0, 2, 4, 3)),
                       ("Gamma(x,a,y,b,z) = Gamma(z,b,y,a,x)", (4, 3, 2, 1, 0))):
        other = G.batch(R[:, list(perm)])
        bad = np.flatnonzero(base != other)
        ce = None if not bad.size else _ser(**dict(zip("xaybz", (P[i] for i in R[bad[0]]))))
        res.append(PropertyResult(name, cfg.samples, ce))
    return SuiteReport("klein4", _config_json(cfg, "klein4"), res)


# ---------------------------------------------------------------- torsors

def suite_torsor(cfg):
    ring = cfg.ring()
    points = el.enumerate_subspaces(cfg.n, ring, limit=cfg.cap())
    checks = {k: [0, None] for k in (
        "(xyy) = x", "(yyx) = x", "(xy(zuv)) = ((xyz)uv)", "opposite torsor: Gamma(x,a,y,b,z) = Gamma(z,b,y,a,x)",
        "U_aa commutative", "M_xabz = -M_axzb", "M_xabz^-1 = M_zabx = M_xbaz",
        "L_xayb^-1 acts as L_yaxb", "restricted = global Gamma", "Pi_s o Pi_t = Pi_st",
        "Pi_s distributes over +_x")}

    def record(name, ok, **w):
        c = checks[name]
        c[0] += 1
        if not ok and c[1] is None:
            c[1] = _ser(**w)

    scalars = list(ring.elements()) if ring.is_finite else [ring.from_int(k) for k in range(-2, 3)]
    for a in points:
        for b in points:
            if a.dim != b.dim:
                continue
            C = geo.common_complements(a, b, points)
            if not C:
                continue
            idx = {x: i for i, x in enumerate(C)}
            k = len(C)
            T = np.empty((k, k, k), dtype=np.int64)
            for (i, x), (j, y), (l, z) in itertools.product(enumerate(C), repeat=3):
                r = geo.gamma_restricted(x, a, y, b, z)
                if r not in idx:
                    raise AssertionError("torsor not closed")
                T[i, j, l] = idx[r]
                if i == 0 or (i, j, l) < (2, 2, 2):
                    record("restricted = global Gamma", r == geo.gamma_global(x, a, y, b, z),
                           x=x, a=a, y=y, b=b, z=z)
            ix = np.arange(k)
            for i in ix:
                for j in ix:
                    record("(xyy) = x", T[i, j, j] == i, x=C[i], a=a, y=C[j], b=b)
                    record("(yyx) = x", T[j, j, i] == i, x=C[i], a=a, y=C[j], b=b)
            x, y, z, u, v = np.ix_(ix, ix, ix, ix, ix)
            bad = np.argwhere(T[x, y, T[z, u, v]] != T[T[x, y, z], u, v])
            checks["(xy(zuv)) = ((xyz)uv)"][0] += k ** 5
            if bad.size and checks["(xy(zuv)) = ((xyz)uv)"][1] is None:
                checks["(xy(zuv)) = ((xyz)uv)"][1] = _ser(a=a, b=b, tuple=[int(t) for t in bad[0]])
            for x_, y_, z_ in itertools.product(C, repeat=3):
                r = C[T[idx[x_], idx[y_], idx[z_]]]
                record("opposite torsor: Gamma(x,a,y,b,z) = Gamma(z,b,y,a,x)",
                       r == geo.gamma_restricted(z_, b, y_, a, x_), x=x_, a=a, y=y_, b=b, z=z_)
                if a == b:
                    record("U_aa commutative", r == C[T[idx[z_], idx[y_], idx[x_]]], x=x_, a=a, y=y_, z=z_)
            for x_, z_ in itertools.product(C, repeat=2):
                M = geo.middle_matrix(x_, a, b, z_)
                record("M_xabz = -M_axzb", np.array_equal(M, ring.mat_neg(geo.middle_matrix(a, x_, z_, b))),
                       x=x_, a=a, b=b, z=z_)
                inv = el.inverse(ring, M)
                ok = (np.array_equal(inv, geo.middle_matrix(z_, a, b, x_))
                      and np.array_equal(inv, geo.middle_matrix(x_, b, a, z_)))
                record("M_xabz^-1 = M_zabx = M_xbaz", ok, x=x_, a=a, b=b, z=z_)
                Linv = rel.rel_inverse(geo.left_op(x_, a, z_, b))
                w = C[(idx[x_] + idx[z_]) % k]
                record("L_xayb^-1 acts as L_yaxb",
                       rel.rel_apply(Linv, w) == rel.rel_apply(geo.left_op(z_, a, x_, b), w),
                       x=x_, a=a, y=z_, b=b, w=w)
            if a == b:
                for x_, y_ in itertools.product(C, repeat=2):
                    for s, t in itertools.product(scalars[:3], repeat=2):
                        lhs = geo.pi_scalar(x_, a, geo.pi_scalar(x_, a, y_, t), s)
                        record("Pi_s o Pi_t = Pi_st", lhs == geo.pi_scalar(x_, a, y_, ring.mul(s, t)),
                               x=x_, a=a, y=y_, s=str(s), t=str(t))
                    z_ = C[(idx[x_] + 1) % k]
                    s = scalars[-1]
                    lhs = geo.pi_scalar(x_, a, geo.affine_sum(y_, a, x_, z_), s)
                    rhs = geo.affine_sum(geo.pi_scalar(x_, a, y_, s), a, x_, geo.pi_scalar(x_, a, z_, s))
                    record("Pi_s distributes over +_x", lhs == rhs, x=x_, a=a, y=y_, z=z_, s=str(s))
    res = [PropertyResult(k, v[0], v[1]) for k, v in checks.items()]
    return SuiteReport("torsor", _config_json(cfg, "torsor"), res)


# ---------------------------------------------------------------- involutions

def _complements(points):
    """{(a, b): C_ab} for every nonempty C_ab, from one transversality table."""
    n = points[0].n if points else 0
    dims = np.array([s.dim for s in points])
    T = np.zeros((len(points), len(points)), dtype=bool)
    for i, x in enumerate(points):
        for j in np.flatnonzero(dims == n - x.dim):
            T[i, j] = el.is_transversal(x, points[j])
    comp = {}
    for i, a in enumerate(points):
        for j in np.flatnonzero(dims == a.dim):
            C = np.flatnonzero(T[:, i] & T[:, j])
            if C.size:
                comp[(a, points[j])] = [points[k] for k in C]
    return comp


def _admissible_tuples(points, rng=None, samples=None, comp=None):
    """All (x,a,y,b,z) with x,y,z in C_ab, or a seeded sample of them."""
    comp = _complements(points) if comp is None else comp
    keys = list(comp)
    if rng is None:
        for (a, b), C in comp.items():
            for x, y, z in itertools.product(C, repeat=3):
                yield x, a, y, b, z
        return
    weights = np.array([len(comp[k]) ** 3 for k in keys], dtype=float)
    weights /= weights.sum()
    picks = rng.choice(len(keys), size=samples, p=weights)
    for i in picks:
        a, b = keys[i]
        C = comp[(a, b)]
        x, y, z = (C[j] for j in rng.integers(0, len(C), size=3))
        yield x, a, y, b, z


def _count_admissible(comp):
    return sum(len(C) ** 3 for C in comp.values())


def suite_involution_restricted(cfg):
    ring = cfg.ring()
    form = _form(cfg, ring, cfg.n)
    tau = fm.InvolutionMap.orthocomplement(form, "restricted")
    points = el.enumerate_subspaces(cfg.n, ring, limit=cfg.cap())
    res = []
    bad = tau.audit(points)
    res.append(PropertyResult("perp o perp = id", len(points), None if bad is None else _ser(x=bad)))
    bad, cnt = None, 0
    for x in points:
        for y in points[:: max(1, len(points) // 40)]:
            cnt += 1
            ok = (tau(el.join(x, y)) == el.meet(tau(x), tau(y))
                  and tau(el.meet(x, y)) == el.join(tau(x), tau(y)))
            if not ok and bad is None:
                bad = _ser(x=x, y=y)
    res.append(PropertyResult("De Morgan laws", cnt, bad))
    bad, cnt = None, 0
    for x in points:
        for a in points:
            cnt += 1
            if fm.is_adjoinable_pair(form, x, a) != el.is_transversal(x, a) and bad is None:
                bad = _ser(x=x, a=a)
    res.append(PropertyResult("adjoinable iff transversal", cnt, bad))
    comp = _complements(points)
    exhaustive = _exhaustive(cfg, _count_admissible(comp))
    rng = None if exhaustive else np.random.default_rng(cfg.seed)
    tuples = _admissible_tuples(points, rng, cfg.samples, comp)
    bad, cnt = None, 0
    if cfg.mode == "vectorset":
        from .setgamma import VectorSetEngine

        E = VectorSetEngine(ring, cfg.n)
        perm = E.permutation(tau)
        idx = np.array([[E.index[s] for s in t] for t in tuples], dtype=np.int64).reshape(-1, 5)
        lhs = perm[E.gamma_batch(idx)]
        rhs = E.gamma_batch(perm[idx[:, [0, 3, 2, 1, 4]]])
        cnt = len(idx)
        wrong = np.flatnonzero(lhs != rhs)
        if wrong.size:
            bad = _ser(**dict(zip("xaybz", (E.points[i] for i in idx[wrong[0]]))))
    else:
        for x, a, y, b, z in tuples:
            cnt += 1
            lhs = tau(geo.gamma_restricted(x, a, y, b, z))
            rhs = geo.gamma_restricted(tau(x), tau(b), tau(y), tau(a), tau(z))
            if lhs != rhs and bad is None:
                bad = _ser(x=x, a=a, y=y, b=b, z=z)
    res.append(PropertyResult("tau Gamma(x,a,y,b,z) = Gamma(tau x,tau b,tau y,tau a,tau z) on C_ab", cnt, bad,
                              "exhaustive" if exhaustive else "sampled"))
    return SuiteReport("involution-restricted", _config_json(cfg, "involution-restricted"), res)


def suite_involution_global(cfg):
    """Equality of perp Gamma with Gamma of perps on all tuples (finite fields),
    or only the inclusion when cfg.extra['inclusion_only'] is set."""
    ring = cfg.ring()
    form = _form(cfg, ring, cfg.n)
    tau = fm.InvolutionMap.orthocomplement(form, "global")
    points = el.enumerate_subspaces(cfg.n, ring, limit=cfg.cap())
    S = len(points)
    res = []
    sweepable = ring.is_finite and ring.order ** cfg.n <= 64 and cfg.mode in ("vectorset", "global")
    if cfg.exhaustive is True and sweepable:
        # the sweep walks S^3 triple tables, so the vector count is the real bound
        exhaustive = True
    else:
        exhaustive = _exhaustive(cfg, S ** 5)
    if exhaustive and sweepable:
        from .setgamma import VectorSetEngine

        E = VectorSetEngine(ring, cfg.n)
        bad = E.involution_sweep(tau)
        res.append(PropertyResult("tau Gamma(x,a,y,b,z) = Gamma(tau z,tau a,tau y,tau b,tau x), all tuples",
                                  S ** 5, None if bad is None else _ser(**dict(zip("xaybz", bad))),
                                  "exhaustive, vector-set evaluation"))
        return SuiteReport("involution-global", _config_json(cfg, "involution-global"), res)
    G = GammaBackend(ring, cfg.n, "global" if cfg.mode == "vectorset" else cfg.mode, cfg.cap())
    rng = np.random.default_rng(cfg.seed)
    if exhaustive:
        R = np.array(list(itertools.product(range(S), repeat=5)), dtype=np.int64)
    else:
        R = rng.integers(0, S, size=(cfg.samples, 5))
    perm = np.array([G.index[tau(s)] for s in points], dtype=np.int64)
    lhs = perm[G.batch(R)]
    rhs_def = G.batch(perm[R[:, [4, 1, 2, 3, 0]]])
    rhs_thm = G.batch(perm[R[:, [0, 3, 2, 1, 4]]])
    P = points
    sub = np.array([el.is_subspace(P[r], P[l]) for r, l in zip(rhs_thm, lhs)])
    for name, ok in (("Gamma(x^,b^,y^,a^,z^) contained in Gamma(x,a,y,b,z)^", sub),
                     ("equality (theorem form)", lhs == rhs_thm),
                     ("equality (definition form, tau z ... tau x)", lhs == rhs_def)):
        if cfg.extra.get("inclusion_only") and name.startswith("equality"):
            continue
        wrong = np.flatnonzero(~ok)
        ce = None if not wrong.size else _ser(**dict(zip("xaybz", (P[i] for i in R[wrong[0]]))))
        res.append(PropertyResult(name, len(R), ce, "exhaustive" if exhaustive else "sampled"))
    return SuiteReport("involution-global", _config_json(cfg, "involution-global"), res)


def suite_semitorsor_closure(cfg):
    ring = cfg.ring()
    form = _form(cfg, ring, cfg.n)
    tau = fm.InvolutionMap.orthocomplement(form)
    points = el.enumerate_subspaces(cfg.n, ring, limit=cfg.cap())
    Y = tau.fixed_points(points)
    yidx = {y: i for i, y in enumerate(Y)}
    m = len(Y)
    closed = [0, None]
    assoc = [0, None]
    abel = [0, None]
    gamma = geo.gamma_global if cfg.mode != "oracle" else geo.gamma_oracle
    for a in points:
        ta = tau(a)
        T = np.full((m, m, m), -1, dtype=np.int64)
        for (i, x), (j, y), (k, z) in itertools.product(enumerate(Y), repeat=3):
            r = gamma(x, a, y, ta, z)
            closed[0] += 1
            if r in yidx:
                T[i, j, k] = yidx[r]
            elif closed[1] is None:
                closed[1] = _ser(x=x, a=a, y=y, z=z)
        if (T < 0).any():
            continue
        ix = np.arange(m)
        for j in ix:
            t = T[:, j, :]
            lhs = t[t[:, :, None], ix[None, None, :]]
            rhs = t[ix[:, None, None], t[None, :, :]]
            assoc[0] += m ** 3
            if not (lhs == rhs).all() and assoc[1] is None:
                assoc[1] = _ser(a=a, y=Y[j])
        if tau(a) == a:
            abel[0] += m ** 3
            if not (T == T.transpose(2, 1, 0)).all() and abel[1] is None:
                abel[1] = _ser(a=a)
    res = [PropertyResult(f"number of fixed points ({cfg.form})", len(Y), None, f"{len(Y)} Lagrangians"),
           PropertyResult("Gamma(x,a,y,tau a,z) in Y for x,y,z in Y, all a", *closed),
           PropertyResult("fixed-y semigroup tables associative", *assoc),
           PropertyResult("a in Y: X_{a,tau a} cap Y abelian", *abel)]
    return SuiteReport("semitorsor-closure", _config_json(cfg, "semitorsor-closure"), res)


# ---------------------------------------------------------------- relation lemmas

def random_relation(ring, n, rng, pool=None):
    if pool is not None:
        return pool[rng.integers(0, len(pool))]
    k = int(rng.integers(0, 2 * n + 1))
    q = ring.order if ring.is_finite else 5
    rows = rng.integers(0, q, size=(k, 2 * n))
    return rel.LinearRelation(el.span(ring, 2 * n, ring.array(rows.tolist()) if k else []), n)


def suite_adjoint_lemmas(cfg):
    ring = cfg.ring()
    n = cfg.n
    rng = np.random.default_rng(cfg.seed)
    points = el.enumerate_subspaces(n, ring, limit=cfg.cap())
    form = _form(cfg, ring, n) if n % 2 == 0 else fm.FormDescriptor(ring, ring.eye(n), "hermitian")
    checks = {}

    def record(name, ok, **w):
        c = checks.setdefault(name, [0, None])
        c[0] += 1
        if not ok and c[1] is None:
            c[1] = _ser(**w)

    I = rel.identity(ring, n)
    for x in points:
        for a in points:
            P = rel.gen_projection(x, a)
            record("Idem: P o P = P", rel.compose(P, P) == P, x=x, a=a)
            record("opp: 1 - P^a_x = P^x_a", rel.rel_diff(I, P) == rel.gen_projection(a, x), x=x, a=a)
            dom, im, ker, ind = rel.rel_parts(P)
            record("parts of P^a_x = (x+a, x, a, x meet a)",
                   (dom, im, ker, ind) == (el.join(x, a), x, a, el.meet(x, a)), x=x, a=a)
            fx, fa = form and fm.orthocomplement(form, x), fm.orthocomplement(form, a)
            adj = rel.rel_adjoint(P, form)
            record("(P^a_x)* contains P^{x perp}_{a perp}",
                   el.is_subspace(rel.gen_projection(fa, fx).carrier, adj.carrier), x=x, a=a)
            record("(P^a_x)* = P^{x perp}_{a perp} (finite field equality)",
                   adj == rel.gen_projection(fa, fx), x=x, a=a)
            if el.is_transversal(x, a):
                Pm = el.projection_matrix(x, a)
                g1 = rel.graph(ring, fm.operator_adjoint(form, Pm))
                record("Eq. adjoint of projection: operator vs relation", g1 == adj == rel.gen_projection(fa, fx),
                       x=x, a=a)
    # relation-level lemmas: exhaustive over all relations when the count allows it
    rels = None
    if el.count_subspaces(2 * n, ring) <= 512:
        rels = [rel.LinearRelation(c, n) for c in el.enumerate_subspaces(2 * n, ring)]
    exhaustive = rels is not None and _exhaustive(cfg, len(rels) ** 2)
    if exhaustive:
        singles = rels
        pairs = itertools.product(rels, rels)
        triples = (tuple(random_relation(ring, n, rng, rels) for _ in range(3)) for _ in range(cfg.samples))
        with_points = ((F, x, a) for F in rels for x in points for a in points)
        with_point = ((F, z) for F in rels for z in points)
    else:
        singles = [random_relation(ring, n, rng) for _ in range(cfg.samples)]
        pairs = [(random_relation(ring, n, rng), random_relation(ring, n, rng)) for _ in range(cfg.samples)]
        triples = [tuple(random_relation(ring, n, rng) for _ in range(3)) for _ in range(cfg.samples)]
        with_points = [(random_relation(ring, n, rng), *(points[i] for i in rng.integers(0, len(points), size=2)))
                       for _ in range(cfg.samples)]
        with_point = [(random_relation(ring, n, rng), points[rng.integers(0, len(points))])
                      for _ in range(cfg.samples)]
    for F, x, a in with_points:
        lhs = rel.compose(rel.compose(F, rel.gen_projection(x, a)), rel.rel_inverse(F))
        record("conjugation: F P^a_x F^-1 = P^{F a}_{F x}",
               lhs == rel.gen_projection(rel.rel_apply(F, x), rel.rel_apply(F, a)), F=F, x=x, a=a)
    for F in singles:
        Fs = rel.rel_adjoint(F, form)
        record("addition: (1+F)* = 1+F*", rel.rel_adjoint(rel.one_plus(F), form) == rel.one_plus(Fs), F=F)
        record("addition: (1-F)* = 1-F*", rel.rel_adjoint(rel.one_minus(F), form) == rel.one_minus(Fs), F=F)
        record("(F*)* = F", rel.rel_adjoint(Fs, form) == F, F=F)
        record("adjoint commutes with inverse",
               rel.rel_adjoint(rel.rel_inverse(F), form) == rel.rel_inverse(Fs), F=F)
        dom, im, ker, ind = rel.rel_parts(F)
        record("dim F = dim ker F + dim im F", F.dim == ker.dim + im.dim, F=F)
        record("dim F = dim indef F + dim dom F", F.dim == ind.dim + dom.dim, F=F)
    for F, G in pairs:
        GF = rel.rel_adjoint(rel.compose(G, F), form)
        FG = rel.compose(rel.rel_adjoint(F, form), rel.rel_adjoint(G, form))
        record("Arens: (G o F)* contains F* o G*", el.is_subspace(FG.carrier, GF.carrier), F=F, G=G)
        record("Arens equality over a finite field", FG == GF, F=F, G=G)
    for F, G, H in triples:
        record("compose associative", rel.compose(H, rel.compose(G, F)) == rel.compose(rel.compose(H, G), F),
               F=F, G=G, H=H)
    for F, z in with_point:
        Fs = rel.rel_adjoint(F, form)
        lhs = fm.orthocomplement(form, rel.rel_apply(F, z))
        rhs = rel.rel_apply(rel.rel_inverse(Fs), fm.orthocomplement(form, z))
        record("innocent: (F z)^perp contains (F*)^-1 z^perp", el.is_subspace(rhs, lhs), F=F, z=z)
        c = checks.setdefault("innocent: equality rate", [0, None, 0])
        c[0] += 1
        c[2] += int(lhs == rhs)
    # M adjoint identity on admissible tuples
    for x, a, y, b, z in _admissible_tuples(points):
        M = geo.middle_matrix(x, a, b, z)
        perp = [fm.orthocomplement(form, s) for s in (x, a, b, z)]
        rhs = ring.mat_neg(geo.middle_matrix(*perp))
        record("(M_xabz)* = -M_{x perp a perp b perp z perp}",
               np.array_equal(fm.operator_adjoint(form, M), rhs), x=x, a=a, b=b, z=z)
    res = []
    for k, v in checks.items():
        note = ""
        if k == "innocent: equality rate":
            note = f"equal in {v[2]} of {v[0]} cases"
        elif k.startswith(("conjugation", "addition", "Arens", "(F*)*", "adjoint", "dim F")):
            note = "exhaustive over all relations" if exhaustive else "sampled"
        res.append(PropertyResult(k, v[0], v[1], note))
    return SuiteReport("adjoint-lemmas", _config_json(cfg, "adjoint-lemmas"), res)


# ---------------------------------------------------------------- algebra level

def suite_lie_dualnumbers(cfg):
    ring = rationals() if not cfg.p else cfg.ring()
    rng = np.random.default_rng(cfg.seed)
    q = ring.order if ring.is_finite else 7
    bad, cnt = None, 0
    for _ in range(cfg.samples):
        k = int(rng.integers(1, cfg.n + 1))
        X, Y, A = (ring.array((rng.integers(0, q, size=(k, k)) - (0 if ring.is_finite else q // 2)).tolist())
                   for _ in range(3))
        cnt += 1
        if not np.array_equal(cl.lie_bracket_via_dual_numbers(X, Y, A, ring),
                              cl.lie_bracket_homotope(X, Y, A, ring)) and bad is None:
            bad = _ser(X=X, Y=Y, A=A)
    res = [PropertyResult("dual-number commutator = XAY - YAX", cnt, bad)]
    bad, cnt = None, 0
    for _ in range(min(cfg.samples, 200)):
        k = int(rng.integers(1, cfg.n + 1))
        X, Y, A = (ring.array(rng.integers(0, q, size=(k, k)).tolist()) for _ in range(3))
        cnt += 1
        exp = ring.mat_neg(ring.matmul(ring.matmul(Y, A), X))
        if not np.array_equal(cl.first_order_product(X, Y, A, ring), exp) and bad is None:
            bad = _ser(X=X, Y=Y, A=A)
    res.append(PropertyResult("(e1 X)(e2 Y) has e1e2 term -YAX", cnt, bad))
    bad, cnt = None, 0
    for _ in range(min(cfg.samples, 200)):
        k = int(rng.integers(1, cfg.n + 1))
        X, Y, Z, A = (ring.array(rng.integers(0, q, size=(k, k)).tolist()) for _ in range(4))
        br = lambda u, v: cl.lie_bracket_homotope(u, v, A, ring)  # noqa: E731
        jac = ring.mat_add(ring.mat_add(br(X, br(Y, Z)), br(Y, br(Z, X))), br(Z, br(X, Y)))
        cnt += 1
        if not all(ring.is_zero(v) for v in jac.ravel()) and bad is None:
            bad = _ser(X=X, Y=Y, Z=Z, A=A)
    res.append(PropertyResult("Jacobi identity for [.,.]_A", cnt, bad))
    if ring.is_finite and cfg.extra.get("torsor_bracket", True):
        # group commutator of (G(tau; a), o+) on symmetric X, Z, A; tau restricts to transposition
        two = ring.from_int(2)
        counts = {"G(tau;a) bracket = 2(<zax> - <xaz>)": [0, None],
                  "opposite G(tau;tau a) bracket = 2(<xaz> - <zax>)": [0, None]}
        for _ in range(min(cfg.samples, 200)):
            k = int(rng.integers(1, cfg.n + 1))
            X, Z, A = (_rand(ring, (k, k), rng) for _ in range(3))
            X, Z, A = (ring.mat_add(M, el.transpose(M)) for M in (X, Z, A))
            xaz = ring.matmul(ring.matmul(X, A), Z)
            zax = ring.matmul(ring.matmul(Z, A), X)
            exp = ring.mat_scale(two, ring.mat_sub(zax, xaz))
            for name, AA, target in ((list(counts)[0], A, exp), (list(counts)[1], ring.mat_neg(A), ring.mat_neg(exp))):
                c = counts[name]
                c[0] += 1
                if not np.array_equal(cl.torsor_lie_bracket(X, Z, AA, ring), target) and c[1] is None:
                    c[1] = _ser(X=X, Z=Z, A=AA)
        res += [PropertyResult(k, v[0], v[1], "orientation as recorded in the decisions ledger")
                for k, v in counts.items()]
    return SuiteReport("lie-dualnumbers", _config_json(cfg, "lie-dualnumbers"), res)


def _rand(ring, shape, rng):
    q = ring.order if ring.is_finite else 5
    return ring.array(rng.integers(0, q, size=shape).tolist())


def suite_pair_identities(cfg):
    ring = cfg.ring()
    rng = np.random.default_rng(cfg.seed)
    p = max(1, cfg.n // 2)
    q = max(1, cfg.n - p)
    ctx = geo.GeometryContext.standard(ring, p, q)
    cp = lambda M: geo.chart_plus(ring, M)  # noqa: E731
    cm = lambda M: geo.chart_minus(ring, M)  # noqa: E731
    mm = ring.matmul
    checks = {}

    def record(name, ok, **w):
        c = checks.setdefault(name, [0, None])
        c[0] += 1
        if not ok and c[1] is None:
            c[1] = _ser(**w)

    for _ in range(cfg.samples):
        X, Z, V = (_rand(ring, (p, q), rng) for _ in range(3))
        Y, U = (_rand(ring, (q, p), rng) for _ in range(2))
        x, z, v, y, u = cp(X), cp(Z), cp(V), cm(Y), cm(U)
        pp = lambda s, t, w: cl.pair_product(ctx, s, t, w)  # noqa: E731
        lhs = pp(x, y, pp(z, u, v))
        mid = pp(x, pp(u, z, y), v)
        rhs = pp(pp(x, y, z), u, v)
        record("<xy<zuv>> = <<xyz>uv> = <x<uzy>v>", lhs == mid == rhs, x=x, y=y, z=z, u=u, v=v)
        record("chart: <x a z>+ = X A Z", geo.plus_coordinates(pp(x, y, z), p).tolist() == mm(mm(X, Y), Z).tolist(),
               X=X, A=Y, Z=Z)
        record("chart: <b x c>- = C X B (row chart)",
               geo.minus_coordinates(pp(y, x, u), p).tolist() == mm(mm(U, X), Y).tolist(), B=Y, X=X, C=U)
    # second kind: tau = perp of I_{p,q} exchanges o+ and o-
    gram = np.block([[ring.eye(p), ring.zeros(p, q)], [ring.zeros(q, p), ring.mat_neg(ring.eye(q))]])
    tau = fm.InvolutionMap.orthocomplement(fm.FormDescriptor(ring, gram, "hermitian"))
    star = (lambda M: el.transpose(ring.mat_conj(M))) if ring.has_conjugation else el.transpose
    for _ in range(cfg.samples):
        U, X, Y, Z, W = (_rand(ring, (p, q), rng) for _ in range(5))
        u, x, y, z, w = (cp(M) for M in (U, X, Y, Z, W))
        t = lambda s, r, v: cl.triple_product_second_kind(ctx, tau, s, r, v)  # noqa: E731
        record("<u<xyz>w> = <<uzy>xw>", t(u, t(x, y, z), w) == t(t(u, z, y), x, w), u=u, x=x, y=y, z=z, w=w)
        record("chart: <XYZ> = X Y* Z", geo.plus_coordinates(t(x, y, z), p).tolist()
               == mm(mm(X, star(Y)), Z).tolist(), X=X, Y=Y, Z=Z)
    if p == q:
        sq = geo.GeometryContext.standard(ring, p)
        for _ in range(min(cfg.samples, 200)):
            U, V = (_rand(ring, (p, p), rng) for _ in range(2))
            r = cl.algebra_product(sq, cp(U), cp(V))
            record("algebra product on charts = matrix product", geo.plus_coordinates(r, p).tolist()
                   == mm(U, V).tolist(), U=U, V=V)
    res = [PropertyResult(k, v[0], v[1]) for k, v in checks.items()]
    return SuiteReport("pair-identities", _config_json(cfg, "pair-identities"), res)


def suite_conjug(cfg):
    ring = cfg.ring()
    if cfg.n % 2:
        raise NotCompatible("conjug needs an even ambient dimension")
    m = cfg.n // 2
    ctx = geo.GeometryContext.standard(ring, m)
    points = el.enumerate_subspaces(cfg.n, ring, limit=cfg.cap())
    res = []
    for fam in ("symplectic", "hyperbolic"):
        tau = fm.InvolutionMap.orthocomplement(fm.standard_form(ring, fam, m))
        cnt, bad, orders = 0, None, []
        for a in points:
            if tau(a) != a or not el.is_transversal(a, ctx.o_plus):
                continue
            r = geo.conjug_isomorphism(ctx, tau, a, points)
            cnt += 1
            orders.append(len(r.source))
            if not r.ok and bad is None:
                bad = _ser(a=a, **r.to_json())
        res.append(PropertyResult(f"t~_a: G(tau';a) -> U(tau;2a,o+,o-) isomorphism, tau = perp {fam}", cnt, bad,
                                  f"group orders {sorted(set(orders))}"))
    tau = fm.InvolutionMap.orthocomplement(fm.standard_form(ring, "symplectic", m))
    U = geo.tau_unitary_group(tau, ctx.e, ctx.o_plus, ctx.o_minus, points)
    star = (lambda M: el.transpose(ring.mat_conj(M))) if ring.has_conjugation else el.transpose
    direct = [g for g in cl.enumerate_matrices(ring, (m, m), cfg.cap())
              if np.array_equal(ring.matmul(g, star(g)), ring.eye(m))]
    res.append(PropertyResult("U(tau;e,o+,o-) is a group", len(U), None if U.check_axioms() else "axioms fail"))
    res.append(PropertyResult("|U(tau;e,o+,o-)| = #{g : g g* = 1}", len(U),
                              None if len(U) == len(direct) else {"geometric": len(U), "direct": len(direct)}))
    # x + tau(x) = <x b tau(x)> versus the geometric group U(tau; b, o+, o-)
    bad, cnt = None, 0
    for b in points:
        if tau(b) != b or not el.is_transversal(b, ctx.o_plus):
            continue
        B = geo.minus_coordinates(b, m)
        Ug = geo.tau_unitary_group(tau, b, ctx.o_plus, ctx.o_minus, points)
        geo_set = {ring.key_of(geo.plus_coordinates(x, m)) for x in Ug.elements}
        chart_set = set()
        for X in cl.enumerate_matrices(ring, (m, m), cfg.cap()):
            if not el.is_invertible_matrix(ring, ring.mat_sub(ring.eye(m), ring.matmul(X, B))):
                continue
            if np.array_equal(ring.mat_add(X, star(X)), ring.matmul(ring.matmul(X, B), star(X))):
                chart_set.add(ring.key_of(X))
        cnt += 1
        if geo_set != chart_set and bad is None:
            bad = _ser(b=b)
    res.append(PropertyResult("U(tau;b,o+,o-) = {X : X + X* = X B X*, 1 - XB invertible}", cnt, bad))
    return SuiteReport("conjug", _config_json(cfg, "conjug"), res)


def suite_cayley(cfg):
    ring = cfg.ring()
    if cfg.n % 2:
        raise NotCompatible("the Cayley transform needs an even ambient dimension")
    m = cfg.n // 2
    ctx = geo.GeometryContext.standard(ring, m)
    points = el.enumerate_subspaces(cfg.n, ring, limit=cfg.cap())
    tau = fm.InvolutionMap.orthocomplement(fm.standard_form(ring, "symplectic", m))
    td, tt = geo.dual_involution(ctx, tau), geo.tilde_involution(ctx, tau)
    rho = geo.cayley_operator(ctx)
    ri = el.inverse(ring, rho)
    conj = lambda f, x: el.apply(rho, f(el.apply(ri, x)))  # noqa: E731
    res = []
    for name, f, g in (("rho tau~ rho^-1 = tau'", tt, td), ("rho tau rho^-1 = tau", tau, tau)):
        bad = next((x for x in points if conj(f, x) != g(x)), None)
        res.append(PropertyResult(name, len(points), None if bad is None else _ser(x=bad)))
    src = (ctx.o_minus, ctx.e, ctx.o_plus, ctx.minus_e())
    dst = (ctx.e, ctx.o_plus, ctx.minus_e(), ctx.o_minus)
    ok = all(el.apply(rho, s) == d for s, d in zip(src, dst))
    res.append(PropertyResult("rho sends (o-, e, o+, -e) to (e, o+, -e, o-)", 4, None if ok else "mismatch"))
    for fam, f in (("hyperbolic", td), ("signature", tt)):
        other = fm.InvolutionMap.orthocomplement(fm.standard_form(ring, fam, m))
        bad = next((x for x in points if other(x) != f(x)), None)
        name = "tau' = perp of F" if fam == "hyperbolic" else "tau~ = perp of I"
        res.append(PropertyResult(name, len(points), None if bad is None else _ser(x=bad)))
    return SuiteReport("cayley", _config_json(cfg, "cayley"), res)


RUNNERS = {
    "para-assoc": suite_para_assoc,
    "klein4": suite_klein4,
    "torsor": suite_torsor,
    "involution-restricted": suite_involution_restricted,
    "involution-global": suite_involution_global,
    "semitorsor-closure": suite_semitorsor_closure,
    "adjoint-lemmas": suite_adjoint_lemmas,
    "lie-dualnumbers": suite_lie_dualnumbers,
    "pair-identities": suite_pair_identities,
    "conjug": suite_conjug,
    "cayley": suite_cayley,
}


def run_suite(name, cfg):
    if name not in RUNNERS:
        raise KeyError(name)
    return RUNNERS[name](cfg)
