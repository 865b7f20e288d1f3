import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from grastor import classical as cl
from grastor import exactlinalg as el
from grastor import geometry as geo
from grastor.errors import DimensionError, NotCompatible, NotInGroup
from grastor.scalars import prime_field, quadratic_field, rationals


def M(ring, rows):
    return ring.array(rows)


def E(ring, n, i, j):
    X = ring.zeros(n, n)
    X[i, j] = ring.one
    return X


def eq(a, b):
    return np.array_equal(a, b)


def rand_matrix(ring, shape, rng):
    elems = list(ring.elements())
    return ring.array([[elems[rng.integers(len(elems))] for _ in range(shape[1])] for _ in range(shape[0])])


# ---------------------------------------------------------------- homotopes

def test_homotope_product_examples(gf5, qq):
    x, y = M(gf5, [[1, 2], [3, 4]]), M(gf5, [[0, 1], [1, 1]])
    assert eq(cl.homotope_product(x, y, gf5.zeros(2, 2), gf5), gf5.mat_add(x, y))
    two, one = M(qq, [[2]]), M(qq, [[1]])
    assert cl.homotope_product(two, two, one, qq)[0, 0] == Fraction(0)


def test_homotope_product_shape_mismatch(gf3):
    with pytest.raises(DimensionError):
        cl.homotope_product(gf3.zeros(2, 2), gf3.zeros(2, 1), gf3.zeros(2, 2), gf3)


def test_homotope_inverse_examples(gf5):
    x = M(gf5, [[1, 2], [3, 4]])
    assert eq(cl.homotope_inverse(x, gf5.zeros(2, 2), gf5), gf5.mat_neg(x))
    assert eq(cl.homotope_inverse(gf5.zeros(2, 2), x, gf5), gf5.zeros(2, 2))
    j = cl.homotope_inverse(M(gf5, [[1]]), M(gf5, [[2]]), gf5)
    assert j[0, 0] == 1
    assert cl.homotope_product(M(gf5, [[1]]), M(gf5, [[1]]), M(gf5, [[2]]), gf5)[0, 0] == 0


def test_homotope_inverse_not_in_group(gf5):
    with pytest.raises(NotInGroup):
        cl.homotope_inverse(M(gf5, [[1]]), M(gf5, [[1]]), gf5)


def test_homotope_associativity_and_linearisation_gf5():
    ring = prime_field(5)
    rng = np.random.default_rng(3)
    for _ in range(2000):
        x, y, z, a = (rand_matrix(ring, (2, 2), rng) for _ in range(4))
        p = lambda u, v: cl.homotope_product(u, v, a, ring)  # noqa: E731
        assert eq(p(p(x, y), z), p(x, p(y, z)))
        assert eq(cl.to_linear(p(x, y), a, ring), ring.matmul(cl.to_linear(x, a, ring), cl.to_linear(y, a, ring)))
        if el.is_invertible_matrix(ring, cl.to_linear(x, a, ring)):
            j = cl.homotope_inverse(x, a, ring)
            assert eq(p(x, j), ring.zeros(2, 2)) and eq(p(j, x), ring.zeros(2, 2))


def test_rectangular_homotope(gf3):
    x, y = M(gf3, [[1, 0, 2]]), M(gf3, [[0, 1, 1]])
    a = M(gf3, [[1], [2], [0]])
    r = cl.homotope_product(x, y, a, gf3)
    assert r.shape == (1, 3)
    assert eq(r, gf3.mat_sub(gf3.mat_add(x, y), gf3.matmul(gf3.matmul(x, a), y)))


# ---------------------------------------------------------------- groups

def test_gl_zero_parameter_is_additive_group(gf3):
    g = cl.enumerate_group(cl.HomotopeGroupSpec("gl", gf3.zeros(2, 2), gf3))
    assert len(g) == 81
    assert g.is_group()


def test_orthogonal_identity_matches_oracle(gf3):
    spec = cl.HomotopeGroupSpec("orthogonal", gf3.eye(2), gf3)
    g = cl.enumerate_group(spec)
    oracle = cl.oracle_group_elements(spec)
    assert len(g) == len(oracle) == 8
    assert all(X in g for X in oracle)
    assert g.is_group()


def test_symplectic_matches_oracle(gf3):
    A = M(gf3, [[0, 1], [2, 0]])
    spec = cl.HomotopeGroupSpec("symplectic", A, gf3)
    g = cl.enumerate_group(spec)
    oracle = cl.oracle_group_elements(spec)
    assert len(g) == len(oracle) == 24
    assert all(X in g for X in oracle)
    assert g.is_group()


def test_unitary_matches_norm_one_count(gf9):
    # g conj(g) = 1 in GF(9) has q + 1 = 4 solutions
    spec = cl.HomotopeGroupSpec("unitary", gf9.eye(1), gf9)
    g = cl.enumerate_group(spec)
    norm_one = [x for x in gf9.elements() if gf9.mul(x, gf9.conj(x)) == gf9.one]
    assert len(g) == len(norm_one) == 4
    assert g.is_group()


def test_parameter_checks(gf3, gf5):
    with pytest.raises(NotCompatible):
        cl.HomotopeGroupSpec("orthogonal", M(gf3, [[0, 1], [0, 0]]), gf3)
    with pytest.raises(NotCompatible):
        cl.HomotopeGroupSpec("symplectic", gf3.eye(2), gf3)
    with pytest.raises(NotCompatible):
        cl.HomotopeGroupSpec("unitary", gf5.eye(1), gf5)
    with pytest.raises(DimensionError):
        cl.HomotopeGroupSpec("gl", gf3.zeros(2, 3), gf3)


def test_symplectic_equation_form(gf3):
    A = M(gf3, [[0, 1], [2, 0]])
    spec = cl.HomotopeGroupSpec("symplectic", A, gf3)
    for X in cl.enumerate_matrices(gf3, (2, 2)):
        Xt = el.transpose(X)
        expect = eq(gf3.mat_sub(Xt, X), gf3.matmul(gf3.matmul(Xt, A), X))
        assert spec.equation(X) == expect


def test_hull_with_zero_parameter_is_asym(gf3):
    h = cl.semigroup_hull(cl.HomotopeGroupSpec("orthogonal", gf3.zeros(2, 2), gf3))
    asym = [X for X in cl.enumerate_matrices(gf3, (2, 2)) if eq(el.transpose(X), gf3.mat_neg(X))]
    assert len(h) == len(asym) == 3
    assert h.is_group()


def test_hull_contains_group_and_is_closed(gf3):
    spec = cl.HomotopeGroupSpec("orthogonal", gf3.eye(2), gf3)
    g, h = cl.enumerate_group(spec), cl.semigroup_hull(spec)
    assert all(X in h for X in g.elements)
    assert h.is_closed() and h.is_associative()
    assert h.unit >= 0
    singular = [X for X in h.elements if not spec.is_invertible_point(X)]
    assert len(h) == len(g) + len(singular)


def test_group_table_csv_and_legend(gf3):
    g = cl.enumerate_group(cl.HomotopeGroupSpec("orthogonal", gf3.eye(1), gf3))
    csv = g.to_csv()
    assert csv.splitlines()[0].startswith("row,")
    assert len(g.legend()) == len(g)


# ---------------------------------------------------------------- Lie

def test_lie_examples(qq):
    I, Z = qq.eye(2), qq.zeros(2, 2)
    E12, E21, E11, E22 = E(qq, 2, 0, 1), E(qq, 2, 1, 0), E(qq, 2, 0, 0), E(qq, 2, 1, 1)
    assert eq(cl.lie_bracket_homotope(E12, E21, I, qq), qq.mat_sub(E11, E22))
    assert eq(cl.lie_bracket_homotope(E12, E21, Z, qq), Z)
    assert eq(cl.lie_bracket_homotope(E12, E21, E11, qq), qq.mat_neg(E22))
    assert eq(cl.lie_bracket_via_dual_numbers(E12, E21, E11, qq), qq.mat_neg(E22))
    assert eq(cl.lie_bracket_via_dual_numbers(E12, E12, I, qq), Z)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_dual_numbers_agree_gf7(n):
    ring = prime_field(7)
    rng = np.random.default_rng(n)
    for _ in range(40):
        X, Y, A = (rand_matrix(ring, (n, n), rng) for _ in range(3))
        assert eq(cl.lie_bracket_via_dual_numbers(X, Y, A, ring), cl.lie_bracket_homotope(X, Y, A, ring))
        # first-order term of the group law X + Z - Z A X
        assert eq(cl.first_order_product(X, Y, A, ring), ring.mat_neg(ring.matmul(ring.matmul(Y, A), X)))


@given(st.lists(st.integers(-3, 3), min_size=12, max_size=12))
def test_dual_numbers_agree_rationals(vals):
    qq = rationals()
    X, Y, A = (qq.array([vals[k:k + 2], vals[k + 2:k + 4]]) for k in (0, 4, 8))
    assert eq(cl.lie_bracket_via_dual_numbers(X, Y, A, qq), cl.lie_bracket_homotope(X, Y, A, qq))


def test_jacobi_and_closure_gf5():
    ring = prime_field(5)
    rng = np.random.default_rng(11)
    sym = lambda X: ring.mat_add(X, el.transpose(X))  # noqa: E731
    skew = lambda X: ring.mat_sub(X, el.transpose(X))  # noqa: E731
    for _ in range(200):
        X, Y, Z, A = (rand_matrix(ring, (3, 3), rng) for _ in range(4))
        b = lambda u, v: cl.lie_bracket_homotope(u, v, A, ring)  # noqa: E731
        j = ring.mat_add(ring.mat_add(b(X, b(Y, Z)), b(Y, b(Z, X))), b(Z, b(X, Y)))
        assert eq(j, ring.zeros(3, 3))
        S = sym(A)
        r = cl.lie_bracket_homotope(skew(X), skew(Y), S, ring)
        assert eq(el.transpose(r), ring.mat_neg(r))
        K = skew(A)
        r = cl.lie_bracket_homotope(sym(X), sym(Y), K, ring)
        assert eq(el.transpose(r), r)


def test_torsor_bracket_orientation_gf5():
    ring = prime_field(5)
    rng = np.random.default_rng(5)
    sym = lambda X: ring.mat_add(X, el.transpose(X))  # noqa: E731
    two = ring.coerce(2)
    for _ in range(30):
        X, Z, A = (sym(rand_matrix(ring, (2, 2), rng)) for _ in range(3))
        zax = ring.matmul(ring.matmul(Z, A), X)
        xaz = ring.matmul(ring.matmul(X, A), Z)
        assert eq(cl.torsor_lie_bracket(X, Z, A, ring), ring.mat_scale(two, ring.mat_sub(zax, xaz)))
        assert eq(cl.torsor_lie_bracket(X, Z, ring.mat_neg(A), ring), ring.mat_scale(two, ring.mat_sub(xaz, zax)))


# ---------------------------------------------------------------- pairs, triples, involutions

def test_pair_product_charts_gf3():
    ring = prime_field(3)
    ctx = geo.GeometryContext.standard(ring, 1, 2)
    rng = np.random.default_rng(2)
    for _ in range(30):
        X, Z = (rand_matrix(ring, (1, 2), rng) for _ in range(2))
        Y, U = (rand_matrix(ring, (2, 1), rng) for _ in range(2))
        x, z, y, u = geo.chart_plus(ring, X), geo.chart_plus(ring, Z), geo.chart_minus(ring, Y), geo.chart_minus(ring, U)
        r = cl.pair_product(ctx, x, y, z)
        assert eq(geo.plus_coordinates(r, 1), ring.matmul(ring.matmul(X, Y), Z))
        r = cl.pair_product(ctx, y, x, u)
        assert eq(geo.minus_coordinates(r, 1), ring.matmul(ring.matmul(U, X), Y))


def test_pair_product_rejects_mixed_charts(gf3):
    ctx = geo.GeometryContext.standard(gf3, 1)
    with pytest.raises(geo.NotAdmissible):
        cl.pair_product(ctx, ctx.o_plus, ctx.o_plus, ctx.o_plus)


def test_algebra_unit_law(gf5):
    ctx = geo.GeometryContext.standard(gf5, 2)
    rng = np.random.default_rng(0)
    for _ in range(10):
        u = geo.chart_plus(gf5, rand_matrix(gf5, (2, 2), rng))
        assert cl.algebra_product(ctx, u, ctx.e) == u
        assert cl.algebra_product(ctx, ctx.e, u) == u


def test_second_kind_chart_and_unit(gf3):
    from grastor import forms as fm
    ctx = geo.GeometryContext.standard(gf3, 1, 2)
    gram = np.block([[gf3.eye(1), gf3.zeros(1, 2)], [gf3.zeros(2, 1), gf3.mat_neg(gf3.eye(2))]])
    tau = fm.InvolutionMap.orthocomplement(fm.FormDescriptor(gf3, gram, "hermitian"))
    assert ctx.involution_type(tau)["exchanging"]
    rng = np.random.default_rng(4)
    for _ in range(20):
        X, Y, Z = (rand_matrix(gf3, (1, 2), rng) for _ in range(3))
        r = cl.triple_product_second_kind(ctx, tau, *(geo.chart_plus(gf3, T) for T in (X, Y, Z)))
        assert eq(geo.plus_coordinates(r, 1), gf3.matmul(gf3.matmul(X, el.transpose(Y)), Z))
    sq = geo.GeometryContext.standard(gf3, 1)
    with pytest.raises(NotCompatible):
        cl.triple_product_second_kind(sq, lambda s: s, sq.e, sq.e, sq.e)


@pytest.mark.parametrize("n", [1, 2])
def test_functor2_round_trip_transpose_gf3(n):
    assert cl.functor2_round_trip(cl.MatrixAlgebraContext(prime_field(3), n)) is None


def test_functor2_round_trip_conjugate_gf9(gf9):
    assert cl.functor2_round_trip(cl.MatrixAlgebraContext(gf9, 1, star="conjugate_transpose")) is None


def test_functor2_rejects_mismatched_star(gf3, gf9):
    with pytest.raises(NotCompatible):
        cl.functor2_geometry(cl.MatrixAlgebraContext(gf3, 1, star="none"))
    with pytest.raises(NotCompatible):
        cl.functor2_geometry(cl.MatrixAlgebraContext(gf9, 1, star="transpose"))


def test_restriction_is_antiautomorphism_gf5():
    ring = prime_field(5)
    alg = cl.MatrixAlgebraContext(ring, 2)
    ctx, tau = cl.functor2_geometry(alg)
    star = cl.restriction_involution(ctx, tau)
    rng = np.random.default_rng(8)
    for _ in range(25):
        X, Y = rand_matrix(ring, (2, 2), rng), rand_matrix(ring, (2, 2), rng)
        assert eq(star(ring.matmul(X, Y)), ring.matmul(star(Y), star(X)))
        assert eq(star(star(X)), X)
    assert alg.is_antiautomorphism([(rand_matrix(ring, (2, 2), rng), rand_matrix(ring, (2, 2), rng))
                                    for _ in range(10)])


def test_unitary_condition_equivalence_gf3():
    # tau(x) = j_b(x)  <=>  x + tau(x) = <x b tau(x)>, with <x b y> from Gamma
    ring = prime_field(3)
    alg = cl.MatrixAlgebraContext(ring, 1)
    ctx, tau = cl.functor2_geometry(alg)
    star = cl.restriction_involution(ctx, tau)
    for B in cl.enumerate_matrices(ring, (1, 1)):
        b = geo.chart_minus(ring, B)
        for X in cl.enumerate_matrices(ring, (1, 1)):
            if not el.is_invertible_matrix(ring, cl.to_linear(B, X, ring)):
                continue
            x, tx = geo.chart_plus(ring, X), star(X)
            left = eq(tx, cl.homotope_inverse(X, B, ring))
            triple = geo.plus_coordinates(cl.pair_product(ctx, x, b, geo.chart_plus(ring, tx)), 1)
            right = eq(ring.mat_add(X, tx), triple)
            assert left == right


def _brute_type_preserving(ring, p, q):
    """All pairs (T+, T-) of d x d matrices satisfying both identities, by exhaustion."""
    d = p * q
    units_p = [cl._unit(ring, p, q, k) for k in range(d)]
    units_m = [cl._unit(ring, q, p, k) for k in range(d)]
    act = lambda T, X: ring.matmul(T, X.reshape(-1, 1)).reshape(X.shape)  # noqa: E731
    mats = cl.enumerate_matrices(ring, (d, d))
    out = []
    for Tp, Tm in itertools.product(mats, mats):
        if not (eq(ring.matmul(Tp, Tp), ring.eye(d)) and eq(ring.matmul(Tm, Tm), ring.eye(d))):
            continue
        ok = all(eq(act(Tp, ring.matmul(ring.matmul(u, v), w)),
                    ring.matmul(ring.matmul(act(Tp, w), act(Tm, v)), act(Tp, u)))
                 for u in units_p for w in units_p for v in units_m)
        ok = ok and all(eq(act(Tm, ring.matmul(ring.matmul(u, v), w)),
                           ring.matmul(ring.matmul(act(Tm, w), act(Tp, v)), act(Tm, u)))
                        for u in units_m for w in units_m for v in units_p)
        if ok:
            out.append((Tp, Tm))
    return out


@pytest.mark.parametrize("p_, q, shape", [(3, 1, 1), (2, 1, 2), (3, 1, 2)])
def test_search_type_preserving_matches_brute_force(p_, q, shape):
    ring = prime_field(p_)
    found = cl.search_type_preserving(ring, q, shape)
    brute = _brute_type_preserving(ring, q, shape)
    key = lambda pr: (ring.key_of(pr[0]), ring.key_of(pr[1]))  # noqa: E731
    assert sorted(map(key, found)) == sorted(map(key, brute))
    # a rectangular pair has no reversal, so only the square case has solutions
    assert bool(found) == (q == shape)


# ---------------------------------------------------------------- orbits

def _partition(orbits_list, ring):
    return sorted(sorted(ring.key_of(A) for A in o["members"]) for o in orbits_list)


@pytest.mark.parametrize("family, ring", [("sym", prime_field(3)), ("asym", prime_field(3)),
                                          ("sym", prime_field(5)), ("herm", quadratic_field(3))])
def test_orbits_match_full_gl_oracle(family, ring):
    n = 1 if ring.order > 5 else 2
    rep = cl.classify_orbits(family, n, ring, group_orders=False)
    oracle = cl.orbit_oracle(family, n, ring)
    assert _partition(rep, ring) == sorted(sorted(o) for o in oracle)


def test_orbit_counts_gf3():
    ring = prime_field(3)
    assert len(cl.orbit_oracle("sym", 2, ring)) == 5
    assert len(cl.classify_orbits("sym", 2, ring, group_orders=False)) == 5
    asym = cl.classify_orbits("asym", 2, ring, group_orders=False)
    assert len(asym) == 2
    assert sorted(o["rank"] for o in asym) == [0, 2]


def test_scalar_merged_orbits_gf3():
    ring = prime_field(3)
    space = {ring.key_of(A): A for A in cl.parameter_space("sym", 2, ring)}
    oracle = cl.orbit_oracle("sym", 2, ring)
    where = {k: i for i, o in enumerate(oracle) for k in o}
    # orbits glued whenever A and 2A lie in different ones
    glued = {frozenset((where[k], where[ring.key_of(ring.mat_scale(ring.coerce(2), A))]))
             for k, A in space.items()}
    parent = list(range(len(oracle)))
    for pair in glued:
        i, j = sorted(pair) if len(pair) == 2 else (min(pair),) * 2
        while parent[j] != j:
            j = parent[j]
        while parent[i] != i:
            i = parent[i]
        parent[max(i, j)] = min(i, j)
    roots = set()
    for i in range(len(oracle)):
        while parent[i] != i:
            i = parent[i]
        roots.add(i)
    assert len(cl.classify_orbits("sym", 2, ring, scalars=True, group_orders=False)) == len(roots) == 4


def test_group_order_constant_on_orbits_gf3():
    ring = prime_field(3)
    for family in ("sym", "asym"):
        for orbit in cl.classify_orbits(family, 2, ring):
            orders = {len(cl.enumerate_group(cl.HomotopeGroupSpec(cl.ORBIT_FAMILIES[family], A, ring)))
                      for A in orbit["members"]}
            assert orders == {orbit["group_order"]}
