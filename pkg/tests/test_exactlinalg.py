import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import sub
from grastor import exactlinalg as el
from grastor.errors import DimensionError, LimitExceeded, NotInvertible, NotTransversal, ParseError
from grastor.scalars import prime_field, quadratic_field, rationals


def test_rref_examples(gf2, qq):
    R, r = el.rref(gf2, [[0, 1], [1, 0]])
    assert r == 2 and R.tolist() == [[1, 0], [0, 1]]
    R, r = el.rref(qq, [[2, 4]])
    assert r == 1 and R.tolist() == [[1, 2]]
    R, r = el.rref(gf2, [[1, 1], [1, 1]])
    assert r == 1 and R.tolist() == [[1, 1]]


def test_kernel_and_image_examples(gf3, gf2):
    assert el.kernel(gf3, [[1, 0], [0, 0]]) == sub(gf3, 2, [[0, 1]])
    assert el.image(gf3, gf3.zeros(2, 2)) == el.zero_space(gf3, 2)
    assert el.kernel(gf2, [[1, 1]]) == sub(gf2, 2, [[1, 1]])


def test_lattice_examples(gf2):
    e1, e2, e3 = ([1, 0, 0],), ([0, 1, 0],), ([0, 0, 1],)
    assert el.meet(sub(gf2, 3, [*e1, *e2]), sub(gf2, 3, [*e2, *e3])) == sub(gf2, 3, [*e2])
    assert el.join(sub(gf2, 2, [[1, 0]]), sub(gf2, 2, [[0, 1]])) == el.full_space(gf2, 2)


def test_meet_idempotent_gf5():
    F = prime_field(5)
    rng = np.random.default_rng(0)
    for _ in range(1000):
        k = int(rng.integers(0, 5))
        x = sub(F, 4, rng.integers(0, 5, size=(k, 4)).tolist())
        assert el.meet(x, x) == x and el.join(x, x) == x


def test_transversal_examples(gf2):
    e1, e2, d = sub(gf2, 2, [[1, 0]]), sub(gf2, 2, [[0, 1]]), sub(gf2, 2, [[1, 1]])
    assert el.is_transversal(e1, e2)
    assert not el.is_transversal(e1, e1)
    assert el.is_transversal(e1, d)


def test_complement_examples(gf3, gf2):
    assert el.complement(sub(gf3, 2, [[1, 0]])) == sub(gf3, 2, [[0, 1]])
    assert el.complement(el.full_space(gf3, 2)) == el.zero_space(gf3, 2)
    assert el.complement(sub(gf2, 3, [[1, 1, 0], [0, 0, 1]])) == sub(gf2, 3, [[0, 1, 0]])


def test_complement_is_transversal_everywhere():
    F = prime_field(3)
    for x in el.enumerate_subspaces(3, F):
        assert el.is_transversal(x, el.complement(x))


def test_projection_examples(gf3):
    e1, e2, d = sub(gf3, 2, [[1, 0]]), sub(gf3, 2, [[0, 1]]), sub(gf3, 2, [[1, 1]])
    assert el.projection_matrix(e1, e2).tolist() == [[1, 0], [0, 0]]
    assert el.projection_matrix(el.full_space(gf3, 2), el.zero_space(gf3, 2)).tolist() == [[1, 0], [0, 1]]
    assert el.projection_matrix(e1, d).tolist() == [[1, 2], [0, 0]]
    with pytest.raises(NotTransversal):
        el.projection_matrix(e1, e1)


def test_projection_laws_exhaustive_gf2_cubed(gf2):
    pts = el.enumerate_subspaces(3, gf2)
    I = gf2.eye(3)
    for x in pts:
        for a in pts:
            if not el.is_transversal(x, a):
                continue
            P = el.projection_matrix(x, a)
            assert np.array_equal(gf2.matmul(P, P), P)
            assert np.array_equal(gf2.mat_add(P, el.projection_matrix(a, x)), I)
            assert el.apply(P, el.full_space(gf2, 3)) == x
            assert el.kernel(gf2, P) == a


@pytest.mark.parametrize("n,q,count", [(2, 2, 5), (4, 2, 67), (1, 3, 2), (2, 3, 6), (3, 2, 16), (4, 3, 212)])
def test_subspace_counts(n, q, count):
    F = prime_field(q)
    assert el.count_subspaces(n, F) == count
    assert len(el.enumerate_subspaces(n, F)) == count


def _brute_subspaces(n, F):
    # every subspace is the row space of some n x n matrix
    vals = list(F.elements())
    seen = set()
    for entries in itertools.product(vals, repeat=n * n):
        seen.add(el.span(F, n, F.array(np.reshape(entries, (n, n)).tolist())))
    return seen


@pytest.mark.parametrize("n,q", [(2, 2), (3, 2), (2, 3), (2, 5), (3, 3)])
def test_enumeration_matches_brute_force(n, q):
    F = prime_field(q)
    pts = el.enumerate_subspaces(n, F)
    assert len(set(pts)) == len(pts)
    assert set(pts) == _brute_subspaces(n, F)


def test_enumeration_gf9_and_order():
    F = quadratic_field(3)
    pts = el.enumerate_subspaces(2, F)
    assert len(pts) == 1 + 10 + 1
    dims = [x.dim for x in pts]
    assert dims == sorted(dims)


def _gauss_recurrence(n, k, q):
    if k == 0 or k == n:
        return 1
    return _gauss_recurrence(n - 1, k - 1, q) + q ** k * _gauss_recurrence(n - 1, k, q)


@pytest.mark.parametrize("q", [2, 3, 5, 7])
def test_count_matches_recurrence(q):
    for n in range(6):
        assert sum(_gauss_recurrence(n, k, q) for k in range(n + 1)) == el.count_subspaces(n, prime_field(q))


def test_enumeration_limit(monkeypatch):
    with pytest.raises(LimitExceeded):
        el.enumerate_subspaces(4, prime_field(3), limit=100)
    monkeypatch.setenv("GRASTOR_LIMIT", "50")
    assert el.enumeration_limit() == 50
    with pytest.raises(LimitExceeded):
        el.enumerate_subspaces(4, prime_field(2))


def test_apply_examples(gf2):
    x = sub(gf2, 2, [[0, 1]])
    assert el.apply(gf2.eye(2), x) == x
    assert el.apply(gf2.zeros(2, 2), x) == el.zero_space(gf2, 2)
    assert el.apply([[0, 1], [0, 0]], x) == sub(gf2, 2, [[1, 0]])
    with pytest.raises(DimensionError):
        el.apply(gf2.eye(3), x)


def test_preimage_is_largest(gf3):
    rng = np.random.default_rng(1)
    pts = el.enumerate_subspaces(3, gf3)
    for _ in range(100):
        m = gf3.array(rng.integers(0, 3, size=(3, 3)).tolist())
        x = pts[rng.integers(0, len(pts))]
        pre = el.preimage(m, x)
        assert el.is_subspace(el.apply(m, pre), x)
        # brute force: the preimage is exactly the set of vectors landing in x
        for v in itertools.product(range(3), repeat=3):
            w = gf3.matmul(m, gf3.array([[c] for c in v])).ravel()
            assert pre.contains(list(v)) == x.contains(w.tolist())


def test_modular_law_exhaustive(gf2):
    pts = el.enumerate_subspaces(3, gf2)
    for x, y, z in itertools.product(pts, repeat=3):
        if el.is_subspace(x, z):
            assert el.join(x, el.meet(y, z)) == el.meet(el.join(x, y), z)


def test_inverse(qq):
    m = qq.array([[2, 1], [1, 1]])
    assert np.array_equal(qq.matmul(m, el.inverse(qq, m)), qq.eye(2))
    with pytest.raises(NotInvertible):
        el.inverse(qq, [[1, 2], [2, 4]])


matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=r, max_size=r)))


@given(matrices, st.sampled_from([2, 3, 5, 0]))
def test_rref_canonical_and_rank_nullity(rows, p):
    F = rationals() if p == 0 else prime_field(p)
    m = F.array(rows)
    R, r = el.rref(F, m)
    R2, r2 = el.rref(F, R)
    assert r == r2 and np.array_equal(R, R2)
    assert el.kernel(F, m).dim + r == m.shape[1]


@given(matrices)
def test_subspace_equality_is_basis_independent(rows):
    F = prime_field(5)
    m = F.array(rows)
    x = el.span(F, m.shape[1], m)
    g = F.array([[1, 2, 0, 0][: m.shape[0]] + [0] * max(0, m.shape[0] - 4)])
    assert el.span(F, m.shape[1], np.concatenate([m, F.matmul(g, m)])) == x


def test_subspace_json_roundtrip(gf9):
    x = sub(gf9, 2, [[1, gf9.make(1, 1)]])
    assert el.Subspace.from_json(x.to_json()) == x
    with pytest.raises(ParseError):
        el.Subspace.from_json({"n": 2, "ring": "GF(3)", "basis": [["0", "1"], ["1", "0"]]})
    with pytest.raises(ParseError):
        el.Subspace.from_json({"n": 2, "basis": [["1", "0"]]})
