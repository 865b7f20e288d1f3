import numpy as np
import pytest

from grastor import exactlinalg as el
from grastor import forms as fm
from grastor import geometry as geo
from grastor.errors import LimitExceeded, NotEnumerable
from grastor.scalars import prime_field, rationals
from grastor.setgamma import VectorSetEngine


@pytest.fixture(scope="module")
def engines():
    F = prime_field(2)
    return VectorSetEngine(F, 3, backend="numba"), VectorSetEngine(F, 3, backend="numpy")


def test_engine_points_follow_enumeration_order(engines):
    E, _ = engines
    assert E.points == el.enumerate_subspaces(3, prime_field(2))
    for i, s in enumerate(E.points):
        assert E.mask_to_index(int(E.masks[i])) == i
        assert bin(int(E.masks[i])).count("1") == 2 ** s.dim


def test_batch_matches_global_and_backends_agree(engines):
    E, N = engines
    rng = np.random.default_rng(0)
    T = rng.integers(0, len(E.points), size=(400, 5))
    a, b = E.gamma_batch(T), N.gamma_batch(T)
    assert np.array_equal(a, b)
    P = E.points
    for row, r in zip(T, a):
        assert P[r] == geo.gamma_global(*(P[i] for i in row))


def test_triple_table_matches_batch(engines):
    E, N = engines
    S = len(E.points)
    for a, y, b in [(1, 5, 9), (0, 0, 0), (15, 3, 7)]:
        T = E.triple_table(a, y, b)
        assert np.array_equal(T, N.triple_table(a, y, b))
        xs, zs = np.meshgrid(np.arange(S), np.arange(S), indexing="ij")
        rows = np.stack([xs.ravel(), np.full(S * S, a), np.full(S * S, y), np.full(S * S, b), zs.ravel()], axis=1)
        assert np.array_equal(T.ravel(), E.gamma_batch(rows))


@pytest.mark.parametrize("backend", ["numba", "numpy"])
def test_sweep_accepts_perp_and_rejects_identity(backend):
    F = prime_field(2)
    E = VectorSetEngine(F, 2, backend=backend)
    tau = fm.InvolutionMap.orthocomplement(fm.standard_form(F, "symplectic", 1))
    assert E.involution_sweep(tau) is None
    bad = E.involution_sweep(lambda s: s)
    assert bad is not None
    x, a, y, b, z = bad
    assert geo.gamma_global(x, a, y, b, z) != geo.gamma_global(z, a, y, b, x)


def test_engine_preconditions():
    with pytest.raises(LimitExceeded):
        VectorSetEngine(prime_field(3), 4)
    with pytest.raises(NotEnumerable):
        VectorSetEngine(rationals(), 2)
