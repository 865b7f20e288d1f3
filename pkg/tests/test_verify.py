import json

import pytest

from grastor import exactlinalg as el
from grastor import geometry as geo
from grastor.errors import LimitExceeded
from grastor.scalars import prime_field
from grastor.verify import SUITES, GammaBackend, RunConfig, run_suite

SMALL = {
    "para-assoc": dict(p=2, n=2, samples=200),
    "klein4": dict(p=2, n=2, samples=200),
    "torsor": dict(p=2, n=2, samples=200),
    "involution-restricted": dict(p=3, n=2, samples=100),
    "involution-global": dict(p=3, n=2, samples=100),
    "semitorsor-closure": dict(p=2, n=2, samples=100),
    "adjoint-lemmas": dict(p=2, n=1, samples=50),
    "lie-dualnumbers": dict(p=5, n=2, samples=30),
    "pair-identities": dict(p=3, n=2, samples=30),
    "conjug": dict(p=3, n=2, samples=30),
    "cayley": dict(p=3, n=2, samples=30),
}


def test_every_suite_has_a_small_config():
    assert set(SMALL) == set(SUITES)


@pytest.mark.parametrize("suite", SUITES)
def test_suite_passes_at_small_scale(suite):
    report = run_suite(suite, RunConfig(**SMALL[suite]))
    failed = [r.to_json() for r in report.results if not r.passed]
    assert report.passed, failed
    assert report.results and all(r.checked > 0 for r in report.results)


@pytest.mark.parametrize("suite", ["torsor", "adjoint-lemmas", "pair-identities", "lie-dualnumbers"])
def test_reports_are_deterministic(suite):
    a = json.dumps(run_suite(suite, RunConfig(**SMALL[suite])).to_json(), sort_keys=True)
    b = json.dumps(run_suite(suite, RunConfig(**SMALL[suite])).to_json(), sort_keys=True)
    assert a == b


def test_lie_suite_over_rationals():
    assert run_suite("lie-dualnumbers", RunConfig(p=0, n=2, samples=20)).passed


@pytest.mark.parametrize("mode", ["global", "oracle", "middle", "vectorset"])
def test_gamma_backends_agree(gf3, mode):
    ref = GammaBackend(gf3, 2, "oracle")
    other = GammaBackend(gf3, 2, mode)
    T = [(i % 6, (i // 6) % 6, (i // 36) % 6, (i // 7) % 6, (i // 11) % 6) for i in range(300)]
    # both enumerate the same points, possibly in different orders
    got = [other.points[k] for k in other.batch([[other.index[ref.points[j]] for j in t] for t in T])]
    assert got == [ref.points[k] for k in ref.batch(T)]


def test_unknown_mode_and_suite():
    with pytest.raises(ValueError):
        GammaBackend(prime_field(2), 1, "nope")
    with pytest.raises(KeyError):
        run_suite("nope", RunConfig())


def test_exhaustive_beyond_limit_raises():
    with pytest.raises(LimitExceeded):
        run_suite("para-assoc", RunConfig(p=2, n=2, exhaustive=True, limit=10))


def test_counterexample_is_serialized(monkeypatch):
    # a Gamma that returns its middle argument is not para-associative
    monkeypatch.setattr(geo, "gamma_global", lambda x, a, y, b, z: y)
    report = run_suite("para-assoc", RunConfig(p=2, n=1, samples=50))
    assert not report.passed
    out = report.to_json()
    prop = out["properties"][0]
    assert prop["passed"] is False
    ce = json.loads(json.dumps(prop["counterexample"]))
    subs = {k: el.Subspace.from_json(v) for k, v in ce.items()}
    assert set(subs) >= {"x", "a", "y", "b", "z"}
    assert all(s.n == 1 for s in subs.values())
