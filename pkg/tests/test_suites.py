import pytest

from sepsys import suites
from sepsys.core import LemmaViolation, SepSysError
from sepsys.profinite import PreconditionFailed
from sepsys.suites import (
    SUITES,
    TRANSFER_SUITES,
    Suite,
    SuiteConfig,
    Tally,
    UnknownSuite,
    get_suite,
    run_on_input,
    run_suite,
    search,
)
from sepsys.testkit import BadParams, edge_tree_set, star_tree


class TestTally:
    def test_outcomes(self):
        t = Tally()

        def boom(exc):
            raise exc("x")

        assert t.run("ok", lambda: 5) == 5
        t.run("skip", boom, PreconditionFailed)
        t.run("bad", boom, LemmaViolation)
        t.run("odd", boom, SepSysError)
        assert (t.checks, t.skipped, len(t.violations)) == (1, 1, 2)
        assert "unexpected" in t.violations[1]

    def test_expect(self):
        t = Tally()
        assert not t.expect(False, "nope")
        assert t.violations == ["nope"]


def test_registry_covers_transfer_suites():
    assert set(TRANSFER_SUITES) <= set(SUITES)
    with pytest.raises(UnknownSuite):
        get_suite("nope")


@pytest.mark.parametrize("name", sorted(n for n, s in SUITES.items() if s.seeded))
def test_every_seeded_suite_small_run(name):
    suite = SUITES[name]
    report = run_suite(name, SuiteConfig(seed=0, count=3, size=min(suite.default_size, 4)))
    assert report.ok, report.violations
    assert [r.seed for r in report.instances] == [0, 1, 2]


def test_unseeded_runs_once():
    report = run_suite("example-inconsistentpair", SuiteConfig(count=10))
    assert len(report.instances) == 1 and report.ok


def test_size_bounds():
    with pytest.raises(BadParams):
        run_suite("tree-bijection", SuiteConfig(count=1, size=99))


def test_report_dict():
    d = run_suite("tree-bijection", SuiteConfig(seed=5, count=2, size=4)).to_dict()
    assert d["seed"] == 5 and d["instances"] == 2 and d["ok"] and d["violations"] == []


def test_deterministic_reports():
    a = run_suite("extension-lemma", SuiteConfig(seed=7, count=5, size=3)).to_dict()
    b = run_suite("extension-lemma", SuiteConfig(seed=7, count=5, size=3)).to_dict()
    a.pop("seconds"), b.pop("seconds")
    assert a == b


def test_run_on_input():
    assert run_on_input("extension-lemma", edge_tree_set(star_tree(3))).ok
    with pytest.raises(BadParams):
        run_on_input("nested-lift", edge_tree_set(star_tree(3)))


@pytest.fixture
def failing_suite(monkeypatch):
    def check(inst, t):
        seed, size = inst
        t.expect(not (size >= 2 and seed % 3 == 2), f"planted failure at size {size}")

    suite = Suite("planted-failure", "fails on seeds 2 mod 3 from size 2", lambda seed, size: (seed, size),
                  check, 5, 10, 5)
    monkeypatch.setitem(suites.SUITES, suite.name, suite)
    return suite.name


def test_search_shrinks(failing_suite):
    res = search(failing_suite, 10, seed=0)
    assert res.shrunk_from == (2, 5)
    assert (res.found.seed, res.found.size) == (2, 2)
    assert res.to_dict()["counterexample"]["shrunk_from"] == [2, 5]


def test_search_clean():
    res = search("tree-bijection", 5, seed=0, size=4)
    assert res.found is None and res.tried == 5
