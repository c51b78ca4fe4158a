import json

import pytest

from sepsys import suites
from sepsys.cli import run
from sepsys.examples import gen
from sepsys.inverse import limit
from sepsys.io import dumps, inverse_system_to_doc, star_family_to_doc, system_to_doc
from sepsys.suites import Suite
from sepsys.testkit import edge_tree_set, node_star, star_tree, subdivided_star_chain


@pytest.fixture
def k13_file(tmp_path):
    f = tmp_path / "k13.json"
    f.write_text(dumps(system_to_doc(edge_tree_set(star_tree(3)))))
    return str(f)


@pytest.fixture
def chain_file(tmp_path):
    f = tmp_path / "chain.json"
    f.write_text(dumps(inverse_system_to_doc(gen("trivialproj", depth=3))))
    return str(f)


def out_json(capsys):
    return json.loads(capsys.readouterr().out)


class TestInspection:
    def test_validate(self, k13_file, capsys):
        assert run(["validate", k13_file]) == 0
        assert "6 elements" in capsys.readouterr().out

    def test_validate_cycle(self, tmp_path, capsys):
        f = tmp_path / "cyc.json"
        f.write_text(json.dumps({"elements": ["a", "a*", "b", "b*"], "inverse": [["a", "a*"], ["b", "b*"]],
                                 "leq": [["a", "b"], ["b", "a"]]}))
        assert run(["validate", str(f)]) == 2
        assert "CycleError" in capsys.readouterr().err

    def test_missing_file(self, capsys):
        assert run(["validate", "/nonexistent.json"]) == 2

    def test_analyze_json(self, k13_file, capsys):
        assert run(["--json", "analyze", k13_file]) == 0
        rep = out_json(capsys)
        assert rep["nested"] and rep["tree_set"] and len(rep["splitting_stars"]) == 4

    def test_orients_and_stars(self, k13_file, capsys):
        assert run(["orients", k13_file]) == 0
        assert capsys.readouterr().out.startswith("4 consistent")
        assert run(["--json", "stars", k13_file]) == 0
        assert all(d["proper"] for d in out_json(capsys)["splitting_stars"])

    def test_limit_closure_project(self, chain_file, capsys):
        assert run(["--json", "limit", chain_file]) == 0
        assert out_json(capsys)["coordinates"]["r3"] == {"1": "s", "2": "s", "3": "r3"}
        assert run(["--json", "closure", chain_file, "--subset", "r1,r2,r3,s*", "--probe"]) == 0
        assert out_json(capsys)["view"] == "probe"
        assert run(["--json", "project", chain_file, "--at", "2", "--subset", "r3"]) == 0
        assert out_json(capsys)["image"] == ["s"]

    def test_unknown_label(self, chain_file, capsys):
        assert run(["closure", chain_file, "--subset", "zz"]) == 2

    def test_report_file(self, k13_file, tmp_path, capsys):
        rep = tmp_path / "rep.json"
        assert run(["--report", str(rep), "orients", k13_file]) == 0
        assert len(json.loads(rep.read_text())["orientations"]) == 4


class TestGenerators:
    def test_gen_round_trip(self, tmp_path, capsys):
        assert run(["gen", "splittingnotclosed", "--depth", "3"]) == 0
        f = tmp_path / "snc.json"
        f.write_text(capsys.readouterr().out)
        assert run(["validate", str(f)]) == 0

    def test_gen_params(self, capsys):
        assert run(["--json", "gen", "ray", "--depth", "2", "--param", "k=2"]) == 0
        assert len(out_json(capsys)["poset"]["points"]) == 4

    def test_gen_bad_param(self, capsys):
        assert run(["gen", "ray", "--param", "k"]) == 2

    def test_graph(self, tmp_path, capsys):
        g = tmp_path / "g.txt"
        g.write_text("v1: v2\nv2: v3\n")
        assert run(["--json", "graph", str(g), "--order-bound", "2"]) == 0
        assert len(out_json(capsys)["elements"]) == 10
        assert run(["--json", "graph", str(g), "--order-bound", "2", "--chain", "v1;v1,v2"]) == 0
        assert out_json(capsys)["poset"]["points"] == ["v1", "v1,v2"]


class TestChecks:
    def test_suites_listing(self, capsys):
        assert run(["suites"]) == 0
        assert "extension-lemma" in capsys.readouterr().out

    def test_check_ok(self, capsys):
        assert run(["check", "tree-bijection", "--count", "3", "--size", "4"]) == 0
        assert "ok" in capsys.readouterr().out

    def test_check_seed_env(self, monkeypatch, capsys):
        monkeypatch.setenv("SEPSYS_SEED", "17")
        assert run(["--json", "check", "tree-bijection", "--count", "1", "--size", "3"]) == 0
        assert out_json(capsys)["seed"] == 17

    def test_bad_seed_env(self, monkeypatch, capsys):
        monkeypatch.setenv("SEPSYS_SEED", "abc")
        assert run(["check", "tree-bijection", "--count", "1"]) == 2

    def test_check_input(self, tmp_path, capsys):
        assert run(["gen", "splittingnotclosed", "--depth", "3"]) == 0
        f = tmp_path / "snc.json"
        f.write_text(capsys.readouterr().out)
        assert run(["check", "greatest-dichotomy", "--input", str(f)]) == 0
        assert "abnormal witness (probe)" in capsys.readouterr().out

    def test_unknown_suite(self, capsys):
        assert run(["check", "nope"]) == 2

    def test_unknown_flag(self, capsys):
        assert run(["check", "tree-bijection", "--frobnicate"]) == 2

    def test_no_command(self, capsys):
        assert run([]) == 2

    def test_search_clean(self, capsys):
        assert run(["search", "--property", "tree-bijection", "--count", "2", "--size", "3"]) == 0

    def test_search_counterexample(self, monkeypatch, capsys):
        suite = Suite("planted", "always fails above size 1", lambda seed, size: (seed, size),
                      lambda inst, t: t.expect(inst[1] < 2, "planted"), 4, 5, 4)
        monkeypatch.setitem(suites.SUITES, "planted", suite)
        assert run(["--json", "search", "--property", "planted", "--count", "3", "--seed", "0"]) == 1
        ce = out_json(capsys)["counterexample"]
        assert (ce["seed"], ce["size"], ce["shrunk_from"]) == (0, 2, [0, 4])

    def test_certify(self, capsys):
        assert run(["certify", "trivialproj", "--depth", "5"]) == 0
        assert "FAIL" not in capsys.readouterr().out

    def test_normality(self, capsys):
        assert run(["--json", "normality", "splittingnotclosed2", "--depth", "4"]) == 0
        assert out_json(capsys)["verdict"] == "normal_evidence"


class TestCompact:
    def _family_file(self, tmp_path, stars_fn):
        c = subdivided_star_chain()
        S = limit(c.system).S
        f = tmp_path / "fam.json"
        f.write_text(dumps(star_family_to_doc(c.system, stars_fn(c.trees[-1], S))))
        return str(f)

    def test_node_stars(self, tmp_path, capsys):
        f = self._family_file(tmp_path, lambda T, S: [node_star(T, S, t) for t in T.nodes])
        assert run(["--json", "compact", f]) == 0
        assert len(out_json(capsys)["tau"]) == 8

    def test_no_candidate(self, tmp_path, capsys):
        f = self._family_file(tmp_path, lambda T, S: [])
        assert run(["--json", "compact", f]) == 1
        assert out_json(capsys)["reason"] == "no_candidate"
