import json

import pytest

from helpers import ids
from sepsys.core import CycleError
from sepsys.examples import gen
from sepsys.graphsep import path_graph
from sepsys.inverse import limit
from sepsys.io import (
    FormatError,
    dumps,
    graph_from_text,
    graph_to_doc,
    inverse_system_from_doc,
    inverse_system_to_doc,
    load_any,
    load_document,
    star_family_from_doc,
    star_family_to_doc,
    system_from_doc,
    system_to_doc,
)


def same_system(a, b):
    return a.labels == b.labels and a.inv == b.inv and a.up == b.up


class TestSystemDocs:
    def test_round_trip(self, k13, E2):
        for S in (k13, E2):
            assert same_system(system_from_doc(system_to_doc(S)), S)

    def test_deterministic(self, k13):
        assert dumps(system_to_doc(k13)) == dumps(system_to_doc(system_from_doc(system_to_doc(k13))))

    def test_only_covers_written(self, path3):
        assert system_to_doc(path3)["leq"] == [["0>1", "1>2"], ["2>1", "1>0"]]

    def test_unknown_key(self, k13):
        doc = dict(system_to_doc(k13), extra=1)
        with pytest.raises(FormatError):
            system_from_doc(doc)

    def test_missing_keys(self):
        with pytest.raises(FormatError):
            system_from_doc({"elements": []})

    def test_bad_pairs(self):
        with pytest.raises(FormatError):
            system_from_doc({"elements": ["a", "b"], "inverse": [["a"]]})

    def test_cycle_surfaces(self):
        doc = {"elements": ["a", "a*", "b", "b*"], "inverse": [["a", "a*"], ["b", "b*"]],
               "leq": [["a", "b"], ["b", "a"]]}
        with pytest.raises(CycleError):
            system_from_doc(doc)


class TestInverseDocs:
    def test_round_trip(self):
        IS = gen("trivialproj", depth=3)
        back = inverse_system_from_doc(json.loads(dumps(inverse_system_to_doc(IS))))
        assert back.poset.points == IS.poset.points
        assert all(same_system(a, b) for a, b in zip(back.levels, IS.levels))
        assert back.bonds == IS.bonds

    def test_missing_bond_entry(self):
        doc = inverse_system_to_doc(gen("trivialproj", depth=2))
        doc["bonds"][0]["map"].pop("s")
        with pytest.raises(FormatError):
            inverse_system_from_doc(doc)

    def test_level_count(self):
        doc = inverse_system_to_doc(gen("trivialproj", depth=2))
        doc["levels"].pop()
        with pytest.raises(FormatError):
            inverse_system_from_doc(doc)

    def test_star_family(self):
        IS = gen("trivialproj", depth=2)
        S = limit(IS).S
        star = ids(S, "r1", "r2")
        back_IS, stars = star_family_from_doc(star_family_to_doc(IS, [star]))
        assert stars == [star] and back_IS.poset.points == IS.poset.points


class TestFiles:
    def test_load_any(self, tmp_path, k13):
        f = tmp_path / "s.json"
        f.write_text(dumps(system_to_doc(k13)))
        assert same_system(load_any(f), k13)
        g = tmp_path / "i.json"
        g.write_text(dumps(inverse_system_to_doc(gen("trivialproj", depth=2))))
        assert len(load_any(g).poset) == 2

    def test_bad_json(self, tmp_path):
        f = tmp_path / "bad.json"
        f.write_text("{nope")
        with pytest.raises(FormatError):
            load_document(f)


class TestGraphs:
    def test_json_and_adjacency_agree(self):
        G = path_graph(3)
        assert graph_from_text(dumps(graph_to_doc(G))) == G
        assert graph_from_text("v1: v2\nv2: v3\n") == G
