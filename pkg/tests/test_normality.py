import pytest

from sepsys.core import is_proper_star
from sepsys.examples import gen, schematic, splittingnotclosed_level
from sepsys.inverse import limit
from sepsys.normality import (
    BuilderError,
    NoGreatest,
    UnregisteredChain,
    check_bounded_split_closed,
    check_greatest,
    greatest_element,
    isomorphism_check,
    largest_star,
    normality_certificate,
    probe_faithful,
    truncate,
    verdict,
)
from sepsys.profinite import PreconditionFailed
from sepsys.testkit import edge_tree_set, path_tree, star_tree


def test_verdict():
    assert verdict([], 5).ok
    v = verdict([7, 3], 9)
    assert v.status == "refuted" and v.refuted_at == 3


class TestTruncate:
    def test_levels_start_at_first(self):
        IS = truncate(schematic("splittingnotclosed"), 2)
        assert IS.poset.points == (3, 4)

    def test_bad_depth(self):
        with pytest.raises(BuilderError):
            truncate(schematic("trivialproj"), 0)

    def test_unregistered(self):
        with pytest.raises(UnregisteredChain):
            schematic("nonexistent")


class TestGreatest:
    def test_greatest_element(self, k13):
        O = {k13.index[x] for x in ("0>1", "2>0", "3>0")}
        assert k13.labels[greatest_element(k13, O)] == "0>1"
        assert greatest_element(k13, {k13.index[x] for x in ("1>0", "2>0", "3>0")}) is None

    def test_no_greatest(self):
        lim = limit(gen("trivialproj", depth=2))
        S = lim.S
        with pytest.raises(NoGreatest):
            check_greatest(lim, {S.index["r1"], S.index["r2"], S.index["s"]})

    def test_splittingnotclosed_probe_branch(self):
        lim = limit(gen("splittingnotclosed", depth=4))
        S = lim.S
        s = S.index["s"]
        sigma = {x for x in range(len(S)) if not S.labels[x].endswith("*")}
        O = {S.inv[s]} | (sigma - {s})
        assert check_greatest(lim, O).branch == "closed"
        rep = check_greatest(lim, O, lim.probe_points)
        assert rep.branch == "greatest_cosmall_not_cotrivial" and rep.greatest == S.inv[s]
        assert set(rep.certificate) == set(lim.probe_points)

    def test_bounded_split_closed_needs_big_star(self):
        lim = limit(gen("trivialproj", depth=2))
        S = lim.S
        with pytest.raises(PreconditionFailed):
            check_bounded_split_closed(lim, {S.index["r1*"], S.index["r2"], S.index["s"]})

    def test_bounded_split_closed_exact(self):
        lim = limit(gen("trivialproj", depth=3))
        S = lim.S
        O = {S.index[x] for x in ("r1", "r2", "r3", "s")}
        assert check_bounded_split_closed(lim, O)

    def test_probe_faithful(self):
        lim = limit(gen("splittingnotclosed", depth=4))
        assert probe_faithful(lim, lim.points)
        assert not probe_faithful(lim, lim.probe_points)


class TestStarsAndIsomorphism:
    def test_largest_star(self):
        S = edge_tree_set(star_tree(4))
        star = largest_star(S)
        assert len(star) == 4 and is_proper_star(S, star)

    def test_isomorphism(self):
        a, b = edge_tree_set(path_tree(4)), edge_tree_set(star_tree(3))
        assert isomorphism_check(a, a) is not None
        assert isomorphism_check(a, b) is None

    def test_splittingnotclosed_self_iso(self):
        assert isomorphism_check(splittingnotclosed_level(5), splittingnotclosed_level(5)) is not None


class TestCertificates:
    @pytest.mark.parametrize("name, expected", [
        ("trivialproj", "abnormal_witness"),
        ("splittingnotclosed", "abnormal_witness"),
        ("splittingnotclosed2", "normal_evidence"),
    ])
    def test_verdicts(self, name, expected):
        assert normality_certificate(name, 5).verdict == expected

    def test_trivialproj_fields(self):
        cert = normality_certificate("trivialproj", 5)
        assert cert.small_status == {"s": "finitely_trivial"}
        assert cert.star_sizes == (2, 3, 4, 5, 6, 7) and cert.star_growth.ok
        assert cert.tree_set and "s*" in cert.non_closed_splitting

    def test_splittingnotclosed2_fields(self):
        cert = normality_certificate("splittingnotclosed2", 5)
        assert cert.closed_singletons == ("ex*",) and cert.non_closed_splitting == {}
        assert cert.star_witness["extension"] == "co_trivial"

    def test_to_dict_round_trip_keys(self):
        d = normality_certificate("splittingnotclosed", 4).to_dict()
        assert d["verdict"] == "abnormal_witness" and d["star_growth"]["status"] == "verified"
