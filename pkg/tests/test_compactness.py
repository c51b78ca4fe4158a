import pytest

from helpers import ids
from sepsys.compactness import (
    LevelTooLarge,
    NotEssentiallyClosed,
    UniverseTooLarge,
    all_stars,
    augmented_family,
    compactness_construct,
    essentially_closed,
    essentially_over,
    extract_tree_set,
    nested_subsets,
    over_F,
    power_limit_bijection,
    power_system,
    splitting_stars_of,
    star_family,
    transfer_tau,
)
from sepsys.core import Impossible, SepSysError, validate_system
from sepsys.examples import gen
from sepsys.inverse import chain_system, limit
from sepsys.testkit import edge_tree_set, node_star, path_contraction_chain, path_tree, subdivided_star_chain


@pytest.fixture
def sub_star():
    c = subdivided_star_chain()
    lim = limit(c.system)
    T = c.trees[-1]
    return c.system, lim, [node_star(T, lim.S, t) for t in T.nodes]


class TestPowerSystem:
    def test_bijection(self):
        assert power_limit_bijection(limit(path_contraction_chain().system))

    def test_level_sizes(self):
        PS = power_system(path_contraction_chain().system)
        assert [len(L) for L in PS.levels] == [4, 16]

    def test_too_large(self):
        big = edge_tree_set(path_tree(10))
        with pytest.raises(LevelTooLarge):
            power_system(chain_system([big], []))


class TestStars:
    def test_all_stars_path(self, path3):
        stars = set(all_stars(path3))
        assert frozenset() in stars and ids(path3, "0>1", "2>1") in stars
        assert ids(path3, "0>1", "1>2") not in stars

    def test_star_family_rejects_non_star(self, path3):
        lim = limit(chain_system([path3], []))
        with pytest.raises(SepSysError):
            star_family(lim, [ids(path3, "0>1", "1>2")])

    def test_splitting_stars_of_empty(self, path3):
        assert splitting_stars_of(path3, []) == [frozenset()]

    def test_nested_subsets_inverse_closed(self, path3):
        subs = nested_subsets(path3)
        assert len(subs) == 3 and all(path3.invert(t) == t for t in subs)

    def test_nested_subsets_limit(self):
        with pytest.raises(UniverseTooLarge):
            nested_subsets(edge_tree_set(path_tree(10)))


class TestEssentiallyClosed:
    def test_node_stars(self, sub_star):
        _, lim, F = sub_star
        assert essentially_closed(star_family(lim, F)).holds

    def test_dropping_centre_keeps_closure_but_no_candidate(self, sub_star):
        IS, lim, F = sub_star
        assert essentially_closed(star_family(lim, F[1:])).holds
        with pytest.raises(Impossible):
            compactness_construct(IS, F[1:])

    def test_condition1_forces_padded_star(self):
        IS = gen("trivialproj", depth=2)
        lim = limit(IS)
        F = [ids(lim.S, "r1", "r2")]
        rep = essentially_closed(star_family(lim, F))
        assert (rep.condition, rep.star) == (1, ids(lim.S, "r1", "r2", "s"))
        with pytest.raises(NotEssentiallyClosed):
            compactness_construct(IS, F)

    def test_condition3_finitely_trivial(self):
        lim = limit(gen("trivialproj", depth=2))
        rep = essentially_closed(star_family(lim, []))
        assert (rep.condition, rep.star) == (3, ids(lim.S, "s*"))

    def test_essentially_over(self, sub_star):
        _, lim, F = sub_star
        fam = star_family(lim, F)
        top = lim.system.top
        L = lim.system.levels[top]
        assert essentially_over(L, range(len(L)), augmented_family(fam, top)) is None


class TestConstruction:
    def test_node_star_family(self, sub_star):
        IS, lim, F = sub_star
        res = compactness_construct(IS, F)
        assert res.tau == frozenset(range(len(lim.S)))
        assert set(res.branches.values()) == {"condition1"}
        assert over_F(lim.S, res.tau, F) is None

    def test_empty_family_has_no_candidate(self, sub_star):
        IS, _, _ = sub_star
        with pytest.raises(Impossible) as err:
            compactness_construct(IS, [])
        assert err.value.reason == "no_candidate"

    def test_transfer_down(self, sub_star):
        IS, lim, F = sub_star
        fam = star_family(lim, F)
        tau_p = transfer_tau(fam, 1, 0, range(len(IS.levels[1])))
        assert tau_p == frozenset(range(len(IS.levels[0])))

    def test_extract_tree_set(self, sub_star):
        _, lim, F = sub_star
        rep = extract_tree_set(lim.S, range(len(lim.S)), lim)
        assert rep.stars_preserved and rep.closed

    def test_extract_drops_trivial(self):
        S = validate_system(["r", "r*", "s", "s*"], [("r", "r*"), ("s", "s*")], [("r", "s"), ("r", "s*")])
        rep = extract_tree_set(S, range(4))
        assert rep.core == ids(S, "s", "s*")
