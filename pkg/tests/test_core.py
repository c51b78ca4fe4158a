import pytest

from helpers import ids
from sepsys.core import (
    CycleError,
    Impossible,
    InconsistentInput,
    InvolutionError,
    OrderReversalError,
    UnknownElement,
    classify,
    consistent_orientations,
    crossing_pair,
    down_closure,
    essential_core,
    extend_orientation,
    inconsistent_pair,
    is_antisymmetric,
    is_consistent,
    is_nested,
    is_proper_star,
    is_star,
    is_trivial_in,
    is_tree_set,
    sigma_minus,
    splits_at,
    splitting_subsets,
    validate_system,
)


class TestValidate:
    def test_degenerate_singleton(self, degenerate_one):
        assert len(degenerate_one) == 1
        assert degenerate_one.is_degenerate(0)

    def test_closure_adds_mirrored_pair(self):
        S = validate_system(["e1", "e1*", "e2", "e2*"], [("e1", "e1*"), ("e2", "e2*")], [("e1", "e2")])
        assert S.leq(S.index["e2*"], S.index["e1*"])
        assert not S.leq(S.index["e2"], S.index["e1"])

    def test_cycle(self):
        with pytest.raises(CycleError):
            validate_system(["e1", "e1*", "e2", "e2*"], [("e1", "e1*"), ("e2", "e2*")],
                            [("e1", "e2"), ("e2", "e1")])

    def test_missing_inverse(self):
        with pytest.raises(InvolutionError):
            validate_system(["a", "b"], [])

    def test_two_inverses(self):
        with pytest.raises(InvolutionError):
            validate_system(["a", "b", "c"], [("a", "b"), ("a", "c")])

    def test_unmirrored_generators_must_reverse(self):
        with pytest.raises(OrderReversalError):
            validate_system(["a", "a*", "b", "b*"], [("a", "a*"), ("b", "b*")], [("a", "b")], mirror=False)

    def test_unknown_label(self):
        with pytest.raises(UnknownElement):
            validate_system(["a", "a*"], [("a", "a*")], [("a", "zz")])


class TestClassify:
    def test_e2(self, E2):
        c = classify(E2, "r")
        assert c.trivial == (E2.index["s"],) and c.small
        assert classify(E2, "r*").co_trivial == (E2.index["s"],)

    def test_degenerate(self, degenerate_one):
        c = classify(degenerate_one, "d")
        assert c.small and c.co_small and c.degenerate and c.trivial is None

    def test_path_edge_has_no_flags(self, path3):
        c = classify(path3, "0>1")
        assert not (c.small or c.co_small or c.degenerate or c.trivial or c.co_trivial)

    def test_unknown(self, E2):
        with pytest.raises(UnknownElement):
            classify(E2, "nope")


class TestTrivialIn:
    def test_witness_in_sigma(self, E2):
        assert is_trivial_in(E2, "r", ids(E2, "s")) == E2.index["s"]

    def test_own_separation_is_no_witness(self, E2):
        assert is_trivial_in(E2, "r", ids(E2, "r")) is None

    def test_star_member(self):
        S = validate_system(["r", "r*", "s", "s*", "t", "t*"], [("r", "r*"), ("s", "s*"), ("t", "t*")],
                            [("r", "s"), ("r", "s*"), ("r", "t*"), ("s", "t*")])
        assert is_trivial_in(S, "r", ids(S, "r", "s", "t")) == S.index["s"]


class TestNestedStarConsistent:
    def test_tree_sets_are_nested(self, path3, k13):
        assert is_nested(path3) and is_nested(k13) and is_tree_set(k13)

    def test_crossing_pair(self):
        S = validate_system(["a", "a*", "b", "b*"], [("a", "a*"), ("b", "b*")])
        assert not is_nested(S)
        assert crossing_pair(S, range(4)) is not None

    def test_empty_is_nested(self, path3):
        assert is_nested(path3, [])

    def test_node_star_is_proper(self, path3):
        sigma = ids(path3, "0>1", "2>1")
        assert is_star(path3, sigma) and is_proper_star(path3, sigma)

    def test_inverse_pair_star_not_proper(self, path3):
        pair = ids(path3, "0>1", "1>0")
        assert is_star(path3, pair) and not is_proper_star(path3, pair)
        assert not is_antisymmetric(path3, pair)

    def test_degenerate_not_star(self, degenerate_one):
        assert not is_star(degenerate_one, {0})

    def test_stars_are_consistent(self, k13):
        assert is_consistent(k13, ids(k13, "1>0", "2>0", "3>0"))

    def test_inconsistent_pair(self, path3):
        sub = ids(path3, "1>0", "1>2")
        assert not is_consistent(path3, sub)
        assert inconsistent_pair(path3, sub) is not None

    def test_singleton_consistent(self, path3):
        assert is_consistent(path3, ids(path3, "1>0"))


def test_down_closure(path3):
    assert down_closure(path3, ids(path3, "1>2")) == ids(path3, "0>1", "1>2")
    assert down_closure(path3, []) == frozenset()
    assert down_closure(path3, range(4)) == frozenset(range(4))


class TestOrientations:
    def test_counts(self, k13, path3, E2):
        assert len(consistent_orientations(k13)) == 4
        assert len(consistent_orientations(path3)) == 3
        assert {frozenset(O) for O in consistent_orientations(E2)} == {ids(E2, "r", "s"), ids(E2, "r", "s*")}

    def test_splitting_subsets_k13(self, k13):
        stars = set(splitting_subsets(k13))
        assert stars == {ids(k13, "1>0", "2>0", "3>0"), ids(k13, "0>1"), ids(k13, "0>2"), ids(k13, "0>3")}

    def test_degenerate_splits_at_itself(self, degenerate_one):
        assert splitting_subsets(degenerate_one) == [frozenset({0})]

    def test_e2_splitting(self, E2):
        assert set(splitting_subsets(E2)) == {ids(E2, "s"), ids(E2, "s*")}

    def test_splits_at_rejects_non_orientation(self, path3):
        assert splits_at(path3, ids(path3, "0>1")) is None


class TestExtension:
    def test_empty_partial(self, k13):
        ext = extend_orientation(k13, set())
        assert ext.orientation in set(consistent_orientations(k13))

    def test_keep_max_unique(self, k13):
        x = k13.index["0>1"]
        ext = extend_orientation(k13, {x}, keep_max=x)
        assert ext.unique is True
        assert splits_at(k13, ext.orientation) == {x}

    def test_co_trivial_member(self, E2):
        with pytest.raises(Impossible) as err:
            extend_orientation(E2, ids(E2, "r*"))
        assert err.value.reason == "co_trivial_member"

    def test_trivial_keep_max(self, E2):
        r = E2.index["r"]
        with pytest.raises(Impossible) as err:
            extend_orientation(E2, {r}, keep_max=r)
        assert err.value.reason == "trivial_keep_max"

    def test_inconsistent_partial(self, path3):
        with pytest.raises(InconsistentInput):
            extend_orientation(path3, ids(path3, "1>0", "1>2"))

    def test_keep_max_must_be_maximal(self, path3):
        with pytest.raises(InconsistentInput):
            extend_orientation(path3, ids(path3, "0>1", "1>2"), keep_max=path3.index["0>1"])


class TestCores:
    def test_e2_core(self, E2):
        core, keep = essential_core(E2)
        assert {E2.labels[k] for k in keep} == {"s", "s*"}

    def test_tree_set_core_is_itself(self, k13):
        assert len(essential_core(k13)[0]) == len(k13)

    def test_degenerate_core_empty(self, degenerate_one):
        assert len(essential_core(degenerate_one)[0]) == 0

    def test_sigma_minus(self):
        S = validate_system(["r", "r*", "s", "s*", "t", "t*"], [("r", "r*"), ("s", "s*"), ("t", "t*")],
                            [("r", "s"), ("r", "s*"), ("r", "t*"), ("s", "t*")])
        assert sigma_minus(S, ids(S, "r", "s", "t")) == ids(S, "s", "t")

    def test_sigma_minus_node_star_unchanged(self, k13):
        sigma = ids(k13, "1>0", "2>0", "3>0")
        assert sigma_minus(k13, sigma) == sigma

    def test_sigma_minus_inverse_pair(self, path3):
        pair = ids(path3, "0>1", "1>0")
        assert sigma_minus(path3, pair) == pair
