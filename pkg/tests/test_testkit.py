import random

import pytest

from sepsys.core import consistent_orientations, is_tree_set, splitting_subsets, validate_system
from sepsys.inverse import is_surjective, limit
from sepsys.oracles import (
    TooLarge,
    oracle_consistent_orientations,
    oracle_extensions,
    oracle_splitting,
)
from sepsys.testkit import (
    BadParams,
    contract,
    contractible_edges,
    edge_tree_set,
    node_star,
    path_tree,
    plant_chain,
    random_contraction_chain,
    random_system,
    random_tree,
    random_tree_set,
    star_tree,
    with_planted,
)


class TestTrees:
    def test_random_tree_is_tree(self):
        T = random_tree(random.Random(3), 7)
        assert len(T.nodes) == 7 and len(T.edges) == 6

    def test_edge_tree_set(self):
        S = edge_tree_set(star_tree(3))
        assert len(S) == 6 and is_tree_set(S)

    def test_node_stars_are_splitting(self):
        T = random_tree(random.Random(11), 6)
        S = edge_tree_set(T)
        assert {node_star(T, S, t) for t in T.nodes} == set(splitting_subsets(S))

    def test_contract_path(self):
        T = path_tree(3)
        assert contractible_edges(T) == [(0, 1, 2), (2, 1, 0)]
        small, dm = contract(T, 0, 1, 2)
        assert small.edges == ((0, 2),) and dm[(1, 2)] == (0, 2)

    def test_bad_params(self):
        with pytest.raises(BadParams):
            random_tree_set(0, 0)
        with pytest.raises(BadParams):
            random_contraction_chain(0, 9, 3)


class TestPlanting:
    def test_planted_elements_trivial(self):
        S = with_planted(edge_tree_set(path_tree(3)), 2)
        assert all(S.is_trivial(S.index[t]) for t in ("t0", "t1"))
        assert not S.is_trivial(S.index["0>1"])

    def test_plant_chain(self):
        IS = plant_chain(random_contraction_chain(5, 3, 4).system, 1)
        assert is_surjective(IS)
        assert limit(IS).S.is_trivial(limit(IS).S.index["t0"])

    def test_deterministic(self):
        a = random_contraction_chain(42, 3, 5)
        b = random_contraction_chain(42, 3, 5)
        assert a.trees == b.trees


class TestOracles:
    @pytest.mark.parametrize("seed", range(20))
    def test_orientations_agree(self, seed):
        S = random_system(random.Random(seed), 3, degenerate_rate=0.2)
        fast = set(consistent_orientations(S))
        assert fast == set(oracle_consistent_orientations(S))

    @pytest.mark.parametrize("seed", range(20))
    def test_splitting_agree(self, seed):
        S = random_system(random.Random(seed), 3)
        assert set(splitting_subsets(S)) == set(oracle_splitting(S))

    def test_extensions(self):
        S = edge_tree_set(star_tree(3))
        x = S.index["1>0"]
        assert len(oracle_extensions(S, {x})) == 3
        assert len(oracle_extensions(S, {x}, keep_max=x)) == 1

    def test_too_large(self):
        with pytest.raises(TooLarge):
            oracle_consistent_orientations(edge_tree_set(path_tree(11)))

    def test_random_system_valid(self):
        S = random_system(random.Random(0), 4, density=0.9)
        assert validate_system(list(S.labels), [(S.labels[x], S.labels[S.inv[x]]) for x in S.separations])
