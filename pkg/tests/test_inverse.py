import pytest

from helpers import ids
from sepsys.core import validate_system
from sepsys.inverse import (
    IncompatibleBonds,
    InvolutionMismatch,
    NotAChain,
    NotClosed,
    NotDirected,
    OrderViolation,
    chain_inf,
    chain_sup,
    chain_system,
    closure,
    compatible_families,
    compose,
    identity_hom,
    is_closed,
    is_epi,
    is_surjective,
    isomorphic_via,
    limit,
    make_inverse_system,
    make_poset,
    min_below_max_above,
    order_discrepancies,
    surjectivize,
    validate_hom,
)
from sepsys.testkit import path_contraction_chain, subdivided_star_chain


def single_edge():
    return validate_system(["e", "e*"], [("e", "e*")])


class TestHomomorphisms:
    def test_collapse_path_onto_edge(self, path3):
        E = single_edge()
        f = validate_hom(path3, E, {"0>1": "e", "1>2": "e", "1>0": "e*", "2>1": "e*"})
        assert is_epi(f) and not isomorphic_via(f)

    def test_involution_mismatch(self, path3):
        E = single_edge()
        with pytest.raises(InvolutionMismatch):
            validate_hom(path3, E, {"0>1": "e", "1>0": "e", "1>2": "e", "2>1": "e*"})

    def test_order_violation(self, path3):
        E = single_edge()
        with pytest.raises(OrderViolation):
            validate_hom(path3, E, {"0>1": "e", "1>0": "e*", "1>2": "e*", "2>1": "e"})

    def test_identity_and_compose(self, k13):
        i = identity_hom(k13)
        assert isomorphic_via(i) and compose(i, i).map == i.map

    def test_image_preimage(self, path3):
        E = single_edge()
        f = validate_hom(path3, E, {"0>1": "e", "1>2": "e", "1>0": "e*", "2>1": "e*"})
        assert f.image(ids(path3, "0>1")) == {E.index["e"]}
        assert f.preimage({E.index["e"]}) == ids(path3, "0>1", "1>2")


class TestPoset:
    def test_chain(self):
        P = make_poset([1, 2, 3], [(1, 2), (2, 3)])
        assert P.maximum == 2 and P.leq(0, 2)

    def test_not_directed(self):
        with pytest.raises(NotDirected):
            make_poset(["a", "b"])

    def test_diamond(self):
        P = make_poset(["b", "l", "r", "t"], [("b", "l"), ("b", "r"), ("l", "t"), ("r", "t")])
        assert P.points[P.maximum] == "t"
        assert sorted(P.lower_covers(P.idx("t"))) == [P.idx("l"), P.idx("r")]


def diamond(right_map):
    P = make_poset(["b", "l", "r", "t"], [("b", "l"), ("b", "r"), ("l", "t"), ("r", "t")])
    E = single_edge()
    ident = {"e": "e", "e*": "e*"}
    bonds = {("t", "l"): ident, ("t", "r"): ident, ("l", "b"): ident, ("r", "b"): right_map}
    return make_inverse_system(P, [E, E, E, E], bonds)


class TestInverseSystems:
    def test_path_chain_limit(self):
        IS = path_contraction_chain().system
        lim = limit(IS)
        assert len(lim.S) == 4 and is_surjective(IS)
        assert order_discrepancies(lim) == []
        assert lim.probe_points == [0]

    def test_commuting_diamond(self):
        IS = diamond({"e": "e", "e*": "e*"})
        assert len(limit(IS).S) == 2

    def test_non_commuting_diamond(self):
        with pytest.raises(IncompatibleBonds):
            diamond({"e": "e*", "e*": "e"})

    def test_surjectivize(self):
        E = single_edge()
        two = validate_system(["e", "e*", "f", "f*"], [("e", "e*"), ("f", "f*")])
        IS = chain_system([two, E], [(0, 1)])
        assert not is_surjective(IS)
        assert is_surjective(surjectivize(IS))

    def test_compatible_families(self):
        IS = path_contraction_chain().system
        fams = compatible_families(IS, [range(2), range(4)])
        assert len(fams) == 4


class TestClosure:
    def test_finite_limit_everything_closed(self):
        lim = limit(subdivided_star_chain().system)
        assert is_closed(lim, {0, 2})

    def test_probe_closure_adds_collapsed_partner(self):
        lim = limit(path_contraction_chain().system)
        S = lim.S
        x = S.index["0>1"]
        cl = closure(lim, {x}, lim.probe_points)
        assert cl == {x, S.index["1>2"]}
        assert not is_closed(lim, {x}, lim.probe_points)

    def test_min_below_max_above_requires_closed(self):
        lim = limit(path_contraction_chain().system)
        x = lim.S.index["0>1"]
        with pytest.raises(NotClosed):
            min_below_max_above(lim, {x}, x, lim.probe_points)

    def test_min_below_max_above(self):
        lim = limit(path_contraction_chain().system)
        S = lim.S
        sub = {S.index["0>1"], S.index["1>2"]}
        assert min_below_max_above(lim, sub, S.index["0>1"]) == (S.index["0>1"], S.index["1>2"])


class TestChains:
    def test_sup_inf(self):
        lim = limit(path_contraction_chain().system)
        S = lim.S
        chain = [S.index["0>1"], S.index["1>2"]]
        assert chain_sup(lim, chain) == S.index["1>2"]
        assert chain_inf(lim, chain) == S.index["0>1"]

    def test_incomparable_rejected(self):
        lim = limit(path_contraction_chain().system)
        S = lim.S
        with pytest.raises(NotAChain):
            chain_sup(lim, [S.index["0>1"], S.index["1>0"]])
