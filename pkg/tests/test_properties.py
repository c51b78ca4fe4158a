import random

from hypothesis import given, settings
from hypothesis import strategies as st

from sepsys.core import (
    Impossible,
    InconsistentInput,
    consistent_orientations,
    down_closure,
    essential_core,
    extend_orientation,
    is_consistent,
    splitting_subsets,
)
from sepsys.inverse import is_closed, limit
from sepsys.io import system_from_doc, system_to_doc
from sepsys.oracles import oracle_consistent_orientations, oracle_extensions, oracle_splitting
from sepsys.testkit import edge_tree_set, random_contraction_chain, random_system, random_tree

seeds = st.integers(0, 2**32).map(random.Random)
systems = st.builds(random_system, seeds, st.integers(1, 4), st.floats(0.05, 0.6),
                    st.sampled_from([0.0, 0.0, 0.25]))
trees = st.builds(random_tree, seeds, st.integers(2, 8))


@given(systems)
def test_order_reversal(S):
    for x in range(len(S)):
        for y in range(len(S)):
            assert S.leq(x, y) == S.leq(S.inv[y], S.inv[x])


@given(systems)
def test_orientations_match_oracle(S):
    assert set(consistent_orientations(S)) == set(oracle_consistent_orientations(S))


@given(systems)
def test_splitting_matches_oracle(S):
    assert set(splitting_subsets(S)) == set(oracle_splitting(S))


@given(systems, st.data())
def test_extension_agrees_with_oracle(S, data):
    partial = data.draw(st.frozensets(st.sampled_from(range(len(S))), max_size=3))
    if not is_consistent(S, partial) or any(S.inv[x] in partial for x in partial):
        return
    maxima = [x for x in partial if not any(y != x and S.leq(x, y) for y in partial)]
    keep = data.draw(st.sampled_from([None] + maxima))
    try:
        ext = extend_orientation(S, partial, keep_max=keep)
    except Impossible:
        assert oracle_extensions(S, partial, keep) == []
        return
    except InconsistentInput:
        return
    assert ext.orientation in set(oracle_extensions(S, partial, keep))


@given(systems, st.data())
def test_down_closure_idempotent(S, data):
    sub = data.draw(st.frozensets(st.sampled_from(range(len(S)))))
    once = down_closure(S, sub)
    assert sub <= once and down_closure(S, once) == once


@given(systems)
def test_core_has_no_trivial_or_degenerate(S):
    core, _ = essential_core(S)
    assert not any(core.is_trivial(x) or core.is_degenerate(x) for x in range(len(core)))


@given(systems)
def test_doc_round_trip(S):
    back = system_from_doc(system_to_doc(S))
    assert (back.labels, back.inv, back.up) == (S.labels, S.inv, S.up)


@given(trees)
def test_tree_orientations_are_nodes(T):
    S = edge_tree_set(T)
    assert len(consistent_orientations(S)) == len(T.nodes) == len(splitting_subsets(S))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 4), st.integers(1, 7))
def test_finite_limits_close_everything(seed, levels, edges):
    lim = limit(random_contraction_chain(seed, levels, edges).system)
    assert is_closed(lim, range(0, len(lim.S), 2))
