"""Seeded random instances: edge tree sets of trees and chains of contractions."""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .core import SepSysError, SeparationSystem, from_order, validate_system
from .inverse import InverseSystem, chain_system, validate_inverse_system


class BadParams(SepSysError):
    pass


@dataclass(frozen=True)
class Seeded:
    """Seed plus size parameters; equal values always give equal instances."""

    seed: int
    size: int = 4
    levels: int = 3
    options: dict = field(default_factory=dict)

    def rng(self) -> random.Random:
        return random.Random(self.seed)


@dataclass(frozen=True)
class Tree:
    nodes: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    def neighbours(self, v: int) -> list[int]:
        return sorted([b for a, b in self.edges if a == v] + [a for a, b in self.edges if b == v])

    def side(self, a: int, b: int) -> frozenset[int]:
        """Nodes on ``a``'s side once edge ``ab`` is removed."""
        seen, todo = {a}, [a]
        while todo:
            v = todo.pop()
            for w in self.neighbours(v):
                if w not in seen and not (v == a and w == b):
                    seen.add(w)
                    todo.append(w)
        return frozenset(seen)


def random_tree(rng: random.Random, n_nodes: int) -> Tree:
    """Uniform labelled tree via a Pruefer sequence."""
    if n_nodes < 1:
        raise BadParams("a tree needs at least one node")
    if n_nodes <= 2:
        return Tree(tuple(range(n_nodes)), ((0, 1),) if n_nodes == 2 else ())
    seq = [rng.randrange(n_nodes) for _ in range(n_nodes - 2)]
    degree = [1] * n_nodes
    for v in seq:
        degree[v] += 1
    edges = []
    for v in seq:
        leaf = min(u for u in range(n_nodes) if degree[u] == 1)
        edges.append(tuple(sorted((leaf, v))))
        degree[leaf] -= 1
        degree[v] -= 1
    u, w = [x for x in range(n_nodes) if degree[x] == 1]
    edges.append((u, w))
    return Tree(tuple(range(n_nodes)), tuple(sorted(edges)))


def star_tree(leaves: int) -> Tree:
    return Tree(tuple(range(leaves + 1)), tuple((0, i) for i in range(1, leaves + 1)))


def path_tree(n_nodes: int) -> Tree:
    return Tree(tuple(range(n_nodes)), tuple((i, i + 1) for i in range(n_nodes - 1)))


def edge_label(a: int, b: int) -> str:
    return f"{a}>{b}"


def oriented_edges(T: Tree) -> list[tuple[int, int]]:
    out = []
    for a, b in T.edges:
        out += [(a, b), (b, a)]
    return out


def edge_tree_set(T: Tree) -> SeparationSystem:
    """Oriented edges ``a>b`` (pointing at ``b``); ``a>b <= c>d`` iff ``a``'s
    side of the first edge lies inside ``c``'s side of the second."""
    darts = oriented_edges(T)
    sides = [T.side(a, b) for a, b in darts]
    labels = [edge_label(a, b) for a, b in darts]
    inv = [i ^ 1 for i in range(len(darts))]
    payload = tuple((sides[i], frozenset(T.nodes) - sides[i]) for i in range(len(darts)))
    return from_order(labels, inv, lambda i, j: sides[i] <= sides[j], payload)


def node_star(T: Tree, S: SeparationSystem, t: int) -> frozenset[int]:
    return frozenset(S.index[edge_label(s, t)] for s in T.neighbours(t))


def with_planted(S: SeparationSystem, count: int) -> SeparationSystem:
    """Add ``count`` small trivial separations lying below every other element."""
    if count == 0:
        return S
    labels = list(S.labels)
    inv_pairs = [(S.labels[x], S.labels[S.inv[x]]) for x in S.separations]
    leq = [(S.labels[x], S.labels[y]) for x, y in S.leq_pairs()]
    for i in range(count):
        x, xi = f"t{i}", f"t{i}*"
        labels += [x, xi]
        inv_pairs.append((x, xi))
        for lab in S.labels:
            leq.append((x, lab))
        for j in range(count):
            if j != i:
                leq.append((x, f"t{j}*"))
    return validate_system(labels, inv_pairs, leq)


def random_tree_set(seed: int, n_edges: int, planted_trivial: int = 0) -> SeparationSystem:
    if not 1 <= n_edges <= 12:
        raise BadParams("n_edges must lie in 1..12")
    T = random_tree(random.Random(seed), n_edges + 1)
    return with_planted(edge_tree_set(T), planted_trivial)


# ---------------------------------------------------------------------------
# contraction chains


def contractible_edges(T: Tree) -> list[tuple[int, int, int]]:
    """Triples ``(u, v, w)``: edge ``uv`` can be contracted because ``v`` has
    degree 2 with other neighbour ``w``."""
    out = []
    for a, b in T.edges:
        for u, v in ((a, b), (b, a)):
            nb = T.neighbours(v)
            if len(nb) == 2:
                w = nb[0] if nb[1] == u else nb[1]
                out.append((u, v, w))
    return out


def contract(T: Tree, u: int, v: int, w: int) -> tuple[Tree, dict]:
    """Remove ``v`` (degree 2, neighbours ``u``, ``w``) joining ``u`` to ``w``.

    Returns the new tree and the dart map: ``u>v`` goes to ``u>w`` and
    ``v>w`` goes to ``u>w``; the rest keep their endpoints with ``v`` renamed.
    """
    nodes = tuple(x for x in T.nodes if x != v)
    edges = []
    for a, b in T.edges:
        if {a, b} == {u, v}:
            continue
        if {a, b} == {v, w}:
            a, b = u, w
        edges.append(tuple(sorted((a, b))))
    new = Tree(nodes, tuple(sorted(edges)))
    dart_map = {}
    for a, b in oriented_edges(T):
        if (a, b) in ((u, v), (v, w)):
            dart_map[(a, b)] = (u, w)
        elif (a, b) in ((v, u), (w, v)):
            dart_map[(a, b)] = (w, u)
        else:
            dart_map[(a, b)] = (a, b)
    return new, dart_map


@dataclass(frozen=True, eq=False)
class ContractionChain:
    trees: tuple[Tree, ...]
    system: InverseSystem


def random_contraction_chain(seed: int, levels: int, n_edges: int, max_contract: int = 2) -> ContractionChain:
    """Chain ``1 < ... < levels``; the top level is a random tree with
    ``n_edges`` edges and each lower level contracts a few more edges."""
    if not 1 <= levels <= 5:
        raise BadParams("levels must lie in 1..5")
    if not 1 <= n_edges <= 12:
        raise BadParams("n_edges must lie in 1..12")
    rng = random.Random(seed)
    trees = [random_tree(rng, n_edges + 1)]
    dart_maps = []
    for _ in range(levels - 1):
        T = trees[-1]
        total = {d: d for d in oriented_edges(T)}
        for _ in range(rng.randint(0, max_contract)):
            options = contractible_edges(T)
            if not options:
                break
            T, step = contract(T, *rng.choice(options))
            total = {d: step[e] for d, e in total.items()}
        trees.append(T)
        dart_maps.append(total)
    return build_contraction_chain(trees[::-1], dart_maps[::-1])


def build_contraction_chain(trees, dart_maps) -> ContractionChain:
    """``dart_maps[i]`` maps darts of ``trees[i+1]`` to darts of ``trees[i]``."""
    systems = [edge_tree_set(T) for T in trees]
    bonds = []
    for i, dm in enumerate(dart_maps):
        src, dst = systems[i + 1], systems[i]
        bonds.append(tuple(dst.index[edge_label(*dm[tuple(map(int, lab.split(">")))])] for lab in src.labels))
    return ContractionChain(tuple(trees), chain_system(systems, bonds))


def subdivided_star_chain() -> ContractionChain:
    """Three-leaf star with one subdivided arm, contracted back to the star."""
    T = Tree((0, 1, 2, 3, 4), ((0, 1), (0, 2), (0, 3), (3, 4)))
    small, dm = contract(T, 0, 3, 4)
    return build_contraction_chain([small, T], [dm])


def path_contraction_chain() -> ContractionChain:
    """The three-node path contracted onto a single edge."""
    T = path_tree(3)
    small, dm = contract(T, 0, 1, 2)
    return build_contraction_chain([small, T], [dm])


# ---------------------------------------------------------------------------
# arbitrary small systems


def random_system(rng: random.Random, n_seps: int, density: float = 0.3,
                  degenerate_rate: float = 0.0) -> SeparationSystem:
    """A random separation system with ``n_seps`` separations.

    Order generators are sampled independently and mirrored under the
    involution; samples whose closure is not antisymmetric are redrawn.
    """
    from .core import CycleError, InvolutionError

    while True:
        labels, inv_pairs = [], []
        for i in range(n_seps):
            if rng.random() < degenerate_rate:
                labels.append(f"d{i}")
                inv_pairs.append((f"d{i}", f"d{i}"))
            else:
                labels += [f"s{i}", f"s{i}*"]
                inv_pairs.append((f"s{i}", f"s{i}*"))
        leq = [(a, b) for a in labels for b in labels if a != b and rng.random() < density]
        try:
            return validate_system(labels, inv_pairs, leq)
        except (CycleError, InvolutionError):
            density *= 0.9


def plant_chain(IS: InverseSystem, count: int) -> InverseSystem:
    """Plant ``count`` trivial elements at every level; bonds fix them."""
    if count == 0:
        return IS
    levels = tuple(with_planted(S, count) for S in IS.levels)
    bonds = {}
    for (q, p), m in IS.bonds.items():
        n_q, n_p = len(IS.levels[q]), len(IS.levels[p])
        bonds[(q, p)] = tuple(m) + tuple(n_p + i for i in range(len(levels[q]) - n_q))
    out = InverseSystem(IS.poset, levels, bonds)
    return validate_inverse_system(out)
