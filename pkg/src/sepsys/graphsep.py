"""Set separations of finite graphs and restriction systems between them."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .core import SepSysError, SeparationSystem, from_order
from .inverse import InverseSystem, make_inverse_system, make_poset


class TooLarge(SepSysError):
    pass


class NotAChain(SepSysError):
    pass


@dataclass(frozen=True)
class Graph:
    vertices: tuple[str, ...]
    edges: frozenset[frozenset[str]]

    def neighbours(self, v: str) -> set[str]:
        return {w for e in self.edges if v in e for w in e if w != v}

    def induced(self, subset: Iterable[str]) -> "Graph":
        keep = set(subset)
        return Graph(tuple(v for v in self.vertices if v in keep),
                     frozenset(e for e in self.edges if e <= keep))

    def components(self, removed: Iterable[str] = ()) -> list[frozenset[str]]:
        gone = set(removed)
        seen: set[str] = set()
        out = []
        for v in self.vertices:
            if v in gone or v in seen:
                continue
            comp, todo = {v}, [v]
            while todo:
                u = todo.pop()
                for w in self.neighbours(u):
                    if w not in gone and w not in comp:
                        comp.add(w)
                        todo.append(w)
            seen |= comp
            out.append(frozenset(comp))
        return out


def make_graph(vertices: Sequence[str], edges: Iterable[tuple[str, str]] = ()) -> Graph:
    vs = tuple(str(v) for v in vertices)
    es = set()
    for a, b in edges:
        if a == b:
            raise SepSysError("loops are not allowed")
        if a not in vs or b not in vs:
            raise SepSysError(f"edge {a}-{b} uses an unknown vertex")
        es.add(frozenset((str(a), str(b))))
    return Graph(vs, frozenset(es))


def parse_graph(text: str) -> Graph:
    """Adjacency list: one ``v: u w ...`` line per vertex; ``#`` starts a comment."""
    vertices: list[str] = []
    edges = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise SepSysError(f"malformed adjacency line: {raw!r}")
        head, tail = line.split(":", 1)
        v = head.strip()
        if v not in vertices:
            vertices.append(v)
        for u in tail.split():
            if u not in vertices:
                vertices.append(u)
            edges.append((v, u))
    return make_graph(vertices, edges)


def path_graph(n: int, prefix: str = "v") -> Graph:
    vs = [f"{prefix}{i}" for i in range(1, n + 1)]
    return make_graph(vs, zip(vs, vs[1:]))


@dataclass(frozen=True, order=True)
class SetSeparation:
    A: frozenset
    B: frozenset

    @property
    def order(self) -> int:
        return len(self.A & self.B)

    def inverse(self) -> "SetSeparation":
        return SetSeparation(self.B, self.A)

    def leq(self, other: "SetSeparation") -> bool:
        return self.A <= other.A and self.B >= other.B

    def label(self, ordering: Sequence[str]) -> str:
        side = lambda X: ",".join(v for v in ordering if v in X)  # noqa: E731
        return f"{side(self.A)}|{side(self.B)}"


def is_separation(G: Graph, A: Iterable[str], B: Iterable[str]) -> bool:
    A, B = frozenset(A), frozenset(B)
    if A | B != frozenset(G.vertices):
        return False
    return not any(len(e & (A - B)) == 1 and len(e & (B - A)) == 1 for e in G.edges)


def restrict_separation(sep: SetSeparation, subset: Iterable[str]) -> SetSeparation:
    p = frozenset(subset)
    return SetSeparation(sep.A & p, sep.B & p)


def separations_of(G: Graph, k: int, limit: int = 20000) -> list[SetSeparation]:
    """All ``(A, B)`` of order ``< k`` in deterministic order."""
    if k < 1:
        raise SepSysError("order bound must be at least 1")
    out = []
    for size in range(min(k, len(G.vertices) + 1)):
        for X in combinations(G.vertices, size):
            comps = G.components(X)
            for mask in range(1 << len(comps)):
                A = set(X)
                B = set(X)
                for i, c in enumerate(comps):
                    (A if mask >> i & 1 else B).update(c)
                out.append(SetSeparation(frozenset(A), frozenset(B)))
                if len(out) > limit:
                    raise TooLarge(f"more than {limit} separations")
    return sorted(set(out), key=lambda s: (s.order, sorted(s.A), sorted(s.B)))


def enumerate_separations(G: Graph, k: int, limit: int = 20000) -> SeparationSystem:
    """The system of separations of order ``< k``; payloads are the
    :class:`SetSeparation` values."""
    seps = separations_of(G, k, limit)
    pos = {s: i for i, s in enumerate(seps)}
    labels = [s.label(G.vertices) for s in seps]
    inv = [pos[s.inverse()] for s in seps]
    return from_order(labels, inv, lambda i, j: seps[i].leq(seps[j]), tuple(seps))


def restriction_map(source: SeparationSystem, target: SeparationSystem, subset) -> tuple[int, ...]:
    pos = {s: i for i, s in enumerate(target.payload)}
    return tuple(pos[restrict_separation(s, subset)] for s in source.payload)


def build_restriction_system(G: Graph, k: int, subsets: Sequence[Iterable[str]],
                             *, require_chain: bool = False) -> InverseSystem:
    """Order-``<k`` systems of induced subgraphs on ``subsets`` (ordered by
    inclusion, must be directed), with restriction bonds."""
    subs = [frozenset(s) for s in subsets]
    if len(set(subs)) != len(subs):
        raise SepSysError("duplicate vertex subsets")
    if require_chain and any(not (a <= b or b <= a) for a in subs for b in subs):
        raise NotAChain("subsets are not a chain under inclusion")
    names = [",".join(v for v in G.vertices if v in s) or "{}" for s in subs]
    leq = [(names[i], names[j]) for i, a in enumerate(subs) for j, b in enumerate(subs) if i != j and a <= b]
    P = make_poset(names, leq)
    levels = [enumerate_separations(G.induced(s), k) for s in subs]
    bonds = {}
    for q, p in P.covers:
        bonds[(names[q], names[p])] = restriction_map(levels[q], levels[p], subs[p])
    return make_inverse_system(P, levels, bonds)


def prefix_chain(G: Graph, n: int | None = None) -> list[frozenset[str]]:
    n = len(G.vertices) if n is None else n
    return [frozenset(G.vertices[:i]) for i in range(1, n + 1)]
