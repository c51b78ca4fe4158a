"""Homomorphisms, finite directed posets, inverse systems and their limits.

Every finite directed poset has a greatest point, so the limit of a finite
inverse system is in bijection with its top level. The limit's order and
involution are nevertheless computed coordinatewise, never copied.

Phenomena that only exist for infinite index sets are studied through
*probe points*: ``closure`` and related operations accept a subset of points
over which the "for all p" quantifiers range. Probing every point except the
top mimics an infinite chain whose top level lies beyond the horizon.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Mapping, Sequence

from .core import (
    SepSysError,
    SeparationSystem,
    LemmaViolation,
    bits,
    check_axioms,
    induced,
    to_mask,
    transitive_closure,
)


class InvolutionMismatch(SepSysError):
    def __init__(self, x: str):
        super().__init__(f"map does not commute with the involution at {x}")
        self.element = x


class OrderViolation(SepSysError):
    def __init__(self, x: str, y: str):
        super().__init__(f"{x} <= {y} but their images are not comparable that way")
        self.pair = (x, y)


class NotDirected(SepSysError):
    pass


class IncompatibleBonds(SepSysError):
    def __init__(self, p, q, r):
        super().__init__(f"bond composites disagree on {p} < {q} < {r}")
        self.triple = (p, q, r)


class UnknownPoint(SepSysError):
    pass


class NotAChain(SepSysError):
    pass


class NotClosed(SepSysError):
    pass


# ---------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True, eq=False)
class SystemHom:
    source: SeparationSystem
    target: SeparationSystem
    map: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.map[x]

    def image(self, subset: Iterable[int]) -> frozenset[int]:
        return frozenset(self.map[x] for x in subset)

    def preimage(self, subset: Iterable[int]) -> frozenset[int]:
        sub = set(subset)
        return frozenset(x for x, y in enumerate(self.map) if y in sub)


def validate_hom(source: SeparationSystem, target: SeparationSystem, mapping) -> SystemHom:
    """Check an element map (sequence of indices or label dict) is a homomorphism."""
    if isinstance(mapping, Mapping):
        m = tuple(target.element(str(mapping[lab])) for lab in source.labels)
    else:
        m = tuple(int(v) for v in mapping)
    if len(m) != len(source) or any(not 0 <= v < len(target) for v in m):
        raise SepSysError("map is not total on the source")
    for x in range(len(source)):
        if m[source.inv[x]] != target.inv[m[x]]:
            raise InvolutionMismatch(source.labels[x])
    for x in range(len(source)):
        for y in bits(source.up[x]):
            if not target.leq(m[x], m[y]):
                raise OrderViolation(source.labels[x], source.labels[y])
    return SystemHom(source, target, m)


def identity_hom(S: SeparationSystem) -> SystemHom:
    return SystemHom(S, S, tuple(range(len(S))))


def compose(g: SystemHom, f: SystemHom) -> SystemHom:
    """``g`` after ``f``."""
    if f.target is not g.source:
        raise SepSysError("homomorphisms are not composable")
    return SystemHom(f.source, g.target, tuple(g.map[y] for y in f.map))


def is_epi(f: SystemHom) -> bool:
    return len(set(f.map)) == len(f.target)


def isomorphic_via(f: SystemHom) -> bool:
    """Bijective with an order-reflecting inverse."""
    if not is_epi(f) or len(f.source) != len(f.target):
        return False
    return all(f.target.leq(f.map[x], f.map[y]) == f.source.leq(x, y)
               for x in range(len(f.source)) for y in range(len(f.source)))


# ---------------------------------------------------------------------------
# directed posets


@dataclass(frozen=True, eq=False)
class DirectedPoset:
    points: tuple[Hashable, ...]
    up: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.points)

    @cached_property
    def index(self) -> dict:
        return {p: i for i, p in enumerate(self.points)}

    def idx(self, p) -> int:
        try:
            return self.index[p]
        except KeyError:
            raise UnknownPoint(repr(p)) from None

    def leq(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    @cached_property
    def maximum(self) -> int:
        for i in range(len(self)):
            if self.up[i] == 1 << i:
                return i
        raise NotDirected("no greatest point")

    @cached_property
    def ascending(self) -> tuple[int, ...]:
        """Points sorted so that every point comes after all points below it."""
        return tuple(sorted(range(len(self)), key=lambda i: (-bin(self.up[i]).count("1"), i)))

    @cached_property
    def covers(self) -> tuple[tuple[int, int], ...]:
        """Pairs ``(q, p)`` with ``q`` covering ``p``."""
        out = []
        for p in range(len(self)):
            above = self.up[p] & ~(1 << p)
            for q in bits(above):
                if not any(r != q and self.up[r] >> q & 1 for r in bits(above)):
                    out.append((q, p))
        return tuple(sorted(out))

    def lower_covers(self, q: int) -> list[int]:
        return [p for (r, p) in self.covers if r == q]

    def at_least(self, p: int) -> list[int]:
        return list(bits(self.up[p]))


def make_poset(points: Sequence[Hashable], leq: Iterable[tuple] = ()) -> DirectedPoset:
    """Validate a finite directed poset given by points and order generators."""
    pts = tuple(points)
    if not pts:
        raise NotDirected("empty poset")
    index = {p: i for i, p in enumerate(pts)}
    if len(index) != len(pts):
        raise SepSysError("duplicate points")
    try:
        pairs = [(index[a], index[b]) for a, b in leq]
    except KeyError as exc:
        raise UnknownPoint(repr(exc.args[0])) from None
    up = transitive_closure(len(pts), pairs)
    for i in range(len(pts)):
        for j in bits(up[i]):
            if i != j and up[j] >> i & 1:
                raise SepSysError(f"poset order has a cycle through {pts[i]!r} and {pts[j]!r}")
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if not up[i] & up[j]:
                raise NotDirected(f"{pts[i]!r} and {pts[j]!r} have no common upper bound")
    P = DirectedPoset(pts, tuple(up))
    P.maximum  # asserts existence
    return P


def chain_poset(points: Sequence[Hashable]) -> DirectedPoset:
    return make_poset(points, zip(points, points[1:]))


# ---------------------------------------------------------------------------
# inverse systems


@dataclass(frozen=True)
class SetLevel:
    """A level that is a plain finite set (used for power-set systems)."""

    items: tuple

    def __len__(self) -> int:
        return len(self.items)


@dataclass(frozen=True, eq=False)
class InverseSystem:
    poset: DirectedPoset
    levels: tuple
    bonds: Mapping[tuple[int, int], tuple[int, ...]] = field(repr=False)

    @cached_property
    def maps(self) -> dict[tuple[int, int], tuple[int, ...]]:
        """Composite map ``f_qp`` for every pair ``q >= p`` (point indices)."""
        return _composites(self)

    def f(self, q: int, p: int) -> tuple[int, ...]:
        try:
            return self.maps[(q, p)]
        except KeyError:
            raise UnknownPoint(f"{self.poset.points[p]!r} is not below {self.poset.points[q]!r}") from None

    @property
    def top(self) -> int:
        return self.poset.maximum

    def level(self, p) -> SeparationSystem:
        return self.levels[p]

    def hom(self, q: int, p: int) -> SystemHom:
        return SystemHom(self.levels[q], self.levels[p], self.f(q, p))


def _composites(IS: InverseSystem) -> dict:
    P = IS.poset
    maps: dict[tuple[int, int], tuple[int, ...]] = {}
    for q in P.ascending:
        maps[(q, q)] = tuple(range(len(IS.levels[q])))
        for c in P.lower_covers(q):
            if (q, c) not in IS.bonds:
                raise SepSysError(f"missing bond {P.points[q]!r} -> {P.points[c]!r}")
        below = [p for p in range(len(P)) if p != q and P.leq(p, q)]
        for p in below:
            # every path from q down to p leaves q through some lower cover c
            candidate = None
            for c in P.lower_covers(q):
                if not P.leq(p, c):
                    continue
                bond = IS.bonds[(q, c)]
                lower = maps[(c, p)]
                m = tuple(lower[y] for y in bond)
                if candidate is None:
                    candidate = m
                elif m != candidate:
                    raise IncompatibleBonds(P.points[p], P.points[c], P.points[q])
            maps[(q, p)] = candidate
    return maps


def make_inverse_system(poset: DirectedPoset, levels: Sequence, bonds: Mapping,
                        *, check: bool = True) -> InverseSystem:
    """Build and validate an inverse system. ``bonds`` is keyed by point pairs
    ``(q, p)`` (labels) with ``q`` covering ``p``; values are index maps or
    label dicts."""
    levels = tuple(levels)
    if len(levels) != len(poset):
        raise SepSysError("one level per point required")
    idx_bonds: dict[tuple[int, int], tuple[int, ...]] = {}
    cover_set = set(poset.covers)
    for (qlab, plab), m in bonds.items():
        q, p = poset.idx(qlab), poset.idx(plab)
        if (q, p) not in cover_set:
            raise SepSysError(f"bond {qlab!r} -> {plab!r} is not on a covering pair")
        Sq, Sp = levels[q], levels[p]
        if isinstance(Sq, SeparationSystem) and check:
            m = validate_hom(Sq, Sp, m).map
        elif isinstance(m, Mapping):
            m = tuple(Sp.element(str(m[lab])) for lab in Sq.labels)
        idx_bonds[(q, p)] = tuple(m)
    IS = InverseSystem(poset, levels, idx_bonds)
    IS.maps  # validates compatibility
    return IS


def validate_inverse_system(IS: InverseSystem) -> InverseSystem:
    for S in IS.levels:
        if isinstance(S, SeparationSystem):
            check_axioms(S)
    for (q, p), m in IS.bonds.items():
        if isinstance(IS.levels[q], SeparationSystem):
            validate_hom(IS.levels[q], IS.levels[p], m)
    IS.poset.maximum
    _composites(IS)
    return IS


def chain_system(levels: Sequence[SeparationSystem], bonds: Sequence, names: Sequence | None = None,
                 *, check: bool = True) -> InverseSystem:
    """Chain ``names[0] < names[1] < ...``; ``bonds[i]`` maps level ``i+1`` to level ``i``."""
    names = list(names) if names is not None else list(range(1, len(levels) + 1))
    P = chain_poset(names)
    return make_inverse_system(P, levels, {(names[i + 1], names[i]): b for i, b in enumerate(bonds)},
                               check=check)


# ---------------------------------------------------------------------------
# limits


@dataclass(frozen=True, eq=False)
class Limit:
    system: InverseSystem
    S: SeparationSystem
    coords: tuple[tuple[int, ...], ...]

    def project(self, x: int, p: int) -> int:
        return self.coords[x][p]

    def project_set(self, subset: Iterable[int], p: int) -> frozenset[int]:
        return frozenset(self.coords[x][p] for x in subset)

    def from_coords(self, family: Sequence[int]) -> int | None:
        return self._by_coords.get(tuple(family))

    @cached_property
    def _by_coords(self) -> dict:
        return {c: x for x, c in enumerate(self.coords)}

    @property
    def points(self) -> range:
        return range(len(self.system.poset))

    @property
    def probe_points(self) -> list[int]:
        """Every point except the top one."""
        top = self.system.top
        return [p for p in self.points if p != top] or [top]


def limit(IS: InverseSystem) -> Limit:
    top = IS.top
    St: SeparationSystem = IS.levels[top]
    n_pts = len(IS.poset)
    coords = tuple(tuple(IS.f(top, p)[x] for p in range(n_pts)) for x in range(len(St)))
    inv = tuple(St.inv[x] for x in range(len(St)))
    for x in range(len(St)):
        for p in range(n_pts):
            if IS.levels[p].inv[coords[x][p]] != coords[inv[x]][p]:
                raise LemmaViolation("coordinatewise involution is not well defined")
    up = []
    for x in range(len(St)):
        m = St.full_mask
        for p in range(n_pts):
            Sp = IS.levels[p]
            m &= to_mask(y for y in range(len(St)) if Sp.leq(coords[x][p], coords[y][p]))
        up.append(m)
    S = SeparationSystem(St.labels, inv, tuple(up), St.payload)
    return Limit(IS, S, coords)


def order_discrepancies(lim: Limit) -> list[tuple[int, int]]:
    """Pairs related in the top level but not coordinatewise (empty whenever
    bonds are homomorphisms)."""
    St = lim.system.levels[lim.system.top]
    return [(x, y) for x in range(len(St)) for y in bits(St.up[x]) if not lim.S.leq(x, y)]


def surjectivize(IS: InverseSystem) -> InverseSystem:
    """Restrict every level to the image of the limit."""
    top = IS.top
    images = []
    reindex = []
    for p in range(len(IS.poset)):
        img = sorted(set(IS.f(top, p)))
        images.append(img)
        reindex.append({x: i for i, x in enumerate(img)})
    levels = tuple(induced(IS.levels[p], images[p])[0] for p in range(len(IS.poset)))
    bonds = {}
    for (q, p), m in IS.bonds.items():
        bonds[(q, p)] = tuple(reindex[p][m[x]] for x in images[q])
    out = InverseSystem(IS.poset, levels, bonds)
    out.maps
    return out


def is_surjective(IS: InverseSystem) -> bool:
    return all(len(set(m)) == len(IS.levels[p]) for (q, p), m in IS.bonds.items())


# ---------------------------------------------------------------------------
# closure and chains


def closure(lim: Limit, subset: Iterable[int], points: Iterable[int] | None = None) -> frozenset[int]:
    """All limit elements whose projection to every given point lies in the
    projection of ``subset``."""
    pts = list(lim.points if points is None else points)
    sub = frozenset(subset)
    proj = {p: lim.project_set(sub, p) for p in pts}
    return frozenset(x for x in range(len(lim.S)) if all(lim.coords[x][p] in proj[p] for p in pts))


def is_closed(lim: Limit, subset: Iterable[int], points: Iterable[int] | None = None) -> bool:
    sub = frozenset(subset)
    return closure(lim, sub, points) == sub


def _check_chain(S: SeparationSystem, C: Sequence[int]) -> None:
    if not C:
        raise NotAChain("empty chain")
    for x in C:
        for y in C:
            if not (S.leq(x, y) or S.leq(y, x)):
                raise NotAChain(f"{S.labels[x]} and {S.labels[y]} are incomparable")


def _chain_extreme(lim: Limit, chain: Iterable[int], upper: bool) -> int:
    C = sorted(set(chain))
    _check_chain(lim.S, C)
    family = []
    for p in lim.points:
        Sp = lim.system.levels[p]
        proj = sorted({lim.coords[x][p] for x in C})
        best = proj[0]
        for y in proj[1:]:
            if (Sp.leq(best, y) if upper else Sp.leq(y, best)):
                best = y
        family.append(best)
    x = lim.from_coords(family)
    if x is None:
        raise LemmaViolation("coordinatewise extremes of a chain are not compatible")
    S = lim.S
    if not all((S.leq(c, x) if upper else S.leq(x, c)) for c in C):
        raise LemmaViolation("chain extreme is not a bound")
    bounds = [b for b in range(len(S)) if all((S.leq(c, b) if upper else S.leq(b, c)) for c in C)]
    if not all((S.leq(x, b) if upper else S.leq(b, x)) for b in bounds):
        raise LemmaViolation("chain extreme is not least/greatest among bounds")
    if x not in closure(lim, C):
        raise LemmaViolation("chain extreme is not in the closure of the chain")
    return x


def chain_sup(lim: Limit, chain: Iterable[int]) -> int:
    return _chain_extreme(lim, chain, upper=True)


def chain_inf(lim: Limit, chain: Iterable[int]) -> int:
    return _chain_extreme(lim, chain, upper=False)


def maximal_chain_through(S: SeparationSystem, subset: Iterable[int], x: int) -> list[int]:
    sub = sorted(set(subset))
    chain = [x]
    changed = True
    while changed:
        changed = False
        for y in sub:
            if y not in chain and all(S.leq(y, c) or S.leq(c, y) for c in chain):
                chain.append(y)
                changed = True
    return sorted(chain)


def min_below_max_above(lim: Limit, subset: Iterable[int], x: int,
                        points: Iterable[int] | None = None) -> tuple[int, int]:
    """A minimal element of ``subset`` below ``x`` and a maximal one above it."""
    sub = frozenset(subset)
    if x not in sub:
        raise SepSysError("element not in subset")
    if not is_closed(lim, sub, points):
        raise NotClosed("subset is not closed")
    chain = maximal_chain_through(lim.S, sub, x)
    lo, hi = chain_inf(lim, chain), chain_sup(lim, chain)
    S = lim.S
    if lo not in sub or hi not in sub:
        raise LemmaViolation("chain extremes left a closed set")
    if any(S.lt(y, lo) for y in sub) or any(S.lt(hi, y) for y in sub):
        raise LemmaViolation("chain extremes are not minimal/maximal")
    return lo, hi


def compatible_families(IS: InverseSystem, allowed: Sequence[Iterable[int]]) -> list[tuple[int, ...]]:
    """All compatible families choosing from ``allowed[p]`` at every point.

    Backtracking runs top-down; with a greatest point every lower coordinate
    is forced by the top choice.
    """
    sets = [frozenset(a) for a in allowed]
    top = IS.top
    out = []
    for x in sorted(sets[top]):
        fam = tuple(IS.f(top, p)[x] for p in range(len(IS.poset)))
        if all(fam[p] in sets[p] for p in range(len(IS.poset))):
            out.append(fam)
    return out
