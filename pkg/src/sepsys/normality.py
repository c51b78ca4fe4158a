"""Splitting versus closed orientations, and depth-bounded certificates.

An infinite chain of finite systems is described by a :class:`SchematicChain`
and examined through :func:`truncate`. In a truncation with levels
``first .. first+n`` the *probe points* are all levels but the top one: the
top level stands in for "far enough out", and every "for all p" statement
about the infinite chain is checked at the probe points only. Results carry a
:class:`DepthVerdict` saying how deep the check went.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

from .core import (
    LemmaViolation,
    SepSysError,
    SeparationSystem,
    is_consistent,
    is_nested,
    is_orientation,
    splits_at,
)
from .inverse import InverseSystem, Limit, chain_system, closure, compatible_families, is_closed, limit
from .profinite import PreconditionFailed, trivial_in_projection


class BuilderError(SepSysError):
    def __init__(self, p, reason: str):
        super().__init__(f"level {p}: {reason}")
        self.level = p


class NoGreatest(SepSysError):
    pass


class UnregisteredChain(SepSysError):
    pass


@dataclass(frozen=True)
class SchematicChain:
    """Levels ``first, first+1, ...`` given by rules.

    ``level_builder(p)`` returns the system at level ``p`` and
    ``bond_builder(p)`` the map from level ``p+1`` down to level ``p``
    (index sequence or label dict). Labels are stable across levels: an
    element keeps its label at every level where it is distinguished.
    """

    name: str
    first: int
    level_builder: Callable[[int], SeparationSystem] = field(repr=False)
    bond_builder: Callable[[int], object] = field(repr=False)


@dataclass(frozen=True)
class DepthVerdict:
    status: str  # "verified" or "refuted"
    depth: int
    refuted_at: int | None = None

    @property
    def ok(self) -> bool:
        return self.status == "verified"


def verdict(failures: Iterable[int], depth: int) -> DepthVerdict:
    bad = sorted(failures)
    return DepthVerdict("refuted", depth, bad[0]) if bad else DepthVerdict("verified", depth)


def truncate(chain: SchematicChain, n: int) -> InverseSystem:
    """The first ``n`` levels as a validated inverse system (points are the
    level numbers)."""
    if n < 1:
        raise BuilderError(chain.first, "depth must be at least 1")
    names = list(range(chain.first, chain.first + n))
    levels = []
    for p in names:
        try:
            levels.append(chain.level_builder(p))
        except SepSysError as exc:
            raise BuilderError(p, str(exc)) from exc
    bonds = []
    for p in names[:-1]:
        try:
            bonds.append(chain.bond_builder(p))
        except SepSysError as exc:
            raise BuilderError(p, str(exc)) from exc
    try:
        return chain_system(levels, bonds, names)
    except SepSysError as exc:
        raise BuilderError(chain.first, str(exc)) from exc


# ---------------------------------------------------------------------------
# probe views


def probe_faithful(lim: Limit, points: Iterable[int]) -> bool:
    """Whether the order of the limit is determined by the given coordinates."""
    pts = list(points)
    S = lim.S
    for x in range(len(S)):
        for y in range(len(S)):
            coord = all(lim.system.levels[p].leq(lim.coords[x][p], lim.coords[y][p]) for p in pts)
            if coord != S.leq(x, y):
                return False
    return True


def probe_trivial_witness(lim: Limit, x: int, points: Iterable[int]) -> int | None:
    """A separation witnessing triviality of ``x`` as seen at the probe points:
    ``x|p <= w|p`` and ``x|p <= inv(w)|p`` everywhere, both strict somewhere."""
    pts = list(points)
    S = lim.S
    for w in S.separations:
        if w == S.sep(x):
            continue
        ok = True
        for y in (w, S.inv[w]):
            le = all(lim.system.levels[p].leq(lim.coords[x][p], lim.coords[y][p]) for p in pts)
            strict = any(lim.coords[x][p] != lim.coords[y][p] for p in pts)
            if not (le and strict and S.lt(x, y)):
                ok = False
        if ok:
            return w
    return None


# ---------------------------------------------------------------------------
# greatest elements and closedness


@dataclass(frozen=True)
class GreatestReport:
    branch: str  # "closed" or "greatest_cosmall_not_cotrivial"
    greatest: int
    certificate: dict = field(default_factory=dict)  # point -> element of O hitting inv(greatest)


def greatest_element(S: SeparationSystem, O: Iterable[int]) -> int | None:
    O = list(O)
    for m in O:
        if all(S.leq(y, m) for y in O):
            return m
    return None


def check_greatest(lim: Limit, O: Iterable[int], points: Iterable[int] | None = None) -> GreatestReport:
    """Either ``O`` is closed, or its greatest element is co-small, not
    co-trivial, and has its inverse in the closure of ``O``."""
    S = lim.S
    O = frozenset(O)
    pts = list(lim.points if points is None else points)
    if not (is_orientation(S, O) and is_consistent(S, O)):
        raise PreconditionFailed("O must be a consistent orientation")
    m = greatest_element(S, O)
    if m is None:
        raise NoGreatest("orientation has no greatest element")
    if is_closed(lim, O, pts):
        return GreatestReport("closed", m)
    mi = S.inv[m]
    cl = closure(lim, O, pts)
    if S.is_co_small(m) and not S.is_co_trivial(m) and mi in cl:
        cert = {}
        for p in pts:
            cert[p] = min(y for y in O if lim.coords[y][p] == lim.coords[mi][p])
        return GreatestReport("greatest_cosmall_not_cotrivial", m, cert)
    if points is None or probe_faithful(lim, pts):
        raise LemmaViolation("consistent orientation with a greatest element is neither closed "
                             "nor of the co-small kind")
    raise PreconditionFailed("probe view does not determine the order")


def check_bounded_split_closed(lim: Limit, O: Iterable[int], points: Iterable[int] | None = None) -> bool:
    S = lim.S
    O = frozenset(O)
    sigma = splits_at(S, O)
    if sigma is None or len(sigma) < 2:
        raise PreconditionFailed("O must split at a star with at least two elements")
    pts = list(lim.points if points is None else points)
    if is_closed(lim, O, pts):
        return True
    if points is None or probe_faithful(lim, pts):
        stray = sorted(closure(lim, O, pts) - O)
        raise LemmaViolation(f"splitting orientation at a star of size {len(sigma)} is not closed; "
                             f"closure adds {S.names(stray)}")
    raise PreconditionFailed("probe view does not determine the order")


# ---------------------------------------------------------------------------
# stars


def largest_star(S: SeparationSystem, candidates: Iterable[int] | None = None) -> frozenset[int]:
    """A maximum-size proper star (clique search; ties broken by index)."""
    cand = sorted(x for x in (range(len(S)) if candidates is None else candidates) if not S.is_degenerate(x))
    adj = {x: {y for y in cand if y not in (x, S.inv[x]) and S.leq(x, S.inv[y])} for x in cand}
    best: list[int] = []

    def grow(chosen: list[int], pool: list[int]) -> None:
        nonlocal best
        if len(chosen) > len(best):
            best = list(chosen)
        if len(chosen) + len(pool) <= len(best):
            return
        for i, y in enumerate(pool):
            grow(chosen + [y], [z for z in pool[i + 1:] if z in adj[y]])

    grow([], cand)
    return frozenset(best)


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class NormalityCertificate:
    chain: str
    depth: int
    small_status: dict  # label -> "trivial" | "finitely_trivial" | "nontrivial"
    star_sizes: tuple[int, ...]
    star_growth: DepthVerdict
    tree_set: bool
    non_closed_splitting: dict  # label of greatest element -> closure certificate
    closed_singletons: tuple[str, ...]
    star_witness: dict | None
    verdict: str  # "abnormal_witness" | "normal_evidence"

    def to_dict(self) -> dict:
        return {
            "chain": self.chain,
            "depth": self.depth,
            "small_status": self.small_status,
            "star_sizes": list(self.star_sizes),
            "star_growth": {"status": self.star_growth.status, "depth": self.star_growth.depth,
                            "refuted_at": self.star_growth.refuted_at},
            "tree_set": self.tree_set,
            "non_closed_splitting": self.non_closed_splitting,
            "closed_singletons": list(self.closed_singletons),
            "star_witness": self.star_witness,
            "verdict": self.verdict,
        }


def _finitely_trivial(lim: Limit, x: int, pts: list[int]) -> bool:
    P = lim.system.poset
    return all(any(trivial_in_projection(lim, x, q) for q in pts if P.leq(p, q)) for p in pts)


def orientation_below(lim: Limit, m: int, pts: list[int]) -> frozenset[int] | None:
    """The orientation with greatest element ``m``: each separation oriented
    below ``m``. A separation with both orientations below ``m`` only arises
    from elements first distinguished at the top level; it is oriented so that
    it differs from ``m`` at some probe point. ``None`` if some separation has
    no orientation below ``m``."""
    S = lim.S
    O = {m}
    for s in S.separations:
        if s == S.sep(m):
            continue
        below = [z for z in {s, S.inv[s]} if S.leq(z, m)]
        if not below:
            return None
        if len(below) == 2:
            apart = [z for z in sorted(below) if any(lim.coords[z][p] != lim.coords[m][p] for p in pts)]
            below = apart or sorted(below)
        O.add(min(below))
    return frozenset(O)


def star_witness(lim: Limit, pts: list[int]) -> dict | None:
    """Small ``s0`` in the closure of a large star minus ``s0`` whose inverse
    extends to a splitting orientation that is not closed."""
    S = lim.S
    sigma = largest_star(S)
    if len(sigma) < 2:
        return None
    allowed = []
    for p in lim.points:
        if p in pts:
            hits: dict[int, int] = {}
            for r in sigma:
                hits[lim.coords[r][p]] = hits.get(lim.coords[r][p], 0) + 1
            allowed.append({y for y, c in hits.items() if c >= 2})
        else:
            allowed.append(set(range(len(lim.system.levels[p]))))
    found = [lim.from_coords(fam) for fam in compatible_families(lim.system, allowed)]
    # prefer elements already distinguished below the top level
    below = max(pts, key=lambda p: sum(lim.system.poset.leq(q, p) for q in pts))
    found.sort(key=lambda x: (lim.system.levels[below].labels[lim.coords[x][below]] != S.labels[x], x))
    for s0 in found:
        if s0 not in sigma:
            continue
        rest = sigma - {s0}
        small = all(lim.system.levels[p].is_small(lim.coords[s0][p]) for p in pts)
        in_closure = s0 in closure(lim, rest, pts)
        if probe_trivial_witness(lim, s0, pts) is not None:
            return {"s0": S.labels[s0], "small": small, "in_closure": in_closure, "extension": "co_trivial"}
        O = orientation_below(lim, S.inv[s0], pts)
        if O is None:
            return {"s0": S.labels[s0], "small": small, "in_closure": in_closure, "extension": "none"}
        return {
            "s0": S.labels[s0],
            "small": small,
            "in_closure": in_closure,
            "extension": "ok",
            "orientation": S.names(sorted(O)),
            "closed": is_closed(lim, O, pts),
        }
    return None


def normality_certificate(chain: SchematicChain | str, depth: int) -> NormalityCertificate:
    """Evidence about normality of the chain's limit, checked to ``depth``.

    Builds ``depth + 1`` levels and probes the first ``depth``. A consistent
    orientation that splits but is not closed has a co-small, non-co-trivial
    greatest element, and for nested systems the orientation with a given
    greatest element is unique; so sweeping those elements settles normality
    at the probed depth.
    """
    if isinstance(chain, str):
        from .examples import schematic

        chain = schematic(chain)
    IS = truncate(chain, depth + 1)
    lim = limit(IS)
    S = lim.S
    pts = lim.probe_points
    if not is_nested(S):
        raise PreconditionFailed("limit representation is not nested")

    small_status = {}
    for x in range(len(S)):
        if S.is_small(x) and not S.is_degenerate(x):
            if probe_trivial_witness(lim, x, pts) is not None:
                small_status[S.labels[x]] = "trivial"
            elif _finitely_trivial(lim, x, pts):
                small_status[S.labels[x]] = "finitely_trivial"
            else:
                small_status[S.labels[x]] = "nontrivial"

    sizes = tuple(len(largest_star(L)) for L in IS.levels)
    growth = verdict([IS.poset.points[i + 1] for i in range(len(sizes) - 1) if sizes[i + 1] <= sizes[i]],
                     depth)
    tree_set = not any(probe_trivial_witness(lim, x, pts) is not None for x in range(len(S)))

    bad, good = {}, []
    for m in range(len(S)):
        if not S.is_co_small(m) or S.is_degenerate(m):
            continue
        if probe_trivial_witness(lim, S.inv[m], pts) is not None:
            continue
        O = orientation_below(lim, m, pts)
        if O is None:
            continue
        if is_closed(lim, O, pts):
            good.append(S.labels[m])
        else:
            mi = S.inv[m]
            bad[S.labels[m]] = {
                IS.poset.points[p]: S.labels[min(y for y in O if lim.coords[y][p] == lim.coords[mi][p])]
                for p in pts if any(lim.coords[y][p] == lim.coords[mi][p] for y in O)
            }
    witness = star_witness(lim, pts)
    abnormal = bool(bad) or bool(witness and witness.get("closed") is False)
    return NormalityCertificate(
        chain.name, depth, small_status, sizes, growth, tree_set, bad, tuple(good), witness,
        "abnormal_witness" if abnormal else "normal_evidence",
    )


# ---------------------------------------------------------------------------
# isomorphism


def _signature(S: SeparationSystem, x: int) -> tuple:
    return (
        S.is_small(x), S.is_co_small(x), S.is_degenerate(x), S.is_trivial(x), S.is_co_trivial(x),
        bin(S.up[x]).count("1"), bin(S.down[x]).count("1"),
    )


def isomorphism_check(A: SeparationSystem, B: SeparationSystem) -> dict[int, int] | None:
    """An involution-commuting order isomorphism ``A -> B`` or ``None``."""
    if len(A) != len(B):
        return None
    sig_a = [_signature(A, x) for x in range(len(A))]
    sig_b = [_signature(B, y) for y in range(len(B))]
    if sorted(sig_a) != sorted(sig_b):
        return None
    order = sorted(range(len(A)), key=lambda x: (sum(1 for s in sig_a if s == sig_a[x]), x))
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def fits(x: int, y: int) -> bool:
        if sig_a[x] != sig_b[y] or y in used:
            return False
        for u, v in mapping.items():
            if A.leq(x, u) != B.leq(y, v) or A.leq(u, x) != B.leq(v, y):
                return False
        return True

    def assign(x: int, y: int) -> list[int]:
        added = []
        for u, v in ((x, y), (A.inv[x], B.inv[y])):
            if u not in mapping:
                mapping[u] = v
                used.add(v)
                added.append(u)
        return added

    def rec(i: int) -> bool:
        while i < len(order) and order[i] in mapping:
            i += 1
        if i == len(order):
            return True
        x = order[i]
        for y in range(len(B)):
            if not fits(x, y):
                continue
            xi, yi = A.inv[x], B.inv[y]
            if (xi == x) != (yi == y):
                continue
            added = assign(x, y)
            if xi != x and not _consistent_pair(A, B, mapping, xi):
                for u in added:
                    used.discard(mapping.pop(u))
                continue
            if rec(i + 1):
                return True
            for u in added:
                used.discard(mapping.pop(u))
        return False

    if not rec(0):
        return None
    return dict(mapping)


def _consistent_pair(A, B, mapping, x) -> bool:
    y = mapping[x]
    if _signature(A, x) != _signature(B, y):
        return False
    return all(A.leq(x, u) == B.leq(y, v) and A.leq(u, x) == B.leq(v, y) for u, v in mapping.items())
