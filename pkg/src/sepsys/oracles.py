"""Naive brute-force reference answers.

Deliberately independent of the main implementation: only the raw order
``S.leq`` and the involution are used, every other notion is recomputed by
plain enumeration.
"""
from __future__ import annotations

from itertools import combinations, product

from .core import SepSysError, SeparationSystem


class TooLarge(SepSysError):
    pass


def _pairs(S: SeparationSystem) -> list[tuple[int, ...]]:
    seen, out = set(), []
    for x in range(len(S)):
        if x in seen:
            continue
        y = S.inv[x]
        seen |= {x, y}
        out.append((x,) if x == y else (x, y))
    return out


def _consistent(S: SeparationSystem, O) -> bool:
    for a in O:
        for b in O:
            same = a == b or S.inv[a] == b
            if not same and S.leq(S.inv[a], b):
                return False
    return True


def oracle_consistent_orientations(S: SeparationSystem, limit: int = 8) -> list[frozenset[int]]:
    pairs = _pairs(S)
    if len(pairs) > limit:
        raise TooLarge("too many separations for the oracle")
    return [frozenset(c) for c in product(*pairs) if _consistent(S, c)]


def oracle_maximal(S: SeparationSystem, O) -> frozenset[int]:
    return frozenset(x for x in O if not any(y != x and S.leq(x, y) for y in O))


def oracle_splitting(S: SeparationSystem, limit: int = 8) -> list[frozenset[int]]:
    out = []
    for O in oracle_consistent_orientations(S, limit):
        top = oracle_maximal(S, O)
        if all(any(S.leq(x, m) for m in top) for x in O) and top not in out:
            out.append(top)
    return out


def oracle_extensions(S: SeparationSystem, partial, keep_max=None, limit: int = 8,
                      orientations=None) -> list[frozenset[int]]:
    """Consistent orientations containing ``partial`` (with ``keep_max`` maximal).
    ``orientations`` may carry a precomputed oracle enumeration."""
    P = frozenset(partial)
    out = []
    if orientations is None:
        orientations = oracle_consistent_orientations(S, limit)
    for O in orientations:
        if not P <= O:
            continue
        if keep_max is not None and any(y != keep_max and S.leq(keep_max, y) for y in O):
            continue
        out.append(O)
    return out


def oracle_nested_over_F(lim, family, limit: int = 6) -> frozenset[int] | None:
    """Search every inverse-closed subset of the limit for a closed nested one
    all of whose splitting stars lie in ``family``."""
    S = lim.S
    if len(S) > 2 * limit:
        raise TooLarge("limit too large for the over-F oracle")
    fam = {frozenset(f) for f in family}
    pairs = _pairs(S)
    for k in range(len(pairs) + 1):
        for chosen in combinations(pairs, k):
            tau = frozenset(x for pr in chosen for x in pr)
            if _oracle_over(S, lim, tau, fam):
                return tau
    return None


def _oracle_over(S, lim, tau, fam) -> bool:
    for a in tau:
        for b in tau:
            if not any(S.leq(u, v) for u in (a, S.inv[a]) for v in (b, S.inv[b])):
                return False
    # closure over all points
    for x in range(len(S)):
        if x not in tau and all(any(lim.coords[y][p] == lim.coords[x][p] for y in tau) for p in lim.points):
            return False
    members = sorted(tau)
    pairs = []
    seen = set()
    for x in members:
        if x not in seen:
            seen |= {x, S.inv[x]}
            pairs.append((x,) if x == S.inv[x] else (x, S.inv[x]))
    for O in product(*pairs) if pairs else [()]:
        if not _consistent(S, O):
            continue
        top = oracle_maximal(S, O)
        if all(any(S.leq(x, m) for m in top) for x in O) and top not in fam:
            return False
    return True
