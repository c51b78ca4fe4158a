"""Transfer statements between a limit and its projections.

Each operation either constructs the object a proof promises and re-checks
every claimed property, or raises :class:`~sepsys.core.LemmaViolation` when a
check fails on a concrete instance.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import (
    LemmaViolation,
    SepSysError,
    SeparationSystem,
    bits,
    core_mask,
    down_closure,
    extend_orientation,
    induced,
    is_antisymmetric,
    is_consistent,
    is_nested,
    is_orientation,
    is_star,
    is_trivial_in,
    maximal_elements,
    sigma_minus,
    splits_at,
)
from .inverse import (
    InverseSystem,
    Limit,
    SystemHom,
    closure,
    compatible_families,
    is_closed,
    is_epi,
    is_surjective,
)


class NotTrivialWithWitness(SepSysError):
    pass


class NotEpi(SepSysError):
    pass


class TrivialInput(SepSysError):
    pass


class PreconditionFailed(SepSysError):
    def __init__(self, which: str):
        super().__init__(f"precondition failed: {which}")
        self.which = which


class NotSurjective(SepSysError):
    pass


class NotNested(SepSysError):
    pass


class DoesNotSplit(SepSysError):
    pass


class NotAStar(SepSysError):
    pass


class NotSplitting(SepSysError):
    pass


class Degenerate(SepSysError):
    pass


class CoSmallMember(SepSysError):
    pass


def star_orientation(S: SeparationSystem, sigma: Iterable[int]) -> frozenset[int]:
    """The unique candidate orientation a splitting star can come from."""
    sigma = frozenset(sigma)
    return down_closure(S, sigma) - (S.invert(sigma) - sigma)


def require_splits(S: SeparationSystem, sigma: Iterable[int], exc=DoesNotSplit) -> frozenset[int]:
    sigma = frozenset(sigma)
    O = star_orientation(S, sigma)
    if splits_at(S, O) != sigma:
        raise exc(f"{S.names(sigma)} does not split the system")
    return O


def projected_level(lim: Limit, p: int) -> tuple[SeparationSystem, tuple[int, ...]]:
    """The image of the limit at ``p`` as an induced subsystem of level ``p``."""
    return induced(lim.system.levels[p], {lim.coords[x][p] for x in range(len(lim.S))})


def trivial_in_projection(lim: Limit, x: int, p: int) -> bool:
    """Whether ``x``'s projection is trivial in the projected system at ``p``."""
    Sp = lim.system.levels[p]
    image = {lim.coords[y][p] for y in range(len(lim.S))}
    return is_trivial_in(Sp, lim.coords[x][p], image) is not None


def _points(lim: Limit, points: Iterable[int] | None) -> list[int]:
    return list(lim.points if points is None else points)


def _at_or_above(lim: Limit, p: int, pts: Sequence[int]) -> list[int]:
    P = lim.system.poset
    return [q for q in pts if P.leq(p, q)]


# ---------------------------------------------------------------------------
# triviality and order


def eventual_trivial_projection(lim: Limit, r: int, s: int) -> int:
    """Least point from which on ``s`` witnesses the triviality of ``r``."""
    S = lim.S
    if S.sep(s) == S.sep(r) or not (S.lt(r, s) and S.lt(r, S.inv[s])):
        raise NotTrivialWithWitness(f"{S.labels[s]} does not witness triviality of {S.labels[r]}")

    def good(q: int) -> bool:
        Sq = lim.system.levels[q]
        rq, sq, sqi = lim.coords[r][q], lim.coords[s][q], lim.coords[S.inv[s]][q]
        return Sq.sep(rq) != Sq.sep(sq) and Sq.lt(rq, sq) and Sq.lt(rq, sqi)

    for p in lim.system.poset.ascending:
        if all(good(q) for q in lim.system.poset.at_least(p)):
            return p
    raise LemmaViolation("witness never separates at any level")


def lift_nontrivial(f: SystemHom, rp: int) -> int:
    """A maximal preimage of a nontrivial element; it is nontrivial itself."""
    if not is_epi(f):
        raise NotEpi("bond is not surjective")
    if f.target.is_trivial(rp):
        raise TrivialInput(f"{f.target.labels[rp]} is trivial")
    pre = f.preimage({rp})
    rq = min(maximal_elements(f.source, pre))
    if f.source.is_trivial(rq):
        raise LemmaViolation("maximal preimage of a nontrivial element is trivial")
    return rq


def lift_order(lim: Limit, tau: Iterable[int], r: int, s: int, p: int) -> bool:
    """Lift ``r|p <= s|p`` to ``r <= s`` under the nontriviality hypotheses."""
    S, tau = lim.S, frozenset(tau)
    if r not in tau or s not in tau:
        raise PreconditionFailed("r and s lie in tau")
    if not is_nested(S, tau):
        raise PreconditionFailed("tau is nested")
    Sp = lim.system.levels[p]
    rp, sp = lim.coords[r][p], lim.coords[s][p]
    if Sp.sep(rp) == Sp.sep(sp):
        raise PreconditionFailed("r|p and s|p are distinct separations")
    tau_p = lim.project_set(tau | S.invert(tau), p)
    if is_trivial_in(Sp, rp, tau_p) is not None:
        raise PreconditionFailed("r|p is not trivial in tau|p")
    if is_trivial_in(Sp, Sp.inv[sp], tau_p) is not None:
        raise PreconditionFailed("inverse of s|p is not trivial in tau|p")
    if not Sp.leq(rp, sp):
        raise PreconditionFailed("r|p <= s|p")
    if S.sep(r) == S.sep(s) or not S.leq(r, s):
        raise LemmaViolation("order did not lift to the limit")
    return True


def check_nested_lift(IS: InverseSystem, lim: Limit | None = None) -> bool:
    """If every level is nested the limit is; returns whether the premise held."""
    from .inverse import limit

    lim = lim or limit(IS)
    premise = all(is_nested(S) for S in IS.levels)
    if premise and not is_nested(lim.S):
        raise LemmaViolation("limit of nested levels is not nested")
    return premise


def check_small_lift(lim: Limit, r: int) -> bool:
    premise = all(lim.system.levels[p].is_small(lim.coords[r][p]) for p in lim.points)
    if premise and not lim.S.is_small(r):
        raise LemmaViolation("element with small coordinates is not small")
    return premise


def _is_regular(S: SeparationSystem) -> bool:
    return not any(S.is_small(x) for x in range(len(S)))


@dataclass(frozen=True)
class RegularDecomposition:
    regular: bool
    p0: int | None
    small_witness: int | None


def regular_decomposition(lim: Limit) -> RegularDecomposition:
    S = lim.S
    P = lim.system.poset
    if not any(S.is_small(x) for x in range(len(S))):
        for p in P.ascending:
            if all(_is_regular(projected_level(lim, q)[0]) for q in P.at_least(p)):
                return RegularDecomposition(True, p, None)
        raise LemmaViolation("regular limit has small elements at the top")
    allowed = []
    for p in lim.points:
        Sp = lim.system.levels[p]
        image = {lim.coords[x][p] for x in range(len(S))}
        allowed.append({y for y in image if Sp.is_small(y)})
    fams = compatible_families(lim.system, allowed)
    if not fams:
        raise LemmaViolation("no compatible family of small coordinates")
    w = lim.from_coords(fams[0])
    if w is None or not S.is_small(w):
        raise LemmaViolation("small coordinates did not assemble into a small element")
    return RegularDecomposition(False, None, w)


@dataclass(frozen=True)
class Verdict:
    holds: bool
    points: tuple[int, ...]
    evidence: dict


def is_finitely_trivial(lim: Limit, r: int, points: Iterable[int] | None = None) -> Verdict:
    """For every point ``p`` some ``q >= p`` has ``r|q`` trivial in the
    projected system; quantifiers range over ``points``."""
    pts = _points(lim, points)
    trivial_at = {q for q in pts if trivial_in_projection(lim, r, q)}
    evidence = {}
    holds = True
    for p in pts:
        qs = [q for q in _at_or_above(lim, p, pts) if q in trivial_at]
        if not qs:
            holds = False
            break
        evidence[p] = min(qs)
    if holds:
        for p in pts:
            if not lim.system.levels[p].is_small(lim.coords[r][p]):
                raise LemmaViolation("finitely trivial element has a non-small projection")
    return Verdict(holds, tuple(pts), evidence)


def inconsistent_pairs(S: SeparationSystem) -> list[tuple[int, int]]:
    """Pairs ``(a, b)`` of distinct separations with ``inv(a) <= b``, i.e. ``{a, b}`` inconsistent."""
    out = []
    for a in range(len(S)):
        for b in bits(S.up[S.inv[a]]):
            if S.sep(a) != S.sep(b):
                out.append((a, b))
    return out


def is_finitely_inconsistent(lim: Limit, r: int, points: Iterable[int] | None = None) -> Verdict:
    """For every point some inconsistent limit pair projects onto ``r|p`` twice."""
    pts = _points(lim, points)
    pairs = inconsistent_pairs(lim.S)
    evidence = {}
    holds = True
    for p in pts:
        rp = lim.coords[r][p]
        hit = next(((a, b) for a, b in pairs if lim.coords[a][p] == rp == lim.coords[b][p]), None)
        if hit is None:
            holds = False
            break
        evidence[p] = hit
    if holds:
        for p in pts:
            if not lim.system.levels[p].is_co_small(lim.coords[r][p]):
                raise LemmaViolation("finitely inconsistent element has a non-co-small projection")
    return Verdict(holds, tuple(pts), evidence)


# ---------------------------------------------------------------------------
# splitting stars across levels


@dataclass(frozen=True)
class ProjectedStar:
    pathological: str | None
    p0: int | None
    per_point: dict  # p -> (sigma_p, O_p)


def project_splitting_star(lim: Limit, sigma: Iterable[int], O: Iterable[int] | None = None,
                           points: Iterable[int] | None = None) -> ProjectedStar:
    IS = lim.system
    S = lim.S
    sigma = frozenset(sigma)
    if not is_surjective(IS):
        raise NotSurjective("inverse system is not surjective")
    if not all(is_nested(L) for L in IS.levels):
        raise NotNested("some level is not nested")
    O = frozenset(O) if O is not None else star_orientation(S, sigma)
    if splits_at(S, O) != sigma:
        raise DoesNotSplit("sigma does not split the limit at O")
    if len(sigma) == 1:
        (x,) = sigma
        if S.is_degenerate(x):
            return ProjectedStar("degenerate", None, {})
        if is_finitely_trivial(lim, S.inv[x], points).holds:
            return ProjectedStar("finitely_trivial", None, {})
    per_point = {}
    good = set()
    for p in lim.points:
        Sp = IS.levels[p]
        sig_p = lim.project_set(sigma, p) & core_mask(Sp)
        O_p = lim.project_set(O, p) - Sp.invert(sig_p)
        per_point[p] = (sig_p, O_p)
        if splits_at(Sp, O_p) == sig_p:
            good.add(p)
    for p in IS.poset.ascending:
        if all(q in good for q in IS.poset.at_least(p)):
            return ProjectedStar(None, p, {q: per_point[q] for q in IS.poset.at_least(p)})
    raise LemmaViolation("projected star fails to split even at the top")


@dataclass(frozen=True)
class SanitizeReport:
    case: str  # "antisymmetric" or "inverse_pair"
    core: frozenset
    minus: frozenset
    pair: int | None = None


def sanitize_star(S: SeparationSystem, sigma_circ: Iterable[int], sigma: Iterable[int]) -> SanitizeReport:
    sigma_circ, sigma = frozenset(sigma_circ), frozenset(sigma)
    if not is_star(S, sigma) or not sigma_circ <= sigma:
        raise NotAStar("sigma is not a star containing sigma_circ")
    if not is_nested(S):
        raise NotNested("system is not nested")
    require_splits(S, sigma_circ, NotSplitting)
    minus = sigma_minus(S, sigma)
    if is_antisymmetric(S, sigma):
        in_core = sigma & core_mask(S)
        if not (sigma_circ == in_core == minus):
            raise LemmaViolation("core, essential part and pruned star differ")
        for x in sigma:
            if S.is_trivial(x) and is_trivial_in(S, x, sigma_circ) is None:
                raise LemmaViolation("trivial member has no witness in the splitting star")
        return SanitizeReport("antisymmetric", sigma_circ, minus)
    if len(sigma_circ) != 1:
        raise LemmaViolation("non-antisymmetric star contains a splitting star of size != 1")
    (s,) = sigma_circ
    if minus != {s, S.inv[s]} or s not in core_mask(S):
        raise LemmaViolation("pruned star is not the inverse pair of the splitting singleton")
    return SanitizeReport("inverse_pair", sigma_circ, minus, s)


def _check_degenerate_free_nested(*systems: SeparationSystem) -> None:
    for L in systems:
        if any(L.is_degenerate(x) for x in range(len(L))):
            raise Degenerate("system has a degenerate element")
        if not is_nested(L):
            raise NotNested("system is not nested")


def induced_identity(f: SystemHom, sigma_q: Iterable[int], sigma_p: Iterable[int]) -> bool:
    """``(sigma_q|p) & core(S_p) == (sigma_q|p)^- == sigma_p``."""
    Sp = f.target
    img = f.image(sigma_q)
    return img & core_mask(Sp) == sigma_minus(Sp, img) == frozenset(sigma_p)


def lift_splitting_star(f: SystemHom, sigma_p: Iterable[int]) -> frozenset[int]:
    """A splitting star of the source inducing ``sigma_p`` modulo trivial elements."""
    Sq, Sp = f.source, f.target
    sigma_p = frozenset(sigma_p)
    if not is_epi(f):
        raise NotEpi("map is not surjective")
    _check_degenerate_free_nested(Sq, Sp)
    O_p = require_splits(Sp, sigma_p)
    O_q = f.preimage(O_p)
    co_small = [x for x in sorted(sigma_p) if Sp.is_co_small(x)]
    if not co_small:
        if not (is_orientation(Sq, O_q) and is_consistent(Sq, O_q)):
            raise LemmaViolation("preimage of a consistent orientation is inconsistent")
        O = O_q
    else:
        if len(sigma_p) != 1:
            raise LemmaViolation("star with a co-small member has other members")
        (sp,) = co_small
        M = f.preimage({sp})
        core = core_mask(Sq)
        M_core = M & core
        if not M_core:
            raise LemmaViolation("fiber of the co-small member misses the essential core")
        s1 = min(maximal_elements(Sq, M_core))
        partial = O_q - (M - {s1})
        if any(Sq.lt(s1, y) for y in partial):
            raise LemmaViolation("chosen fiber element is not maximal in the partial orientation")
        O = extend_orientation(Sq, partial, keep_max=s1).orientation
    sigma_q = splits_at(Sq, O)
    if sigma_q is None:
        raise LemmaViolation("lifted orientation does not split")
    if not induced_identity(f, sigma_q, sigma_p):
        raise LemmaViolation("lifted star does not induce the given star")
    return sigma_q


@dataclass(frozen=True)
class LimitLift:
    sigma: frozenset
    orientation: frozenset


def lift_splitting_star_to_limit(lim: Limit, p: int, sigma_p: Iterable[int]) -> LimitLift:
    IS = lim.system
    Sp = IS.levels[p]
    sigma_p = frozenset(sigma_p)
    if not is_surjective(IS):
        raise NotSurjective("inverse system is not surjective")
    _check_degenerate_free_nested(*IS.levels)
    O_p = require_splits(Sp, sigma_p)
    if any(Sp.is_co_small(x) for x in sigma_p):
        raise CoSmallMember("splitting star has a co-small member")
    S = lim.S
    O = frozenset(x for x in range(len(S)) if lim.coords[x][p] in O_p)
    if not is_closed(lim, O):
        raise LemmaViolation("preimage orientation is not closed")
    sigma = splits_at(S, O)
    if sigma is None:
        raise LemmaViolation("preimage orientation does not split the limit")
    img = lim.project_set(sigma, p)
    if not (img & core_mask(Sp) == sigma_minus(Sp, img) == sigma_p):
        raise LemmaViolation("limit star does not induce the given star")
    return LimitLift(sigma, O)


@dataclass(frozen=True)
class StarClosure:
    closure: frozenset
    is_star: bool
    minus_matches: bool


def closure_of_splitting_star(lim: Limit, sigma_circ: Iterable[int],
                              points: Iterable[int] | None = None) -> StarClosure:
    S = lim.S
    sigma_circ = frozenset(sigma_circ)
    if not is_nested(S):
        raise NotNested("limit is not nested")
    if any(S.is_degenerate(x) for x in range(len(S))):
        raise Degenerate("limit has degenerate elements")
    require_splits(S, sigma_circ)
    sigma = closure(lim, sigma_circ, points)
    star = is_star(S, sigma)
    matches = star and sigma_minus(S, sigma) == sigma_circ
    # with probe points the closure is a truncation heuristic, so only report
    if points is None and not (star and matches):
        raise LemmaViolation("closure of a splitting star is not a star pruning back to it")
    return StarClosure(sigma, star, matches)
