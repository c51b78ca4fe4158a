"""Nested subsets over a family of stars, level by level and in the limit.

Stars and families are index sets. A family ``F`` of stars of the limit is
projected to every level; stars there are compared after deleting their
members that are trivial inside the star itself (``sigma_minus``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

from .core import (
    Impossible,
    LemmaViolation,
    SepSysError,
    SeparationSystem,
    bits,
    core_mask,
    induced,
    is_nested,
    is_star,
    sigma_minus,
    splitting_subsets,
    to_mask,
)
from .inverse import (
    InverseSystem,
    Limit,
    SetLevel,
    is_closed,
    limit,
    make_inverse_system,
    make_poset,
)
from .profinite import (
    Degenerate,
    PreconditionFailed,
    inconsistent_pairs,
    is_finitely_inconsistent,
    is_finitely_trivial,
)


class LevelTooLarge(SepSysError):
    pass


class UniverseTooLarge(SepSysError):
    pass


class NotEssentiallyClosed(SepSysError):
    def __init__(self, condition: int, star):
        super().__init__(f"condition ({condition}) fails for {sorted(star)}")
        self.condition = condition
        self.star = frozenset(star)


POWER_LIMIT = 16
STAR_LIMIT = 16


# ---------------------------------------------------------------------------
# power sets


def power_system(IS: InverseSystem) -> InverseSystem:
    """Levels are all subsets (as bitmasks) of the original levels; bonds map a
    subset to its image."""
    for L in IS.levels:
        if len(L) > POWER_LIMIT:
            raise LevelTooLarge(f"level with {len(L)} elements exceeds {POWER_LIMIT}")
    levels = [SetLevel(tuple(range(1 << len(L)))) for L in IS.levels]
    P = IS.poset
    bonds = {}
    for q, p in P.covers:
        m = IS.bonds[(q, p)]
        bonds[(P.points[q], P.points[p])] = tuple(to_mask(m[x] for x in bits(mask))
                                                  for mask in range(1 << len(IS.levels[q])))
    return make_inverse_system(P, levels, bonds)


def power_limit_bijection(lim: Limit) -> bool:
    """``sigma -> (sigma|p)_p`` is a bijection from subsets of the limit onto
    compatible families of the power system."""
    PS = power_system(lim.system)
    n = len(lim.S)
    top = PS.top
    images = set()
    for mask in range(1 << n):
        fam = tuple(to_mask(lim.coords[x][p] for x in bits(mask)) for p in lim.points)
        for (q, p), m in PS.bonds.items():
            if m[fam[q]] != fam[p]:
                return False
        images.add(fam)
    families = {tuple(PS.f(top, p)[t] for p in lim.points) for t in range(len(PS.levels[top]))}
    return len(images) == 1 << n and images == families


# ---------------------------------------------------------------------------
# star families


@dataclass(frozen=True, eq=False)
class StarFamily:
    lim: Limit
    stars: tuple[frozenset[int], ...]

    def restrict(self, p: int) -> set[frozenset[int]]:
        return {self.lim.project_set(s, p) for s in self.stars}

    def __contains__(self, sigma) -> bool:
        return frozenset(sigma) in set(self.stars)


def star_family(lim: Limit, stars: Iterable[Iterable[int]]) -> StarFamily:
    out = []
    for s in stars:
        s = frozenset(s)
        if not is_star(lim.S, s):
            raise SepSysError(f"{lim.S.names(sorted(s))} is not a star")
        if s not in out:
            out.append(s)
    return StarFamily(lim, tuple(out))


def all_stars(S: SeparationSystem, limit: int = STAR_LIMIT, containing: int | None = None) -> list[frozenset[int]]:
    """Every star of ``S`` (the empty one included)."""
    if len(S) > 2 * limit:
        raise UniverseTooLarge(f"{len(S)} elements is too many to enumerate stars")
    cand = [x for x in range(len(S)) if not S.is_degenerate(x)]
    ok = {x: {y for y in cand if y != x and S.leq(x, S.inv[y]) and S.leq(y, S.inv[x])} for x in cand}
    out = []

    def rec(chosen: list[int], pool: list[int]) -> None:
        out.append(frozenset(chosen))
        for i, y in enumerate(pool):
            rec(chosen + [y], [z for z in pool[i + 1:] if z in ok[y]])

    if containing is None:
        rec([], cand)
    elif containing in ok:
        rec([containing], [z for z in cand if z in ok[containing]])
    return out


# ---------------------------------------------------------------------------
# augmented families


def collapse_points(lim: Limit, p: int) -> set[int]:
    """Elements of level ``p`` onto which some inconsistent limit pair projects."""
    return {lim.coords[a][p] for a, b in inconsistent_pairs(lim.S) if lim.coords[a][p] == lim.coords[b][p]}


def compute_Lp(lim: Limit, p: int) -> list[frozenset[int]]:
    """Stars of level ``p`` whose non-trivial part is a single collapse point."""
    Sp = lim.system.levels[p]
    out = []
    for r in sorted(collapse_points(lim, p)):
        for sigma in all_stars(Sp, containing=r):
            if sigma_minus(Sp, sigma) == {r} and sigma not in out:
                out.append(sigma)
    return out


@dataclass(frozen=True)
class AugmentedFamily:
    level: SeparationSystem
    base: frozenset[frozenset[int]]
    lp: frozenset[frozenset[int]]

    @property
    def stars(self) -> frozenset[frozenset[int]]:
        return self.base | self.lp

    @property
    def minus(self) -> dict[frozenset[int], frozenset[int]]:
        return {s: sigma_minus(self.level, s) for s in self.stars}


def augmented_family(F: StarFamily, p: int) -> AugmentedFamily:
    return AugmentedFamily(F.lim.system.levels[p], frozenset(F.restrict(p)), frozenset(compute_Lp(F.lim, p)))


def splitting_stars_of(S: SeparationSystem, tau: Iterable[int]) -> list[frozenset[int]]:
    """Splitting stars of the subsystem on ``tau``, as subsets of ``S``."""
    tau = sorted(set(tau))
    if not tau:
        return [frozenset()]
    sub, keep = induced(S, tau)
    return [frozenset(keep[x] for x in sigma) for sigma in splitting_subsets(sub)]


def essentially_over(S: SeparationSystem, tau: Iterable[int], Fp: AugmentedFamily) -> frozenset[int] | None:
    """``None`` if every splitting star of ``tau`` matches a member of ``Fp``
    up to trivial members, else the first failing star."""
    tau = frozenset(tau)
    if not is_nested(S, tau):
        raise PreconditionFailed("tau must be nested")
    minus = list(Fp.minus.values())
    for sigma in splitting_stars_of(S, tau):
        if sigma in minus:
            continue
        if len(sigma) == 1:
            (s,) = sigma
            if frozenset({s, S.inv[s]}) in minus:
                continue
        return sigma
    return None


# ---------------------------------------------------------------------------
# essentially closed


@dataclass(frozen=True)
class ClosedReport:
    holds: bool
    condition: int | None = None
    star: frozenset[int] | None = None


def _cond1_matches(F: StarFamily, sigma: frozenset[int], p: int) -> bool:
    lim = F.lim
    Sp = lim.system.levels[p]
    target = sigma_minus(Sp, lim.project_set(sigma, p))
    single = None
    if len(sigma) == 1:
        (s,) = sigma
        single = frozenset({lim.coords[s][p], Sp.inv[lim.coords[s][p]]})
    for t in F.stars:
        tm = sigma_minus(Sp, lim.project_set(t, p))
        if tm == target or (single is not None and tm == single):
            return True
    return False


def essentially_closed(F: StarFamily, points: Iterable[int] | None = None) -> ClosedReport:
    """Check the three closure conditions; condition (1) ranges over stars of
    the limit."""
    lim = F.lim
    S = lim.S
    pts = list(lim.points if points is None else points)
    members = set(F.stars)
    for sigma in all_stars(S):
        if sigma in members:
            continue
        if all(_cond1_matches(F, sigma, p) for p in pts):
            return ClosedReport(False, 1, sigma)
    for r in range(len(S)):
        if S.is_degenerate(r):
            continue
        if frozenset({S.inv[r]}) not in members and is_finitely_inconsistent(lim, S.inv[r], pts).holds:
            return ClosedReport(False, 2, frozenset({S.inv[r]}))
        if frozenset({S.inv[r]}) not in members and is_finitely_trivial(lim, r, pts).holds:
            return ClosedReport(False, 3, frozenset({S.inv[r]}))
    return ClosedReport(True)


# ---------------------------------------------------------------------------
# single-step transfer lemmas


def check_iterated_minus(lim: Limit, sigma: Iterable[int], p: int, q: int) -> bool:
    """``(sigma|p)^- == ((sigma|q)^- | p)^-`` for ``p <= q``."""
    sigma = frozenset(sigma)
    if not lim.system.poset.leq(p, q):
        raise PreconditionFailed("p must lie below q")
    if not is_star(lim.S, sigma):
        raise PreconditionFailed("sigma must be a star")
    Sp, Sq = lim.system.levels[p], lim.system.levels[q]
    lhs = sigma_minus(Sp, lim.project_set(sigma, p))
    mid = sigma_minus(Sq, lim.project_set(sigma, q))
    f = lim.system.f(q, p)
    rhs = sigma_minus(Sp, {f[x] for x in mid})
    if lhs != rhs:
        raise LemmaViolation(f"iterated minus differs at {lim.system.poset.points[p]!r}")
    return True


@dataclass(frozen=True)
class CofinalVerdict:
    r: int
    finitely_inconsistent: bool


def check_cofinal_Lp(lim: Limit, tau: Iterable[int], sigma: Iterable[int], cofinal: Iterable[int]) -> CofinalVerdict:
    S = lim.S
    tau, sigma = frozenset(tau), frozenset(sigma)
    pts = list(cofinal)
    if sigma not in splitting_stars_of(S, tau):
        raise PreconditionFailed("sigma must split tau")
    P = lim.system.poset
    if not all(any(P.leq(p, q) for q in pts) for p in lim.points):
        raise PreconditionFailed("points must be cofinal")
    for p in pts:
        Sp = lim.system.levels[p]
        m = sigma_minus(Sp, lim.project_set(sigma, p))
        if len(m) != 1 or next(iter(m)) not in collapse_points(lim, p):
            raise PreconditionFailed("(sigma|p)^- must be a single collapse point")
    if len(sigma) != 1:
        raise LemmaViolation("collapse on a cofinal set but sigma is not a singleton")
    (r,) = sigma
    v = is_finitely_inconsistent(lim, r)
    if not v.holds:
        raise LemmaViolation("singleton is not finitely inconsistent")
    return CofinalVerdict(r, True)


def transfer_tau(F: StarFamily, q: int, p: int, tau_q: Iterable[int]) -> frozenset[int]:
    """Project a nested set that is essentially over ``F_q`` down to ``p``."""
    lim = F.lim
    Sq, Sp = lim.system.levels[q], lim.system.levels[p]
    if any(Sp.is_degenerate(x) for x in range(len(Sp))) or any(Sq.is_degenerate(x) for x in range(len(Sq))):
        raise Degenerate("levels must be free of degenerate elements")
    tau_q = frozenset(tau_q)
    if not is_nested(Sq, tau_q):
        raise PreconditionFailed("tau_q must be nested")
    if essentially_over(Sq, tau_q, augmented_family(F, q)) is not None:
        raise PreconditionFailed("tau_q must be essentially over F_q")
    f = lim.system.f(q, p)
    tau_p = frozenset(f[x] for x in tau_q)
    if not is_nested(Sp, tau_p):
        raise LemmaViolation("projection of a nested set is not nested")
    bad = essentially_over(Sp, tau_p, augmented_family(F, p))
    if bad is not None:
        raise LemmaViolation(f"projected set fails at star {Sp.names(sorted(bad))}")
    return tau_p


# ---------------------------------------------------------------------------
# the construction


def upper_subsystem(IS: InverseSystem, p0: int) -> InverseSystem:
    """Restriction of ``IS`` to the points ``>= p0``."""
    P = IS.poset
    keep = [p for p in range(len(P)) if P.leq(p0, p)]
    labels = [P.points[p] for p in keep]
    leq = [(P.points[a], P.points[b]) for a in keep for b in keep if a != b and P.leq(a, b)]
    Q = make_poset(labels, leq)
    bonds = {}
    for qi, pi in Q.covers:
        q, p = P.idx(Q.points[qi]), P.idx(Q.points[pi])
        bonds[(Q.points[qi], Q.points[pi])] = IS.f(q, p)
    return make_inverse_system(Q, [IS.levels[p] for p in keep], bonds, check=False)


def prune_degenerate(IS: InverseSystem) -> tuple[InverseSystem, object]:
    """Pass to points above the lowest ``p0`` with no degenerate elements at or above it."""
    P = IS.poset

    def clean(p: int) -> bool:
        L = IS.levels[p]
        return not any(L.is_degenerate(x) for x in range(len(L)))

    good = [p for p in P.ascending if all(clean(q) for q in P.at_least(p))]
    if not good:
        raise Degenerate("limit has degenerate elements")
    best = max(good, key=lambda p: (len(P.at_least(p)), -P.ascending.index(p)))
    if len(P.at_least(best)) == len(P):
        return IS, P.points[best]
    return upper_subsystem(IS, best), P.points[best]


def nested_subsets(S: SeparationSystem, limit: int = 8) -> list[frozenset[int]]:
    """All nonempty inverse-closed nested subsets, smallest first."""
    seps = list(S.separations)
    if len(seps) > limit:
        raise UniverseTooLarge(f"{len(seps)} separations is too many to enumerate nested subsets")
    out = []
    for k in range(1, len(seps) + 1):
        for chosen in combinations(seps, k):
            tau = frozenset(x for s in chosen for x in (s, S.inv[s]))
            if is_nested(S, tau):
                out.append(tau)
    return out


@dataclass(frozen=True)
class CompactnessResult:
    tau: frozenset[int]
    family: dict  # point label -> tau_p
    branches: dict  # splitting star -> branch name
    p0: object
    system: InverseSystem = field(repr=False)


def over_F(S: SeparationSystem, tau: Iterable[int], F: Iterable[Iterable[int]]) -> frozenset[int] | None:
    """First splitting star of ``tau`` outside ``F``, or ``None``."""
    fam = {frozenset(s) for s in F}
    for sigma in splitting_stars_of(S, tau):
        if sigma not in fam:
            return sigma
    return None


def _branch(lim: Limit, F: StarFamily, tau: frozenset[int], sigma: frozenset[int]) -> str:
    """Which case of the argument puts ``sigma`` into ``F`` (decided at the top point)."""
    S = lim.S
    if len(sigma) == 1:
        (x,) = sigma
        if is_finitely_trivial(lim, S.inv[x]).holds:
            return "finitely_trivial"
    top = lim.system.top
    Sp = lim.system.levels[top]
    sub, keep = induced(S, sorted(tau))
    core = {keep[x] for x in core_mask(sub)}
    circ = frozenset(lim.coords[x][top] for x in sigma if x in core)
    in_base = [t for t in F.restrict(top) if sigma_minus(Sp, t) == circ]
    if in_base:
        return "condition1"
    if any(sigma_minus(Sp, t) == circ for t in compute_Lp(lim, top)):
        return "finitely_inconsistent"
    if len(circ) == 1:
        (s,) = circ
        if any(sigma_minus(Sp, t) == {s, Sp.inv[s]} for t in F.restrict(top)):
            return "singleton_pair"
    return "unmatched"


def compactness_construct(IS: InverseSystem, stars: Iterable[Iterable[int]],
                          candidates: Mapping | None = None) -> CompactnessResult:
    """A closed nested subset of the limit all of whose splitting stars lie in ``stars``.

    ``candidates`` maps point labels to lists of nested subsets of that level;
    by default every nonempty nested subset is a candidate. Raises
    :class:`Impossible` (reason ``no_candidate``, element = point index) when
    some level has nothing essentially over its augmented family.
    """
    lim_full = limit(IS)
    S = lim_full.S
    if any(S.is_degenerate(x) for x in range(len(S))):
        raise Degenerate("limit has degenerate elements")
    sub, p0 = prune_degenerate(IS)
    lim = limit(sub)
    F = star_family(lim, stars)
    rep = essentially_closed(F)
    if not rep.holds:
        raise NotEssentiallyClosed(rep.condition, rep.star)
    P = sub.poset
    aug = {p: augmented_family(F, p) for p in lim.points}

    # the empty branch
    for p in lim.points:
        if frozenset() in aug[p].stars:
            if frozenset() not in F:
                raise LemmaViolation("empty star in F|p but not in F")
            return CompactnessResult(frozenset(), {P.points[q]: frozenset() for q in lim.points},
                                     {frozenset(): "empty"}, p0, sub)

    T = {}
    for p in lim.points:
        L = sub.levels[p]
        if candidates is not None and P.points[p] in candidates:
            pool = [frozenset(L.element(x) if isinstance(x, str) else x for x in c)
                    for c in candidates[P.points[p]]]
        else:
            pool = nested_subsets(L)
        T[p] = [t for t in pool if t and is_nested(L, t) and essentially_over(L, t, aug[p]) is None]
        if not T[p]:
            raise Impossible("no_candidate", p)

    top = sub.top
    chosen = None
    for t_top in T[top]:
        fam = {p: frozenset(sub.f(top, p)[x] for x in t_top) for p in lim.points}
        for p in lim.points:
            L = sub.levels[p]
            if not is_nested(L, fam[p]) or essentially_over(L, fam[p], aug[p]) is not None:
                raise LemmaViolation(f"projection of a candidate fails at {P.points[p]!r}")
        if all(fam[p] in T[p] for p in lim.points):
            chosen = fam
            break
        chosen = chosen or fam
    tau = frozenset(x for x in range(len(S)) if all(lim.coords[x][p] in chosen[p] for p in lim.points))
    if not is_closed(lim, tau) or not is_nested(S, tau):
        raise LemmaViolation("limit of the family is not a closed nested set")
    branches = {}
    for sigma in splitting_stars_of(S, tau):
        if sigma not in F:
            raise LemmaViolation(f"splitting star {S.names(sorted(sigma))} is not in F")
        branches[sigma] = _branch(lim, F, tau, sigma)
    return CompactnessResult(tau, {P.points[p]: chosen[p] for p in lim.points}, branches, p0, sub)


# ---------------------------------------------------------------------------
# tree sets


@dataclass(frozen=True)
class TreeSetReport:
    core: frozenset[int]
    stars_preserved: bool
    closed: bool | None


def extract_tree_set(S: SeparationSystem, tau: Iterable[int], lim: Limit | None = None,
                     points: Iterable[int] | None = None) -> TreeSetReport:
    """Essential core of ``tau``; its splitting stars must also split ``tau``.
    Closedness is reported (against ``lim`` if given)."""
    tau = frozenset(tau)
    if not is_nested(S, tau):
        raise PreconditionFailed("tau must be nested")
    sub, keep = induced(S, sorted(tau))
    core = frozenset(keep[x] for x in core_mask(sub))
    outer = set(splitting_stars_of(S, tau))
    preserved = all(sigma in outer for sigma in splitting_stars_of(S, core))
    if not preserved:
        raise LemmaViolation("a splitting star of the core does not split tau")
    closed = None if lim is None else is_closed(lim, core, points)
    return TreeSetReport(core, preserved, closed)
