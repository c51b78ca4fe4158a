"""Named property suites over seeded random instances.

A suite pairs an instance generator ``(seed, size) -> instance`` with a
checker that runs every applicable operation on the instance and records the
outcome in a :class:`Tally`. Operations re-verify their own conclusions and
raise :class:`~sepsys.core.LemmaViolation` on failure; the checkers add
comparisons against the brute-force oracles. The same registry backs the
``check`` and ``search`` commands and the test suite.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Callable

from . import compactness as cpt
from . import core, normality, profinite
from .core import Impossible, InconsistentInput, LemmaViolation, SepSysError, SeparationSystem
from .examples import CERTIFIERS, MAX_DEPTH, certify, schematic
from .inverse import InverseSystem, Limit, is_closed, limit
from .oracles import (
    oracle_consistent_orientations,
    oracle_extensions,
    oracle_nested_over_F,
    oracle_splitting,
)
from .testkit import (
    BadParams,
    edge_tree_set,
    node_star,
    plant_chain,
    random_contraction_chain,
    random_system,
    random_tree,
)

# Exceptions meaning "the statement does not apply to this input".
NOT_APPLICABLE = (
    profinite.PreconditionFailed,
    profinite.NotEpi,
    profinite.TrivialInput,
    profinite.NotSurjective,
    profinite.NotNested,
    profinite.DoesNotSplit,
    profinite.NotAStar,
    profinite.NotSplitting,
    profinite.Degenerate,
    profinite.CoSmallMember,
    profinite.NotTrivialWithWitness,
    normality.NoGreatest,
    cpt.NotEssentiallyClosed,
    cpt.UniverseTooLarge,
    cpt.LevelTooLarge,
)


class UnknownSuite(SepSysError):
    pass


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 0
    count: int = 100
    size: int | None = None


@dataclass
class Tally:
    checks: int = 0
    skipped: int = 0
    violations: list[str] = field(default_factory=list)
    findings: list[dict] = field(default_factory=list)

    def run(self, label: str, fn: Callable, *args, **kwargs) -> Any:
        """Call ``fn``; a precondition failure counts as skipped, anything
        else raised counts as a violation."""
        try:
            out = fn(*args, **kwargs)
        except NOT_APPLICABLE:
            self.skipped += 1
            return None
        except LemmaViolation as exc:
            self.violations.append(f"{label}: {exc}")
            return None
        except SepSysError as exc:
            self.violations.append(f"{label}: unexpected {type(exc).__name__}: {exc}")
            return None
        self.checks += 1
        return out

    def expect(self, ok: bool, label: str) -> bool:
        self.checks += 1
        if not ok:
            self.violations.append(label)
        return ok


@dataclass
class InstanceResult:
    seed: int
    size: int
    checks: int
    skipped: int
    violations: list[str]
    findings: list[dict]


@dataclass
class SuiteReport:
    suite: str
    config: SuiteConfig
    instances: list[InstanceResult]
    seconds: float

    @property
    def checks(self) -> int:
        return sum(r.checks for r in self.instances)

    @property
    def skipped(self) -> int:
        return sum(r.skipped for r in self.instances)

    @property
    def violations(self) -> list[tuple[int, str]]:
        return [(r.seed, v) for r in self.instances for v in r.violations]

    @property
    def ok(self) -> bool:
        return not self.violations

    def findings(self) -> list[dict]:
        return [dict(f, seed=r.seed) for r in self.instances for f in r.findings]

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.config.seed,
            "count": self.config.count,
            "size": self.config.size,
            "instances": len(self.instances),
            "checks": self.checks,
            "skipped": self.skipped,
            "violations": [{"seed": s, "detail": v} for s, v in self.violations],
            "findings": self.findings(),
            "ok": self.ok,
            "seconds": round(self.seconds, 3),
        }

    def summary(self) -> str:
        status = "ok" if self.ok else f"{len(self.violations)} violation(s)"
        return (f"{self.suite}: {len(self.instances)} instances, {self.checks} checks, "
                f"{self.skipped} not applicable, {status}")


@dataclass(frozen=True)
class Suite:
    name: str
    description: str
    generate: Callable[[int, int], Any]
    check: Callable[[Any, Tally], None]
    default_size: int
    default_count: int
    max_size: int
    input_kind: str | None = None  # "system" or "inverse" if the checker accepts files
    seeded: bool = True


# ---------------------------------------------------------------------------
# generators


def gen_tree_system(seed: int, size: int) -> SeparationSystem:
    """Edge tree set of a random tree with ``1..size`` nodes."""
    rng = random.Random(seed)
    return edge_tree_set(random_tree(rng, rng.randint(1, size)))


def gen_small_system(seed: int, size: int) -> SeparationSystem:
    rng = random.Random(seed)
    n = rng.randint(1, size)
    return random_system(rng, n, density=rng.choice([0.1, 0.25, 0.4]),
                         degenerate_rate=rng.choice([0.0, 0.0, 0.2]))


def gen_chain(seed: int, size: int, max_levels: int = 4) -> InverseSystem:
    """A contraction chain of ``1..max_levels`` levels whose top tree has
    ``1..size`` edges; every other seed plants trivial elements."""
    rng = random.Random(seed)
    cc = random_contraction_chain(seed, rng.randint(1, max_levels), rng.randint(1, size))
    return plant_chain(cc.system, seed % 2 * rng.randint(1, 2))


def gen_plain_chain(seed: int, size: int) -> InverseSystem:
    rng = random.Random(seed)
    return random_contraction_chain(seed, rng.randint(1, 4), rng.randint(1, size)).system


def schematic_truncations(max_seps: int) -> list[tuple[str, int]]:
    """Every (chain, depth >= 2) whose truncation has at most ``max_seps``
    separations at the top."""
    out = []
    for name in normality_chains():
        depth = 2
        while True:
            IS = normality.truncate(schematic(name), depth)
            if len(IS.levels[IS.top].separations) > max_seps:
                break
            out.append((name, depth))
            depth += 1
    return out


def gen_schematic_or_chain(seed: int, size: int) -> InverseSystem:
    """Every fourth seed a truncation of a registered chain, otherwise a
    (possibly planted) contraction chain; at most ``size`` separations."""
    if seed % 4 == 0:
        options = schematic_truncations(size)
        if options:
            name, depth = options[seed // 4 % len(options)]
            return normality.truncate(schematic(name), depth)
    while True:
        IS = gen_chain(seed, size)
        if len(IS.levels[IS.top].separations) <= size:
            return IS
        seed += 1_000_003


def normality_chains() -> list[str]:
    return ["trivialproj", "splittingnotclosed", "splittingnotclosed2", "ray"]


# ---------------------------------------------------------------------------
# core suites


def check_tree_bijection(S: SeparationSystem, t: Tally, tree=None) -> None:
    orients = core.consistent_orientations(S)
    n_nodes = len(tree.nodes) if tree is not None else len(S.separations) + 1
    t.expect(len(orients) == n_nodes, f"{len(orients)} consistent orientations for {n_nodes} nodes")
    stars = set(core.splitting_subsets(S))
    if tree is not None:
        expected = {node_star(tree, S, v) for v in tree.nodes}
        t.expect(stars == expected, "splitting subsets differ from node stars")
    if len(S.separations) <= 8:
        t.expect(set(orients) == set(oracle_consistent_orientations(S)), "orientations differ from oracle")
        t.expect(stars == set(oracle_splitting(S)), "splitting subsets differ from oracle")


def _tree_instance(seed: int, size: int):
    rng = random.Random(seed)
    T = random_tree(rng, rng.randint(1, size))
    return T, edge_tree_set(T)


def partial_orientations(S: SeparationSystem) -> list[frozenset[int]]:
    """Every set with at most one orientation of each separation."""
    options = [(None,) + ((s,) if S.inv[s] == s else (s, S.inv[s])) for s in S.separations]
    return [frozenset(x for x in combo if x is not None) for combo in product(*options)]


def check_extension(S: SeparationSystem, t: Tally, sample: int | None = None, rng=None) -> None:
    """Compare extend_orientation with the oracle on partial orientations
    (all of them, or ``sample`` random ones) and every admissible ``keep_max``."""
    orients = oracle_consistent_orientations(S)
    partials = partial_orientations(S)
    if sample is not None and len(partials) > sample:
        partials = (rng or random.Random(0)).sample(partials, sample)
    nested = core.is_nested(S)
    for P in partials:
        if not core.is_consistent(S, P):
            continue
        for keep in [None] + sorted(core.maximal_elements(S, P)):
            brute = oracle_extensions(S, P, keep, orientations=orients)
            tag = f"P={S.names(P)} keep_max={None if keep is None else S.labels[keep]}"
            try:
                ext = core.extend_orientation(S, P, keep)
            except Impossible as exc:
                t.expect(not brute, f"{tag}: Impossible({exc.reason}) but oracle extends")
                if exc.reason == "co_trivial_member":
                    t.expect(any(S.is_co_trivial(x) for x in P), f"{tag}: wrong reason")
                else:
                    t.expect(keep is not None and S.is_trivial(keep), f"{tag}: wrong reason")
                continue
            except (LemmaViolation, InconsistentInput) as exc:
                t.violations.append(f"{tag}: {type(exc).__name__}: {exc}")
                continue
            t.expect(ext.orientation in brute, f"{tag}: result is not a valid extension")
            if keep is None:
                t.expect(not any(S.is_co_trivial(x) for x in P), f"{tag}: clause (i) mismatch")
            else:
                t.expect(not S.is_trivial(keep), f"{tag}: clause (ii) mismatch")
                if nested:
                    t.expect(ext.unique is True and len(brute) == 1, f"{tag}: clause (iii) uniqueness")


def check_system_invariants(S: SeparationSystem, t: Tally) -> None:
    n = len(S)
    t.expect(all(S.leq(x, y) == S.leq(S.inv[y], S.inv[x]) for x in range(n) for y in range(n)),
             "involution does not reverse the order")
    core_sys, _ = core.essential_core(S)
    again, _ = core.essential_core(core_sys)
    t.expect(len(again) == len(core_sys), "essential core is not idempotent")
    for sigma in cpt.all_stars(S, limit=12):
        t.expect(core.is_consistent(S, sigma), f"star {S.names(sigma)} is inconsistent")
        m = t.run("sigma_minus", core.sigma_minus, S, sigma)
        if m is not None:
            t.expect(core.sigma_minus(S, m) == m, "sigma_minus is not idempotent")
    if core.is_nested(S) and not any(S.is_degenerate(x) for x in range(n)):
        for sigma in core.splitting_subsets(S):
            t.expect(not sigma or core.is_proper_star(S, sigma), f"{S.names(sigma)} is not a proper star")
            t.expect(not any(S.is_trivial(x) or S.is_co_trivial(x) for x in sigma),
                     f"{S.names(sigma)} has a trivial or co-trivial member")


# ---------------------------------------------------------------------------
# transfer suites on inverse systems


def _limit(IS: InverseSystem) -> Limit:
    return limit(IS)


def check_nested_lift(IS: InverseSystem, t: Tally) -> None:
    premise = t.run("nested-lift", profinite.check_nested_lift, IS)
    if premise:
        t.expect(core.is_nested(_limit(IS).S), "limit not nested")


def check_small_lift(IS: InverseSystem, t: Tally) -> None:
    lim = _limit(IS)
    for x in range(len(lim.S)):
        t.run(f"small-lift {lim.S.labels[x]}", profinite.check_small_lift, lim, x)


def check_lift_nontrivial(IS: InverseSystem, t: Tally) -> None:
    for q, p in IS.poset.covers:
        f = IS.hom(q, p)
        for rp in range(len(f.target)):
            if f.target.is_trivial(rp):
                continue
            rq = t.run("lift-nontrivial", profinite.lift_nontrivial, f, rp)
            if rq is not None:
                t.expect(f.map[rq] == rp and not f.source.is_trivial(rq), "lifted element is wrong")


def check_lift_order(IS: InverseSystem, t: Tally) -> None:
    lim = _limit(IS)
    S = lim.S
    if not core.is_nested(S):
        return
    tau = frozenset(range(len(S)))
    for r in range(len(S)):
        for s in range(len(S)):
            for p in lim.points:
                t.run("lift-order", profinite.lift_order, lim, tau, r, s, p)


def check_eventual_trivial(IS: InverseSystem, t: Tally) -> None:
    lim = _limit(IS)
    S = lim.S
    for x in range(len(S)):
        for w in core.trivial_witnesses(S, x):
            p0 = t.run("eventual-trivial-projection", profinite.eventual_trivial_projection, lim, x, w)
            if p0 is not None:
                t.expect(profinite.trivial_in_projection(lim, x, IS.top), "trivial element not trivial at top")


def check_regular(IS: InverseSystem, t: Tally) -> None:
    lim = _limit(IS)
    rep = t.run("regular-decomposition", profinite.regular_decomposition, lim)
    if rep is not None:
        t.expect(rep.regular == core.is_regular(lim.S), "regularity verdict disagrees with the limit")


def check_finitely(IS: InverseSystem, t: Tally) -> None:
    lim = _limit(IS)
    for x in range(len(lim.S)):
        v = t.run("finitely-trivial", profinite.is_finitely_trivial, lim, x)
        if v is not None and v.holds:
            t.expect(lim.S.is_small(x), "finitely trivial element is not small")
        w = t.run("finitely-inconsistent", profinite.is_finitely_inconsistent, lim, x)
        if w is not None and w.holds:
            t.expect(lim.S.is_co_small(x), "finitely inconsistent element is not co-small")


def check_project_splitting_star(IS: InverseSystem, t: Tally) -> None:
    lim = _limit(IS)
    for sigma in core.splitting_subsets(lim.S):
        ps = t.run("project-splitting-star", profinite.project_splitting_star, lim, sigma)
        if ps is None or ps.pathological:
            continue
        for p, (sig_p, O_p) in ps.per_point.items():
            t.expect(core.splits_at(IS.levels[p], O_p) == sig_p, "projected orientation does not split")
        if len(sigma) == 1:
            (r,) = sigma
            t.expect(all(not IS.levels[p].is_trivial(lim.coords[r][p]) for p in lim.points),
                     "splitting singleton has a trivial projection")


def check_sanitize_star(IS: InverseSystem, t: Tally) -> None:
    for S in IS.levels:
        if not core.is_nested(S):
            continue
        trivial = [x for x in range(len(S)) if S.is_trivial(x)]
        for sc in core.splitting_subsets(S):
            variants = [sc]
            variants += [sc | {x} for x in trivial if x not in sc and core.is_trivial_in(S, x, sc) is not None]
            if len(sc) == 1:
                (s,) = sc
                variants.append(sc | {S.inv[s]})
            for sigma in variants:
                if not core.is_star(S, sigma):
                    continue
                rep = t.run("sanitize-star", profinite.sanitize_star, S, sc, sigma)
                if rep is not None:
                    want = "antisymmetric" if core.is_antisymmetric(S, sigma) else "inverse_pair"
                    t.expect(rep.case == want, "wrong case")


def check_lift_splitting_star(IS: InverseSystem, t: Tally) -> None:
    for q, p in IS.poset.covers:
        f = IS.hom(q, p)
        for sigma_p in core.splitting_subsets(f.target):
            sq = t.run("lift-splitting-star", profinite.lift_splitting_star, f, sigma_p)
            if sq is None:
                continue
            O = profinite.star_orientation(f.source, sq)
            t.expect(core.splits_at(f.source, O) == sq, "lifted star does not split")
            t.expect(profinite.induced_identity(f, sq, sigma_p), "lifted star does not induce the star below")


def check_lift_to_limit(IS: InverseSystem, t: Tally) -> None:
    lim = _limit(IS)
    for p in lim.points:
        for sigma_p in core.splitting_subsets(IS.levels[p]):
            res = t.run("lift-splitting-star-to-limit", profinite.lift_splitting_star_to_limit, lim, p, sigma_p)
            if res is not None:
                t.expect(core.splits_at(lim.S, res.orientation) == res.sigma, "lift does not split the limit")
                t.expect(is_closed(lim, res.orientation), "lifted orientation is not closed")


def check_iterated_minus(IS: InverseSystem, t: Tally) -> None:
    lim = _limit(IS)
    P = IS.poset
    for sigma in core.splitting_subsets(lim.S):
        if not core.is_star(lim.S, sigma):
            continue
        for p in lim.points:
            for q in P.at_least(p):
                t.run("iterated-minus", cpt.check_iterated_minus, lim, sigma, p, q)


def check_closure_of_star(IS: InverseSystem, t: Tally) -> None:
    lim = _limit(IS)
    for sigma in core.splitting_subsets(lim.S):
        t.run("closure-of-splitting-star", profinite.closure_of_splitting_star, lim, sigma)


def check_bounded_split_closed(IS: InverseSystem, t: Tally) -> None:
    lim = _limit(IS)
    S = lim.S
    for O in core.consistent_orientations(S):
        sigma = core.splits_at(S, O)
        if sigma is None or len(sigma) < 2:
            continue
        t.run("bounded-split-closed", normality.check_bounded_split_closed, lim, O)
        if len(lim.points) > 1:
            t.run("bounded-split-closed (probe)", normality.check_bounded_split_closed, lim, O,
                  lim.probe_points)


def check_greatest_dichotomy(IS: InverseSystem, t: Tally) -> None:
    """Every splitting consistent orientation is closed, or it splits at a
    singleton whose element is co-small, not co-trivial and has its inverse
    in the closure. Checked with all points and with the probe points."""
    lim = _limit(IS)
    S = lim.S
    views = [("exact", None)]
    if len(lim.points) > 1:
        views.append(("probe", lim.probe_points))
    for O in core.consistent_orientations(S):
        sigma = core.splits_at(S, O)
        if sigma is None:
            continue
        for view, pts in views:
            if len(sigma) >= 2:
                t.run(f"bounded-split-closed ({view})", normality.check_bounded_split_closed, lim, O, pts)
                continue
            rep = t.run(f"greatest-dichotomy ({view})", normality.check_greatest, lim, O, pts)
            if rep is not None and rep.branch != "closed":
                P = IS.poset
                t.findings.append({
                    "kind": "abnormal_witness",
                    "view": view,
                    "greatest": S.labels[rep.greatest],
                    "orientation": S.names(O),
                    "inverse_in_closure": {str(P.points[p]): S.labels[y] for p, y in rep.certificate.items()},
                })


def check_power_system(IS: InverseSystem, t: Tally) -> None:
    t.expect(bool(t.run("power-system", cpt.power_limit_bijection, _limit(IS))), "power limit is not a bijection")


def _node_star_family(IS: InverseSystem) -> list[frozenset[int]]:
    """Splitting stars of the top level, read as stars of the limit."""
    return [frozenset(s) for s in core.splitting_subsets(IS.levels[IS.top])]


def check_compactness(IS: InverseSystem, t: Tally, oracle_limit: int = 6) -> None:
    lim = _limit(IS)
    S = lim.S
    families = [_node_star_family(IS)]
    if len(S.separations) <= oracle_limit and len(families[0]) > 1:
        families.append(families[0][1:])
    for fam in families:
        try:
            res = cpt.compactness_construct(IS, fam)
        except Impossible:
            res = None
        except NOT_APPLICABLE:
            t.skipped += 1
            continue
        except SepSysError as exc:
            t.violations.append(f"compactness: {type(exc).__name__}: {exc}")
            continue
        if res is not None:
            t.expect(is_closed(lim, res.tau), "tau is not closed")
            t.expect(core.is_nested(S, res.tau), "tau is not nested")
            t.expect(cpt.over_F(S, res.tau, fam) is None, "tau is not over F")
            rep = t.run("extract-tree-set", cpt.extract_tree_set, S, res.tau, lim)
            if rep is not None:
                t.expect(rep.closed is True, "core of tau is not closed")
        if len(S.separations) <= oracle_limit:
            brute = oracle_nested_over_F(lim, fam)
            t.expect((brute is not None) == (res is not None),
                     f"existence verdict {res is not None} differs from oracle")


def check_transfer_tau(IS: InverseSystem, t: Tally) -> None:
    lim = _limit(IS)
    try:
        F = cpt.star_family(lim, _node_star_family(IS))
    except SepSysError:
        return
    for q in lim.points:
        Sq = IS.levels[q]
        if len(Sq.separations) > 6:
            continue
        aug = cpt.augmented_family(F, q)
        for tau_q in cpt.nested_subsets(Sq):
            if cpt.essentially_over(Sq, tau_q, aug) is not None:
                continue
            for p in lim.points:
                if p != q and IS.poset.leq(p, q):
                    t.run("transfer-tau", cpt.transfer_tau, F, q, p, tau_q)


# ---------------------------------------------------------------------------
# example certificates


def _certificate_suite(name: str) -> Suite:
    sizes = {"trivialproj": 12, "splittingnotclosed": 10, "splittingnotclosed2": 10, "ray": 10,
             "inconsistentpair": 1}

    def check(depth, t: Tally) -> None:
        params = {} if name == "inconsistentpair" else {"depth": depth}
        for c in certify(name, **params):
            t.expect(c.ok, f"{c.name}: {c.detail}")
            t.findings.append({"kind": "certificate", "check": c.name, "ok": c.ok, "detail": c.detail})

    return Suite(f"example-{name}", f"certificate checks for the {name} example",
                 lambda seed, size: size, check, sizes[name], 1,
                 MAX_DEPTH.get(name, 1) if name != "inconsistentpair" else 1, seeded=False)


EXPECTED_NORMALITY = {
    "trivialproj": "abnormal_witness",
    "splittingnotclosed": "abnormal_witness",
    "splittingnotclosed2": "normal_evidence",
}


def check_normality(depth: int, t: Tally) -> None:
    for name in normality_chains():
        cert = t.run(f"normality {name}", normality.normality_certificate, name, min(depth, MAX_DEPTH[name]))
        if cert is None:
            continue
        want = EXPECTED_NORMALITY.get(name)
        if want is not None:
            t.expect(cert.verdict == want, f"{name}: verdict {cert.verdict}, expected {want}")
        t.findings.append({"kind": "normality", "chain": name, "verdict": cert.verdict, "asserted": want is not None})


# ---------------------------------------------------------------------------
# registry


def _chain_suite(name: str, description: str, check, size: int = 10, count: int = 200,
                 generate=gen_chain, max_size: int = 12) -> Suite:
    return Suite(name, description, generate, check, size, count, max_size, input_kind="inverse")


SUITES: dict[str, Suite] = {}


def _register(suite: Suite) -> None:
    SUITES[suite.name] = suite


_register(Suite("tree-bijection", "consistent orientations and splitting stars of tree edge sets",
                _tree_instance, lambda inst, t: check_tree_bijection(inst[1], t, inst[0]), 8, 200, 13))
_register(Suite("extension-lemma", "extend_orientation against brute-force extension search",
                gen_small_system, lambda S, t: check_extension(S, t, sample=None if len(S.separations) <= 5 else 60),
                5, 500, 7, input_kind="system"))
_register(Suite("system-invariants", "order reversal, idempotence and star facts on random systems",
                gen_small_system, check_system_invariants, 5, 200, 7, input_kind="system"))
_register(_chain_suite("nested-lift", "nested levels give a nested limit", check_nested_lift))
_register(_chain_suite("small-lift", "small coordinates give a small element", check_small_lift))
_register(_chain_suite("lift-nontrivial", "maximal preimages of nontrivial elements are nontrivial",
                       check_lift_nontrivial))
_register(_chain_suite("lift-order", "order between nontrivial projections lifts to the limit",
                       check_lift_order))
_register(_chain_suite("eventual-trivial-projection", "witnesses of triviality separate from some level on",
                       check_eventual_trivial))
_register(_chain_suite("regular-decomposition", "regular limits have regular levels from some point on",
                       check_regular))
_register(_chain_suite("finitely-trivial", "finitely trivial is small, finitely inconsistent is co-small",
                       check_finitely))
_register(_chain_suite("project-splitting-star", "splitting stars of the limit project to splitting stars",
                       check_project_splitting_star))
_register(_chain_suite("sanitize-star", "stars containing a splitting star prune back to it",
                       check_sanitize_star))
_register(_chain_suite("lift-splitting-star", "splitting stars lift along surjective bonds",
                       check_lift_splitting_star))
_register(_chain_suite("lift-splitting-star-to-limit", "splitting stars without co-small members lift to the limit",
                       check_lift_to_limit))
_register(_chain_suite("iterated-minus", "pruning commutes with projection", check_iterated_minus))
_register(_chain_suite("closure-of-splitting-star", "the closure of a splitting star is a star pruning back to it",
                       check_closure_of_star))
_register(_chain_suite("bounded-split-closed", "orientations splitting at two or more elements are closed",
                       check_bounded_split_closed))
_register(_chain_suite("greatest-dichotomy", "closed, or a co-small greatest element with inverse in the closure",
                       check_greatest_dichotomy, size=6, generate=gen_schematic_or_chain, max_size=8))
_register(_chain_suite("power-system", "subsets of the limit match compatible families of subsets",
                       check_power_system, size=3, count=50, generate=gen_plain_chain, max_size=4))
_register(_chain_suite("compactness", "compactness_construct against the exhaustive oracle",
                       check_compactness, size=6, count=100, generate=gen_plain_chain, max_size=8))
_register(_chain_suite("transfer-tau", "nested sets essentially over F project to such sets",
                       check_transfer_tau, size=4, count=50, generate=gen_plain_chain, max_size=6))
_register(Suite("normality-certificate", "verdicts for the registered chains", lambda seed, size: size,
                check_normality, 6, 1, 10, seeded=False))
for _name in CERTIFIERS:
    _register(_certificate_suite(_name))

# the statements whose proofs move splitting stars between levels and the limit
TRANSFER_SUITES = (
    "nested-lift", "small-lift", "lift-nontrivial", "lift-order", "sanitize-star", "lift-splitting-star",
    "project-splitting-star", "iterated-minus", "closure-of-splitting-star", "lift-splitting-star-to-limit",
)


def get_suite(name: str) -> Suite:
    try:
        return SUITES[name]
    except KeyError:
        raise UnknownSuite(f"no suite named {name!r}; known: {', '.join(sorted(SUITES))}") from None


def _checked(suite: Suite, inst, seed: int, size: int) -> InstanceResult:
    t = Tally()
    try:
        suite.check(inst, t)
    except NOT_APPLICABLE:
        t.skipped += 1
    except LemmaViolation as exc:
        t.violations.append(f"uncaught: {exc}")
    return InstanceResult(seed, size, t.checks, t.skipped, t.violations, t.findings)


def run_instance(suite: Suite, seed: int, size: int) -> InstanceResult:
    return _checked(suite, suite.generate(seed, size), seed, size)


def run_suite(name: str, config: SuiteConfig | None = None) -> SuiteReport:
    suite = get_suite(name)
    config = config or SuiteConfig(count=suite.default_count)
    size = suite.default_size if config.size is None else config.size
    if not 1 <= size <= suite.max_size:
        raise BadParams(f"size for {name} must lie in 1..{suite.max_size}")
    count = config.count if suite.seeded else 1
    start = time.perf_counter()
    results = [run_instance(suite, config.seed + i, size) for i in range(count)]
    results.sort(key=lambda r: r.seed)
    return SuiteReport(name, SuiteConfig(config.seed, count, size), results, time.perf_counter() - start)


def run_on_input(name: str, instance) -> SuiteReport:
    """Run a suite's checker on a loaded system or inverse system."""
    suite = get_suite(name)
    want = SeparationSystem if suite.input_kind == "system" else InverseSystem
    if suite.input_kind is None or not isinstance(instance, want):
        raise BadParams(f"suite {name} does not accept this input")
    start = time.perf_counter()
    res = _checked(suite, instance, -1, 0)
    return SuiteReport(name, SuiteConfig(-1, 1, None), [res], time.perf_counter() - start)


@dataclass
class SearchResult:
    suite: str
    tried: int
    found: InstanceResult | None
    shrunk_from: tuple[int, int] | None

    def to_dict(self) -> dict:
        out = {"property": self.suite, "tried": self.tried, "counterexample": None}
        if self.found is not None:
            out["counterexample"] = {"seed": self.found.seed, "size": self.found.size,
                                     "violations": self.found.violations,
                                     "shrunk_from": list(self.shrunk_from) if self.shrunk_from else None}
        return out


def search(name: str, count: int, seed: int = 0, size: int | None = None) -> SearchResult:
    """Look for a violating instance, then shrink it: first the size at the
    same seed, then the smallest size over the seeds already tried."""
    suite = get_suite(name)
    size = suite.default_size if size is None else size
    for i in range(count):
        res = run_instance(suite, seed + i, size)
        if res.violations:
            origin = (res.seed, res.size)
            best = res
            for smaller in range(size - 1, 0, -1):
                found = None
                for s in range(seed, seed + i + 1):
                    cand = run_instance(suite, s, smaller)
                    if cand.violations:
                        found = cand
                        break
                if found is None:
                    break
                best = found
            return SearchResult(name, i + 1, best, origin)
    return SearchResult(name, count, None, None)
