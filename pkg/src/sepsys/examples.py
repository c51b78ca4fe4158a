"""Registered constructions with their certificate checks.

Chains (``trivialproj``, ``splittingnotclosed``, ``splittingnotclosed2``)
keep labels stable across levels, so an element of a truncated limit can be
identified by the label it carries at the top level.

* ``trivialproj``: level ``p`` is a star ``r1..rp`` plus a separation ``s``
  whose only triviality witness is ``rp``; the bond sends ``r{p+1}`` to ``s``.
* ``splittingnotclosed``: level ``p >= 3`` is a star ``s, r, t3..tp`` with
  ``s`` small and ``r`` below everything else; the bond sends ``t{p+1}`` to
  ``s``.
* ``splittingnotclosed2``: restrictions of the separations ``({z}, V)`` and
  ``({y, z}, V - y)`` of an infinite star with centre ``z`` to the finite sets
  ``{z, x, y2 .. y(p-1)}``, with the extra relation ``ex <= ex*``. Levels
  start at ``p = 4``: on three vertices ``ex*`` and ``ey2`` restrict to the
  same pair of sets.
* ``ray``: separations of order ``< k`` of initial segments of a path.
* ``inconsistentpair``: all set separations of ``A + B + C + X`` projected to
  ``C + X``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .core import SepSysError, SeparationSystem, from_order, is_trivial_in, transitive_closure, trivial_witnesses, validate_system
from .graphsep import (
    SetSeparation,
    build_restriction_system,
    enumerate_separations,
    make_graph,
    path_graph,
    prefix_chain,
    restriction_map,
)
from .inverse import InverseSystem, Limit, chain_sup, closure, limit
from .normality import SchematicChain, check_greatest, isomorphism_check, truncate
from .testkit import BadParams


class UnknownExample(SepSysError):
    pass


# ---------------------------------------------------------------------------
# trivialproj


def trivialproj_level(p: int) -> SeparationSystem:
    if p < 1:
        raise BadParams("levels start at 1")
    star = [f"r{i}" for i in range(1, p + 1)]
    labels = []
    for x in star + ["s"]:
        labels += [x, x + "*"]
    leq = [(a, b + "*") for a in star for b in star if a != b]
    leq += [("s", f"r{p}"), ("s", f"r{p}*")]
    return validate_system(labels, [(x, x + "*") for x in star + ["s"]], leq)


def trivialproj_bond(p: int) -> dict:
    """Level ``p+1`` to level ``p``."""
    out = {x: x for x in trivialproj_level(p).labels}
    out[f"r{p + 1}"] = "s"
    out[f"r{p + 1}*"] = "s*"
    return out


TRIVIALPROJ = SchematicChain("trivialproj", 1, trivialproj_level, trivialproj_bond)


# ---------------------------------------------------------------------------
# splittingnotclosed


def splittingnotclosed_level(p: int) -> SeparationSystem:
    if p < 3:
        raise BadParams("levels start at 3")
    star = ["s", "r"] + [f"t{i}" for i in range(3, p + 1)]
    labels = []
    for x in star:
        labels += [x, x + "*"]
    leq = [(a, b + "*") for a in star for b in star if a != b]
    leq.append(("s", "s*"))
    for t in star:
        if t != "r":
            leq += [("r", t), ("r", t + "*")]
    return validate_system(labels, [(x, x + "*") for x in star], leq)


def splittingnotclosed_bond(p: int) -> dict:
    out = {x: x for x in splittingnotclosed_level(p).labels}
    out[f"t{p + 1}"] = "s"
    out[f"t{p + 1}*"] = "s*"
    return out


SPLITTINGNOTCLOSED = SchematicChain("splittingnotclosed", 3, splittingnotclosed_level, splittingnotclosed_bond)


# ---------------------------------------------------------------------------
# splittingnotclosed2

_PHANTOMS = ("w1", "w2")


def _sg_elements(leaves: list[str]) -> tuple[frozenset, list[tuple[str, SetSeparation]]]:
    """Named separations of the star ``z`` + ``leaves`` (``leaves[0]`` is ``x``)."""
    V = frozenset(["z", *leaves])
    out = [("a", SetSeparation(frozenset({"z"}), V))]
    for y in leaves:
        name = "ex" if y == "x" else f"e{y}"
        out.append((name, SetSeparation(frozenset({y, "z"}), V - {y})))
    return V, out


def _sg_leq(u: SetSeparation, v: SetSeparation, ex: SetSeparation) -> bool:
    return u.leq(v) or (u == ex and v == ex.inverse())


def _q_leaves(p: int) -> list[str]:
    return ["x"] + [f"y{i}" for i in range(2, p)]


def splittingnotclosed2_level(p: int) -> SeparationSystem:
    """Restrictions to ``q = {z, x, y2 .. y(p-1)}``; the order is induced by
    preimages, with two extra leaves standing in for all leaves outside ``q``."""
    if p < 4:
        raise BadParams("levels start at 4")
    leaves = _q_leaves(p)
    q = frozenset(["z", *leaves])
    V, named = _sg_elements(leaves + list(_PHANTOMS))
    ex = dict(named)["ex"]
    big = []
    for _, sep in named:
        big += [sep, sep.inverse()]
    big_up = transitive_closure(len(big), [(i, j) for i, u in enumerate(big) for j, v in enumerate(big)
                                           if i != j and _sg_leq(u, v, ex)])

    def restrict(sep: SetSeparation) -> SetSeparation:
        return SetSeparation(sep.A & q, sep.B & q)

    labels, seps = [], []
    for name, sep in named:
        if any(leaf in name for leaf in _PHANTOMS):
            continue
        labels += [name, name + "*"]
        seps += [restrict(sep), restrict(sep.inverse())]
    pos = {s: i for i, s in enumerate(seps)}
    image = [pos[restrict(b)] for b in big]
    rel = set()
    for i in range(len(big)):
        for j in range(len(big)):
            if big_up[i] >> j & 1:
                rel.add((image[i], image[j]))
    inv = [i ^ 1 for i in range(len(seps))]
    return from_order(labels, inv, lambda i, j: (i, j) in rel or i == j, tuple(seps))


def splittingnotclosed2_bond(p: int) -> dict:
    out = {x: x for x in splittingnotclosed2_level(p).labels}
    out[f"ey{p}"] = "a"
    out[f"ey{p}*"] = "a*"
    return out


SPLITTINGNOTCLOSED2 = SchematicChain("splittingnotclosed2", 4, splittingnotclosed2_level, splittingnotclosed2_bond)


# ---------------------------------------------------------------------------
# ray as a chain (k = 2)


def ray_level(n: int) -> SeparationSystem:
    if n < 1:
        raise BadParams("levels start at 1")
    return enumerate_separations(path_graph(n), 2)


def ray_bond(n: int) -> tuple[int, ...]:
    return restriction_map(ray_level(n + 1), ray_level(n), {f"v{i}" for i in range(1, n + 1)})


RAY = SchematicChain("ray", 1, ray_level, ray_bond)


# ---------------------------------------------------------------------------
# registry

CHAINS = {c.name: c for c in (TRIVIALPROJ, SPLITTINGNOTCLOSED, SPLITTINGNOTCLOSED2, RAY)}
MAX_DEPTH = {"trivialproj": 40, "splittingnotclosed": 40, "splittingnotclosed2": 30, "ray": 30}


def schematic(name: str) -> SchematicChain:
    from .normality import UnregisteredChain

    if name not in CHAINS:
        raise UnregisteredChain(f"no registered chain named {name!r}")
    return CHAINS[name]


def _depth(name: str, depth) -> int:
    if not isinstance(depth, int) or not 1 <= depth <= MAX_DEPTH[name]:
        raise BadParams(f"depth for {name} must lie in 1..{MAX_DEPTH[name]}")
    return depth


def ray_system(depth: int = 10, k: int = 2) -> InverseSystem:
    """Initial segments ``v1..vn`` for ``n = 1 .. depth+2`` of a path."""
    depth = _depth("ray", depth)
    if not 2 <= k <= 3:
        raise BadParams("k must be 2 or 3")
    G = path_graph(depth + 2)
    return build_restriction_system(G, k, prefix_chain(G))


def inconsistentpair_system(A=("a",), B=("b",), C=("c",), X=("x",)) -> InverseSystem:
    blocks = [tuple(A), tuple(B), tuple(C), tuple(X)]
    if any(not b for b in blocks):
        raise BadParams("every block must be nonempty")
    vertices = [v for b in blocks for v in b]
    if len(set(vertices)) != len(vertices):
        raise BadParams("blocks must be disjoint")
    if len(vertices) > 6:
        raise BadParams("at most 6 vertices")
    G = make_graph(vertices)
    U = set(blocks[2]) | set(blocks[3])
    return build_restriction_system(G, len(vertices) + 1, [U, set(vertices)])


def inconsistentpair_elements(lim: Limit, A=("a",), B=("b",), C=("c",), X=("x",)) -> tuple[int, int]:
    """``s = (X+A, C+X+B)`` and ``s' = (C+X+A, X+B)`` in the limit."""
    A, B, C, X = (frozenset(b) for b in (A, B, C, X))
    pos = {sep: i for i, sep in enumerate(lim.S.payload)}
    return pos[SetSeparation(X | A, C | X | B)], pos[SetSeparation(C | X | A, X | B)]


def gen(name: str, **params):
    """Build a registered example. Chains and the ray return a truncated
    :class:`InverseSystem` (``depth`` levels, the ray two more);
    ``inconsistentpair`` returns its two-point system."""
    if name in CHAINS and name != "ray":
        extra = set(params) - {"depth"}
        if extra:
            raise BadParams(f"unknown parameters {sorted(extra)}")
        return truncate(CHAINS[name], _depth(name, params.get("depth", 4)))
    if name == "ray":
        extra = set(params) - {"depth", "k"}
        if extra:
            raise BadParams(f"unknown parameters {sorted(extra)}")
        return ray_system(params.get("depth", 10), params.get("k", 2))
    if name == "inconsistentpair":
        extra = set(params) - {"A", "B", "C", "X"}
        if extra:
            raise BadParams(f"unknown parameters {sorted(extra)}")
        return inconsistentpair_system(**params)
    raise UnknownExample(f"no example named {name!r}")


NAMES = ("trivialproj", "splittingnotclosed", "splittingnotclosed2", "ray", "inconsistentpair")


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""


def _label_at(lim: Limit, x: int, p: int) -> str:
    return lim.system.levels[p].labels[lim.coords[x][p]]


def certify_trivialproj(depth: int = 12) -> list[Check]:
    IS = gen("trivialproj", depth=depth)
    checks = []
    bad = []
    for i, p in enumerate(IS.poset.points):
        Sp = IS.levels[i]
        wit = [Sp.labels[w] for w in trivial_witnesses(Sp, Sp.index["s"])]
        if wit not in ([f"r{p}"], [f"r{p}*"]):
            bad.append(p)
        star = [Sp.index[f"r{j}"] for j in range(1, p + 1)]
        if is_trivial_in(Sp, Sp.index["s"], star) != Sp.index[f"r{p}"]:
            bad.append(p)
    checks.append(Check("s_p trivial with unique witness t_p = r_p at every level", not bad,
                        f"failing levels {sorted(set(bad))}" if bad else f"levels 1..{depth}"))

    lim = limit(IS)
    S = lim.S
    n = IS.poset.points[IS.top]
    s = S.index["s"]
    top_wit = [S.labels[w] for w in trivial_witnesses(S, s)]
    checks.append(Check("at the top level only t_n witnesses triviality of s", top_wit == [f"r{n}"],
                        f"witnesses {top_wit}"))
    avoid = []
    for p in range(1, n):
        rp = S.index[f"r{p}"]
        for j, q in enumerate(IS.poset.points):
            if q > p and _label_at(lim, rp, j) == f"r{q}":
                avoid.append((p, q))
            if q == p and _label_at(lim, rp, j) != f"r{p}":
                avoid.append((p, q))
            if q < p and _label_at(lim, rp, j) != "s":
                avoid.append((p, q))
    checks.append(Check("each r_p projects to t_p at p, to s below and avoids t_q above", not avoid,
                        f"violations {avoid}" if avoid else f"{n - 1} representatives"))
    return checks


def certify_splittingnotclosed(depth: int = 10) -> list[Check]:
    """Builds ``depth + 1`` levels and probes the first ``depth``."""
    IS = gen("splittingnotclosed", depth=depth + 1)
    lim = limit(IS)
    S = lim.S
    pts = lim.probe_points
    s, r = S.index["s"], S.index["r"]
    sigma = {x for x in range(len(S)) if not S.labels[x].endswith("*")}
    O = {S.inv[s]} | (sigma - {s})
    checks = []
    rep = check_greatest(lim, O, pts)
    checks.append(Check("O splits at {s*} with s* greatest", rep.greatest == S.inv[s], S.labels[rep.greatest]))
    checks.append(Check("O is not closed: second branch of the dichotomy",
                        rep.branch == "greatest_cosmall_not_cotrivial", rep.branch))
    missing = [IS.poset.points[p] for p in pts if lim.coords[s][p] not in lim.project_set(O, p)]
    checks.append(Check("s|p lies in O|p at every probed level", not missing and s in closure(lim, O, pts),
                        f"missing at {missing}" if missing else f"{len(pts)} levels"))
    checks.append(Check("s is small and not trivial at the top level", S.is_small(s) and not S.is_trivial(s)))
    ok_r = s in trivial_witnesses(S, r) and all(
        IS.levels[p].lt(lim.coords[r][p], lim.coords[y][p]) for p in pts for y in (s, S.inv[s]))
    checks.append(Check("r is trivial witnessed by s", ok_r))
    return checks


def certify_splittingnotclosed2(depth: int = 10) -> list[Check]:
    IS2 = gen("splittingnotclosed2", depth=depth + 1)
    lim = limit(IS2)
    S = lim.S
    pts = lim.probe_points
    checks = []
    bad = []
    for i, p in enumerate(IS2.poset.points):
        L = IS2.levels[i]
        co = sorted(L.labels[x] for x in range(len(L)) if L.is_co_small(x) and not L.is_degenerate(x))
        if co != ["a*", "ex*"]:
            bad.append((p, co))
    checks.append(Check("exactly two co-small separations at every level", not bad, str(bad) if bad else ""))
    m = S.index["ex*"]
    O = {x for x in range(len(S)) if S.leq(x, m) and x != S.inv[m]}
    rep = check_greatest(lim, O, pts)
    checks.append(Check("the splitting-singleton orientation is closed", rep.branch == "closed", rep.branch))
    a = S.index["a"]
    checks.append(Check("the other co-small separation is co-trivial", S.is_co_trivial(S.inv[a])))
    iso_ok = all(isomorphism_check(splittingnotclosed_level(p), IS2.levels[i]) is not None
                 for i, p in enumerate(IS2.poset.points))
    checks.append(Check("levels isomorphic to the splittingnotclosed levels of equal size", iso_ok))
    return checks


def ray_certificate(depth: int = 10, k: int = 2) -> dict:
    """Data behind the ray checks: the orientation towards the far end, the
    element restricting to ``(p, {})`` everywhere and the chain ``(A_n, B_n)``."""
    IS = gen("ray", depth=depth, k=k)
    lim = limit(IS)
    S = lim.S
    n_top = depth + 2
    verts = [f"v{i}" for i in range(1, n_top + 1)]
    far = verts[-1]
    O = frozenset(x for x in range(len(S)) if far in S.payload[x].B - S.payload[x].A)
    pos = {sep: i for i, sep in enumerate(S.payload)}
    full = frozenset(verts)
    v_all = pos[SetSeparation(full, frozenset())]
    chain = [pos[SetSeparation(frozenset(verts[:m]), frozenset(verts[m - 1:]))] for m in range(1, n_top)]
    return {"system": IS, "limit": lim, "orientation": O, "target": v_all, "chain": chain,
            "probe_points": list(range(depth))}


def certify_ray(depth: int = 10, k: int = 2) -> list[Check]:
    c = ray_certificate(depth, k)
    lim, O, pts = c["limit"], c["orientation"], c["probe_points"]
    S = lim.S
    checks = []
    bad = []
    for p in pts:
        Sp = lim.system.levels[p]
        sp = Sp.payload[lim.coords[c["target"]][p]]
        prefix = frozenset(f"v{i}" for i in range(1, p + 2))
        if sp != SetSeparation(prefix, frozenset()):
            bad.append(p + 1)
        elif lim.coords[c["target"]][p] not in lim.project_set(O, p):
            bad.append(p + 1)
    checks.append(Check("(p, {}) lies in O|p at every probed level", not bad, f"failing {bad}" if bad else ""))
    checks.append(Check("(V, {}) is not in O", c["target"] not in O))
    sup = chain_sup(lim, c["chain"])
    agree = all(lim.coords[sup][p] == lim.coords[c["target"]][p] for p in pts)
    checks.append(Check("chain_sup of (A_n, B_n) agrees with (V, {}) at every probed level", agree,
                        S.labels[sup]))
    checks.append(Check("the chain lies in O", set(c["chain"]) <= O))
    return checks


def certify_inconsistentpair() -> list[Check]:
    IS = gen("inconsistentpair")
    lim = limit(IS)
    S = lim.S
    s, s2 = inconsistentpair_elements(lim)
    low = IS.poset.idx("c,x") if "c,x" in IS.poset.points else 0
    same = lim.coords[S.inv[s]][low] == lim.coords[s2][low]
    Sp = IS.levels[low]
    return [
        Check("s < s'", S.lt(s, s2)),
        Check("{s*, s'} is inconsistent", S.leq(s, s2) and S.sep(s) != S.sep(s2)),
        Check("projections of s* and s' to C + X coincide", same, Sp.labels[lim.coords[s2][low]]),
        Check("81 separations above, 9 below", len(S) == 81 and len(Sp) == 9),
    ]


CERTIFIERS: dict[str, Callable[..., list[Check]]] = {
    "trivialproj": certify_trivialproj,
    "splittingnotclosed": certify_splittingnotclosed,
    "splittingnotclosed2": certify_splittingnotclosed2,
    "ray": certify_ray,
    "inconsistentpair": lambda **_: certify_inconsistentpair(),
}


def certify(name: str, **params) -> list[Check]:
    if name not in CERTIFIERS:
        raise UnknownExample(f"no example named {name!r}")
    return CERTIFIERS[name](**params)

