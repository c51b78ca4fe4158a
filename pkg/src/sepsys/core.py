"""Finite abstract separation systems.

A system is a finite poset with an order-reversing involution. Oriented
separations are plain ``int`` indices into the system's element table; subsets
are ``frozenset`` of indices. The order is stored fully closed as one bitmask
per element (``up[x]`` has bit ``y`` set iff ``x <= y``).

An unoriented separation is identified by the smaller index of its two
orientations (see :meth:`SeparationSystem.sep`).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence


class SepSysError(Exception):
    """Base class for all errors raised by this package."""


class CycleError(SepSysError):
    def __init__(self, x: str, y: str):
        super().__init__(f"order closure is not antisymmetric: {x} <= {y} <= {x}")
        self.pair = (x, y)


class InvolutionError(SepSysError):
    pass


class OrderReversalError(SepSysError):
    def __init__(self, x: str, y: str):
        super().__init__(f"{x} <= {y} but not inv({y}) <= inv({x})")
        self.pair = (x, y)


class UnknownElement(SepSysError):
    pass


class Impossible(SepSysError):
    def __init__(self, reason: str, element: int | None = None):
        super().__init__(f"{reason}" + ("" if element is None else f" (element {element})"))
        self.reason = reason
        self.element = element


class InconsistentInput(SepSysError):
    pass


class LemmaViolation(SepSysError):
    """A proved statement failed on a concrete instance; always a bug."""


def bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(elements: Iterable[int]) -> int:
    m = 0
    for x in elements:
        m |= 1 << x
    return m


def transitive_closure(n: int, pairs: Iterable[tuple[int, int]]) -> list[int]:
    """Reflexive-transitive closure of ``pairs`` on ``range(n)`` as up-masks."""
    up = [1 << i for i in range(n)]
    for a, b in pairs:
        up[a] |= 1 << b
    for k in range(n):
        bk, uk = 1 << k, up[k]
        for i in range(n):
            if up[i] & bk:
                up[i] |= uk
        # up[k] may have grown through i == k
    return up


@dataclass(frozen=True, eq=False)
class SeparationSystem:
    labels: tuple[str, ...]
    inv: tuple[int, ...]
    up: tuple[int, ...]
    payload: tuple | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        return f"SeparationSystem({len(self)} elements, {len(self.separations)} separations)"

    @cached_property
    def down(self) -> tuple[int, ...]:
        dn = [0] * len(self)
        for x, m in enumerate(self.up):
            for y in bits(m):
                dn[y] |= 1 << x
        return tuple(dn)

    @cached_property
    def index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    @cached_property
    def separations(self) -> tuple[int, ...]:
        return tuple(x for x in range(len(self)) if x <= self.inv[x])

    @cached_property
    def full_mask(self) -> int:
        return (1 << len(self)) - 1

    @cached_property
    def trivial_mask(self) -> int:
        return to_mask(x for x in range(len(self)) if _is_trivial(self, x))

    def element(self, x: int | str) -> int:
        if isinstance(x, str):
            try:
                return self.index[x]
            except KeyError:
                raise UnknownElement(x) from None
        if not 0 <= x < len(self):
            raise UnknownElement(str(x))
        return x

    def sep(self, x: int) -> int:
        return min(x, self.inv[x])

    def leq(self, x: int, y: int) -> bool:
        return bool(self.up[x] >> y & 1)

    def lt(self, x: int, y: int) -> bool:
        return x != y and bool(self.up[x] >> y & 1)

    def is_degenerate(self, x: int) -> bool:
        return self.inv[x] == x

    def is_small(self, x: int) -> bool:
        return self.leq(x, self.inv[x])

    def is_co_small(self, x: int) -> bool:
        return self.leq(self.inv[x], x)

    def is_trivial(self, x: int) -> bool:
        return bool(self.trivial_mask >> x & 1)

    def is_co_trivial(self, x: int) -> bool:
        return self.is_trivial(self.inv[x])

    def invert(self, subset: Iterable[int]) -> frozenset[int]:
        return frozenset(self.inv[x] for x in subset)

    def names(self, subset: Iterable[int]) -> list[str]:
        return [self.labels[x] for x in sorted(subset)]

    def leq_pairs(self) -> list[tuple[int, int]]:
        return [(x, y) for x in range(len(self)) for y in bits(self.up[x]) if x != y]

    def cover_pairs(self) -> list[tuple[int, int]]:
        out = []
        for x in range(len(self)):
            above = self.up[x] & ~(1 << x)
            for y in bits(above):
                # y covers x iff nothing strictly between
                if not any(z != y and self.up[z] >> y & 1 for z in bits(above)):
                    out.append((x, y))
        return out


def _is_trivial(S: SeparationSystem, x: int) -> bool:
    above = S.up[x] & ~(1 << x) & ~(1 << S.inv[x])
    return any(S.up[x] >> S.inv[y] & 1 for y in bits(above))


def check_axioms(S: SeparationSystem) -> None:
    """Raise if ``S`` violates the separation-system axioms."""
    n = len(S)
    for x in range(n):
        if not 0 <= S.inv[x] < n or S.inv[S.inv[x]] != x:
            raise InvolutionError(f"inv is not an involution at {S.labels[x]}")
        if not S.up[x] >> x & 1:
            raise SepSysError(f"order not reflexive at {S.labels[x]}")
    for x in range(n):
        for y in bits(S.up[x]):
            if x != y and S.up[y] >> x & 1:
                raise CycleError(S.labels[x], S.labels[y])
            if S.up[y] & ~S.up[x]:
                raise SepSysError(f"order not transitive at {S.labels[x]} <= {S.labels[y]}")
            if not S.up[S.inv[y]] >> S.inv[x] & 1:
                raise OrderReversalError(S.labels[x], S.labels[y])


def validate_system(
    elements: Sequence[str],
    inverse: Iterable[tuple[str, str]],
    leq: Iterable[tuple[str, str]] = (),
    *,
    mirror: bool = True,
    payload: tuple | None = None,
) -> SeparationSystem:
    """Build a system from labels, inverse pairs and order generators.

    With ``mirror`` (the default) each generator ``x <= y`` also contributes
    ``inv(y) <= inv(x)``, so order reversal holds by construction; with
    ``mirror=False`` the closure of the raw generators must already be order
    reversing, otherwise :class:`OrderReversalError` names a witness pair.
    """
    labels = tuple(str(e) for e in elements)
    index = {lab: i for i, lab in enumerate(labels)}
    if len(index) != len(labels):
        raise InvolutionError("duplicate element labels")

    def idx(lab) -> int:
        try:
            return index[str(lab)]
        except KeyError:
            raise UnknownElement(str(lab)) from None

    inv = [-1] * len(labels)
    for a, b in inverse:
        i, j = idx(a), idx(b)
        for k, other in ((i, j), (j, i)):
            if inv[k] not in (-1, other):
                raise InvolutionError(f"{labels[k]} has two inverses")
            inv[k] = other
    missing = [labels[i] for i, v in enumerate(inv) if v == -1]
    if missing:
        raise InvolutionError(f"no inverse given for {', '.join(missing)}")

    pairs = [(idx(a), idx(b)) for a, b in leq]
    if mirror:
        pairs += [(inv[b], inv[a]) for a, b in pairs]
    up = transitive_closure(len(labels), pairs)
    S = SeparationSystem(labels, tuple(inv), tuple(up), payload)
    check_axioms(S)
    return S


def from_order(labels: Sequence[str], inv: Sequence[int], leq, payload=None) -> SeparationSystem:
    """System from an already closed order given as a predicate ``leq(i, j)``."""
    n = len(labels)
    up = [to_mask(j for j in range(n) if i == j or leq(i, j)) for i in range(n)]
    S = SeparationSystem(tuple(labels), tuple(inv), tuple(up), payload)
    check_axioms(S)
    return S


def induced(S: SeparationSystem, elements: Iterable[int]) -> tuple[SeparationSystem, tuple[int, ...]]:
    """Subsystem on an inverse-closed set; returns it with the map back into ``S``."""
    keep = sorted(set(elements))
    if any(S.inv[x] not in keep for x in keep):
        raise InconsistentInput("induced subsystem needs an inverse-closed element set")
    pos = {x: i for i, x in enumerate(keep)}
    keep_mask = to_mask(keep)
    up = tuple(to_mask(pos[y] for y in bits(S.up[x] & keep_mask)) for x in keep)
    payload = None if S.payload is None else tuple(S.payload[x] for x in keep)
    sub = SeparationSystem(
        tuple(S.labels[x] for x in keep), tuple(pos[S.inv[x]] for x in keep), up, payload
    )
    return sub, tuple(keep)


# ---------------------------------------------------------------------------
# single-element predicates


@dataclass(frozen=True)
class Classification:
    small: bool
    co_small: bool
    degenerate: bool
    trivial: tuple[int, ...] | None
    co_trivial: tuple[int, ...] | None


def trivial_witnesses(S: SeparationSystem, x: int) -> tuple[int, ...]:
    """Separations ``s`` other than that of ``x`` with ``x < s`` and ``x < inv(s)``."""
    own = S.sep(x)
    out = set()
    for y in bits(S.up[x]):
        if S.sep(y) != own and S.up[x] >> S.inv[y] & 1:
            out.add(S.sep(y))
    return tuple(sorted(out))


def classify(S: SeparationSystem, x: int | str) -> Classification:
    x = S.element(x)
    tw = trivial_witnesses(S, x)
    cw = trivial_witnesses(S, S.inv[x])
    return Classification(
        small=S.is_small(x),
        co_small=S.is_co_small(x),
        degenerate=S.is_degenerate(x),
        trivial=tw or None,
        co_trivial=cw or None,
    )


def is_trivial_in(S: SeparationSystem, x: int | str, sigma: Iterable[int]) -> int | None:
    """A witness separation with an orientation in ``sigma``, or ``None``."""
    x = S.element(x)
    own = S.sep(x)
    for y in sorted(sigma):
        if S.sep(y) != own and S.lt(x, y) and S.lt(x, S.inv[y]):
            return S.sep(y)
    return None


# ---------------------------------------------------------------------------
# subset predicates


def _seps(S: SeparationSystem, subset: Iterable[int]) -> list[int]:
    return sorted({S.sep(x) for x in subset})


def nested_pair(S: SeparationSystem, r: int, s: int) -> bool:
    rs, ss = S.inv[r], S.inv[s]
    return S.leq(r, s) or S.leq(r, ss) or S.leq(s, r) or S.leq(ss, r) or S.leq(rs, s) or S.leq(s, rs)


def crossing_pair(S: SeparationSystem, subset: Iterable[int]) -> tuple[int, int] | None:
    seps = _seps(S, subset)
    for i, r in enumerate(seps):
        for s in seps[i + 1 :]:
            if not nested_pair(S, r, s):
                return (r, s)
    return None


def is_nested(S: SeparationSystem, subset: Iterable[int] | None = None) -> bool:
    return crossing_pair(S, range(len(S)) if subset is None else subset) is None


def is_antisymmetric(S: SeparationSystem, subset: Iterable[int]) -> bool:
    sub = set(subset)
    return not any(S.inv[x] != x and S.inv[x] in sub for x in sub)


def is_star(S: SeparationSystem, subset: Iterable[int]) -> bool:
    sub = sorted(set(subset))
    if any(S.is_degenerate(x) for x in sub):
        return False
    return all(S.leq(x, S.inv[y]) for x in sub for y in sub if x != y)


def is_proper_star(S: SeparationSystem, subset: Iterable[int]) -> bool:
    sub = set(subset)
    return bool(sub) and is_star(S, sub) and is_antisymmetric(S, sub)


def inconsistent_pair(S: SeparationSystem, subset: Iterable[int]) -> tuple[int, int] | None:
    """A pair ``(x, y)`` with distinct separations and ``inv(x) <= y``."""
    sub = sorted(set(subset))
    for x in sub:
        for y in sub:
            if S.sep(x) != S.sep(y) and S.leq(S.inv[x], y):
                return (x, y)
    return None


def is_consistent(S: SeparationSystem, subset: Iterable[int]) -> bool:
    return inconsistent_pair(S, subset) is None


def down_closure(S: SeparationSystem, subset: Iterable[int]) -> frozenset[int]:
    m = 0
    for y in subset:
        m |= S.down[y]
    return frozenset(bits(m))


def maximal_elements(S: SeparationSystem, subset: Iterable[int]) -> frozenset[int]:
    sub = set(subset)
    m = to_mask(sub)
    return frozenset(x for x in sub if not (S.up[x] & m & ~(1 << x)))


def minimal_elements(S: SeparationSystem, subset: Iterable[int]) -> frozenset[int]:
    sub = set(subset)
    m = to_mask(sub)
    return frozenset(x for x in sub if not (S.down[x] & m & ~(1 << x)))


def is_orientation(S: SeparationSystem, subset: Iterable[int]) -> bool:
    sub = set(subset)
    return all((s in sub) != (S.inv[s] in sub) or (S.inv[s] == s and s in sub) for s in S.separations)


# ---------------------------------------------------------------------------
# orientations


def _conflicts(S: SeparationSystem, z: int, chosen: int, chosen_inv: int) -> bool:
    # z would form an inconsistent pair with a chosen q: inv(z) <= q or inv(q) <= z
    zi = S.inv[z]
    own = (1 << z) | (1 << zi)
    return bool(S.up[zi] & chosen & ~own) or bool(S.down[z] & chosen_inv & ~own)


def consistent_orientations(S: SeparationSystem) -> list[frozenset[int]]:
    seps = S.separations
    out: list[frozenset[int]] = []

    def rec(i: int, chosen: int, chosen_inv: int) -> None:
        if i == len(seps):
            out.append(frozenset(bits(chosen)))
            return
        s = seps[i]
        for z in ((s,) if S.inv[s] == s else (s, S.inv[s])):
            if not _conflicts(S, z, chosen, chosen_inv):
                rec(i + 1, chosen | 1 << z, chosen_inv | 1 << S.inv[z])

    rec(0, 0, 0)
    return out


@dataclass(frozen=True)
class Extension:
    orientation: frozenset[int]
    unique: bool | None


def extend_orientation(
    S: SeparationSystem, partial: Iterable[int], keep_max: int | None = None
) -> Extension:
    """Extend a consistent partial orientation to a consistent orientation.

    Raises :class:`Impossible` with reason ``co_trivial_member`` or
    ``trivial_keep_max`` exactly when no extension (with ``keep_max`` kept
    maximal) exists. ``unique`` is ``True`` when ``S`` is nested and
    ``keep_max`` is given, ``None`` otherwise.
    """
    P = set(partial)
    if not is_antisymmetric(S, P) or not is_consistent(S, P):
        raise InconsistentInput("partial orientation is not consistent")
    for x in sorted(P):
        if S.is_co_trivial(x):
            raise Impossible("co_trivial_member", x)
    if keep_max is not None:
        if keep_max not in P or any(S.lt(keep_max, y) for y in P):
            raise InconsistentInput("keep_max must be a maximal element of the partial orientation")
        if S.is_trivial(keep_max):
            raise Impossible("trivial_keep_max", keep_max)
        own = S.sep(keep_max)
        P |= {S.inv[y] for y in bits(S.up[keep_max]) if S.sep(y) != own}

    chosen = to_mask(P)
    chosen_inv = to_mask(S.inv[x] for x in P)
    oriented = {S.sep(x) for x in P}
    for s in S.separations:
        if s in oriented:
            continue
        options = [z for z in ((s,) if S.inv[s] == s else (s, S.inv[s]))
                   if not _conflicts(S, z, chosen, chosen_inv)]
        if len(options) == 2 and S.is_co_trivial(options[0]):
            options.reverse()
        if not options or S.is_co_trivial(options[0]):
            raise LemmaViolation(f"greedy extension stuck at separation {S.labels[s]}")
        z = options[0]
        chosen |= 1 << z
        chosen_inv |= 1 << S.inv[z]
    O = frozenset(bits(chosen))
    if not is_consistent(S, O) or not is_orientation(S, O):
        raise LemmaViolation("extension is not a consistent orientation")
    if keep_max is not None and any(S.lt(keep_max, y) for y in O):
        raise LemmaViolation("keep_max not maximal in extension")
    unique = True if keep_max is not None and is_nested(S) else None
    return Extension(O, unique)


def splits_at(S: SeparationSystem, orientation: Iterable[int]) -> frozenset[int] | None:
    """The set of maximal elements if ``orientation`` is a consistent
    orientation contained in its down-closure, else ``None``."""
    O = frozenset(orientation)
    if not is_orientation(S, O) or not is_consistent(S, O):
        return None
    sigma = maximal_elements(S, O)
    if not O <= down_closure(S, sigma):
        return None
    return sigma


def splitting_subsets(S: SeparationSystem) -> list[frozenset[int]]:
    seen: dict[frozenset[int], None] = {}
    for O in consistent_orientations(S):
        sigma = splits_at(S, O)
        if sigma is not None:
            seen.setdefault(sigma)
    return list(seen)


def orientation_of_star(S: SeparationSystem, sigma: Iterable[int]) -> frozenset[int]:
    """``dcl(sigma)`` minus the inverses of ``sigma``: the finite orientation a
    splitting star comes from."""
    sigma = frozenset(sigma)
    return down_closure(S, sigma) - (S.invert(sigma) - sigma)


# ---------------------------------------------------------------------------
# cores


def essential_core(S: SeparationSystem) -> tuple[SeparationSystem, tuple[int, ...]]:
    keep = [x for x in range(len(S))
            if not S.is_degenerate(x) and not S.is_trivial(x) and not S.is_co_trivial(x)]
    return induced(S, keep)


def core_mask(S: SeparationSystem) -> frozenset[int]:
    """Element set of the essential core, as a subset of ``S``."""
    return frozenset(x for x in range(len(S))
                     if not S.is_degenerate(x) and not S.is_trivial(x) and not S.is_co_trivial(x))


def sigma_minus(S: SeparationSystem, sigma: Iterable[int]) -> frozenset[int]:
    sigma = frozenset(sigma)
    out = frozenset(x for x in sigma if is_trivial_in(S, x, sigma) is None)
    for x in sigma - out:
        if is_trivial_in(S, x, out) is None:
            raise LemmaViolation(f"{S.labels[x]} has no witness among the nontrivial members")
    return out


def is_tree_set(S: SeparationSystem) -> bool:
    return is_nested(S) and not any(S.is_degenerate(x) or S.is_trivial(x) for x in range(len(S)))


def is_regular(S: SeparationSystem) -> bool:
    return not any(S.is_small(x) for x in range(len(S)))
