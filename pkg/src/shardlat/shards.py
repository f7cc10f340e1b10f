"""Shards described by their cutting relations, and decomposition into shards.

A shard lies in one reflecting hyperplane, x_i = x_j or x_i = -x_j (x_0 = 0
in type B), and is cut out by choosing, for each letter that the hyperplane's
rank-two subarrangements make relevant, on which side of the common value
x_i it lies.  Tokens: ``k:L`` means x_k <= x_i and ``k:R`` means x_i <= x_k,
for signed letters k.

Type B hyperplanes x_i = -x_j also carry a global sign of x_i; for each
k < i the pair (x_k, x_{-k}) takes one of three relative positions.  In type
D the letters k < i with both x_k and x_{-k} on the same side of x_i form the
zero block; their common side fixes the sign of x_i.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .cones import ConeSystem, closure, cone_of, element_of_closure
from .elements import Element, TypeTag, descent_count, enumerate as enumerate_elements, identity
from .preorders import blocks_of, join_direct, leq


@dataclass(frozen=True, order=True)
class ShardDescriptor:
    kind: TypeTag
    hyperplane: tuple[int, int]
    sides: tuple[tuple[int, str], ...]
    sign: Optional[str] = None
    zero_block_min: Optional[int] = None

    def __str__(self) -> str:
        i, j = self.hyperplane
        head = []
        if self.sign:
            head.append(self.sign)
        if self.zero_block_min is not None:
            head.append(f"h={self.zero_block_min}")
        toks = [f"{k}:{s}" for k, s in sorted(self.sides, key=lambda t: (t[1], abs(t[0]), t[0]))]
        body = ";".join(head + ([",".join(toks)] if toks else []))
        return f"{self.kind}:H({i},{j})[{body}]"

    @property
    def n_constraints(self) -> int:
        return len(self.sides)


def shard_cone(s: ShardDescriptor, n: int) -> ConeSystem:
    i, j = s.hyperplane
    ineqs = set()
    for k, side in s.sides:
        ineqs.add((k, i) if side == "L" else (i, k))
    if s.kind == "B" and s.sign and j < 0:
        ineqs.add((0, i) if s.sign == "+" else (i, 0))
    return ConeSystem(s.kind, n, frozenset({(i, j)}), frozenset(ineqs))


def _two_way(letters):
    for choice in itertools.product("LR", repeat=len(letters)):
        yield tuple(zip(letters, choice))


def _same_sign_shards(kind, n):
    out = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            for sides in _two_way(list(range(i + 1, j))):
                out.append(ShardDescriptor(kind, (i, j), sides))
    return out


def _negative_shards_b(n):
    out = []
    for j in range(1, n + 1):
        for sides in _two_way(list(range(1, j))):
            out.append(ShardDescriptor("B", (0, j), sides))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            middle = [-k for k in range(i + 1, j)]
            for sign in "+-":
                forbidden = ("R", "R") if sign == "+" else ("L", "L")
                options = [p for p in itertools.product("LR", repeat=2) if p != forbidden]
                for low in itertools.product(options, repeat=i - 1):
                    low_sides = tuple(t for k, (a, b) in zip(range(1, i), low)
                                      for t in ((k, a), (-k, b)))
                    for mid in _two_way(middle):
                        out.append(ShardDescriptor("B", (i, -j), low_sides + mid, sign))
    return out


def _negative_shards_d(n):
    out = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            middle = [-k for k in range(i + 1, j)]
            for low in itertools.product(("LR", "RL", "LL", "RR"), repeat=i - 1):
                zero = [k for k, c in zip(range(1, i), low) if c[0] == c[1]]
                signs = {low[k - 1] for k in zero}
                if len(signs) > 1:
                    continue
                sign = None
                if zero:
                    sign = "+" if signs.pop() == "LL" else "-"
                low_sides = tuple(t for k, (a, b) in zip(range(1, i), low)
                                  for t in ((k, a), (-k, b)))
                for mid in _two_way(middle):
                    out.append(ShardDescriptor("D", (i, -j), low_sides + mid, sign,
                                               min(zero) if zero else None))
    return out


def enumerate_shards(kind: TypeTag, n: int) -> list[ShardDescriptor]:
    """All shards of the type's reflection arrangement, in a fixed order."""
    if kind == "A":
        return _same_sign_shards("A", n)
    if kind == "B":
        return _same_sign_shards("B", n) + _negative_shards_b(n)
    if kind == "D":
        if n < 2:
            raise ValueError("type D needs n >= 2")
        return _same_sign_shards("D", n) + _negative_shards_d(n)
    raise ValueError(f"unknown type {kind!r}")


def shard_count_formula(kind: TypeTag, n: int) -> int:
    if kind == "A":
        return 2**n - n - 1
    if kind == "B":
        return 3**n - n - 1
    return 3**n - n * 2 ** (n - 1) - n - 1


def hyperplane_count_formula(kind: TypeTag, hyperplane: tuple[int, int]) -> int:
    i, j = hyperplane
    if j > 0:
        return 2 ** (j - i - 1)
    j = -j
    if kind == "B":
        return 2 ** (j - i) * 3 ** (i - 1)
    return 2 ** (j - i) * 3 ** (i - 1) - 2 ** (j - 2)


def shard_to_element(s: ShardDescriptor, n: int) -> Element:
    """The one-descent element whose cone is the shard."""
    cl = closure(shard_cone(s, n))
    try:
        w = element_of_closure(cl)
    except ValueError:
        raise ValueError(f"invalid shard descriptor {s}") from None
    if descent_count(w) != 1:
        raise ValueError(f"invalid shard descriptor {s}: collapses to {w}")
    return w


@lru_cache(maxsize=None)
def shard_index(kind: TypeTag, n: int) -> dict[Element, ShardDescriptor]:
    """Map each one-descent element to its shard descriptor."""
    out = {}
    for s in enumerate_shards(kind, n):
        w = shard_to_element(s, n)
        if w in out:
            raise ValueError(f"shards {out[w]} and {s} give the same element {w}")
        out[w] = s
    return out


def descriptor_of(w: Element) -> ShardDescriptor:
    return shard_index(w.kind, w.n)[w]


def shard_of_pair(w: Element, big: int, small: int) -> ShardDescriptor:
    """Type A shard for two letters big > small in the same decreasing run."""
    pos = {x: i for i, x in enumerate(w.word)}
    sides = tuple((k, "L" if pos[k] < pos[big] else "R") for k in range(small + 1, big))
    return ShardDescriptor("A", (small, big), sides)


def decompose_into_shards(w: Element) -> set[ShardDescriptor]:
    """Shards whose intersection is C(w).

    Type A uses one shard per pair of letters sharing a block; types B and D
    use all atoms below w.
    """
    if w.kind == "A":
        out = set()
        for blk in blocks_of(w).blocks:
            for a, b in itertools.combinations(blk, 2):
                out.add(shard_of_pair(w, a, b))
        return out
    return atom_shards(w)


def atom_shards(w: Element) -> set[ShardDescriptor]:
    return {s for a, s in shard_index(w.kind, w.n).items() if leq(a, w)}


def join_of_shards(shards, kind: TypeTag, n: int) -> Element:
    acc = identity(kind, n)
    for s in sorted(shards):
        acc = join_direct(acc, shard_to_element(s, n))
    return acc


def check_shard_geometry(kind: TypeTag, n: int) -> list[str]:
    """Cross-check cones of elements against cones built from shards.

    Returns a list of problems: each C(w) must be the intersection of the
    shards containing it, and intersecting C(w) with any shard must give
    another C(w').
    """
    shards = [(s, closure(shard_cone(s, n))) for s in enumerate_shards(kind, n)]
    problems = []
    known = set()
    elements = enumerate_elements(kind, n)
    cones = {w: closure(cone_of(w)) for w in elements}
    known = set(cones.values())
    for w, cw in cones.items():
        containing = [sc for _, sc in shards if cw.implies(sc)]
        acc = ConeSystem(kind, n, frozenset(), frozenset())
        for s, sc in shards:
            if cw.implies(sc):
                acc = acc.union(shard_cone(s, n))
            meet = closure(ConeSystem(kind, n, frozenset(), frozenset(_pairs(cw))).union(shard_cone(s, n)))
            if meet not in known:
                problems.append(f"C({w}) ∩ {s} is not a cone of the model")
        if closure(acc) != cw:
            problems.append(f"C({w}) is not the intersection of its {len(containing)} shards")
    return problems


def _pairs(cl):
    return {(cl.letter(a), cl.letter(b)) for a, row in enumerate(cl.reach)
            for b in range(len(cl.reach)) if a != b and row >> b & 1}
