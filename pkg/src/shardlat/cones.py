"""Cones C(w) as systems of constraints x_a = x_b and x_a <= x_b.

Letters are signed with x_{-i} = -x_i and, in types B and D, x_0 = 0.  Every
constraint compares two signed coordinates with constant 0, so implication
is reachability in a digraph on the letters: each edge a -> b (x_a <= x_b)
comes with its mirror -b -> -a, and a path from a to -a pins x_a <= 0, which
we record as edges a -> 0 -> -a.  The closure of that digraph is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .elements import Element, TypeTag, make, rank_max
from .preorders import blocks_of, letters_of, side_facts


@dataclass(frozen=True)
class ConeSystem:
    kind: TypeTag
    n: int
    equalities: frozenset[tuple[int, int]]
    inequalities: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.kind != "A":
            eq = self.equalities | {(-a, -b) for a, b in self.equalities}
            ineq = self.inequalities | {(-b, -a) for a, b in self.inequalities}
            object.__setattr__(self, "equalities", frozenset(eq))
            object.__setattr__(self, "inequalities", frozenset(ineq))

    def union(self, other: "ConeSystem") -> "ConeSystem":
        if (self.kind, self.n) != (other.kind, other.n):
            raise ValueError("cones of different groups")
        return ConeSystem(self.kind, self.n, self.equalities | other.equalities,
                          self.inequalities | other.inequalities)

    def __str__(self) -> str:
        return render(closure(self))


def cone_of(w: Element) -> ConeSystem:
    p = blocks_of(w)
    eqs = set()
    for blk in p.blocks:
        eqs.update(zip(blk, blk[1:]))
    ineqs = set()
    for r, pos, sign in side_facts(p):
        x = p.blocks[pos][0]
        ineqs.add((r, x) if sign < 0 else (x, r))
    return ConeSystem(w.kind, w.n, frozenset(eqs), frozenset(ineqs))


@dataclass(frozen=True)
class Closure:
    """Reachability rows: bit j of reach[i] means x_{node(i)} <= x_{node(j)}."""

    kind: TypeTag
    n: int
    reach: tuple[int, ...]

    def node(self, letter: int) -> int:
        return letter - 1 if self.kind == "A" else letter + self.n

    def letter(self, node: int) -> int:
        return node + 1 if self.kind == "A" else node - self.n

    def le(self, a: int, b: int) -> bool:
        return bool(self.reach[self.node(a)] >> self.node(b) & 1)

    def implies(self, other: "Closure") -> bool:
        """Every relation of `other` holds here, i.e. self's cone lies in other's."""
        return all(o & ~s == 0 for s, o in zip(self.reach, other.reach))

    def classes(self) -> list[list[int]]:
        """Equality classes of letters (node 0 included for B and D)."""
        seen, out = set(), []
        size = len(self.reach)
        for i in range(size):
            if i in seen:
                continue
            cls = [j for j in range(size) if self.reach[i] >> j & 1 and self.reach[j] >> i & 1]
            seen.update(cls)
            out.append([self.letter(j) for j in cls])
        return out


def closure(c: ConeSystem) -> Closure:
    return _closure(c.kind, c.n, c.equalities, c.inequalities)


@lru_cache(maxsize=1 << 15)
def _closure(kind, n, equalities, inequalities) -> Closure:
    size = n if kind == "A" else 2 * n + 1
    off = -1 if kind == "A" else n
    reach = [1 << i for i in range(size)]

    def edge(a, b):
        reach[a + off] |= 1 << (b + off)
        if kind != "A":
            reach[-b + off] |= 1 << (-a + off)

    for a, b in equalities:
        edge(a, b)
        edge(b, a)
    for a, b in inequalities:
        edge(a, b)
    while True:
        for m in range(size):
            bit = 1 << m
            row = reach[m]
            for i in range(size):
                if reach[i] & bit:
                    reach[i] |= row
        if kind == "A":
            break
        changed = False
        for a in range(-n, n + 1):
            if a and reach[a + off] >> (-a + off) & 1 and not reach[a + off] >> off & 1:
                edge(a, 0)
                changed = True
        if not changed:
            break
    return Closure(kind, n, tuple(reach))


def cone_contains(outer: ConeSystem, inner: ConeSystem) -> bool:
    """True when the cone of `inner` lies inside the cone of `outer`."""
    if (outer.kind, outer.n) != (inner.kind, inner.n):
        raise ValueError("cones of different groups")
    return closure(inner).implies(closure(outer))


def cone_dim(c: ConeSystem | Closure) -> int:
    cl = c if isinstance(c, Closure) else closure(c)
    classes = cl.classes()
    if cl.kind == "A":
        return len(classes) - 1
    return sum(1 for cls in classes if 0 not in cls) // 2


def render(cl: Closure) -> str:
    """Chained-relation text, one clause per covering relation between classes.

    >>> from shardlat.elements import PermA
    >>> render(closure(cone_of(PermA((3, 1, 2)))))
    'x3=x1 <= x2'
    """
    def name(x):
        return f"-x{-x}" if x < 0 else f"x{x}" if x else "0"

    classes = [sorted(cls, key=lambda x: (abs(x), x < 0), reverse=True) for cls in cl.classes()]
    if cl.kind != "A":
        # show each ± pair once, keeping the class that has the larger positive letter
        kept = []
        for cls in classes:
            if 0 in cls or max(cls) >= -min(cls):
                kept.append(cls)
        classes = kept
    texts = ["=".join(name(x) for x in cls) for cls in classes]
    clauses, used = [], set()
    for i, ci in enumerate(classes):
        for j, cj in enumerate(classes):
            if i != j and cl.le(ci[0], cj[0]):
                between = any(cl.le(ci[0], ck[0]) and cl.le(ck[0], cj[0])
                              for k, ck in enumerate(classes) if k not in (i, j))
                if not between:
                    clauses.append(f"{texts[i]} <= {texts[j]}")
                    used.update((i, j))
    clauses += [t for i, t in enumerate(texts) if i not in used and "=" in t]
    return "; ".join(clauses) if clauses else "(no constraints)"


def element_of_closure(cl: Closure) -> Element:
    """Read the group element off a closed system that is some C(w).

    Blocks are the equality classes.  They are laid out left to right along
    the pre-order; incomparable blocks go in increasing order of values.  In
    type D the two central blocks may be incomparable, and then the layout
    with a valid fork is the one whose cone matches.
    """
    kind, n = cl.kind, cl.n
    blocks = []
    for cls in cl.classes():
        letters = sorted((x for x in cls if x or kind == "B"), reverse=True)
        if letters:
            blocks.append(tuple(letters))
    k = len(blocks)

    def before(a, b):
        x, y = blocks[a][0], blocks[b][0]
        if cl.le(x, y):
            return True
        if cl.le(y, x):
            return False
        return blocks[a][0] < blocks[b][-1]

    score = [sum(1 for b in range(k) if b != a and before(b, a)) for a in range(k)]
    order = sorted(range(k), key=lambda a: score[a])
    candidates = [order]
    ties = [i for i in range(k - 1) if score[order[i]] == score[order[i + 1]]]
    if ties:
        if kind != "D" or len(ties) != 1:
            raise ValueError("constraint closure does not describe a pre-order")
        i = ties[0]
        swapped = order[:i] + [order[i + 1], order[i]] + order[i + 2:]
        candidates.append(swapped)
    for cand in candidates:
        seq = [x for b in cand for x in blocks[b]]
        try:
            if kind == "A":
                w = make("A", seq)
            elif kind == "B":
                w = make("B", seq[n + 1:])
            else:
                w = make("D", [abs(seq[n])] + seq[n + 1:])
        except ValueError:
            continue
        if closure(cone_of(w)) == cl:
            return w
    raise ValueError("constraint closure does not describe a pre-order")


def dimension_law_holds(w: Element) -> bool:
    from .elements import descent_count

    return descent_count(w) == rank_max(w.kind, w.n) - cone_dim(cone_of(w))


__all__ = [
    "ConeSystem", "Closure", "cone_of", "closure", "cone_contains", "cone_dim",
    "render", "element_of_closure", "letters_of",
]
