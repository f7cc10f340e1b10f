"""Block decompositions (permutation pre-orders) and the shard intersection order.

An element is cut at its ascents into maximal decreasing runs, the blocks.
Blocks whose value ranges overlap are comparable, the one further left being
smaller.  In type D the two central blocks of a forked permutation are an
exception: they compare only when some letter of the left one sits strictly
between two letters of the right one without being the negative of either.

>>> from shardlat.elements import parse_element as P
>>> leq(P("1|2|5|73|4|6|8", "A"), P("2|5|73|4|861", "A"))
True
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal

from .elements import Element, TypeTag, descent_count, make

Relation = Literal["less", "greater", "incomparable", "equal"]


def _runs(seq) -> list[list[int]]:
    runs: list[list[int]] = []
    for x in seq:
        if runs and runs[-1][-1] > x:
            runs[-1].append(x)
        else:
            runs.append([x])
    return runs


@dataclass(frozen=True)
class BlockPreorder:
    """Blocks in left-to-right order with their indices.

    Type A blocks are indexed 1..k, type B blocks -k..k (d_0 holds 0) and
    type D blocks -k..k, where the center is either a zero block d_0 or the
    split pair d_{-1}, d_1 with |w(1)| in d_1.
    """

    kind: TypeTag
    n: int
    blocks: tuple[tuple[int, ...], ...]
    indices: tuple[int, ...]
    center: Literal["zero", "split", None] = None
    _where: dict = field(default=None, compare=False, repr=False)
    _order: tuple = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        where = {x: pos for pos, b in enumerate(self.blocks) for x in b}
        object.__setattr__(self, "_where", where)
        object.__setattr__(self, "_order", _preorder_matrix(self))

    @property
    def corank(self) -> int:
        """Number of positively indexed blocks (k); for type A all blocks."""
        return sum(1 for i in self.indices if i > 0)

    def position(self, letter: int) -> int:
        """Position in the block list of the block holding `letter`."""
        return self._where[letter]

    def block_at(self, index: int) -> tuple[int, ...]:
        return self.blocks[self.indices.index(index)]

    def relation(self, p: int, q: int) -> Relation:
        """Pre-order relation between the blocks at list positions p and q."""
        if p == q:
            return "equal"
        if self._order[p][q]:
            return "less"
        if self._order[q][p]:
            return "greater"
        return "incomparable"

    def letters(self) -> list[int]:
        return [x for b in self.blocks for x in b]

    def to_element(self) -> Element:
        """Rebuild the group element by concatenating the blocks."""
        seq = self.letters()
        if self.kind == "A":
            return make("A", seq)
        if self.kind == "B":
            return make("B", seq[self.n + 1:])
        n = self.n
        return make("D", [abs(seq[n])] + seq[n + 1:])

    def __str__(self) -> str:
        return self.to_element().__str__()


def _preorder_matrix(p: BlockPreorder) -> tuple[tuple[bool, ...], ...]:
    """Transitive closure of the direct comparisons between blocks."""
    k = len(p.blocks)
    lo = [min(b) for b in p.blocks]
    hi = [max(b) for b in p.blocks]
    rel = [[False] * k for _ in range(k)]
    split_pair = None
    if p.center == "split":
        split_pair = (p.indices.index(-1), p.indices.index(1))
    for a in range(k):
        for b in range(a + 1, k):
            if (a, b) == split_pair:
                rel[a][b] = _center_comparable(p.blocks[a], p.blocks[b])
            else:
                rel[a][b] = lo[a] <= hi[b] and lo[b] <= hi[a]
    for m in range(k):
        for a in range(k):
            if rel[a][m]:
                for b in range(k):
                    if rel[m][b]:
                        rel[a][b] = True
    return tuple(tuple(r) for r in rel)


def _center_comparable(left: tuple[int, ...], right: tuple[int, ...]) -> bool:
    # some i < k < j with i, j in the right block, k in the left block, k != -i, -j
    for i in right:
        for j in right:
            if i < j:
                for k in left:
                    if i < k < j and k != -i and k != -j:
                        return True
    return False


@lru_cache(maxsize=1 << 16)
def blocks_of(e: Element) -> BlockPreorder:
    """Cut the (long or forked) word into its maximal decreasing runs.

    >>> from shardlat.elements import PermA
    >>> [list(b) for b in blocks_of(PermA((2, 8, 3, 9, 6, 4, 5, 1, 7))).blocks]
    [[2], [8, 3], [9, 6, 4], [5, 1], [7]]
    """
    n = e.n
    if e.kind == "A":
        runs = _runs(e.word)
        return BlockPreorder("A", n, tuple(map(tuple, runs)), tuple(range(1, len(runs) + 1)))
    if e.kind == "B":
        runs = _runs(e.long_form())
        z = next(i for i, r in enumerate(runs) if 0 in r)
        return BlockPreorder("B", n, tuple(map(tuple, runs)),
                             tuple(range(-z, len(runs) - z)), "zero")
    left, right = e.forked_form()
    c = e.fork
    lr, rr = _runs(left), _runs(right)
    a = left[-1]
    if a > c:
        middle = [lr.pop() + [c, -c] + rr.pop(0)]
        center = "zero"
    elif a > -c:
        middle = [lr.pop() + [-c], [c] + rr.pop(0)]
        center = "split"
    else:
        middle = [[-c], [c]]
        center = "split"
    blocks = tuple(map(tuple, lr + middle + rr))
    k = len(rr) + (1 if center == "split" else 0)
    if center == "zero":
        idx = tuple(range(-k, k + 1))
    else:
        idx = tuple(range(-k, 0)) + tuple(range(1, k + 1))
    return BlockPreorder("D", n, blocks, idx, center)


def comparable(p: BlockPreorder, i: int, j: int) -> Relation:
    """Compare the blocks with indices i and j (values from p.indices, not list positions)."""
    return p.relation(p.indices.index(i), p.indices.index(j))


def letters_of(kind: TypeTag, n: int) -> list[int]:
    if kind == "A":
        return list(range(1, n + 1))
    if kind == "B":
        return list(range(-n, n + 1))
    return [x for x in range(-n, n + 1) if x]


def side_facts(p: BlockPreorder) -> list[tuple[int, int, int]]:
    """Triples (r, pos, sign): letter r lies inside the range of the block at
    list position pos, with sign -1 if x_r <= x_block and +1 if x_block <= x_r."""
    letters = set(letters_of(p.kind, p.n))
    out = []
    for pos, blk in enumerate(p.blocks):
        members = set(blk)
        seen = set()
        for s, lo in enumerate(sorted(blk)):
            for hi in sorted(blk)[s + 1:]:
                for r in range(lo + 1, hi):
                    if r in seen or r in members or r not in letters:
                        continue
                    if p.kind == "D" and (r == -lo or r == -hi):
                        continue
                    seen.add(r)
                    rel = p.relation(p.position(r), pos)
                    if rel == "less":
                        out.append((r, pos, -1))
                    elif rel == "greater":
                        out.append((r, pos, 1))
                    elif p.kind != "D":
                        raise AssertionError(f"incomparable blocks in type {p.kind}: {p}")
    return out


def leq(u: Element, v: Element) -> bool:
    """u <= v: u refines v and every letter inside a block range of u keeps
    its side in v unless it is absorbed into that block."""
    if u.kind != v.kind or u.n != v.n:
        raise ValueError("elements of different groups")
    pu, pv = blocks_of(u), blocks_of(v)
    for blk in pu.blocks:
        target = pv.position(blk[0])
        if any(pv.position(x) != target for x in blk[1:]):
            return False
    for r, pos, sign in side_facts(pu):
        target = pv.position(pu.blocks[pos][0])
        here = pv.position(r)
        if here == target:
            continue
        rel = pv.relation(here, target)
        if rel != ("less" if sign < 0 else "greater"):
            return False
    return True


def is_cover(u: Element, v: Element) -> bool:
    return descent_count(v) == descent_count(u) + 1 and leq(u, v)


def order_facts(e: Element) -> frozenset[tuple[int, int]]:
    """All direct relations x_a <= x_b carried by the pre-order of e.

    u <= v exactly when order_facts(u) is a subset of order_facts(v); this is
    the same test as `leq`, in a form suited to bulk comparison.
    """
    p = blocks_of(e)
    facts = set()
    for blk in p.blocks:
        for a in blk:
            for b in blk:
                if a != b:
                    facts.add((a, b))
    for r, pos, sign in side_facts(p):
        for x in p.blocks[pos]:
            facts.add((r, x) if sign < 0 else (x, r))
    if e.kind != "A":
        facts |= {(-b, -a) for a, b in facts}
    return frozenset(facts)


def join_direct(u: Element, v: Element) -> Element:
    """The element whose cone is C(u) ∩ C(v), found by constraint closure.

    >>> from shardlat.elements import parse_element as P
    >>> str(join_direct(P("2|83|964|51|7", "A"), P("31|2|4|5|6|7|8|9", "A")))
    '98654321|7'
    """
    from .cones import closure, cone_of, element_of_closure

    if u.kind != v.kind or u.n != v.n:
        raise ValueError("elements of different groups")
    cu, cv = cone_of(u), cone_of(v)
    return element_of_closure(closure(cu.union(cv)))
