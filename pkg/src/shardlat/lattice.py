"""Finite graded posets: construction, Möbius function, chains, lattice checks,
products and symmetric boolean decompositions.

The order relation is a dense boolean matrix, so posets are limited to the
element cap (10 000 by default, see `elements.element_cap`).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .elements import TypeTag, descent_count, element_cap, enumerate as enumerate_elements, rank_max
from .preorders import order_facts

CHAIN_CAP = 1_000_000


class PosetError(ValueError):
    pass


@dataclass(eq=False)
class Poset:
    payloads: list
    labels: list[str]
    leq: np.ndarray
    rank: list[int]
    up_covers: list[list[int]]
    down_covers: list[list[int]]
    kind: Optional[str] = None
    n: Optional[int] = None
    _mobius_rows: dict = field(default_factory=dict, repr=False)
    _bits: Optional[tuple] = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def rank_max(self) -> int:
        return max(self.rank)

    @property
    def bottom(self) -> int:
        return self.rank.index(0)

    @property
    def top(self) -> int:
        return self.rank.index(self.rank_max)

    def index(self, payload) -> int:
        return self.payloads.index(payload)

    def le(self, u: int, v: int) -> bool:
        return bool(self.leq[u, v])

    def is_cover(self, u: int, v: int) -> bool:
        return self.rank[v] == self.rank[u] + 1 and bool(self.leq[u, v])

    def rank_profile(self) -> tuple[int, ...]:
        prof = [0] * (self.rank_max + 1)
        for r in self.rank:
            prof[r] += 1
        return tuple(prof)

    def covers(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(len(self)) for v in self.up_covers[u]]

    def interval(self, u: int, v: int) -> list[int]:
        mask = self.leq[u] & self.leq[:, v]
        return [int(x) for x in np.flatnonzero(mask)]

    def bitsets(self):
        """(order, up, down): elements sorted by rank, and up/down sets as ints
        over that order, so the lowest set bit is an element of least rank."""
        if self._bits is None:
            order = sorted(range(len(self)), key=lambda x: (self.rank[x], x))
            perm = self.leq[np.ix_(order, order)]
            up = [_row_int(perm[i]) for i in range(len(order))]
            down = [_row_int(perm[:, i]) for i in range(len(order))]
            self._bits = (order, up, down)
        return self._bits


def _row_int(row: np.ndarray) -> int:
    return int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little")


def build_poset(payloads: Sequence, leq_fn: Optional[Callable] = None, *,
                matrix: Optional[np.ndarray] = None, rank: Optional[Sequence[int]] = None,
                labels: Optional[Sequence[str]] = None, kind=None, n=None,
                cap: Optional[int] = None, check: bool = True) -> Poset:
    """Materialise a graded poset from a relation function or matrix.

    Covers come from rank-difference-1 filtering when ranks are given; the
    transitive reduction is computed as well and must agree.
    """
    size = len(payloads)
    cap = element_cap() if cap is None else cap
    if size > cap:
        raise PosetError(f"{size} elements exceed the element cap {cap}")
    if size == 0:
        raise PosetError("empty poset")
    if matrix is None:
        if leq_fn is None:
            raise PosetError("need leq_fn or matrix")
        matrix = np.array([[bool(leq_fn(a, b)) for b in payloads] for a in payloads], dtype=bool)
    leq = np.asarray(matrix, dtype=bool)
    if leq.shape != (size, size):
        raise PosetError("relation matrix has the wrong shape")
    strict = leq.copy()
    np.fill_diagonal(strict, False)
    if check:
        if not leq.diagonal().all():
            raise PosetError("relation is not reflexive")
        if (strict & strict.T).any():
            a, b = np.argwhere(strict & strict.T)[0]
            raise PosetError(f"relation is not antisymmetric at {int(a)}, {int(b)}")
    two_step = _two_step(strict) if check or rank is None else None
    if check and (two_step & ~strict).any():
        a, b = np.argwhere(two_step & ~strict)[0]
        raise PosetError(f"relation is not transitive at {int(a)}, {int(b)}")
    if rank is None:
        cover_mat = strict & ~two_step
        rank = _ranks_from_covers(cover_mat)
    rank = [int(r) for r in rank]
    r = np.array(rank)
    if check:
        if (strict & (r[None, :] <= r[:, None])).any():
            raise PosetError("rank does not increase along the order")
        if rank.count(0) != 1 or not leq[rank.index(0)].all():
            raise PosetError("no unique minimum of rank 0")
    cover_mat = strict & (r[None, :] == r[:, None] + 1)
    if two_step is not None:
        reduction = strict & ~two_step
        if (reduction != cover_mat).any():
            raise PosetError("poset is not graded by the given rank")
    ups = [[int(x) for x in np.flatnonzero(cover_mat[u])] for u in range(size)]
    downs = [[int(x) for x in np.flatnonzero(cover_mat[:, v])] for v in range(size)]
    labels = [str(x) for x in payloads] if labels is None else list(labels)
    return Poset(list(payloads), labels, leq, rank, ups, downs, kind, n)


def _two_step(strict: np.ndarray) -> np.ndarray:
    """Pairs joined by a strict chain of length two."""
    s = strict.astype(np.float32)
    out = np.empty_like(strict)
    step = 1024
    for lo in range(0, len(s), step):
        out[lo:lo + step] = (s[lo:lo + step] @ s) > 0
    return out


def _ranks_from_covers(cover_mat: np.ndarray) -> list[int]:
    size = len(cover_mat)
    rank = [-1] * size
    indeg = cover_mat.sum(axis=0)
    frontier = [int(x) for x in np.flatnonzero(indeg == 0)]
    for x in frontier:
        rank[x] = 0
    order = list(frontier)
    remaining = indeg.copy()
    while order:
        u = order.pop()
        for v in np.flatnonzero(cover_mat[u]):
            v = int(v)
            if rank[v] not in (-1, rank[u] + 1):
                raise PosetError("poset is not graded")
            rank[v] = rank[u] + 1
            remaining[v] -= 1
            if remaining[v] == 0:
                order.append(v)
    return rank


def weyl_poset(kind: TypeTag, n: int, cap: Optional[int] = None, check: bool = True) -> Poset:
    """The shard intersection order on the group of the given type and rank."""
    from .elements import group_order

    cap = element_cap() if cap is None else cap
    size = group_order(kind, n)
    if size > cap:
        raise PosetError(f"{kind}_{n} has {size} elements, above the element cap {cap}")
    elements = enumerate_elements(kind, n)
    facts = [order_facts(e) for e in elements]
    columns = {f: i for i, f in enumerate(sorted(set().union(*facts)))}
    m = np.zeros((len(elements), max(1, len(columns))), dtype=np.float32)
    for i, fs in enumerate(facts):
        m[i, [columns[f] for f in fs]] = 1
    sizes = m.sum(axis=1)
    leq = np.empty((len(elements), len(elements)), dtype=bool)
    step = 1024
    for lo in range(0, len(elements), step):
        leq[lo:lo + step] = (m[lo:lo + step] @ m.T) == sizes[lo:lo + step, None]
    rank = [descent_count(e) for e in elements]
    return build_poset(elements, matrix=leq, rank=rank, kind=kind, n=n, cap=cap, check=check)


# ------------------------------------------------------------------ Möbius

def _mobius_row(p: Poset, u: int) -> np.ndarray:
    row = p._mobius_rows.get(u)
    if row is None:
        row = np.zeros(len(p), dtype=np.int64)
        above = sorted(np.flatnonzero(p.leq[u]), key=lambda z: p.rank[z])
        row[u] = 1
        for z in above[1:]:
            mask = p.leq[u] & p.leq[:, z]
            mask[z] = False
            row[z] = -row[mask].sum()
        p._mobius_rows[u] = row
    return row


def mobius(p: Poset, u: int, v: int) -> int:
    if not p.leq[u, v]:
        raise PosetError(f"{p.labels[u]} is not below {p.labels[v]}")
    return int(_mobius_row(p, u)[v])


def mobius_matrix(p: Poset) -> np.ndarray:
    return np.array([_mobius_row(p, u) for u in range(len(p))])


# ------------------------------------------------------------------ chains

def maximal_chains(p: Poset, u: int, v: int, cap: int = CHAIN_CAP) -> list[tuple[int, ...]]:
    """Saturated chains u = x_0 < x_1 < ... < x_k = v in deterministic order."""
    if not p.leq[u, v]:
        raise PosetError(f"{p.labels[u]} is not below {p.labels[v]}")
    inside = p.leq[:, v]
    chains: list[tuple[int, ...]] = []
    path = [u]

    def walk(x):
        if x == v:
            chains.append(tuple(path))
            if len(chains) > cap:
                raise PosetError(f"more than {cap} maximal chains in the interval")
            return
        for y in p.up_covers[x]:
            if inside[y]:
                path.append(y)
                walk(y)
                path.pop()

    walk(u)
    return chains


# ------------------------------------------------------------------ lattices

@dataclass(frozen=True)
class LatticeCheck:
    ok: bool
    witness: Optional[tuple[int, int, str]] = None

    def __bool__(self) -> bool:
        return self.ok


def join(p: Poset, u: int, v: int) -> Optional[int]:
    order, up, _ = p.bitsets()
    pos = {x: i for i, x in enumerate(order)}
    common = up[pos[u]] & up[pos[v]]
    if not common:
        return None
    z = (common & -common).bit_length() - 1
    return order[z] if common & ~up[z] == 0 else None


def meet(p: Poset, u: int, v: int) -> Optional[int]:
    order, _, down = p.bitsets()
    pos = {x: i for i, x in enumerate(order)}
    common = down[pos[u]] & down[pos[v]]
    if not common:
        return None
    z = common.bit_length() - 1
    return order[z] if common & ~down[z] == 0 else None


def is_lattice(p: Poset) -> LatticeCheck:
    """Every pair has a least upper bound and a greatest lower bound."""
    order, up, down = p.bitsets()
    size = len(order)
    for a in range(size):
        for b in range(a + 1, size):
            common = up[a] & up[b]
            z = (common & -common).bit_length() - 1
            if not common or common & ~up[z]:
                return LatticeCheck(False, (order[a], order[b], "join"))
            common = down[a] & down[b]
            z = common.bit_length() - 1
            if not common or common & ~down[z]:
                return LatticeCheck(False, (order[a], order[b], "meet"))
    return LatticeCheck(True)


def product(p: Poset, q: Poset) -> Poset:
    """Componentwise order; element (a, b) sits at index a * len(q) + b."""
    leq = np.kron(p.leq.astype(np.uint8), q.leq.astype(np.uint8)).astype(bool)
    payloads = [(a, b) for a in p.payloads for b in q.payloads]
    labels = [f"({x}, {y})" for x in p.labels for y in q.labels]
    rank = [ra + rb for ra in p.rank for rb in q.rank]
    return build_poset(payloads, matrix=leq, rank=rank, labels=labels)


def boolean_lattice(m: int) -> Poset:
    subsets = list(range(1 << m))
    return build_poset(subsets, lambda a, b: a & ~b == 0,
                       rank=[bin(s).count("1") for s in subsets],
                       labels=[format(s, f"0{max(m, 1)}b") for s in subsets])


def poset_from_covers(labels: Sequence[str], covers: Sequence[tuple[str, str]]) -> Poset:
    """Build a poset from named cover pairs (lower, upper)."""
    idx = {x: i for i, x in enumerate(labels)}
    size = len(labels)
    rel = np.eye(size, dtype=bool)
    for lo, hi in covers:
        rel[idx[lo], idx[hi]] = True
    for m in range(size):
        rel |= rel[:, [m]] & rel[[m], :]
    return build_poset(list(labels), matrix=rel, labels=labels)


# ------------------------------------------------------------------ SBDs

@dataclass(frozen=True)
class BooleanClass:
    """A copy of the boolean lattice B_m: members[J] for bitmasks J < 2^m."""

    base: int
    m: int
    members: tuple[int, ...]


@dataclass(frozen=True)
class SBDecomposition:
    size: int
    classes: tuple[BooleanClass, ...]


@dataclass
class SBDReport:
    ok: bool
    violations: list[str]
    gamma: tuple[int, ...]
    identity_holds: bool

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": self.violations, "gamma": list(self.gamma),
                "gamma_identity": self.identity_holds}


def gamma_expansion(gamma: Sequence[int], top: int) -> list[int]:
    """Coefficients of sum_j gamma_j t^j (1+t)^(top-2j)."""
    from math import comb

    out = [0] * (top + 1)
    for j, g in enumerate(gamma):
        for i in range(top - 2 * j + 1):
            out[j + i] += g * comb(top - 2 * j, i)
    return out


def verify_sbd(p: Poset, d: SBDecomposition) -> SBDReport:
    problems: list[str] = []
    top = p.rank_max
    if d.size != len(p):
        problems.append(f"decomposition covers {d.size} elements, poset has {len(p)}")
    seen: dict[int, int] = {}
    for ci, cls in enumerate(d.classes):
        if len(cls.members) != 1 << cls.m or cls.members[0] != cls.base:
            problems.append(f"class {ci}: malformed member map")
            continue
        for x in cls.members:
            if x in seen:
                problems.append(f"element {p.labels[x]} in classes {seen[x]} and {ci}")
            seen[x] = ci
        r0 = p.rank[cls.base]
        if 2 * r0 + cls.m != top:
            problems.append(f"class {ci} at {p.labels[cls.base]} is not centred")
        for mask, x in enumerate(cls.members):
            if p.rank[x] != r0 + bin(mask).count("1"):
                problems.append(f"class {ci}: {p.labels[x]} has the wrong rank")
            for j in range(cls.m):
                if not mask >> j & 1 and not p.is_cover(x, cls.members[mask | 1 << j]):
                    problems.append(f"class {ci}: {p.labels[x]} -> "
                                    f"{p.labels[cls.members[mask | 1 << j]]} is not a cover")
        for a, x in enumerate(cls.members):
            for b, y in enumerate(cls.members):
                if a & ~b == 0 and not p.leq[x, y]:
                    problems.append(f"class {ci}: subset order not preserved at {a:b} <= {b:b}")
    missing = len(p) - len(seen)
    if missing:
        problems.append(f"{missing} elements belong to no class")
    gamma = [0] * (top // 2 + 1)
    for cls in d.classes:
        r0 = p.rank[cls.base]
        if r0 < len(gamma):
            gamma[r0] += 1
    while len(gamma) > 1 and gamma[-1] == 0:
        gamma.pop()
    identity = gamma_expansion(gamma, top) == list(p.rank_profile())
    return SBDReport(not problems and identity, problems, tuple(gamma), identity)


def product_sbd(dp: SBDecomposition, dq: SBDecomposition) -> SBDecomposition:
    """Classes P_i x Q_k of the product, indexed as in `product`."""
    classes = []
    for cp in dp.classes:
        for cq in dq.classes:
            low = (1 << cp.m) - 1
            members = tuple(cp.members[mask & low] * dq.size + cq.members[mask >> cp.m]
                            for mask in range(1 << (cp.m + cq.m)))
            classes.append(BooleanClass(members[0], cp.m + cq.m, members))
    return SBDecomposition(dp.size * dq.size, tuple(classes))


class SearchBudgetExceeded(RuntimeError):
    pass


def find_sbd(p: Poset, budget: int = 1_000_000) -> Optional[SBDecomposition]:
    """Exhaustive search for a symmetric boolean decomposition.

    Each step picks, among the free elements of least and of greatest rank,
    the one with the fewest free neighbours towards the middle, and grows a
    class from it (upwards from a base, downwards from a top).  Returns None
    when no decomposition exists; raises SearchBudgetExceeded when the search
    gives up before deciding.
    """
    top = p.rank_max
    free = set(range(len(p)))
    classes: list[BooleanClass] = []
    steps = [0]

    def tick():
        steps[0] += 1
        if steps[0] > budget:
            raise SearchBudgetExceeded(f"no decision after {budget} steps")

    def pick():
        lo = min(p.rank[x] for x in free)
        hi = max(p.rank[x] for x in free)
        best = None
        for x in free:
            if p.rank[x] == lo:
                key = (sum(1 for y in p.up_covers[x] if y in free), 0, x)
                if best is None or key < best[0]:
                    best = (key, x, False)
            if p.rank[x] == hi and hi != lo:
                key = (sum(1 for y in p.down_covers[x] if y in free), 1, x)
                if best is None or key < best[0]:
                    best = (key, x, True)
        return best[1], best[2]

    def place_class():
        if not free:
            return True
        start, down = pick()
        r = top - p.rank[start] if down else p.rank[start]
        m = top - 2 * r
        if m < 0:
            return False
        free.discard(start)
        if fill([start], m, down):
            return True
        free.add(start)
        return False

    def fill(members, m, down):
        tick()
        mask = len(members)
        if mask == 1 << m:
            full = mask - 1
            ordered = [members[full ^ b] for b in range(mask)] if down else members
            classes.append(BooleanClass(ordered[0], m, tuple(ordered)))
            if place_class():
                return True
            classes.pop()
            return False
        nbrs = p.down_covers if down else p.up_covers
        bits = [j for j in range(m) if mask >> j & 1]
        if len(bits) == 1:
            prev = members[1 << (bits[0] - 1)] if bits[0] > 0 else -1
            cands = [y for y in nbrs[members[0]] if y in free and y > prev]
        else:
            near = [members[mask & ~(1 << j)] for j in bits]
            cands = [y for y in nbrs[near[0]] if y in free
                     and all(y in nbrs[b] for b in near[1:])]
        for y in cands:
            members.append(y)
            free.discard(y)
            if fill(members, m, down):
                return True
            free.add(y)
            members.pop()
        return False

    if place_class():
        return SBDecomposition(len(p), tuple(classes))
    return None


# ------------------------------------------------------------------ export

def to_json(p: Poset) -> str:
    data = {
        "type": p.kind,
        "n": p.n,
        "elements": p.labels,
        "rank": p.rank,
        "covers": [[u, v] for u, v in p.covers()],
    }
    return json.dumps(data, separators=(",", ":")) + "\n"


def to_dot(p: Poset, groups: Optional[Sequence[int]] = None) -> str:
    """Hasse diagram with one layer per rank; optional class ids colour nodes."""
    palette = ["#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#a65628", "#f781bf", "#999999"]
    lines = ["digraph poset {", "  rankdir=BT;", '  node [shape=plaintext];']
    for x, label in enumerate(p.labels):
        extra = ""
        if groups is not None:
            extra = f', fontcolor="{palette[groups[x] % len(palette)]}"'
        lines.append(f'  n{x} [label="{label}"{extra}];')
    for r in range(p.rank_max + 1):
        layer = " ".join(f"n{x};" for x in range(len(p)) if p.rank[x] == r)
        lines.append(f"  {{ rank = same; {layer} }}")
    for u, v in p.covers():
        lines.append(f"  n{u} -> n{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
