"""Edge labels from merging blocks, and mechanical EL-shellability checks.

When u < v, some blocks of u do not survive in v; two such blocks lying in
one block of v form a merging pair.  A pair of block indices (i, j) is
normalised so that 0 <= |i| < j, and its position is j, except in type D
when i < 0 (a negative merge), where it is j + k with k = corank(u).  When
the central blocks d_{-j}, d_j of a split center fuse into a zero block, the
pair (-j, j) counts as a negative merge.  The label of a cover u < w is the
position of its unique merging pair.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .elements import Element, descent_count
from .lattice import Poset, PosetError
from .preorders import blocks_of, is_cover, leq


@dataclass(frozen=True, order=True)
class MergingPair:
    lo: int
    hi: int
    position: int


def _normalise(kind, i, j):
    if kind == "A":
        return (min(i, j), max(i, j))
    if abs(i) > abs(j):
        i, j = j, i
    if j < 0:
        i, j = -i, -j
    return (i, j)


def merging_pairs(u: Element, v: Element, check: bool = True) -> list[MergingPair]:
    """Merging pairs of u relative to v, sorted by position."""
    if check and not leq(u, v):
        raise ValueError(f"{u} is not below {v}")
    pu, pv = blocks_of(u), blocks_of(v)
    surviving = {frozenset(b) for b in pv.blocks}
    groups: dict[int, list[int]] = {}
    for idx, blk in zip(pu.indices, pu.blocks):
        if frozenset(blk) not in surviving:
            groups.setdefault(pv.position(blk[0]), []).append(idx)
    k = pu.corank
    out = set()
    for members in groups.values():
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                i, j = members[a], members[b]
                if u.kind != "A" and i == -j:
                    # with a split center, d_{-j} and d_j can fuse into a new
                    # zero block; that is a negative merge of (-j, j)
                    if u.kind == "D" and pu.center == "split":
                        j = abs(i)
                        out.add(MergingPair(-j, j, j + k))
                    continue
                lo, hi = _normalise(u.kind, i, j)
                pos = hi + k if u.kind == "D" and lo < 0 else hi
                out.add(MergingPair(lo, hi, pos))
    return sorted(out, key=lambda m: (m.position, m.lo, m.hi))


def edge_label(u: Element, w: Element) -> int:
    if not is_cover(u, w):
        raise ValueError(f"{u} is not covered by {w}")
    pairs = merging_pairs(u, w, check=False)
    if len(pairs) != 1:
        raise ValueError(f"cover {u} < {w} merges {len(pairs)} pairs")
    return pairs[0].position


def corank(u: Element) -> int:
    """n - d(u); equals the number of positively indexed blocks."""
    k = u.n - descent_count(u)
    if u.kind != "A" and k != blocks_of(u).corank:
        raise AssertionError(f"corank mismatch for {u}")
    return k


def cover_labels(p: Poset) -> list[list[int]]:
    """Labels aligned with p.up_covers."""
    return [[_label_unchecked(p.payloads[u], p.payloads[w]) for w in p.up_covers[u]]
            for u in range(len(p))]


def _label_unchecked(u, w):
    pairs = merging_pairs(u, w, check=False)
    if len(pairs) != 1:
        raise ValueError(f"cover {u} < {w} merges {len(pairs)} pairs")
    return pairs[0].position


@dataclass
class IntervalRecord:
    lo: int
    hi: int
    rising: tuple[int, ...]
    falling: int
    mobius: int
    status: str = "pass"
    witness: Optional[str] = None


@dataclass
class ELReport:
    ok: bool
    intervals: int
    violations: list[IntervalRecord]
    records: list[IntervalRecord] = field(default_factory=list, repr=False)

    def to_json(self, p: Poset, full: bool = False) -> dict:
        def rec(r):
            return {"lo": p.labels[r.lo], "hi": p.labels[r.hi], "status": r.status,
                    "rising": list(r.rising), "falling": r.falling, "mobius": r.mobius,
                    "witness": r.witness}
        out = {"ok": self.ok, "intervals": self.intervals,
               "violations": [rec(r) for r in self.violations]}
        if full:
            out["records"] = [rec(r) for r in self.records]
        return out


_WORKER: dict = {}


def _init_worker(p, labels):
    _WORKER["p"], _WORKER["labels"] = p, labels


def _check_tops(tops):
    return [_check_top(_WORKER["p"], _WORKER["labels"], v) for v in tops]


def _check_top(p: Poset, labels, v: int) -> list[IntervalRecord]:
    """All intervals [u, v] with top v: unique rising chain, lexicographically
    least, falling-chain count and Möbius value."""
    width = max((x for row in labels for x in row), default=0) + 2
    below = np.flatnonzero(p.leq[:, v])
    order = sorted((int(x) for x in below), key=lambda x: -p.rank[x])
    inside = p.leq[:, v]
    lex: dict[int, tuple] = {}
    lex_count: dict[int, int] = {}
    rise: dict[int, np.ndarray] = {}
    fall: dict[int, np.ndarray] = {}
    mu = np.zeros(len(p), dtype=np.int64)
    out = []
    for u in order:
        if u == v:
            lex[u], lex_count[u] = (), 1
            rise[u] = np.ones(width, dtype=np.int64)
            fall[u] = np.ones(width, dtype=np.int64)
            mu[u] = 1
            continue
        mask = p.leq[u] & inside
        mask[u] = False
        mu[u] = -mu[mask].sum()
        r = np.zeros(width, dtype=np.int64)
        f = np.zeros(width, dtype=np.int64)
        best, best_count = None, 0
        for w, lam in zip(p.up_covers[u], labels[u]):
            if not inside[w]:
                continue
            r[:lam + 1] += rise[w][lam]
            f[lam + 1:] += fall[w][lam]
            seq = (lam,) + lex[w]
            if best is None or seq < best:
                best, best_count = seq, lex_count[w]
            elif seq == best:
                best_count += lex_count[w]
        lex[u], lex_count[u], rise[u], fall[u] = best, best_count, r, f
        rec = IntervalRecord(u, v, best, int(f[-1]), int(mu[u]))
        rising_ok = all(a <= b for a, b in zip(best, best[1:]))
        if r[0] != 1:
            rec.status, rec.witness = "fail", f"{int(r[0])} rising chains"
        elif not rising_ok:
            rec.status, rec.witness = "fail", f"lexicographically least chain {best} is not rising"
        elif best_count != 1:
            rec.status, rec.witness = "fail", f"{best_count} chains share the least labels {best}"
        elif abs(rec.mobius) != rec.falling:
            rec.status, rec.witness = "fail", f"|mu| = {abs(rec.mobius)} but {rec.falling} falling chains"
        out.append(rec)
    return out


def verify_el(p: Poset, jobs: Optional[int] = 1, keep_records: bool = False) -> ELReport:
    """Check every interval of length at least one for the EL property and
    for |mu(u, v)| = number of falling chains."""
    labels = cover_labels(p)
    tops = sorted(range(len(p)), key=lambda v: (p.rank[v], v))
    jobs = jobs or os.cpu_count() or 1
    if jobs > 1 and len(p) > 200:
        chunks = [tops[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(jobs, initializer=_init_worker, initargs=(p, labels)) as ex:
            results = [rec for part in ex.map(_check_tops, chunks) for rec in part]
    else:
        results = [_check_top(p, labels, v) for v in tops]
    records = sorted((r for part in results for r in part), key=lambda r: (r.hi, r.lo))
    bad = [r for r in records if r.status != "pass"]
    return ELReport(not bad, len(records), bad, records if keep_records else [])


def falling_chains(p: Poset, u: int, v: int) -> int:
    """Maximal chains of [u, v] whose labels strictly decrease."""
    if not p.leq[u, v]:
        raise PosetError(f"{p.labels[u]} is not below {p.labels[v]}")
    if u == v:
        return 1
    inside = p.leq[:, v]
    memo: dict[tuple[int, int], int] = {}

    def count(x, bound):
        if x == v:
            return 1
        key = (x, bound)
        if key not in memo:
            total = 0
            for w in p.up_covers[x]:
                if inside[w]:
                    lam = _label_unchecked(p.payloads[x], p.payloads[w])
                    if lam < bound:
                        total += count(w, lam)
            memo[key] = total
        return memo[key]

    return count(u, float("inf"))


def chain_labels(chain: tuple) -> tuple[int, ...]:
    """Labels along a chain of group elements."""
    return tuple(_label_unchecked(a, b) for a, b in zip(chain, chain[1:]))


def greedy_rising_chain(u: Element, v: Element) -> list[Element]:
    """Build a chain by always merging the pair of least position.

    At each step the cover merging that pair must be the unique cover in
    [x, v] with the least label; an AssertionError reports otherwise.
    """
    from .elements import enumerate as enumerate_elements

    chain = [u]
    x = u
    candidates = [w for w in enumerate_elements(u.kind, u.n) if leq(w, v)]
    while x != v:
        first = merging_pairs(x, v)[0]
        covers = [w for w in candidates if is_cover(x, w)]
        labelled = sorted(((_label_unchecked(x, w), merging_pairs(x, w, check=False), w)
                           for w in covers), key=lambda t: t[0])
        lam, pairs, w = labelled[0]
        if pairs != [first] or lam != first.position:
            raise AssertionError(f"at {x}: least cover {w} does not merge {first}")
        if len(labelled) > 1 and labelled[1][0] <= lam:
            raise AssertionError(f"at {x}: least label {lam} is not unique")
        chain.append(w)
        x = w
    return chain
