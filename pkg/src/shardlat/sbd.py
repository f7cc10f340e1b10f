"""Valley-hopping on permutations, hop classes, and the symmetric boolean
decomposition of the shard intersection order on S_n.

A permutation is read as a mountain range with w(0) = w(n+1) = +inf.  A letter
is a peak if it exceeds both neighbours, a valley if it is below both, and
free otherwise.  Hopping a free letter moves it across the adjacent valleys
to the nearest slope of the same height on the other side.

The same classes restricted to 231-avoiding permutations, pushed through the
run-to-block map phi, decompose the noncrossing partition lattice.

>>> free_letters(PermA((8, 6, 2, 7, 4, 1, 3, 5, 9)))
(3, 4, 5, 6, 8, 9)
>>> gamma_vector(4)
(1, 8)
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import inf
from typing import Optional

from .elements import PermA, descent_count, enumerate as enumerate_elements, format_element
from .lattice import BooleanClass, Poset, SBDecomposition, build_poset, gamma_expansion, weyl_poset
from .preorders import blocks_of, leq


# ------------------------------------------------------------ valley hopping

def _padded(w: PermA) -> list:
    return [inf, *w.word, inf]


def free_letters(w: PermA) -> tuple[int, ...]:
    """Letters that are neither peaks nor valleys, in increasing order."""
    x = _padded(w)
    out = []
    for i in range(1, len(x) - 1):
        if x[i - 1] < x[i] < x[i + 1] or x[i - 1] > x[i] > x[i + 1]:
            out.append(x[i])
    return tuple(sorted(out))


def peaks(w: PermA) -> int:
    x = _padded(w)
    return sum(1 for i in range(1, len(x) - 1) if x[i - 1] < x[i] > x[i + 1])


def on_downslope(w: PermA, j: int) -> bool:
    x = _padded(w)
    i = x.index(j)
    return x[i - 1] > x[i] > x[i + 1]


def hop(w: PermA, j: int) -> PermA:
    """Move the free letter j across the adjacent valley(s)."""
    x = _padded(w)
    i = x.index(j)
    if x[i - 1] > j > x[i + 1]:
        k = next(k for k in range(i + 1, len(x) - 1) if x[k] < j < x[k + 1])
        y = x[1:i] + x[i + 1:k + 1] + [j] + x[k + 1:-1]
    elif x[i - 1] < j < x[i + 1]:
        k = next(k for k in range(i - 1, 0, -1) if x[k - 1] > j > x[k])
        y = x[1:k] + [j] + x[k:i] + x[i + 1:-1]
    else:
        raise ValueError(f"{j} is not a free letter of {format_element(w)}")
    return PermA(tuple(y))


def hop_many(w: PermA, letters) -> PermA:
    for j in letters:
        w = hop(w, j)
    return w


def is_descent_minimal(w: PermA) -> bool:
    """Every free letter lies on an upslope (every descent is a peak)."""
    x = w.word
    if len(x) > 1 and x[0] > x[1]:
        return False
    return all(x[i] < x[i + 1] for i in range(1, len(x) - 1) if x[i - 1] > x[i])


@dataclass(frozen=True)
class HopClass:
    """members[J] = H_J(rep) for bitmasks J over `free` in increasing order."""

    rep: PermA
    free: tuple[int, ...]
    members: tuple[PermA, ...]

    @property
    def m(self) -> int:
        return len(self.free)

    def member(self, letters) -> PermA:
        mask = sum(1 << self.free.index(j) for j in letters)
        return self.members[mask]

    def to_json(self) -> dict:
        return {"rep": format_element(self.rep), "free": list(self.free),
                "members": [format_element(w) for w in self.members]}


def hop_class(w: PermA) -> HopClass:
    down = [j for j in free_letters(w) if on_downslope(w, j)]
    rep = hop_many(w, down)
    free = free_letters(rep)
    members = []
    for mask in range(1 << len(free)):
        members.append(hop_many(rep, [j for b, j in enumerate(free) if mask >> b & 1]))
    return HopClass(rep, free, tuple(members))


def descent_minimal(n: int) -> list[PermA]:
    return [w for w in enumerate_elements("A", n) if is_descent_minimal(w)]


@lru_cache(maxsize=16)
def hop_classes(n: int) -> tuple[HopClass, ...]:
    return tuple(hop_class(w) for w in descent_minimal(n))


def gamma_vector(n: int) -> tuple[int, ...]:
    """gamma_j = number of hop classes whose representative has j descents."""
    out = [0] * ((n - 1) // 2 + 1)
    for cls in hop_classes(n):
        out[descent_count(cls.rep)] += 1
    return tuple(out)


def gamma_identity_holds(n: int) -> bool:
    """sum_w t^d(w) == sum_j gamma_j t^j (1+t)^(n-1-2j), with gamma_j also
    equal to the number of classes of size 2^(n-1-2j)."""
    hist = [0] * n
    for w in enumerate_elements("A", n):
        hist[descent_count(w)] += 1
    gamma = gamma_vector(n)
    sizes = [0] * len(gamma)
    for cls in hop_classes(n):
        sizes[(n - 1 - cls.m) // 2] += 1
    return tuple(sizes) == gamma and gamma_expansion(gamma, n - 1) == hist


def to_decomposition(p: Poset, classes) -> SBDecomposition:
    """Translate hop classes into poset indices."""
    index = {w: i for i, w in enumerate(p.payloads)}
    out = []
    for cls in classes:
        members = tuple(index[w] for w in cls.members)
        out.append(BooleanClass(members[0], cls.m, members))
    return SBDecomposition(len(p), tuple(out))


def sbd_of_symmetric_group(n: int, p: Optional[Poset] = None) -> SBDecomposition:
    p = weyl_poset("A", n) if p is None else p
    return to_decomposition(p, hop_classes(n))


# ------------------------------------------------------- 231 and partitions

def is_231_avoiding(w: PermA) -> bool:
    """No i < j < k with w(k) < w(i) < w(j).

    >>> is_231_avoiding(PermA((5, 1, 2, 4, 3))), is_231_avoiding(PermA((3, 1, 5, 2, 4)))
    (True, False)
    """
    x = w.word
    # for each j, a 231 exists iff some earlier value in (w(k), w(j)) for a later smaller w(k)
    for j in range(len(x)):
        later_min = min(x[j + 1:], default=None)
        if later_min is None:
            continue
        if any(later_min < x[i] < x[j] for i in range(j)):
            return False
    return True


@dataclass(frozen=True)
class NoncrossingPartition:
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(sorted(tuple(sorted(b)) for b in self.blocks))
        object.__setattr__(self, "blocks", blocks)
        for a, b in itertools.combinations(blocks, 2):
            if _crossing(a, b):
                raise ValueError(f"blocks {a} and {b} cross")

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def rank(self) -> int:
        return self.n - len(self.blocks)

    def refines(self, other: "NoncrossingPartition") -> bool:
        where = {x: i for i, b in enumerate(other.blocks) for x in b}
        return all(len({where[x] for x in b}) == 1 for b in self.blocks)

    def __str__(self) -> str:
        return "{" + ",".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + "}"


def _crossing(a, b) -> bool:
    return any(p < q < r < s or q < p < s < r
               for p, r in itertools.combinations(a, 2) for q, s in itertools.combinations(b, 2))


def phi(w: PermA) -> NoncrossingPartition:
    """Decreasing runs of a 231-avoiding permutation, read as blocks."""
    if not is_231_avoiding(w):
        raise ValueError(f"{format_element(w)} contains 231")
    return NoncrossingPartition(blocks_of(w).blocks)


def phi_inv(pi: NoncrossingPartition) -> PermA:
    """Blocks written decreasingly, in increasing order of their minima."""
    word = [x for b in sorted(pi.blocks, key=min) for x in sorted(b, reverse=True)]
    return PermA(tuple(word))


def set_partitions(n: int):
    def extend(i, blocks):
        if i > n:
            yield [tuple(b) for b in blocks]
            return
        for b in blocks:
            b.append(i)
            yield from extend(i + 1, blocks)
            b.pop()
        blocks.append([i])
        yield from extend(i + 1, blocks)
        blocks.pop()

    yield from extend(1, [])


def noncrossing_partitions(n: int) -> list[NoncrossingPartition]:
    out = []
    for blocks in set_partitions(n):
        if not any(_crossing(a, b) for a, b in itertools.combinations(blocks, 2)):
            out.append(NoncrossingPartition(tuple(blocks)))
    return sorted(out, key=lambda pi: (pi.rank, pi.blocks))


def nc_poset(n: int) -> Poset:
    """NC(n) under refinement, built from set partitions alone."""
    parts = noncrossing_partitions(n)
    return build_poset(parts, lambda a, b: a.refines(b), rank=[pi.rank for pi in parts],
                       labels=[str(pi) for pi in parts])


def hop_classes_231(n: int) -> tuple[HopClass, ...]:
    return tuple(c for c in hop_classes(n) if is_231_avoiding(c.rep))


def sbd_of_nc(n: int, p: Optional[Poset] = None) -> SBDecomposition:
    """Images under phi of the hop classes of 231-avoiding representatives,
    as a decomposition of the refinement poset on NC(n)."""
    p = nc_poset(n) if p is None else p
    index = {pi: i for i, pi in enumerate(p.payloads)}
    out = []
    for cls in hop_classes_231(n):
        members = tuple(index[phi(w)] for w in cls.members)
        out.append(BooleanClass(members[0], cls.m, members))
    return SBDecomposition(len(p), tuple(out))


def hop_closed_on_231(n: int) -> list[str]:
    """Classes that mix 231-avoiders with non-avoiders."""
    bad = []
    for cls in hop_classes(n):
        flags = {is_231_avoiding(w) for w in cls.members}
        if len(flags) > 1:
            bad.append(format_element(cls.rep))
    return bad


@dataclass
class NCReport:
    ok: bool
    size: int
    rank_profile: tuple[int, ...]
    violations: list[str]

    def to_json(self) -> dict:
        return {"ok": self.ok, "size": self.size, "rank_profile": list(self.rank_profile),
                "violations": self.violations}


def verify_nc_sublattice(n: int, ambient: Optional[Poset] = None) -> NCReport:
    """Compare the 231-avoiders inside (S_n, <=) with refinement on NC(n).

    Checks that phi is a bijection onto NC(n) preserving rank, that the shard
    order on avoiders agrees with refinement of their images, and that joins
    and meets taken in S_n of two avoiders are again avoiders.
    """
    from .lattice import join, meet

    ambient = weyl_poset("A", n) if ambient is None else ambient
    problems = []
    avoiders = [i for i, w in enumerate(ambient.payloads) if is_231_avoiding(w)]
    ncs = noncrossing_partitions(n)
    images = {i: phi(ambient.payloads[i]) for i in avoiders}
    if sorted(images.values(), key=lambda pi: pi.blocks) != sorted(ncs, key=lambda pi: pi.blocks):
        problems.append("phi is not a bijection onto NC(n)")
    for i, pi in images.items():
        if phi_inv(pi) != ambient.payloads[i]:
            problems.append(f"phi_inv(phi({ambient.labels[i]})) differs")
        if pi.rank != ambient.rank[i]:
            problems.append(f"rank of {pi} differs from descents of {ambient.labels[i]}")
    inside = set(avoiders)
    for a in avoiders:
        for b in avoiders:
            if bool(ambient.leq[a, b]) != images[a].refines(images[b]):
                problems.append(f"order mismatch at {ambient.labels[a]}, {ambient.labels[b]}")
            if a < b:
                for op, name in ((join, "join"), (meet, "meet")):
                    c = op(ambient, a, b)
                    if c not in inside:
                        problems.append(f"{name} of {ambient.labels[a]}, {ambient.labels[b]} "
                                        f"leaves the avoiders")
    profile = [0] * n
    for i in avoiders:
        profile[ambient.rank[i]] += 1
    while len(profile) > 1 and profile[-1] == 0:
        profile.pop()
    return NCReport(not problems, len(avoiders), tuple(profile), problems)


# The maximal boolean interval of NC(4) in Simion and Ullman's decomposition,
# as 231-avoiding permutations; the hop decomposition gives a different one.
SIMION_ULLMAN_MAXIMAL_NC4 = ("1|2|3|4", "21|3|4", "1|32|4", "1|2|43",
                             "321|4", "21|43", "1|432", "4321")


def maximal_hop_class(n: int) -> HopClass:
    return max(hop_classes(n), key=lambda c: (c.m, c.rep.word))


def leq_embeds_subsets(cls: HopClass) -> bool:
    """leq(H_J, H_K) holds exactly when J is a subset of K."""
    return all(leq(x, y) == (a & ~b == 0)
               for a, x in enumerate(cls.members) for b, y in enumerate(cls.members))
