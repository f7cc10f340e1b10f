"""Elements of the classical Weyl groups in one-line notation.

Type A_{n-1} elements are permutations of 1..n, type B_n elements are signed
permutations and type D_n elements are signed permutations with an even
number of negative entries.  Only the short word w(1)..w(n) is stored; the
long form of type B and the forked form of type D are derived on demand.

>>> descent_count(PermA((2, 8, 3, 9, 6, 4, 5, 1, 7)))
4
>>> descent_count(PermB((-1, 2, -4, -5, 3)))
3
"""

from __future__ import annotations

import itertools
import os
import re
from dataclasses import dataclass
from math import factorial
from typing import Iterator, Literal, Union

TypeTag = Literal["A", "B", "D"]
TYPES: tuple[TypeTag, ...] = ("A", "B", "D")

CAP_ENV = "SHARDLAT_CAP_ELEMENTS"
DEFAULT_ELEMENT_CAP = 10_000
ENUMERATION_CAP = 2_000_000


def element_cap() -> int:
    """Largest poset size that may be materialised (env override)."""
    raw = os.environ.get(CAP_ENV)
    if raw is None:
        return DEFAULT_ELEMENT_CAP
    cap = int(raw)
    if cap <= 0:
        raise ValueError(f"{CAP_ENV} must be positive, got {raw!r}")
    return cap


@dataclass(frozen=True)
class PermA:
    word: tuple[int, ...]

    kind = "A"

    def __post_init__(self):
        object.__setattr__(self, "word", tuple(self.word))
        if sorted(self.word) != list(range(1, len(self.word) + 1)):
            raise ValueError(f"not a permutation of 1..n: {self.word}")

    @property
    def n(self) -> int:
        return len(self.word)

    def long_form(self) -> tuple[int, ...]:
        return self.word

    def __str__(self) -> str:
        return format_element(self)


@dataclass(frozen=True)
class PermB:
    word: tuple[int, ...]

    kind = "B"

    def __post_init__(self):
        object.__setattr__(self, "word", tuple(self.word))
        if sorted(abs(x) for x in self.word) != list(range(1, len(self.word) + 1)):
            raise ValueError(f"not a signed permutation: {self.word}")

    @property
    def n(self) -> int:
        return len(self.word)

    def long_form(self) -> tuple[int, ...]:
        """Word at positions -n..n with w(0) = 0 and w(-i) = -w(i)."""
        return tuple(-x for x in reversed(self.word)) + (0,) + self.word

    def __str__(self) -> str:
        return format_element(self)


@dataclass(frozen=True)
class PermD:
    word: tuple[int, ...]

    kind = "D"

    def __post_init__(self):
        object.__setattr__(self, "word", tuple(self.word))
        n = len(self.word)
        if n < 2:
            raise ValueError("type D needs n >= 2")
        if sorted(abs(x) for x in self.word) != list(range(1, n + 1)):
            raise ValueError(f"not a signed permutation: {self.word}")
        if sum(1 for x in self.word if x < 0) % 2:
            raise ValueError(f"odd number of negative entries: {self.word}")

    @property
    def n(self) -> int:
        return len(self.word)

    @property
    def fork(self) -> int:
        """|w(1)|, the positive letter of the center column."""
        return abs(self.word[0])

    def forked_form(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """(w(-n)..w(-2), w(2)..w(n)); the center column is {fork, -fork}."""
        right = self.word[1:]
        return tuple(-x for x in reversed(right)), right

    def __str__(self) -> str:
        return format_element(self)


Element = Union[PermA, PermB, PermD]
_CLASSES = {"A": PermA, "B": PermB, "D": PermD}


def make(kind: TypeTag, word) -> Element:
    """Build an element of the given type; type D fixes the sign of w(1) by parity."""
    if kind == "D":
        word = list(word)
        if sum(1 for x in word[1:] if x < 0) % 2:
            word[0] = -abs(word[0])
        else:
            word[0] = abs(word[0])
    return _CLASSES[kind](tuple(word))


def identity(kind: TypeTag, n: int) -> Element:
    return make(kind, range(1, n + 1))


def longest(kind: TypeTag, n: int) -> Element:
    if kind == "A":
        return PermA(tuple(range(n, 0, -1)))
    return make(kind, [-i for i in range(1, n + 1)])


def rank_max(kind: TypeTag, n: int) -> int:
    return n - 1 if kind == "A" else n


def group_order(kind: TypeTag, n: int) -> int:
    if kind == "A":
        return factorial(n)
    if kind == "B":
        return 2**n * factorial(n)
    return 2 ** (n - 1) * factorial(n)


def descent_count(e: Element) -> int:
    w = e.word
    d = sum(1 for i in range(len(w) - 1) if w[i] > w[i + 1])
    if e.kind == "B":
        d += w[0] < 0
    elif e.kind == "D":
        d += -w[0] > w[1]
    return d


def _check_n(kind: TypeTag, n: int) -> None:
    if kind not in TYPES:
        raise ValueError(f"unknown type {kind!r}")
    lowest = 2 if kind == "D" else 1
    if n < lowest:
        raise ValueError(f"type {kind} needs n >= {lowest}, got {n}")


def iter_elements(kind: TypeTag, n: int) -> Iterator[Element]:
    """All elements in lexicographic order of the stored word."""
    _check_n(kind, n)
    if kind == "A":
        for p in itertools.permutations(range(1, n + 1)):
            yield PermA(p)
        return
    # lexicographic order with -n < ... < -1 < 1 < ... < n
    letters = sorted(list(range(-n, 0)) + list(range(1, n + 1)))
    cls = _CLASSES[kind]

    def extend(prefix: list[int], used: set[int]):
        if len(prefix) == n:
            if kind == "B" or sum(1 for x in prefix if x < 0) % 2 == 0:
                yield cls(tuple(prefix))
            return
        for x in letters:
            if abs(x) not in used:
                prefix.append(x)
                used.add(abs(x))
                yield from extend(prefix, used)
                used.discard(abs(x))
                prefix.pop()

    yield from extend([], set())


def enumerate(kind: TypeTag, n: int, cap: int = ENUMERATION_CAP) -> list[Element]:  # noqa: A001
    _check_n(kind, n)
    size = group_order(kind, n)
    if size > cap:
        raise ValueError(f"{kind}_{n} has {size} elements, above the cap {cap}")
    return list(iter_elements(kind, n))


def one_descent_elements(kind: TypeTag, n: int, cap: int = ENUMERATION_CAP) -> list[Element]:
    return [e for e in enumerate(kind, n, cap) if descent_count(e) == 1]


# ---------------------------------------------------------------- text forms

def _letters(xs, compact: bool) -> str:
    return ("" if compact else ",").join(str(x) for x in xs)


def format_element(e: Element) -> str:
    """Bar notation: blocks are the maximal decreasing runs."""
    from .preorders import blocks_of

    p = blocks_of(e)
    compact = e.kind == "A" and e.n <= 9
    if e.kind != "D":
        return "|".join(_letters(b, compact) for b in p.blocks)
    c = e.fork
    parts = []
    for idx, b in zip(p.indices, p.blocks):
        if idx == 0:
            i = b.index(c)
            parts.append(_letters(b[:i], False) + ("," if i else "") + f"{{{c},{-c}}}"
                         + ("," if i + 2 < len(b) else "") + _letters(b[i + 2:], False))
        elif idx == -1 and p.center == "split":
            parts.append(_letters(b[:-1], False) + ("," if len(b) > 1 else "") + f"{{{-c}")
        elif idx == 1 and p.center == "split":
            parts.append(f"{c}}}" + ("," if len(b) > 1 else "") + _letters(b[1:], False))
        else:
            parts.append(_letters(b, False))
    return "|".join(parts)


def format_word(e: Element) -> str:
    return ",".join(str(x) for x in e.word)


_TOKEN = re.compile(r"[±+-]?\d+")


def parse_element(text: str, kind: TypeTag) -> Element:
    """Parse bar notation, CSV words, B long forms and D forked forms.

    >>> parse_element("2|83|964|51|7", "A").word
    (2, 8, 3, 9, 6, 4, 5, 1, 7)
    >>> parse_element("-3|5,4,-2|1,0,-1|2,-4,-5|3", "B").word
    (-1, 2, -4, -5, 3)
    >>> parse_element("±4,-5,-1,-3,2", "D").word
    (-4, -5, -1, -3, 2)
    """
    text = text.strip().replace("̄", "")
    if kind not in TYPES:
        raise ValueError(f"unknown type {kind!r}")
    has_sep = "," in text or " " in text
    if kind == "A" and not has_sep:
        digits = text.replace("|", "")
        if not digits.isdigit():
            raise ValueError(f"cannot parse {text!r}")
        return PermA(tuple(int(ch) for ch in digits))
    raw = _TOKEN.findall(text)
    if not raw:
        raise ValueError(f"cannot parse {text!r}")
    forked = "{" in text
    tokens = [int(t.replace("±", "")) for t in raw]
    if kind == "A":
        return PermA(tuple(tokens))
    if kind == "B":
        if 0 in tokens:
            n = (len(tokens) - 1) // 2
            if len(tokens) != 2 * n + 1 or tokens[n] != 0:
                raise ValueError(f"malformed long form {text!r}")
            return PermB(tuple(tokens[n + 1:]))
        return PermB(tuple(tokens))
    if forked:
        n = len(tokens) // 2
        if len(tokens) != 2 * n:
            raise ValueError(f"malformed forked form {text!r}")
        return make("D", [abs(tokens[n])] + tokens[n + 1:])
    return make("D", tokens)
