"""Randomised checks at sizes beyond the exhaustive tests."""

from hypothesis import given, settings
from hypothesis import strategies as st

from shardlat.cones import closure, cone_contains, cone_of, element_of_closure
from shardlat.elements import descent_count, format_element, make, parse_element
from shardlat.preorders import join_direct, leq
from shardlat.sbd import (free_letters, hop, hop_class, is_231_avoiding, noncrossing_partitions,
                          phi, phi_inv)
from shardlat.shards import decompose_into_shards, join_of_shards


@st.composite
def elements(draw, kind, n):
    word = draw(st.permutations(range(1, n + 1)))
    if kind == "A":
        return make("A", tuple(word))
    signs = draw(st.lists(st.booleans(), min_size=n, max_size=n))
    word = [-x if s else x for x, s in zip(word, signs)]
    if kind == "D" and sum(signs) % 2:
        word[0] = -word[0]
    return make(kind, tuple(word))


def kinds(n_a, n_b, n_d):
    return st.one_of(elements("A", n_a), elements("B", n_b), elements("D", n_d))


@st.composite
def pairs(draw):
    kind, n = draw(st.sampled_from([("A", 7), ("B", 5), ("D", 6)]))
    return draw(elements(kind, n)), draw(elements(kind, n))


SETTINGS = settings(max_examples=150, deadline=None)


@SETTINGS
@given(pairs())
def test_order_agrees_with_cone_containment(uv):
    u, v = uv
    assert leq(u, v) == cone_contains(cone_of(u), cone_of(v))


@SETTINGS
@given(pairs())
def test_join_is_the_closure_of_the_union(uv):
    u, v = uv
    w = join_direct(u, v)
    assert leq(u, w) and leq(v, w)
    assert closure(cone_of(w)) == closure(cone_of(u).union(cone_of(v)))
    assert join_direct(v, u) == w


@SETTINGS
@given(kinds(9, 7, 7))
def test_text_and_cone_round_trips(w):
    assert parse_element(format_element(w), w.kind) == w
    assert element_of_closure(closure(cone_of(w))) == w


@SETTINGS
@given(kinds(8, 6, 6))
def test_shards_rebuild_the_element(w):
    shards = decompose_into_shards(w)
    assert join_of_shards(shards, w.kind, w.n) == w
    assert (len(shards) == 0) == (descent_count(w) == 0)


@SETTINGS
@given(elements("A", 10))
def test_hopping_at_larger_n(w):
    free = free_letters(w)
    for j in free:
        assert hop(hop(w, j), j) == w
    cls = hop_class(w)
    assert w in cls.members
    assert len(cls.members) == 2 ** cls.m


@SETTINGS
@given(st.sampled_from(noncrossing_partitions(9)))
def test_phi_on_avoiders(pi):
    w = phi_inv(pi)
    assert is_231_avoiding(w)
    assert phi(w) == pi
    assert pi.rank == descent_count(w)
    assert all(is_231_avoiding(x) for x in hop_class(w).members)
