from collections import Counter

import pytest

from shardlat.elements import (PermA, PermB, PermD, descent_count, element_cap, enumerate,
                               format_element, format_word, group_order, identity, longest, make,
                               one_descent_elements, parse_element, rank_max)


def test_descents_of_worked_examples():
    assert descent_count(PermA((2, 8, 3, 9, 6, 4, 5, 1, 7))) == 4
    assert descent_count(PermB((-1, 2, -4, -5, 3))) == 3
    assert descent_count(make("D", (4, -5, -1, -3, 2))) == 3


@pytest.mark.parametrize("kind,n", [("A", 5), ("B", 4), ("D", 4)])
def test_identity_and_longest(kind, n):
    assert descent_count(identity(kind, n)) == 0
    assert descent_count(longest(kind, n)) == rank_max(kind, n)


@pytest.mark.parametrize("kind,n,size", [("A", 4, 24), ("B", 3, 48), ("D", 4, 192), ("D", 2, 4)])
def test_enumeration_sizes(kind, n, size):
    elements = enumerate(kind, n)
    assert len(elements) == size == group_order(kind, n)
    assert len(set(elements)) == size


def test_enumeration_is_lexicographic():
    words = [e.word for e in enumerate("B", 3)]
    assert words == sorted(words)


@pytest.mark.parametrize("kind,n,count", [("A", 4, 11), ("B", 3, 23), ("D", 4, 44)])
def test_one_descent_counts(kind, n, count):
    assert len(one_descent_elements(kind, n)) == count


@pytest.mark.parametrize("kind,n", [("A", 6), ("B", 4), ("D", 5)])
def test_descent_distribution_is_symmetric(kind, n):
    hist = Counter(descent_count(e) for e in enumerate(kind, n))
    top = rank_max(kind, n)
    assert all(hist[k] == hist[top - k] for k in range(top + 1))


def test_reverse_complements_descents():
    for e in enumerate("A", 5):
        assert descent_count(e) + descent_count(PermA(e.word[::-1])) == 4


def test_invalid_words_rejected():
    with pytest.raises(ValueError):
        PermA((1, 1, 2))
    with pytest.raises(ValueError):
        PermB((1, -3))
    with pytest.raises(ValueError):
        PermD((-1, 2, 3))
    with pytest.raises(ValueError):
        PermD((1,))


def test_enumeration_guards():
    with pytest.raises(ValueError):
        enumerate("D", 1)
    with pytest.raises(ValueError):
        enumerate("B", 9, cap=10_000)


def test_cap_from_environment(monkeypatch):
    monkeypatch.setenv("SHARDLAT_CAP_ELEMENTS", "77")
    assert element_cap() == 77
    monkeypatch.setenv("SHARDLAT_CAP_ELEMENTS", "0")
    with pytest.raises(ValueError):
        element_cap()


def test_long_and_forked_forms():
    w = PermB((-1, 2, -4, -5, 3))
    assert w.long_form() == (-3, 5, 4, -2, 1, 0, -1, 2, -4, -5, 3)
    d = make("D", (4, -5, -1, -3, 2))
    assert d.fork == 4
    assert d.forked_form() == ((-2, 3, 1, 5), (-5, -1, -3, 2))


def test_bar_notation():
    assert format_element(PermA((2, 8, 3, 9, 6, 4, 5, 1, 7))) == "2|83|964|51|7"
    assert format_element(PermB((-1, 2, -4, -5, 3))) == "-3|5,4,-2|1,0,-1|2,-4,-5|3"
    assert format_element(identity("D", 4)) == "-4|-3|-2|{-1|1}|2|3|4"
    assert format_element(make("D", (4, -5, -1, -3, 2))) == "-2|3,1|5,{4,-4},-5|-1,-3|2"


def test_parsing_forms():
    assert parse_element("2|83|964|51|7", "A").word == (2, 8, 3, 9, 6, 4, 5, 1, 7)
    assert parse_element("2,8,3,9,6,4,5,1,7", "A").word == (2, 8, 3, 9, 6, 4, 5, 1, 7)
    assert parse_element("-3|5,4,-2|1,0,-1|2,-4,-5|3", "B").word == (-1, 2, -4, -5, 3)
    assert parse_element("-1,2,-4,-5,3", "B").word == (-1, 2, -4, -5, 3)
    assert parse_element("±4,-5,-1,-3,2", "D").word == (-4, -5, -1, -3, 2)
    assert parse_element("-2|3,1|5,{4,-4},-5|-1,-3|2", "D").word == (-4, -5, -1, -3, 2)
    with pytest.raises(ValueError):
        parse_element("", "A")
    with pytest.raises(ValueError):
        parse_element("1,2", "E")


@pytest.mark.parametrize("kind,n", [("A", 4), ("B", 3), ("D", 2), ("D", 3), ("D", 4)])
def test_text_round_trip(kind, n):
    for e in enumerate(kind, n):
        assert parse_element(format_element(e), kind) == e
        assert parse_element(format_word(e), kind) == e
