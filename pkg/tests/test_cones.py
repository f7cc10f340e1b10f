import pytest

from shardlat.cones import (ConeSystem, closure, cone_contains, cone_dim, cone_of,
                            dimension_law_holds, element_of_closure, render)
from shardlat.elements import enumerate, identity, longest, parse_element
from shardlat.preorders import join_direct, leq


def A(text):
    return parse_element(text, "A")


def test_identity_cone_is_unconstrained():
    for kind, n in (("A", 4), ("B", 3), ("D", 4)):
        c = cone_of(identity(kind, n))
        assert not c.equalities and not c.inequalities


def test_long_element_pins_everything():
    cl = closure(cone_of(longest("A", 5)))
    assert len(cl.classes()) == 1
    assert cone_dim(cl) == 0
    for kind, n in (("B", 3), ("D", 4)):
        assert cone_dim(cone_of(longest(kind, n))) == 0


def test_type_b_worked_cone():
    w = parse_element("-1,2,-4,-5,3", "B")
    cl = closure(cone_of(w))
    assert cl.le(1, 0) and cl.le(0, 1)                  # x1 = 0
    assert cl.le(2, -4) and cl.le(-4, 2) and cl.le(2, -5) and cl.le(-5, 2)
    assert cl.le(0, 2)                                  # 0 <= x2
    assert cl.le(-3, 2)                                 # -x3 <= x2
    assert cone_dim(cl) == 2


def test_dimensions_of_worked_examples():
    assert cone_dim(cone_of(identity("A", 9))) == 8
    assert cone_dim(cone_of(A("2|83|964|51|7"))) == 4


def test_containment_examples():
    small, big = A("1|2|5|73|4|6|8"), A("2|5|73|4|861")
    assert cone_contains(cone_of(small), cone_of(big))
    assert not cone_contains(cone_of(A("1|2|54|73|6|8")), cone_of(small))
    top = cone_of(identity("A", 8))
    assert cone_contains(top, cone_of(big))
    with pytest.raises(ValueError):
        cone_contains(top, cone_of(identity("B", 8)))


@pytest.mark.parametrize("kind,n", [("A", 5), ("B", 3), ("D", 4)])
def test_oracle_equivalence(kind, n):
    elements = enumerate(kind, n)
    cones = {w: cone_of(w) for w in elements}
    for u in elements:
        for v in elements:
            assert leq(u, v) == cone_contains(cones[u], cones[v])


@pytest.mark.parametrize("kind,n", [("A", 5), ("B", 4), ("D", 4), ("D", 5)])
def test_dimension_law(kind, n):
    assert all(dimension_law_holds(w) for w in enumerate(kind, n))


@pytest.mark.parametrize("kind,n", [("A", 5), ("B", 3), ("D", 4)])
def test_read_off_inverts_cone_of(kind, n):
    for w in enumerate(kind, n):
        assert element_of_closure(closure(cone_of(w))) == w


@pytest.mark.parametrize("kind,n", [("A", 4), ("B", 3), ("D", 4)])
def test_join_cone_is_closure_of_union(kind, n):
    elements = enumerate(kind, n)
    for u in elements[::7]:
        for v in elements[::5]:
            w = join_direct(u, v)
            assert closure(cone_of(w)) == closure(cone_of(u).union(cone_of(v)))


def test_mirrored_constraints():
    c = ConeSystem("B", 2, frozenset(), frozenset({(1, 2)}))
    assert (-2, -1) in c.inequalities
    cl = closure(ConeSystem("B", 2, frozenset({(1, -1)}), frozenset()))
    assert cl.le(1, 0) and cl.le(0, 1)


def test_unreadable_closure_is_rejected():
    # x1 = x3 without x2 in between is not the cone of any permutation
    with pytest.raises(ValueError):
        element_of_closure(closure(ConeSystem("A", 3, frozenset({(1, 3)}), frozenset())))


def test_render():
    assert render(closure(cone_of(A("312")))) == "x3=x1 <= x2"
    assert render(closure(cone_of(identity("A", 3)))) == "(no constraints)"
