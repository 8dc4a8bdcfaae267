import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modcrit.fields import QQ
from modcrit.polynomials import PolyRing
from modcrit.rings import AffineRing, MixedRingError, MultiplicativeSet, ideal_algebra

from strategies import QQ2, nonzero_polys

node = AffineRing(QQ2, [QQ2.parse("x*y")], name="node")
free = AffineRing(QQ2, name="qxy")
ideal_gens = st.lists(nonzero_polys(QQ2, max_deg=2, max_terms=2), min_size=1, max_size=2)


def I(R, *texts):
    return R.ideal([R.parse(t) for t in texts])


def test_reduction_in_quotient():
    assert node.is_zero(node.parse("x^2*y + x*y^3"))
    assert node.equal(node.parse("x + x*y"), node.parse("x"))


def test_intersection_and_quotient_on_node():
    px, py = I(node, "x"), I(node, "y")
    assert px.intersect(py).is_zero()
    assert node.zero_ideal.quotient_element(node.parse("x")) == py
    assert I(node, "x", "y").quotient(I(node, "x")) == node.unit_ideal


def test_saturation():
    J = I(free, "x^2*y", "x*y^2")
    assert J.saturate(free.parse("x")) == I(free, "y")


def test_elimination():
    P = PolyRing(QQ, ["t", "x", "y"])
    R = AffineRing(P)
    J = R.ideal([P.parse("x - t^2"), P.parse("y - t^3")])
    E = J.eliminate(["t"])
    assert E.contains(P.parse("x^3 - y^2"))
    assert not E.contains(P.parse("x"))


def test_radical():
    J = I(free, "x^2", "y^3")
    assert J.radical_contains(free.parse("x + y"))
    assert not J.radical_contains(free.parse("x + 1"))
    assert J.same_radical(I(free, "x", "y"))


def test_mixed_rings_rejected():
    with pytest.raises(MixedRingError):
        I(node, "x") + I(free, "x")


def test_ideal_algebra_dispatch():
    assert ideal_algebra("sum", I(free, "x"), I(free, "y")) == I(free, "x", "y")
    with pytest.raises(ValueError):
        ideal_algebra("frobnicate", I(free, "x"))


def test_multiplicative_set_words_and_zero():
    W = MultiplicativeSet(node, [node.parse("x"), node.parse("y")])
    assert W.contains_zero()
    words = list(W.words(2))
    assert words[0][0] == (1, 0)
    assert not MultiplicativeSet(node, [node.parse("x")]).contains_zero()


@settings(max_examples=25, deadline=None)
@given(ideal_gens, ideal_gens)
def test_lattice_properties(a, b):
    A, B = free.ideal(a), free.ideal(b)
    meet = A.intersect(B)
    assert meet <= A and meet <= B
    assert A * B <= meet
    assert A <= A + B and B <= A + B


@settings(max_examples=20, deadline=None)
@given(ideal_gens, ideal_gens)
def test_colon_property(a, b):
    A, B = free.ideal(a), free.ideal(b)
    C = A.quotient(B)
    assert C * B <= A
    assert A <= C
