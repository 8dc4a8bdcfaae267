import pytest

from modcrit.fields import QQ
from modcrit.flatness import is_flat_oracle
from modcrit.frobenius import (
    Endomorphism,
    endomorphism_check,
    frobenius_functor,
    jacobian_oracle,
    kunz_regularity_test,
    pushforward_eR,
)
from modcrit.modules import Module, cyclic, direct_sum, fitting_ideals, ideal_as_module
from modcrit.polynomials import PolyRing
from modcrit.rings import AffineRing

from conftest import corpus

QX = AffineRing(PolyRing(QQ, ["X"]))


def test_endomorphism_examples():
    X = QX.parse("X")
    sq = Endomorphism(QX, [X**2])
    chk = endomorphism_check(sq, QX.ideal([X]))
    assert chk["fixed"] and chk["contracting_n"] == 1 and chk["radical_of_image_is_prime"]
    shift = Endomorphism(QX, [X + 1])
    chk = endomorphism_check(shift, QX.ideal([X]))
    # f(X + 1) in (X) iff f(1) = 0
    assert not chk["fixed"] and chk["preimage"] == "(X - 1)"
    assert not chk["locally_contracting"]


def test_frobenius_fixes_declared_primes():
    fx = corpus("f2xy").fixture
    F = Endomorphism.frobenius_of(fx.ring)
    for m in fx.maximal_ideals.values():
        chk = endomorphism_check(F, m)
        assert chk["fixed"] and chk["locally_contracting"]


def test_not_well_defined_rejected():
    node = corpus("node").fixture.ring
    with pytest.raises(ValueError):
        Endomorphism(node, [node.parse("x + 1"), node.parse("y")])


def test_frobenius_functor_examples():
    fx = corpus("f2xy").fixture
    R = fx.ring
    F = Endomorphism.frobenius_of(R)
    M = frobenius_functor(cyclic(R, R.ideal([R.parse("x")])), F)
    assert fitting_ideals(M)[0] == R.ideal([R.parse("x^2")])
    assert frobenius_functor(Module.free(R, 3), F).relations == ()
    cusp = corpus("cusp").fixture
    C = cusp.ring
    Fm = frobenius_functor(ideal_as_module(cusp.maximal_ideals["m0"]), Endomorphism.frobenius_of(C))
    squared = {tuple(str(f) for f in col) for col in Fm.relations}
    # x^4 = x*y^2 modulo the cusp relation
    assert C.equal(C.parse("x^4"), C.parse("x*y^2"))
    assert squared == {("y^2", "x^2"), ("x*y^2", "y^2")}


def test_functor_respects_direct_sums():
    doc = corpus("cusp")
    R = doc.fixture.ring
    F = Endomorphism.frobenius_of(R)
    M, N = doc.module("Mx"), doc.module("m0")
    lhs = fitting_ideals(frobenius_functor(direct_sum(M, N), F))
    rhs = fitting_ideals(direct_sum(frobenius_functor(M, F), frobenius_functor(N, F)))
    assert lhs == rhs


def test_jacobian_examples():
    assert jacobian_oracle(corpus("f2xy").fixture)["regular_everywhere"]
    cusp = jacobian_oracle(corpus("cusp").fixture)
    assert cusp["regular_at"] == {"m0": False, "m1": True}
    node = jacobian_oracle(corpus("node_f3").fixture)
    assert node["regular_at"] == {"m0": False, "m1": True}


@pytest.mark.parametrize("name", ["f2x", "f2xy"])
def test_e_stability(name):
    fx = corpus(name).fixture
    labels = list(fx.maximal_ideals)
    one = kunz_regularity_test(fx, 1, labels)["points"]
    two = kunz_regularity_test(fx, 2, labels)["points"]
    assert {k: v["verdict"] for k, v in one.items()} == {k: v["verdict"] for k, v in two.items()}


def test_pushforward_basis():
    E = pushforward_eR(corpus("f2x").fixture, 1)
    assert E.rank == 2 and [str(g) for g in E.generators] == ["1", "x"]
    assert is_flat_oracle(corpus("f2x").fixture, E).flat


def test_kunz_needs_positive_characteristic():
    from modcrit.verdicts import HypothesisViolation
    with pytest.raises(HypothesisViolation):
        kunz_regularity_test(corpus("node").fixture, 1, ["m0"])


def test_radical_identity_for_corpus_endomorphisms():
    doc = corpus("node_f3")
    for phi in doc.endomorphisms.values():
        for label in doc.fixture.prime_labels():
            P = doc.fixture.prime(label)
            chk = endomorphism_check(phi, P)
            if chk["locally_contracting"]:
                assert phi.image_ideal(P).same_radical(P)
