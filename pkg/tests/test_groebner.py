import json
import random

from hypothesis import given, settings
from hypothesis import strategies as st

from modcrit.fields import GF, QQ
from modcrit.groebner import GroebnerBasis, buchberger, clear_memory_cache, configure_cache, lift, normal_form, syzygies
from modcrit.orders import lex
from modcrit.polynomials import PolyRing

from oracles import bounded_member, hilbert_value
from strategies import F2_3, QQ2, nonzero_polys, polys

small_gens = st.lists(nonzero_polys(QQ2, max_deg=2, max_terms=3), min_size=1, max_size=3)


def test_known_basis_lex():
    P = PolyRing(QQ, ["x", "y"], lex(2))
    x, y = P.gens()
    G = buchberger([x**2 + y, x * y - 1], P)
    assert [str(g) for g in G] == ["x + y^2", "y^3 + 1"]


def test_unit_ideal():
    x, y = QQ2.gens()
    G = GroebnerBasis(QQ2, [x, x + 1])
    assert G.is_unit() and [str(g) for g in G.elements] == ["1"]


def test_normal_form_on_non_basis_depends_on_order_of_divisors():
    x, y = QQ2.gens()
    f = x**2 * y
    assert normal_form(f, [x * y, x**2 - 1]).is_zero()
    # f is a member, but dividing by x^2 - 1 first leaves y
    assert normal_form(f, [x**2 - 1, x * y]) == y


@settings(max_examples=40, deadline=None)
@given(small_gens)
def test_basis_generates_and_is_reduced(gens):
    G = GroebnerBasis(QQ2, gens)
    for g in gens:
        assert G.contains(g)
    els = G.elements
    leads = [g.lead()[0] for g in els]
    for i, g in enumerate(els):
        assert g.lead()[1] == 1
        for e in g.terms:
            for j, lt in enumerate(leads):
                if j != i:
                    assert not all(a >= b for a, b in zip(e, lt))


@settings(max_examples=40, deadline=None)
@given(small_gens, polys(QQ2), polys(QQ2))
def test_normal_form_properties(gens, f, a):
    G = GroebnerBasis(QQ2, gens)
    r = G.reduce(f)
    assert G.reduce(r) == r
    assert G.reduce(f + a * gens[0]) == r


@settings(max_examples=30, deadline=None)
@given(small_gens, st.randoms(use_true_random=False))
def test_permutation_invariance(gens, rnd):
    ref = GroebnerBasis(QQ2, gens).canonical()
    shuffled = list(gens)
    rnd.shuffle(shuffled)
    clear_memory_cache()
    assert GroebnerBasis(QQ2, [g * 3 for g in shuffled]).canonical() == ref


@settings(max_examples=30, deadline=None)
@given(small_gens)
def test_syzygies_vanish(gens):
    for s in syzygies(gens):
        assert sum((c * g for c, g in zip(s, gens)), QQ2.zero).is_zero()


@settings(max_examples=30, deadline=None)
@given(small_gens, st.lists(polys(QQ2, max_deg=1), min_size=3, max_size=3))
def test_lift_reconstructs(gens, coeffs):
    target = sum((c * g for c, g in zip(coeffs, gens)), QQ2.zero)
    a = lift(target, gens)
    assert a is not None
    assert sum((c * g for c, g in zip(a, gens)), QQ2.zero) == target


def test_lift_nonmember():
    x, y = QQ2.gens()
    assert lift(x + 1, [x * y, x**2]) is None


def test_module_basis():
    x, y = QQ2.gens()
    vecs = [(x, y), (y, x)]
    G = GroebnerBasis(QQ2, vecs, rank=2)
    assert G.contains((x + y, x + y))
    assert not G.contains((x, QQ2.zero))


def _hom(rng, n, d):
    from oracles import monomials_of_degree
    while True:
        f = {m: 1 for m in monomials_of_degree(n, d) if rng.random() < 0.5}
        if f:
            return f


def test_hilbert_function_matches_standard_monomials():
    rng = random.Random(3)
    from modcrit.polynomials import Poly
    for _ in range(25):
        gens = [_hom(rng, 3, rng.randint(1, 3)) for _ in range(2)]
        G = GroebnerBasis(F2_3, [Poly(F2_3, g) for g in gens])
        leads = [g.lead()[0] for g in G.elements]
        for d in range(5):
            from oracles import monomials_of_degree
            standard = [m for m in monomials_of_degree(3, d) if not any(all(a >= b for a, b in zip(m, lt)) for lt in leads)]
            assert len(standard) == hilbert_value(gens, 3, d, 2)


def test_bounded_oracle_is_sound_for_inhomogeneous_ideals():
    rng = random.Random(11)
    from modcrit.polynomials import Poly
    from oracles import monomials_up_to
    P = PolyRing(GF(2), ["x", "y"])
    for _ in range(30):
        gens = [{m: 1 for m in monomials_up_to(2, 2) if rng.random() < 0.4} or {(1, 0): 1} for _ in range(2)]
        G = GroebnerBasis(P, [Poly(P, g) for g in gens])
        for _ in range(5):
            f = {m: 1 for m in monomials_up_to(2, 3) if rng.random() < 0.3}
            if bounded_member(f, gens, 2, 5, 2):
                assert G.contains(Poly(P, f))


def test_cache_cold_warm_identical(tmp_path):
    x, y = QQ2.gens()
    gens = [x**3 - y, x * y**2 - 1]
    configure_cache(tmp_path)
    clear_memory_cache()
    cold = GroebnerBasis(QQ2, gens).canonical()
    files = list(tmp_path.glob("*.json"))
    assert len(files) == 1
    clear_memory_cache()
    warm = GroebnerBasis(QQ2, gens).canonical()
    assert cold == warm


def test_cache_corruption_is_detected(tmp_path, caplog):
    x, y = QQ2.gens()
    gens = [x**2 - y, y**2 - x]
    configure_cache(tmp_path)
    clear_memory_cache()
    ref = GroebnerBasis(QQ2, gens).canonical()
    (entry,) = tmp_path.glob("*.json")
    data = json.loads(entry.read_text())
    # a reduced basis of a bigger ideal is not a valid entry
    data["basis"] = [[[0, [0, 0], "1"]]]
    entry.write_text(json.dumps(data))
    clear_memory_cache()
    assert GroebnerBasis(QQ2, gens).canonical() == ref
    assert "corrupt" in caplog.text
    entry.write_text("{not json")
    clear_memory_cache()
    assert GroebnerBasis(QQ2, gens).canonical() == ref
