"""Acceptance criteria 1-10.  Each test records one PASS/FAIL line (see conftest)."""

from __future__ import annotations

import os
import random
import subprocess
import sys
import time
from itertools import permutations

import pytest

from modcrit.avoidance import claim2_witness
from modcrit.cli import main
from modcrit.divisibility import localized_division_witness
from modcrit.duality import dual_of, dual_predicates, thm63_run
from modcrit.fields import GF
from modcrit.flatness import is_faithfully_flat, is_flat_oracle
from modcrit.frobenius import jacobian_oracle, kunz_regularity_test, pushforward_eR
from modcrit.groebner import GroebnerBasis, clear_memory_cache
from modcrit.modules import Module, cyclic, direct_sum, ideal_as_module
from modcrit.polynomials import Poly, PolyRing
from modcrit.rings import MultiplicativeSet
from modcrit.theorems import run_theorem
from modcrit.verdicts import HypothesisViolation

from conftest import CORPUS, corpus
from oracles import bounded_member, monomials_of_degree

pytestmark = pytest.mark.acceptance


# 1 -------------------------------------------------------------------------


def _random_homogeneous(rng, n, d, p=2):
    mons = monomials_of_degree(n, d)
    while True:
        f = {m: 1 for m in mons if rng.random() < 0.5}
        if f:
            return f


def _random_ideal(rng):
    n = rng.randint(1, 3)
    gens = [_random_homogeneous(rng, n, rng.randint(1, 3)) for _ in range(rng.randint(1, 3))]
    return n, gens


def _as_poly(P, f):
    return Poly(P, {e: c for e, c in f.items() if c % 2})


@pytest.mark.criterion(1)
def test_groebner_kernel_matches_linear_algebra():
    rng = random.Random(20261014)
    D = 6
    t0 = time.perf_counter()
    checked = members = 0
    for _ in range(100):
        n, gens = _random_ideal(rng)
        P = PolyRing(GF(2), "xyz"[:n])
        G = GroebnerBasis(P, [_as_poly(P, g) for g in gens])
        for d in range(D + 1):
            tests = [_random_homogeneous(rng, n, d) for _ in range(2)]
            # a guaranteed member of degree d, when one exists
            combo = {}
            for g in gens:
                dg = max(map(sum, g))
                if dg <= d:
                    for m in monomials_of_degree(n, d - dg):
                        if rng.random() < 0.5:
                            for e in g:
                                t = tuple(a + b for a, b in zip(e, m))
                                combo[t] = combo.get(t, 0) ^ 1
            combo = {e: c for e, c in combo.items() if c}
            if combo:
                tests.append(combo)
            for f in tests:
                expect = bounded_member(f, gens, n, D, 2)
                assert G.contains(_as_poly(P, f)) == expect, (gens, f)
                checked += 1
                members += expect
        # canonical reduced basis under generator permutations
        ref = G.canonical()
        perms = list(permutations(range(len(gens))))
        for _ in range(10):
            order = rng.choice(perms)
            clear_memory_cache()
            H = GroebnerBasis(P, [_as_poly(P, gens[i]) for i in order])
            assert H.canonical() == ref
    elapsed = time.perf_counter() - t0
    assert members > 0 and members < checked
    assert elapsed < 60, elapsed


# 2 -------------------------------------------------------------------------

FLAT_PAIRS = [
    ("node", "F2"), ("node", "R"), ("node", "Mx"), ("node", "My"), ("node", "Mxy"), ("node", "Pres"),
    ("node", "m0"), ("qxy", "Mx"), ("qxy", "F2"), ("qxy", "m0"), ("qxy", "k0"),
    ("cusp", "R"), ("cusp", "F2"), ("cusp", "Mx"), ("cusp", "m0"),
]


@pytest.mark.criterion(2)
@pytest.mark.parametrize("fixture,module", FLAT_PAIRS)
def test_flatness_equivalences(fixture, module):
    doc = corpus(fixture)
    t0 = time.perf_counter()
    res = run_theorem("flatred", doc, M=doc.module(module), candidates=doc.candidate_primes())
    elapsed = time.perf_counter() - t0
    flat = res["rows"]["a"]["verdict"]
    assert flat is not None
    for label, row in res["local"].items():
        assert row["locally_free"] == row["d'"] == row["e'"], label
    assert flat == all(row["locally_free"] for row in res["local"].values())
    assert res["rows"]["d"]["verdict"] == flat
    assert res["rows"]["e"]["verdict"] == flat
    if not flat:
        assert res["refuting_primes"]
    assert res["consistent"] and res["asserted"]
    assert elapsed < 10, elapsed


# 3 -------------------------------------------------------------------------


@pytest.mark.criterion(3)
def test_nonreduced_mechanism():
    doc = corpus("dual_numbers")
    res = run_theorem("flatred", doc, M=doc.module("Mt"), candidates=doc.candidate_primes())
    demo = res["demonstration"]
    assert res["hypotheses"]["reduced"] == "refuted"
    assert demo["ideal"] == "(t)"
    assert demo["map_is_zero"] is True
    assert demo["tensor_nonzero"] is True
    assert res["rows"]["a"]["oracle"]["verdict"] == "not_flat"
    for tag in ("d", "e", "d'", "e'"):
        assert res["rows"][tag] == {"verdict": True, "vacuous": True}
    assert res["pattern_matched"] is True


# 4 -------------------------------------------------------------------------

KUNZ_EXPECT = {
    "f2x": {"m0": True, "m1": True},
    "f2xy": {"m0": True, "m1": True},
    "cusp": {"m0": False, "m1": True},
    "node_f3": {"m0": False, "m1": True},
}


@pytest.mark.criterion(4)
def test_kunz_agrees_with_jacobian():
    t0 = time.perf_counter()
    for name, expect in KUNZ_EXPECT.items():
        fx = corpus(name).fixture
        labels = list(fx.maximal_ideals)
        jac = jacobian_oracle(fx)["regular_at"]
        kunz = kunz_regularity_test(fx, 1, labels)["points"]
        for label in labels:
            assert (kunz[label]["verdict"] == "regular") == jac[label] == expect[label], (name, label)
    assert time.perf_counter() - t0 < 30


# 5 -------------------------------------------------------------------------


@pytest.mark.criterion(5)
def test_pushforward_flatness():
    t0 = time.perf_counter()
    for name, rank, flat in (("f2x", 2, True), ("f2xy", 4, True), ("node_f3", 9, False)):
        fx = corpus(name).fixture
        E = pushforward_eR(fx, 1)
        assert E.rank == rank
        v = is_flat_oracle(fx, E)
        assert v.flat is flat, name
        if flat:
            assert v.rank == rank
        crit_f = kunz_regularity_test(fx, 1, list(fx.maximal_ideals))["whole_ring"] == "regular"
        assert crit_f is flat
    assert time.perf_counter() - t0 < 60


# 6 -------------------------------------------------------------------------

DIVRED_POOL = [
    ("node", ["x"]), ("node", ["y"]), ("node", ["x + y"]), ("node", ["x - 1"]),
    ("qxy", ["x"]), ("qxy", ["x*y"]), ("qxy", ["x", "y - 1"]),
    ("split", ["u"]), ("split", ["u - 1"]),
]


def _meets(P, W):
    return any(P.contains(w) for w in W.gens)


def _random_element(rng, R):
    P = R.poly
    f = P.zero
    for v in P.gens():
        f = f + rng.choice([0, 1, -1, 2]) * v
    f = f + rng.choice([0, 1, 3])
    if rng.random() < 0.5:
        f = f * P.gens()[rng.randrange(P.nvars)]
    return R.reduce(f)


@pytest.mark.criterion(6)
def test_divred_witnesses():
    rng = random.Random(6)
    done = 0
    attempts = 0
    while done < 10:
        attempts += 1
        assert attempts < 500
        name, wgens = rng.choice(DIVRED_POOL)
        fx = corpus(name).fixture
        R = fx.ring
        W = MultiplicativeSet(R, [R.parse(g) for g in wgens])
        c = _random_element(rng, R)
        # hypothesis: c avoids every minimal prime disjoint from W
        if any(P.contains(c) for P in fx.minimal_primes if not _meets(P, W)):
            with pytest.raises(HypothesisViolation):
                claim2_witness(fx, W, c)
            continue
        wit, ident = claim2_witness(fx, W, c)
        w, r, f = wit.w, wit.r, wit.wc_plus_r
        assert R.is_zero(w * r)
        assert R.equal(f, w * c + r)
        assert R.zero_ideal.quotient_element(f).is_zero()  # (0 : f) = 0
        assert R.equal(w * w * c, w * f) and ident.holds
        for m in fx.maximal_ideals.values():
            if m.contains(f):
                continue
            res = localized_division_witness(fx, cyclic(R, m), W, c)
            assert res["verified"]
            for row in res["rows"]:
                y = R.parse(row["y"][0])
                assert m.contains(f * y - 1)
        done += 1
    # the embedded fixture violates the no-embedded-primes hypothesis outright
    emb = corpus("embedded")
    Re = emb.fixture.ring
    with pytest.raises(HypothesisViolation):
        claim2_witness(emb.fixture, MultiplicativeSet(Re, [Re.parse("y")]), Re.parse("z"))


# 7 -------------------------------------------------------------------------


def _carrier_pool(name):
    doc = corpus(name)
    R = doc.fixture.ring
    p = R.parse

    def cyc(*gens):
        return cyclic(R, R.ideal([p(g) for g in gens]))

    if name == "node":
        base = [lambda a: cyc(f"x^{a}"), lambda a: cyc(f"y^{a}"), lambda a: cyc(f"(x - 1)^{a}"),
                lambda a: cyc(f"x^{a}", "y"), lambda a: cyc("x + y"), lambda a: ideal_as_module(R.ideal([p("x"), p("y")]))]
    elif name == "cusp":
        base = [lambda a: cyc("x"), lambda a: cyc(f"x^{a}", "y"), lambda a: cyc("x + 1", "y + 1"),
                lambda a: ideal_as_module(R.ideal([p("x"), p("y")])), lambda a: cyc("x^2")]
    else:
        base = [lambda a: cyc(f"x^{a}"), lambda a: cyc(f"y^{a}"), lambda a: cyc(f"x^{a}*y"),
                lambda a: cyc(f"x^{a}", "y"), lambda a: cyc("x - 1", "y - 1"),
                lambda a: ideal_as_module(R.ideal([p("x"), p("y")]))]
    base.append(lambda a: Module.free(R, a))
    return doc, base


@pytest.mark.criterion(7)
def test_duality_dictionary():
    rng = random.Random(7)
    t0 = time.perf_counter()
    seen = set()
    for i in range(20):
        name = ("node", "cusp", "qxy")[i % 3]
        doc, pool = _carrier_pool(name)
        fx = doc.fixture
        if i % 4 == 0:
            L = pool[-1](rng.randint(1, 3))
        else:
            L = rng.choice(pool)(rng.randint(1, 2))
            if rng.random() < 0.3:
                L = direct_sum(L, rng.choice(pool)(1))
        res = thm63_run(fx, L, doc.candidate_primes())
        assert res["consistent"], (name, L, res["rows"], res["witnesses"])
        preds = dual_predicates(fx, dual_of(L))
        flat = is_flat_oracle(fx, L).flat
        assert preds["injective"] == flat == res["rows"]["a"]
        assert res["rows"]["g'_all_max"] == flat
        ff = is_faithfully_flat(fx, L)["verdict"]
        assert preds["injective_cogenerator"] == ff == res["rows"]["i"]
        seen.add(flat)
    assert seen == {True, False}
    assert time.perf_counter() - t0 < 60


# 8 -------------------------------------------------------------------------


@pytest.mark.criterion(8)
def test_ass_contraction_on_finite_map():
    doc = corpus("parabola")
    mods = {k: doc.module(k) for k in ("S", "Sy")}
    res = run_theorem("ass", doc, map_label="g", modules=mods)
    assert res["consistent"]
    assert res["rows"]["S"]["contracted_ass_S"] == ["()"]
    assert res["rows"]["Sy"]["contracted_ass_S"] == ["(x)"]
    for row in res["rows"].values():
        assert row["contracted_ass_S"] == row["ass_R_over_contractions"]


# 9 -------------------------------------------------------------------------


@pytest.mark.criterion(9)
def test_tfred_counterexample():
    doc = corpus("embedded")
    res = run_theorem("tfred", doc, M=doc.module("N"), candidates=doc.candidate_primes(), p_label="pxy")
    assert res["global"]["torsion_free"] is True
    assert res["localized"]["torsion_free"] is False
    assert res["localized"]["witness"]["element"] == "y"
    assert res["pattern_matched"] is True
    # y lies in the failing prime but avoids px, the only Ass R prime inside pxy
    fx = doc.fixture
    y = fx.ring.parse("y")
    assert fx.prime("pxy").contains(y) and not fx.prime("px").contains(y)


# 10 ------------------------------------------------------------------------

SUITE = [
    ["theorems", "flatred", "node.fx", "--module", "Mx"],
    ["theorems", "injred", "node.fx", "--module", "Mxy"],
    ["theorems", "frob", "cusp.fx"],
    ["frob", "pushforward", "node_f3.fx"],
    ["div", "node.fx", "--W", "Wx", "--op", "claim", "--c", "x"],
    ["theorems", "tfred", "embedded.fx", "--module", "N", "--p", "pxy"],
    ["theorems", "ass", "parabola.fx", "--map", "g", "--modules", "S", "Sy", "Sy1"],
    ["gb", "qxy.fx", "--gens", "x^2 - y, x*y - 1"],
]


def _argv(cmd):
    return [str(CORPUS / a) if a.endswith(".fx") else a for a in cmd]


def _run_suite(out_dir, cache_dir, workers):
    out_dir.mkdir(parents=True, exist_ok=True)
    texts = []
    for i, cmd in enumerate(SUITE):
        out = out_dir / f"{i}.json"
        code = main(_argv(cmd) + ["--cache-dir", str(cache_dir), "--workers", str(workers), "--out", str(out)])
        assert code == 0, cmd
        texts.append(out.read_bytes())
    return texts


@pytest.mark.criterion(10)
def test_determinism_and_cache(tmp_path):
    cache = tmp_path / "cache"
    clear_memory_cache()
    cold = _run_suite(tmp_path / "cold", cache, 1)
    assert any(cache.iterdir())
    clear_memory_cache()
    warm = _run_suite(tmp_path / "warm", cache, 8)
    clear_memory_cache()
    fresh = _run_suite(tmp_path / "fresh", tmp_path / "cache2", 8)
    assert cold == warm == fresh
    # a separate process with a different hash seed
    env = dict(os.environ, PYTHONHASHSEED="12345", MODCRIT_CACHE=str(cache))
    for i in (0, 2, 5):
        proc = subprocess.run([sys.executable, "-m", "modcrit.cli", *_argv(SUITE[i])], env=env,
                              capture_output=True, check=True)
        assert proc.stdout == cold[i]
