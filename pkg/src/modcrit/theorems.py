"""Theorem runners: evaluate every implemented condition and compare them.

Each runner returns a dict with ``hypotheses``, ``rows`` (condition tag ->
verdict with witnesses), and a ``consistent`` flag that is asserted only
when the hypotheses hold.  Deliberately violated hypotheses produce a
``pattern`` entry describing the documented failure mode instead.
"""

from __future__ import annotations

from .avoidance import claim2_witness
from .divisibility import lemma42_check, localized_division_witness, w_predicates
from .duality import DualModule, coass_membership, hom_ext_into_dual, thm63_run
from .fixtures import CERTIFIED, REFUTED, TRUSTED, ass_torsion_check
from .flatness import (
    all_nonzerodivisors_units,
    flat_criterion,
    is_faithfully_flat,
    is_flat_oracle,
    local_fitting_free,
    local_flat_criterion,
    nonreduced_demo,
)
from .frobenius import ass_contraction_check, jacobian_oracle, kunz_regularity_test, pushforward_eR
from .modules import Module, ass_membership, cyclic, ideal_as_module, quotient_module, tensor
from .report import run_rows
from .verdicts import NotApplicable

__all__ = ["TAGS", "run_theorem", "flatred", "frob", "localization", "divred", "coasshom", "injred", "tfred", "ass"]


def _ass_labels(N: Module, candidates: dict) -> list:
    if N.is_zero():
        return []
    return [k for k, P in candidates.items() if ass_membership(P, N)]


def _mod_P(M: Module, P) -> Module:
    zero = M.ring.poly.zero
    return quotient_module(M, [tuple(g if j == i else zero for j in range(M.rank)) for i in range(M.rank) for g in P.gens])


def _hyps(fx, *names) -> dict:
    return {n: fx.hypothesis(n) for n in names}


def _holds(status: str) -> bool:
    return status in (CERTIFIED, TRUSTED)


def flatred(doc, M: Module, candidates: dict, workers: int = 1) -> dict:
    fx = doc.fixture
    hyps = _hyps(fx, "reduced", "connected")
    if hyps["reduced"] == REFUTED:
        return _flatred_nonreduced(doc, M, candidates, hyps)
    R = fx.ring
    mins = {p.label for p in fx.ass_primes if p.minimal}

    def row_a():
        return is_flat_oracle(fx, M).as_dict()

    # test modules L for rows (b) and (ii): R/P and P itself, with their Ass over the candidates
    def test_modules():
        out = []
        for k, P in candidates.items():
            out.append((f"R/{k}", _mod_P(M, P), [k]))
            Pm = ideal_as_module(P)
            out.append((f"{k} as module", tensor(Pm, M), _ass_labels(Pm, candidates)))
        return out

    def row_b():
        bad = []
        for name, LM, ass_L in test_modules():
            extra = [q for q in _ass_labels(LM, candidates) if q not in ass_L]
            if extra:
                bad.append({"test_module": name, "extra_primes": extra})
        return {"verdict": not bad, "refuting": bad}

    def tf_rows(tests):
        bad = []
        for name, Lp in tests:
            if not fx.torsion_free(tensor(Lp, M))[0]:
                bad.append(name)
        return {"verdict": not bad, "refuting": bad}

    def row_c():
        tests = [("R", Module.free(R, 1))]
        tests += [(f"{k} as module", ideal_as_module(P)) for k, P in candidates.items()]
        tests += [(f"R/{k}", cyclic(R, P)) for k, P in candidates.items() if k in mins]
        return tf_rows(tests)

    def crit(mode):
        def run():
            bad, details = [], {}
            for k, P in candidates.items():
                ok, detail = flat_criterion(fx, M, P, mode)
                if not ok:
                    bad.append(k)
                    details[k] = detail
            return {"verdict": not bad, "refuting": bad, "details": details}
        return run

    def local_rows():
        out = {}
        for label, m in fx.maximal_ideals.items():
            free, rank = local_fitting_free(M, m)
            d, _ = local_flat_criterion(fx, m, M, "d'")
            e, _ = local_flat_criterion(fx, m, M, "e'")
            out[label] = {"locally_free": free, "local_rank": rank, "d'": d, "e'": e, "agree": free == d == e}
        return out

    def faithful():
        return is_faithfully_flat(fx, M)

    def row_ii():
        bad = []
        for name, LM, ass_L in test_modules():
            got = _ass_labels(LM, candidates)
            if got != ass_L:
                bad.append({"test_module": name, "ass": got, "expected": ass_L})
        return {"verdict": not bad, "refuting": bad}

    tasks = [("a", row_a), ("b", row_b), ("c", row_c), ("d", crit("d")), ("e", crit("e")),
             ("local", local_rows), ("i", faithful), ("ii", row_ii)]
    results = dict(run_rows(tasks, workers))
    oracle = results["a"]
    rows = {
        "a": {"verdict": {"flat": True, "not_flat": False}.get(oracle.get("verdict")), "oracle": oracle},
        "b": results["b"], "c": results["c"], "d": results["d"], "e": results["e"],
    }
    local = results["local"]
    ff = results["i"]
    rows["i"] = {"verdict": ff.get("verdict"), "detail": ff}
    rows["ii"] = results["ii"]
    flat = rows["a"]["verdict"]
    rows["iii"] = {"verdict": None if flat is None else bool(flat and all(ff.get("simple_rows", {}).values()))}
    main = {t: rows[t]["verdict"] for t in "abcde"}
    cog = {t: rows[t]["verdict"] for t in ("i", "ii", "iii")}
    refuting = sorted(set(rows["d"]["refuting"]) | set(rows["e"]["refuting"]) | {k for k, v in local.items() if not v["d'"]})
    consistent = len(set(main.values())) == 1 and len(set(cog.values())) == 1 and all(v["agree"] for v in local.values())
    return {
        "tag": "flatred",
        "hypotheses": hyps,
        "rows": rows,
        "local": local,
        "refuting_primes": refuting,
        "consistent": consistent,
        "asserted": _holds(hyps["reduced"]) and _holds(hyps["connected"]),
        "candidates": list(candidates),
        "caveat": "conditions over all P in Spec R are evaluated over the candidate primes only",
    }


def _flatred_nonreduced(doc, M: Module, candidates: dict, hyps: dict) -> dict:
    fx = doc.fixture
    if not all_nonzerodivisors_units(fx):
        raise NotApplicable("torsion is not computable here: REDUCED is refuted", fixture=fx.name)
    R = fx.ring
    nil = R.unit_ideal
    for P in fx.minimal_primes:
        nil = nil.intersect(P)
    demo = nonreduced_demo(fx, nil, M)
    rows = {}
    for mode in ("d", "e"):
        vac = {k: flat_criterion(fx, M, P, mode)[1].get("vacuous", False) for k, P in candidates.items()}
        rows[mode] = {"verdict": True, "vacuous": all(vac.values())}
    for mode in ("d'", "e'"):
        vac = {k: local_flat_criterion(fx, m, M, mode)[1].get("vacuous", False) for k, m in fx.maximal_ideals.items()}
        rows[mode] = {"verdict": True, "vacuous": all(vac.values())}
    oracle = is_flat_oracle(fx, M)
    rows["a"] = {"verdict": oracle.flat, "oracle": oracle.as_dict()}
    matched = (demo["map_is_zero"] and demo["tensor_nonzero"] and not oracle.flat
               and all(r.get("vacuous") for k, r in rows.items() if k != "a"))
    return {
        "tag": "flatred",
        "hypotheses": hyps,
        "rows": rows,
        "demonstration": {**demo, "ideal": str(nil)},
        "consistent": False,
        "asserted": False,
        "pattern": "REDUCED refuted: the inclusion tensored with M is zero, J ⊗ M is nonzero, "
                   "torsion rows pass vacuously and the oracle reports not_flat",
        "pattern_matched": matched,
    }


def frob(doc, e: int = 1, labels=None, phi=None, workers: int = 1, bound: int = 16) -> dict:
    fx = doc.fixture
    labels = list(labels or fx.maximal_ideals)
    hyps = _hyps(fx, "reduced", "equidimensional")
    tasks = [
        ("jacobian", lambda: jacobian_oracle(fx)),
        ("kunz", lambda: kunz_regularity_test(fx, e, labels, phi)),
        ("pushforward", lambda: _pushforward_row(fx, e, bound) if phi is None else {"status": "skipped"}),
    ]
    res = dict(run_rows(tasks, workers))
    jac, kunz, push = res["jacobian"], res["kunz"], res["pushforward"]
    points = {}
    for label in labels:
        j = jac.get("regular_at", {}).get(label)
        k = kunz.get("points", {}).get(label, {}).get("verdict")
        points[label] = {"jacobian_regular": j, "kunz": k, "agree": j is not None and (k == "regular") == j}
    rows = {
        "a": {"verdict": jac.get("regular_everywhere"), "route": "jacobian"},
        "b": {"verdict": push.get("flat"), "route": "pushforward oracle"},
        "f": {"verdict": None if kunz.get("whole_ring") is None else kunz["whole_ring"] == "regular",
              "route": "torsion-freeness of F^e(m)", "coverage": kunz.get("coverage")},
    }
    vals = [r["verdict"] for r in rows.values() if r["verdict"] is not None]
    return {
        "tag": "frob",
        "e": e,
        "hypotheses": hyps,
        "points": points,
        "rows": rows,
        "consistent": len(set(vals)) <= 1 and all(p["agree"] for p in points.values()),
        "asserted": _holds(hyps["reduced"]),
        "detail": {"jacobian": jac, "kunz": kunz, "pushforward": push},
    }


def _pushforward_row(fx, e: int, bound: int) -> dict:
    E = pushforward_eR(fx, e, bound)
    v = is_flat_oracle(fx, E)
    return {"generators": E.rank, "flat": None if v.verdict == "inapplicable" else v.flat, "oracle": v.as_dict()}


def localization(doc, M: Module, W) -> dict:
    v = w_predicates(M, W)
    out = {"tag": "localization", "predicates": v.as_dict()}
    if v.bijective:
        out["inverses"] = lemma42_check(M, W)
        out["consistent"] = out["inverses"]["certified"]
    else:
        out["consistent"] = True
        out["note"] = "some generator is not bijective: the localization map is not an isomorphism"
    return out


def divred(doc, W, c, M: Module | None = None, **bounds) -> dict:
    fx = doc.fixture
    wit, ident = claim2_witness(fx, W, c, **bounds)
    R = fx.ring
    checks = {
        "wr_zero": R.is_zero(wit.w * wit.r),
        "nonzerodivisor": wit.zero_ring or fx.is_nonzerodivisor(wit.wc_plus_r),
        "identity": ident.holds,
    }
    out = {"tag": "divred", "hypotheses": _hyps(fx, "no_embedded_primes"), "witness": wit.as_dict(),
           "identity": ident.as_dict(), "checks": checks}
    if M is not None:
        out["division"] = localized_division_witness(fx, M, W, c, **bounds)
        checks["division"] = out["division"]["verified"]
    out["consistent"] = all(checks.values())
    return out


def coasshom(doc, L: Module, tests: dict, candidates: dict) -> dict:
    """``Coass Hom(L', L^∨)`` against ``⋃_{p ∈ Ass L'} Coass (0 :_{L^∨} p)``.

    Through the dictionary the left side is ``Ass(L' ⊗ L)`` and each
    ``(0 :_{L^∨} p)`` is the dual of ``L/pL``.
    """
    fx = doc.fixture
    D = DualModule(L)
    flat = is_flat_oracle(fx, L)
    rows = []
    for name, Lp in tests.items():
        H = hom_ext_into_dual("hom", Lp, D)
        lhs = [k for k, P in candidates.items() if coass_membership(P, H).member]
        ass_lp = _ass_labels(Lp, candidates)
        rhs = set()
        for p in ass_lp:
            rhs.update(_ass_labels(_mod_P(L, candidates[p]), candidates))
        rows.append({"test_module": name, "coass_hom": lhs, "ass_test_module": ass_lp,
                     "union": sorted(rhs), "identity": set(lhs) == rhs})
    holds = all(r["identity"] for r in rows)
    return {"tag": "coasshom", "carrier_flat": flat.as_dict(), "rows": rows, "identity_holds": holds,
            "consistent": holds or not flat.flat, "candidates": list(candidates)}


def injred(doc, L: Module, candidates: dict) -> dict:
    out = thm63_run(doc.fixture, L, candidates)
    out["tag"] = "injred"
    out["asserted"] = _holds(out["reduced"])
    return out


def tfred(doc, M: Module, candidates: dict, p_label: str) -> dict:
    fx = doc.fixture
    p = fx.prime(p_label)
    glob = ass_torsion_check(fx, M, candidates)
    loc = ass_torsion_check(fx, M, candidates, p)
    out = {"tag": "tfred", "hypotheses": _hyps(fx, "no_embedded_primes", "reduced"), "global": glob,
           "localized": {"at": p_label, **loc}}
    if fx.hypothesis("no_embedded_primes") == REFUTED:
        out["pattern"] = "embedded primes: torsion-free globally, not after localizing"
        out["pattern_matched"] = glob["torsion_free"] and not loc["torsion_free"]
        out["consistent"] = True
    else:
        out["consistent"] = (not glob["torsion_free"]) or loc["torsion_free"]
    return out


def ass(doc, map_label: str, modules: dict, candidates: dict | None = None) -> dict:
    g = doc.ring_maps[map_label]
    cands = candidates or doc.candidate_primes()
    rows = {name: ass_contraction_check(g, M, cands) for name, M in modules.items()}
    return {"tag": "ass", "rows": rows, "consistent": all(r["agree"] for r in rows.values())}


TAGS = ("flatred", "frob", "localization", "divred", "coasshom", "injred", "tfred", "ass")


def run_theorem(tag: str, doc, **kw) -> dict:
    if tag not in TAGS:
        raise ValueError(f"unknown theorem tag {tag!r}")
    return globals()[tag](doc, **kw)
