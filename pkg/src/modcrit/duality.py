"""Symbolic Matlis duals ``L^∨ = Hom_R(L, E)`` with E the sum of injective hulls of residue fields.

Nothing here materializes E.  Every predicate on ``L^∨`` is answered on the
finitely presented carrier L through the duality dictionary:

* ``Coass L^∨ = Ass L``
* ``Hom_R(L', L^∨) = (L' ⊗ L)^∨`` and ``Ext^1_R(L', L^∨) = Tor_1(L', L)^∨``
* ``L^∨`` divisible (and h-divisible) iff L torsion-free
* ``L^∨`` torsion-free iff L divisible
* ``L^∨`` injective iff L flat; an injective cogenerator iff L faithfully flat
"""

from __future__ import annotations

from dataclasses import dataclass

from .fixtures import CERTIFIED, REFUTED, TRUSTED, RingFixture
from .flatness import all_nonzerodivisors_units, is_faithfully_flat, is_flat_oracle, local_flat_criterion
from .modules import Module, annihilator, ass_membership, cyclic, ideal_as_module, tensor, tor1
from .rings import Ideal
from .verdicts import ModcritError, NotApplicable, Undecidable

__all__ = [
    "DualModule",
    "CoassVerdict",
    "dual_of",
    "coass_membership",
    "hom_ext_into_dual",
    "finitely_generated_divisible",
    "dual_predicates",
    "thm63_run",
    "thm61_local",
]


@dataclass(frozen=True)
class DualModule:
    carrier: Module

    @property
    def ring(self):
        return self.carrier.ring

    def is_zero(self) -> bool:
        # E is a cogenerator, so L^∨ = 0 iff L = 0
        return self.carrier.is_zero()

    def __repr__(self) -> str:
        return f"DualModule({self.carrier!r})"


def dual_of(L: Module) -> DualModule:
    return DualModule(L)


@dataclass(frozen=True)
class CoassVerdict:
    prime: str
    member: bool
    route: str = "ass of carrier"

    def as_dict(self) -> dict:
        return {"prime": self.prime, "member": self.member, "route": self.route}


def coass_membership(P: Ideal, D: DualModule) -> CoassVerdict:
    if D.carrier.is_zero():
        return CoassVerdict(str(P), False, "zero module")
    return CoassVerdict(str(P), ass_membership(P, D.carrier))


def hom_ext_into_dual(mode: str, Lp: Module, D: DualModule) -> DualModule:
    """``Hom(L', L^∨)`` (mode hom) or ``Ext^1(L', L^∨)`` (mode ext1), as duals."""
    if mode == "hom":
        return DualModule(tensor(Lp, D.carrier))
    if mode == "ext1":
        return DualModule(tor1(Lp, D.carrier))
    raise ValueError(f"unknown mode {mode!r}")


def finitely_generated_divisible(fx: RingFixture, L: Module) -> dict:
    """Every non-zerodivisor acts surjectively on the finitely generated L.

    By Nakayama, L is divisible iff no maximal ideal in Supp L contains a
    non-zerodivisor, i.e. every maximal ideal of Supp L is an associated
    prime of R.  Affine rings are Jacobson, so Supp L = V(ann L) is then a
    finite set of declared maximal associated primes whose intersection is
    the radical of ann L.
    """
    if not fx.ass_complete:
        raise Undecidable("associated primes not declared complete", fixture=fx.name)
    ann = annihilator(L)
    if ann.is_unit():
        return {"divisible": True, "annihilator": str(ann), "support": []}
    R = fx.ring
    labels, meet = [], R.unit_ideal
    for p in fx.ass_primes:
        if p.maximal:
            Pm = R.ideal(p.gens)
            if ann.issubset(Pm):
                labels.append(p.label)
                meet = meet.intersect(Pm)
    ok = ann.same_radical(meet)
    return {"divisible": ok, "annihilator": str(ann), "support": labels if ok else None}


def _torsion_free(fx: RingFixture, N: Module) -> bool:
    if fx.hypothesis("reduced") == REFUTED and all_nonzerodivisors_units(fx):
        return True
    return fx.torsion_free(N)[0]


def dual_predicates(fx: RingFixture, D: DualModule) -> dict:
    """Each predicate is decided independently; an undecided one is None with its reason."""
    L = D.carrier
    out: dict = {}
    reasons: dict = {}

    def attempt(name, thunk):
        try:
            out[name] = thunk()
        except ModcritError as exc:
            out[name] = None
            reasons[name] = exc.code

    attempt("divisible", lambda: _torsion_free(fx, L))
    out["h_divisible"] = out["divisible"]
    if "divisible" in reasons:
        reasons["h_divisible"] = reasons["divisible"]
    attempt("torsion_free", lambda: finitely_generated_divisible(fx, L)["divisible"])
    oracle = is_flat_oracle(fx, L)
    out["injective"] = None if oracle.verdict == "inapplicable" else oracle.flat
    if oracle.verdict == "inapplicable":
        reasons["injective"] = oracle.reason
    out["injective_cogenerator"] = is_faithfully_flat(fx, L)["verdict"]
    if reasons:
        out["undecided"] = reasons
    return out


def _ass_labels(N: Module, candidates: dict) -> set:
    if N.is_zero():
        return set()
    return {k for k, P in candidates.items() if ass_membership(P, N)}


def thm63_run(fx: RingFixture, L: Module, candidates: dict) -> dict:
    """Equivalence matrix for the injectivity of ``M = L^∨``.

    Test modules L' range over R/P and P for candidate primes P (plus R).
    Rows (c) and (e) coincide with (d) and (f) since h-divisibility and
    divisibility of a dual both reduce to torsion-freeness of the carrier.
    """
    R = fx.ring
    reduced = fx.hypothesis("reduced")
    D = DualModule(L)
    vacuous = reduced == REFUTED and all_nonzerodivisors_units(fx)
    if reduced == REFUTED and not vacuous:
        raise NotApplicable("REDUCED is refuted and non-zerodivisors are not all units", fixture=fx.name)

    oracle = is_flat_oracle(fx, L)
    rows: dict = {}
    witnesses: dict = {}
    rows["a"] = None if oracle.verdict == "inapplicable" else oracle.flat

    quotients = {k: cyclic(R, P) for k, P in candidates.items()}
    ideals = {k: ideal_as_module(P) for k, P in candidates.items()}

    # (b) and (ii): Coass Hom(L', M) = Ass(L' ⊗ L) against Ass L'
    b_ok, ii_ok = True, True
    for family, mods in (("R/P", quotients), ("P", ideals)):
        for k, Lp in mods.items():
            ass_lp = _ass_labels(Lp, candidates)
            coass = {q for q, Q in candidates.items() if coass_membership(Q, hom_ext_into_dual("hom", Lp, D)).member}
            if not coass <= ass_lp:
                b_ok = False
                witnesses.setdefault("b", {"test_module": f"{family} for {k}", "extra": sorted(coass - ass_lp)})
            if coass != ass_lp:
                ii_ok = False
                witnesses.setdefault("ii", {"test_module": f"{family} for {k}", "coass": sorted(coass), "ass": sorted(ass_lp)})
    rows["b"] = b_ok

    # (d)/(f): divisibility of Hom(L', M), i.e. torsion-freeness of L' ⊗ L
    def tf_row(tag, mods):
        ok = True
        for k, Lp in mods.items():
            if not _torsion_free(fx, tensor(Lp, L)):
                ok = False
                witnesses.setdefault(tag, {"prime": k, "module": "L' ⊗ L not torsion-free"})
        return ok

    rows["d"] = tf_row("d", {"R": Module.free(R, 1), **ideals})
    rows["c"] = rows["d"]
    rows["f"] = tf_row("f", ideals)
    rows["e"] = rows["f"]
    g_ok = True
    for k, P in candidates.items():
        if not _torsion_free(fx, tor1(quotients[k], L)):
            g_ok = False
            witnesses.setdefault("g", {"prime": k, "module": "Tor_1(R/P, L) not torsion-free"})
    rows["g"] = g_ok

    local = {}
    for label, m in fx.maximal_ideals.items():
        local[label] = thm61_local(fx, m, L)["injective_at_m"]
    rows["g'_all_max"] = all(local.values()) if local else None

    ff = is_faithfully_flat(fx, L)
    rows["i"] = ff["verdict"]
    rows["ii"] = ii_ok
    simple_ok = all(ff.get("simple_rows", {}).values()) if ff["verdict"] is not None else None
    rows["iii"] = None if rows["a"] is None else bool(rows["a"] and simple_ok)

    main = [rows[t] for t in ("a", "b", "c", "d", "e", "f", "g")]
    cog = [rows[t] for t in ("i", "ii", "iii")]
    consistent = len(set(main)) == 1 and len(set(cog)) == 1
    out = {
        "reduced": reduced,
        "rows": rows,
        "local": local,
        "witnesses": witnesses,
        "injective_consistent": len(set(main)) == 1,
        "cogenerator_consistent": len(set(cog)) == 1,
        "consistent": consistent,
        "candidates": list(candidates),
        "caveat": "conditions over all P in Spec R are evaluated over the candidate primes only",
    }
    if vacuous:
        out["pattern"] = "non-reduced: torsion rows pass vacuously while the flatness oracle decides injectivity"
        out["vacuous_rows"] = ["c", "d", "e", "f", "g"]
    return out


def thm61_local(fx: RingFixture, m: Ideal, L: Module) -> dict:
    """``L^∨`` injective at m iff ``Tor_1(R/m, L) = 0``; cross-checked with the flat-side criterion."""
    T = tor1(cyclic(fx.ring, m), L)
    inj = T.is_zero()
    out = {"injective_at_m": inj, "tor1_zero": inj}
    if fx.hypothesis("reduced") in (CERTIFIED, TRUSTED):
        cross, _ = local_flat_criterion(fx, m, L, "e'")
        out["local_flat_criterion"] = cross
        out["agrees"] = cross == inj
    return out
