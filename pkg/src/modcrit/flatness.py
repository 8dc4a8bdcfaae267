"""Flatness predicates for finitely presented modules over affine rings.

The Fitting-ideal test is the ground truth: over a connected ring a finitely
presented module is flat iff it is projective of constant rank r, iff
``Fitt_{r-1} = 0`` and ``Fitt_r = R``.  The torsion-freeness criteria are
evaluated against it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .fixtures import CERTIFIED, REFUTED, TRUSTED, RingFixture
from .modules import (
    Module,
    ModuleMap,
    annihilator,
    ass_membership,
    cyclic,
    fitting_ideal,
    ideal_as_module,
    prune,
    quotient_module,
    tensor,
    tor1,
)
from .rings import Ideal
from .verdicts import HypothesisViolation, NotApplicable

__all__ = [
    "FlatVerdict",
    "is_flat_oracle",
    "local_fitting_free",
    "flat_criterion",
    "local_flat_criterion",
    "ass_transport_check",
    "is_faithfully_flat",
    "nonreduced_demo",
    "all_nonzerodivisors_units",
]


@dataclass
class FlatVerdict:
    verdict: str  # flat | not_flat | inapplicable
    rank: int | None = None
    fitting: list = field(default_factory=list)  # (j, ideal text)
    reason: str = ""

    @property
    def flat(self) -> bool:
        return self.verdict == "flat"

    def as_dict(self) -> dict:
        out = {"verdict": self.verdict, "rank": self.rank, "fitting": [{"j": j, "ideal": s} for j, s in self.fitting]}
        if self.reason:
            out["reason"] = self.reason
        return out


def _finite_spectrum(fx: RingFixture) -> bool:
    """R zero-dimensional with every maximal ideal declared: ∩ declared ⊆ √0."""
    if not fx.maximal_ideals:
        return False
    meet = fx.ring.unit_ideal
    for m in fx.maximal_ideals.values():
        meet = meet.intersect(m)
    return meet.radical_issubset(fx.ring.zero_ideal)


def is_flat_oracle(fx: RingFixture, M: Module) -> FlatVerdict:
    """Fitting-ideal flatness test.

    Needs a connected ring, except over a finite spectrum where flatness is
    local freeness at each declared maximal ideal.
    """
    if fx.hypothesis("connected") not in (CERTIFIED, TRUSTED):
        if _finite_spectrum(fx):
            ranks = {}
            for label, m in fx.maximal_ideals.items():
                free, rank = local_fitting_free(M, m)
                if not free:
                    return FlatVerdict("not_flat", None, [], f"not free at {label}")
                ranks[label] = rank
            return FlatVerdict("flat", None, [], "pointwise: free at every point of a finite spectrum " + str(ranks))
        return FlatVerdict("inapplicable", reason=f"CONNECTED is {fx.hypothesis('connected')}")
    pruned = prune(M)
    fits = []
    for j in range(pruned.rank + 1):
        F = fitting_ideal(pruned, j)
        fits.append((j, str(F)))
        if not F.is_zero():
            if F.is_unit():
                return FlatVerdict("flat", j, fits)
            return FlatVerdict("not_flat", None, fits, f"first nonzero Fitting ideal Fitt_{j} is proper")
    return FlatVerdict("flat", pruned.rank, fits)


def local_fitting_free(M: Module, m: Ideal) -> tuple:
    """Is ``M_m`` free?  ``(free, rank)`` via the smallest r with ``Fitt_r ⊄ m``.

    Then ``M_m`` is free of rank r iff ``Fitt_{r-1}`` vanishes at m, i.e.
    r = 0 or ``ann(Fitt_{r-1}) ⊄ m``.
    """
    pruned = prune(M)
    R = M.ring
    r = 0
    while r <= pruned.rank:
        F = fitting_ideal(pruned, r)
        if not F.issubset(m):
            break
        r += 1
    if r == 0:
        return True, 0
    prev = fitting_ideal(pruned, r - 1)
    if prev.is_zero():
        return True, r
    ann = R.zero_ideal.quotient(prev)
    return (not ann.issubset(m)), (r if not ann.issubset(m) else None)


def _criterion_module(M: Module, P: Ideal, mode: str) -> Module:
    R = M.ring
    if mode in ("d", "d'"):
        return tensor(ideal_as_module(P), M)
    if mode in ("e", "e'"):
        return tor1(cyclic(R, P), M)
    raise ValueError(f"unknown criterion mode {mode!r}")


def all_nonzerodivisors_units(fx: RingFixture) -> bool:
    """True when every declared associated prime is maximal and Ass is complete.

    Then the union of Ass R is the union of the maximal ideals containing I:
    the only non-zerodivisors are units and every module is torsion-free.
    """
    if not fx.ass_complete or not fx.ass_primes:
        return False
    if not all(p.maximal for p in fx.ass_primes):
        return False
    return all(m in fx.ass for m in fx.maximal_ideals.values())


def _witness(T: Module) -> list:
    return [[str(f) for f in g] for g in (T.generators or ())]


def flat_criterion(fx: RingFixture, M: Module, P: Ideal, mode: str) -> tuple:
    """(verdict, detail) for ``P ⊗ M`` (mode d) or ``Tor_1(R/P, M)`` (mode e) torsion-free."""
    if mode not in ("d", "e"):
        raise ValueError(f"unknown mode {mode!r}")
    N = _criterion_module(M, P, mode)
    if fx.hypothesis("reduced") == REFUTED and all_nonzerodivisors_units(fx):
        return True, {"vacuous": True, "module_zero": N.is_zero()}
    tf, T = fx.torsion_free(N)
    detail = {"module_zero": N.is_zero()}
    if not tf:
        detail["torsion_generators"] = _witness(T)
        detail["torsion_annihilator"] = str(annihilator(T))
    return tf, detail


def local_flat_criterion(fx: RingFixture, m: Ideal, M: Module, mode: str) -> tuple:
    """(free at m, detail) from ``m ⊗ M`` (d') or ``Tor_1(R/m, M)`` (e') torsion-free at m."""
    if mode not in ("d'", "e'", "d-local", "e-local"):
        raise ValueError(f"unknown mode {mode!r}")
    mode = {"d-local": "d'", "e-local": "e'"}.get(mode, mode)
    if not any(m == mm for mm in fx.maximal_ideals.values()):
        raise NotApplicable("the ideal is not a declared maximal ideal", ideal=str(m))
    N = _criterion_module(M, m, mode)
    if fx.hypothesis("reduced") == REFUTED and all_nonzerodivisors_units(fx):
        return True, {"vacuous": True, "module_zero": N.is_zero()}
    ok, T = fx.torsion_free_at(N, m)
    detail = {"module_zero": N.is_zero()}
    if not T.is_zero():
        detail["torsion_generators"] = _witness(T)
        detail["torsion_annihilator"] = str(annihilator(T))
    return ok, detail


def ass_transport_check(fx: RingFixture, L: Module, M: Module, candidates: dict) -> dict:
    """Memberships of each candidate in Ass L, Ass(L⊗M) and Ass(M/PM), with the derived verdicts.

    ``candidates`` maps labels to prime ideals.  Verdicts hold only over the
    candidate list.
    """
    LM = tensor(L, M)
    rows = []
    ass_L, ass_LM = [], []
    quotients = {}
    for label, P in candidates.items():
        in_L = ass_membership(P, L)
        in_LM = ass_membership(P, LM)
        rows.append({"prime": label, "in_ass_L": in_L, "in_ass_LM": in_LM})
        if in_L:
            ass_L.append(label)
        if in_LM:
            ass_LM.append(label)
    union = set()
    for label in ass_L:
        P = candidates[label]
        MP = quotient_module(M, [tuple(g if j == i else P.ring.poly.zero for j in range(M.rank)) for i in range(M.rank) for g in P.gens])
        quotients[label] = [q for q, Q in candidates.items() if ass_membership(Q, MP)]
        union.update(quotients[label])
    return {
        "candidates": list(candidates),
        "rows": rows,
        "ass_L": ass_L,
        "ass_LM": ass_LM,
        "containment": set(ass_LM) <= set(ass_L),
        "equality": set(ass_LM) == set(ass_L),
        "ass_M_mod_PM": quotients,
        "transport_identity": set(ass_LM) == union,
        "caveat": "memberships evaluated over the candidate primes only",
    }


def is_faithfully_flat(fx: RingFixture, M: Module) -> dict:
    """Flat with ``ann(M) = 0``, plus ``Ass(R/m ⊗ M) = {m}`` for each declared m."""
    oracle = is_flat_oracle(fx, M)
    if oracle.verdict == "inapplicable":
        return {"verdict": None, "oracle": oracle.as_dict(), "reason": oracle.reason}
    ann_zero = annihilator(M).is_zero()
    simple = {}
    for label, m in fx.maximal_ideals.items():
        k = cyclic(fx.ring, m)
        simple[label] = ass_membership(m, tensor(k, M))
    faithful = oracle.flat and ann_zero
    return {
        "verdict": faithful,
        "flat": oracle.flat,
        "annihilator_zero": ann_zero,
        "simple_rows": simple,
        "simple_rows_agree": (not oracle.flat) or all(simple.values()) == faithful,
    }


def nonreduced_demo(fx: RingFixture, J: Ideal, M: Module) -> dict:
    """The inclusion ``j: J -> R`` tensored with ``M`` is zero while ``J ⊗ M != 0``."""
    if fx.hypothesis("reduced") != REFUTED:
        raise HypothesisViolation("the demonstration runs on a ring whose REDUCED hypothesis is refuted", fixture=fx.name)
    Jmod = ideal_as_module(J)
    JM = tensor(Jmod, M)
    images = []
    P = fx.ring.poly
    for (g,) in Jmod.generators:
        for i in range(M.rank):
            images.append(tuple(g if k == i else P.zero for k in range(M.rank)))
    jm = ModuleMap(JM, M, images)
    oracle = is_flat_oracle(fx, M)
    vacuous = all_nonzerodivisors_units(fx)
    return {
        "map_is_zero": jm.is_zero(),
        "tensor_nonzero": not JM.is_zero(),
        "oracle": oracle.as_dict(),
        "torsion_rows_vacuous": vacuous,
        "reduced": fx.hypothesis("reduced"),
    }
