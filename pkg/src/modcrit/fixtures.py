"""Ring fixtures: affine rings with declared prime data, and their validation.

Associated primes are inputs, never computed.  Validation checks what can be
checked without factorization and labels the remainder TRUSTED.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import permutations

from .groebner import GroebnerBasis
from .modules import Module, ass_membership, torsion_free, torsion_free_at, torsion_submodule
from .orders import lex
from .polynomials import PolyRing
from .rings import AffineRing, Ideal
from .verdicts import HypothesisViolation, Undecidable

__all__ = ["DeclaredPrime", "RingFixture", "ValidationReport", "validate_fixture", "is_nonzerodivisor", "ass_torsion_check"]

CERTIFIED = "certified"
TRUSTED = "trusted"
REFUTED = "refuted"
UNDECLARED = "undeclared"


@dataclass(frozen=True)
class DeclaredPrime:
    label: str
    gens: tuple  # declared generators in k[x], unreduced
    minimal: bool
    maximal: bool


@dataclass
class RingFixture:
    """An affine ring with declared associated primes, maximal ideals and flags."""

    name: str
    poly: PolyRing
    relations: tuple
    ass_primes: tuple = ()
    ass_complete: bool = False
    max_ideals: dict = field(default_factory=dict)  # label -> tuple of generators
    primes: dict = field(default_factory=dict)  # extra named primes: label -> generators
    flags: dict = field(default_factory=dict)
    local_dims: dict = field(default_factory=dict)

    @cached_property
    def ring(self) -> AffineRing:
        return AffineRing(self.poly, self.relations, self.name)

    @cached_property
    def ass(self) -> list:
        return [self.ring.ideal(p.gens) for p in self.ass_primes]

    @cached_property
    def minimal_primes(self) -> list:
        return [self.ring.ideal(p.gens) for p in self.ass_primes if p.minimal]

    @cached_property
    def maximal_ideals(self) -> dict:
        return {k: self.ring.ideal(v) for k, v in self.max_ideals.items()}

    def prime(self, label: str) -> Ideal:
        """Look up a named ideal among Ass primes, maximal ideals and extra primes."""
        for p in self.ass_primes:
            if p.label == label:
                return self.ring.ideal(p.gens)
        if label in self.max_ideals:
            return self.ring.ideal(self.max_ideals[label])
        if label in self.primes:
            return self.ring.ideal(self.primes[label])
        raise KeyError(label)

    def prime_labels(self) -> list:
        out = [p.label for p in self.ass_primes]
        out += [k for k in self.max_ideals if k not in out]
        out += [k for k in self.primes if k not in out]
        return out

    def declared_maximal_ass(self) -> list:
        return [self.ring.ideal(p.gens) for p in self.ass_primes if p.maximal]

    @cached_property
    def validation(self) -> "ValidationReport":
        return validate_fixture(self)

    def hypothesis(self, name: str) -> str:
        return self.validation.hypotheses.get(name, UNDECLARED)

    def require_reduced(self, what: str) -> None:
        status = self.hypothesis("reduced")
        if status not in (CERTIFIED, TRUSTED):
            raise HypothesisViolation(f"{what} needs a reduced ring; REDUCED is {status} for {self.name}", fixture=self.name)

    # torsion with the reduced-ring hypothesis checked -------------------

    def torsion_submodule(self, M: Module) -> Module:
        self.require_reduced("torsion")
        return torsion_submodule(M, self.minimal_primes)

    def torsion_free(self, M: Module) -> tuple:
        self.require_reduced("torsion-freeness")
        return torsion_free(M, self.minimal_primes)

    def torsion_free_at(self, M: Module, m: Ideal) -> tuple:
        self.require_reduced("local torsion-freeness")
        return torsion_free_at(M, self.minimal_primes, m)

    def is_nonzerodivisor(self, w) -> bool:
        return is_nonzerodivisor(w, self)


@dataclass
class ValidationReport:
    checks: list  # dicts {check, status, detail}
    hypotheses: dict
    primality: dict

    @property
    def ok(self) -> bool:
        return all(c["status"] == "pass" for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if c["status"] != "pass"]

    def as_dict(self) -> dict:
        return {"ok": self.ok, "checks": self.checks, "hypotheses": dict(sorted(self.hypotheses.items())), "primality": dict(sorted(self.primality.items()))}


def _linear_prime(poly: PolyRing, gens) -> bool:
    """Proper ideal whose quotient is a polynomial ring (so a prime ideal).

    Tries lex orders over every variable permutation (up to 4 variables):
    if every reduced basis element has a single variable of degree one as its
    lead, each such variable is solved for and k[x]/P is a polynomial ring.
    """
    gens = [g for g in gens if g]
    if not gens:
        return True
    if poly.nvars > 4:
        perms = [tuple(range(poly.nvars))]
    else:
        perms = permutations(range(poly.nvars))
    for perm in perms:
        names = [poly.variables[i] for i in perm]
        ring = PolyRing(poly.field, names, lex(poly.nvars))
        gb = GroebnerBasis(ring, [ring.embed(g) for g in gens])
        if gb.is_unit():
            return False
        leads = gb.lead_terms()
        if all(sum(e) == 1 for _, e in leads):
            return True
    return False


def _zero_dimensional(poly: PolyRing, gens) -> bool:
    gb = GroebnerBasis(poly, gens)
    if gb.is_unit():
        return False
    pure = set()
    for _, e in gb.lead_terms():
        nz = [i for i, a in enumerate(e) if a]
        if len(nz) == 1:
            pure.add(nz[0])
    return len(pure) == poly.nvars


def _connected(fx: RingFixture, mins: list) -> bool:
    if not mins:
        return True
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(len(mins)):
            if j not in seen and not (mins[i] + mins[j]).is_unit():
                seen.add(j)
                stack.append(j)
    return len(seen) == len(mins)


def validate_fixture(fx: RingFixture) -> ValidationReport:
    """Check every checkable fixture invariant; never raises on bad data."""
    checks: list = []
    hyps: dict = {}
    primality: dict = {}
    R = fx.ring
    P = fx.poly

    def add(name, ok, detail=""):
        checks.append({"check": name, "status": "pass" if ok else "fail", "detail": detail})

    labels = [p.label for p in fx.ass_primes]
    add("unique prime labels", len(set(labels)) == len(labels), "")

    declared = [(p.label, p.gens) for p in fx.ass_primes]
    declared += [(k, v) for k, v in fx.max_ideals.items() if k not in labels]
    declared += [(k, v) for k, v in fx.primes.items() if k not in labels and k not in fx.max_ideals]
    for label, gens in declared:
        gb = GroebnerBasis(P, list(gens))
        contains_I = all(gb.contains(r) for r in fx.relations)
        add(f"{label} contains I", contains_I, "" if contains_I else "a defining relation is not in the declared ideal")
        add(f"{label} proper", not gb.is_unit(), "")
        if contains_I and not gb.is_unit() and _linear_prime(P, gens):
            primality[label] = CERTIFIED
        else:
            primality[label] = TRUSTED

    for label, gens in fx.max_ideals.items():
        zd = _zero_dimensional(P, list(gens))
        add(f"{label} zero-dimensional", zd, "" if zd else "declared maximal ideal has a positive-dimensional quotient")

    for p in fx.ass_primes:
        zd = _zero_dimensional(P, list(p.gens))
        if p.maximal:
            add(f"{p.label} maximal flag", zd, "" if zd else "declared maximal but the quotient is not finite-dimensional")
        elif primality.get(p.label) == CERTIFIED:
            add(f"{p.label} maximal flag", not zd, "" if not zd else "declared non-maximal but the quotient is a field")

    mins = fx.minimal_primes
    min_labels = [p.label for p in fx.ass_primes if p.minimal]
    for i, a in enumerate(mins):
        for j, b in enumerate(mins):
            if i < j:
                ok = not a.issubset(b) and not b.issubset(a)
                add(f"{min_labels[i]} and {min_labels[j]} incomparable", ok, "")

    for p in fx.ass_primes:
        if not p.minimal:
            Q = R.ideal(p.gens)
            ok = any(m.issubset(Q) for m in mins)
            add(f"{p.label} contains a minimal prime", ok, "")

    radical_ok = False
    meet = None
    if mins:
        meet = mins[0]
        for m in mins[1:]:
            meet = meet.intersect(m)
        zero = R.zero_ideal
        missing = [g for g in meet.gens if not zero.radical_contains(g)]
        radical_ok = not missing
        add("radical of I equals the intersection of minimal primes", radical_ok,
            "" if radical_ok else f"{missing[0]} lies in every minimal prime but not in the radical of I")
    elif fx.ass_primes or not R.is_zero_ring():
        add("radical of I equals the intersection of minimal primes", False, "no minimal primes declared")

    for p in fx.ass_primes:
        if primality.get(p.label) == CERTIFIED or p.minimal or p.maximal:
            ok = ass_membership(R.ideal(p.gens), Module.free(R, 1))
            add(f"{p.label} is associated to R", ok, "" if ok else "(0 : P) is zero or has annihilator outside P")

    all_min_certified = all(primality.get(p.label) == CERTIFIED for p in fx.ass_primes if p.minimal)

    # reduced
    if meet is not None and radical_ok:
        nil = [g for g in meet.gens if g]
        if not nil:
            hyps["reduced"] = CERTIFIED if all_min_certified else TRUSTED
        else:
            hyps["reduced"] = REFUTED
    else:
        hyps["reduced"] = TRUSTED if fx.flags.get("reduced") else UNDECLARED
    if "reduced" in fx.flags:
        declared_reduced = bool(fx.flags["reduced"])
        actual = hyps["reduced"]
        ok = not ((declared_reduced and actual == REFUTED) or (not declared_reduced and actual == CERTIFIED))
        detail = ""
        if not ok and actual == REFUTED:
            detail = f"{meet.gens[0]} is nilpotent but nonzero"
        add("declared reduced flag", ok, detail)

    # connectedness
    if radical_ok:
        conn = _connected(fx, mins)
        hyps["connected"] = (CERTIFIED if all_min_certified else TRUSTED) if conn else REFUTED
        if "connected" in fx.flags:
            add("declared connected flag", bool(fx.flags["connected"]) == conn, "")
    else:
        hyps["connected"] = TRUSTED if fx.flags.get("connected") else UNDECLARED

    # embedded primes
    embedded = [p.label for p in fx.ass_primes if not p.minimal]
    if embedded:
        hyps["no_embedded_primes"] = REFUTED
    elif hyps.get("reduced") == CERTIFIED:
        hyps["no_embedded_primes"] = CERTIFIED
    elif fx.ass_complete:
        hyps["no_embedded_primes"] = TRUSTED
    else:
        hyps["no_embedded_primes"] = UNDECLARED
    if "no_embedded_primes" in fx.flags:
        add("declared no_embedded_primes flag", bool(fx.flags["no_embedded_primes"]) == (not embedded), "")

    if fx.flags.get("equidimensional"):
        hyps["equidimensional"] = TRUSTED
        add("codimension declared", isinstance(fx.flags.get("codim"), int), "")
    else:
        hyps["equidimensional"] = UNDECLARED
    return ValidationReport(checks, hyps, primality)


def is_nonzerodivisor(w, fx: RingFixture) -> bool:
    """``w`` avoids every declared associated prime; needs a complete Ass list."""
    if not fx.ass_complete:
        raise Undecidable("associated primes not declared complete", fixture=fx.name)
    w = fx.ring.elem(w)
    return all(not P.contains(w) for P in fx.ass)


def multiplication_injective(w, ring: AffineRing) -> bool:
    """Independent check: ``(0 : w) = 0`` in R."""
    return ring.zero_ideal.quotient_element(ring.elem(w)).is_zero()


def ass_torsion_check(fx: RingFixture, M: Module, candidates: dict, localize_at: Ideal | None = None) -> dict:
    """Torsion-freeness read off associated primes, over a candidate list.

    M is torsion-free iff every Q in Ass M lies inside some prime of Ass R
    (prime avoidance).  Localizing at p keeps the primes of both lists that
    sit inside p.  When a Q fails, a generator of Q avoiding the retained
    Ass R primes is reported: it is a non-zerodivisor killing part of M.
    """
    if not fx.ass_complete:
        raise Undecidable("associated primes not declared complete", fixture=fx.name)
    ass_R = list(zip([p.label for p in fx.ass_primes], fx.ass))
    ass_M = [(k, Q) for k, Q in candidates.items() if ass_membership(Q, M)]
    if localize_at is not None:
        ass_R = [(k, P) for k, P in ass_R if P.issubset(localize_at)]
        ass_M = [(k, Q) for k, Q in ass_M if Q.issubset(localize_at)]
    rows = []
    witness = None
    for k, Q in ass_M:
        inside = [a for a, P in ass_R if Q.issubset(P)]
        rows.append({"prime": k, "contained_in": inside})
        if not inside and witness is None:
            for g in Q.canonical_gens:
                if all(not P.contains(g) for _, P in ass_R):
                    witness = {"element": str(g), "prime": k}
                    break
    out = {
        "ass_R": [k for k, _ in ass_R],
        "ass_M": [k for k, _ in ass_M],
        "rows": rows,
        "torsion_free": all(r["contained_in"] for r in rows),
        "caveat": "memberships evaluated over the candidate primes only",
    }
    if witness is not None:
        out["witness"] = witness
    return out
