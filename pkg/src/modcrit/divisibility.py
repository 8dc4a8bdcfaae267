"""W-torsion-freeness and W-divisibility for finitely generated multiplicative sets.

For W generated by w_1..w_k, multiplication by a word is injective or
surjective as soon as each generator is, so every verdict is a conjunction
over the generators.
"""

from __future__ import annotations

from dataclasses import dataclass

from .avoidance import claim1_witness
from .fixtures import RingFixture
from .groebner import from_terms, lift_raw
from .modules import Module, ModuleMap, _vec_terms, kernel_of_map, multiplication_map, quotient_module
from .polynomials import Poly
from .rings import MultiplicativeSet
from .verdicts import HypothesisViolation, NotApplicable

__all__ = [
    "GeneratorRow",
    "DivisibilityVerdict",
    "acts_injectively",
    "acts_surjectively",
    "w_predicates",
    "solve_multiple",
    "lemma42_check",
    "localized_division_witness",
    "h_divisible",
]


@dataclass(frozen=True)
class GeneratorRow:
    w: Poly
    injective: bool
    surjective: bool

    def as_dict(self) -> dict:
        return {"w": str(self.w), "injective": self.injective, "surjective": self.surjective}


@dataclass(frozen=True)
class DivisibilityVerdict:
    rows: tuple
    zero_ring: bool = False

    @property
    def torsion_free(self) -> bool:
        return all(r.injective for r in self.rows)

    @property
    def divisible(self) -> bool:
        return all(r.surjective for r in self.rows)

    @property
    def bijective(self) -> bool:
        return self.torsion_free and self.divisible

    def as_dict(self) -> dict:
        return {
            "rows": [r.as_dict() for r in self.rows],
            "w_torsion_free": self.torsion_free,
            "w_divisible": self.divisible,
            "bijective": self.bijective,
            "zero_ring": self.zero_ring,
        }


def acts_injectively(M: Module, w) -> bool:
    return kernel_of_map(multiplication_map(M, w)).is_zero()


def acts_surjectively(M: Module, w) -> bool:
    w = M.ring.elem(w)
    return quotient_module(M, [tuple(w if j == i else M.ring.poly.zero for j in range(M.rank)) for i in range(M.rank)]).is_zero()


def w_predicates(M: Module, W: MultiplicativeSet) -> DivisibilityVerdict:
    if W.mode != "fg":
        raise HypothesisViolation("generator tests need a finitely generated multiplicative set")
    rows = tuple(GeneratorRow(w, acts_injectively(M, w), acts_surjectively(M, w)) for w in W.gens)
    return DivisibilityVerdict(rows, W.contains_zero())


def solve_multiple(M: Module, f, target) -> tuple | None:
    """A vector ``y`` with ``f * y == target`` in M, or None."""
    R = M.ring
    f = R.elem(f)
    P = R.poly
    vectors = [_vec_terms(tuple(f if j == i else P.zero for j in range(M.rank))) for i in range(M.rank)]
    res = lift_raw(_vec_terms(M.vector(target)), vectors, M.relation_terms, M.rank, P)
    if res is None:
        return None
    return tuple(R.reduce(c) for c in from_terms(res, P, M.rank))


def lemma42_check(M: Module, W: MultiplicativeSet) -> dict:
    """Inverse actions of the generators when all act bijectively.

    The inverse of w is the matrix Y with ``w * Y e_i = e_i`` in M; it is
    checked to be a well-defined endomorphism whose composites with w are the
    identity.
    """
    verdict = w_predicates(M, W)
    if not verdict.bijective:
        failing = next(r for r in verdict.rows if not (r.injective and r.surjective))
        raise NotApplicable(f"{failing.w} does not act bijectively", row=failing.as_dict())
    inverses = []
    for w in W.gens:
        cols = []
        for i in range(M.rank):
            y = solve_multiple(M, w, M.unit(i))
            if y is None:
                raise NotApplicable(f"no preimage of e_{i} under {w}")
            cols.append(y)
        Y = ModuleMap(M, M, cols, check=False)
        well_defined = Y.is_compatible()
        comp1 = all(M.vector_is_zero(tuple(w * a - b for a, b in zip(Y.apply(M.unit(i)), M.unit(i)))) for i in range(M.rank))
        wcols = multiplication_map(M, w)
        comp2 = all(M.vector_is_zero(tuple(a - b for a, b in zip(Y.apply(wcols.apply(M.unit(i))), M.unit(i)))) for i in range(M.rank))
        inverses.append({
            "w": str(w),
            "inverse_columns": [[str(f) for f in c] for c in cols],
            "well_defined": well_defined,
            "w_after_inverse_is_identity": comp1,
            "inverse_after_w_is_identity": comp2,
        })
    certified = all(v["well_defined"] and v["w_after_inverse_is_identity"] and v["inverse_after_w_is_identity"] for v in inverses)
    return {"certified": certified, "inverses": inverses, "predicates": verdict.as_dict()}


def localized_division_witness(fx: RingFixture, M: Module, W: MultiplicativeSet, c, **bounds) -> dict:
    """For each generator x: ``x = (wc + r) y`` in M, whence ``x/1 = (c/1)(wy/1)``."""
    R = fx.ring
    wit = claim1_witness(fx, W, c, **bounds)
    if wit.zero_ring:
        return {"zero_ring": True, "witness": wit.as_dict(), "rows": [], "verified": True}
    f = wit.wc_plus_r
    if M.rank == 0 or M.is_zero():
        return {"zero_ring": False, "witness": wit.as_dict(), "rows": [], "verified": True, "vacuous": True}
    if not acts_surjectively(M, f):
        raise NotApplicable(f"multiplication by {f} is not surjective on the module")
    rows = []
    ok = R.is_zero(wit.w * wit.r)
    for i in range(M.rank):
        y = solve_multiple(M, f, M.unit(i))
        check = M.vector_is_zero(tuple(f * a - b for a, b in zip(y, M.unit(i))))
        wy = tuple(R.reduce(wit.w * a) for a in y)
        ok = ok and check
        rows.append({"generator": i, "y": [str(a) for a in y], "wy": [str(a) for a in wy], "x_equals_f_y": check})
    return {"zero_ring": False, "witness": wit.as_dict(), "rows": rows, "verified": ok}


def h_divisible(M: Module, W: MultiplicativeSet) -> dict:
    """Decided only for W-torsion-free modules, where it coincides with W-divisibility."""
    v = w_predicates(M, W)
    if v.zero_ring:
        return {"verdict": True, "route": "zero ring"}
    if v.torsion_free:
        return {"verdict": v.divisible, "route": "torsion-free: h-divisible iff divisible"}
    return {"verdict": None, "route": "UNDECIDED"}
