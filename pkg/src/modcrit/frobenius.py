"""Ring endomorphisms, the functor F^e, the pushforward ᵉR and regularity tests.

An endomorphism is given by the images of the variables.  ``F^e`` acts on a
presentation by applying ``φ^e`` to every entry of the relation matrix
(right exactness of the base change along ``φ^e``).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product

from .fixtures import RingFixture
from .groebner import groebner_raw, reduce_raw
from .modules import Module, ass_membership, ideal_as_module
from .polynomials import Poly, PolyRing
from .rings import AffineRing, Ideal, eliminate_polys
from .verdicts import HypothesisViolation, NotApplicable, SizeBoundExceeded, Undecidable

__all__ = [
    "Endomorphism",
    "endomorphism_check",
    "frobenius_functor",
    "kunz_regularity_test",
    "jacobian_oracle",
    "pushforward_eR",
    "RingMap",
    "restrict_module",
    "contract_prime",
    "ass_contraction_check",
]

DEFAULT_NMAX = 8
DEFAULT_PUSHFORWARD_BOUND = 16


class Endomorphism:
    """``φ: R -> R`` by variable images; construction verifies well-definedness."""

    def __init__(self, ring: AffineRing, images, label: str | None = None, frobenius: bool = False):
        self.ring = ring
        self.label = label
        self.frobenius = frobenius
        self.images = tuple(ring.reduce(ring.poly(f)) for f in images)
        if len(self.images) != ring.nvars:
            raise ValueError(f"need {ring.nvars} variable images, got {len(self.images)}")
        bad = [g for g in ring.relations if not ring.is_zero(g.compose(self.images))]
        if bad:
            raise ValueError(f"not well defined: relation {bad[0]} does not map into I")

    @classmethod
    def frobenius_of(cls, ring: AffineRing, label: str | None = None) -> "Endomorphism":
        p = ring.characteristic
        if p == 0:
            raise ValueError("Frobenius needs positive characteristic")
        return cls(ring, [g**p for g in ring.poly.gens()], label, frobenius=True)

    def __call__(self, f) -> Poly:
        return self.ring.reduce(self.ring.poly(f).compose(self.images))

    def power(self, e: int) -> "Endomorphism":
        if e < 0:
            raise ValueError("negative iterate")
        images = list(self.ring.poly.gens())
        for _ in range(e):
            images = [self.ring.reduce(f.compose(self.images)) for f in images]
        return Endomorphism(self.ring, images, self.label, self.frobenius)

    def q(self, e: int = 1) -> int:
        if not self.frobenius:
            raise ValueError("q is defined for the Frobenius endomorphism only")
        return self.ring.characteristic**e

    def image_ideal(self, J: Ideal) -> Ideal:
        """``φ(J)R``."""
        return self.ring.ideal([self(g) for g in J.gens])

    def preimage(self, J: Ideal) -> Ideal:
        """``φ⁻¹(J)`` by eliminating the target copy of the variables."""
        R = self.ring
        P = R.poly
        src = [f"_s{i}" for i in range(P.nvars)]
        big = PolyRing(P.field, tuple(P.variables) + tuple(src))
        mapping_src = {v: s for v, s in zip(P.variables, src)}
        gens = [big.embed(g) for g in list(J.gens) + list(R.relations)]
        for v, img in zip(src, self.images):
            gens.append(big.var(v) - big.embed(img))
        elim = eliminate_polys(big, gens, P.variables)
        back = {s: v for v, s in mapping_src.items()}
        return R.ideal([P.embed(g, back) for g in elim])

    def describe(self) -> list:
        return [f"{v} -> {f}" for v, f in zip(self.ring.variables, self.images)]


def endomorphism_check(phi: Endomorphism, P: Ideal, nmax: int = DEFAULT_NMAX) -> dict:
    """Fixed prime, local contraction and the radical identity at ``P``."""
    pre = phi.preimage(P)
    fixed = pre == P
    P2 = P * P
    contracting_n = None
    if fixed:
        for n in range(1, nmax + 1):
            phin = phi.power(n)
            if all(not P2.quotient_element(phin(g)).issubset(P) for g in P.gens):
                contracting_n = n
                break
    image = phi.image_ideal(P)
    radical = image.issubset(P) and P.radical_issubset(image)
    out = {
        "prime": str(P),
        "preimage": str(pre),
        "fixed": fixed,
        "contracting": contracting_n is not None,
        "contracting_n": contracting_n,
        "radical_of_image_is_prime": radical,
        "locally_contracting": fixed and contracting_n is not None,
    }
    if fixed and contracting_n is None:
        out["status"] = "NOT_WITHIN_BOUND"
        out["nmax"] = nmax
    return out


def frobenius_functor(M: Module, phi: Endomorphism, e: int = 1, label: str | None = None) -> Module:
    """``F^e(coker A) = coker(φ^e(A))`` entrywise."""
    if M.ring != phi.ring:
        raise ValueError("module and endomorphism over different rings")
    phie = phi.power(e)
    cols = [tuple(phie(f) for f in col) for col in M.relations]
    return Module(M.ring, M.rank, cols, label)


def _jacobian_minors(R: AffineRing, c: int) -> list:
    P = R.poly
    rels = list(R.relations)
    if c == 0:
        return [P.one]
    if c > len(rels) or c > P.nvars:
        return []
    J = [[g.diff(i) for i in range(P.nvars)] for g in rels]
    from .modules import _minors

    return _minors(J, c, R)


def jacobian_oracle(fx: RingFixture) -> dict:
    """Singular-locus ideal ``I + (c x c minors of the Jacobian)`` and per-point verdicts."""
    codim = fx.flags.get("codim")
    if codim is None or not fx.flags.get("equidimensional", codim == 0):
        raise Undecidable("the Jacobian test needs a declared equidimensional codimension", fixture=fx.name)
    R = fx.ring
    sing = R.ideal(_jacobian_minors(R, int(codim)))
    points = {label: (not sing.issubset(m)) for label, m in fx.maximal_ideals.items()}
    return {
        "singular_ideal": str(sing),
        "regular_everywhere": sing.is_unit(),
        "regular_at": points,
        "_ideal": sing,
    }


def kunz_regularity_test(fx: RingFixture, e: int, labels, phi: Endomorphism | None = None) -> dict:
    """Torsion-freeness of ``F^e(m)`` at each requested maximal ideal."""
    fx.require_reduced("the regularity test")
    R = fx.ring
    if phi is None:
        if R.characteristic == 0:
            raise HypothesisViolation("the Frobenius test needs positive characteristic", fixture=fx.name)
        phi = Endomorphism.frobenius_of(R)
        mode = "frobenius"
    else:
        mode = "frobenius" if phi.frobenius else "locally_contracting"
    rows = {}
    for label in labels:
        m = fx.maximal_ideals[label]
        row = {}
        if mode != "frobenius":
            chk = endomorphism_check(phi, m)
            row["endomorphism"] = {k: v for k, v in chk.items() if k != "prime"}
            if not chk["locally_contracting"]:
                row["verdict"] = "hypothesis_unmet"
                rows[label] = row
                continue
        Fm = frobenius_functor(ideal_as_module(m), phi, e)
        tf, T = fx.torsion_free(Fm)
        row["torsion_free"] = tf
        row["verdict"] = "regular" if tf else "singular"
        if not tf:
            row["torsion_generators"] = [[str(f) for f in g] for g in T.generators]
        rows[label] = row
    report = {"e": e, "mode": mode, "points": rows}
    try:
        jac = jacobian_oracle(fx)
    except Undecidable as exc:
        report["coverage"] = {"covered": False, "reason": exc.message}
        report["whole_ring"] = None
        return report
    sing = jac["_ideal"]
    prod = R.unit_ideal
    for label in labels:
        prod = prod * fx.maximal_ideals[label]
    covered = sing.is_unit() or all(sing.radical_contains(g) for g in prod.gens)
    report["coverage"] = {"covered": covered, "singular_ideal": jac["singular_ideal"]}
    if covered:
        report["whole_ring"] = "regular" if all(r.get("verdict") == "regular" for r in rows.values()) else "singular"
    else:
        report["whole_ring"] = None
    if mode != "frobenius":
        report["hypotheses"] = "verdicts assume a reduced ring with a locally contracting endomorphism"
    return report


def pushforward_eR(fx: RingFixture, e: int = 1, bound: int = DEFAULT_PUSHFORWARD_BOUND, label: str | None = None) -> Module:
    """``ᵉR`` as an R-module on the monomials ``x^a``, ``a ∈ [0, q)^n``."""
    R = fx.ring
    P = R.poly
    p = R.characteristic
    if p == 0:
        raise HypothesisViolation("the pushforward needs positive characteristic", fixture=fx.name)
    q = p**e
    n = P.nvars
    if q**n > bound:
        raise SizeBoundExceeded(f"q^n = {q**n} generators exceed the bound {bound}", q=q, n=n)
    basis = list(product(range(q), repeat=n))
    index = {a: i for i, a in enumerate(basis)}
    cols = []
    for g in R.relations:
        for b in basis:
            col = [dict() for _ in basis]
            for ex, c in g.terms.items():
                t = tuple(x + y for x, y in zip(ex, b))
                d = tuple(v // q for v in t)
                a = tuple(v % q for v in t)
                slot = col[index[a]]
                slot[d] = P.field.add(slot.get(d, P.field.zero), c)
            cols.append(tuple(Poly(P, {k: v for k, v in s.items() if v}) for s in col))
    return Module(R, len(basis), cols, label, [P.monomial(a) for a in basis])


# ---------------------------------------------------------------------------
# finite ring maps and contraction of associated primes


class _EliminationModuleOrder:
    """Module order on ``k[y, x]^N``: split group, then x-block, then position, then y-block.

    Every lower-group term free of x is smaller than any lower-group term
    involving x, so basis elements with x-free leads are x-free.
    """

    def __init__(self, ny: int, nx: int, split: int):
        self.ny, self.nx, self.split = ny, nx, split
        self.signature = f"yxelim({ny},{nx})/split{split}"

    def key(self, c: int, e) -> tuple:
        ey = e[: self.ny]
        ex = e[self.ny:]
        kx = (sum(ex),) + tuple(-v for v in reversed(ex))
        ky = (sum(ey),) + tuple(-v for v in reversed(ey))
        return (0 if c < self.split else -1,) + kx + (-c,) + ky


@dataclass
class RingMap:
    """``g: R -> S`` by images of R's variables, with an R-module basis of S."""

    source: AffineRing
    target: AffineRing
    images: tuple  # elements of target, one per source variable
    module_basis: tuple  # elements of target generating it over the source
    label: str | None = None

    @cached_property
    def big(self) -> PolyRing:
        src = [f"_y{i}" for i in range(self.source.nvars)]
        return PolyRing(self.target.field, tuple(src) + tuple(self.target.variables))

    def _graph_relations(self, rank: int) -> list:
        """Raw vectors ``(y_i - g_i(x)) e_c`` and ``I_S e_c`` inside ``k[y, x]^rank``."""
        big = self.big
        out = []
        for c in range(rank):
            for i, img in enumerate(self.images):
                f = big.gen(i) - big.embed(img)
                out.append({(c, e): v for e, v in f.terms.items()})
            for g in self.target.relations:
                f = big.embed(g)
                out.append({(c, e): v for e, v in f.terms.items()})
        return out

    def _to_source(self, f: Poly) -> Poly:
        names = {f"_y{i}": v for i, v in enumerate(self.source.variables)}
        return self.source.reduce(self.source.poly.embed(f, names))

    def _span_basis(self, extra_relations: list, rank: int):
        """Augmented basis for lifting onto ``module_basis`` over the source."""
        big = self.big
        ny = self.source.nvars
        nx = self.target.nvars
        k = len(self.module_basis)
        zero = (0,) * big.nvars
        aug = []
        for j, b in enumerate(self.module_basis):
            for c in range(rank):
                v = {(c, e): val for e, val in big.embed(b).terms.items()}
                v[(rank + c * k + j, zero)] = big.field.one
                aug.append(v)
        aug.extend(extra_relations)
        aug.extend(self._graph_relations(rank))
        order = _EliminationModuleOrder(ny, nx, rank)
        return groebner_raw(aug, big.field, order, big.nvars), order

    def is_finite(self) -> bool:
        """1 and every ``x_l b_j`` lie in the source-span of the basis."""
        gb, order = self._span_basis([], 1)
        big = self.big
        ny = self.source.nvars
        targets = [big.one] + [big.gen(ny + l) * big.embed(b) for l in range(self.target.nvars) for b in self.module_basis]
        for t in targets:
            rem = reduce_raw({(0, e): v for e, v in t.terms.items()}, gb, big.field, order)
            if any(c < 1 for c, _ in rem) or any(any(e[ny:]) for _, e in rem):
                return False
        return True


def restrict_module(g: RingMap, M: Module) -> Module:
    """``M`` over S viewed over R: generators ``b_j e_i``, relations with no target variables."""
    if M.ring != g.target:
        raise ValueError("module is not over the target ring")
    if not g.is_finite():
        raise NotApplicable("the declared basis does not make the target module-finite", map=g.label)
    big = g.big
    t = M.rank
    k = len(g.module_basis)
    ny = g.source.nvars
    rels = []
    for col in M.relations:
        v = {}
        for c, f in enumerate(col):
            for e, val in big.embed(f).terms.items():
                v[(c, e)] = val
        rels.append(v)
    gb, _order = g._span_basis(rels, t)
    src = g.source
    out = []
    for v in gb:
        lead = max(v, key=lambda term: _order.key(*term))
        if lead[0] < t or any(lead[1][ny:]):
            continue
        col = [src.poly.zero] * (t * k)
        parts: dict = {}
        for (c, e), val in v.items():
            parts.setdefault(c - t, {})[e] = val
        for idx, terms in parts.items():
            col[idx] = g._to_source(Poly(big, terms))
        out.append(tuple(col))
    gens = [tuple(b if cc == i else g.target.poly.zero for cc in range(t)) for i in range(t) for b in g.module_basis]
    return Module(src, t * k, out, f"{M.label or 'M'}|R", gens)


def contract_prime(g: RingMap, Q: Ideal) -> Ideal:
    """``g⁻¹(Q)`` by eliminating the target variables."""
    big = g.big
    gens = [big.embed(q) for q in list(Q.gens) + list(g.target.relations)]
    for i, img in enumerate(g.images):
        gens.append(big.gen(i) - big.embed(img))
    elim = eliminate_polys(big, gens, g.target.variables)
    return g.source.ideal([g._to_source(f) for f in elim])


def ass_contraction_check(g: RingMap, M: Module, candidates: dict, source_fixture: RingFixture | None = None) -> dict:
    """Compare Ass memberships over S with those of the contractions over R."""
    MR = restrict_module(g, M)
    rows = []
    image_S, image_R = [], []
    for label, Q in candidates.items():
        inS = ass_membership(Q, M)
        c = contract_prime(g, Q)
        inR = ass_membership(c, MR)
        rows.append({"prime": label, "in_ass_S": inS, "contraction": str(c), "contraction_in_ass_R": inR})
        if inS:
            image_S.append(str(c))
        if inR:
            image_R.append(str(c))
    return {
        "map": g.label,
        "module": M.label,
        "restricted_rank": MR.rank,
        "rows": rows,
        "contracted_ass_S": sorted(set(image_S)),
        "ass_R_over_contractions": sorted(set(image_R)),
        "agree": set(image_S) == set(image_R),
        "caveat": "memberships evaluated over the candidate primes only",
    }
