"""Affine rings k[x]/I, ideal handles and the Groebner-based ideal algebra.

Every ideal of R = k[x]/I is handled through its preimage in k[x]: the
cached basis of an :class:`Ideal` is the reduced Groebner basis of its
generators together with I.  Sums, products, intersections, quotients and
saturations of preimages are preimages of the corresponding ideals of R.
"""

from __future__ import annotations

from functools import cached_property

from .groebner import GroebnerBasis, from_terms, syzygy_module_raw, to_terms
from .orders import MonomialOrder
from .polynomials import Poly, PolyRing

__all__ = ["AffineRing", "Ideal", "MultiplicativeSet", "ideal_algebra", "MixedRingError"]


class MixedRingError(ValueError):
    """Operands belong to different rings."""


def _aux_names(ring: PolyRing, count: int, stem: str = "_t") -> list:
    names = []
    i = 0
    while len(names) < count:
        name = f"{stem}{i}"
        if name not in ring.variables:
            names.append(name)
        i += 1
    return names


def eliminate_polys(ring: PolyRing, gens, eliminate) -> list:
    """Generators of ``(gens) ∩ k[remaining variables]``, returned inside ``ring``.

    ``eliminate`` is a collection of variable names of ``ring``.
    """
    eliminate = [v for v in ring.variables if v in set(eliminate)]
    keep = [v for v in ring.variables if v not in set(eliminate)]
    if not eliminate:
        return GroebnerBasis(ring, gens).elements
    if not keep:
        gb = GroebnerBasis(ring, gens)
        return [ring.one] if gb.is_unit() else []
    big = PolyRing(ring.field, eliminate + keep, MonomialOrder(((len(eliminate), "grevlex"), (len(keep), "grevlex"))))
    gb = GroebnerBasis(big, [big.embed(g) for g in gens])
    out = []
    for g in gb.elements:
        if all(not any(e[: len(eliminate)]) for e in g.terms):
            out.append(ring.embed(g))
    return out


class AffineRing:
    """The quotient ``k[x_1..x_n]/I`` of a polynomial ring by an ideal."""

    def __init__(self, poly: PolyRing, relations=(), name: str | None = None):
        self.poly = poly
        self.name = name or poly.signature
        rels = [poly(r) for r in relations]
        self._gb = GroebnerBasis(poly, rels)
        self.relations = tuple(self._gb.elements)
        self.input_relations = tuple(r for r in rels if r)

    def __repr__(self) -> str:
        return f"AffineRing({self.name})"

    def __eq__(self, other) -> bool:
        return isinstance(other, AffineRing) and other.poly == self.poly and other._gb == self._gb

    def __hash__(self) -> int:
        return hash((self.poly, self._gb))

    @property
    def field(self):
        return self.poly.field

    @property
    def variables(self):
        return self.poly.variables

    @property
    def nvars(self) -> int:
        return self.poly.nvars

    @property
    def characteristic(self) -> int:
        return self.field.characteristic

    @property
    def defining_basis(self) -> GroebnerBasis:
        return self._gb

    def is_zero_ring(self) -> bool:
        return self._gb.is_unit()

    def reduce(self, f) -> Poly:
        return self._gb.reduce(self.poly(f))

    def parse(self, text: str) -> Poly:
        return self.reduce(self.poly.parse(text))

    def elem(self, value) -> Poly:
        """Coerce text, ints or polynomials to reduced elements."""
        return self.reduce(self.poly(value))

    def is_zero(self, f) -> bool:
        return self._gb.contains(self.poly(f))

    def equal(self, f, g) -> bool:
        return self.is_zero(self.poly(f) - self.poly(g))

    def ideal(self, gens=()) -> "Ideal":
        return Ideal(self, gens)

    @property
    def zero_ideal(self) -> "Ideal":
        return Ideal(self, ())

    @property
    def unit_ideal(self) -> "Ideal":
        return Ideal(self, (self.poly.one,))

    def over(self, ideal: "Ideal") -> "AffineRing":
        """The quotient ring R/J as an affine ring."""
        self._check(ideal)
        return AffineRing(self.poly, list(self.relations) + list(ideal.gens), f"{self.name}/({', '.join(map(str, ideal.gens))})")

    def _check(self, *ideals) -> None:
        for J in ideals:
            if J.ring != self:
                raise MixedRingError(f"ideal over {J.ring.name} used with {self.name}")


class Ideal:
    """A finitely generated ideal of an affine ring with a lazily cached basis.

    Generators are stored reduced modulo I (zeros dropped).  Two handles are
    equal as ideals iff their cached bases coincide.
    """

    def __init__(self, ring: AffineRing, gens=()):
        self.ring = ring
        reduced = []
        seen = set()
        for g in gens:
            r = ring.reduce(ring.poly(g))
            if r and r not in seen:
                seen.add(r)
                reduced.append(r)
        self.gens = tuple(reduced)

    @cached_property
    def basis(self) -> GroebnerBasis:
        return GroebnerBasis(self.ring.poly, list(self.gens) + list(self.ring.relations))

    def __repr__(self) -> str:
        return f"Ideal({', '.join(map(str, self.gens)) or '0'})"

    def __str__(self) -> str:
        return "(" + ", ".join(map(str, self.gens)) + ")"

    def __eq__(self, other) -> bool:
        return isinstance(other, Ideal) and other.ring == self.ring and other.basis == self.basis

    def __hash__(self) -> int:
        return hash(self.basis)

    # membership -----------------------------------------------------------

    def contains(self, f) -> bool:
        return self.basis.contains(self.ring.poly(f))

    def __contains__(self, f) -> bool:
        return self.contains(f)

    def reduce(self, f) -> Poly:
        return self.basis.reduce(self.ring.poly(f))

    def issubset(self, other: "Ideal") -> bool:
        self.ring._check(other)
        return all(other.contains(g) for g in self.gens)

    def __le__(self, other: "Ideal") -> bool:
        return self.issubset(other)

    def is_unit(self) -> bool:
        return self.basis.is_unit()

    def is_zero(self) -> bool:
        return not self.gens

    @cached_property
    def canonical_gens(self) -> tuple:
        """The basis elements not in I: a canonical generating set modulo I."""
        return tuple(g for g in self.basis.elements if not self.ring.is_zero(g))

    # operations -----------------------------------------------------------

    def __add__(self, other: "Ideal") -> "Ideal":
        self.ring._check(other)
        return Ideal(self.ring, self.gens + other.gens)

    def __mul__(self, other: "Ideal") -> "Ideal":
        self.ring._check(other)
        return Ideal(self.ring, [f * g for f in self.gens for g in other.gens])

    def power(self, n: int) -> "Ideal":
        out = self.ring.unit_ideal
        for _ in range(n):
            out = out * self
        return out

    def intersect(self, other: "Ideal") -> "Ideal":
        self.ring._check(other)
        P = self.ring.poly
        if not self.gens or not other.gens:
            return self.ring.zero_ideal
        (t,) = _aux_names(P, 1)
        big = PolyRing(P.field, (t,) + P.variables)
        tt = big.gen(0)
        gens = [tt * big.embed(g) for g in self.gens + self.ring.relations]
        gens += [(big.one - tt) * big.embed(g) for g in other.gens + self.ring.relations]
        return Ideal(self.ring, [P.embed(g) for g in eliminate_polys(big, gens, [t])])

    def quotient_element(self, f) -> "Ideal":
        """``(self : f)``, read off the syzygies of ``f`` modulo the preimage."""
        f = self.ring.reduce(f)
        if not f:
            return self.ring.unit_ideal
        P = self.ring.poly
        rels = [to_terms(g) for g in self.gens + self.ring.relations]
        syz = syzygy_module_raw([to_terms(f)], rels, 1, P)
        return Ideal(self.ring, [from_terms(s, P, None) for s in syz])

    def quotient(self, other: "Ideal") -> "Ideal":
        """``(self : other)``."""
        self.ring._check(other)
        out = self.ring.unit_ideal
        for g in other.gens:
            out = out.intersect(self.quotient_element(g))
        return out

    def saturate(self, f) -> "Ideal":
        """``(self : f^∞)`` via the auxiliary variable ``1 - t f``."""
        P = self.ring.poly
        f = self.ring.reduce(f)
        if not f:
            return self.ring.unit_ideal
        (t,) = _aux_names(P, 1)
        big = PolyRing(P.field, (t,) + P.variables)
        gens = [big.embed(g) for g in self.gens + tuple(self.ring.relations)]
        gens.append(big.one - big.gen(0) * big.embed(f))
        return Ideal(self.ring, [P.embed(g) for g in eliminate_polys(big, gens, [t])])

    def eliminate(self, variables) -> "Ideal":
        """Preimage contracted to the subring of the remaining variables (as an ideal of R)."""
        P = self.ring.poly
        bad = [v for v in variables if v not in P.variables]
        if bad:
            raise ValueError(f"unknown variables {bad}")
        return Ideal(self.ring, eliminate_polys(P, list(self.gens) + list(self.ring.relations), variables))

    def radical_contains(self, f) -> bool:
        """Whether ``f`` lies in the radical, via ``1 ∈ (J, 1 - t f)``."""
        P = self.ring.poly
        f = P(f)
        if self.contains(f):
            return True
        (t,) = _aux_names(P, 1)
        big = PolyRing(P.field, (t,) + P.variables)
        gens = [big.embed(g) for g in self.gens + tuple(self.ring.relations)]
        gens.append(big.one - big.gen(0) * big.embed(f))
        return GroebnerBasis(big, gens).is_unit()

    def radical_issubset(self, other: "Ideal") -> bool:
        """``self ⊆ √other``."""
        return all(other.radical_contains(g) for g in self.gens)

    def same_radical(self, other: "Ideal") -> bool:
        return self.radical_issubset(other) and other.radical_issubset(self)


class MultiplicativeSet:
    """A multiplicative set: finitely generated by elements, or all non-zerodivisors.

    ``mode`` is ``"fg"`` or ``"nzd"``.  ``allow_zero`` must be set explicitly
    for a finitely generated set containing 0 (W⁻¹R is then the zero ring).
    """

    def __init__(self, ring: AffineRing, gens=(), mode: str = "fg", allow_zero: bool = False, label: str | None = None):
        if mode not in ("fg", "nzd"):
            raise ValueError(f"unknown multiplicative set mode {mode!r}")
        self.ring = ring
        self.mode = mode
        self.label = label
        self.gens = tuple(ring.reduce(ring.poly(g)) for g in gens)
        self.allow_zero = allow_zero
        if mode == "fg":
            for g in self.gens:
                if not g and not allow_zero:
                    raise ValueError("0 in W requires allow_zero")
        if mode == "nzd" and self.gens:
            raise ValueError("the non-zerodivisor set takes no generators")

    def contains_zero(self) -> bool:
        """Whether 0 lies in W (some product of generators is nilpotent-to-zero)."""
        if self.mode == "nzd":
            return False
        prod = self.ring.poly.one
        for g in self.gens:
            prod = prod * g
        return Ideal(self.ring, ()).radical_contains(prod) if self.gens else False

    def words(self, max_length: int):
        """Monoid words of length 1..max_length as (exponent tuple, element), shortest first."""
        k = len(self.gens)
        if k == 0:
            return
        for length in range(1, max_length + 1):
            for exps in _compositions(length, k):
                elem = self.ring.poly.one
                for g, a in zip(self.gens, exps):
                    if a:
                        elem = elem * g**a
                yield exps, self.ring.reduce(elem)

    def __repr__(self) -> str:
        if self.mode == "nzd":
            return "MultiplicativeSet(nzd)"
        return f"MultiplicativeSet<{', '.join(map(str, self.gens))}>"


def _compositions(total: int, parts: int):
    """Exponent tuples of ``parts`` entries summing to ``total``, in reverse-lex order."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def ideal_algebra(op: str, *args):
    """Dispatch for the ideal operations by name."""
    if op == "sum":
        a, b = args
        return a + b
    if op == "product":
        a, b = args
        return a * b
    if op == "intersect":
        a, b = args
        return a.intersect(b)
    if op == "quotient":
        a, b = args
        if isinstance(b, Ideal):
            return a.quotient(b)
        return a.quotient_element(b)
    if op == "saturate":
        a, f = args
        return a.saturate(f)
    if op == "eliminate":
        a, variables = args
        return a.eliminate(variables)
    if op == "radical_member":
        f, J = args
        return J.radical_contains(f)
    raise ValueError(f"unknown ideal operation {op!r}")
