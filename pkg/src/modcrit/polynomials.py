"""Sparse multivariate polynomials over exact fields, with the canonical text syntax.

Canonical form: terms ``c*x^a*y^b`` sorted descending in the ring's monomial
order, joined by ``" + "`` / ``" - "``.  Coefficients equal to one are
omitted, exponents equal to one are omitted, the zero polynomial is ``0``.
Over ``GF(p)`` coefficients print as residues in ``[0, p)``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .fields import Field
from .orders import MonomialOrder, grevlex

__all__ = ["PolyRing", "Poly", "PolynomialSyntaxError"]


class PolynomialSyntaxError(ValueError):
    """Raised for malformed polynomial text; ``position`` is a 0-based offset."""

    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at offset {position} in {text!r}")
        self.text = text
        self.position = position


class PolyRing:
    """The polynomial ring ``field[variables]`` with a fixed monomial order."""

    def __init__(self, field: Field, variables, order: MonomialOrder | None = None):
        self.field = field
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variable names in {self.variables}")
        self.nvars = len(self.variables)
        self.order = order or grevlex(self.nvars)
        if self.order.nvars != self.nvars:
            raise ValueError("order and variable count disagree")
        self._index = {v: i for i, v in enumerate(self.variables)}
        self.signature = f"{field.name}[{','.join(self.variables)}]/{self.order.signature}"

    def __repr__(self) -> str:
        return f"PolyRing({self.signature})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyRing) and other.signature == self.signature

    def __hash__(self) -> int:
        return hash(self.signature)

    # construction -------------------------------------------------------

    @property
    def zero(self) -> "Poly":
        return Poly(self, {})

    @property
    def one(self) -> "Poly":
        return self.const(1)

    def const(self, c) -> "Poly":
        c = self.field(c)
        return Poly(self, {(0,) * self.nvars: c} if c else {})

    def gen(self, i: int) -> "Poly":
        e = [0] * self.nvars
        e[i] = 1
        return Poly(self, {tuple(e): self.field.one})

    def gens(self) -> list:
        return [self.gen(i) for i in range(self.nvars)]

    def var(self, name: str) -> "Poly":
        return self.gen(self._index[name])

    def index(self, name: str) -> int:
        return self._index[name]

    def monomial(self, e, c=1) -> "Poly":
        c = self.field(c)
        return Poly(self, {tuple(e): c} if c else {})

    def __call__(self, value) -> "Poly":
        if isinstance(value, Poly):
            if value.ring == self:
                return value
            return self.embed(value)
        if isinstance(value, str):
            return self.parse(value)
        return self.const(value)

    def embed(self, f: "Poly", mapping: dict | None = None) -> "Poly":
        """Move ``f`` into this ring, matching variables by name (or ``mapping``)."""
        mapping = mapping or {}
        idx = []
        for v in f.ring.variables:
            target = mapping.get(v, v)
            if target not in self._index:
                if any(e[f.ring._index[v]] for e in f.terms):
                    raise ValueError(f"variable {v} has no counterpart in {self}")
                idx.append(None)
            else:
                idx.append(self._index[target])
        terms = {}
        for e, c in f.terms.items():
            ne = [0] * self.nvars
            for i, a in enumerate(e):
                if a:
                    ne[idx[i]] += a
            terms[tuple(ne)] = self.field(c) if self.field != f.ring.field else c
        return Poly(self, {k: v for k, v in terms.items() if v})

    def with_order(self, order: MonomialOrder) -> "PolyRing":
        return PolyRing(self.field, self.variables, order)

    # parsing ------------------------------------------------------------

    _TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")

    def parse(self, text: str) -> "Poly":
        tokens = []
        pos = 0
        s = text.rstrip()
        while pos < len(s):
            m = self._TOKEN.match(s, pos)
            if not m or m.end() == pos:
                raise PolynomialSyntaxError("unexpected character", text, pos)
            start = m.start(m.lastindex)
            if m.group(1):
                tokens.append(("num", int(m.group(1)), start))
            elif m.group(2):
                tokens.append(("var", m.group(2), start))
            else:
                op = m.group(3)
                tokens.append(("op", "^" if op == "**" else op, start))
            pos = m.end()
        if not tokens:
            raise PolynomialSyntaxError("empty polynomial", text, 0)
        parser = _Parser(self, tokens, text)
        result = parser.expr()
        if parser.i != len(tokens):
            raise PolynomialSyntaxError("trailing input", text, tokens[parser.i][2])
        return result


class _Parser:
    def __init__(self, ring: PolyRing, tokens, text):
        self.ring, self.tokens, self.text, self.i = ring, tokens, text, 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def error(self, message):
        tok = self.peek()
        raise PolynomialSyntaxError(message, self.text, tok[2] if tok else len(self.text))

    def accept(self, op):
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == op:
            self.i += 1
            return True
        return False

    def expr(self) -> "Poly":
        if self.accept("-"):
            acc = -self.term()
        else:
            self.accept("+")
            acc = self.term()
        while True:
            if self.accept("+"):
                acc = acc + self.term()
            elif self.accept("-"):
                acc = acc - self.term()
            else:
                return acc

    def term(self) -> "Poly":
        acc = self.power()
        while True:
            if self.accept("*"):
                acc = acc * self.power()
            elif self.accept("/"):
                d = self.power()
                if not d.is_constant() or d.is_zero():
                    self.error("division only by nonzero constants")
                acc = acc * self.ring.const(self.ring.field.inv(d.constant_coefficient()))
            else:
                return acc

    def power(self) -> "Poly":
        base = self.atom()
        if self.accept("^"):
            tok = self.peek()
            if not tok or tok[0] != "num":
                self.error("expected exponent")
            self.i += 1
            return base ** tok[1]
        return base

    def atom(self) -> "Poly":
        tok = self.peek()
        if tok is None:
            self.error("unexpected end")
        if tok[0] == "num":
            self.i += 1
            return self.ring.const(tok[1])
        if tok[0] == "var":
            if tok[1] not in self.ring._index:
                self.error(f"unknown variable {tok[1]!r}")
            self.i += 1
            return self.ring.var(tok[1])
        if self.accept("("):
            inner = self.expr()
            if not self.accept(")"):
                self.error("expected ')'")
            return inner
        if self.accept("-"):
            return -self.power()
        self.error(f"unexpected {tok[1]!r}")


class Poly:
    """An immutable polynomial: a map from exponent tuples to nonzero coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # basic queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_coefficient(self):
        return self.terms.get((0,) * self.ring.nvars, self.ring.field.zero)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def sorted_terms(self) -> list:
        key = self.ring.order.key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def lead(self):
        """(exponents, coefficient) of the leading term."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        key = self.ring.order.key
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def monic(self) -> "Poly":
        if not self.terms:
            return self
        _, c = self.lead()
        return self.scale(self.ring.field.inv(c))

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    # arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.ring.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = F.add(out.get(e, F.zero), c)
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        F = self.ring.field
        return Poly(self.ring, {e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c) -> "Poly":
        F = self.ring.field
        if not c:
            return self.ring.zero
        return Poly(self.ring, {e: F.mul(v, c) for e, v in self.terms.items()})

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.ring.field
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = F.add(out.get(e, F.zero), F.mul(c1, c2))
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return Poly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring.signature, frozenset(self.terms.items())))
        return self._hash

    # calculus and substitution -----------------------------------------

    def diff(self, i: int) -> "Poly":
        F = self.ring.field
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                v = F.mul(c, F(e[i]))
                if v:
                    ne = list(e)
                    ne[i] -= 1
                    out[tuple(ne)] = v
        return Poly(self.ring, out)

    def compose(self, images) -> "Poly":
        """Substitute ``images[i]`` for the i-th variable (images share a target ring)."""
        images = list(images)
        if len(images) != self.ring.nvars:
            raise ValueError("need one image per variable")
        target = images[0].ring if images else self.ring
        result = target.zero
        powers: dict = {}
        for e, c in self.sorted_terms():
            term = target.const(c)
            for i, a in enumerate(e):
                if a:
                    if (i, a) not in powers:
                        powers[(i, a)] = images[i] ** a
                    term = term * powers[(i, a)]
            result = result + term
        return result

    # text ---------------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        F = self.ring.field
        names = self.ring.variables
        parts = []
        for e, c in self.sorted_terms():
            negative = F.characteristic == 0 and c < 0
            mag = -c if negative else c
            mono = "*".join(
                names[i] if a == 1 else f"{names[i]}^{a}" for i, a in enumerate(e) if a
            )
            if not mono:
                body = F.format(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{F.format(mag)}*{mono}"
            if not parts:
                parts.append(("-" if negative else "") + body)
            else:
                parts.append((" - " if negative else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Poly({self})"
