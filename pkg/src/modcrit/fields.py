"""Exact coefficient fields: the rationals and prime fields GF(p)."""

from __future__ import annotations

import re
from fractions import Fraction

__all__ = ["Field", "QQ", "GF", "parse_field"]

_MAX_PRIME = 2**31


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Field:
    """A coefficient field of characteristic 0 (``QQ``) or a prime ``p``.

    Elements are plain Python values: :class:`~fractions.Fraction` for the
    rationals and ``int`` residues in ``[0, p)`` for prime fields.  The field
    object supplies the arithmetic so the polynomial layer never branches on
    the characteristic.
    """

    __slots__ = ("characteristic", "name")

    def __init__(self, characteristic: int = 0):
        if characteristic != 0:
            if not _is_prime(characteristic) or characteristic >= _MAX_PRIME:
                raise ValueError(f"characteristic must be 0 or a prime below 2^31, got {characteristic}")
        self.characteristic = characteristic
        self.name = "QQ" if characteristic == 0 else f"GF({characteristic})"

    def __repr__(self) -> str:
        return self.name

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and other.characteristic == self.characteristic

    def __hash__(self) -> int:
        return hash(("Field", self.characteristic))

    @property
    def zero(self):
        return Fraction(0) if self.characteristic == 0 else 0

    @property
    def one(self):
        return Fraction(1) if self.characteristic == 0 else 1

    def __call__(self, value):
        """Coerce an int, Fraction or numeric string into the field."""
        p = self.characteristic
        if isinstance(value, str):
            value = Fraction(value)
        if p == 0:
            return Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise ZeroDivisionError(f"denominator {value.denominator} vanishes in {self.name}")
            return value.numerator * pow(value.denominator, -1, p) % p
        return int(value) % p

    def add(self, a, b):
        if self.characteristic:
            return (a + b) % self.characteristic
        return a + b

    def sub(self, a, b):
        if self.characteristic:
            return (a - b) % self.characteristic
        return a - b

    def mul(self, a, b):
        if self.characteristic:
            return a * b % self.characteristic
        return a * b

    def neg(self, a):
        if self.characteristic:
            return -a % self.characteristic
        return -a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        if self.characteristic:
            return pow(a, -1, self.characteristic)
        return 1 / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a, n: int):
        if self.characteristic:
            return pow(a, n, self.characteristic)
        return a**n

    def is_perfect(self) -> bool:
        # QQ and every GF(p) are perfect; kept as a method for the Jacobian oracle precondition.
        return True

    def format(self, c) -> str:
        if self.characteristic:
            return str(c)
        if c.denominator == 1:
            return str(c.numerator)
        return f"{c.numerator}/{c.denominator}"


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)


_FIELD_RE = re.compile(r"^\s*(?:QQ|GF\(\s*(\d+)\s*\))\s*$")


def parse_field(text: str) -> Field:
    """Parse ``"QQ"`` or ``"GF(p)"``."""
    m = _FIELD_RE.match(text)
    if not m:
        raise ValueError(f"unknown field {text!r}; expected QQ or GF(p)")
    if m.group(1) is None:
        return QQ
    return Field(int(m.group(1)))
