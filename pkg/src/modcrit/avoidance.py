"""Constructive prime-avoidance witnesses for divisibility transfer.

Given a multiplicative set W and an element c that is a non-zerodivisor of
W⁻¹R, split the minimal primes into X1 (those meeting W) and X2 (the rest)
and search for w ∈ W ∩ (∩X1) and r ∈ (∩X2) \\ (∪X1) with wr = 0, so that
wc + r is a non-zerodivisor of R and w²c = w(wc + r).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .fixtures import CERTIFIED, TRUSTED, RingFixture, is_nonzerodivisor
from .polynomials import Poly
from .rings import Ideal, MultiplicativeSet
from .verdicts import HypothesisViolation, NotFound

__all__ = ["Claim1Witness", "Claim2Identity", "claim1_witness", "claim2_witness", "split_minimal_primes"]

DEFAULT_WORD_LENGTH = 4
DEFAULT_COEFFICIENTS = (1, -1, 2)
DEFAULT_NILPOTENCY = 64


@dataclass(frozen=True)
class Claim1Witness:
    w: Poly
    r: Poly
    n: int
    exponents: tuple  # w as a word in W's generators
    c: Poly
    wc_plus_r: Poly
    zero_ring: bool = False

    def as_dict(self) -> dict:
        return {
            "w": str(self.w),
            "r": str(self.r),
            "n": self.n,
            "word": list(self.exponents),
            "c": str(self.c),
            "wc_plus_r": str(self.wc_plus_r),
            "zero_ring": self.zero_ring,
        }


@dataclass(frozen=True)
class Claim2Identity:
    lhs: Poly  # w^2 c
    rhs: Poly  # w (wc + r)
    holds: bool

    def as_dict(self) -> dict:
        return {"lhs": str(self.lhs), "rhs": str(self.rhs), "holds": self.holds}


def split_minimal_primes(fx: RingFixture, W: MultiplicativeSet) -> tuple:
    """(X1, X2): minimal primes meeting W and the rest, as index lists."""
    x1, x2 = [], []
    for i, P in enumerate(fx.minimal_primes):
        if any(P.contains(g) for g in W.gens):
            x1.append(i)
        else:
            x2.append(i)
    return x1, x2


def _intersection(fx: RingFixture, idx) -> Ideal:
    out = fx.ring.unit_ideal
    for i in idx:
        out = out.intersect(fx.minimal_primes[i])
    return out


def _combinations(gens, pool):
    """Generators first, then pool-weighted sums of pairs, deterministically."""
    seen = set()
    for g in gens:
        if g not in seen:
            seen.add(g)
            yield g
    for (i, a), (j, b) in product(enumerate(gens), repeat=2):
        if i >= j:
            continue
        for ca, cb in product(pool, repeat=2):
            f = a.scale(a.ring.field(ca)) + b.scale(b.ring.field(cb))
            if f and f not in seen:
                seen.add(f)
                yield f


def claim1_witness(
    fx: RingFixture,
    W: MultiplicativeSet,
    c,
    max_word_length: int = DEFAULT_WORD_LENGTH,
    coefficients=DEFAULT_COEFFICIENTS,
    max_power: int = DEFAULT_NILPOTENCY,
) -> Claim1Witness:
    """Bounded deterministic search for (w, r, n); raises NotFound when exhausted."""
    R = fx.ring
    if fx.hypothesis("no_embedded_primes") not in (CERTIFIED, TRUSTED):
        raise HypothesisViolation("the witness needs a ring without embedded primes", fixture=fx.name)
    if W.mode != "fg":
        raise HypothesisViolation("the witness needs a finitely generated multiplicative set")
    c = R.elem(c)
    one = R.poly.one
    if W.contains_zero():
        return Claim1Witness(R.poly.zero, R.poly.zero, 1, (), c, R.poly.zero, zero_ring=True)
    x1, x2 = split_minimal_primes(fx, W)
    mins = fx.minimal_primes
    for i in x2:
        if mins[i].contains(c):
            raise HypothesisViolation(f"c = {c} is a zero-divisor in W^-1 R: it lies in a prime missing W", fixture=fx.name)

    # w: a nonempty word lying in every prime of X1
    w_choice = None
    if not W.gens:
        w_choice = ((), one)
    else:
        for exps, w in W.words(max_word_length):
            if all(mins[i].contains(w) for i in x1):
                w_choice = (exps, w)
                break
    if w_choice is None:
        raise NotFound(f"no word of length <= {max_word_length} lies in every prime meeting W", fixture=fx.name)
    exps, w0 = w_choice

    if not x1:
        r_candidates = [R.poly.zero]
    else:
        meet = _intersection(fx, x2)
        r_candidates = [
            r for r in _combinations(list(meet.canonical_gens), coefficients)
            if all(not mins[i].contains(r) for i in x1)
        ]
    for r0 in r_candidates:
        w, r = w0, r0
        n = 1
        while not R.is_zero(w * r):
            n += 1
            if n > max_power:
                break
            w = R.reduce(w0**n)
            r = R.reduce(r0**n)
        if n > max_power:
            continue
        f = R.reduce(w * c + r)
        if is_nonzerodivisor(f, fx):
            return Claim1Witness(w, r, n, tuple(a * n for a in exps), c, f)
    raise NotFound("bounded search found no r with wc + r a non-zerodivisor", fixture=fx.name)


def claim2_witness(fx: RingFixture, W: MultiplicativeSet, c, **bounds) -> tuple:
    """The witness together with the exactly verified identity w²c = w(wc + r)."""
    wit = claim1_witness(fx, W, c, **bounds)
    R = fx.ring
    lhs = R.reduce(wit.w * wit.w * wit.c)
    rhs = R.reduce(wit.w * wit.wc_plus_r)
    return wit, Claim2Identity(lhs, rhs, R.equal(lhs, rhs))
