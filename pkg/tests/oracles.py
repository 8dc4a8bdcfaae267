"""Reference computations that share no code with the engine.

Polynomials here are plain dicts ``{exponent tuple: residue}`` over GF(p).
"""

from __future__ import annotations

from itertools import product


def monomials_of_degree(n: int, d: int) -> list:
    return [e for e in product(range(d + 1), repeat=n) if sum(e) == d]


def monomials_up_to(n: int, d: int) -> list:
    return [e for e in product(range(d + 1), repeat=n) if sum(e) <= d]


def shift(f: dict, m: tuple, p: int) -> dict:
    return {tuple(a + b for a, b in zip(e, m)): c % p for e, c in f.items() if c % p}


def degree(f: dict) -> int:
    return max((sum(e) for e in f), default=-1)


class RowSpace:
    """Incremental row echelon form over GF(p), vectors keyed by monomial."""

    def __init__(self, p: int):
        self.p = p
        self.pivots: dict = {}  # pivot monomial -> (normalized row)

    def _reduce(self, v: dict) -> dict:
        p = self.p
        v = {k: c % p for k, c in v.items() if c % p}
        changed = True
        while changed and v:
            changed = False
            for k in sorted(v, reverse=True):
                row = self.pivots.get(k)
                if row is None:
                    continue
                c = v[k]
                for kk, cc in row.items():
                    nv = (v.get(kk, 0) - c * cc) % p
                    if nv:
                        v[kk] = nv
                    else:
                        v.pop(kk, None)
                changed = True
                break
        return v

    def add(self, v: dict) -> bool:
        v = self._reduce(v)
        if not v:
            return False
        k = max(v)
        inv = pow(v[k], self.p - 2, self.p)
        self.pivots[k] = {kk: cc * inv % self.p for kk, cc in v.items()}
        return True

    def contains(self, v: dict) -> bool:
        return not self._reduce(v)


def truncated_span(gens: list, n: int, D: int, p: int) -> RowSpace:
    """Span of ``m * g`` with ``deg(m * g) <= D`` over GF(p)."""
    space = RowSpace(p)
    for g in gens:
        dg = degree(g)
        if dg < 0 or dg > D:
            continue
        for m in monomials_up_to(n, D - dg):
            space.add(shift(g, m, p))
    return space


def bounded_member(f: dict, gens: list, n: int, D: int, p: int) -> bool:
    """``f`` is a combination of the generators with cofactors of degree <= D - deg g.

    For homogeneous generators and homogeneous f with deg f <= D this is
    exactly ideal membership; in general it is only a sufficient condition.
    """
    return truncated_span(gens, n, D, p).contains(f)


def hilbert_value(gens: list, n: int, d: int, p: int) -> int:
    """``dim_k (k[x]/I)_d`` for a homogeneous ideal, by linear algebra."""
    space = RowSpace(p)
    for g in gens:
        dg = degree(g)
        if dg < 0 or dg > d:
            continue
        for m in monomials_of_degree(n, d - dg):
            space.add(shift(g, m, p))
    return len(monomials_of_degree(n, d)) - len(space.pivots)
