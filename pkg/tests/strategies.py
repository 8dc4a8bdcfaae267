"""Hypothesis strategies for small polynomials."""

from hypothesis import strategies as st

from modcrit.fields import GF, QQ
from modcrit.polynomials import Poly, PolyRing

QQ2 = PolyRing(QQ, ["x", "y"])
F2_3 = PolyRing(GF(2), ["x", "y", "z"])
F3_2 = PolyRing(GF(3), ["x", "y"])


def polys(ring, max_deg=3, max_terms=4, coeffs=(-2, -1, 1, 2, 3)):
    n = ring.nvars
    exps = st.tuples(*[st.integers(0, max_deg)] * n).filter(lambda e: sum(e) <= max_deg)
    terms = st.dictionaries(exps, st.sampled_from(coeffs), max_size=max_terms)

    def build(d):
        F = ring.field
        clean = {}
        for e, c in d.items():
            c = F(c)
            if c != F.zero:
                clean[e] = c
        return Poly(ring, clean)

    return terms.map(build)


def nonzero_polys(ring, **kw):
    return polys(ring, **kw).filter(lambda f: not f.is_zero())
