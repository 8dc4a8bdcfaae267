"""Finitely presented modules over affine rings and the homological toolkit.

A module is ``coker(A: R^s -> R^t)``; ``A`` is stored as a tuple of columns,
each a tuple of ``t`` reduced polynomials.  Computations happen in
``k[x]^t`` against the relation module ``U(A)`` spanned by the columns of
``A`` and ``I * e_i``.  Submodules of a module are presented as subquotients:
generators in the parent's ambient free module plus the parent's relations.
"""

from __future__ import annotations

from functools import cached_property
from itertools import combinations

from .groebner import from_terms, groebner_raw, reduce_raw, syzygy_module_raw
from .orders import ModuleOrder
from .polynomials import Poly
from .rings import AffineRing, Ideal, MixedRingError

__all__ = [
    "Module",
    "ModuleMap",
    "present_subquotient",
    "prune",
    "direct_sum",
    "tensor",
    "kernel_of_map",
    "hom_to_ring",
    "double_dual_kernel",
    "ideal_as_module",
    "cyclic",
    "module_algebra",
    "tor1",
    "fitting_ideal",
    "fitting_ideals",
    "annihilator",
    "colon_submodule",
    "annihilator_and_colon",
    "torsion_submodule",
    "torsion_free",
    "torsion_free_at",
    "ass_membership",
    "multiplication_map",
]


def _vec_terms(vec) -> dict:
    out = {}
    for i, f in enumerate(vec):
        for e, c in f.terms.items():
            out[(i, e)] = c
    return out


def _ideal_multiples(ring: AffineRing, rank: int, offset: int = 0) -> list:
    out = []
    for i in range(rank):
        for g in ring.relations:
            out.append({(i + offset, e): c for e, c in g.terms.items()})
    return out


class Module:
    """A finitely presented module ``coker(A)`` with ``A``'s columns in ``R^rank``.

    ``generators`` optionally records, for a module built as a submodule or a
    pruned copy of another module, the images of its generators in that
    module's ambient free module.
    """

    def __init__(self, ring: AffineRing, rank: int, relations=(), label: str | None = None, generators=None):
        self.ring = ring
        self.rank = rank
        self.label = label
        cols = []
        seen = set()
        for col in relations:
            col = tuple(ring.reduce(ring.poly(f)) for f in col)
            if len(col) != rank:
                raise ValueError(f"relation of length {len(col)} in a rank-{rank} module")
            if any(col) and col not in seen:
                seen.add(col)
                cols.append(col)
        self.relations = tuple(cols)
        self.generators = tuple(generators) if generators is not None else None

    # constructors ----------------------------------------------------------

    @classmethod
    def free(cls, ring: AffineRing, rank: int, label: str | None = None) -> "Module":
        return cls(ring, rank, (), label)

    def relabel(self, label: str) -> "Module":
        return Module(self.ring, self.rank, self.relations, label, self.generators)

    def __repr__(self) -> str:
        name = f" {self.label}" if self.label else ""
        return f"Module{name}(rank={self.rank}, relations={len(self.relations)})"

    # raw data --------------------------------------------------------------

    @cached_property
    def relation_terms(self) -> list:
        """``U(A)``: relation columns plus ``I * e_i``, as raw vectors."""
        return [_vec_terms(c) for c in self.relations] + _ideal_multiples(self.ring, self.rank)

    @cached_property
    def _order(self) -> ModuleOrder:
        return ModuleOrder(self.ring.poly.order, "pot")

    @cached_property
    def relation_basis(self) -> list:
        return groebner_raw(self.relation_terms, self.ring.field, self._order, self.ring.nvars)

    def reduce_terms(self, vec: dict) -> dict:
        return reduce_raw(vec, self.relation_basis, self.ring.field, self._order)

    def reduce_vector(self, vec) -> tuple:
        vec = self.vector(vec)
        return from_terms(self.reduce_terms(_vec_terms(vec)), self.ring.poly, self.rank)

    def vector(self, entries) -> tuple:
        vec = tuple(self.ring.poly(f) for f in entries)
        if len(vec) != self.rank:
            raise ValueError(f"vector of length {len(vec)} in a rank-{self.rank} module")
        return vec

    def unit(self, i: int) -> tuple:
        P = self.ring.poly
        return tuple(P.one if j == i else P.zero for j in range(self.rank))

    def vector_is_zero(self, vec) -> bool:
        return not self.reduce_terms(_vec_terms(self.vector(vec)))

    def is_zero(self) -> bool:
        return all(self.vector_is_zero(self.unit(i)) for i in range(self.rank))

    def is_free_presentation(self) -> bool:
        return not self.relations

    def matrix_rows(self) -> list:
        """Relation matrix as rows (``rank`` lists of ``len(relations)`` entries)."""
        return [[col[i] for col in self.relations] for i in range(self.rank)]


class ModuleMap:
    """A homomorphism given by the images (target vectors) of the source generators."""

    def __init__(self, source: Module, target: Module, images, check: bool = True):
        if source.ring != target.ring:
            raise MixedRingError("map between modules over different rings")
        self.source = source
        self.target = target
        self.images = tuple(target.vector(v) for v in images)
        if len(self.images) != source.rank:
            raise ValueError(f"need {source.rank} images, got {len(self.images)}")
        if check and not self.is_compatible():
            raise ValueError("matrix does not carry source relations into target relations")

    def apply(self, vec) -> tuple:
        P = self.source.ring.poly
        vec = self.source.vector(vec)
        out = [P.zero] * self.target.rank
        for a, img in zip(vec, self.images):
            if a:
                for k, b in enumerate(img):
                    if b:
                        out[k] = out[k] + a * b
        return tuple(self.source.ring.reduce(f) for f in out)

    def is_compatible(self) -> bool:
        return all(self.target.vector_is_zero(self.apply(col)) for col in self.source.relations)

    def is_zero(self) -> bool:
        return all(self.target.vector_is_zero(v) for v in self.images)


# ---------------------------------------------------------------------------
# presentations of subquotients


def prune(M: Module) -> Module:
    """Eliminate generators whose relation has a nonzero constant pivot.

    The resulting module keeps a subset of the generators, so its
    ``generators`` are that subset (of ``M.generators`` or of unit vectors).
    """
    R = M.ring
    F = R.field
    cols = [list(c) for c in M.relations]
    alive = list(range(M.rank))
    changed = True
    while changed:
        changed = False
        for ci, col in enumerate(cols):
            pivot = next((k for k, f in enumerate(col) if f and f.is_constant()), None)
            if pivot is None:
                continue
            inv = F.inv(col[pivot].constant_coefficient())
            rest = []
            for cj, other in enumerate(cols):
                if cj == ci:
                    continue
                d = other[pivot]
                if d:
                    fac = d.scale(inv)
                    other = [R.reduce(o - fac * c) for o, c in zip(other, col)]
                del other[pivot]
                if any(other):
                    rest.append(other)
            del alive[pivot]
            cols = rest
            changed = True
            break
    base = M.generators if M.generators is not None else [M.unit(i) for i in range(M.rank)]
    return Module(R, len(alive), [tuple(c) for c in cols], M.label, [base[i] for i in alive])


def present_subquotient(ring: AffineRing, gens, rank: int, relations_terms, label: str | None = None, minimize: bool = True) -> Module:
    """Present the submodule generated by ``gens`` inside ``R^rank / relations``.

    ``gens`` are vectors (tuples of Poly) of length ``rank``;
    ``relations_terms`` are raw vectors and must include ``I * e_i``.
    """
    gens = [tuple(ring.poly(f) for f in g) for g in gens]
    if not gens:
        return Module(ring, 0, (), label, ())
    raw = [_vec_terms(g) for g in gens]
    syz = syzygy_module_raw(raw, relations_terms, rank, ring.poly)
    cols = [from_terms(s, ring.poly, len(gens)) for s in syz]
    M = Module(ring, len(gens), cols, label, gens)
    return prune(M) if minimize else M


def _nonzero_in(M: Module, vectors) -> list:
    out = []
    for v in vectors:
        r = M.reduce_vector(v)
        if any(r):
            out.append(r)
    return out


def submodule(M: Module, vectors, label: str | None = None) -> Module:
    """The submodule of ``M`` generated by ``vectors`` (ambient vectors of ``M``)."""
    vecs = _nonzero_in(M, vectors)
    return present_subquotient(M.ring, vecs, M.rank, M.relation_terms, label)


def quotient_module(M: Module, vectors, label: str | None = None) -> Module:
    return Module(M.ring, M.rank, list(M.relations) + [M.vector(v) for v in vectors], label)


def cyclic(ring: AffineRing, ideal: Ideal, label: str | None = None) -> Module:
    """``R/J`` as a module."""
    ring._check(ideal)
    return Module(ring, 1, [(g,) for g in ideal.gens], label)


def ideal_as_module(ideal: Ideal, label: str | None = None) -> Module:
    """The ideal ``J`` presented as a module (coker of its syzygy matrix)."""
    R = ideal.ring
    return present_subquotient(R, [(g,) for g in ideal.gens], 1, _ideal_multiples(R, 1), label)


def direct_sum(*modules: Module, label: str | None = None) -> Module:
    if not modules:
        raise ValueError("direct_sum needs at least one module")
    R = modules[0].ring
    P = R.poly
    total = sum(M.rank for M in modules)
    cols = []
    offset = 0
    for M in modules:
        if M.ring != R:
            raise MixedRingError("direct sum of modules over different rings")
        for col in M.relations:
            full = [P.zero] * total
            full[offset:offset + M.rank] = col
            cols.append(tuple(full))
        offset += M.rank
    return Module(R, total, cols, label)


def tensor(M: Module, N: Module, label: str | None = None) -> Module:
    """``M ⊗ N`` with generator ``e_i ⊗ f_j`` at index ``i * N.rank + j``."""
    if M.ring != N.ring:
        raise MixedRingError("tensor of modules over different rings")
    P = M.ring.poly
    t, u = M.rank, N.rank
    cols = []
    for a in M.relations:
        for j in range(u):
            col = [P.zero] * (t * u)
            for i in range(t):
                col[i * u + j] = a[i]
            cols.append(tuple(col))
    for b in N.relations:
        for i in range(t):
            col = [P.zero] * (t * u)
            for j in range(u):
                col[i * u + j] = b[j]
            cols.append(tuple(col))
    return Module(M.ring, t * u, cols, label)


def multiplication_map(M: Module, w) -> ModuleMap:
    w = M.ring.reduce(M.ring.poly(w))
    P = M.ring.poly
    images = [tuple(w if j == i else P.zero for j in range(M.rank)) for i in range(M.rank)]
    return ModuleMap(M, M, images, check=False)


def kernel_of_map(f: ModuleMap, label: str | None = None) -> Module:
    """``ker f`` as a subquotient of ``f.source`` (generators in its ambient)."""
    S, T = f.source, f.target
    R = S.ring
    if S.rank == 0:
        return Module(R, 0, (), label, ())
    raw = [_vec_terms(v) for v in f.images]
    syz = syzygy_module_raw(raw, T.relation_terms, T.rank, R.poly)
    vecs = _nonzero_in(S, [from_terms(s, R.poly, S.rank) for s in syz])
    return present_subquotient(R, vecs, S.rank, S.relation_terms, label)


def hom_to_ring(M: Module, label: str | None = None) -> Module:
    """``Hom(M, R)`` as a submodule of ``R^rank`` (rows killing every relation)."""
    R = M.ring
    P = R.poly
    s = len(M.relations)
    if M.rank == 0:
        return Module(R, 0, (), label, ())
    if s == 0:
        return present_subquotient(R, [M.unit(i) for i in range(M.rank)], M.rank, _ideal_multiples(R, M.rank), label)
    rows = [tuple(col[i] for col in M.relations) for i in range(M.rank)]
    syz = syzygy_module_raw([_vec_terms(r) for r in rows], _ideal_multiples(R, s), s, P)
    free = Module.free(R, M.rank)
    vecs = _nonzero_in(free, [from_terms(v, P, M.rank) for v in syz])
    return present_subquotient(R, vecs, M.rank, _ideal_multiples(R, M.rank), label)


def dual_rows(M: Module) -> list:
    """Generators of ``Hom(M, R)`` as row vectors of length ``rank``."""
    H = hom_to_ring(M)
    return list(H.generators)


def double_dual_kernel(M: Module, label: str | None = None) -> Module:
    """Kernel of the canonical map ``M -> Hom(Hom(M, R), R)``."""
    rows = dual_rows(M)
    R = M.ring
    target = Module.free(R, len(rows))
    images = [tuple(row[i] for row in rows) for i in range(M.rank)]
    return kernel_of_map(ModuleMap(M, target, images, check=False), label)


def tor1(N: Module, M: Module, label: str | None = None) -> Module:
    """``Tor_1(N, M)`` from a two-step free resolution of ``N`` tensored with ``M``."""
    if N.ring != M.ring:
        raise MixedRingError("Tor of modules over different rings")
    R = M.ring
    P = R.poly
    n, b, t = N.rank, len(N.relations), M.rank
    if b == 0 or t == 0:
        return Module(R, 0, (), label, ())
    B = N.relations
    # second syzygies of N: kernel of B: R^b -> R^n over R
    rows = [_vec_terms(col) for col in B]
    C = [from_terms(v, P, b) for v in syzygy_module_raw(rows, _ideal_multiples(R, n), n, P)]
    Mb = direct_sum(*([M] * b))
    Mn = direct_sum(*([M] * n))
    # B ⊗ 1 : M^b -> M^n, unit (j, k) -> sum_i B[j][i] e_(i, k)
    images = []
    for j in range(b):
        for k in range(t):
            img = [P.zero] * (n * t)
            for i in range(n):
                img[i * t + k] = B[j][i]
            images.append(tuple(img))
    K = kernel_of_map(ModuleMap(Mb, Mn, images, check=False))
    # image of C ⊗ 1 in M^b
    extra = []
    for c in C:
        for k in range(t):
            vec = [P.zero] * (b * t)
            for j in range(b):
                vec[j * t + k] = c[j]
            if any(vec):
                extra.append(_vec_terms(vec))
    rels = Mb.relation_terms + extra
    return present_subquotient(R, list(K.generators), b * t, rels, label)


# ---------------------------------------------------------------------------
# invariants


def _minors(rows, k: int, ring: AffineRing) -> list:
    """All nonzero ``k x k`` minors of the matrix given by ``rows`` (Laplace, memoized)."""
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    memo: dict = {}
    P = ring.poly

    def det(rsel: tuple, csel: tuple) -> Poly:
        if not rsel:
            return P.one
        key = (rsel, csel)
        hit = memo.get(key)
        if hit is not None:
            return hit
        r0 = rsel[0]
        total = P.zero
        for pos, c in enumerate(csel):
            a = rows[r0][c]
            if not a:
                continue
            sub = det(rsel[1:], csel[:pos] + csel[pos + 1:])
            if sub:
                term = a * sub
                total = total - term if pos % 2 else total + term
        total = ring.reduce(total)
        memo[key] = total
        return total

    out = []
    for rsel in combinations(range(nrows), k):
        for csel in combinations(range(ncols), k):
            d = det(rsel, csel)
            if d:
                out.append(d)
    return out


def fitting_ideal(M: Module, j: int) -> Ideal:
    """``Fitt_j(M)``: the ideal of ``(t - j)``-minors of a (pruned) presentation."""
    R = M.ring
    if j < 0:
        return R.zero_ideal
    M = prune(M)
    k = M.rank - j
    if k <= 0:
        return R.unit_ideal
    if k > len(M.relations):
        return R.zero_ideal
    return Ideal(R, _minors(M.matrix_rows(), k, R))


def fitting_ideals(M: Module) -> list:
    """``[Fitt_0, ..., Fitt_t]`` of the given presentation (``t`` its rank)."""
    pruned = prune(M)
    out = []
    for j in range(M.rank + 1):
        out.append(fitting_ideal(pruned, j) if j < pruned.rank else M.ring.unit_ideal)
    return out


def annihilator(M: Module) -> Ideal:
    """``ann(M)``: the kernel of ``R -> M^t``, ``1 -> (e_1, ..., e_t)``."""
    R = M.ring
    P = R.poly
    t = M.rank
    if t == 0:
        return R.unit_ideal
    vec = {}
    zero = (0,) * P.nvars
    for i in range(t):
        vec[(i * t + i, zero)] = R.field.one
    rels = []
    for i in range(t):
        for v in M.relation_terms:
            rels.append({(c + i * t, e): val for (c, e), val in v.items()})
    syz = syzygy_module_raw([vec], rels, t * t, P)
    return Ideal(R, [from_terms(s, P, 1)[0] for s in syz])


def colon_submodule(M: Module, J: Ideal, label: str | None = None) -> Module:
    """``(0 :_M J)`` as a subquotient of ``M``."""
    R = M.ring
    P = R.poly
    gens = J.gens
    if not gens:
        return submodule(M, [M.unit(i) for i in range(M.rank)], label)
    target = direct_sum(*([M] * len(gens)))
    images = []
    t = M.rank
    for i in range(t):
        img = [P.zero] * (t * len(gens))
        for k, g in enumerate(gens):
            img[k * t + i] = g
        images.append(tuple(img))
    return kernel_of_map(ModuleMap(M, target, images, check=False), label)


def annihilator_and_colon(mode: str, M: Module, J: Ideal | None = None):
    if mode == "ann":
        return annihilator(M)
    if mode == "colon":
        if J is None:
            raise ValueError("colon mode needs an ideal")
        return colon_submodule(M, J)
    raise ValueError(f"unknown mode {mode!r}")


def torsion_submodule(M: Module, minimal_primes, label: str | None = None) -> Module:
    """``T(M)`` over a reduced ring with the given minimal primes.

    ``T(M)`` is the kernel of ``M -> ⊕_P (R/P)^{r_P}`` where the rows come from
    ``Hom_{R/P}(M/PM, R/P)``.
    """
    R = M.ring
    P = R.poly
    if M.rank == 0:
        return Module(R, 0, (), label, ())
    blocks = []
    images = [[] for _ in range(M.rank)]
    for prime in minimal_primes:
        RP = R.over(prime)
        MP = Module(RP, M.rank, M.relations)
        rows = dual_rows(MP)
        blocks.append(Module(R, len(rows), [tuple(g if j == i else P.zero for j in range(len(rows))) for i in range(len(rows)) for g in prime.gens]))
        for i in range(M.rank):
            images[i].extend(row[i] for row in rows)
    target = direct_sum(*blocks) if blocks else Module.free(R, 0)
    return kernel_of_map(ModuleMap(M, target, [tuple(v) for v in images], check=False), label)


def torsion_free(M: Module, minimal_primes) -> tuple:
    """``(T(M) == 0, T(M))`` over a reduced ring."""
    T = torsion_submodule(M, minimal_primes)
    return T.is_zero(), T


def torsion_free_at(M: Module, minimal_primes, m: Ideal) -> tuple:
    """Whether ``M_m`` is torsion-free: ``T(M) = 0`` or ``ann(T(M)) ⊄ m``."""
    T = torsion_submodule(M, minimal_primes)
    if T.is_zero():
        return True, T
    return not annihilator(T).issubset(m), T


def ass_membership(prime: Ideal, M: Module) -> bool:
    """``P ∈ Ass M`` iff ``K = (0 :_M P)`` is nonzero with ``ann(K) ⊆ P``."""
    K = colon_submodule(M, prime)
    if K.is_zero():
        return False
    return annihilator(K).issubset(prime)


def module_algebra(op: str, *args, **kwargs):
    """Dispatch for module constructions by name."""
    table = {
        "coker": lambda ring, rank, relations: Module(ring, rank, relations),
        "direct_sum": direct_sum,
        "tensor": tensor,
        "kernel_of_map": kernel_of_map,
        "hom_to_ring": hom_to_ring,
        "double_dual_kernel": double_dual_kernel,
        "ideal_as_module": ideal_as_module,
    }
    if op not in table:
        raise ValueError(f"unknown module operation {op!r}")
    return table[op](*args, **kwargs)
