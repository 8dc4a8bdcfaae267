"""Buchberger's algorithm, normal forms and syzygies for submodules of free modules.

Internally a (module) vector is a dict mapping ``(component, exponents)`` to a
nonzero coefficient; ideals are rank-one modules living in component 0.  The
public functions accept :class:`~modcrit.polynomials.Poly` objects or tuples
of them (vector polynomials) and convert at the boundary.

Pair selection is deterministic: the queue is ordered by the total degree of
the lcm, then by the order key of the lcm, then by insertion indices.  The
product criterion is used for ideals only; the chain criterion (in its
Gebauer-Moeller form) applies to modules as well.
"""

from __future__ import annotations

import hashlib
import heapq
import json
import logging
import os
import threading
from pathlib import Path

from .fields import Field
from .orders import ModuleOrder
from .polynomials import Poly, PolyRing

log = logging.getLogger(__name__)

__all__ = [
    "GroebnerBasis",
    "buchberger",
    "normal_form",
    "syzygies",
    "lift",
    "configure_cache",
    "clear_memory_cache",
    "to_terms",
    "from_terms",
]


# ---------------------------------------------------------------------------
# raw vector helpers


def _lead_term(vec: dict, keyf):
    return max(vec, key=lambda t: keyf(t[0], t[1]))


def _monic(vec: dict, lt, F: Field) -> dict:
    c = vec[lt]
    if c == F.one:
        return vec
    inv = F.inv(c)
    return {t: F.mul(v, inv) for t, v in vec.items()}


def _shift(vec: dict, m) -> dict:
    if not any(m):
        return vec
    return {(c, tuple(a + b for a, b in zip(e, m))): v for (c, e), v in vec.items()}


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _negkey(keyf, t):
    return tuple(-k for k in keyf(t[0], t[1]))


class _Divisors:
    """Leading terms of a monic basis, indexed by component, in insertion order."""

    def __init__(self):
        self.by_comp: dict = {}

    def add(self, lt, vec):
        self.by_comp.setdefault(lt[0], []).append((lt[1], vec))

    def find(self, t):
        for e, vec in self.by_comp.get(t[0], ()):
            if _divides(e, t[1]):
                return e, vec
        return None


def _reduce(p: dict, divisors: _Divisors, keyf, F: Field, skip=None) -> dict:
    """Fully reduce ``p``; returns the remainder (a new dict)."""
    p = dict(p)
    rem: dict = {}
    heap = [(_negkey(keyf, t), t) for t in p]
    heapq.heapify(heap)
    while heap:
        _, t = heapq.heappop(heap)
        if t not in p:
            continue
        c = p.pop(t)
        hit = divisors.find(t)
        if hit is not None and hit[1] is skip:
            hit = None
        if hit is None:
            rem[t] = c
            continue
        e, g = hit
        m = tuple(a - b for a, b in zip(t[1], e))
        lead = (t[0], e)
        for (gc, ge), gv in g.items():
            if gc == lead[0] and ge == e:
                continue
            nt = (gc, tuple(a + b for a, b in zip(ge, m)))
            old = p.get(nt)
            if old is None:
                nv = F.neg(F.mul(c, gv))
                if nv:
                    p[nt] = nv
                    heapq.heappush(heap, (_negkey(keyf, nt), nt))
            else:
                nv = F.sub(old, F.mul(c, gv))
                if nv:
                    p[nt] = nv
                else:
                    del p[nt]
    return rem


def _spoly(f, lf, g, lg, F: Field) -> dict:
    L = tuple(max(a, b) for a, b in zip(lf[1], lg[1]))
    out = dict(_shift(f, tuple(l - a for l, a in zip(L, lf[1]))))
    for t, v in _shift(g, tuple(l - a for l, a in zip(L, lg[1]))).items():
        nv = F.sub(out.get(t, F.zero), v)
        if nv:
            out[t] = nv
        else:
            out.pop(t, None)
    return out


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _coprime(a, b) -> bool:
    return not any(x and y for x, y in zip(a, b))


def _groebner_raw(gens, F: Field, order: ModuleOrder, ideal: bool) -> list:
    keyf = order.key
    polys: list = []  # (lead, vec)
    active: list = []  # indices
    pairs: set = set()
    heap: list = []

    def pair_key(i, j, L):
        return (sum(L), keyf(polys[i][0][0], L), i, j)

    def update(h):
        lh = polys[h][0]
        cands = []
        for g in active:
            lg = polys[g][0]
            if lg[0] != lh[0]:
                continue
            cands.append((g, _lcm(lh[1], lg[1]), ideal and _coprime(lh[1], lg[1])))
        kept = []
        for idx, (g, L, cop) in enumerate(cands):
            if cop:
                kept.append((g, L, cop))
                continue
            dominated = False
            for j, (g2, L2, _) in enumerate(cands):
                if j > idx and _divides(L2, L):
                    dominated = True
                    break
            if not dominated:
                for g2, L2, _ in kept:
                    if _divides(L2, L):
                        dominated = True
                        break
            if not dominated:
                kept.append((g, L, cop))
        # chain criterion on existing pairs
        for pr in list(pairs):
            i, j = pr
            li, lj = polys[i][0], polys[j][0]
            if li[0] != lh[0]:
                continue
            Lij = _lcm(li[1], lj[1])
            if _divides(lh[1], Lij) and _lcm(li[1], lh[1]) != Lij and _lcm(lj[1], lh[1]) != Lij:
                pairs.discard(pr)
        for g, L, cop in kept:
            if cop:
                continue
            pr = (min(g, h), max(g, h))
            pairs.add(pr)
            heapq.heappush(heap, (pair_key(pr[0], pr[1], L), pr))
        active[:] = [g for g in active if not (polys[g][0][0] == lh[0] and _divides(lh[1], polys[g][0][1]))]
        active.append(h)

    def divisors():
        d = _Divisors()
        for g in active:
            d.add(polys[g][0], polys[g][1])
        return d

    start = []
    for v in gens:
        if v:
            lt = _lead_term(v, keyf)
            start.append((keyf(*lt), v))
    start.sort(key=lambda kv: kv[0])
    for _, v in start:
        r = _reduce(v, divisors(), keyf, F)
        if r:
            lt = _lead_term(r, keyf)
            polys.append((lt, _monic(r, lt, F)))
            update(len(polys) - 1)
    while heap:
        _, pr = heapq.heappop(heap)
        if pr not in pairs:
            continue
        pairs.discard(pr)
        i, j = pr
        s = _spoly(polys[i][1], polys[i][0], polys[j][1], polys[j][0], F)
        if not s:
            continue
        r = _reduce(s, divisors(), keyf, F)
        if r:
            lt = _lead_term(r, keyf)
            polys.append((lt, _monic(r, lt, F)))
            update(len(polys) - 1)
    # interreduce the minimal basis
    basis = [polys[g] for g in active]
    d = _Divisors()
    for lt, v in basis:
        d.add(lt, v)
    out = []
    for lt, v in basis:
        tail = {t: c for t, c in v.items() if t != lt}
        r = _reduce(tail, d, keyf, F, skip=v)
        r[lt] = F.one
        out.append((lt, r))
    out.sort(key=lambda lv: keyf(*lv[0]), reverse=True)
    return [v for _, v in out]


# ---------------------------------------------------------------------------
# canonical serialization and caching


def _canon_vec(vec: dict, F: Field, keyf) -> tuple:
    return tuple(
        (c, e, F.format(v)) for (c, e), v in sorted(vec.items(), key=lambda kv: keyf(*kv[0]), reverse=True)
    )


def _parse_vec(items, F: Field) -> dict:
    return {(c, tuple(e)): F(v) for c, e, v in items}


_memo: dict = {}
_memo_lock = threading.Lock()
_cache_dir: Path | None = None
_cache_configured = False


def configure_cache(directory) -> None:
    """Enable (or with ``None`` disable) the on-disk basis cache."""
    global _cache_dir, _cache_configured
    _cache_dir = Path(directory) if directory else None
    _cache_configured = True
    if _cache_dir is not None:
        _cache_dir.mkdir(parents=True, exist_ok=True)


def _disk_dir() -> Path | None:
    if not _cache_configured:
        env = os.environ.get("MODCRIT_CACHE")
        configure_cache(env or None)
    return _cache_dir


def clear_memory_cache() -> None:
    with _memo_lock:
        _memo.clear()


def _is_reduced(basis, keyf) -> bool:
    leads = []
    for v in basis:
        if not v:
            return False
        lt = _lead_term(v, keyf)
        if v[lt] != 1:
            return False
        leads.append(lt)
    for i, v in enumerate(basis):
        for t in v:
            for j, lt in enumerate(leads):
                if j != i and lt[0] == t[0] and _divides(lt[1], t[1]):
                    return False
    return True


def groebner_raw(gens, F: Field, order: ModuleOrder, nvars: int) -> list:
    """Reduced Groebner basis of raw vectors, memoized by content address."""
    keyf = order.key
    ideal = all(t[0] == 0 for v in gens for t in v)
    normalized = set()
    for v in gens:
        if v:
            lt = _lead_term(v, keyf)
            normalized.add(_canon_vec(_monic(v, lt, F), F, keyf))
    canon = sorted(normalized)
    payload = json.dumps([F.name, nvars, order.signature, canon], separators=(",", ":"))
    digest = hashlib.sha256(payload.encode()).hexdigest()
    with _memo_lock:
        hit = _memo.get(digest)
    if hit is not None:
        return hit
    basis = None
    directory = _disk_dir()
    path = directory / f"{digest}.json" if directory is not None else None
    if path is not None and path.exists():
        try:
            data = json.loads(path.read_text())
            candidate = [_parse_vec(items, F) for items in data["basis"]]
            intact = data.get("key") == payload and data.get("check") == _checksum(data["basis"])
            if intact and _is_reduced(candidate, keyf) and _verify_members(gens, candidate, F, keyf):
                basis = candidate
            else:
                log.warning("discarding corrupt cache entry %s", path.name)
        except (ValueError, KeyError, TypeError):
            log.warning("discarding unreadable cache entry %s", path.name)
    if basis is None:
        basis = _groebner_raw(list(gens), F, order, ideal)
        if path is not None:
            tmp = path.with_suffix(f".{os.getpid()}.{threading.get_ident()}.tmp")
            stored = json.loads(json.dumps([list(_canon_vec(v, F, keyf)) for v in basis]))
            tmp.write_text(json.dumps({"key": payload, "basis": stored, "check": _checksum(stored)}))
            os.replace(tmp, path)
    with _memo_lock:
        _memo.setdefault(digest, basis)
    return basis


def _checksum(stored) -> str:
    return hashlib.sha256(json.dumps(stored, separators=(",", ":")).encode()).hexdigest()


def _verify_members(gens, basis, F, keyf) -> bool:
    d = _Divisors()
    for v in basis:
        d.add(_lead_term(v, keyf), v)
    return all(not _reduce(v, d, keyf, F) for v in gens if v)


def reduce_raw(vec: dict, basis, F: Field, order: ModuleOrder) -> dict:
    keyf = order.key
    d = _Divisors()
    for v in basis:
        d.add(_lead_term(v, keyf), v)
    return _reduce(vec, d, keyf, F)


# ---------------------------------------------------------------------------
# conversions between public values and raw vectors


def to_terms(value) -> dict:
    """Poly -> component-0 vector; tuple of Poly -> vector."""
    if isinstance(value, Poly):
        return {(0, e): c for e, c in value.terms.items()}
    out = {}
    for i, f in enumerate(value):
        for e, c in f.terms.items():
            out[(i, e)] = c
    return out


def from_terms(vec: dict, ring: PolyRing, rank: int | None, offset: int = 0):
    """Inverse of :func:`to_terms`; ``rank=None`` yields a Poly."""
    if rank is None:
        return Poly(ring, {e: c for (comp, e), c in vec.items()})
    parts: list = [dict() for _ in range(rank)]
    for (comp, e), c in vec.items():
        parts[comp - offset][e] = c
    return tuple(Poly(ring, p) for p in parts)


# ---------------------------------------------------------------------------
# public API


class GroebnerBasis:
    """A reduced Groebner basis of a submodule of ``ring^rank`` (``rank=None``: an ideal)."""

    def __init__(self, ring: PolyRing, gens, rank: int | None = None, order: ModuleOrder | None = None):
        self.ring = ring
        self.rank = rank
        self.order = order or ModuleOrder(ring.order, "pot")
        raw = []
        for g in gens:
            if rank is not None and len(g) != rank:
                raise ValueError(f"vector of length {len(g)} in a rank-{rank} module")
            for f in ([g] if rank is None else g):
                if f.ring != ring:
                    raise ValueError(f"ring mismatch: {f.ring} vs {ring}")
            raw.append(to_terms(g))
        self.raw = groebner_raw(raw, ring.field, self.order, ring.nvars)

    @property
    def elements(self) -> list:
        return [from_terms(v, self.ring, self.rank) for v in self.raw]

    def __len__(self) -> int:
        return len(self.raw)

    def reduce(self, f):
        if self.rank is not None and len(f) != self.rank:
            raise ValueError(f"vector of length {len(f)} in a rank-{self.rank} module")
        r = reduce_raw(to_terms(f), self.raw, self.ring.field, self.order)
        return from_terms(r, self.ring, self.rank)

    def contains(self, f) -> bool:
        return not reduce_raw(to_terms(f), self.raw, self.ring.field, self.order)

    def is_unit(self) -> bool:
        return any(len(v) == 1 and not any(next(iter(v))[1]) for v in self.raw)

    def lead_terms(self) -> list:
        keyf = self.order.key
        return [_lead_term(v, keyf) for v in self.raw]

    def canonical(self) -> tuple:
        keyf = self.order.key
        return tuple(_canon_vec(v, self.ring.field, keyf) for v in self.raw)

    def __eq__(self, other) -> bool:
        return isinstance(other, GroebnerBasis) and self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def __str__(self) -> str:
        if self.rank is None:
            return "{" + ", ".join(str(g) for g in self.elements) + "}"
        return "{" + ", ".join("(" + ", ".join(map(str, g)) + ")" for g in self.elements) + "}"


def _resolve_order(ring: PolyRing, order) -> ModuleOrder:
    if order is None:
        return ModuleOrder(ring.order, "pot")
    if isinstance(order, ModuleOrder):
        return order
    return ModuleOrder(order, "pot")


def buchberger(gens, ring: PolyRing, order=None, rank: int | None = None) -> list:
    """Reduced basis (monic leads, sorted descending) of the submodule generated by ``gens``."""
    return GroebnerBasis(ring, gens, rank, _resolve_order(ring, order)).elements


def normal_form(f, G, ring: PolyRing | None = None, order=None, rank: int | None = None):
    """Remainder of ``f`` on division by ``G`` (divisors tried in listed order).

    ``G`` need not be a Groebner basis; with a basis the remainder is unique.
    """
    if isinstance(f, Poly):
        ring = ring or f.ring
        rank = None
    else:
        ring = ring or f[0].ring
        rank = len(f)
    mo = _resolve_order(ring, order)
    keyf = mo.key
    F = ring.field
    d = _Divisors()
    for g in G:
        if rank is not None and len(g) != rank:
            raise ValueError("mismatched ambient rank")
        v = to_terms(g)
        if not v:
            continue
        lt = _lead_term(v, keyf)
        d.add(lt, _monic(v, lt, F))
    if rank is not None and len(f) != rank:
        raise ValueError("mismatched ambient rank")
    return from_terms(_reduce(to_terms(f), d, keyf, F), ring, rank)


def syzygy_module_raw(vectors, relations, r: int, ring: PolyRing, scheme: str = "top") -> list:
    """Generators of ``{a : sum a_i v_i in span(relations)}`` as raw vectors in ``k[x]^m``.

    ``vectors`` and ``relations`` are raw vectors in components ``0..r-1``.
    """
    zero = (0,) * ring.nvars
    one = ring.field.one
    aug = []
    for i, v in enumerate(vectors):
        w = dict(v)
        w[(r + i, zero)] = one
        aug.append(w)
    aug.extend(relations)
    order = ModuleOrder(ring.order, scheme, split=r)
    basis = groebner_raw(aug, ring.field, order, ring.nvars)
    out = []
    keyf = order.key
    for v in basis:
        lt = _lead_term(v, keyf)
        if lt[0] >= r:
            out.append({(c - r, e): val for (c, e), val in v.items()})
    return out


def lift_raw(target: dict, vectors, relations, r: int, ring: PolyRing, scheme: str = "top"):
    """Coefficients ``a`` with ``target - sum a_i v_i`` in span(relations), or None."""
    zero = (0,) * ring.nvars
    F = ring.field
    aug = []
    for i, v in enumerate(vectors):
        w = dict(v)
        w[(r + i, zero)] = F.one
        aug.append(w)
    aug.extend(relations)
    order = ModuleOrder(ring.order, scheme, split=r)
    basis = groebner_raw(aug, F, order, ring.nvars)
    rem = reduce_raw(target, basis, F, order)
    if any(c < r for c, _ in rem):
        return None
    return {(c - r, e): F.neg(v) for (c, e), v in rem.items()}


def syzygies(vectors, ring: PolyRing | None = None) -> list:
    """Generators of the kernel of ``e_i -> vectors[i]`` over the polynomial ring.

    Accepts Polys (ideal generators) or equal-length tuples of Polys.
    """
    vectors = list(vectors)
    if not vectors:
        return []
    if isinstance(vectors[0], Poly):
        ring = ring or vectors[0].ring
        r = 1
    else:
        ring = ring or vectors[0][0].ring
        r = len(vectors[0])
        if any(len(v) != r for v in vectors):
            raise ValueError("vectors must share the ambient rank")
    raw = [to_terms(v) for v in vectors]
    return [from_terms(s, ring, len(vectors)) for s in syzygy_module_raw(raw, [], r, ring)]


def lift(target, vectors, ring: PolyRing | None = None):
    """Express ``target`` as a combination of ``vectors``; None when not a member."""
    vectors = list(vectors)
    if isinstance(target, Poly):
        ring = ring or target.ring
        r = 1
    else:
        ring = ring or target[0].ring
        r = len(target)
    res = lift_raw(to_terms(target), [to_terms(v) for v in vectors], [], r, ring)
    if res is None:
        return None
    return from_terms(res, ring, len(vectors))
