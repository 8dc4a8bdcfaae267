"""Fixture documents: JSON files describing one ring plus named inputs.

Layout (``"format": "modcrit-fixture/1"``)::

    ring              name, field, variables, order, relations, ass_primes,
                      ass_complete, max_ideals, primes, flags, local_dims
    modules           label -> {rank, relations} | {cyclic} | {ideal} | {free}
    endomorphisms     label -> {frobenius: true} | {images}
    multiplicative_sets  label -> {gens, allow_zero} | {mode: "nzd"}
    ring_maps         label -> {source: <ring section>, images, module_basis}
    candidates        label -> list of prime labels
    expectations      list of {id, command, path, equals, note}
    expect_failure    {kind, match, note}   (mutation fixtures only)

Polynomials are strings; the canonical dump rewrites them in canonical form
and emits two-space indented JSON with a trailing newline, so
``dump(load(text)) == text`` for any file written by the dumper.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .fields import parse_field
from .fixtures import DeclaredPrime, RingFixture
from .frobenius import Endomorphism, RingMap
from .modules import Module, cyclic, ideal_as_module
from .orders import parse_order
from .polynomials import PolynomialSyntaxError, PolyRing
from .rings import MultiplicativeSet
from .verdicts import FixtureError

__all__ = ["FixtureDocument", "FORMAT", "loads", "load", "dumps", "parse_and_validate"]

FORMAT = "modcrit-fixture/1"

_RING_KEYS = ("name", "field", "variables", "order", "relations", "ass_primes", "ass_complete",
              "max_ideals", "primes", "flags", "local_dims")
_TOP_KEYS = ("format", "description", "ring", "modules", "endomorphisms", "multiplicative_sets",
             "ring_maps", "candidates", "expectations", "expect_failure")


@dataclass
class FixtureDocument:
    fixture: RingFixture
    raw: dict  # canonical JSON data
    modules: dict = field(default_factory=dict)
    endomorphisms: dict = field(default_factory=dict)
    multiplicative_sets: dict = field(default_factory=dict)
    ring_maps: dict = field(default_factory=dict)
    ring_map_sources: dict = field(default_factory=dict)
    candidates: dict = field(default_factory=dict)
    expectations: list = field(default_factory=list)
    expect_failure: dict | None = None
    path: str | None = None

    @property
    def name(self) -> str:
        return self.fixture.name

    @property
    def text(self) -> str:
        return dumps(self.raw)

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.text.encode()).hexdigest()

    def module(self, label: str) -> Module:
        try:
            return self.modules[label]
        except KeyError:
            raise KeyError(f"no module {label!r} in fixture {self.name}") from None

    def candidate_primes(self, label: str | None = None, labels=None) -> dict:
        """Label -> ideal for a named candidate list, explicit labels, or every declared prime."""
        fx = self.fixture
        if labels:
            names = list(labels)
        elif label is not None:
            names = self.candidates[label]
        elif "default" in self.candidates:
            names = self.candidates["default"]
        else:
            names = fx.prime_labels()
        return {k: fx.prime(k) for k in names}


# -- parsing ---------------------------------------------------------------


class _Loader:
    def __init__(self, text: str, path: str | None):
        self.text = text
        self.path = path

    def locate(self, needle: str, after: int = 0) -> tuple:
        idx = self.text.find(needle, after)
        if idx < 0:
            return None, None
        line = self.text.count("\n", 0, idx) + 1
        col = idx - (self.text.rfind("\n", 0, idx) + 1) + 1
        return line, col

    def fail(self, message: str, needle: str | None = None):
        line = col = None
        if needle is not None:
            line, col = self.locate(needle)
        raise FixtureError(message, self.path, line, col)

    def pairs(self, items):
        seen = {}
        for k, v in items:
            if k in seen:
                first = self.text.find(json.dumps(k))
                line, col = self.locate(json.dumps(k), first + 1) if first >= 0 else (None, None)
                raise FixtureError(f"duplicate key or label {k!r}", self.path, line, col)
            seen[k] = v
        return seen

    def obj(self, value, where: str, allowed=None) -> dict:
        if not isinstance(value, dict):
            self.fail(f"{where} must be an object", json.dumps(where.split(".")[-1]))
        if allowed is not None:
            extra = [k for k in value if k not in allowed]
            if extra:
                self.fail(f"unknown key {extra[0]!r} in {where}", json.dumps(extra[0]))
        return value

    def poly(self, ring: PolyRing, text, where: str):
        if not isinstance(text, str):
            self.fail(f"{where}: polynomials are written as strings")
        try:
            return ring.parse(text)
        except PolynomialSyntaxError as exc:
            line, col = self.locate(json.dumps(text))
            if line is not None:
                col += 1 + exc.position
            raise FixtureError(f"{where}: {exc}", self.path, line, col) from None
        except (ValueError, KeyError) as exc:
            self.fail(f"{where}: {exc}", json.dumps(text))

    def polys(self, ring, items, where: str) -> list:
        if not isinstance(items, list):
            self.fail(f"{where} must be a list of polynomial strings", json.dumps(where.split(".")[-1]))
        return [self.poly(ring, t, where) for t in items]

    # sections

    def ring(self, raw, where: str, order_override: str | None = None):
        raw = self.obj(raw, where, _RING_KEYS)
        for key in ("name", "field", "variables", "relations"):
            if key not in raw:
                self.fail(f"{where} lacks required key {key!r}", json.dumps(where.split(".")[-1]))
        try:
            F = parse_field(raw["field"])
        except ValueError as exc:
            self.fail(f"{where}.field: {exc}", json.dumps(raw["field"]))
        names = raw["variables"]
        if not isinstance(names, list) or len(set(names)) != len(names):
            self.fail(f"{where}.variables must be a list of distinct names", '"variables"')
        order_text = order_override or raw.get("order", "grevlex")
        try:
            order = parse_order(order_text, len(names))
            P = PolyRing(F, names, order)
        except ValueError as exc:
            self.fail(f"{where}: {exc}", '"order"' if "order" in raw else '"variables"')
        canon = {}
        rels = self.polys(P, raw["relations"], f"{where}.relations")
        ass = []
        canon_ass = []
        labels = set()
        for i, item in enumerate(raw.get("ass_primes", [])):
            item = self.obj(item, f"{where}.ass_primes[{i}]", ("label", "gens", "minimal", "maximal"))
            label = item.get("label")
            if not isinstance(label, str):
                self.fail(f"{where}.ass_primes[{i}] needs a string label", '"ass_primes"')
            if label in labels:
                first = self.text.find(json.dumps(label))
                line, col = self.locate(json.dumps(label), first + 1)
                raise FixtureError(f"duplicate prime label {label!r}", self.path, line, col)
            labels.add(label)
            gens = self.polys(P, item.get("gens", []), f"{where}.ass_primes[{label}]")
            ass.append(DeclaredPrime(label, tuple(gens), bool(item.get("minimal", False)), bool(item.get("maximal", False))))
            canon_ass.append({"label": label, "gens": [str(g) for g in gens],
                              "minimal": bool(item.get("minimal", False)), "maximal": bool(item.get("maximal", False))})
        max_ideals = {}
        for k, v in self.obj(raw.get("max_ideals", {}), f"{where}.max_ideals").items():
            max_ideals[k] = tuple(self.polys(P, v, f"{where}.max_ideals.{k}"))
        primes = {}
        for k, v in self.obj(raw.get("primes", {}), f"{where}.primes").items():
            primes[k] = tuple(self.polys(P, v, f"{where}.primes.{k}"))
        flags = dict(self.obj(raw.get("flags", {}), f"{where}.flags"))
        local_dims = dict(self.obj(raw.get("local_dims", {}), f"{where}.local_dims"))
        for key in raw:
            if key == "relations":
                canon[key] = [str(g) for g in rels]
            elif key == "ass_primes":
                canon[key] = canon_ass
            elif key == "max_ideals":
                canon[key] = {k: [str(g) for g in v] for k, v in max_ideals.items()}
            elif key == "primes":
                canon[key] = {k: [str(g) for g in v] for k, v in primes.items()}
            else:
                canon[key] = raw[key]
        fx = RingFixture(str(raw["name"]), P, tuple(rels), tuple(ass), bool(raw.get("ass_complete", False)),
                         max_ideals, primes, flags, local_dims)
        return fx, canon

    def module(self, fx: RingFixture, label: str, raw) -> tuple:
        where = f"modules.{label}"
        raw = self.obj(raw, where, ("rank", "relations", "cyclic", "ideal", "free", "note"))
        R = fx.ring
        P = fx.poly
        canon = dict(raw)
        kinds = [k for k in ("relations", "cyclic", "ideal", "free") if k in raw]
        if len(kinds) != 1:
            self.fail(f"{where} needs exactly one of relations, cyclic, ideal, free", json.dumps(label))
        kind = kinds[0]
        if kind == "free":
            n = raw["free"]
            if not isinstance(n, int) or n < 0:
                self.fail(f"{where}.free must be a nonnegative integer", json.dumps(label))
            return Module.free(R, n, label), canon
        if kind in ("cyclic", "ideal"):
            gens = self.polys(P, raw[kind], f"{where}.{kind}")
            canon[kind] = [str(g) for g in gens]
            J = R.ideal(gens)
            return (cyclic(R, J, label) if kind == "cyclic" else ideal_as_module(J, label)), canon
        rank = raw.get("rank")
        if not isinstance(rank, int) or rank < 0:
            self.fail(f"{where}.rank must be a nonnegative integer", json.dumps(label))
        cols = []
        for j, col in enumerate(raw["relations"]):
            entries = self.polys(P, col, f"{where}.relations[{j}]")
            if len(entries) != rank:
                self.fail(f"{where}.relations[{j}] has {len(entries)} entries, rank is {rank}", json.dumps(label))
            cols.append(tuple(R.reduce(e) for e in entries))
        canon["relations"] = [[str(P.parse(e)) for e in col] for col in raw["relations"]]
        return Module(R, rank, cols, label), canon

    def endomorphism(self, fx: RingFixture, label: str, raw) -> tuple:
        where = f"endomorphisms.{label}"
        raw = self.obj(raw, where, ("frobenius", "images", "note"))
        canon = dict(raw)
        try:
            if raw.get("frobenius"):
                return Endomorphism.frobenius_of(fx.ring, label), canon
            images = self.polys(fx.poly, raw.get("images", []), f"{where}.images")
            canon["images"] = [str(g) for g in images]
            return Endomorphism(fx.ring, images, label), canon
        except ValueError as exc:
            self.fail(f"{where}: {exc}", json.dumps(label))

    def mset(self, fx: RingFixture, label: str, raw) -> tuple:
        where = f"multiplicative_sets.{label}"
        raw = self.obj(raw, where, ("gens", "mode", "allow_zero", "note"))
        canon = dict(raw)
        gens = self.polys(fx.poly, raw.get("gens", []), f"{where}.gens")
        if "gens" in raw:
            canon["gens"] = [str(g) for g in gens]
        try:
            return MultiplicativeSet(fx.ring, gens, raw.get("mode", "fg"), bool(raw.get("allow_zero", False)), label), canon
        except ValueError as exc:
            self.fail(f"{where}: {exc}", json.dumps(label))

    def ring_map(self, fx: RingFixture, label: str, raw) -> tuple:
        where = f"ring_maps.{label}"
        raw = self.obj(raw, where, ("source", "images", "module_basis", "note"))
        src, src_canon = self.ring(raw.get("source"), f"{where}.source")
        images = self.polys(fx.poly, raw.get("images", []), f"{where}.images")
        basis = self.polys(fx.poly, raw.get("module_basis", ["1"]), f"{where}.module_basis")
        if len(images) != src.poly.nvars:
            self.fail(f"{where}: need one image per source variable", json.dumps(label))
        canon = dict(raw)
        canon["source"] = src_canon
        canon["images"] = [str(g) for g in images]
        if "module_basis" in raw:
            canon["module_basis"] = [str(g) for g in basis]
        g = RingMap(src.ring, fx.ring, tuple(fx.ring.reduce(i) for i in images), tuple(fx.ring.reduce(b) for b in basis), label)
        bad = [r for r in src.relations if not fx.ring.is_zero(_compose_into(r, g.images, fx.poly))]
        if bad:
            self.fail(f"{where}: source relation {bad[0]} does not map to 0", json.dumps(label))
        return g, src, canon


def _compose_into(f, images, target: PolyRing):
    out = target.zero
    for e, c in f.terms.items():
        t = target.const(c)
        for img, a in zip(images, e):
            if a:
                t = t * img**a
        out = out + t
    return out


def loads(text: str, path: str | None = None, order_override: str | None = None) -> FixtureDocument:
    ld = _Loader(text, path)
    try:
        raw = json.loads(text, object_pairs_hook=ld.pairs)
    except json.JSONDecodeError as exc:
        raise FixtureError(exc.msg, path, exc.lineno, exc.colno) from None
    raw = ld.obj(raw, "document", _TOP_KEYS)
    if raw.get("format") != FORMAT:
        ld.fail(f"format must be {FORMAT!r}", '"format"')
    if "ring" not in raw:
        ld.fail("document lacks a ring section")
    fx, ring_canon = ld.ring(raw["ring"], "ring", order_override)
    doc = FixtureDocument(fx, {}, path=path)
    canon = {}
    for key in raw:
        if key == "ring":
            canon["ring"] = ring_canon
        elif key == "modules":
            canon[key] = {}
            for label, spec in ld.obj(raw[key], key).items():
                doc.modules[label], canon[key][label] = ld.module(fx, label, spec)
        elif key == "endomorphisms":
            canon[key] = {}
            for label, spec in ld.obj(raw[key], key).items():
                doc.endomorphisms[label], canon[key][label] = ld.endomorphism(fx, label, spec)
        elif key == "multiplicative_sets":
            canon[key] = {}
            for label, spec in ld.obj(raw[key], key).items():
                doc.multiplicative_sets[label], canon[key][label] = ld.mset(fx, label, spec)
        elif key == "ring_maps":
            canon[key] = {}
            for label, spec in ld.obj(raw[key], key).items():
                g, src, canon[key][label] = ld.ring_map(fx, label, spec)
                doc.ring_maps[label] = g
                doc.ring_map_sources[label] = src
        elif key == "candidates":
            known = set(fx.prime_labels())
            for label, names in ld.obj(raw[key], key).items():
                missing = [n for n in names if n not in known]
                if missing:
                    ld.fail(f"candidates.{label}: unknown prime {missing[0]!r}", json.dumps(missing[0]))
                doc.candidates[label] = list(names)
            canon[key] = raw[key]
        elif key == "expectations":
            if not isinstance(raw[key], list):
                ld.fail("expectations must be a list", '"expectations"')
            ids = set()
            for i, item in enumerate(raw[key]):
                item = ld.obj(item, f"expectations[{i}]", ("id", "command", "path", "equals", "note"))
                if "note" not in item:
                    ld.fail(f"expectations[{i}] needs a provenance note", '"expectations"')
                eid = item.get("id", str(i))
                if eid in ids:
                    ld.fail(f"duplicate expectation id {eid!r}", json.dumps(eid))
                ids.add(eid)
                doc.expectations.append(item)
            canon[key] = raw[key]
        elif key == "expect_failure":
            doc.expect_failure = ld.obj(raw[key], key, ("kind", "match", "note"))
            canon[key] = raw[key]
        else:
            canon[key] = raw[key]
    doc.raw = canon
    return doc


def load(path, order_override: str | None = None) -> FixtureDocument:
    path = str(path)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FixtureError(f"cannot read fixture: {exc.strerror}", path) from None
    return loads(text, path, order_override)


def dumps(raw: dict) -> str:
    return json.dumps(raw, indent=2, ensure_ascii=False) + "\n"


def parse_and_validate(path, order_override: str | None = None) -> tuple:
    """(document, validation report); invariant violations are reported, never repaired."""
    doc = load(path, order_override)
    return doc, doc.fixture.validation
