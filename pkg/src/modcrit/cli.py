"""The ``modcrit`` command line."""

from __future__ import annotations

import argparse
import os
import sys
import time

from . import __version__
from .avoidance import claim2_witness
from .divisibility import h_divisible, lemma42_check, localized_division_witness, w_predicates
from .duality import coass_membership, dual_of, dual_predicates, hom_ext_into_dual, thm61_local, thm63_run
from .fixture_io import load
from .flatness import (
    ass_transport_check,
    flat_criterion,
    is_faithfully_flat,
    is_flat_oracle,
    local_fitting_free,
    local_flat_criterion,
    nonreduced_demo,
)
from .frobenius import Endomorphism, endomorphism_check, frobenius_functor, kunz_regularity_test, pushforward_eR
from .groebner import GroebnerBasis, configure_cache
from .modules import (
    annihilator,
    ass_membership,
    double_dual_kernel,
    fitting_ideals,
    hom_to_ring,
    prune,
    tensor,
    tor1,
)
from .report import build_report, jsonable, render
from .theorems import TAGS, run_theorem
from .verdicts import FixtureError, ModcritError

__all__ = ["main", "execute", "build_parser"]

EXIT_OK, EXIT_EXPECTATION, EXIT_USAGE = 0, 1, 2

# options that change how a run is carried out but not what it computes
_CONFIG_FLAGS = {"--out": True, "--format": True, "--cache-dir": True, "--workers": True, "--timing": False}


class UsageError(Exception):
    pass


def _env_int(name: str, default: int) -> int:
    value = os.environ.get(name)
    if value is None:
        return default
    try:
        return int(value)
    except ValueError:
        raise UsageError(f"{name} must be an integer, got {value!r}") from None


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.add_argument("--cache-dir", help="Groebner cache directory (env MODCRIT_CACHE)")
    p.add_argument("--workers", type=int, default=None, help="threads for independent checks (env MODCRIT_WORKERS)")
    p.add_argument("--bound-avoidance", type=int, default=None, help="max word length in the witness search")
    p.add_argument("--bound-nilpotency", type=int, default=None, help="max power n with w^n r^n = 0")
    p.add_argument("--nmax", type=int, default=None, help="iterate bound for the contraction test")
    p.add_argument("--order", help="monomial order override, e.g. lex or block(1:grevlex,2:grevlex)")
    p.add_argument("--timing", action="store_true", help="include wall-clock timings in the report")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="modcrit", description="Exact flatness, regularity and injectivity criteria over affine rings.")
    parser.add_argument("--version", action="version", version=f"modcrit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gb", parents=[common], help="reduced Groebner basis of the defining ideal plus extra generators")
    p.add_argument("fixture")
    p.add_argument("--gens", default="", help="comma-separated extra generators, or @label")

    p = sub.add_parser("ideal", parents=[common], help="ideal operations in R")
    p.add_argument("fixture")
    p.add_argument("--op", required=True, choices=("contains", "intersect", "quotient", "saturate", "eliminate",
                                                   "radical_contains", "sum", "product", "power", "equal"))
    p.add_argument("--a", required=True, help="generators (comma-separated) or @label")
    p.add_argument("--b", help="second ideal")
    p.add_argument("--f", help="element")
    p.add_argument("--vars", help="comma-separated variables to eliminate")
    p.add_argument("--n", type=int, default=2)

    p = sub.add_parser("mod", parents=[common], help="module invariants")
    p.add_argument("fixture")
    p.add_argument("--module", required=True)
    p.add_argument("--op", required=True, choices=("present", "prune", "fitting", "ann", "torsion", "tensor", "tor1",
                                                   "hom", "double_dual", "zero", "ass"))
    p.add_argument("--with", dest="other")
    p.add_argument("--candidates", nargs="*")

    p = sub.add_parser("flat", parents=[common], help="flatness oracle and criteria")
    p.add_argument("fixture")
    p.add_argument("--module", required=True)
    p.add_argument("--mode", required=True, choices=("oracle", "d", "e", "d'", "e'", "local", "transport", "faithful", "demo"))
    p.add_argument("--prime")
    p.add_argument("--m")
    p.add_argument("--with", dest="other")
    p.add_argument("--ideal", help="ideal J for the tensor demonstration (@label or generators)")
    p.add_argument("--candidates", nargs="*")

    p = sub.add_parser("endo", parents=[common], help="endomorphism checks at a prime")
    p.add_argument("fixture")
    p.add_argument("--endo", help="endomorphism label (default Frobenius)")
    p.add_argument("--prime", required=True)

    p = sub.add_parser("frob", parents=[common], help="Frobenius functor, Kunz test, pushforward")
    p.add_argument("action", choices=("apply", "kunz", "pushforward"))
    p.add_argument("fixture")
    p.add_argument("--e", type=int, default=1)
    p.add_argument("--module")
    p.add_argument("--endo")
    p.add_argument("--max", nargs="*", help="maximal ideal labels (default all declared)")
    p.add_argument("--bound", type=int, default=16, help="max generators of the pushforward")

    p = sub.add_parser("div", parents=[common], help="W-torsion-freeness, W-divisibility, witnesses")
    p.add_argument("fixture")
    p.add_argument("--W", required=True, dest="mset")
    p.add_argument("--module")
    p.add_argument("--op", default="predicates", choices=("predicates", "lemma42", "hdiv", "claim", "witness"))
    p.add_argument("--c")

    p = sub.add_parser("inj", parents=[common], help="predicates of Matlis duals")
    p.add_argument("fixture")
    p.add_argument("--carrier", required=True)
    p.add_argument("--check", required=True, choices=("predicates", "thm63", "local", "coass", "hom", "ext1"))
    p.add_argument("--m")
    p.add_argument("--prime")
    p.add_argument("--with", dest="other")
    p.add_argument("--candidates", nargs="*")

    p = sub.add_parser("theorems", parents=[common], help="run a theorem's equivalence matrix")
    p.add_argument("tag", choices=TAGS)
    p.add_argument("fixture")
    p.add_argument("--module")
    p.add_argument("--modules", nargs="*")
    p.add_argument("--W", dest="mset")
    p.add_argument("--c")
    p.add_argument("--e", type=int, default=1)
    p.add_argument("--max", nargs="*")
    p.add_argument("--endo")
    p.add_argument("--map")
    p.add_argument("--p")
    p.add_argument("--candidates", nargs="*")
    p.add_argument("--candidate-set")
    p.add_argument("--bound", type=int, default=16)

    p = sub.add_parser("check", parents=[common], help="validate fixtures and run their expectations")
    p.add_argument("fixtures", nargs="+")
    return parser


# -- helpers ---------------------------------------------------------------


def _gens(doc, text: str):
    fx = doc.fixture
    if text is None:
        raise UsageError("missing ideal argument")
    text = text.strip()
    if text.startswith("@"):
        try:
            return fx.prime(text[1:])
        except KeyError:
            raise UsageError(f"unknown ideal label {text[1:]!r}") from None
    parts = [t for t in text.split(",") if t.strip()]
    return fx.ring.ideal([fx.ring.parse(t) for t in parts])


def _module(doc, label):
    if label is None:
        raise UsageError("a module label is required")
    try:
        return doc.module(label)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None


def _prime(doc, label):
    if label is None:
        raise UsageError("a prime label is required")
    try:
        return doc.fixture.prime(label)
    except KeyError:
        raise UsageError(f"unknown prime label {label!r}") from None


def _maximal(doc, label):
    if label is None:
        raise UsageError("--m is required")
    m = doc.fixture.maximal_ideals.get(label)
    if m is None:
        raise UsageError(f"unknown maximal ideal label {label!r}")
    return m


def _candidates(doc, labels=None, set_name=None):
    try:
        return doc.candidate_primes(set_name, labels)
    except KeyError as exc:
        raise UsageError(f"unknown candidate {exc.args[0]!r}") from None


def _endo(doc, label):
    if label is None:
        return None
    try:
        return doc.endomorphisms[label]
    except KeyError:
        raise UsageError(f"unknown endomorphism {label!r}") from None


def _mset(doc, label):
    try:
        return doc.multiplicative_sets[label]
    except KeyError:
        raise UsageError(f"unknown multiplicative set {label!r}") from None


def _bounds(args) -> dict:
    return {
        "max_word_length": args.bound_avoidance if args.bound_avoidance is not None else _env_int("MODCRIT_BOUND_AVOIDANCE", 4),
        "max_power": args.bound_nilpotency if args.bound_nilpotency is not None else _env_int("MODCRIT_BOUND_NILPOTENCY", 64),
    }


def _presentation(M) -> dict:
    return {"rank": M.rank, "relations": [[str(f) for f in col] for col in M.relations]}


def _echo(argv: list) -> list:
    out, skip = [], False
    for tok in argv:
        if skip:
            skip = False
            continue
        name = tok.split("=", 1)[0]
        if name in _CONFIG_FLAGS:
            skip = _CONFIG_FLAGS[name] and "=" not in tok
            continue
        out.append(os.path.basename(tok) if tok.endswith(".fx") else tok)
    return out


# -- command bodies ----------------------------------------------------------


def _cmd_gb(doc, args):
    fx = doc.fixture
    extra = list(_gens(doc, args.gens).gens) if args.gens else []
    gb = GroebnerBasis(fx.poly, list(fx.relations) + extra)
    return {"basis": [str(g) for g in gb.elements], "unit": gb.is_unit(),
            "lead_monomials": [str(fx.poly.monomial(e)) for _, e in gb.lead_terms()]}


def _cmd_ideal(doc, args):
    A = _gens(doc, args.a)
    op = args.op
    R = doc.fixture.ring
    if op in ("contains", "radical_contains"):
        f = R.parse(args.f) if args.f else None
        if f is None:
            raise UsageError("--f is required")
        return {"op": op, "value": A.contains(f) if op == "contains" else A.radical_contains(f)}
    if op == "saturate":
        if not args.f:
            raise UsageError("--f is required")
        return {"op": op, "ideal": str(A.saturate(R.parse(args.f)))}
    if op == "eliminate":
        if not args.vars:
            raise UsageError("--vars is required")
        return {"op": op, "ideal": str(A.eliminate([v.strip() for v in args.vars.split(",")]))}
    if op == "power":
        return {"op": op, "ideal": str(A.power(args.n))}
    B = _gens(doc, args.b)
    if op == "equal":
        return {"op": op, "value": A == B}
    res = {"intersect": A.intersect, "quotient": A.quotient, "sum": A.__add__, "product": A.__mul__}[op](B)
    return {"op": op, "ideal": str(res)}


def _cmd_mod(doc, args):
    M = _module(doc, args.module)
    op = args.op
    if op == "present":
        return _presentation(M)
    if op == "prune":
        return _presentation(prune(M))
    if op == "zero":
        return {"zero": M.is_zero()}
    if op == "fitting":
        return {"fitting": [str(F) for F in fitting_ideals(M)]}
    if op == "ann":
        return {"annihilator": str(annihilator(M))}
    if op == "torsion":
        T = doc.fixture.torsion_submodule(M)
        return {"torsion_free": T.is_zero(), "torsion_generators": [[str(f) for f in g] for g in T.generators or ()]}
    if op == "hom":
        return _presentation(prune(hom_to_ring(M)))
    if op == "double_dual":
        K = double_dual_kernel(M)
        return {"kernel_zero": K.is_zero(), "kernel": _presentation(prune(K))}
    if op == "ass":
        cands = _candidates(doc, args.candidates)
        return {"ass": {k: ass_membership(P, M) for k, P in cands.items()}, "caveat": "over the candidate primes only"}
    N = _module(doc, args.other)
    if op == "tensor":
        return _presentation(prune(tensor(M, N)))
    return _presentation(prune(tor1(M, N)))


def _cmd_flat(doc, args):
    fx = doc.fixture
    M = _module(doc, args.module)
    mode = args.mode
    if mode == "oracle":
        return is_flat_oracle(fx, M)
    if mode in ("d", "e"):
        ok, detail = flat_criterion(fx, M, _prime(doc, args.prime), mode)
        return {"mode": mode, "prime": args.prime, "torsion_free": ok, **detail}
    if mode in ("d'", "e'"):
        ok, detail = local_flat_criterion(fx, _maximal(doc, args.m), M, mode)
        return {"mode": mode, "m": args.m, "torsion_free_at_m": ok, **detail}
    if mode == "local":
        free, rank = local_fitting_free(M, _maximal(doc, args.m))
        return {"m": args.m, "locally_free": free, "rank": rank}
    if mode == "transport":
        return ass_transport_check(fx, _module(doc, args.other), M, _candidates(doc, args.candidates))
    if mode == "faithful":
        return is_faithfully_flat(fx, M)
    return nonreduced_demo(fx, _gens(doc, args.ideal), M)


def _cmd_endo(doc, args, cfg):
    phi = _endo(doc, args.endo) or Endomorphism.frobenius_of(doc.fixture.ring)
    return endomorphism_check(phi, _prime(doc, args.prime), cfg["nmax"])


def _cmd_frob(doc, args):
    fx = doc.fixture
    phi = _endo(doc, args.endo)
    if args.action == "apply":
        M = _module(doc, args.module)
        return _presentation(frobenius_functor(M, phi or Endomorphism.frobenius_of(fx.ring), args.e))
    if args.action == "kunz":
        labels = args.max or list(fx.maximal_ideals)
        for label in labels:
            _maximal(doc, label)
        return kunz_regularity_test(fx, args.e, labels, phi)
    E = pushforward_eR(fx, args.e, args.bound)
    return {"generators": E.rank, "oracle": is_flat_oracle(fx, E)}


def _cmd_div(doc, args, cfg):
    fx = doc.fixture
    W = _mset(doc, args.mset)
    op = args.op
    if op in ("claim", "witness"):
        if not args.c:
            raise UsageError("--c is required")
        c = fx.ring.parse(args.c)
        if op == "claim":
            wit, ident = claim2_witness(fx, W, c, **cfg["bounds"])
            return {"witness": wit, "identity": ident}
        return localized_division_witness(fx, _module(doc, args.module), W, c, **cfg["bounds"])
    M = _module(doc, args.module)
    if op == "predicates":
        return w_predicates(M, W)
    if op == "lemma42":
        return lemma42_check(M, W)
    return h_divisible(M, W)


def _cmd_inj(doc, args):
    fx = doc.fixture
    L = _module(doc, args.carrier)
    D = dual_of(L)
    check = args.check
    if check == "predicates":
        return dual_predicates(fx, D)
    if check == "thm63":
        return thm63_run(fx, L, _candidates(doc, args.candidates))
    if check == "local":
        return thm61_local(fx, _maximal(doc, args.m), L)
    if check == "coass":
        return coass_membership(_prime(doc, args.prime), D)
    H = hom_ext_into_dual(check, _module(doc, args.other), D)
    return {"mode": check, "dual_of": _presentation(prune(H.carrier)), "zero": H.is_zero()}


def _cmd_theorems(doc, args, cfg):
    tag = args.tag
    cands = _candidates(doc, args.candidates, args.candidate_set)
    if tag == "flatred":
        return run_theorem(tag, doc, M=_module(doc, args.module), candidates=cands, workers=cfg["workers"])
    if tag == "frob":
        return run_theorem(tag, doc, e=args.e, labels=args.max, phi=_endo(doc, args.endo), workers=cfg["workers"], bound=args.bound)
    if tag == "localization":
        return run_theorem(tag, doc, M=_module(doc, args.module), W=_mset(doc, args.mset))
    if tag == "divred":
        if not args.c:
            raise UsageError("--c is required")
        M = _module(doc, args.module) if args.module else None
        return run_theorem(tag, doc, W=_mset(doc, args.mset), c=doc.fixture.ring.parse(args.c), M=M, **cfg["bounds"])
    if tag == "coasshom":
        tests = {k: _module(doc, k) for k in (args.modules or [])}
        return run_theorem(tag, doc, L=_module(doc, args.module), tests=tests, candidates=cands)
    if tag == "injred":
        return run_theorem(tag, doc, L=_module(doc, args.module), candidates=cands)
    if tag == "tfred":
        if not args.p:
            raise UsageError("--p is required")
        return run_theorem(tag, doc, M=_module(doc, args.module), candidates=cands, p_label=args.p)
    if not args.map:
        raise UsageError("--map is required")
    if args.map not in doc.ring_maps:
        raise UsageError(f"unknown ring map {args.map!r}")
    mods = {k: _module(doc, k) for k in (args.modules or ([args.module] if args.module else []))}
    return run_theorem(tag, doc, map_label=args.map, modules=mods, candidates=cands)


def _lookup(data, path: str):
    cur = data
    for part in path.split(".") if path else []:
        if isinstance(cur, list):
            cur = cur[int(part)]
        elif isinstance(cur, dict):
            if part not in cur:
                raise KeyError(path)
            cur = cur[part]
        else:
            raise KeyError(path)
    return cur


def _expectation_argv(doc, command: list) -> list:
    sub = command[0]
    if sub in ("frob", "theorems"):
        return [sub, command[1], doc.path] + list(command[2:])
    return [sub, doc.path] + list(command[1:])


def _check_one(path: str, cfg, documents: dict) -> dict:
    try:
        doc = _load(path, cfg, documents)
    except FixtureError as exc:
        return {"file": os.path.basename(path), "status": "parse_error", "error": exc.as_dict(), "ok": False}
    report = doc.fixture.validation
    rows = []
    for i, exp in enumerate(doc.expectations):
        eid = exp.get("id", str(i))
        try:
            sub = execute(_expectation_argv(doc, exp["command"]), documents=documents)
            value = _lookup(sub["result"], exp.get("path", ""))
            ok = value == exp.get("equals")
            rows.append({"id": eid, "ok": ok, "value": value, "expected": exp.get("equals"), "note": exp.get("note")})
        except (KeyError, IndexError, ValueError, UsageError) as exc:
            rows.append({"id": eid, "ok": False, "error": f"{type(exc).__name__}: {exc}", "note": exp.get("note")})
    ok = report.ok and all(r["ok"] for r in rows)
    out = {"file": os.path.basename(path), "fixture": doc.name, "digest": doc.digest, "validation": report.as_dict(),
           "expectations": rows, "ok": ok}
    if doc.expect_failure is not None:
        out["expect_failure"] = _match_failure(doc.expect_failure, report, rows)
    return out


def _match_failure(spec: dict, report, rows) -> dict:
    kind = spec.get("kind")
    needle = spec.get("match", "")
    if kind == "validation":
        hits = [c["check"] for c in report.failures() if needle in c["check"]]
    elif kind == "expectation":
        hits = [r["id"] for r in rows if not r["ok"] and needle in r["id"]]
    else:
        hits = []
    return {"kind": kind, "match": needle, "matched": bool(hits), "hits": hits, "note": spec.get("note")}


def _load(path: str, cfg, documents: dict | None):
    key = (os.path.abspath(path), cfg.get("order"))
    if documents is not None and key in documents:
        return documents[key]
    doc = load(path, cfg.get("order"))
    if documents is not None:
        documents[key] = doc
    return doc


def _configure(args) -> dict:
    cache = args.cache_dir or os.environ.get("MODCRIT_CACHE")
    configure_cache(cache)
    workers = args.workers if args.workers is not None else _env_int("MODCRIT_WORKERS", 1)
    if workers < 1:
        raise UsageError("--workers must be at least 1")
    return {
        "workers": workers,
        "bounds": _bounds(args),
        "nmax": args.nmax if args.nmax is not None else _env_int("MODCRIT_NMAX", 8),
        "order": args.order,
    }


def execute(argv: list, documents: dict | None = None) -> dict:
    """Parse ``argv`` and run it; returns the report dict.  Raises on usage or parse errors."""
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = _configure(args)
    t0 = time.perf_counter()
    echo = _echo(argv)
    if args.command == "check":
        docs = {} if documents is None else documents
        results = [_check_one(p, cfg, docs) for p in args.fixtures]
        report = build_report(echo, None, {"files": results, "ok": all(r["ok"] for r in results)})
    else:
        doc = _load(args.fixture, cfg, documents)
        body = {
            "gb": lambda: _cmd_gb(doc, args),
            "ideal": lambda: _cmd_ideal(doc, args),
            "mod": lambda: _cmd_mod(doc, args),
            "flat": lambda: _cmd_flat(doc, args),
            "endo": lambda: _cmd_endo(doc, args, cfg),
            "frob": lambda: _cmd_frob(doc, args),
            "div": lambda: _cmd_div(doc, args, cfg),
            "inj": lambda: _cmd_inj(doc, args),
            "theorems": lambda: _cmd_theorems(doc, args, cfg),
        }[args.command]
        try:
            result = body()
        except ModcritError as exc:
            if isinstance(exc, FixtureError):
                raise
            result = {"status": exc.code, **exc.as_dict()}
        report = build_report(echo, doc, result)
    if args.timing:
        report["timing"] = {"wall_seconds": round(time.perf_counter() - t0, 6)}
    report["_format"] = args.format
    report["_out"] = args.out
    return report


def _validation_ok(report: dict) -> bool:
    result = report.get("result", {})
    if isinstance(result, dict) and "files" in result:
        return bool(result.get("ok"))
    return True


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        report = execute(argv)
    except SystemExit as exc:  # argparse
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    except FixtureError as exc:
        print(f"modcrit: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"modcrit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"modcrit: bad argument: {exc}", file=sys.stderr)
        return EXIT_USAGE
    fmt = report.pop("_format")
    out = report.pop("_out")
    text = render(jsonable(report), fmt)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if _validation_ok(report) else EXIT_EXPECTATION


if __name__ == "__main__":
    sys.exit(main())
