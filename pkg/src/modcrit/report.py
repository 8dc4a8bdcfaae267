"""Run reports: deterministic JSON, a table view, and ordered parallel rows."""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager

from . import __version__
from .modules import Module
from .polynomials import Poly
from .rings import Ideal
from .verdicts import ModcritError

__all__ = ["SCHEMA", "jsonable", "render", "build_report", "run_rows", "Timer", "error_row"]

SCHEMA = "modcrit-report/1"


def jsonable(obj):
    """Plain JSON data; keys starting with ``_`` are internal and dropped."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items() if not str(k).startswith("_")}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(jsonable(v) for v in obj)
    if isinstance(obj, (Poly, Ideal)):
        return str(obj)
    if isinstance(obj, Module):
        return {"rank": obj.rank, "relations": [[str(f) for f in col] for col in obj.relations]}
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if hasattr(obj, "as_dict"):
        return jsonable(obj.as_dict())
    return str(obj)


def error_row(exc: ModcritError) -> dict:
    return {"status": exc.code, **jsonable(exc.as_dict())}


def build_report(command: list, doc, result, timing: dict | None = None) -> dict:
    out = {
        "schema": SCHEMA,
        "engine": f"modcrit {__version__}",
        "command": list(command),
    }
    if doc is not None:
        out["fixture"] = {
            "name": doc.name,
            "file": os.path.basename(doc.path) if doc.path else None,
            "digest": doc.digest,
            "hypotheses": dict(sorted(doc.fixture.validation.hypotheses.items())),
        }
    out["result"] = jsonable(result)
    if timing is not None:
        out["timing"] = timing
    return out


def _flatten(prefix: str, value, rows: list) -> None:
    if isinstance(value, dict) and value:
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, rows)
    elif isinstance(value, list) and value and any(isinstance(v, (dict, list)) for v in value):
        for i, v in enumerate(value):
            _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, json.dumps(value, ensure_ascii=False)))


def render(report: dict, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, ensure_ascii=False) + "\n"
    if fmt == "table":
        rows: list = []
        _flatten("", report, rows)
        width = max((len(k) for k, _ in rows), default=0)
        return "".join(f"{k.ljust(width)}  {v}\n" for k, v in rows)
    raise ValueError(f"unknown format {fmt!r}")


def run_rows(tasks, workers: int = 1) -> list:
    """Evaluate ``(name, thunk)`` pairs; results come back in declared order.

    A thunk raising ModcritError yields an error row instead of aborting.
    """

    def call(task):
        name, thunk = task
        try:
            return name, thunk()
        except ModcritError as exc:
            return name, error_row(exc)

    tasks = list(tasks)
    if workers <= 1 or len(tasks) <= 1:
        return [call(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(call, tasks))


class Timer:
    def __init__(self):
        self.sections: dict = {}

    @contextmanager
    def section(self, name: str):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.sections[name] = round(time.perf_counter() - t0, 6)
