from importlib import resources
from pathlib import Path

import pytest

from modcrit.fixture_io import load
from modcrit.groebner import clear_memory_cache, configure_cache

CORPUS = Path(str(resources.files("modcrit") / "corpus"))
MUTATIONS = CORPUS / "mutations"

_docs: dict = {}


def corpus(name: str):
    """Corpus fixtures are immutable documents, so one load per session is enough."""
    if name not in _docs:
        _docs[name] = load(CORPUS / f"{name}.fx")
    return _docs[name]


@pytest.fixture(autouse=True)
def _no_disk_cache(monkeypatch):
    monkeypatch.delenv("MODCRIT_CACHE", raising=False)
    configure_cache(None)
    yield
    configure_cache(None)


@pytest.fixture
def fresh_cache(tmp_path):
    clear_memory_cache()
    configure_cache(tmp_path / "gb")
    yield tmp_path / "gb"
    configure_cache(None)


CRITERIA = {
    1: "Groebner kernel soundness",
    2: "flatness equivalence suite",
    3: "non-reduced necessity regression",
    4: "Kunz/regularity suite",
    5: "pushforward cross-check",
    6: "constructive divisibility witnesses",
    7: "duality dictionary coherence",
    8: "Ass contraction on a finite map",
    9: "torsion-freeness and embedded primes",
    10: "determinism and cache",
}
_outcomes: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")
    config.addinivalue_line("markers", "acceptance: acceptance suite")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n = mark.args[0]
    if call.when == "call" or (call.when == "setup" and call.excinfo is not None):
        _outcomes.setdefault(n, []).append(call.excinfo is None)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in CRITERIA.items():
        runs = _outcomes.get(n)
        if runs is None:
            status = "NOT RUN"
        else:
            status = "PASS" if all(runs) else "FAIL"
        terminalreporter.write_line(f"criterion {n:>2} {status:<7} {title} ({len(runs or [])} checks)")
