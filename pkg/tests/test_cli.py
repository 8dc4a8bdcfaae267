import json

import pytest

from modcrit.cli import execute, main
from modcrit.groebner import clear_memory_cache

from conftest import CORPUS, MUTATIONS

NODE = str(CORPUS / "node.fx")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_flat_oracle_command(capsys):
    code, out, _ = run(capsys, "flat", NODE, "--module", "Mx", "--mode", "oracle")
    assert code == 0
    rep = json.loads(out)
    assert rep["schema"] == "modcrit-report/1"
    assert rep["command"] == ["flat", "node.fx", "--module", "Mx", "--mode", "oracle"]
    assert rep["fixture"]["name"] == "node" and rep["result"]["verdict"] == "not_flat"
    assert "timing" not in rep


def test_kunz_command(capsys):
    code, out, _ = run(capsys, "frob", "kunz", str(CORPUS / "cusp.fx"), "--e", "1", "--max", "m0")
    assert code == 0 and json.loads(out)["result"]["points"]["m0"]["verdict"] == "singular"


def test_flatred_command(capsys):
    code, out, _ = run(capsys, "theorems", "flatred", NODE, "--module", "Mx")
    assert code == 0 and json.loads(out)["result"]["consistent"] is True
    code, out, _ = run(capsys, "theorems", "flatred", NODE, "--module", "F2")
    rows = json.loads(out)["result"]["rows"]
    assert all(r["verdict"] for r in rows.values())


def test_frob_theorem_on_cusp(capsys):
    code, out, _ = run(capsys, "theorems", "frob", str(CORPUS / "cusp.fx"))
    res = json.loads(out)["result"]
    assert res["rows"]["a"]["verdict"] is False and res["rows"]["f"]["verdict"] is False and res["consistent"]


@pytest.mark.parametrize("tag,extra", [
    ("localization", ["--module", "My", "--W", "Wx"]),
    ("divred", ["--W", "Wx", "--c", "x", "--module", "Mx1"]),
    ("coasshom", ["--module", "F2"]),
    ("injred", ["--module", "Mxy"]),
])
def test_other_theorem_tags_run(capsys, tag, extra):
    code, out, err = run(capsys, "theorems", tag, NODE, *extra)
    assert code == 0, err
    assert json.loads(out)["result"]["tag"] == tag


def test_table_format_and_out_file(tmp_path, capsys):
    out = tmp_path / "r.txt"
    code, stdout, _ = run(capsys, "mod", NODE, "--module", "Mx", "--op", "ann", "--format", "table", "--out", str(out))
    assert code == 0 and stdout == ""
    assert "result.annihilator" in out.read_text()


def test_usage_errors_exit_2(capsys):
    assert run(capsys, "flat", NODE, "--module", "Nope", "--mode", "oracle")[0] == 2
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "gb", NODE, "--gens", "x +* y")[0] == 2
    assert run(capsys, "flat", str(CORPUS / "missing.fx"), "--module", "Mx")[0] == 2
    assert run(capsys, "flat", NODE, "--module", "Mx", "--workers", "0")[0] == 2


def test_parse_error_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.fx"
    bad.write_text("{\n  \"format\": 3,\n")
    code, _, err = run(capsys, "check", str(bad))
    # a broken file inside check is a failed check, single commands refuse to run
    assert code == 1
    assert run(capsys, "mod", str(bad), "--module", "R", "--op", "ann")[0] == 2


def test_undecidable_is_a_success(capsys):
    code, out, _ = run(capsys, "frob", "kunz", NODE)
    assert code == 0
    assert json.loads(out)["result"]["status"] == "HYPOTHESIS_VIOLATION"


def test_check_corpus_passes(capsys):
    files = sorted(str(p) for p in CORPUS.glob("*.fx"))
    code, out, _ = run(capsys, "check", *files)
    assert code == 0
    assert all(f["ok"] for f in json.loads(out)["result"]["files"])


@pytest.mark.parametrize("path", sorted(MUTATIONS.glob("*.fx")), ids=lambda p: p.name)
def test_mutations_fail_as_annotated(capsys, path):
    code, out, _ = run(capsys, "check", str(path))
    assert code == 1
    (entry,) = json.loads(out)["result"]["files"]
    assert entry["expect_failure"]["matched"], entry


def test_env_fallbacks(monkeypatch, tmp_path):
    monkeypatch.setenv("MODCRIT_CACHE", str(tmp_path / "c"))
    monkeypatch.setenv("MODCRIT_WORKERS", "4")
    clear_memory_cache()
    rep = execute(["theorems", "flatred", NODE, "--module", "Mx"])
    assert rep["result"]["consistent"]
    assert any((tmp_path / "c").iterdir())
    monkeypatch.setenv("MODCRIT_WORKERS", "many")
    assert main(["flat", NODE, "--module", "Mx", "--mode", "oracle"]) == 2


def test_timing_flag(capsys):
    code, out, _ = run(capsys, "flat", NODE, "--module", "Mx", "--mode", "oracle", "--timing")
    rep = json.loads(out)
    assert rep["timing"]["wall_seconds"] >= 0
    assert "--timing" not in rep["command"]


def test_workers_do_not_change_reports(capsys):
    outs = []
    for w in ("1", "8"):
        code, out, _ = run(capsys, "theorems", "flatred", str(CORPUS / "qxy.fx"), "--module", "Mx", "--workers", w)
        outs.append(out)
    assert outs[0] == outs[1]


def test_order_override(capsys):
    code, out, _ = run(capsys, "gb", str(CORPUS / "qxy.fx"), "--gens", "x^2 + y, x*y - 1", "--order", "lex")
    assert code == 0
    assert json.loads(out)["result"]["basis"] == ["x + y^2", "y^3 + 1"]


def test_version(capsys):
    assert main(["--version"]) == 0
    assert "modcrit" in capsys.readouterr().out
