import json

import pytest
from click.testing import CliRunner

from c4lab.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def r2_file(tmp_path):
    path = tmp_path / "r2.json"
    path.write_text(json.dumps({"construct": "poly_quotient", "p": 2, "f": [0, 0, 1]}))
    return str(path)


@pytest.fixture()
def mixed_module_file(tmp_path):
    path = tmp_path / "mixed.json"
    path.write_text(json.dumps({
        "ring": {"construct": "poly_quotient", "p": 2, "f": [0, 0, 1]},
        "construct": "direct_sum",
        "parts": [{"construct": "regular"},
                  {"dim": 1, "action": [[[1]], [[0]]], "name": "S"}],
        "name": "R+S",
    }))
    return str(path)


def test_analyze_ring_mode(runner, r2_file, tmp_path):
    out = tmp_path / "report.json"
    result = runner.invoke(main, ["analyze", r2_file, "--ring", "--out", str(out)])
    assert result.exit_code == 0, result.output
    assert "C4      true" in result.output
    assert "strong  true" in result.output
    assert "ring scan" in result.output
    payload = json.loads(out.read_text())
    assert payload["kind"] == "defect-report"
    assert payload["flags"] == {"C4": True, "C4star": True, "swCS": True,
                                "strong": True}
    assert payload["obstruction_index"] == "infinity"
    assert payload["ring_scan"]["all_ideals_c4"] is True
    assert payload["guards"]["max_lattice_vectors"] == 2 ** 16


def test_analyze_module_with_defects(runner, mixed_module_file, tmp_path):
    out = tmp_path / "report.json"
    result = runner.invoke(main, ["analyze", mixed_module_file, "--out", str(out)])
    assert result.exit_code == 0, result.output
    payload = json.loads(out.read_text())
    assert payload["flags"]["C4"] is False
    assert payload["def_c4"]["count"] > 0
    assert len(payload["def_c4"]["shape_classes"]) == 1
    assert payload["decomposition_certificate"] is None


def test_analyze_is_byte_deterministic(runner, mixed_module_file, tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    r1 = runner.invoke(main, ["analyze", mixed_module_file, "--out", str(out1)])
    r2 = runner.invoke(main, ["analyze", mixed_module_file, "--out", str(out2)])
    assert r1.exit_code == 0 and r2.exit_code == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert r1.output == r2.output


def test_analyze_extension_grid(runner, r2_file):
    result = runner.invoke(main, ["analyze", r2_file, "--ring",
                                  "--extensions", "2,1;3,2"])
    assert result.exit_code == 0, result.output
    assert "extension m=2 d=1" in result.output
    assert "extension m=3 d=2" in result.output


def test_analyze_guard_override(runner, mixed_module_file, tmp_path):
    guards = tmp_path / "guards.json"
    guards.write_text(json.dumps({"max_lattice_vectors": 2}))
    result = runner.invoke(main, ["analyze", mixed_module_file,
                                  "--guards", str(guards)])
    assert result.exit_code == 0
    assert "PARTIAL" in result.output


def test_morita_matrix(runner, mixed_module_file, tmp_path):
    out = tmp_path / "cmp.json"
    result = runner.invoke(main, ["morita", mixed_module_file, "--matrix", "2",
                                  "--out", str(out)])
    assert result.exit_code == 0, result.output
    payload = json.loads(out.read_text())
    assert payload["kind"] == "morita-comparison"
    assert payload["violations"] == 0
    conditions = {row["condition"] for row in payload["rows"]}
    assert {"C4", "C4star", "swCS", "strong", "iota"} <= conditions


def test_morita_corner_on_matrix_ring(runner, tmp_path):
    mod = tmp_path / "m2reg.json"
    mod.write_text(json.dumps({
        "ring": {"construct": "matrix", "base": {"construct": "field", "p": 2},
                 "n": 2},
        "construct": "regular",
    }))
    result = runner.invoke(main, ["morita", str(mod), "--corner", "1,0,0,0",
                                  "--conditions", "strong"])
    assert result.exit_code == 0, result.output
    assert "THEOREM VIOLATION" not in result.output


def test_morita_rejects_non_full_corner(runner, tmp_path):
    mod = tmp_path / "ffreg.json"
    mod.write_text(json.dumps({
        "ring": {"construct": "product",
                 "parts": [{"construct": "field", "p": 2},
                           {"construct": "field", "p": 2}]},
        "construct": "regular",
    }))
    result = runner.invoke(main, ["morita", str(mod), "--corner", "1,0"])
    assert result.exit_code == 2
    assert "not full" in result.output
    assert "dimension 1" in result.output  # the span deficiency is printed


def test_morita_requires_one_realization(runner, mixed_module_file):
    result = runner.invoke(main, ["morita", mixed_module_file])
    assert result.exit_code == 2
    result = runner.invoke(main, ["morita", mixed_module_file,
                                  "--matrix", "2", "--corner", "0"])
    assert result.exit_code == 2


def test_suite_filter(runner, tmp_path):
    out = tmp_path / "suite.json"
    result = runner.invoke(main, ["suite", "--filter", "ring-level",
                                  "--out", str(out)])
    assert result.exit_code == 0, result.output
    payload = json.loads(out.read_text())
    assert payload["kind"] == "suite-summary"
    assert payload["failures"] == 0
    assert payload["total"] >= 4
    assert all("ring-level" in c["name"] for c in payload["checks"])


def test_bad_input_exit_code(runner, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"construct": "field", "p": 4}))
    result = runner.invoke(main, ["analyze", str(bad), "--ring"])
    assert result.exit_code == 2
    assert "prime" in result.output
