import json
import subprocess
import sys

import pytest

from diffsym.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def call_json(capsys, *argv):
    code, out, _ = call(capsys, *argv, "--json")
    return code, json.loads(out)


@pytest.fixture
def field_file(tmp_path):
    def make(text):
        p = tmp_path / "field.txt"
        p.write_text(text)
        return str(p)
    return make


class TestParse:
    def test_fixture(self, capsys):
        code, rep = call_json(capsys, "parse", "rouchon")
        assert code == 0 and rep["schema"] == 1 and rep["command"] == "parse"
        assert rep["system"]["free"] == ["x1", "x2"] and rep["validation"]["passed"]

    def test_explicit_file(self, capsys, tmp_path):
        p = tmp_path / "s.sys"
        p.write_text("system E; controls u; eq x' = u^2; eq y' = u;")
        code, rep = call_json(capsys, "parse", str(p))
        assert code == 0 and rep["system"]["equations"] == {"x'": "y'^2"}

    def test_garbage(self, capsys, tmp_path):
        p = tmp_path / "garbage.sys"
        p.write_text("system S; free x;\neq x' = = 1;\n")
        code, out, err = call(capsys, "parse", str(p))
        assert code == 1 and "line 2" in err and "column" in err

    def test_garbage_json(self, capsys, tmp_path):
        p = tmp_path / "garbage.sys"
        p.write_text("system S free x;")
        code, rep = call_json(capsys, "parse", str(p))
        assert code == 1 and rep["error"]["line"] == 1 and rep["error"]["column"] > 0

    def test_missing_file(self, capsys):
        code, _, err = call(capsys, "parse", "/nonexistent/none.sys")
        assert code == 1 and err


class TestCommands:
    def test_accessibility(self, capsys):
        code, rep = call_json(capsys, "accessibility", "square_explicit")
        assert code == 0 and rep["accessibility"]["lie_algebra_dim"] == 3 and rep["accessibility"]["accessible"]

    def test_not_accessible_basis(self, capsys):
        code, _, _ = call(capsys, "linearize-basis", "decoupled")
        assert code == 1

    def test_basis(self, capsys):
        code, rep = call_json(capsys, "linearize-basis", "brunovsky")
        assert code == 0 and rep["flat_basis"]["r"] == [4, 3, 3, 1] and rep["flat_basis"]["s"] == [1, 0, 2, 1]

    def test_rouchon_bound(self, capsys):
        code, rep = call_json(capsys, "rouchon-bound", "rouchon")
        assert code == 0 and rep["rouchon"]["verdict"] == "Branches" and len(rep["rouchon"]["branches"]) == 2

    def test_symmetries(self, capsys):
        code, out, _ = call(capsys, "symmetries", "translation", "--degree", "2")
        assert code == 0 and "dimension 1" in out

    def test_symmetries_complete(self, capsys):
        code, out, _ = call(capsys, "symmetries", "rouchon", "--order", "1", "--degree", "1", "--complete")
        assert code == 0 and "completed:" in out
        assert "    d[x2,x2]a2 = 0" in out and "    d[x2]a1 = 0" in out and "    d[x1]a2 = 0" in out

    def test_check_integrable(self, capsys, field_file):
        f = field_file("a1 = x2';\n")
        code, rep = call_json(capsys, "check-integrable", "torus2", "--field", f, "--cap", "6")
        assert code == 0 and rep["check"]["integrability"]["status"] == "IntegrableEvidence"

    def test_check_integrable_sum(self, capsys, field_file):
        f = field_file("a1 = x2'; a2 = x1';\n")
        code, rep = call_json(capsys, "check-integrable", "torus2", "--field", f, "--cap", "8")
        assert code == 0 and rep["check"]["integrability"]["status"] == "NotIntegrable"

    def test_verify_flow(self, capsys, field_file):
        f = field_file("a1 = x1; a3 = x3;")
        code, rep = call_json(capsys, "verify-flow", "rouchon", "--field", f, "--point",
                              '{"x1": 1, "x2": 2, "x3": 0.5}', "--s", "0.3")
        assert code == 0 and rep["flow"]["group_law"]["passed"] and rep["flow"]["passed"]

    def test_closure_cap_exit_code(self, capsys, field_file):
        f = field_file("a1 = x'';")
        code, _, _ = call(capsys, "verify-flow", "torus1", "--field", f, "--point", '{"x": 1}')
        assert code == 2

    def test_analyze_rouchon(self, capsys):
        code, rep = call_json(capsys, "analyze", "rouchon")
        assert code == 0
        assert rep["symmetries"]["ansatzes"][0]["symmetries"]["dimension"] == 5

    def test_analyze_square(self, capsys):
        code, out, _ = call(capsys, "analyze", "square")
        assert code == 0 and "order 0" in out and "dimension 3" in out

    def test_timing_optional(self, capsys):
        _, rep = call_json(capsys, "parse", "rouchon")
        assert "timing" not in rep
        _, rep = call_json(capsys, "parse", "rouchon", "--timing")
        assert rep["timing"]["seconds"] >= 0


def test_byte_identical_json():
    cmd = [sys.executable, "-m", "diffsym", "analyze", "rouchon", "--json", "--seed", "3"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a.startswith(b"{")
