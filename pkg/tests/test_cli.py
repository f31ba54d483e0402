import json

import pytest

from kisin_cli import build_parser, main, parse_height, parse_word
from kisinlab.module_file import load_module, matrix_literals
from kisinlab.simple import SimpleSeq, build_module

M21 = {"p": 2, "e": 1, "r": 3, "rank": 2, "matrix": [["0", "u"], ["u^2", "0"]]}
UNIT = {"p": 2, "e": 1, "r": 1, "rank": 1, "matrix": [["1"]]}

pytestmark = pytest.mark.integration


@pytest.fixture
def m21_file(tmp_path):
    path = tmp_path / "m21.json"
    path.write_text(json.dumps(M21), encoding="utf-8")
    return str(path)


@pytest.fixture
def unit_file(tmp_path):
    path = tmp_path / "unit.json"
    path.write_text(json.dumps(UNIT), encoding="utf-8")
    return str(path)


def run_json(capsys, argv):
    code = main(argv)
    return code, json.loads(capsys.readouterr().out)


class TestArgumentTypes:
    def test_parse_height(self):
        assert parse_height("inf") is None
        assert parse_height("3") == 3

    def test_parse_word(self):
        assert parse_word("2,1") == [2, 1]
        assert parse_word("2, 1, 0") == [2, 1, 0]

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as info:
            build_parser().parse_args(["--version"])
        assert info.value.code == 0
        assert "kisinlab" in capsys.readouterr().out

    def test_no_command(self, capsys):
        assert main([]) == 2


class TestModuleCommands:
    def test_validate(self, capsys, m21_file):
        assert main(["validate", m21_file]) == 0
        out = capsys.readouterr().out
        assert "[ok  ] height" in out

    def test_validate_failure(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(dict(M21, r=1)), encoding="utf-8")
        code, data = run_json(capsys, ["validate", str(path), "--json"])
        assert code == 1
        assert data["passed"] is False
        assert data["checks"][-1]["witness"] == 2

    def test_max(self, capsys, m21_file):
        code, data = run_json(capsys, ["max", m21_file, "--json"])
        assert code == 0
        assert data["method"] == "closed_form"
        assert data["unchanged"] is False
        assert data["module"]["matrix"] == [["0", "1"], ["u", "0"]]
        assert data["inclusion"] == [["u", "0"], ["0", "u"]]

    def test_min_to_file(self, capsys, m21_file, tmp_path):
        target = tmp_path / "min.json"
        assert main(["min", m21_file, "-o", str(target)]) == 0
        assert "# Min^r by closed_form" in capsys.readouterr().out
        assert load_module(target) == build_module(SimpleSeq.create((3, 2), p=2, r=3))

    def test_max_of_invalid_module(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(dict(M21, r=1)), encoding="utf-8")
        assert main(["max", str(path)]) == 1

    def test_dual(self, capsys, m21_file):
        code, data = run_json(capsys, ["dual", m21_file, "--json"])
        assert code == 0
        assert data["matrix"] == [["0", "u^2"], ["u", "0"]]

    def test_hom_iso(self, capsys, m21_file):
        code, data = run_json(capsys, ["hom", m21_file, m21_file, "--iso", "--json"])
        assert code == 0
        assert data["dimension"] == 1
        assert data["isomorphism"]["status"] == "isomorphic"

    def test_poset(self, capsys, unit_file, tmp_path):
        dot = tmp_path / "fr.dot"
        table = tmp_path / "fr.csv"
        assert main(["poset", unit_file, "--dot", str(dot), "--csv", str(table)]) == 0
        assert "F^r: 2 lattices" in capsys.readouterr().out
        assert dot.read_text(encoding="utf-8").startswith("digraph Fr {")
        assert len(table.read_text(encoding="utf-8").splitlines()) == 3

    def test_malformed_file(self, capsys, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        assert main(["validate", str(path)]) == 2

    def test_missing_file(self, capsys, tmp_path):
        assert main(["validate", str(tmp_path / "absent.json")]) == 2

    def test_relative_output_goes_to_output_dir(self, capsys, m21_file, tmp_path):
        config = tmp_path / "cfg.json"
        config.write_text(json.dumps({"output_dir": str(tmp_path / "results")}), encoding="utf-8")
        assert main(["dual", m21_file, "-o", "dual.json", "--config", str(config)]) == 0
        written = tmp_path / "results" / "dual.json"
        assert matrix_literals(load_module(written).frob) == [["0", "u^2"], ["u", "0"]]

    def test_config_problems_are_reported(self, capsys, tmp_path):
        config = tmp_path / "cfg.json"
        config.write_text("{", encoding="utf-8")
        assert main(["repro", "--list", "--config", str(config)]) == 0
        assert "malformed config file" in capsys.readouterr().err


class TestSimpleCommand:
    def test_info(self, capsys):
        code, data = run_json(capsys, ["simple", "--n", "2,1", "--p", "2", "--r", "3", "--json"])
        assert code == 0
        assert data["s"] == [5, 4]
        assert data["t"] == ["2/3", "1/3"]
        assert data["in_S"] is True

    def test_max(self, capsys):
        code, data = run_json(capsys, ["simple", "--n", "2,1", "--p", "2", "--r", "3", "--max", "--json"])
        assert data == {"n": [2, 1], "max": [1, 0], "q": [1, 1]}

    def test_min(self, capsys):
        code, data = run_json(capsys, ["simple", "--n", "2,1", "--p", "2", "--r", "3", "--min", "--json"])
        assert data["min"] == [3, 2]
        assert data["q"] == [-1, -1]

    def test_iso(self, capsys):
        code, data = run_json(capsys, ["simple", "--n", "2,1", "--p", "2", "--r", "3", "--iso", "1,2", "--json"])
        assert data["isomorphic"] is True
        assert data["shift"] == 1

    def test_iso_outside_s(self, capsys):
        assert main(["simple", "--n", "2,1", "--p", "2", "--r", "3", "--iso", "3,0"]) == 1

    def test_entries_above_height(self, capsys):
        assert main(["simple", "--n", "4,1", "--p", "2", "--r", "3"]) == 2

    def test_table(self, capsys):
        assert main(["simple", "--n", "0", "--p", "2", "--r", "1", "--table", "2"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("n,d,s,t")
        assert len(lines) == 5

    def test_table_needs_finite_height(self, capsys):
        assert main(["simple", "--n", "0", "--p", "2", "--r", "inf", "--table", "2"]) == 2

    def test_module(self, capsys):
        assert main(["simple", "--n", "2,1", "--p", "2", "--r", "3", "--module"]) == 0
        assert '"rank": 2' in capsys.readouterr().out


class TestRepro:
    def test_list(self, capsys):
        assert main(["repro", "--list"]) == 0
        assert "quotient-not-maximal" in capsys.readouterr().out

    def test_unknown(self, capsys):
        assert main(["repro", "nope"]) == 2

    def test_run(self, capsys):
        code, data = run_json(capsys, ["repro", "max-r-vs-r-plus-1", "--json"])
        assert code == 0
        assert data["passed"] is True
