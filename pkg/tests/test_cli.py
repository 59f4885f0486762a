import io
import json

import pytest

from ngspread.cli import execute, parse_invocation
from ngspread.errors import EXIT_FINDING, EXIT_OK, EXIT_USAGE
from ngspread.models import OutputFormat, Subcommand
from ngspread.services.reporting import format_number, render_csv


def run(argv):
    out = io.StringIO()
    code = execute(parse_invocation(argv), stdout=out)
    return code, out.getvalue()


class TestParsing:
    def test_verify_ng(self):
        inv = parse_invocation(["verify-ng", "--n", "6", "--jobs", "2"])
        assert inv.subcommand == Subcommand.VERIFY_NG
        assert inv.flags == {"n": 6, "allow_n8": False, "full_scan": False}
        assert inv.jobs == 2
        assert inv.output == OutputFormat.JSON

    def test_graphon_subcheck_keeps_common_options(self):
        inv = parse_invocation(["graphon-check", "relation", "--n", "10", "--seed", "4", "--output", "csv"])
        assert inv.flags == {"check": "relation", "n": 10, "samples": 100}
        assert inv.seed == 4
        assert inv.output == OutputFormat.CSV

    @pytest.mark.parametrize(
        "argv",
        [
            ["verify-ng", "--n", "99"],
            ["verify-ng", "--n", "8"],
            ["verify-qspread", "--n", "2"],
            ["bound-table", "--n-min", "9", "--n-max", "3"],
            ["search-local", "--mode", "qspread", "--n", "8", "--clone"],
            ["search-local", "--mode", "ng", "--n", "8", "--starts", "0"],
            ["graphon-check", "trend", "--orders", "6", "7"],
            ["diag", "--graph", "missing.g6"],
            ["bound-table", "--n-min", "3", "--n-max", "9", "--jobs", "0"],
            ["no-such-command"],
        ],
    )
    def test_usage_errors_exit_2(self, argv):
        with pytest.raises(SystemExit) as excinfo:
            parse_invocation(argv)
        assert excinfo.value.code == 2


class TestFormatting:
    @pytest.mark.parametrize(
        "value,expected",
        [
            (1e-12, "0"),
            (-3e-10, "0"),
            (6.372281323269014, "6.37228132"),
            (7, "7"),
            (True, "true"),
            (None, ""),
            ([1, 2], "1;2"),
        ],
    )
    def test_format_number(self, value, expected):
        assert format_number(value) == expected

    def test_render_csv_column_order(self):
        text = render_csv([{"a": 1, "b": 0.5}], columns=["b", "a"])
        assert text == "b,a\n0.5,1\n"


class TestRuns:
    def test_bound_table_csv(self):
        code, text = run(["bound-table", "--n-min", "3", "--n-max", "9", "--output", "csv"])
        lines = text.splitlines()
        assert code == EXIT_OK
        assert lines[0] == "n,residue,bound,omega_star,p_cs,gap"
        assert len(lines) == 8
        assert all(line.endswith(",0") for line in lines[1:])
        assert lines[3].startswith("5,2,5,1;2,")

    def test_bound_table_json_header(self):
        code, text = run(["bound-table", "--n-min", "5", "--n-max", "6", "--seed", "9"])
        document = json.loads(text)
        assert code == EXIT_OK
        assert document["header"]["subcommand"] == "bound-table"
        assert document["header"]["seed"] == 9
        assert document["header"]["flags"] == {"n_max": 6, "n_min": 5}
        assert [row["n"] for row in document["report"]] == [5, 6]

    def test_verify_ng(self):
        code, text = run(["verify-ng", "--n", "5"])
        report = json.loads(text)["report"]
        assert code == EXIT_OK
        assert report["holds"] is True
        assert report["result"]["best_value"] == pytest.approx(5.0, abs=1e-9)

    def test_verify_qspread(self):
        code, text = run(["verify-qspread", "--n", "6", "--output", "csv"])
        assert code == EXIT_OK
        assert text.startswith("check,n,best_value")
        assert "qspread_max" in text and "qspread_min" in text

    def test_output_does_not_depend_on_jobs(self):
        _, single = run(["verify-ng", "--n", "5", "--jobs", "1"])
        _, double = run(["verify-ng", "--n", "5", "--jobs", "2"])
        assert single == double

    def test_search_local(self):
        code, text = run(["search-local", "--mode", "ng", "--n", "7", "--starts", "3", "--seed", "2"])
        summary = json.loads(text)["report"]
        assert code == EXIT_OK
        assert summary["starts"] == 3
        assert summary["within_bound"] is True
        assert summary["traces"] == []

    def test_diag(self, tmp_path):
        path = tmp_path / "k4.g6"
        path.write_text("C~\n")
        code, text = run(["diag", "--graph", str(path), "--epsilon", "0.2"])
        report = json.loads(text)["report"]
        assert code == EXIT_OK
        assert report["n"] == 4
        assert report["partition"]["epsilon"] == 0.2
        assert report["q_spectrum"] == pytest.approx([6.0, 2.0, 2.0, 2.0], abs=1e-9)

    def test_theorem34(self):
        code, text = run(["graphon-check", "theorem34", "--output", "csv"])
        assert code == EXIT_OK
        assert "mu,0.666666667" in text

    def test_relation_sweep(self):
        code, text = run(["graphon-check", "relation", "--n", "8", "--samples", "3", "--output", "csv"])
        lines = text.splitlines()
        assert code == EXIT_OK
        assert lines[0] == "n,mu,n_mu,lambda1,gap"
        assert len(lines) == 4

    def test_relation_gap_is_reported_as_finding(self, monkeypatch):
        monkeypatch.setattr("ngspread.cli.RELATION_TOL", -1.0)
        code, text = run(["graphon-check", "relation", "--n", "8", "--samples", "3", "--output", "csv"])
        assert code == EXIT_FINDING
        assert text.splitlines()[0] == "n,mu,n_mu,lambda1,gap"

    def test_cutnorm_files(self, tmp_path):
        u = tmp_path / "u.json"
        w = tmp_path / "w.json"
        u.write_text(json.dumps({"m": [0.5, 0.5], "values": [[0, 1], [1, 0]]}))
        w.write_text(json.dumps({"m": [1.0], "values": [[0.5]]}))
        code, text = run(["graphon-check", "cutnorm", str(u), str(w)])
        report = json.loads(text)["report"]
        assert code == EXIT_OK
        assert report["cut_norm"]["value"] == pytest.approx(0.125, abs=1e-12)
        assert report["delta_cut"]["upper_bound"] is True

    def test_invalid_graphon_writes_nothing(self, tmp_path):
        u = tmp_path / "u.json"
        u.write_text(json.dumps({"m": [0.5, 0.6], "values": [[0, 1], [1, 0]]}))
        out = io.StringIO()
        code = execute(parse_invocation(["graphon-check", "cutnorm", str(u), str(u)]), stdout=out)
        assert code == EXIT_USAGE
        assert out.getvalue() == ""
