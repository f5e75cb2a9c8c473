"""CLI: document parsing, subcommands, formats, exit codes, round trips."""

import json

import numpy as np
import pytest

from netequil import cli
from netequil.demos import DEMO_NAMES, demo_network, run_demo
from netequil.document import (
    DocumentError,
    dumps_document,
    loads_document,
    network_to_document,
    parse_document,
)
from netequil.solver import solve_tarski, ABOVE


RING_DOC = {
    "schema_version": "1",
    "n": 2,
    "W": [[0.0, 1.0], [1.0, 0.0]],
    "shock": [1.0, -1.0],
    "functions": [
        {"kind": "clamped_affine", "lower": -2.0, "upper": 2.0},
        {"kind": "clamped_affine", "lower": -2.0, "upper": 2.0},
    ],
}


@pytest.fixture
def ring_file(tmp_path):
    path = tmp_path / "ring.json"
    path.write_text(json.dumps(RING_DOC))
    return str(path)


@pytest.fixture
def io_file(tmp_path):
    path = tmp_path / "io.json"
    path.write_text(json.dumps({
        "schema_version": "1",
        "model": {"family": "input_output",
                  "W": [[0.0, 0.3], [0.2, 0.1]],
                  "final_demand": [1.0, 2.0]},
    }))
    return str(path)


class TestDocument:
    def test_parse_explicit(self):
        net = parse_document(RING_DOC)
        assert net.n == 2
        assert net.functions[0].upper == 2.0

    def test_round_trip_is_exact(self):
        net = parse_document(RING_DOC)
        again = loads_document(dumps_document(network_to_document(net)))
        assert np.array_equal(net.w, again.w)
        assert np.array_equal(net.shock, again.shock)
        assert net.functions == again.functions

    def test_rejects_bad_schema_version(self):
        with pytest.raises(DocumentError):
            parse_document({**RING_DOC, "schema_version": "2"})

    def test_rejects_nan(self):
        text = json.dumps(RING_DOC).replace("-1.0", "NaN", 1)
        with pytest.raises(DocumentError):
            loads_document(text)

    def test_rejects_model_and_explicit_together(self):
        doc = {**RING_DOC,
               "model": {"family": "input_output", "W": [[0.0]],
                         "final_demand": [1.0]}}
        with pytest.raises(DocumentError):
            parse_document(doc)

    def test_rejects_dimension_mismatch(self):
        with pytest.raises(DocumentError):
            parse_document({**RING_DOC, "shock": [1.0]})
        with pytest.raises(DocumentError):
            parse_document({**RING_DOC, "n": 3})

    def test_rejects_unknown_family(self):
        with pytest.raises(DocumentError):
            parse_document({"schema_version": "1",
                            "model": {"family": "nope"}})

    def test_unbounded_clamps_serialise_as_null(self):
        from netequil.netmodel import build_network, InputOutput
        net = build_network(InputOutput(w=[[0.5]], final_demand=[1.0]))
        doc = network_to_document(net)
        assert doc["functions"][0]["lower"] is None
        assert "NaN" not in dumps_document(doc)


class TestCommands:
    def test_solve_json_single_object(self, ring_file, capsys):
        assert cli.main(["solve", ring_file, "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["method"] == "algorithm1"
        assert payload["residual"] <= 1e-9

    def test_solve_explicit_method(self, ring_file, capsys):
        assert cli.main(["solve", ring_file, "--method", "tarski-above",
                         "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["x"] == [2.0, 1.0]

    def test_auto_falls_back_to_tarski(self, tmp_path, capsys):
        # noncontracting and not stochastic: auto resolves to tarski-above
        doc = {
            "schema_version": "1",
            "W": [[0.0, 2.0], [0.5, 0.0]],
            "shock": [0.1, 0.1],
            "functions": [{"kind": "clamped_affine", "lower": 0.0,
                           "upper": 2.0}] * 2,
        }
        path = tmp_path / "wa.json"
        path.write_text(json.dumps(doc))
        assert cli.main(["solve", str(path), "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["method"] == "tarski_above"

    def test_solve_with_initial_guess_and_budget(self, io_file, capsys):
        assert cli.main(["solve", io_file, "--method", "banach",
                         "--x0=0.5,0.5", "--max-iter", "500",
                         "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["residual"] <= 1e-9

    def test_classify_text(self, io_file, capsys):
        assert cli.main(["classify", io_file]) == 0
        out = capsys.readouterr().out
        assert "classification.contracting: True" in out
        assert "certificate.kind: contraction" in out

    def test_probe_reports_certificate(self, ring_file, capsys):
        assert cli.main(["probe", ring_file, "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["probe"]["scc"] == [1, 2]

    def test_probe_unique(self, io_file, capsys):
        # contracting networks are rejected by the probe's precondition
        assert cli.main(["probe", io_file]) == 3

    def test_enumerate(self, ring_file, capsys):
        assert cli.main(["enumerate", ring_file, "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["points"] == []
        assert len(payload["families"]) == 1

    def test_keyplayer(self, io_file, capsys):
        assert cli.main(["keyplayer", io_file, "--alpha", "0.5",
                         "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["impact"]["key_player"] in (1, 2)
        assert len(payload["katz_hub"]) == 2

    def test_rate_discrete(self, ring_file, capsys):
        assert cli.main(["rate", ring_file, "--sampler", "discrete",
                         "--trials", "100", "--seed", "9",
                         "--support=1,-1", "--support=-1,1",
                         "--support=1,1", "--support=-1,-1",
                         "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert 0.3 <= payload["rate"] <= 0.7
        assert payload["generator"] == "xorshift64*"

    def test_rate_continuous_default_box(self, ring_file, capsys):
        assert cli.main(["rate", ring_file, "--sampler", "continuous",
                         "--trials", "100", "--seed", "4",
                         "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["rate"] == 0.0

    def test_csv_has_fixed_header(self, ring_file, capsys):
        assert cli.main(["solve", ring_file, "--format", "csv"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "key,index,value"
        assert any(line.startswith("x,1,") for line in lines)

    def test_csv_quotes_values_with_commas(self, capsys):
        import csv as csvmod
        import io
        assert cli.main(["demo", "comparative-a", "--format", "csv"]) == 0
        rows = list(csvmod.reader(io.StringIO(capsys.readouterr().out)))
        assert rows[0] == ["key", "index", "value"]
        assert all(len(r) == 3 for r in rows)

    def test_diagnostics_never_pollute_stdout(self, capsys):
        assert cli.main(["solve", "/nonexistent.json"]) == 1
        captured = capsys.readouterr()
        assert captured.out == ""
        assert "cannot read" in captured.err


class TestExitCodes:
    def test_missing_file_is_usage_error(self):
        assert cli.main(["solve", "/nonexistent.json"]) == 1

    def test_unknown_demo_is_usage_error(self, capsys):
        assert cli.main(["demo", "not-a-demo"]) == 1

    def test_bad_flags_are_usage_errors(self, capsys):
        assert cli.main(["solve"]) == 1
        assert cli.main(["definitely-not-a-command"]) == 1

    def test_solver_error_exit(self, ring_file, capsys):
        # banach on a noncontracting network
        assert cli.main(["solve", ring_file, "--method", "banach"]) == 2

    def test_precondition_exit(self, tmp_path, capsys):
        doc = {
            "schema_version": "1",
            "model": {"family": "input_output",
                      "W": [[0.5]], "final_demand": [1.0]},
        }
        path = tmp_path / "io1.json"
        path.write_text(json.dumps(doc))
        # identity responses are unbounded: enumeration precondition fails
        assert cli.main(["enumerate", str(path)]) == 3


class TestDemos:
    @pytest.mark.parametrize("name", DEMO_NAMES)
    def test_all_demos_pass(self, name, capsys):
        assert cli.main(["demo", name, "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["passed"] is True

    def test_seven_node_matches_printed_values(self, capsys):
        assert cli.main(["demo", "seven-node", "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        printed = [2.857e-5, 2.143e-5, 0.0, 8.0, 8.00003, 0.0, 0.0]
        got = payload["report"]["x"]
        assert np.max(np.abs(np.array(got) - printed)) <= 1e-4

    def test_comparative_c_matches_printed_values(self, capsys):
        assert cli.main(["demo", "comparative-c", "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert np.max(np.abs(np.array(payload["report"]["x"])
                             - [0.2, 0.0, 0.7579, 1.0421])) <= 1e-4

    @pytest.mark.parametrize("name", DEMO_NAMES)
    def test_round_trip_solves_identically(self, name):
        # serialize -> re-parse -> re-solve must reproduce bit for bit
        net = demo_network(name)
        again = loads_document(dumps_document(network_to_document(net)))
        assert np.array_equal(net.w, again.w)
        assert np.array_equal(net.shock, again.shock)
        first = solve_tarski(net, ABOVE, tol=1e-9)
        second = solve_tarski(again, ABOVE, tol=1e-9)
        assert np.array_equal(first.x, second.x)
        assert first.residual == second.residual
        assert first.iterations == second.iterations

    def test_run_demo_rejects_unknown(self):
        with pytest.raises(KeyError):
            run_demo("bogus")
