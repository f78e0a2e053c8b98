"""End-to-end runs of the ``hsgeo`` command line."""
import json

import numpy as np
import pytest

from src.api.codecs import dump_json, operator_to_schema
from src.constants import TOOL_VERSION, ClosedFormValues, ExitCodes
from src.hs_pipeline.states import flip_operator, werner
from src.main import build_parser, main

pytestmark = pytest.mark.integration


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestAnalyze:
    def test_singlet_json(self, capsys):
        code, out, _ = run(capsys, "analyze", "werner:1.0", "--json")
        assert code == ExitCodes.SUCCESS
        payload = json.loads(out)
        assert payload["distance"]["distance"] == pytest.approx(0.577350269, abs=1e-6)
        assert payload["ppt"] is False
        assert payload["residual"] <= 1e-5
        assert payload["tool_version"] == TOOL_VERSION
        assert "timing_ms" in payload and payload["timing_ms"] is None

    def test_flags_before_subcommand(self, capsys):
        code, out, _ = run(capsys, "--json", "--seed", "4", "analyze", "werner:0.2")
        assert code == ExitCodes.SUCCESS
        payload = json.loads(out)
        assert payload["seed"] == 4
        assert payload["ppt"] is True

    def test_text_output(self, capsys):
        code, out, _ = run(capsys, "analyze", "werner:0.5", "--timing")
        assert code == ExitCodes.SUCCESS
        assert out.splitlines()[0] == "state     werner:0.5"
        assert "time" in out

    def test_repeatable_json(self, capsys):
        _, first, _ = run(capsys, "analyze", "wc:-0.6,-0.5,-0.4", "--json", "--seed", "9")
        _, second, _ = run(capsys, "analyze", "wc:-0.6,-0.5,-0.4", "--json", "--seed", "9")
        assert first == second

    def test_matrix_file(self, capsys, tmp_path):
        path = tmp_path / "w.json"
        path.write_text(dump_json(operator_to_schema(werner(0.8).op)), encoding="utf-8")
        code, out, _ = run(capsys, "distance", str(path), "--json")
        assert code == ExitCodes.SUCCESS
        expected = np.sqrt(3.0) / 2.0 * (0.8 - 1.0 / 3.0)
        assert json.loads(out)["distance"] == pytest.approx(expected, abs=1e-6)


class TestExitCodes:
    @pytest.mark.parametrize("state", ["werner:abc", "wc:1,2", "bell:7", "nonsense"])
    def test_parse_errors(self, capsys, state):
        code, _, err = run(capsys, "analyze", state)
        assert code == ExitCodes.PARSE_ERROR
        assert "Could not parse input" in err

    @pytest.mark.parametrize("state", ["werner:1.5", "wc:1,1,1", "product:0,0,2,1,0,0"])
    def test_invalid_states(self, capsys, state):
        code, _, _ = run(capsys, "analyze", state)
        assert code == ExitCodes.INVALID_STATE

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = run(capsys, "distance", str(tmp_path / "absent.json"))
        assert code == ExitCodes.PARSE_ERROR

    @pytest.mark.parametrize(
        "document",
        [
            {"alpha": 0.0, "a": [0, 0, 0], "b": [0, 0, 0], "c": [[1, 0, 0], [0, 1], [0, 0, 1]]},
            {"dim": 2, "re": [[1.0], [0.0, 0.0]], "im": [[0.0, 0.0], [0.0, 0.0]]},
        ],
    )
    def test_ragged_operator_file(self, capsys, tmp_path, document):
        path = tmp_path / "ragged.json"
        path.write_text(json.dumps(document), encoding="utf-8")
        code, _, err = run(capsys, "oracle", str(path))
        assert code == ExitCodes.PARSE_ERROR
        assert "Could not parse input" in err

    def test_strict_convergence_failure(self, capsys):
        code, _, _ = run(capsys, "distance", "werner:0.9", "--max-iters", "1", "--strict")
        assert code == ExitCodes.CONVERGENCE_FAILURE

    def test_lenient_convergence_failure(self, capsys):
        code, out, _ = run(capsys, "distance", "werner:0.9", "--max-iters", "1", "--json")
        assert code == ExitCodes.SUCCESS
        assert json.loads(out)["converged"] is False

    def test_invalid_config_value(self, capsys):
        code, _, _ = run(capsys, "distance", "werner:0.9", "--tol", "-1")
        assert code == ExitCodes.PARSE_ERROR

    def test_config_file(self, capsys, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"solver": {"max_iters": 1}}), encoding="utf-8")
        code, _, _ = run(capsys, "distance", "werner:0.9", "--config", str(path), "--strict")
        assert code == ExitCodes.CONVERGENCE_FAILURE

    def test_no_command(self, capsys):
        code, _, _ = run(capsys)
        assert code == ExitCodes.PARSE_ERROR

    def test_nested_command_missing(self, capsys):
        code, _, _ = run(capsys, "geometry")
        assert code == ExitCodes.PARSE_ERROR

    def test_unknown_flag(self):
        with pytest.raises(SystemExit) as info:
            main(["analyze", "werner:1", "--bogus"])
        assert info.value.code == 2


class TestDistanceAndWitness:
    def test_distance_trace(self, capsys):
        code, out, _ = run(capsys, "distance", "werner:0.7", "--json", "--trace")
        assert code == ExitCodes.SUCCESS
        payload = json.loads(out)
        assert payload["trace"]
        assert payload["trace"][-1]["upper"] == pytest.approx(payload["distance"])

    def test_distance_text_lists_atoms(self, capsys):
        code, out, _ = run(capsys, "distance", "bell:0")
        assert code == ExitCodes.SUCCESS
        assert out.startswith("D(w) = 0.57735")
        assert "atoms:" in out

    def test_witness_json(self, capsys):
        code, out, _ = run(capsys, "witness", "bell:0", "--json")
        assert code == ExitCodes.SUCCESS
        payload = json.loads(out)
        assert payload["witness"]["normalized"] is True
        assert len(payload["witness"]["pauli"]["c"]) == 3
        assert payload["b_value"] == pytest.approx(payload["distance"], abs=1e-6)

    def test_witness_of_separable_state(self, capsys):
        code, out, _ = run(capsys, "witness", "werner:0.1")
        assert code == ExitCodes.SUCCESS
        assert out.startswith("separable")


class TestBell:
    def test_chsh_fixed_angles(self, capsys):
        code, out, _ = run(capsys, "bell", "chsh", "--angles", "0", "270", "135", "45", "--json")
        assert code == ExitCodes.SUCCESS
        payload = json.loads(out)
        assert payload["value"] == pytest.approx(2.0 * np.sqrt(2.0), abs=1e-9)
        assert payload["sep_max"] == pytest.approx(np.sqrt(2.0), abs=1e-6)

    def test_original_optimized(self, capsys):
        code, out, _ = run(capsys, "bell", "original", "--optimize", "--json")
        assert code == ExitCodes.SUCCESS
        payload = json.loads(out)
        assert payload["value"] == pytest.approx(1.5, abs=1e-9)
        assert payload["anticorrelated_max"] == pytest.approx(0.75, abs=1e-6)
        assert sorted(payload["angles_deg"]) == pytest.approx([60.0, 60.0, 120.0], abs=1e-4)

    def test_summary_text(self, capsys):
        code, out, _ = run(capsys, "bell", "summary")
        assert code == ExitCodes.SUCCESS
        lines = out.splitlines()
        assert lines[0].split() == ["observable", "separable", "singlet", "difference", "expected", "result"]
        assert [line.split()[0] for line in lines[1:]] == ["-sigma.sigma", "CHSH", "Bell"]
        assert all(line.split()[-1] == "PASS" for line in lines[1:])

    def test_summary_json_flags_rows(self, capsys):
        code, out, _ = run(capsys, "bell", "summary", "--json")
        assert code == ExitCodes.SUCCESS
        rows = json.loads(out)["rows"]
        assert [row["expected_difference"] for row in rows] == pytest.approx([2.0, np.sqrt(2.0), 0.75])
        assert all(row["matches"] for row in rows)


class TestGeometry:
    def test_sample_csv(self, capsys):
        code, out, _ = run(capsys, "geometry", "sample", "--resolution", "3")
        assert code == ExitCodes.SUCCESS
        lines = out.splitlines()
        assert lines[0] == "c1,c2,c3,in_tetra,in_mirror,separable"
        assert len(lines) == 28
        assert lines[1] == "-1,-1,-1,true,false,false"
        assert lines[14] == "0,0,0,true,true,true"

    def test_sample_resolution_too_small(self, capsys):
        code, _, _ = run(capsys, "geometry", "sample", "--resolution", "1")
        assert code == ExitCodes.INVALID_STATE

    def test_mesh_off(self, capsys, tmp_path):
        target = tmp_path / "octahedron.off"
        code, out, _ = run(
            capsys, "geometry", "mesh", "--region", "pyramid", "--format", "off", "--out", str(target)
        )
        assert code == ExitCodes.SUCCESS
        assert out == ""
        assert target.read_text(encoding="utf-8").startswith("OFF\n6 8 0\n")

    def test_mesh_json(self, capsys):
        code, out, _ = run(capsys, "geometry", "mesh", "--region", "mirror")
        assert code == ExitCodes.SUCCESS
        assert json.loads(out)["vertices"][0] == [1.0, 1.0, 1.0]

    def test_unknown_region_rejected_by_parser(self):
        with pytest.raises(SystemExit):
            main(["geometry", "mesh", "--region", "cube"])


class TestSweepAndOracle:
    def test_werner_sweep_csv(self, capsys):
        code, out, _ = run(capsys, "sweep", "werner", "--range", "0", "1", "--steps", "4")
        assert code == ExitCodes.SUCCESS
        lines = out.splitlines()
        assert lines[0] == "param,D,B,lower,upper,ppt"
        assert len(lines) == 5
        assert lines[1].startswith("0,") and lines[1].endswith(",true")
        last = lines[-1].split(",")
        assert float(last[1]) == pytest.approx(1.0 / np.sqrt(3.0), abs=1e-6)

    def test_sweep_range_outside_states(self, capsys):
        code, _, _ = run(capsys, "sweep", "werner", "--range", "-1", "1")
        assert code == ExitCodes.INVALID_STATE

    def test_oracle_on_flip_operator(self, capsys, tmp_path):
        path = tmp_path / "flip.json"
        path.write_text(dump_json(operator_to_schema(flip_operator())), encoding="utf-8")
        code, out, _ = run(capsys, "oracle", str(path), "--grid", "20", "--json")
        assert code == ExitCodes.SUCCESS
        payload = json.loads(out)
        assert payload["tangent"] is True
        assert payload["sep_max"] == pytest.approx(0.5, abs=1e-9)
        assert payload["grid_min"] >= payload["sep_min"] - 1e-9

    def test_oracle_pauli_file(self, capsys, tmp_path):
        path = tmp_path / "ss.json"
        path.write_text(
            json.dumps({"alpha": 0.0, "a": [0, 0, 0], "b": [0, 0, 0], "c": np.eye(3).tolist()}),
            encoding="utf-8",
        )
        code, out, _ = run(capsys, "oracle", str(path))
        assert code == ExitCodes.SUCCESS
        assert out.splitlines()[0].split()[-1] == "-1"


class TestReproduce:
    def test_group_filter_json(self, capsys):
        code, out, _ = run(capsys, "reproduce", "--filter", "tangent", "--json")
        assert code == ExitCodes.SUCCESS
        payload = json.loads(out)
        assert payload["failed"] == 0
        assert {c["group"] for c in payload["claims"]} == {"tangent"}

    def test_table(self, capsys):
        code, out, _ = run(capsys, "reproduce", "--filter", "gbi")
        assert code == ExitCodes.SUCCESS
        assert out.rstrip().endswith("claims passed")

    def test_failing_claim_exits_nonzero(self, capsys, monkeypatch):
        monkeypatch.setattr(ClosedFormValues, "BELL_DIFFERENCE", 0.1)
        code, out, _ = run(capsys, "reproduce", "--filter", "summary", "--json")
        assert code == ExitCodes.REPRODUCTION_FAILURE
        assert json.loads(out)["failed"] == 1


def test_version(capsys):
    with pytest.raises(SystemExit):
        build_parser().parse_args(["--version"])
    assert TOOL_VERSION in capsys.readouterr().out
