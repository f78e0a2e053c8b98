"""Tests for state-spec parsing and single-state analysis."""
from pathlib import Path

import numpy as np
import pytest

from src.api.codecs import dump_json, operator_to_schema
from src.domain.entities import StateKind
from src.hs_pipeline.pauli_space import sigma_dot_sigma
from src.hs_pipeline.states import flip_operator, werner
from src.infrastructure.errors import (
    ConvergenceError,
    NotAStateError,
    NotUnitVectorError,
    StateSpecError,
)
from src.infrastructure.settings import AppConfig, SolverConfig
from src.services.analysis_service import AnalysisService, build_state, parse_state_spec

pytestmark = pytest.mark.unit


@pytest.fixture(scope="module")
def service() -> AnalysisService:
    return AnalysisService(seed=11)


class TestParseStateSpec:
    @pytest.mark.parametrize(
        "text,kind,params",
        [
            ("werner:0.5", StateKind.WERNER, (0.5,)),
            ("WC:-0.5, -0.5, -0.5", StateKind.WC, (-0.5, -0.5, -0.5)),
            ("bell:2", StateKind.BELL, (2.0,)),
            ("product:0,0,1,1,0,0", StateKind.PRODUCT, (0.0, 0.0, 1.0, 1.0, 0.0, 0.0)),
        ],
    )
    def test_families(self, text, kind, params):
        spec = parse_state_spec(text)
        assert spec.kind is kind
        assert spec.params == params
        assert spec.text == text

    def test_matrix_file_prefix(self):
        spec = parse_state_spec("matrix-file:states/w.json")
        assert spec.kind is StateKind.MATRIX_FILE
        assert spec.path == Path("states/w.json")

    def test_bare_json_path(self):
        assert parse_state_spec("w.json").kind is StateKind.MATRIX_FILE

    @pytest.mark.parametrize(
        "text,field",
        [
            ("", "state"),
            ("werner:", "werner"),
            ("werner:abc", "werner[0]"),
            ("wc:1,2", "wc"),
            ("wc:0,nan,0", "wc[1]"),
            ("bell:4", "bell"),
            ("bell:0.5", "bell"),
            ("ghz:0.5", "kind"),
            ("nonsense", "kind"),
        ],
    )
    def test_errors_name_the_field(self, text, field):
        with pytest.raises(StateSpecError) as info:
            parse_state_spec(text)
        assert info.value.field == field


class TestBuildState:
    def test_werner(self):
        assert build_state(parse_state_spec("werner:0.7")).op.allclose(werner(0.7).op)

    def test_bell_zero_is_singlet(self):
        assert build_state(parse_state_spec("bell:0")).op.allclose(werner(1.0).op)

    def test_product_requires_unit_vectors(self):
        with pytest.raises(NotUnitVectorError):
            build_state(parse_state_spec("product:0,0,2,1,0,0"))

    def test_werner_out_of_range(self):
        with pytest.raises(NotAStateError):
            build_state(parse_state_spec("werner:1.5"))

    def test_wc_outside_tetrahedron(self):
        with pytest.raises(NotAStateError):
            build_state(parse_state_spec("wc:1,1,1"))

    def test_matrix_file(self, tmp_path):
        path = tmp_path / "w.json"
        path.write_text(dump_json(operator_to_schema(werner(0.4).op)), encoding="utf-8")
        assert build_state(parse_state_spec(str(path))).op.allclose(werner(0.4).op, atol=1e-11)

    def test_non_state_file(self, tmp_path):
        path = tmp_path / "flip.json"
        path.write_text(dump_json(operator_to_schema(sigma_dot_sigma())), encoding="utf-8")
        with pytest.raises(NotAStateError):
            build_state(parse_state_spec(f"matrix-file:{path}"))


class TestAnalysisService:
    def test_singlet(self, service):
        report = service.analyze(parse_state_spec("werner:1.0"))
        assert not report.ppt
        assert report.distance.distance == pytest.approx(0.57735026919, abs=1e-6)
        assert report.residual <= 1e-5
        assert report.witness is not None
        assert report.seed == 11
        assert report.timing_ms is None

    def test_timing_is_opt_in(self, service):
        report = service.analyze(parse_state_spec("werner:0.2"), timing=True)
        assert report.timing_ms is not None and report.timing_ms >= 0.0
        assert report.ppt
        assert report.witness is None
        assert report.b_value == 0.0

    def test_distance_and_witness(self, service):
        spec = parse_state_spec("wc:-0.5,-0.5,-0.5")
        assert service.distance(spec).distance == pytest.approx(
            np.sqrt(3.0) / 2.0 * (0.5 - 1.0 / 3.0), abs=1e-6
        )
        report, witness, b_value = service.witness(spec)
        assert witness.certifies_entanglement
        assert b_value == pytest.approx(report.distance, abs=1e-6)

    def test_strict_raises_on_unconverged(self):
        config = AppConfig(solver=SolverConfig(max_iters=1))
        with pytest.raises(ConvergenceError):
            AnalysisService(config).distance(parse_state_spec("werner:0.9"), strict=True)

    def test_lenient_run_reports_unconverged(self):
        config = AppConfig(solver=SolverConfig(max_iters=1))
        report = AnalysisService(config).distance(parse_state_spec("werner:0.9"))
        assert not report.converged

    def test_operator_extremes(self, service):
        low, high, tangent, grid = service.operator_extremes(flip_operator(), grid=20)
        assert tangent
        assert low.value == pytest.approx(0.0, abs=1e-12)
        assert high.value == pytest.approx(0.5, abs=1e-12)
        assert grid.value >= low.value - 1e-12

    def test_operator_extremes_without_grid(self, service):
        _, _, tangent, grid = service.operator_extremes(sigma_dot_sigma())
        assert not tangent
        assert grid is None
