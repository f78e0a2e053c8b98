"""Parse state specifications and run single-state analyses."""
import logging
import time
from pathlib import Path
from typing import Optional

import numpy as np

from src.api.codecs import load_operator
from src.constants import TOOL_VERSION, TimeConstants, ToleranceConstants
from src.domain.entities import (
    DensityMatrix,
    DistanceReport,
    OracleResult,
    RunReport,
    StateKind,
    StateSpec,
    Witness,
)
from src.domain.value_objects import HermitianOp
from src.hs_pipeline.distance_solver import DistanceSolver
from src.hs_pipeline.product_oracle import ProductOracle
from src.hs_pipeline.states import (
    bell_projectors,
    is_ppt,
    product_state,
    w_c_state,
    werner,
)
from src.hs_pipeline.witness import WitnessAnalyzer
from src.infrastructure.errors import ConvergenceError, StateSpecError
from src.infrastructure.settings import AppConfig

logger = logging.getLogger(__name__)

_PARAM_COUNTS = {
    StateKind.WERNER: 1,
    StateKind.WC: 3,
    StateKind.BELL: 1,
    StateKind.PRODUCT: 6,
}


def _floats(kind: StateKind, body: str) -> tuple[float, ...]:
    parts = [p.strip() for p in body.split(",")] if body.strip() else []
    expected = _PARAM_COUNTS[kind]
    if len(parts) != expected:
        raise StateSpecError(
            kind.value, f"expected {expected} comma-separated numbers, got {len(parts)}"
        )
    values = []
    for k, part in enumerate(parts):
        try:
            value = float(part)
        except ValueError:
            raise StateSpecError(f"{kind.value}[{k}]", f"not a number: {part!r}") from None
        if not np.isfinite(value):
            raise StateSpecError(f"{kind.value}[{k}]", "must be finite")
        values.append(value)
    return tuple(values)


def parse_state_spec(text: str) -> StateSpec:
    """Parse ``werner:A``, ``wc:C1,C2,C3``, ``bell:K``, ``product:N,M`` or a JSON file.

    A file may also be named explicitly as ``matrix-file:PATH``.

    Raises:
        StateSpecError: Naming the field that failed to parse
    """
    raw = text.strip()
    if not raw:
        raise StateSpecError("state", "empty state specification")

    prefix, sep, body = raw.partition(":")
    kind: Optional[StateKind] = None
    if sep:
        try:
            kind = StateKind(prefix.lower())
        except ValueError:
            kind = None

    if kind is StateKind.MATRIX_FILE or kind is None:
        path = Path(body if kind is StateKind.MATRIX_FILE else raw)
        if kind is None and path.suffix.lower() != ".json" and not path.exists():
            raise StateSpecError(
                "kind",
                f"unknown state {raw!r}; use werner:, wc:, bell:, product: or a JSON file",
            )
        return StateSpec(kind=StateKind.MATRIX_FILE, path=path, text=raw)

    params = _floats(kind, body)
    if kind is StateKind.BELL and params[0] not in (0.0, 1.0, 2.0, 3.0):
        raise StateSpecError("bell", f"index must be 0..3, got {body!r}")
    return StateSpec(kind=kind, params=params, text=raw)


def build_state(spec: StateSpec) -> DensityMatrix:
    """Density matrix described by a parsed spec.

    Raises:
        NotAStateError: If the parameters leave the state space
        StateSpecError: If a matrix file cannot be read
    """
    if spec.kind is StateKind.WERNER:
        return werner(spec.params[0])
    if spec.kind is StateKind.WC:
        return w_c_state(spec.params)
    if spec.kind is StateKind.BELL:
        return bell_projectors()[int(spec.params[0])]
    if spec.kind is StateKind.PRODUCT:
        return product_state(spec.params[:3], spec.params[3:])
    assert spec.path is not None
    return DensityMatrix(load_operator(spec.path))


class AnalysisService:
    """Distance, witness and PPT analysis of a single state."""

    def __init__(self, config: Optional[AppConfig] = None, seed: int = 0):
        """Initialize service.

        Args:
            config: Solver and oracle settings
            seed: Root seed echoed into reports
        """
        self.config = config or AppConfig()
        self.seed = seed
        self.oracle = ProductOracle(self.config.solver.oracle)
        self.solver = DistanceSolver(self.config.solver, self.oracle)
        self.analyzer = WitnessAnalyzer(self.solver)

    def _check_converged(self, report: DistanceReport, strict: bool) -> None:
        if report.converged:
            return
        message = f"gap {report.gap:.3e} above tolerance after {report.iterations} iterations"
        if strict:
            raise ConvergenceError(message)
        logger.warning("Distance not converged: %s", message)

    def analyze(self, spec: StateSpec, timing: bool = False, strict: bool = False) -> RunReport:
        """PPT test, D(w), A_max and B(w) for one state."""
        started = time.perf_counter()
        state = build_state(spec)
        ppt = is_ppt(state)
        report, witness, b_value = self.analyzer.certify(state)
        self._check_converged(report, strict)

        residual = abs(b_value - report.distance)
        if residual >= ToleranceConstants.THEOREM_RESIDUAL:
            message = f"|B - D| = {residual:.3e} for {spec.text!r}"
            if strict:
                raise ConvergenceError(message)
            logger.warning(message)

        elapsed = None
        if timing:
            elapsed = (time.perf_counter() - started) * TimeConstants.MS_PER_SECOND
        return RunReport(
            spec=spec,
            distance=report,
            witness=witness,
            b_value=b_value,
            ppt=ppt,
            tool_version=TOOL_VERSION,
            seed=self.seed,
            timing_ms=elapsed,
        )

    def distance(self, spec: StateSpec, strict: bool = False) -> DistanceReport:
        report = self.solver.distance(build_state(spec))
        self._check_converged(report, strict)
        return report

    def witness(
        self, spec: StateSpec, strict: bool = False
    ) -> tuple[DistanceReport, Optional[Witness], float]:
        report, witness, b_value = self.analyzer.certify(build_state(spec))
        self._check_converged(report, strict)
        return report, witness, b_value

    def operator_extremes(
        self, op: HermitianOp, grid: Optional[int] = None
    ) -> tuple[OracleResult, OracleResult, bool, Optional[OracleResult]]:
        """Extrema of (ρ|X) over S, tangency, and optionally the grid cross-check."""
        low = self.oracle.min_over_separable(op)
        high = self.oracle.max_over_separable(op)
        tangent = abs(low.value) <= ToleranceConstants.TANGENCY
        checked = self.oracle.grid_oracle(op, grid) if grid else None
        if checked is not None and checked.value < low.value - 1e-9:
            logger.warning(
                "Grid oracle found %.12g below see-saw minimum %.12g",
                checked.value,
                low.value,
            )
        return low, high, tangent, checked
