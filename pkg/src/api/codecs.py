"""Conversions between domain objects, report schemas and operator files."""
import json
import logging
import math
from pathlib import Path
from typing import Any, Union

import numpy as np
from pydantic import BaseModel
from pydantic import ValidationError as SchemaError

from src.api.schemas import (
    AtomSchema,
    BoundsSchema,
    ClaimSchema,
    DistanceReportSchema,
    MeshSchema,
    OperatorSchema,
    PauliSchema,
    ProductStateSchema,
    RunReportSchema,
    StateSpecSchema,
    WitnessSchema,
)
from src.constants import OutputConstants
from src.domain.entities import Claim, DistanceReport, Mesh, RunReport, StateSpec, Witness
from src.domain.value_objects import HermitianOp, PauliCoeffs2Q, ProductState
from src.hs_pipeline.pauli_space import from_pauli, to_pauli
from src.infrastructure.errors import StateSpecError

logger = logging.getLogger(__name__)


def round_sig(value: Any, digits: int = OutputConstants.JSON_SIGNIFICANT_DIGITS) -> Any:
    """Round floats (and nested lists of them) to ``digits`` significant digits.

    Non-finite floats pass through unchanged so the schema can reject them.
    """
    if isinstance(value, (list, tuple)):
        return [round_sig(v, digits) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    number = float(value)
    if not math.isfinite(number) or number == 0.0:
        return number + 0.0
    return float(f"{number:.{digits}g}")


def format_csv(value: float, digits: int = OutputConstants.CSV_SIGNIFICANT_DIGITS) -> str:
    return f"{float(value):.{digits}g}"


def _vector(values: np.ndarray) -> list:
    return round_sig(np.asarray(values, dtype=float).tolist())


def operator_to_schema(op: HermitianOp) -> OperatorSchema:
    return OperatorSchema(
        dim=op.dim,
        re=_vector(op.entries.real),
        im=_vector(op.entries.imag),
    )


def pauli_to_schema(p: PauliCoeffs2Q) -> PauliSchema:
    return PauliSchema(
        alpha=round_sig(p.alpha), a=_vector(p.a), b=_vector(p.b), c=_vector(p.c)
    )


def product_to_schema(state: ProductState) -> ProductStateSchema:
    return ProductStateSchema(n=_vector(state.n), m=_vector(state.m))


def _as_real_array(rows: list, field: str) -> np.ndarray:
    try:
        return np.asarray(rows, dtype=float)
    except ValueError as exc:
        raise StateSpecError(field, "rows must all have the same length") from exc


def parse_operator(data: dict) -> HermitianOp:
    """Operator from either the matrix form {dim, re, im} or the Pauli form.

    Raises:
        StateSpecError: If the document matches neither form
        NotHermitianError: If the matrix is not Hermitian
    """
    if not isinstance(data, dict):
        raise StateSpecError("operator", "expected a JSON object")
    try:
        if "alpha" in data:
            pauli = PauliSchema.model_validate(data)
            if _as_real_array(pauli.c, "c").shape != (3, 3):
                raise StateSpecError("c", "expected a 3x3 correlation matrix")
            return from_pauli(
                PauliCoeffs2Q(alpha=pauli.alpha, a=pauli.a, b=pauli.b, c=pauli.c)
            )
        matrix = OperatorSchema.model_validate(data)
    except SchemaError as exc:
        first = exc.errors()[0]
        field = ".".join(str(part) for part in first["loc"]) or "operator"
        raise StateSpecError(field, first["msg"]) from exc

    re = _as_real_array(matrix.re, "re")
    im = _as_real_array(matrix.im, "im")
    if re.shape != (matrix.dim, matrix.dim) or im.shape != re.shape:
        raise StateSpecError("dim", f"re/im must both be {matrix.dim}x{matrix.dim}")
    return HermitianOp(re + 1j * im)


def load_operator(path: Union[str, Path]) -> HermitianOp:
    """Read an operator JSON file.

    Raises:
        StateSpecError: If the file is missing or not valid JSON
    """
    file = Path(path)
    try:
        data = json.loads(file.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise StateSpecError("path", f"no such file {str(file)!r}") from None
    except json.JSONDecodeError as exc:
        raise StateSpecError("path", f"invalid JSON in {file.name}: {exc.msg}") from exc
    logger.debug("Loaded operator from %s", file)
    return parse_operator(data)


def distance_to_schema(report: DistanceReport, include_trace: bool = False) -> DistanceReportSchema:
    atoms = []
    for atom in report.atoms:
        if isinstance(atom.state, ProductState):
            atoms.append(
                AtomSchema(
                    weight=round_sig(atom.weight),
                    n=_vector(atom.state.n),
                    m=_vector(atom.state.m),
                )
            )
        else:
            atoms.append(AtomSchema(weight=round_sig(atom.weight), pole=int(atom.state)))

    trace = None
    if include_trace:
        trace = [
            BoundsSchema(
                iteration=record.iteration,
                lower=round_sig(record.lower),
                upper=round_sig(record.upper),
            )
            for record in report.trace
        ]
    return DistanceReportSchema(
        distance=round_sig(report.distance),
        lower_bound=round_sig(report.lower_bound),
        upper_bound=round_sig(report.upper_bound),
        gap=round_sig(report.gap),
        iterations=report.iterations,
        converged=report.converged,
        minimizer=operator_to_schema(report.minimizer.op),
        atoms=atoms,
        trace=trace,
    )


def witness_to_schema(witness: Witness) -> WitnessSchema:
    return WitnessSchema(
        matrix=operator_to_schema(witness.op),
        pauli=pauli_to_schema(to_pauli(witness.op)) if witness.op.dim == 4 else None,
        sep_min=round_sig(witness.sep_min),
        violation_state_value=round_sig(witness.violation_state_value),
        violation=round_sig(witness.violation),
        normalized=witness.normalized,
        tangent=witness.is_tangent,
        sep_argmin=(
            product_to_schema(witness.sep_argmin) if witness.sep_argmin is not None else None
        ),
    )


def spec_to_schema(spec: StateSpec) -> StateSpecSchema:
    return StateSpecSchema(
        kind=spec.kind.value,
        params=round_sig(list(spec.params)),
        path=str(spec.path) if spec.path is not None else None,
        text=spec.text,
    )


def run_report_to_schema(report: RunReport) -> RunReportSchema:
    return RunReportSchema(
        input=spec_to_schema(report.spec),
        ppt=report.ppt,
        distance=distance_to_schema(report.distance),
        witness=witness_to_schema(report.witness) if report.witness is not None else None,
        b_value=round_sig(report.b_value),
        residual=round_sig(report.residual),
        timing_ms=round_sig(report.timing_ms) if report.timing_ms is not None else None,
        tool_version=report.tool_version,
        seed=report.seed,
    )


def claim_to_schema(claim: Claim) -> ClaimSchema:
    finite = math.isfinite(claim.computed)
    return ClaimSchema(
        name=claim.name,
        group=claim.group,
        relation=claim.relation.value,
        expected=round_sig(claim.expected),
        computed=round_sig(claim.computed) if finite else None,
        delta=round_sig(claim.delta) if finite else None,
        tolerance=round_sig(claim.tolerance),
        passed=claim.passed,
    )


def mesh_to_schema(mesh: Mesh) -> MeshSchema:
    return MeshSchema(
        region=mesh.region.value,
        vertices=[list(v) for v in mesh.vertices],
        faces=[list(f) for f in mesh.faces],
    )


def dump_json(model: BaseModel) -> str:
    """Serialized schema with a trailing newline; key order follows the schema."""
    return model.model_dump_json(indent=OutputConstants.JSON_INDENT) + "\n"
