"""Pydantic schemas for JSON reports and operator files."""
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field


class _Report(BaseModel):
    model_config = ConfigDict(allow_inf_nan=False, extra="forbid")


class OperatorSchema(_Report):
    """Hermitian matrix as real and imaginary parts."""

    dim: int = Field(ge=1)
    re: list[list[float]]
    im: list[list[float]]


class PauliSchema(_Report):
    """Two-qubit operator in Pauli coordinates."""

    alpha: float
    a: list[float] = Field(min_length=3, max_length=3)
    b: list[float] = Field(min_length=3, max_length=3)
    c: list[list[float]] = Field(min_length=3, max_length=3)


class ProductStateSchema(_Report):
    """Bloch vectors of a pure product state."""

    n: list[float] = Field(min_length=3, max_length=3)
    m: list[float] = Field(min_length=3, max_length=3)


class AtomSchema(_Report):
    """One weighted extreme point of a separable decomposition."""

    weight: float = Field(ge=0.0)
    n: Optional[list[float]] = None
    m: Optional[list[float]] = None
    pole: Optional[int] = None


class BoundsSchema(_Report):
    iteration: int
    lower: float
    upper: float


class DistanceReportSchema(_Report):
    """HS distance to the separable set."""

    distance: float = Field(ge=0.0)
    lower_bound: float
    upper_bound: float
    gap: float
    iterations: int
    converged: bool
    minimizer: OperatorSchema
    atoms: list[AtomSchema]
    trace: Optional[list[BoundsSchema]] = None


class WitnessSchema(_Report):
    """Optimal witness A_max and its bracket."""

    matrix: OperatorSchema
    pauli: Optional[PauliSchema] = None
    sep_min: float
    violation_state_value: float
    violation: float
    normalized: bool
    tangent: bool
    sep_argmin: Optional[ProductStateSchema] = None


class WitnessReportSchema(_Report):
    """``witness`` output: A_max with B(w), D(w) and their residual."""

    witness: Optional[WitnessSchema] = None
    b_value: float
    distance: float
    residual: float


class StateSpecSchema(_Report):
    kind: str
    params: list[float] = Field(default_factory=list)
    path: Optional[str] = None
    text: str = ""


class RunReportSchema(_Report):
    """Full ``analyze`` output."""

    input: StateSpecSchema
    ppt: bool
    distance: DistanceReportSchema
    witness: Optional[WitnessSchema] = None
    b_value: float
    residual: float
    timing_ms: Optional[float] = None
    tool_version: str
    seed: int


class ClaimSchema(_Report):
    """One row of the reproduction table."""

    name: str
    group: str
    relation: str
    expected: float
    computed: Optional[float] = None
    delta: Optional[float] = None
    tolerance: float
    passed: bool


class ReproductionSchema(_Report):
    claims: list[ClaimSchema]
    passed: int
    failed: int
    tool_version: str


class ViolationRowSchema(_Report):
    observable: str
    sep_extremum: float
    singlet_value: float
    difference: float
    expected_difference: Optional[float] = None
    matches: bool = True


class ViolationSummarySchema(_Report):
    rows: list[ViolationRowSchema]


class SettingSchema(_Report):
    """Measurement directions with their pairwise angles in degrees."""

    observable: str
    value: float
    sep_max: Optional[float] = None
    anticorrelated_max: Optional[float] = None
    vectors: dict[str, list[float]]
    angles_deg: list[float]


class MeshSchema(_Report):
    """Triangle mesh of a c-space region."""

    region: str
    vertices: list[list[float]]
    faces: list[list[int]]


class OracleReportSchema(_Report):
    """Extrema of (ρ|X) over separable states for one operator."""

    sep_min: float
    sep_min_state: ProductStateSchema
    sep_max: float
    sep_max_state: ProductStateSchema
    tangent: bool
    grid_min: Optional[float] = None
    restarts_used: int
