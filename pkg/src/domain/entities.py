"""Domain entities for the Hilbert-Schmidt entanglement geometry engine."""
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Optional, Union

import numpy as np

from src.constants import ToleranceConstants
from src.domain.value_objects import HermitianOp, ProductState
from src.infrastructure.errors import NotAStateError


class Region(Enum):
    """Named regions of the diagonal-correlation (c-space) picture."""
    TETRA = "tetra"
    MIRROR = "mirror"
    INTERSECTION = "intersection"
    PYRAMID = "pyramid"


class StateKind(Enum):
    """State families addressable from the command line."""
    WERNER = "werner"
    WC = "wc"
    BELL = "bell"
    PRODUCT = "product"
    MATRIX_FILE = "matrix-file"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A HermitianOp with unit trace and no negative eigenvalues."""

    op: HermitianOp

    def __post_init__(self) -> None:
        trace = float(np.real(np.trace(self.op.entries)))
        if abs(trace - 1.0) > ToleranceConstants.TRACE:
            raise NotAStateError(f"Trace is {trace!r}, expected 1")

        lowest = float(np.linalg.eigvalsh(self.op.entries)[0])
        if lowest < -ToleranceConstants.PSD:
            raise NotAStateError(f"Negative eigenvalue {lowest:.3e}")

    @property
    def dim(self) -> int:
        return self.op.dim

    @property
    def entries(self) -> np.ndarray:
        return self.op.entries

    @property
    def purity(self) -> float:
        """Tr ρ², equal to ‖ρ‖₂²."""
        return float(np.real(np.vdot(self.op.entries, self.op.entries)))

    @property
    def is_pure(self) -> bool:
        return abs(self.purity - 1.0) <= ToleranceConstants.NORMALIZATION

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.op.entries)


@dataclass(frozen=True)
class OracleResult:
    """Extremal expectation of an operator over pure product states."""

    value: float
    state: ProductState
    restarts_used: int
    converged: bool
    iterations: int = 0


@dataclass(frozen=True)
class WeightedAtom:
    """One extreme point of a convex decomposition.

    ``state`` is a ProductState for two qubits, or the pole sign ±1 of
    ½(1 ± σ_z) for the one-spin set S_z.
    """

    weight: float
    state: Union[ProductState, int]


@dataclass(frozen=True)
class BoundsRecord:
    """Certified bounds on D(w) after one projection step."""

    iteration: int
    lower: float
    upper: float


@dataclass(frozen=True)
class DistanceReport:
    """Result of a projection of w onto the separable set.

    ``distance`` is the certified upper bound; ``lower_bound`` is the best
    supporting-hyperplane certificate seen during the run.
    """

    distance: float
    minimizer: DensityMatrix
    atoms: tuple[WeightedAtom, ...]
    lower_bound: float
    upper_bound: float
    iterations: int
    converged: bool
    trace: tuple[BoundsRecord, ...] = field(default_factory=tuple)

    @property
    def gap(self) -> float:
        return max(0.0, self.upper_bound - self.lower_bound)


@dataclass(frozen=True)
class Witness:
    """Normalized observable evaluated against S and a target state."""

    op: HermitianOp
    sep_min: float
    violation_state_value: float
    normalized: bool
    sep_argmin: Optional[ProductState] = None

    @property
    def violation(self) -> float:
        """min over S of (ρ|A) minus (w|A)."""
        return self.sep_min - self.violation_state_value

    @property
    def certifies_entanglement(self) -> bool:
        return self.violation > 0.0

    @property
    def is_tangent(self) -> bool:
        return abs(self.sep_min) <= ToleranceConstants.TANGENCY

    @property
    def is_entanglement_witness(self) -> bool:
        return (
            self.sep_min >= -ToleranceConstants.TANGENCY
            and self.violation_state_value < 0.0
        )


@dataclass(frozen=True)
class CRegionSample:
    """Classification of one point in c-space."""

    c: tuple[float, float, float]
    in_tetrahedron: bool
    in_mirror: bool
    separable: bool
    distance: Optional[float] = None


@dataclass(frozen=True)
class Mesh:
    """Triangle mesh of a c-space polytope, faces oriented outward."""

    region: Region
    vertices: tuple[tuple[float, float, float], ...]
    faces: tuple[tuple[int, int, int], ...]


@dataclass(frozen=True)
class StateSpec:
    """Parsed command-line state description."""

    kind: StateKind
    params: tuple[float, ...] = ()
    path: Optional[Path] = None
    text: str = ""


@dataclass(frozen=True)
class RunReport:
    """Everything ``analyze`` learned about one state."""

    spec: StateSpec
    distance: DistanceReport
    witness: Optional[Witness]
    b_value: float
    ppt: bool
    tool_version: str
    seed: int
    timing_ms: Optional[float] = None

    @property
    def residual(self) -> float:
        """|B(w) − D(w)|."""
        return abs(self.b_value - self.distance.distance)


@dataclass(frozen=True)
class ViolationRow:
    """One line of the separable-versus-singlet comparison."""

    observable: str
    sep_extremum: float
    singlet_value: float
    expected_difference: Optional[float] = None

    @property
    def difference(self) -> float:
        return abs(self.singlet_value - self.sep_extremum)

    @property
    def matches(self) -> bool:
        """Whether the difference agrees with its closed-form value, when one is known."""
        if self.expected_difference is None:
            return True
        return abs(self.difference - self.expected_difference) <= ToleranceConstants.SUMMARY_DIFFERENCE


@dataclass(frozen=True)
class SweepRow:
    """D and B at one parameter value of a state family."""

    param: float
    distance: float
    b_value: float
    lower: float
    upper: float
    ppt: bool
    converged: bool = True


class ClaimRelation(Enum):
    """How a computed value is compared with the expected one."""
    EQUAL = "=="
    AT_MOST = "<="
    AT_LEAST = ">="


@dataclass(frozen=True)
class Claim:
    """A closed-form value checked by the reproduction suite."""

    name: str
    group: str
    expected: float
    computed: float
    tolerance: float
    relation: ClaimRelation = ClaimRelation.EQUAL

    @property
    def delta(self) -> float:
        return abs(self.computed - self.expected)

    @property
    def passed(self) -> bool:
        if not np.isfinite(self.computed):
            return False
        if self.relation is ClaimRelation.AT_MOST:
            return self.computed <= self.expected + self.tolerance
        if self.relation is ClaimRelation.AT_LEAST:
            return self.computed >= self.expected - self.tolerance
        return self.delta <= self.tolerance
