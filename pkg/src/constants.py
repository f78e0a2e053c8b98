"""Application-wide constants: tolerances, exit codes, output formatting."""
import math
from typing import Final


TOOL_VERSION: Final[str] = "0.1.0"


class ToleranceConstants:
    """Numerical tolerances shared across the pipeline."""
    HERMITICITY: Final[float] = 1e-12
    UNIT_NORM: Final[float] = 1e-12
    TRACE: Final[float] = 1e-10

    # Eigenvalue >= -PSD counts as nonnegative
    PSD: Final[float] = 1e-10

    TANGENCY: Final[float] = 1e-9
    A_MAX_TANGENCY: Final[float] = 1e-8
    NORMALIZATION: Final[float] = 1e-10

    # Sum |c_i| <= 1 boundary slack in c-space
    C_SPACE_BOUNDARY: Final[float] = 1e-10

    # Below this HS norm two operators are considered equal
    ZERO_NORM: Final[float] = 1e-14

    # Weights below this are dropped from a convex decomposition
    WEIGHT_PRUNE: Final[float] = 1e-14

    # Allowed |B - D| before an analysis is flagged
    THEOREM_RESIDUAL: Final[float] = 1e-5

    # Slack on monotone descent of the see-saw, relative to 1 + |f|
    MONOTONE_SLACK: Final[float] = 1e-12

    # Allowed deviation of a violation-summary difference from its closed form
    SUMMARY_DIFFERENCE: Final[float] = 1e-6


class ClosedFormValues:
    """Closed-form values the reproduction suite checks against."""
    SQRT2: Final[float] = math.sqrt(2.0)
    SQRT3: Final[float] = math.sqrt(3.0)

    MAX_HS_DISTANCE: Final[float] = math.sqrt(2.0)
    WERNER_SEPARABLE_EDGE: Final[float] = 1.0 / 3.0
    WERNER_SLOPE: Final[float] = math.sqrt(3.0) / 2.0

    SINGLET_GBI_VALUE: Final[float] = 3.0
    SEPARABLE_GBI_BOUND: Final[float] = 1.0
    CHSH_SINGLET_MAX: Final[float] = 2.0 * math.sqrt(2.0)
    CHSH_SEPARABLE_MAX: Final[float] = math.sqrt(2.0)
    CHSH_CLASSICAL_BOUND: Final[float] = 2.0
    BELL_SINGLET_MAX: Final[float] = 1.5
    BELL_ANTICORRELATED_MAX: Final[float] = 0.75
    BELL_SEPARABLE_MAX: Final[float] = math.sqrt(3.0) / 2.0

    # singlet value minus separable extremum, per observable
    GBI_DIFFERENCE: Final[float] = 2.0
    CHSH_DIFFERENCE: Final[float] = math.sqrt(2.0)
    BELL_DIFFERENCE: Final[float] = 0.75

    CHSH_ANGLES_DEG: Final[tuple[float, ...]] = (45.0, 135.0, 135.0, 135.0)
    BELL_ANGLES_DEG: Final[tuple[float, ...]] = (60.0, 60.0, 120.0)

    OCTAHEDRON_VOLUME_FRACTION: Final[float] = 1.0 / 6.0


class ExitCodes:
    """CLI exit-code contract."""
    SUCCESS: Final[int] = 0
    REPRODUCTION_FAILURE: Final[int] = 1
    PARSE_ERROR: Final[int] = 2
    INVALID_STATE: Final[int] = 3
    CONVERGENCE_FAILURE: Final[int] = 4


class OutputConstants:
    """Number formatting for emitted reports."""
    JSON_SIGNIFICANT_DIGITS: Final[int] = 12
    CSV_SIGNIFICANT_DIGITS: Final[int] = 9
    JSON_INDENT: Final[int] = 2


class ReportFormattingConstants:
    """Report formatting characters."""
    SEPARATOR_DOUBLE: Final[str] = "=" * 78
    SEPARATOR_SINGLE: Final[str] = "-" * 78
    PASS_MARK: Final[str] = "PASS"
    FAIL_MARK: Final[str] = "FAIL"


class TimeConstants:
    """Time conversion constants."""
    MS_PER_SECOND: Final[int] = 1000
