"""Numerical solver configuration defaults."""
from dataclasses import dataclass
from typing import Final


@dataclass(frozen=True)
class OracleDefaults:
    """Product-state linear optimization (see-saw) defaults."""

    RESTARTS: Final[int] = 32
    MAX_ITERS: Final[int] = 500
    TOL: Final[float] = 1e-13  # objective improvement below this: converged
    SEED: Final[int] = 0x5EED

    GRID_RESOLUTION: Final[int] = 200
    MIN_GRID_RESOLUTION: Final[int] = 8


@dataclass(frozen=True)
class SolverDefaults:
    """Gilbert projection defaults."""

    TOL: Final[float] = 1e-7  # upper - lower gap
    MAX_ITERS: Final[int] = 10_000
    MAX_ATOMS: Final[int] = 64
    CARATHEODORY_ATOMS: Final[int] = 16  # dim of H_s for two qubits
    TRUST_PPT: Final[bool] = False


@dataclass(frozen=True)
class BellOptimizerDefaults:
    """Measurement-setting ascent defaults."""

    RESTARTS: Final[int] = 64
    MAX_ITERS: Final[int] = 5_000
    STEP: Final[float] = 0.5
    MIN_STEP: Final[float] = 1e-9
    GRADIENT_TOL: Final[float] = 1e-10  # Riemannian gradient norm at a maximum
    SEED: Final[int] = 0xBE11


@dataclass(frozen=True)
class GeometryDefaults:
    """c-space sampling defaults."""

    MIN_RESOLUTION: Final[int] = 2
    SAMPLE_RESOLUTION: Final[int] = 21
    DISTANCE_SPOT_CHECKS: Final[int] = 50


@dataclass(frozen=True)
class SweepDefaults:
    """Family sweep defaults."""

    STEPS: Final[int] = 41
    MAX_WORKERS: Final[int] = 4
    WC_DIRECTION: Final[tuple[float, float, float]] = (1.0, 1.0, 1.0)


@dataclass(frozen=True)
class ReproductionDefaults:
    """Sample counts of the sampled claim groups (the test suite runs larger ones)."""

    ONE_SPIN_SAMPLES: Final[int] = 20
    THEOREM_SAMPLES: Final[int] = 20
    PROPERTY_SAMPLES: Final[int] = 5
    ORACLE_SAMPLES: Final[int] = 10
    PPT_SAMPLES: Final[int] = 20
    EXPECTATION_SAMPLES: Final[int] = 50
