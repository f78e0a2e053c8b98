"""Runtime configuration models.

Defaults come from ``config.solver_config``. The JSON config file accepted by the
CLI mirrors ``AppConfig``; process-level settings come from ``HSGEO_*`` environment
variables (or a ``.env`` file).
"""
from pathlib import Path
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from config.solver_config import (
    BellOptimizerDefaults,
    OracleDefaults,
    SolverDefaults,
)


class OracleConfig(BaseModel):
    """Multistart see-saw over pure product states."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    restarts: int = Field(default=OracleDefaults.RESTARTS, ge=0)
    max_iters: int = Field(default=OracleDefaults.MAX_ITERS, ge=1)
    tol: float = Field(default=OracleDefaults.TOL, gt=0.0)
    seed: int = Field(default=OracleDefaults.SEED, ge=0)
    grid_resolution: int = Field(
        default=OracleDefaults.GRID_RESOLUTION,
        ge=OracleDefaults.MIN_GRID_RESOLUTION,
    )


class SolverConfig(BaseModel):
    """Gilbert projection onto the separable set."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    tol: float = Field(default=SolverDefaults.TOL, gt=0.0)
    max_iters: int = Field(default=SolverDefaults.MAX_ITERS, ge=1)
    max_atoms: int = Field(
        default=SolverDefaults.MAX_ATOMS, ge=SolverDefaults.CARATHEODORY_ATOMS
    )
    trust_ppt: bool = SolverDefaults.TRUST_PPT
    oracle: OracleConfig = Field(default_factory=OracleConfig)


class BellOptimizerConfig(BaseModel):
    """Riemannian ascent over measurement settings."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    restarts: int = Field(default=BellOptimizerDefaults.RESTARTS, ge=1)
    max_iters: int = Field(default=BellOptimizerDefaults.MAX_ITERS, ge=1)
    gradient_tol: float = Field(default=BellOptimizerDefaults.GRADIENT_TOL, gt=0.0)
    step: float = Field(default=BellOptimizerDefaults.STEP, gt=0.0)
    seed: int = Field(default=BellOptimizerDefaults.SEED, ge=0)


class AppConfig(BaseModel):
    """Everything a CLI run can be configured with."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    solver: SolverConfig = Field(default_factory=SolverConfig)
    bell: BellOptimizerConfig = Field(default_factory=BellOptimizerConfig)

    @classmethod
    def from_file(cls, path: Path) -> "AppConfig":
        """Load a JSON config file."""
        return cls.model_validate_json(Path(path).read_text(encoding="utf-8"))

    def with_root_seed(self, seed: int) -> "AppConfig":
        """Derive oracle and optimizer seeds from one root seed.

        Sub-seeds come from a fixed ``SeedSequence`` split so the same root seed
        always yields the same pair.
        """
        oracle_seq, bell_seq = np.random.SeedSequence(seed).spawn(2)
        oracle_seed = int(oracle_seq.generate_state(1)[0])
        bell_seed = int(bell_seq.generate_state(1)[0])
        oracle = self.solver.oracle.model_copy(update={"seed": oracle_seed})
        solver = self.solver.model_copy(update={"oracle": oracle})
        bell = self.bell.model_copy(update={"seed": bell_seed})
        return self.model_copy(update={"solver": solver, "bell": bell})


class RuntimeSettings(BaseSettings):
    """Process-level settings from the environment."""

    model_config = SettingsConfigDict(
        env_prefix="HSGEO_", env_file=".env", extra="ignore"
    )

    log_level: str = "WARNING"
    config_file: Optional[Path] = None
