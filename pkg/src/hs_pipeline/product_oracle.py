"""Linear optimization over the separable set.

Extrema of (ρ|X) over S are attained at pure product states, where

    (ρ|X) = α + n·a + m·b + nᵀ C m

for the Pauli coordinates (α, a, b, C) of X. Each half-step of the see-saw is an
exact linear optimization over one sphere, so the objective is monotone.
"""
import logging
from typing import Optional

import numpy as np

from config.solver_config import OracleDefaults
from src.constants import ToleranceConstants
from src.domain.entities import OracleResult
from src.domain.value_objects import HermitianOp, ProductState
from src.hs_pipeline.pauli_space import to_pauli
from src.infrastructure.errors import OracleError, ValidationError
from src.infrastructure.settings import OracleConfig

logger = logging.getLogger(__name__)

_DEGENERATE_NORM = 1e-15

AXIS_DIRECTIONS = np.array(
    [
        [1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0],
    ]
)


def fibonacci_sphere(count: int) -> np.ndarray:
    """Near-uniform deterministic points on the unit sphere, shape (count, 3)."""
    if count < 1:
        raise ValidationError("Need at least one grid point")
    index = np.arange(count) + 0.5
    z = 1.0 - 2.0 * index / count
    radius = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    phi = np.pi * (3.0 - np.sqrt(5.0)) * index
    return np.column_stack([radius * np.cos(phi), radius * np.sin(phi), z])


def _normalize_rows(
    vectors: np.ndarray, previous: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Row-normalize; rows with vanishing norm keep ``previous``.

    Returns the normalized rows and a mask of degenerate rows.
    """
    norms = np.linalg.norm(vectors, axis=1)
    degenerate = norms < _DEGENERATE_NORM
    safe = np.where(degenerate, 1.0, norms)
    result = vectors / safe[:, None]
    result[degenerate] = previous[degenerate]
    return result, degenerate


class ProductOracle:
    """Multistart see-saw over pure product states."""

    def __init__(self, config: Optional[OracleConfig] = None):
        """Initialize oracle.

        Args:
            config: Restart count, tolerance and seed (defaults if omitted)
        """
        self._config = config or OracleConfig()

    @property
    def config(self) -> OracleConfig:
        return self._config

    @staticmethod
    def evaluate(x: HermitianOp, state: ProductState) -> float:
        """(ρ|X) = α + n·a + m·b + nᵀCm for the product state ρ(n, m)."""
        p = to_pauli(x)
        return float(p.alpha + state.n @ p.a + state.m @ p.b + state.n @ p.c @ state.m)

    def _starts(self) -> np.ndarray:
        rng = np.random.default_rng(self._config.seed)
        random = rng.normal(size=(self._config.restarts, 3))
        random /= np.linalg.norm(random, axis=1)[:, None]
        return np.vstack([AXIS_DIRECTIONS, random])

    def min_over_separable(self, x: HermitianOp) -> OracleResult:
        """Minimize (ρ|X) over pure product states.

        The value is attained by the returned state, so it is an upper bound on
        the true minimum; the multistart makes it exact in practice.

        Raises:
            DimMismatchError: If X is not 4x4
            OracleError: If an alternating step increases the objective
        """
        p = to_pauli(x)
        alpha, a, b, c = p.alpha, p.a, p.b, p.c

        def objective(n: np.ndarray, m: np.ndarray) -> np.ndarray:
            return alpha + n @ a + m @ b + np.einsum("ki,ij,kj->k", n, c, m)

        n = self._starts()
        m, _ = _normalize_rows(-(b + n @ c), np.tile(AXIS_DIRECTIONS[4], (len(n), 1)))
        value = objective(n, m)
        done = np.zeros(len(n), dtype=bool)

        iterations = 0
        for iterations in range(1, self._config.max_iters + 1):
            n, stuck_n = _normalize_rows(-(a + m @ c.T), n)
            m, stuck_m = _normalize_rows(-(b + n @ c), m)
            new_value = objective(n, m)

            slack = ToleranceConstants.MONOTONE_SLACK * (1.0 + np.abs(value))
            if np.any(new_value > value + slack):
                worst = int(np.argmax(new_value - value))
                raise OracleError(
                    f"See-saw objective increased at start {worst}: "
                    f"{value[worst]!r} -> {new_value[worst]!r}"
                )

            done |= (value - new_value < self._config.tol) | stuck_n | stuck_m
            value = new_value
            if done.all():
                break

        best = int(np.argmin(value))
        state = ProductState.normalized(n[best], m[best])
        logger.debug(
            "see-saw finished after %d iterations, best start %d of %d",
            iterations,
            best,
            len(value),
        )
        return OracleResult(
            value=self.evaluate(x, state),
            state=state,
            restarts_used=len(value),
            converged=bool(done[best]),
            iterations=iterations,
        )

    def max_over_separable(self, x: HermitianOp) -> OracleResult:
        """Maximize (ρ|X) over pure product states."""
        result = self.min_over_separable(-x)
        return OracleResult(
            value=-result.value,
            state=result.state,
            restarts_used=result.restarts_used,
            converged=result.converged,
            iterations=result.iterations,
        )

    def max_over_anticorrelated(self, x: HermitianOp) -> OracleResult:
        """Maximize (ρ|X) over pure product states with m = −n.

        The objective α + n·(a − b) − nᵀSn, S = sym(C), is maximized on the
        sphere by minorize-maximize steps n ← normalize(h + 2(Q + λ1)n) with
        Q = −S and λ = ‖Q‖, which never decrease it.

        Raises:
            OracleError: If a step decreases the objective
        """
        p = to_pauli(x)
        h = p.a - p.b
        q = -(p.c + p.c.T) / 2.0
        shifted = q + np.linalg.norm(q, 2) * np.eye(3)

        def objective(n: np.ndarray) -> np.ndarray:
            return p.alpha + n @ h + np.einsum("ki,ij,kj->k", n, q, n)

        n = self._starts()
        value = objective(n)
        done = np.zeros(len(n), dtype=bool)

        iterations = 0
        for iterations in range(1, self._config.max_iters + 1):
            n, stuck = _normalize_rows(h + 2.0 * n @ shifted, n)
            new_value = objective(n)

            slack = ToleranceConstants.MONOTONE_SLACK * (1.0 + np.abs(value))
            if np.any(new_value < value - slack):
                raise OracleError("Anticorrelated ascent decreased the objective")

            done |= (new_value - value < self._config.tol) | stuck
            value = new_value
            if done.all():
                break

        best = int(np.argmax(value))
        direction = n[best] / np.linalg.norm(n[best])
        state = ProductState(direction, -direction)
        return OracleResult(
            value=self.evaluate(x, state),
            state=state,
            restarts_used=len(value),
            converged=bool(done[best]),
            iterations=iterations,
        )

    def grid_oracle(
        self,
        x: HermitianOp,
        resolution: Optional[int] = None,
        maximize: bool = False,
    ) -> OracleResult:
        """Brute-force extremum on a Fibonacci grid of resolution² Alice vectors.

        Bob's vector is optimal in closed form for each grid point, so the
        result is attained by a product state and bounds the true extremum.
        """
        resolution = resolution or self._config.grid_resolution
        if resolution < OracleDefaults.MIN_GRID_RESOLUTION:
            raise ValidationError(
                f"Grid resolution must be at least {OracleDefaults.MIN_GRID_RESOLUTION}"
            )
        p = to_pauli(x)
        sign = -1.0 if maximize else 1.0

        grid = fibonacci_sphere(resolution * resolution)
        # Minimizing sign·(ρ|X): the best m is −normalize(sign·(b + Cᵀn))
        coupling = sign * (p.b + grid @ p.c)
        values = sign * (p.alpha + grid @ p.a) - np.linalg.norm(coupling, axis=1)

        best = int(np.argmin(values))
        bob, _ = _normalize_rows(-coupling[best : best + 1], AXIS_DIRECTIONS[4:5])
        state = ProductState.normalized(grid[best], bob[0])
        return OracleResult(
            value=self.evaluate(x, state),
            state=state,
            restarts_used=len(grid),
            converged=True,
            iterations=1,
        )
