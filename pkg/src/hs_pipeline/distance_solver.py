"""Hilbert-Schmidt distance to the separable set.

D(w) = min over separable ρ of ‖ρ − w‖₂ is computed by Gilbert projection onto
the convex hull of pure product states. Every step yields the two-sided
certificate

    min_{ρ∈S} (ρ − w | (ρ' − w)/‖ρ' − w‖₂)  ≤  D(w)  ≤  ‖ρ' − w‖₂,

for the current separable iterate ρ'.
"""
import logging
from dataclasses import dataclass, field, replace
from typing import Callable, Hashable, Optional, Sequence, Union

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import nnls

from config.solver_config import SolverDefaults
from src.constants import ToleranceConstants
from src.domain.entities import BoundsRecord, DensityMatrix, DistanceReport, WeightedAtom
from src.domain.value_objects import HermitianOp, ProductState, SzState
from src.hs_pipeline.pauli_space import from_hs_vector, hs_inner, hs_norm, to_hs_vector
from src.hs_pipeline.product_oracle import ProductOracle
from src.hs_pipeline.states import is_ppt, one_qubit_state, product_density
from src.infrastructure.errors import (
    DimMismatchError,
    NotSeparableError,
    ZeroDirectionError,
)
from src.infrastructure.settings import SolverConfig

logger = logging.getLogger(__name__)

# direction -> (extreme point in HS coordinates, label)
LinearOracle = Callable[[np.ndarray], tuple[np.ndarray, Hashable]]

_DUPLICATE_ATOM = 1e-12


@dataclass
class _Hull:
    """Active atoms of the current iterate ρ' = Σ λ_k v_k."""

    vectors: list[np.ndarray]
    labels: list[Hashable]
    weights: np.ndarray

    @property
    def point(self) -> np.ndarray:
        return np.asarray(self.weights) @ np.vstack(self.vectors)

    def index_of(self, vector: np.ndarray) -> Optional[int]:
        for k, existing in enumerate(self.vectors):
            if np.linalg.norm(existing - vector) <= _DUPLICATE_ATOM:
                return k
        return None

    def prune(self, max_atoms: int) -> None:
        keep = self.weights >= ToleranceConstants.WEIGHT_PRUNE
        self._keep(keep)
        if len(self.vectors) > max_atoms:
            logger.debug("Atom list exceeded %d entries; reducing", max_atoms)
            self.reduce(SolverDefaults.CARATHEODORY_ATOMS)

    def reduce(self, limit: int) -> None:
        """Carathéodory reduction to at most ``limit`` atoms; the point is unchanged.

        Each pass moves the weights along an affine dependence of the atoms
        until one weight reaches zero.
        """
        while len(self.vectors) > limit:
            points = np.vstack(self.vectors)
            kernel = null_space(np.vstack([points.T, np.ones(len(self.vectors))]))
            if kernel.shape[1] == 0:
                logger.warning("No affine dependence among %d atoms", len(self.vectors))
                return
            direction = kernel[:, 0]
            if direction.max() <= 0.0:
                direction = -direction
            positive = np.flatnonzero(direction > 0.0)
            ratios = self.weights[positive] / direction[positive]
            drop = positive[np.argmin(ratios)]
            weights = np.clip(self.weights - ratios.min() * direction, 0.0, None)
            weights[drop] = 0.0
            self.weights = weights
            self._keep(weights > 0.0)

    def _keep(self, keep: np.ndarray) -> None:
        self.vectors = [v for v, k in zip(self.vectors, keep) if k]
        self.labels = [lab for lab, k in zip(self.labels, keep) if k]
        weights = self.weights[keep]
        self.weights = weights / weights.sum()


@dataclass
class _Projection:
    hull: _Hull
    upper: float
    lower: float
    iterations: int
    converged: bool
    trace: list[BoundsRecord] = field(default_factory=list)


def _simplex_least_squares(points: np.ndarray, target: np.ndarray) -> np.ndarray:
    """argmin ‖Σλ_k p_k − t‖ over the probability simplex.

    With P_k = p_k − t, NNLS on [P; 1ᵀ]μ ≈ [0; 1] returns μ = sλ* with
    s = 1/(1 + ‖Pλ*‖²) > 0, so λ* = μ/Σμ exactly.
    """
    shifted = (points - target).T
    system = np.vstack([shifted, np.ones((1, points.shape[0]))])
    rhs = np.zeros(system.shape[0])
    rhs[-1] = 1.0
    mu, _ = nnls(system, rhs)
    return mu / mu.sum()


def _project(
    target: np.ndarray,
    hull: _Hull,
    linear_oracle: LinearOracle,
    config: SolverConfig,
) -> _Projection:
    """Gilbert iteration with a fully corrective reweighting of the active atoms."""
    best_lower = 0.0
    trace: list[BoundsRecord] = []
    x = hull.point

    for iteration in range(1, config.max_iters + 1):
        d = x - target
        upper = float(np.linalg.norm(d))
        if upper <= ToleranceConstants.ZERO_NORM:
            trace.append(BoundsRecord(iteration, 0.0, upper))
            return _Projection(hull, upper, 0.0, iteration, True, trace)

        extreme, label = linear_oracle(d)
        lower = float((extreme - target) @ d) / upper
        best_lower = max(best_lower, lower)
        trace.append(BoundsRecord(iteration, best_lower, upper))
        logger.debug("iteration %d: lower=%.12g upper=%.12g", iteration, best_lower, upper)

        if upper - best_lower < config.tol:
            return _Projection(hull, upper, best_lower, iteration, True, trace)

        k = hull.index_of(extreme)
        if k is None:
            hull.vectors.append(extreme)
            hull.labels.append(label)
            hull.weights = np.append(hull.weights, 0.0)
            k = len(hull.vectors) - 1

        # Gilbert line search toward the new extreme point
        step = extreme - x
        step_sq = float(step @ step)
        t_star = 0.0 if step_sq == 0.0 else float(np.clip(-(d @ step) / step_sq, 0.0, 1.0))
        line_weights = (1.0 - t_star) * hull.weights
        line_weights[k] += t_star

        points = np.vstack(hull.vectors)
        corrective = _simplex_least_squares(points, target)
        line_residual = np.linalg.norm(line_weights @ points - target)
        corrective_residual = np.linalg.norm(corrective @ points - target)
        hull.weights = corrective if corrective_residual <= line_residual else line_weights

        hull.prune(config.max_atoms)
        x = hull.point

    upper = float(np.linalg.norm(x - target))
    logger.warning(
        "Projection stopped at the iteration cap %d with gap %.3e",
        config.max_iters,
        upper - best_lower,
    )
    return _Projection(hull, upper, best_lower, config.max_iters, False, trace)


def _to_density(w: Union[DensityMatrix, HermitianOp]) -> DensityMatrix:
    return w if isinstance(w, DensityMatrix) else DensityMatrix(w)


class DistanceSolver:
    """Project states onto the separable set."""

    def __init__(
        self,
        config: Optional[SolverConfig] = None,
        oracle: Optional[ProductOracle] = None,
    ):
        """Initialize solver.

        Args:
            config: Tolerance, iteration cap and oracle settings
            oracle: Product-state oracle (built from ``config.oracle`` if omitted)
        """
        self._config = config or SolverConfig()
        self._oracle = oracle or ProductOracle(self._config.oracle)

    @property
    def config(self) -> SolverConfig:
        return self._config

    @property
    def oracle(self) -> ProductOracle:
        return self._oracle

    def _product_oracle(self, direction: np.ndarray) -> tuple[np.ndarray, ProductState]:
        result = self._oracle.min_over_separable(from_hs_vector(direction, 4))
        return to_hs_vector(product_density(result.state).op), result.state

    def distance(self, w: Union[DensityMatrix, HermitianOp]) -> DistanceReport:
        """D(w) with a certified lower bound and the minimizer's decomposition.

        Not reaching the gap tolerance is reported through ``converged=False``.
        With ``trust_ppt`` a PPT input is still projected; D = 0 is reported only
        when the projection reaches the tolerance as well.

        Raises:
            NotAStateError: If w is not a density matrix
            DimMismatchError: If w is not a two-qubit operator
        """
        state = _to_density(w)
        if state.dim != 4:
            raise DimMismatchError(f"Distance needs a two-qubit state, got dim {state.dim}")

        # ρ'₀ = 1/4 as the four ±z product states
        corners = [
            ProductState(np.array([0.0, 0.0, s_a]), np.array([0.0, 0.0, s_b]))
            for s_a in (1.0, -1.0)
            for s_b in (1.0, -1.0)
        ]
        hull = _Hull(
            vectors=[to_hs_vector(product_density(c).op) for c in corners],
            labels=list(corners),
            weights=np.full(4, 0.25),
        )
        projection = _project(
            to_hs_vector(state.op), hull, self._product_oracle, self._config
        )
        report = self._report(projection, dim=4)
        if self._config.trust_ppt and is_ppt(state):
            return self._trusted_ppt(state, report)
        return report

    def _trusted_ppt(self, state: DensityMatrix, report: DistanceReport) -> DistanceReport:
        """D = 0 with w as its own minimizer, once the projection agrees.

        The atoms stay those of the projection, a product decomposition within
        the gap tolerance of w.
        """
        if report.converged and report.upper_bound <= self._config.tol:
            logger.info("PPT input confirmed by projection; reporting distance 0")
            return replace(report, distance=0.0, minimizer=state, lower_bound=0.0)
        logger.warning(
            "PPT input but projection ended at D=%.3e (converged=%s); keeping the projection",
            report.distance,
            report.converged,
        )
        return report

    def variational_bounds(
        self,
        w: Union[DensityMatrix, HermitianOp],
        rho_prime: Union[DensityMatrix, HermitianOp],
    ) -> tuple[float, float]:
        """Two-sided bounds on D(w) from one separable trial state ρ'.

        Raises:
            NotSeparableError: If ρ' fails the PPT test
            ZeroDirectionError: If ρ' equals w
        """
        target = _to_density(w)
        trial = _to_density(rho_prime)
        if not is_ppt(trial):
            raise NotSeparableError("Trial state rho' is not separable")

        difference = trial.op - target.op
        upper = hs_norm(difference)
        if upper <= ToleranceConstants.ZERO_NORM:
            raise ZeroDirectionError("Trial state coincides with w")

        unit = difference / upper
        sep_min = self._oracle.min_over_separable(unit).value
        return sep_min - hs_inner(target.op, unit), upper

    def distance_sz_numeric(self, w: Union[SzState, Sequence[float]]) -> DistanceReport:
        """Projection of a one-qubit state onto S_z = {½(1 + λσ_z), |λ| ≤ 1}.

        Runs the same Gilbert machinery with the poles λ = ±1 as extreme points.
        """
        sz = w if isinstance(w, SzState) else SzState(np.asarray(w, dtype=float))
        poles = {
            sign: to_hs_vector(one_qubit_state(np.array([0.0, 0.0, float(sign)])).op)
            for sign in (1, -1)
        }

        def pole_oracle(direction: np.ndarray) -> tuple[np.ndarray, int]:
            sign = min(poles, key=lambda s: float(poles[s] @ direction))
            return poles[sign], sign

        hull = _Hull(
            vectors=[poles[1], poles[-1]],
            labels=[1, -1],
            weights=np.full(2, 0.5),
        )
        projection = _project(
            to_hs_vector(one_qubit_state(sz).op), hull, pole_oracle, self._config
        )
        return self._report(projection, dim=2)

    def _report(self, projection: _Projection, dim: int) -> DistanceReport:
        hull = projection.hull
        hull.reduce(SolverDefaults.CARATHEODORY_ATOMS)
        minimizer = DensityMatrix(from_hs_vector(hull.point, dim))
        logger.info(
            "distance %.9g after %d iterations (gap %.2e, converged=%s)",
            projection.upper,
            projection.iterations,
            max(0.0, projection.upper - projection.lower),
            projection.converged,
        )
        return DistanceReport(
            distance=projection.upper,
            minimizer=minimizer,
            atoms=tuple(
                WeightedAtom(weight=float(weight), state=label)
                for weight, label in zip(hull.weights, hull.labels)
            ),
            lower_bound=min(projection.lower, projection.upper),
            upper_bound=projection.upper,
            iterations=projection.iterations,
            converged=projection.converged,
            trace=tuple(projection.trace),
        )


def distance_sz_model(w: Union[SzState, Sequence[float]]) -> tuple[float, float]:
    """Closed form for S_z: D = (w_x² + w_y²)^{1/2}/√2, attained at λ = w_z.

    Raises:
        NotAStateError: If ‖w‖ > 1
    """
    sz = w if isinstance(w, SzState) else SzState(np.asarray(w, dtype=float))
    return sz.transverse_norm / np.sqrt(2.0), float(sz.w[2])
