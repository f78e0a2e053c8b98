"""Entanglement witnesses and the generalized Bell inequality.

For a normalized observable A (traceless part of unit HS norm) the bracket

    min_{ρ∈S} (ρ|A) − (w|A)

is positive only for entangled w. Its maximum over A, B(w), equals D(w) and is
attained at A_max = (ρ₀ − w − (ρ₀|ρ₀ − w)1)/‖ρ₀ − w‖₂ built from the distance
minimizer ρ₀.
"""
import logging
from typing import Optional, Sequence, Union

import numpy as np

from src.constants import ClosedFormValues, ToleranceConstants
from src.domain.entities import DensityMatrix, DistanceReport, Witness
from src.domain.value_objects import HermitianOp, PauliCoeffs2Q, ProductState, SzState
from src.hs_pipeline.distance_solver import DistanceSolver
from src.hs_pipeline.pauli_space import from_pauli, hs_inner, hs_norm
from src.hs_pipeline.states import one_qubit_state
from src.infrastructure.errors import DimMismatchError, NotAStateError, ZeroDirectionError

logger = logging.getLogger(__name__)

# |(ρ_ε | 1 + σ_A·σ_B)| ≤ SENSITIVITY_CONSTANT ‖ε‖_F
SENSITIVITY_CONSTANT = ClosedFormValues.SQRT3

StateLike = Union[DensityMatrix, HermitianOp]


def _op(x: StateLike) -> HermitianOp:
    return x.op if isinstance(x, DensityMatrix) else x


def traceless_norm(a: HermitianOp) -> float:
    """‖A − α1‖₂ with α = Tr A / N."""
    alpha = float(np.real(np.trace(a.entries))) / a.dim
    return hs_norm(a - HermitianOp.identity(a.dim) * alpha)


def _sz_poles() -> dict[int, DensityMatrix]:
    return {sign: one_qubit_state([0.0, 0.0, float(sign)]) for sign in (1, -1)}


class WitnessAnalyzer:
    """Build and evaluate witnesses from distance minimizers."""

    def __init__(self, solver: Optional[DistanceSolver] = None):
        self._solver = solver or DistanceSolver()
        self._oracle = self._solver.oracle

    @property
    def solver(self) -> DistanceSolver:
        return self._solver

    def a_max(self, w: StateLike, rho0: StateLike) -> Witness:
        """Optimal witness for w from its nearest separable state ρ₀.

        Two-qubit operators are minimized over S with the product oracle; one-qubit
        operators over the set S_z.

        Raises:
            ZeroDirectionError: If ρ₀ equals w
        """
        target, nearest = _op(w), _op(rho0)
        difference = nearest - target
        norm = hs_norm(difference)
        if norm <= ToleranceConstants.ZERO_NORM:
            raise ZeroDirectionError("Minimizer coincides with w; no witness direction")

        shift = hs_inner(nearest, difference)
        op = (difference - HermitianOp.identity(target.dim) * shift) / norm
        normalized = (
            abs(traceless_norm(op) - 1.0) <= ToleranceConstants.NORMALIZATION
        )

        argmin: Optional[ProductState] = None
        if op.dim == 4:
            result = self._oracle.min_over_separable(op)
            sep_min, argmin = result.value, result.state
        else:
            sep_min = min(hs_inner(pole.op, op) for pole in _sz_poles().values())

        tangency = hs_inner(nearest, op)
        if abs(tangency) > ToleranceConstants.A_MAX_TANGENCY:
            logger.debug("A_max tangency residual %.3e at rho0", tangency)

        return Witness(
            op=op,
            sep_min=sep_min,
            violation_state_value=hs_inner(target, op),
            normalized=normalized,
            sep_argmin=argmin,
        )

    def gbi_violation(self, w: StateLike, a: HermitianOp) -> float:
        """min over S of (ρ|A) minus (w|A)."""
        return self._oracle.min_over_separable(a).value - hs_inner(_op(w), a)

    def certify(
        self, w: StateLike
    ) -> tuple[DistanceReport, Optional[Witness], float]:
        """D(w), the witness A_max and B(w) from one projection.

        B(w) is the maximal bracket, so it is never below the value 0 of the
        trivial observable; separable inputs give B = 0 and no witness.
        """
        state = w if isinstance(w, DensityMatrix) else DensityMatrix(w)
        report = self._solver.distance(state)
        # within the gap tolerance of S there is no reliable witness direction
        if report.distance <= self._solver.config.tol:
            return report, None, 0.0

        try:
            witness = self.a_max(state, report.minimizer)
        except ZeroDirectionError:
            return report, None, 0.0

        b_value = max(0.0, witness.violation)
        logger.info(
            "B(w)=%.9g D(w)=%.9g residual %.2e",
            b_value,
            report.distance,
            abs(b_value - report.distance),
        )
        return report, witness, b_value

    def b_of_w(self, w: StateLike) -> float:
        """B(w) through the optimal witness A_max."""
        _, _, b_value = self.certify(w)
        return b_value

    def is_tangent(self, a: HermitianOp) -> tuple[bool, ProductState]:
        """Whether min over S of (ρ|A) vanishes, with the minimizing product state."""
        result = self._oracle.min_over_separable(a)
        return abs(result.value) <= ToleranceConstants.TANGENCY, result.state

    def sz_gbi_violation(
        self, w: Union[SzState, Sequence[float]], a: HermitianOp
    ) -> tuple[float, int]:
        """Bracket for the one-spin model; S_z minima sit at a pole ½(1 ± σ_z).

        Returns the bracket value and the sign of the minimizing pole.

        Raises:
            DimMismatchError: If A is not 2x2
        """
        if a.dim != 2:
            raise DimMismatchError(f"One-spin witness must be 2x2, got {a.dim}")
        poles = _sz_poles()
        sign = min(poles, key=lambda s: hs_inner(poles[s].op, a))
        return hs_inner(poles[sign].op, a) - hs_inner(one_qubit_state(w).op, a), sign


def perturbed_flip_state(n: Sequence[float], eps: np.ndarray) -> HermitianOp:
    """ρ_ε = ¼(1 + n·σ⊗1 − 1⊗n·σ − (nnᵀ + ε)_ij σ^i⊗σ^j)."""
    anti = ProductState(np.asarray(n, dtype=float), -np.asarray(n, dtype=float))
    correlation = np.outer(anti.n, anti.n) + np.asarray(eps, dtype=float)
    return from_pauli(
        PauliCoeffs2Q(alpha=0.25, a=anti.n / 4.0, b=anti.m / 4.0, c=-correlation / 4.0)
    )


def witness_sensitivity(n: Sequence[float], eps: np.ndarray) -> float:
    """(ρ_ε | 1 + σ_A·σ_B), which equals −Tr ε.

    ρ_ε is a state only to first order in ε, so eigenvalues down to
    −(‖ε‖_F/4 + 1e-10) are accepted.

    Raises:
        NotAStateError: If ρ_ε is further from positive than that
        NotUnitVectorError: If n is not a unit vector
    """
    eps = np.asarray(eps, dtype=float)
    if eps.shape != (3, 3):
        raise DimMismatchError(f"eps must be 3x3, got {eps.shape}")
    rho = perturbed_flip_state(n, eps)
    lowest = float(np.linalg.eigvalsh(rho.entries)[0])
    allowance = 0.25 * float(np.linalg.norm(eps)) + ToleranceConstants.PSD
    if lowest < -allowance:
        raise NotAStateError(f"rho_eps has eigenvalue {lowest:.3e}")

    flip = from_pauli(
        PauliCoeffs2Q(alpha=1.0, a=np.zeros(3), b=np.zeros(3), c=np.eye(3))
    )
    return hs_inner(rho, flip)
