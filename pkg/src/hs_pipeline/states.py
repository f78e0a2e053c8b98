"""Named two-qubit state families, partial transposition and the PPT test."""
from typing import Sequence, Union

import numpy as np

from src.constants import ToleranceConstants
from src.domain.entities import DensityMatrix
from src.domain.value_objects import (
    CVec,
    HermitianOp,
    PauliCoeffs2Q,
    ProductState,
    SzState,
)
from src.hs_pipeline.pauli_space import (
    IDENTITY_2,
    bloch_operator,
    from_bloch,
    from_pauli,
    local_operator,
)
from src.infrastructure.errors import DimMismatchError, NotAStateError, ValidationError

# c-space vertices of the Bell projectors P₀..P₃
BELL_VERTICES = np.array(
    [
        [-1.0, -1.0, -1.0],
        [-1.0, 1.0, 1.0],
        [1.0, -1.0, 1.0],
        [1.0, 1.0, -1.0],
    ]
)
BELL_VERTICES.flags.writeable = False

WERNER_MIN_ALPHA = -1.0 / 3.0
WERNER_MAX_ALPHA = 1.0

# Σ(|a|² + |b|² + |c|²) ≤ 1/48 keeps ρ = 1/4 + X positive (‖X‖₂² ≤ 1/12)
BALL_RADIUS_SQUARED = 1.0 / 48.0

StateLike = Union[DensityMatrix, HermitianOp]


def _op(x: StateLike) -> HermitianOp:
    return x.op if isinstance(x, DensityMatrix) else x


def qubit_density(direction: np.ndarray) -> np.ndarray:
    """½(1 + n·σ) as a 2×2 matrix."""
    return (IDENTITY_2 + bloch_operator(direction)) / 2.0


def product_density(state: ProductState) -> DensityMatrix:
    """Pure product state ρ = ¼(1 + n·σ⊗1 + 1⊗m·σ + n_i m_j σ^i⊗σ^j)."""
    return DensityMatrix(
        HermitianOp(local_operator(qubit_density(state.n), qubit_density(state.m)))
    )


def product_state(n: Sequence[float], m: Sequence[float]) -> DensityMatrix:
    """Pure product state from Alice's and Bob's Bloch vectors.

    Raises:
        NotUnitVectorError: If either vector is not unit length
    """
    return product_density(ProductState(np.asarray(n), np.asarray(m)))


def mixture(states: Sequence[StateLike], weights: Sequence[float]) -> DensityMatrix:
    """Convex combination Σ λ_k ρ_k.

    Raises:
        ValidationError: If weights are negative or do not sum to 1
    """
    lam = np.asarray(weights, dtype=float)
    if len(states) == 0 or lam.shape != (len(states),):
        raise ValidationError("Need one weight per state")
    if np.any(lam < 0) or abs(lam.sum() - 1.0) > ToleranceConstants.NORMALIZATION:
        raise ValidationError("Weights must be nonnegative and sum to 1")
    entries = sum(weight * _op(state).entries for weight, state in zip(lam, states))
    return DensityMatrix(HermitianOp(entries))


def werner(alpha: float) -> DensityMatrix:
    """w_α = (1 − α σ_A·σ_B)/4.

    Raises:
        NotAStateError: If α is outside [−1/3, 1]
    """
    slack = ToleranceConstants.UNIT_NORM
    if not WERNER_MIN_ALPHA - slack <= alpha <= WERNER_MAX_ALPHA + slack:
        raise NotAStateError(f"Werner parameter {alpha!r} outside [-1/3, 1]")
    return DensityMatrix(
        from_pauli(
            PauliCoeffs2Q(
                alpha=0.25, a=np.zeros(3), b=np.zeros(3), c=-alpha / 4.0 * np.eye(3)
            )
        )
    )


def w_c_operator(c: Union[CVec, Sequence[float]]) -> HermitianOp:
    """¼(1 + Σ c_i σ^i⊗σ^i), without the positivity check."""
    cvec = c if isinstance(c, CVec) else CVec(np.asarray(c, dtype=float))
    return from_pauli(
        PauliCoeffs2Q(
            alpha=0.25, a=np.zeros(3), b=np.zeros(3), c=np.diag(cvec.c) / 4.0
        )
    )


def w_c_state(c: Union[CVec, Sequence[float]]) -> DensityMatrix:
    """Diagonal-correlation state w_c.

    Raises:
        NotAStateError: If c lies outside the Bell tetrahedron
    """
    cvec = c if isinstance(c, CVec) else CVec(np.asarray(c, dtype=float))
    spectrum = (1.0 + BELL_VERTICES @ cvec.c) / 4.0
    if spectrum.min() < -ToleranceConstants.PSD:
        raise NotAStateError(
            f"c = {tuple(cvec.c)} lies outside the tetrahedron of states"
        )
    return DensityMatrix(w_c_operator(cvec))


def bell_projectors() -> tuple[DensityMatrix, DensityMatrix, DensityMatrix, DensityMatrix]:
    """P₀ (singlet), P₁, P₂, P₃."""
    return tuple(w_c_state(vertex) for vertex in BELL_VERTICES)  # type: ignore[return-value]


def flip_operator() -> HermitianOp:
    """A_t = ¼(1 + σ_A·σ_B), a tangent functional of S."""
    return w_c_operator(np.ones(3))


def tangent_family(a: float, b: float) -> HermitianOp:
    """Tangent functionals at ρ_z with positive partial transpose.

    A = (a² + b²)⁻¹ (ab(|00⟩⟨11| + |11⟩⟨00|) + a²|01⟩⟨01| + b²|10⟩⟨10|).
    """
    norm = a * a + b * b
    if norm == 0.0:
        raise ValidationError("Parameters a and b cannot both vanish")
    entries = np.zeros((4, 4))
    entries[0, 3] = entries[3, 0] = a * b
    entries[1, 1] = a * a
    entries[2, 2] = b * b
    return HermitianOp(entries / norm)


def partial_transpose_B(x: StateLike) -> HermitianOp:
    """Transpose Bob's factor: ρ_{ab,a'b'} → ρ_{ab',a'b}."""
    op = _op(x)
    if op.dim != 4:
        raise DimMismatchError(f"Partial transpose needs a 4x4 operator, got {op.dim}")
    blocks = op.entries.reshape(2, 2, 2, 2)
    return HermitianOp(blocks.transpose(0, 3, 2, 1).reshape(4, 4))


def min_pt_eigenvalue(x: StateLike) -> float:
    """Smallest eigenvalue of the partial transpose."""
    return float(np.linalg.eigvalsh(partial_transpose_B(x).entries)[0])


def is_ppt(w: StateLike) -> bool:
    """Positive partial transpose; exact separability test for two qubits."""
    return min_pt_eigenvalue(w) >= -ToleranceConstants.PSD


def satisfies_ball_criterion(p: PauliCoeffs2Q) -> bool:
    """Sufficient test for a density matrix: ρ lies in the largest ball around 1/4."""
    if abs(p.alpha - 0.25) > ToleranceConstants.HERMITICITY:
        return False
    return p.squared_norm() - p.alpha**2 <= BALL_RADIUS_SQUARED


def one_qubit_state(w: Union[SzState, Sequence[float]]) -> DensityMatrix:
    """½(1 + w·σ)."""
    sz = w if isinstance(w, SzState) else SzState(np.asarray(w, dtype=float))
    return DensityMatrix(from_bloch(0.5, sz.w / 2.0))
