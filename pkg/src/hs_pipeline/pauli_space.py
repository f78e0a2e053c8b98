"""The real Hilbert space H_s of Hermitian operators and its Pauli coordinates.

Basis elements σ_μ⊗σ_ν are stored unnormalized (HS norm 2 per qubit factor);
coefficients carry the 1/4 (two qubits) or 1/2 (one qubit) factor, so that

    A = α 1 + a_i σ^i⊗1 + b_i 1⊗σ^i + c_ij σ^i⊗σ^j,   ‖A‖₂² / 4 = α² + |a|² + |b|² + |c|².
"""

import numpy as np

from src.constants import ToleranceConstants
from src.domain.value_objects import HermitianOp, PauliCoeffs2Q
from src.infrastructure.errors import DimMismatchError, ValidationError

IDENTITY_2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

# σ_0 = 1, σ_1..3 = x, y, z
PAULIS = np.stack([IDENTITY_2, PAULI_X, PAULI_Y, PAULI_Z])
SIGMAS = PAULIS[1:]

# TWO_QUBIT_BASIS[μ, ν] = σ_μ ⊗ σ_ν
TWO_QUBIT_BASIS = np.array(
    [[np.kron(PAULIS[mu], PAULIS[nu]) for nu in range(4)] for mu in range(4)]
)

HS_VECTOR_LENGTH = {2: 4, 4: 16}

for _array in (PAULIS, SIGMAS, TWO_QUBIT_BASIS):
    _array.flags.writeable = False


def hs_inner(x: HermitianOp, y: HermitianOp) -> float:
    """(x|y) = Tr xy.

    Raises:
        DimMismatchError: If the operators have different sizes
    """
    if x.dim != y.dim:
        raise DimMismatchError(f"Dimension mismatch: {x.dim} vs {y.dim}")
    # Tr(XY) = Σ_ij X_ij Y_ji
    return float(np.real(np.sum(x.entries * y.entries.T)))


def hs_norm(x: HermitianOp) -> float:
    """‖x‖₂ = (Tr x²)^{1/2}."""
    return float(np.sqrt(max(hs_inner(x, x), 0.0)))


def _require_dim(x: HermitianOp, dim: int) -> None:
    if x.dim != dim:
        raise DimMismatchError(f"Expected a {dim}x{dim} operator, got {x.dim}x{x.dim}")


def _coefficient_table(x: HermitianOp) -> np.ndarray:
    """T[μ, ν] = Tr(x σ_μ⊗σ_ν) / 4."""
    return np.real(np.einsum("ij,mnji->mn", x.entries, TWO_QUBIT_BASIS)) / 4.0


def to_pauli(x: HermitianOp) -> PauliCoeffs2Q:
    """Pauli coordinates (α, a, b, c) of a two-qubit operator."""
    _require_dim(x, 4)
    table = _coefficient_table(x)
    return PauliCoeffs2Q(
        alpha=table[0, 0],
        a=table[1:, 0],
        b=table[0, 1:],
        c=table[1:, 1:],
    )


def from_pauli(p: PauliCoeffs2Q) -> HermitianOp:
    """Inverse of ``to_pauli``."""
    table = np.empty((4, 4))
    table[0, 0] = p.alpha
    table[1:, 0] = p.a
    table[0, 1:] = p.b
    table[1:, 1:] = p.c
    return HermitianOp(np.einsum("mn,mnij->ij", table, TWO_QUBIT_BASIS))


def to_bloch(x: HermitianOp) -> tuple[float, np.ndarray]:
    """One-qubit coordinates: x = β₀ 1 + r·σ, returns (β₀, r)."""
    _require_dim(x, 2)
    coeffs = np.real(np.einsum("ij,mji->m", x.entries, PAULIS)) / 2.0
    return float(coeffs[0]), coeffs[1:]


def from_bloch(beta0: float, r: np.ndarray) -> HermitianOp:
    """β₀ 1 + r·σ."""
    coeffs = np.concatenate([[beta0], np.asarray(r, dtype=float)])
    return HermitianOp(np.einsum("m,mij->ij", coeffs, PAULIS))


def to_hs_vector(x: HermitianOp) -> np.ndarray:
    """Real coordinates in which the Euclidean product equals (x|y).

    Two qubits: 2·(α, a, b, vec c). One qubit: √2·(β₀, r).
    """
    if x.dim == 4:
        p = to_pauli(x)
        return 2.0 * np.concatenate([[p.alpha], p.a, p.b, p.c.ravel()])
    if x.dim == 2:
        beta0, r = to_bloch(x)
        return np.sqrt(2.0) * np.concatenate([[beta0], r])
    raise DimMismatchError(f"No HS coordinates for dimension {x.dim}")


def from_hs_vector(v: np.ndarray, dim: int) -> HermitianOp:
    """Inverse of ``to_hs_vector``."""
    vector = np.asarray(v, dtype=float)
    if dim not in HS_VECTOR_LENGTH or vector.shape != (HS_VECTOR_LENGTH[dim],):
        raise DimMismatchError(
            f"Vector of shape {vector.shape} does not match dimension {dim}"
        )
    if dim == 2:
        coords = vector / np.sqrt(2.0)
        return from_bloch(coords[0], coords[1:])
    coords = vector / 2.0
    return from_pauli(
        PauliCoeffs2Q(
            alpha=coords[0],
            a=coords[1:4],
            b=coords[4:7],
            c=coords[7:].reshape(3, 3),
        )
    )


def conjugate(x: HermitianOp, unitary: np.ndarray) -> HermitianOp:
    """U x U*."""
    u = np.asarray(unitary, dtype=complex)
    if u.shape != (x.dim, x.dim):
        raise DimMismatchError(f"Unitary of shape {u.shape} cannot act on dim {x.dim}")
    return HermitianOp(u @ x.entries @ u.conj().T)


def induced_orthogonal(unitary: np.ndarray) -> np.ndarray:
    """Matrix O of x ↦ U x U* in HS coordinates.

    Raises:
        ValidationError: If ``unitary`` is not unitary within 1e-10
    """
    u = np.asarray(unitary, dtype=complex)
    dim = u.shape[0]
    if u.shape != (dim, dim) or dim not in HS_VECTOR_LENGTH:
        raise DimMismatchError(f"Unsupported unitary shape {u.shape}")
    if not np.allclose(u @ u.conj().T, np.eye(dim), atol=ToleranceConstants.NORMALIZATION):
        raise ValidationError("Matrix is not unitary")

    size = HS_VECTOR_LENGTH[dim]
    columns = [
        to_hs_vector(conjugate(from_hs_vector(unit, dim), u))
        for unit in np.eye(size)
    ]
    return np.column_stack(columns)


def local_normal_form(x: HermitianOp) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Diagonalize the correlation block by local rotations.

    Returns (c_diag, R_A, R_B) with c = R_A diag(c_diag) R_Bᵀ and R_A, R_B in
    SO(3). Entries of c_diag are ordered by decreasing magnitude; only the last
    one can be negative.
    """
    c = to_pauli(x).c
    left, singular, right_t = np.linalg.svd(c)
    singular = singular.copy()
    if np.linalg.det(left) < 0:
        left[:, -1] *= -1
        singular[-1] *= -1
    if np.linalg.det(right_t) < 0:
        right_t[-1, :] *= -1
        singular[-1] *= -1
    return singular, left, right_t.T


def local_operator(alice: np.ndarray, bob: np.ndarray) -> np.ndarray:
    """alice ⊗ bob."""
    return np.kron(np.asarray(alice, dtype=complex), np.asarray(bob, dtype=complex))


def bloch_operator(direction: np.ndarray) -> np.ndarray:
    """n·σ as a 2×2 matrix."""
    return np.einsum("i,ijk->jk", np.asarray(direction, dtype=float), SIGMAS)


def correlation_operator(c: np.ndarray) -> HermitianOp:
    """Σ_ij c_ij σ^i⊗σ^j."""
    matrix = np.asarray(c, dtype=float)
    return HermitianOp(np.einsum("ij,ijkl->kl", matrix, TWO_QUBIT_BASIS[1:, 1:]))


def sigma_dot_sigma() -> HermitianOp:
    """σ_A·σ_B = Σ_i σ^i⊗σ^i, HS norm 2√3."""
    return correlation_operator(np.eye(3))


def identity(dim: int = 4) -> HermitianOp:
    return HermitianOp.identity(dim)

