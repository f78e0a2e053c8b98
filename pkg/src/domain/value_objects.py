"""Value objects for domain layer."""
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from src.constants import ToleranceConstants
from src.infrastructure.errors import (
    DimMismatchError,
    NotAStateError,
    NotHermitianError,
    NotUnitVectorError,
    ValidationError,
)

ArrayLike = Union[np.ndarray, Sequence]

# one qubit or two qubits
OPERATOR_DIMS: tuple[int, ...] = (2, 4)


def _frozen(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


def _real_array(values: ArrayLike, shape: tuple[int, ...], name: str) -> np.ndarray:
    array = np.array(values, dtype=float)
    if array.shape != shape:
        raise DimMismatchError(f"{name} must have shape {shape}, got {array.shape}")
    if not np.all(np.isfinite(array)):
        raise ValidationError(f"{name} contains non-finite values")
    return _frozen(array)


def _unit_vector(values: ArrayLike, name: str) -> np.ndarray:
    vector = _real_array(values, (3,), name)
    norm = float(np.linalg.norm(vector))
    if abs(norm - 1.0) > ToleranceConstants.UNIT_NORM:
        raise NotUnitVectorError(f"{name} must be a unit vector, norm is {norm!r}")
    return vector


@dataclass(frozen=True, eq=False)
class HermitianOp:
    """Hermitian matrix viewed as a vector of the real space H_s.

    Inputs within ``ToleranceConstants.HERMITICITY`` of Hermitian are
    symmetrized to (x + x†)/2; anything further off is rejected.
    """

    entries: np.ndarray

    def __post_init__(self) -> None:
        matrix = np.array(self.entries, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.size == 0:
            raise DimMismatchError(
                f"Operator must be a non-empty square matrix, got shape {matrix.shape}"
            )
        if matrix.shape[0] not in OPERATOR_DIMS:
            raise DimMismatchError(
                f"Operator dimension must be one of {OPERATOR_DIMS}, got {matrix.shape[0]}"
            )
        if not np.all(np.isfinite(matrix)):
            raise ValidationError("Operator contains non-finite entries")
        deviation = float(np.max(np.abs(matrix - matrix.conj().T)))
        if deviation > ToleranceConstants.HERMITICITY:
            raise NotHermitianError(
                f"Matrix deviates from Hermitian by {deviation:.3e}"
            )
        object.__setattr__(self, "entries", _frozen((matrix + matrix.conj().T) / 2))

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    def __add__(self, other: "HermitianOp") -> "HermitianOp":
        _require_same_dim(self, other)
        return HermitianOp(self.entries + other.entries)

    def __sub__(self, other: "HermitianOp") -> "HermitianOp":
        _require_same_dim(self, other)
        return HermitianOp(self.entries - other.entries)

    def __mul__(self, scalar: float) -> "HermitianOp":
        return HermitianOp(float(scalar) * self.entries)

    __rmul__ = __mul__

    def __truediv__(self, scalar: float) -> "HermitianOp":
        return HermitianOp(self.entries / float(scalar))

    def __neg__(self) -> "HermitianOp":
        return HermitianOp(-self.entries)

    def allclose(self, other: "HermitianOp", atol: float = 1e-12) -> bool:
        """Entrywise comparison."""
        return self.dim == other.dim and bool(
            np.allclose(self.entries, other.entries, rtol=0.0, atol=atol)
        )

    @classmethod
    def identity(cls, dim: int) -> "HermitianOp":
        return cls(np.eye(dim, dtype=complex))

    @classmethod
    def zeros(cls, dim: int) -> "HermitianOp":
        return cls(np.zeros((dim, dim), dtype=complex))


def _require_same_dim(x: HermitianOp, y: HermitianOp) -> None:
    if x.dim != y.dim:
        raise DimMismatchError(f"Dimension mismatch: {x.dim} vs {y.dim}")


@dataclass(frozen=True, eq=False)
class PauliCoeffs2Q:
    """Coefficients of A = α1 + a_i σ^i⊗1 + b_i 1⊗σ^i + c_ij σ^i⊗σ^j."""

    alpha: float
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self) -> None:
        if not np.isfinite(self.alpha):
            raise ValidationError("alpha must be finite")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "a", _real_array(self.a, (3,), "a"))
        object.__setattr__(self, "b", _real_array(self.b, (3,), "b"))
        object.__setattr__(self, "c", _real_array(self.c, (3, 3), "c"))

    def squared_norm(self) -> float:
        """α² + Σa² + Σb² + Σc², which equals ‖A‖₂²/4."""
        return float(
            self.alpha**2
            + np.sum(self.a**2)
            + np.sum(self.b**2)
            + np.sum(self.c**2)
        )

    def allclose(self, other: "PauliCoeffs2Q", atol: float = 1e-12) -> bool:
        return (
            abs(self.alpha - other.alpha) <= atol
            and np.allclose(self.a, other.a, rtol=0.0, atol=atol)
            and np.allclose(self.b, other.b, rtol=0.0, atol=atol)
            and np.allclose(self.c, other.c, rtol=0.0, atol=atol)
        )


@dataclass(frozen=True, eq=False)
class ProductState:
    """Pure two-qubit product state given by Alice's and Bob's Bloch vectors."""

    n: np.ndarray
    m: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "n", _unit_vector(self.n, "n"))
        object.__setattr__(self, "m", _unit_vector(self.m, "m"))

    @classmethod
    def normalized(cls, n: ArrayLike, m: ArrayLike) -> "ProductState":
        """Build from vectors that are unit up to rounding."""
        n_arr = np.asarray(n, dtype=float)
        m_arr = np.asarray(m, dtype=float)
        return cls(n_arr / np.linalg.norm(n_arr), m_arr / np.linalg.norm(m_arr))

    @property
    def correlation(self) -> float:
        """n·m."""
        return float(self.n @ self.m)


@dataclass(frozen=True, eq=False)
class CVec:
    """Diagonal correlation coefficients (c₁, c₂, c₃) of the w_c family."""

    c: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "c", _real_array(self.c, (3,), "c"))

    @property
    def l1_norm(self) -> float:
        return float(np.sum(np.abs(self.c)))


@dataclass(frozen=True, eq=False)
class SzState:
    """One-qubit Bloch vector w, ‖w‖ ≤ 1."""

    w: np.ndarray

    def __post_init__(self) -> None:
        vector = _real_array(self.w, (3,), "w")
        norm = float(np.linalg.norm(vector))
        if norm > 1.0 + ToleranceConstants.UNIT_NORM:
            raise NotAStateError(f"Bloch vector norm {norm!r} exceeds 1")
        object.__setattr__(self, "w", vector)

    @property
    def transverse_norm(self) -> float:
        """(w_x² + w_y²)^{1/2}."""
        return float(np.hypot(self.w[0], self.w[1]))


@dataclass(frozen=True, eq=False)
class ChshSetting:
    """Measurement directions a, a' (Alice) and b, b' (Bob)."""

    a: np.ndarray
    a_prime: np.ndarray
    b: np.ndarray
    b_prime: np.ndarray

    def __post_init__(self) -> None:
        for name in ("a", "a_prime", "b", "b_prime"):
            object.__setattr__(self, name, _unit_vector(getattr(self, name), name))


@dataclass(frozen=True, eq=False)
class BellSetting:
    """Bell's three directions a, b, b'."""

    a: np.ndarray
    b: np.ndarray
    b_prime: np.ndarray

    def __post_init__(self) -> None:
        for name in ("a", "b", "b_prime"):
            object.__setattr__(self, name, _unit_vector(getattr(self, name), name))
