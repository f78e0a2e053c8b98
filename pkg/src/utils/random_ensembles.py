"""Seeded random states, unitaries and observables for sampling-based checks."""
from typing import Optional

import numpy as np
from scipy.linalg import expm

from src.domain.entities import DensityMatrix
from src.domain.value_objects import HermitianOp, ProductState
from src.hs_pipeline.states import mixture, product_density


def random_unit_vector(rng: np.random.Generator) -> np.ndarray:
    vector = rng.normal(size=3)
    return vector / np.linalg.norm(vector)


def random_hermitian(rng: np.random.Generator, dim: int = 4, scale: float = 1.0) -> HermitianOp:
    """GUE-like Hermitian matrix."""
    raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return HermitianOp(scale * (raw + raw.conj().T) / 2.0)


def random_unitary(rng: np.random.Generator, dim: int = 4) -> np.ndarray:
    """exp(iH) for a random Hermitian H."""
    return expm(1j * random_hermitian(rng, dim).entries)


def random_local_unitary(rng: np.random.Generator) -> np.ndarray:
    """U_A ⊗ U_B with independent one-qubit factors."""
    return np.kron(random_unitary(rng, 2), random_unitary(rng, 2))


def random_state(rng: np.random.Generator, purity_weight: Optional[float] = None) -> DensityMatrix:
    """p|ψ⟩⟨ψ| + (1 − p)·1/4 with Haar-random |ψ⟩.

    ``purity_weight`` fixes p; it is drawn uniformly from [0, 1] otherwise.
    """
    p = rng.uniform() if purity_weight is None else float(purity_weight)
    psi = rng.normal(size=4) + 1j * rng.normal(size=4)
    psi /= np.linalg.norm(psi)
    pure = np.outer(psi, psi.conj())
    return DensityMatrix(HermitianOp(p * pure + (1.0 - p) * np.eye(4) / 4.0))


def random_product(rng: np.random.Generator) -> ProductState:
    return ProductState.normalized(random_unit_vector(rng), random_unit_vector(rng))


def random_separable_state(rng: np.random.Generator, atoms: int = 4) -> DensityMatrix:
    """Dirichlet-weighted mixture of ``atoms`` random pure product states."""
    weights = rng.dirichlet(np.ones(atoms))
    states = [product_density(random_product(rng)) for _ in range(atoms)]
    return mixture(states, weights / weights.sum())
