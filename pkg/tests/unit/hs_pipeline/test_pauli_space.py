"""Tests for Pauli coordinates and HS-space geometry."""
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from src.domain.value_objects import HermitianOp, PauliCoeffs2Q
from src.hs_pipeline.pauli_space import (
    PAULI_X,
    PAULI_Z,
    conjugate,
    from_bloch,
    from_hs_vector,
    from_pauli,
    hs_inner,
    hs_norm,
    induced_orthogonal,
    local_normal_form,
    sigma_dot_sigma,
    to_bloch,
    to_hs_vector,
    to_pauli,
)
from src.infrastructure.errors import DimMismatchError, ValidationError
from src.utils.random_ensembles import random_hermitian, random_local_unitary, random_unitary

pytestmark = pytest.mark.unit

finite = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False)
vectors16 = arrays(np.float64, 16, elements=finite)


class TestInnerProduct:
    def test_identity_norm(self):
        assert hs_norm(HermitianOp.identity(4)) == pytest.approx(2.0)

    def test_sigma_dot_sigma_norm(self):
        assert hs_norm(sigma_dot_sigma()) == pytest.approx(2.0 * np.sqrt(3.0))

    def test_pauli_matrices_orthogonal(self):
        assert hs_inner(HermitianOp(PAULI_X), HermitianOp(PAULI_Z)) == 0.0

    def test_dim_mismatch(self):
        with pytest.raises(DimMismatchError):
            hs_inner(HermitianOp.identity(2), HermitianOp.identity(4))


class TestPauliCoordinates:
    def test_identity_coefficients(self):
        p = to_pauli(HermitianOp.identity(4))
        assert p.alpha == pytest.approx(1.0)
        np.testing.assert_allclose(p.c, 0.0, atol=1e-15)

    def test_sigma_dot_sigma_coefficients(self):
        np.testing.assert_allclose(to_pauli(sigma_dot_sigma()).c, np.eye(3), atol=1e-15)

    def test_requires_two_qubits(self):
        with pytest.raises(DimMismatchError):
            to_pauli(HermitianOp.identity(2))

    def test_norm_identity(self, rng):
        x = random_hermitian(rng)
        assert to_pauli(x).squared_norm() == pytest.approx(hs_norm(x) ** 2 / 4.0)

    def test_round_trip(self, rng):
        x = random_hermitian(rng)
        assert from_pauli(to_pauli(x)).allclose(x)

    def test_bloch_round_trip(self):
        x = from_bloch(0.5, np.array([0.1, -0.2, 0.3]))
        beta0, r = to_bloch(x)
        assert beta0 == pytest.approx(0.5)
        np.testing.assert_allclose(r, [0.1, -0.2, 0.3])


class TestHsVector:
    @given(vectors16)
    def test_round_trip(self, v):
        np.testing.assert_allclose(to_hs_vector(from_hs_vector(v, 4)), v, atol=1e-12)

    @given(vectors16, vectors16)
    def test_euclidean_product_is_hs_product(self, u, v):
        x, y = from_hs_vector(u, 4), from_hs_vector(v, 4)
        assert float(u @ v) == pytest.approx(hs_inner(x, y), abs=1e-9)

    def test_one_qubit_length(self):
        assert to_hs_vector(HermitianOp.identity(2)).shape == (4,)
        assert np.linalg.norm(to_hs_vector(HermitianOp.identity(2))) == pytest.approx(np.sqrt(2.0))

    def test_wrong_length(self):
        with pytest.raises(DimMismatchError):
            from_hs_vector(np.zeros(5), 4)


class TestUnitaryAction:
    def test_induced_map_is_orthogonal(self, rng):
        o = induced_orthogonal(random_unitary(rng))
        np.testing.assert_allclose(o.T @ o, np.eye(16), atol=1e-10)

    def test_induced_map_matches_conjugation(self, rng):
        u = random_unitary(rng)
        x = random_hermitian(rng)
        np.testing.assert_allclose(
            induced_orthogonal(u) @ to_hs_vector(x),
            to_hs_vector(conjugate(x, u)),
            atol=1e-10,
        )

    def test_preserves_inner_product(self, rng):
        u = random_unitary(rng)
        x, y = random_hermitian(rng), random_hermitian(rng)
        assert hs_inner(conjugate(x, u), conjugate(y, u)) == pytest.approx(hs_inner(x, y))

    def test_rejects_non_unitary(self):
        with pytest.raises(ValidationError):
            induced_orthogonal(2.0 * np.eye(2))


class TestLocalNormalForm:
    def test_reconstructs_correlations(self, rng):
        x = random_hermitian(rng)
        c_diag, r_a, r_b = local_normal_form(x)
        np.testing.assert_allclose(r_a @ np.diag(c_diag) @ r_b.T, to_pauli(x).c, atol=1e-12)
        assert np.linalg.det(r_a) == pytest.approx(1.0)
        assert np.linalg.det(r_b) == pytest.approx(1.0)

    def test_invariant_under_local_unitaries(self, rng):
        x = random_hermitian(rng)
        rotated = conjugate(x, random_local_unitary(rng))
        np.testing.assert_allclose(
            np.abs(local_normal_form(rotated)[0]),
            np.abs(local_normal_form(x)[0]),
            atol=1e-10,
        )

    def test_singlet_has_negative_product(self):
        p = PauliCoeffs2Q(alpha=0.25, a=np.zeros(3), b=np.zeros(3), c=-np.eye(3) / 4.0)
        c_diag, _, _ = local_normal_form(from_pauli(p))
        assert np.prod(c_diag) < 0
