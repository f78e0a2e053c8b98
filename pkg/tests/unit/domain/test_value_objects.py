"""Tests for domain value objects and entities."""
import numpy as np
import pytest

from src.domain.entities import Claim, ClaimRelation, DensityMatrix, DistanceReport, Witness
from src.domain.value_objects import (
    CVec,
    HermitianOp,
    PauliCoeffs2Q,
    ProductState,
    SzState,
)
from src.infrastructure.errors import (
    DimMismatchError,
    NotAStateError,
    NotHermitianError,
    NotUnitVectorError,
    ValidationError,
)

pytestmark = pytest.mark.unit


class TestHermitianOp:
    def test_rejects_non_square(self):
        with pytest.raises(DimMismatchError):
            HermitianOp(np.zeros((2, 3)))

    @pytest.mark.parametrize("dim", [1, 3, 8])
    def test_rejects_unsupported_dimension(self, dim):
        with pytest.raises(DimMismatchError):
            HermitianOp(np.eye(dim))

    @pytest.mark.parametrize("dim", [2, 4])
    def test_accepts_qubit_dimensions(self, dim):
        assert HermitianOp.identity(dim).dim == dim

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitianError):
            HermitianOp(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_symmetrizes_rounding_noise(self):
        op = HermitianOp(np.array([[1.0, 1e-13], [0.0, 2.0]]))
        assert op.entries[0, 1] == pytest.approx(0.5e-13)
        assert op.entries[0, 1] == op.entries[1, 0]

    def test_entries_are_read_only(self):
        op = HermitianOp.identity(2)
        with pytest.raises(ValueError):
            op.entries[0, 0] = 5.0

    def test_arithmetic(self):
        one = HermitianOp.identity(2)
        assert (one + one).allclose(2.0 * one)
        assert (one - one).allclose(HermitianOp.zeros(2))
        assert (-one / 2.0).allclose(one * -0.5)

    def test_dimension_mismatch_in_sum(self):
        with pytest.raises(DimMismatchError):
            HermitianOp.identity(2) + HermitianOp.identity(4)

    def test_validation_errors_are_value_errors(self):
        with pytest.raises(ValueError):
            HermitianOp(np.array([[np.nan]]))


class TestSmallValueObjects:
    def test_product_state_requires_unit_vectors(self):
        with pytest.raises(NotUnitVectorError):
            ProductState(np.array([1.0, 1.0, 0.0]), np.array([0.0, 0.0, 1.0]))

    def test_product_state_normalized(self):
        state = ProductState.normalized([2.0, 0.0, 0.0], [0.0, 0.0, -3.0])
        np.testing.assert_allclose(state.n, [1.0, 0.0, 0.0])
        assert state.correlation == 0.0

    def test_pauli_shapes(self):
        with pytest.raises(DimMismatchError):
            PauliCoeffs2Q(alpha=0.25, a=np.zeros(2), b=np.zeros(3), c=np.eye(3))

    def test_pauli_squared_norm(self):
        p = PauliCoeffs2Q(alpha=1.0, a=[1.0, 0, 0], b=[0, 2.0, 0], c=np.eye(3))
        assert p.squared_norm() == pytest.approx(1.0 + 1.0 + 4.0 + 3.0)

    def test_cvec_l1(self):
        assert CVec(np.array([0.5, -0.25, 0.25])).l1_norm == pytest.approx(1.0)

    def test_sz_state_outside_ball(self):
        with pytest.raises(NotAStateError):
            SzState(np.array([1.0, 0.1, 0.0]))

    def test_sz_transverse_norm(self):
        assert SzState(np.array([0.3, 0.4, 0.5])).transverse_norm == pytest.approx(0.5)


class TestEntities:
    def test_density_matrix_trace(self):
        with pytest.raises(NotAStateError):
            DensityMatrix(HermitianOp.identity(4))

    def test_density_matrix_positivity(self):
        with pytest.raises(NotAStateError):
            DensityMatrix(HermitianOp(np.diag([1.5, -0.5])))

    def test_purity(self):
        assert DensityMatrix(HermitianOp(np.diag([1.0, 0.0]))).is_pure
        mixed = DensityMatrix(HermitianOp(np.eye(4) / 4.0))
        assert mixed.purity == pytest.approx(0.25)

    def test_report_gap_never_negative(self):
        report = DistanceReport(
            distance=0.1,
            minimizer=DensityMatrix(HermitianOp(np.eye(4) / 4.0)),
            atoms=(),
            lower_bound=0.2,
            upper_bound=0.1,
            iterations=1,
            converged=True,
        )
        assert report.gap == 0.0

    def test_witness_violation(self):
        witness = Witness(
            op=HermitianOp.identity(4),
            sep_min=0.0,
            violation_state_value=-0.5,
            normalized=False,
        )
        assert witness.violation == pytest.approx(0.5)
        assert witness.certifies_entanglement
        assert witness.is_tangent
        assert witness.is_entanglement_witness

    @pytest.mark.parametrize(
        "relation,computed,passed",
        [
            (ClaimRelation.EQUAL, 1.0 + 1e-7, True),
            (ClaimRelation.EQUAL, 1.1, False),
            (ClaimRelation.AT_MOST, 0.5, True),
            (ClaimRelation.AT_LEAST, 0.5, False),
            (ClaimRelation.EQUAL, float("nan"), False),
        ],
    )
    def test_claim_relations(self, relation, computed, passed):
        claim = Claim("c", "g", expected=1.0, computed=computed, tolerance=1e-6, relation=relation)
        assert claim.passed is passed

    def test_errors_share_base(self):
        assert issubclass(NotAStateError, ValidationError)
