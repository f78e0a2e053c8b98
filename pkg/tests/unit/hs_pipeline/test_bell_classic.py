"""Tests for CHSH and Bell observables and setting optimization."""
import numpy as np
import pytest

from src.constants import ClosedFormValues
from src.domain.entities import ViolationRow
from src.domain.value_objects import ChshSetting, HermitianOp
from src.hs_pipeline.bell_classic import (
    bell_angles,
    bell_operator,
    bell_setting_from_angles,
    bell_singlet_closed_form,
    canonical_frame,
    chsh_angles,
    chsh_operator,
    chsh_setting_from_angles,
    chsh_singlet_closed_form,
    correlation_matrix,
    extremal_bell_setting,
    extremal_chsh_setting,
    horodecki_chsh_bound,
)
from src.hs_pipeline.pauli_space import hs_inner
from src.hs_pipeline.states import werner
from src.utils.random_ensembles import random_unit_vector

pytestmark = pytest.mark.unit

SQRT2 = np.sqrt(2.0)


class TestObservables:
    def test_singlet_correlations(self):
        np.testing.assert_allclose(correlation_matrix(werner(1.0)), -np.eye(3), atol=1e-12)

    def test_extremal_chsh_value(self):
        op = chsh_operator(extremal_chsh_setting())
        assert hs_inner(werner(1.0).op, op) == pytest.approx(2.0 * SQRT2)

    def test_extremal_chsh_angles(self):
        np.testing.assert_allclose(
            chsh_angles(extremal_chsh_setting()), [45.0, 135.0, 135.0, 135.0], atol=1e-9
        )

    def test_extremal_bell_value_and_angles(self):
        s = extremal_bell_setting()
        assert hs_inner(werner(1.0).op, bell_operator(s)) == pytest.approx(1.5)
        np.testing.assert_allclose(bell_angles(s), [60.0, 60.0, 120.0], atol=1e-9)

    def test_closed_forms_match_trace(self, rng):
        singlet = werner(1.0).op
        for _ in range(10):
            chsh = ChshSetting(*(random_unit_vector(rng) for _ in range(4)))
            assert chsh_singlet_closed_form(chsh) == pytest.approx(
                hs_inner(singlet, chsh_operator(chsh))
            )
            bell = bell_setting_from_angles(*rng.uniform(0.0, 360.0, size=3))
            assert bell_singlet_closed_form(bell) == pytest.approx(
                hs_inner(singlet, bell_operator(bell))
            )

    def test_chsh_operator_is_traceless(self):
        op = chsh_operator(chsh_setting_from_angles(10.0, 20.0, 30.0, 40.0))
        assert np.trace(op.entries).real == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("alpha,expected", [(1.0, 2.0 * SQRT2), (0.5, SQRT2), (0.0, 0.0)])
    def test_horodecki_bound_on_werner(self, alpha, expected):
        assert horodecki_chsh_bound(werner(alpha)) == pytest.approx(expected, abs=1e-12)


class TestCanonicalFrame:
    def test_is_rotation(self, rng):
        r = canonical_frame(random_unit_vector(rng), random_unit_vector(rng))
        np.testing.assert_allclose(r @ r.T, np.eye(3), atol=1e-12)
        assert np.linalg.det(r) == pytest.approx(1.0)

    def test_maps_into_xz_plane(self, rng):
        first, second = random_unit_vector(rng), random_unit_vector(rng)
        r = canonical_frame(first, second)
        np.testing.assert_allclose(r @ first, [0.0, 0.0, 1.0], atol=1e-12)
        rotated = r @ second
        assert rotated[1] == pytest.approx(0.0, abs=1e-12)
        assert rotated[0] >= 0.0

    def test_collinear_inputs(self):
        r = canonical_frame(np.array([0.0, 0.0, 1.0]), np.array([0.0, 0.0, -1.0]))
        np.testing.assert_allclose(r @ r.T, np.eye(3), atol=1e-12)


class TestSettingOptimizer:
    def test_chsh_singlet_maximum(self, optimizer):
        value, setting = optimizer.chsh_max_violation()
        assert value == pytest.approx(2.0 * SQRT2, abs=1e-9)
        np.testing.assert_allclose(chsh_angles(setting), [45.0, 135.0, 135.0, 135.0], atol=1e-4)

    def test_chsh_matches_closed_form_for_werner(self, optimizer):
        value, _ = optimizer.chsh_max_for_state(werner(0.5))
        assert value == pytest.approx(SQRT2, abs=1e-9)

    def test_chsh_operator_separable_bound(self, optimizer, oracle):
        _, setting = optimizer.chsh_max_violation()
        assert oracle.max_over_separable(chsh_operator(setting)).value == pytest.approx(
            SQRT2, abs=1e-9
        )

    def test_bell_singlet_maximum(self, optimizer):
        value, setting, anticorrelated, separable = optimizer.bell_max_violation()
        assert value == pytest.approx(1.5, abs=1e-9)
        np.testing.assert_allclose(bell_angles(setting), [60.0, 60.0, 120.0], atol=1e-4)
        assert anticorrelated == pytest.approx(0.75, abs=1e-8)
        assert separable == pytest.approx(np.sqrt(3.0) / 2.0, abs=1e-8)

    def test_violation_summary(self, optimizer):
        rows = {row.observable: row for row in optimizer.violation_summary()}
        assert rows["-sigma.sigma"].difference == pytest.approx(2.0, abs=1e-9)
        assert rows["CHSH"].difference == pytest.approx(2.0 * SQRT2 - SQRT2, abs=1e-8)
        assert rows["Bell"].difference == pytest.approx(0.75, abs=1e-8)
        assert all(row.matches for row in rows.values())

    def test_violation_summary_flags_mismatch(self, optimizer, monkeypatch, caplog):
        monkeypatch.setattr(ClosedFormValues, "BELL_DIFFERENCE", 0.5)
        rows = {row.observable: row for row in optimizer.violation_summary()}
        assert not rows["Bell"].matches
        assert rows["CHSH"].matches
        assert "Bell difference" in caplog.text

    def test_flip_operator_range(self, optimizer):
        low, high, singlet = optimizer.flip_operator_range()
        assert low == pytest.approx(0.0, abs=1e-12)
        assert high == pytest.approx(2.0, abs=1e-12)
        assert singlet == pytest.approx(-2.0, abs=1e-12)

    def test_product_state_has_no_violation(self, optimizer):
        value, _ = optimizer.chsh_max_for_state(HermitianOp(np.diag([1.0, 0.0, 0.0, 0.0])))
        assert value <= 2.0 + 1e-9


class TestViolationRow:
    def test_difference_is_absolute(self):
        assert ViolationRow("X", sep_extremum=1.0, singlet_value=-2.0).difference == 3.0

    def test_matches_without_expectation(self):
        assert ViolationRow("X", 1.0, 3.0).matches

    def test_matches_within_tolerance(self):
        assert ViolationRow("X", 1.0, 3.0 + 1e-9, expected_difference=2.0).matches
        assert not ViolationRow("X", 1.0, 3.1, expected_difference=2.0).matches
