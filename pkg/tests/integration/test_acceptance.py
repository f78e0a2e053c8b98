"""Large seeded checks of the distance, witness, oracle and Bell pipeline."""
import numpy as np
import pytest

from src.domain.entities import DensityMatrix
from src.domain.value_objects import ChshSetting, HermitianOp
from src.hs_pipeline.bell_classic import chsh_operator, chsh_singlet_closed_form
from src.hs_pipeline.distance_solver import distance_sz_model
from src.hs_pipeline.pauli_space import PAULI_X, PAULI_Y, conjugate, hs_inner, hs_norm
from src.hs_pipeline.states import is_ppt, one_qubit_state, partial_transpose_B, werner
from src.utils.random_ensembles import (
    random_hermitian,
    random_local_unitary,
    random_separable_state,
    random_state,
    random_unit_vector,
)

pytestmark = [pytest.mark.integration, pytest.mark.slow]

THEOREM_STATES = 200
PPT_STATES = 1000
PROPERTY_TRIALS = 500
ORACLE_DIRECTIONS = 100
ONE_SPIN_VECTORS = 100
OPERATOR_SAMPLES = 1000


def test_b_equals_d_on_random_states(analyzer):
    rng = np.random.default_rng(1)
    for _ in range(THEOREM_STATES):
        state = random_state(rng)
        report, witness, b_value = analyzer.certify(state)
        assert abs(b_value - report.distance) < 1e-5
        if witness is not None and report.gap < 1e-8:
            assert abs(hs_inner(report.minimizer.op, witness.op)) < 1e-8


def test_zero_distance_matches_ppt(solver):
    rng = np.random.default_rng(2)
    for _ in range(PPT_STATES):
        state = random_state(rng)
        assert (solver.distance(state).distance < 1e-6) == is_ppt(state)


def test_seesaw_matches_grid(oracle):
    rng = np.random.default_rng(3)
    for _ in range(ORACLE_DIRECTIONS):
        x = random_hermitian(rng)
        seesaw = oracle.min_over_separable(x).value
        grid = oracle.grid_oracle(x).value
        assert seesaw <= grid + 1e-12
        assert grid - seesaw < 2e-3


def test_one_spin_model(solver, analyzer):
    rng = np.random.default_rng(4)
    for _ in range(ONE_SPIN_VECTORS):
        w = random_unit_vector(rng) * rng.uniform(0.05, 1.0)
        expected, _ = distance_sz_model(w)
        report = solver.distance_sz_numeric(w)
        assert report.distance == pytest.approx(expected, abs=1e-8)

        transverse = float(np.hypot(w[0], w[1]))
        if transverse < 1e-6:
            continue
        closed = HermitianOp(-(w[0] * PAULI_X + w[1] * PAULI_Y) / (np.sqrt(2.0) * transverse))
        witness = analyzer.a_max(one_qubit_state(w), report.minimizer)
        assert hs_norm(witness.op - closed) < 1e-8


def test_distance_properties(solver):
    """Convexity, 1-Lipschitz continuity, local-unitary invariance and range."""
    rng = np.random.default_rng(5)
    for _ in range(PROPERTY_TRIALS):
        first, second = random_state(rng), random_state(rng)
        weight = rng.uniform()
        d_first = solver.distance(first).distance
        d_second = solver.distance(second).distance

        mixed = first.op * weight + second.op * (1.0 - weight)
        assert solver.distance(mixed).distance <= weight * d_first + (1.0 - weight) * d_second + 1e-6

        assert abs(d_first - d_second) <= hs_norm(first.op - second.op) + 1e-6

        rotated = DensityMatrix(conjugate(first.op, random_local_unitary(rng)))
        assert solver.distance(rotated).distance == pytest.approx(d_first, abs=1e-6)

        assert 0.0 <= d_first <= np.sqrt(2.0)


def test_partial_transpose_is_an_involution():
    rng = np.random.default_rng(6)
    for _ in range(OPERATOR_SAMPLES):
        x = random_hermitian(rng)
        assert partial_transpose_B(partial_transpose_B(x)).allclose(x, atol=1e-12)


def test_separable_states_respect_classical_chsh_bound():
    rng = np.random.default_rng(7)
    for _ in range(OPERATOR_SAMPLES):
        state = random_separable_state(rng)
        setting = ChshSetting(*(random_unit_vector(rng) for _ in range(4)))
        assert abs(hs_inner(state.op, chsh_operator(setting))) <= 2.0 + 1e-9


def test_singlet_chsh_closed_form():
    rng = np.random.default_rng(8)
    singlet = werner(1.0).op
    for _ in range(OPERATOR_SAMPLES):
        setting = ChshSetting(*(random_unit_vector(rng) for _ in range(4)))
        assert hs_inner(singlet, chsh_operator(setting)) == pytest.approx(
            chsh_singlet_closed_form(setting), abs=1e-10
        )
