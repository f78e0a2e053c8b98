"""CHSH and Bell's original inequality as observables on two qubits.

With the correlation matrix T_ij = (w|σ^i⊗σ^j) of a state,

    (w|A_CHSH) = aᵀT(b − b') + a'ᵀT(b + b'),
    (w|A_Bell) = aᵀT(b − b') − b'ᵀTb.

Settings are optimized by gradient ascent on products of unit spheres.
"""
import logging
from typing import Callable, Optional, Union

import numpy as np

from config.solver_config import BellOptimizerDefaults
from src.constants import ClosedFormValues
from src.domain.entities import DensityMatrix, ViolationRow
from src.domain.value_objects import BellSetting, ChshSetting, HermitianOp
from src.hs_pipeline.pauli_space import correlation_operator, hs_inner, sigma_dot_sigma, to_pauli
from src.hs_pipeline.product_oracle import ProductOracle
from src.hs_pipeline.states import werner
from src.infrastructure.settings import BellOptimizerConfig

logger = logging.getLogger(__name__)

# (K, p, 3) batch of p unit vectors per start -> (K,) objective / (K, p, 3) gradient
BatchObjective = Callable[[np.ndarray], np.ndarray]


def _unit(theta_deg: float) -> np.ndarray:
    """Unit vector at angle θ from +z in the xz-plane."""
    theta = np.deg2rad(theta_deg)
    return np.array([np.sin(theta), 0.0, np.cos(theta)])


def chsh_setting_from_angles(
    a: float, a_prime: float, b: float, b_prime: float
) -> ChshSetting:
    """Coplanar CHSH setting from polar angles in degrees."""
    return ChshSetting(_unit(a), _unit(a_prime), _unit(b), _unit(b_prime))


def bell_setting_from_angles(a: float, b: float, b_prime: float) -> BellSetting:
    """Coplanar Bell setting from polar angles in degrees."""
    return BellSetting(_unit(a), _unit(b), _unit(b_prime))


def extremal_chsh_setting() -> ChshSetting:
    """(a,b) = (a',b) = (a',b') = 135°, (a,b') = 45°."""
    return chsh_setting_from_angles(0.0, 270.0, 135.0, 45.0)


def extremal_bell_setting() -> BellSetting:
    """(a,b') = (b',b) = 60°, (a,b) = 120°."""
    return bell_setting_from_angles(0.0, 120.0, 60.0)


def chsh_operator(s: ChshSetting) -> HermitianOp:
    """a·σ ⊗ (b − b')·σ + a'·σ ⊗ (b + b')·σ."""
    return correlation_operator(
        np.outer(s.a, s.b - s.b_prime) + np.outer(s.a_prime, s.b + s.b_prime)
    )


def bell_operator(s: BellSetting) -> HermitianOp:
    """a·σ ⊗ (b − b')·σ − b'·σ ⊗ b·σ."""
    return correlation_operator(np.outer(s.a, s.b - s.b_prime) - np.outer(s.b_prime, s.b))


def correlation_matrix(w: Union[DensityMatrix, HermitianOp]) -> np.ndarray:
    """T_ij = (w|σ^i⊗σ^j)."""
    op = w.op if isinstance(w, DensityMatrix) else w
    return 4.0 * to_pauli(op).c


def horodecki_chsh_bound(w: Union[DensityMatrix, HermitianOp]) -> float:
    """Closed-form CHSH maximum 2(t₁² + t₂²)^{1/2} from the two largest singular values of T."""
    singular = np.linalg.svd(correlation_matrix(w), compute_uv=False)
    return float(2.0 * np.sqrt(singular[0] ** 2 + singular[1] ** 2))


def _angle_deg(u: np.ndarray, v: np.ndarray) -> float:
    return float(np.degrees(np.arccos(np.clip(u @ v, -1.0, 1.0))))


def chsh_angles(s: ChshSetting) -> list[float]:
    """Sorted angles (a,b), (a',b), (a',b'), (a,b') in degrees."""
    return sorted(
        _angle_deg(alice, bob)
        for alice, bob in ((s.a, s.b), (s.a_prime, s.b), (s.a_prime, s.b_prime), (s.a, s.b_prime))
    )


def bell_angles(s: BellSetting) -> list[float]:
    """Sorted angles (a,b'), (b',b), (a,b) in degrees."""
    return sorted(
        _angle_deg(u, v) for u, v in ((s.a, s.b_prime), (s.b_prime, s.b), (s.a, s.b))
    )


def canonical_frame(first: np.ndarray, second: np.ndarray) -> np.ndarray:
    """Rotation taking ``first`` to +z and ``second`` into the xz-plane (x ≥ 0)."""
    e3 = first / np.linalg.norm(first)
    residual = second - (second @ e3) * e3
    if np.linalg.norm(residual) < 1e-12:
        # collinear: any perpendicular completes the frame
        trial = np.eye(3)[int(np.argmin(np.abs(e3)))]
        residual = trial - (trial @ e3) * e3
    e1 = residual / np.linalg.norm(residual)
    e2 = np.cross(e3, e1)
    return np.vstack([e1, e2, e3])


def canonicalize_chsh(s: ChshSetting) -> ChshSetting:
    rotation = canonical_frame(s.a, s.a_prime)
    return ChshSetting(*(rotation @ v for v in (s.a, s.a_prime, s.b, s.b_prime)))


def canonicalize_bell(s: BellSetting) -> BellSetting:
    rotation = canonical_frame(s.a, s.b)
    return BellSetting(*(rotation @ v for v in (s.a, s.b, s.b_prime)))


def _chsh_problem(t: np.ndarray) -> tuple[BatchObjective, BatchObjective]:
    def objective(v: np.ndarray) -> np.ndarray:
        a, a_p, b, b_p = v[:, 0], v[:, 1], v[:, 2], v[:, 3]
        return np.einsum("ki,ij,kj->k", a, t, b - b_p) + np.einsum(
            "ki,ij,kj->k", a_p, t, b + b_p
        )

    def gradient(v: np.ndarray) -> np.ndarray:
        a, a_p, b, b_p = v[:, 0], v[:, 1], v[:, 2], v[:, 3]
        return np.stack(
            [
                (b - b_p) @ t.T,
                (b + b_p) @ t.T,
                (a + a_p) @ t,
                (a_p - a) @ t,
            ],
            axis=1,
        )

    return objective, gradient


def _bell_problem(t: np.ndarray) -> tuple[BatchObjective, BatchObjective]:
    def objective(v: np.ndarray) -> np.ndarray:
        a, b, b_p = v[:, 0], v[:, 1], v[:, 2]
        return np.einsum("ki,ij,kj->k", a, t, b - b_p) - np.einsum(
            "ki,ij,kj->k", b_p, t, b
        )

    def gradient(v: np.ndarray) -> np.ndarray:
        a, b, b_p = v[:, 0], v[:, 1], v[:, 2]
        return np.stack(
            [
                (b - b_p) @ t.T,
                a @ t - b_p @ t,
                -(a @ t) - b @ t.T,
            ],
            axis=1,
        )

    return objective, gradient


class SettingOptimizer:
    """Maximize Bell-type expectations over measurement directions."""

    def __init__(
        self,
        config: Optional[BellOptimizerConfig] = None,
        oracle: Optional[ProductOracle] = None,
    ):
        """Initialize optimizer.

        Args:
            config: Multistart and step-size settings
            oracle: Product-state oracle for the separable side
        """
        self._config = config or BellOptimizerConfig()
        self._oracle = oracle or ProductOracle()

    def _ascend(
        self, objective: BatchObjective, gradient: BatchObjective, vectors: int
    ) -> tuple[float, np.ndarray]:
        """Multistart Riemannian gradient ascent with per-start step halving.

        Returns the best value and its (vectors, 3) setting.
        """
        rng = np.random.default_rng(self._config.seed)
        v = rng.normal(size=(self._config.restarts, vectors, 3))
        v /= np.linalg.norm(v, axis=2, keepdims=True)
        value = objective(v)
        step = np.full(len(v), self._config.step)
        done = np.zeros(len(v), dtype=bool)

        iterations = 0
        for iterations in range(1, self._config.max_iters + 1):
            g = gradient(v)
            tangent = g - np.sum(g * v, axis=2, keepdims=True) * v
            grad_norm = np.sqrt(np.sum(tangent**2, axis=(1, 2)))
            done |= (grad_norm < self._config.gradient_tol) | (
                step < BellOptimizerDefaults.MIN_STEP
            )
            if done.all():
                break

            candidate = v + step[:, None, None] * tangent
            candidate /= np.linalg.norm(candidate, axis=2, keepdims=True)
            candidate_value = objective(candidate)

            accept = (candidate_value >= value) & ~done
            v[accept] = candidate[accept]
            value[accept] = candidate_value[accept]
            step = np.where(
                accept,
                np.minimum(step * 1.5, 4.0 * self._config.step),
                np.where(done, step, step / 2.0),
            )

        best = int(np.argmax(value))
        logger.debug(
            "setting ascent: %d iterations, best %.15g from start %d",
            iterations,
            value[best],
            best,
        )
        return float(value[best]), v[best]

    def chsh_max_for_state(
        self, w: Union[DensityMatrix, HermitianOp]
    ) -> tuple[float, ChshSetting]:
        """Setting-optimized CHSH expectation of an arbitrary two-qubit state."""
        t = correlation_matrix(w)
        value, vectors = self._ascend(*_chsh_problem(t), vectors=4)
        setting = canonicalize_chsh(ChshSetting(*vectors))
        closed_form = horodecki_chsh_bound(w)
        if abs(value - closed_form) > 1e-6:
            logger.warning(
                "CHSH ascent %.12g differs from closed form %.12g", value, closed_form
            )
        return value, setting

    def chsh_max_violation(
        self, state: Optional[Union[DensityMatrix, HermitianOp]] = None
    ) -> tuple[float, ChshSetting]:
        """Maximal CHSH expectation, of the singlet unless ``state`` is given."""
        return self.chsh_max_for_state(state if state is not None else werner(1.0))

    def bell_max_violation(self) -> tuple[float, BellSetting, float, float]:
        """Singlet maximum of Bell's observable and separable maxima at the optimum.

        Returns:
            (singlet value, setting, max over anticorrelated separable states,
            max over all separable states)
        """
        t = correlation_matrix(werner(1.0))
        value, vectors = self._ascend(*_bell_problem(t), vectors=3)
        setting = canonicalize_bell(BellSetting(*vectors))
        op = bell_operator(setting)
        anticorrelated = self._oracle.max_over_anticorrelated(op).value
        separable = self._oracle.max_over_separable(op).value
        return value, setting, anticorrelated, separable

    def violation_summary(self) -> list[ViolationRow]:
        """Separable extremum versus singlet value for −σ·σ, CHSH and Bell.

        Each row carries its closed-form difference; rows that miss it are
        logged and report ``matches == False``.
        """
        singlet = werner(1.0)
        flip = -sigma_dot_sigma()
        gbi_row = ViolationRow(
            observable="-sigma.sigma",
            sep_extremum=self._oracle.max_over_separable(flip).value,
            singlet_value=hs_inner(singlet.op, flip),
            expected_difference=ClosedFormValues.GBI_DIFFERENCE,
        )

        chsh_value, chsh_setting = self.chsh_max_violation()
        chsh_row = ViolationRow(
            observable="CHSH",
            sep_extremum=self._oracle.max_over_separable(chsh_operator(chsh_setting)).value,
            singlet_value=chsh_value,
            expected_difference=ClosedFormValues.CHSH_DIFFERENCE,
        )

        bell_value, _, anticorrelated, _ = self.bell_max_violation()
        bell_row = ViolationRow(
            observable="Bell",
            sep_extremum=anticorrelated,
            singlet_value=bell_value,
            expected_difference=ClosedFormValues.BELL_DIFFERENCE,
        )
        rows = [gbi_row, chsh_row, bell_row]
        for row in rows:
            if not row.matches:
                logger.warning(
                    "%s difference %.9g misses closed form %.9g",
                    row.observable,
                    row.difference,
                    row.expected_difference,
                )
        return rows

    def flip_operator_range(self) -> tuple[float, float, float]:
        """Range of (ρ|1 + σ_A·σ_B) over S and the singlet's value.

        Returns:
            (min over S, max over S, singlet value); classically 0, 2 and −2.
        """
        op = HermitianOp.identity(4) + sigma_dot_sigma()
        return (
            self._oracle.min_over_separable(op).value,
            self._oracle.max_over_separable(op).value,
            hs_inner(werner(1.0).op, op),
        )


def chsh_singlet_closed_form(s: ChshSetting) -> float:
    """−a·(b − b') − a'·(b + b')."""
    return float(-s.a @ (s.b - s.b_prime) - s.a_prime @ (s.b + s.b_prime))


def bell_singlet_closed_form(s: BellSetting) -> float:
    """−a·(b − b') + b'·b."""
    return float(-s.a @ (s.b - s.b_prime) + s.b_prime @ s.b)

