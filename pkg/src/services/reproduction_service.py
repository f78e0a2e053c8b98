"""Closed-form claims about the HS geometry, recomputed and compared.

Each group returns a list of ``Claim`` rows; a failing computation is recorded
as a failed row with a non-finite computed value instead of aborting the run.
"""
import logging
import math
from typing import Callable, Optional

import numpy as np

from config.solver_config import GeometryDefaults, ReproductionDefaults
from src.constants import ClosedFormValues, ReportFormattingConstants, ToleranceConstants
from src.domain.entities import Claim, ClaimRelation, DensityMatrix
from src.domain.value_objects import HermitianOp
from src.hs_pipeline import bell_classic, geometry
from src.hs_pipeline.bell_classic import SettingOptimizer
from src.hs_pipeline.distance_solver import DistanceSolver, distance_sz_model
from src.hs_pipeline.pauli_space import (
    PAULI_X,
    PAULI_Y,
    conjugate,
    hs_inner,
    hs_norm,
    sigma_dot_sigma,
    to_pauli,
)
from src.hs_pipeline.product_oracle import ProductOracle
from src.hs_pipeline.states import (
    bell_projectors,
    flip_operator,
    is_ppt,
    min_pt_eigenvalue,
    mixture,
    one_qubit_state,
    partial_transpose_B,
    product_density,
    product_state,
    tangent_family,
    w_c_state,
    werner,
)
from src.hs_pipeline.witness import (
    SENSITIVITY_CONSTANT,
    WitnessAnalyzer,
    traceless_norm,
    witness_sensitivity,
)
from src.infrastructure.errors import EntanglementGeometryError
from src.infrastructure.settings import AppConfig
from src.services.sweep_service import werner_distance
from src.utils.random_ensembles import (
    random_hermitian,
    random_local_unitary,
    random_product,
    random_state,
    random_unit_vector,
)

logger = logging.getLogger(__name__)

Group = Callable[[], list[Claim]]


def _claim(
    name: str,
    group: str,
    expected: float,
    computed: float,
    tolerance: float,
    relation: ClaimRelation = ClaimRelation.EQUAL,
) -> Claim:
    return Claim(
        name=name,
        group=group,
        expected=float(expected),
        computed=float(computed),
        tolerance=tolerance,
        relation=relation,
    )


def _angle_error(computed: list[float], expected: tuple[float, ...]) -> float:
    return float(np.max(np.abs(np.sort(computed) - np.sort(expected))))


class ReproductionService:
    """Run the claim suite."""

    def __init__(self, config: Optional[AppConfig] = None, seed: int = 0):
        """Initialize reproduction service.

        Args:
            config: Solver, oracle and optimizer settings
            seed: Root seed for the sampled groups
        """
        self.config = config or AppConfig()
        self.seed = seed
        self.oracle = ProductOracle(self.config.solver.oracle)
        self.solver = DistanceSolver(self.config.solver, self.oracle)
        self.analyzer = WitnessAnalyzer(self.solver)
        self.optimizer = SettingOptimizer(self.config.bell, self.oracle)
        self.groups: dict[str, Group] = {
            "werner": self._werner,
            "gbi": self._gbi,
            "tangent": self._tangent,
            "sensitivity": self._sensitivity,
            "chsh": self._chsh,
            "bell": self._bell,
            "one-spin": self._one_spin,
            "geometry": self._geometry,
            "theorem": self._theorem,
            "properties": self._properties,
            "oracle": self._oracle_agreement,
            "pauli": self._pauli,
            "bounds": self._bounds,
            "witness": self._witness,
            "summary": self._summary,
        }

    def _rng(self, group: str) -> np.random.Generator:
        # one child stream per group, independent of which groups run
        index = list(self.groups).index(group)
        return np.random.default_rng(np.random.SeedSequence(self.seed).spawn(index + 1)[index])

    def run(self, name_filter: Optional[str] = None) -> list[Claim]:
        """Evaluate every group, or those whose name (or claim names) match the filter."""
        selected = self.groups
        if name_filter:
            wanted = name_filter.lower()
            by_group = {k: g for k, g in self.groups.items() if wanted in k}
            selected = by_group or self.groups

        claims: list[Claim] = []
        for name, group in selected.items():
            try:
                claims.extend(group())
            except (EntanglementGeometryError, ArithmeticError, ValueError) as exc:
                logger.error("Claim group %s failed: %s", name, exc)
                claims.append(_claim(f"{name} (group failed)", name, 0.0, math.nan, 0.0))

        if name_filter and not any(name_filter.lower() in k for k in self.groups):
            claims = [c for c in claims if name_filter.lower() in c.name.lower()]
        passed = sum(c.passed for c in claims)
        logger.info("Reproduction: %d of %d claims passed", passed, len(claims))
        return claims

    def _werner(self) -> list[Claim]:
        claims = []
        for alpha in (0.4, 0.5, 2.0 / 3.0, 0.8, 1.0):
            report, _, b_value = self.analyzer.certify(werner(alpha))
            expected = werner_distance(alpha)
            claims.append(_claim(f"D(werner {alpha:.4g})", "werner", expected, report.distance, 1e-6))
            claims.append(_claim(f"B(werner {alpha:.4g})", "werner", expected, b_value, 1e-6))
        for alpha in (-1.0 / 3.0, 0.0, 0.2, 1.0 / 3.0):
            report = self.solver.distance(werner(alpha))
            claims.append(
                _claim(
                    f"D(werner {alpha:.4g}) vanishes",
                    "werner",
                    0.0,
                    report.distance,
                    1e-6,
                    ClaimRelation.AT_MOST,
                )
            )
        return claims

    def _gbi(self) -> list[Claim]:
        anti_flip = -sigma_dot_sigma()
        singlet = hs_inner(werner(1.0).op, anti_flip)
        separable = self.oracle.max_over_separable(anti_flip).value
        _, witness, _ = self.analyzer.certify(werner(1.0))
        claims = [
            _claim("singlet (w|-sigma.sigma)", "gbi", ClosedFormValues.SINGLET_GBI_VALUE, singlet, 1e-9),
            _claim(
                "separable max (rho|-sigma.sigma)",
                "gbi",
                ClosedFormValues.SEPARABLE_GBI_BOUND,
                separable,
                1e-6,
            ),
            _claim("singlet minus separable bound", "gbi", 2.0, singlet - separable, 1e-6),
        ]
        if witness is not None:
            claims.append(
                _claim("A_max of singlet normalized", "gbi", 1.0, traceless_norm(witness.op), 1e-8)
            )
        return claims

    def _tangent(self) -> list[Claim]:
        low, high, singlet = self.optimizer.flip_operator_range()
        family = tangent_family(1.0, 1.0)
        along_x = product_state([1.0, 0.0, 0.0], [1.0, 0.0, 0.0])
        return [
            _claim("min over S of (rho|1+sigma.sigma)", "tangent", 0.0, low, 1e-9),
            _claim("max over S of (rho|1+sigma.sigma)", "tangent", 2.0, high, 1e-9),
            _claim("singlet (w|1+sigma.sigma)", "tangent", -2.0, singlet, 1e-9),
            _claim(
                "tangent family min over S",
                "tangent",
                0.0,
                self.oracle.min_over_separable(family).value,
                1e-9,
            ),
            _claim("tangent family at rho_x (a=b)", "tangent", 0.5, hs_inner(along_x.op, family), 1e-12),
        ]

    def _sensitivity(self) -> list[Claim]:
        n = np.array([0.0, 0.0, 1.0])
        ratios = [witness_sensitivity(n, delta * np.eye(3)) / delta for delta in (1e-2, 1e-3, 1e-4)]
        eps = np.diag([1e-3, 1e-3, 5e-4])
        excess = abs(witness_sensitivity(n, eps)) - SENSITIVITY_CONSTANT * float(np.linalg.norm(eps))
        return [
            _claim("unperturbed flip expectation", "sensitivity", 0.0, witness_sensitivity(n, np.zeros((3, 3))), 1e-15),
            _claim("isotropic response ratio", "sensitivity", -3.0, float(np.mean(ratios)), 1e-9),
            _claim("response ratio spread", "sensitivity", 0.0, float(np.ptp(ratios)), 1e-9, ClaimRelation.AT_MOST),
            _claim("response above sqrt(3)|eps|", "sensitivity", 0.0, excess, 0.0, ClaimRelation.AT_MOST),
        ]

    def _chsh(self) -> list[Claim]:
        value, setting = self.optimizer.chsh_max_violation()
        extremal = bell_classic.extremal_chsh_setting()
        separable = self.oracle.max_over_separable(bell_classic.chsh_operator(extremal)).value
        chsh_half, _ = self.optimizer.chsh_max_for_state(werner(0.5))
        return [
            _claim("CHSH singlet maximum", "chsh", ClosedFormValues.CHSH_SINGLET_MAX, value, 1e-9),
            _claim(
                "CHSH optimal angle multiset error",
                "chsh",
                0.0,
                _angle_error(bell_classic.chsh_angles(setting), ClosedFormValues.CHSH_ANGLES_DEG),
                1e-6,
                ClaimRelation.AT_MOST,
            ),
            _claim(
                "CHSH separable max at extremal setting",
                "chsh",
                ClosedFormValues.CHSH_SEPARABLE_MAX,
                separable,
                1e-6,
            ),
            _claim(
                "CHSH of werner 0.5 within classical bound",
                "chsh",
                ClosedFormValues.CHSH_CLASSICAL_BOUND,
                chsh_half,
                1e-9,
                ClaimRelation.AT_MOST,
            ),
            _claim(
                "D(werner 0.5) despite no CHSH violation",
                "chsh",
                0.1,
                self.solver.distance(werner(0.5)).distance,
                0.0,
                ClaimRelation.AT_LEAST,
            ),
        ]

    def _bell(self) -> list[Claim]:
        value, setting, anticorrelated, separable = self.optimizer.bell_max_violation()
        return [
            _claim("Bell singlet maximum", "bell", ClosedFormValues.BELL_SINGLET_MAX, value, 1e-9),
            _claim(
                "Bell optimal angle multiset error",
                "bell",
                0.0,
                _angle_error(bell_classic.bell_angles(setting), ClosedFormValues.BELL_ANGLES_DEG),
                1e-6,
                ClaimRelation.AT_MOST,
            ),
            _claim(
                "Bell anticorrelated separable max",
                "bell",
                ClosedFormValues.BELL_ANTICORRELATED_MAX,
                anticorrelated,
                1e-6,
            ),
            _claim("Bell separable max", "bell", ClosedFormValues.BELL_SEPARABLE_MAX, separable, 1e-6),
        ]

    def _one_spin(self) -> list[Claim]:
        rng = self._rng("one-spin")
        distance_error = 0.0
        witness_error = 0.0
        for _ in range(ReproductionDefaults.ONE_SPIN_SAMPLES):
            w = random_unit_vector(rng) * rng.uniform(0.05, 1.0)
            closed, _ = distance_sz_model(w)
            report = self.solver.distance_sz_numeric(w)
            distance_error = max(distance_error, abs(report.distance - closed))

            transverse = float(np.hypot(w[0], w[1]))
            if transverse < 1e-6:
                continue
            expected = HermitianOp(-(w[0] * PAULI_X + w[1] * PAULI_Y) / (np.sqrt(2.0) * transverse))
            witness = self.analyzer.a_max(one_qubit_state(w), report.minimizer)
            witness_error = max(witness_error, hs_norm(witness.op - expected))

        examples = []
        for w, expected in (
            ((1.0, 0.0, 0.0), 1.0 / ClosedFormValues.SQRT2),
            ((0.6, 0.8, 0.0), 1.0 / ClosedFormValues.SQRT2),
            ((0.3, 0.4, 0.5), 0.5 / ClosedFormValues.SQRT2),
        ):
            examples.append(_claim(f"one-spin model D at {w}", "one-spin", expected, distance_sz_model(w)[0], 1e-12))
            numeric = self.solver.distance_sz_numeric(w).distance
            examples.append(_claim(f"one-spin numeric D at {w}", "one-spin", expected, numeric, 1e-8))
        return examples + [
            _claim("one-spin distance vs closed form", "one-spin", 0.0, distance_error, 1e-8, ClaimRelation.AT_MOST),
            _claim("one-spin A_max vs closed form", "one-spin", 0.0, witness_error, 1e-8, ClaimRelation.AT_MOST),
        ]

    def _geometry(self) -> list[Claim]:
        samples = geometry.sample_regions(GeometryDefaults.SAMPLE_RESOLUTION)
        disagreements = 0
        for sample in samples:
            octahedron = sum(abs(x) for x in sample.c) <= 1.0 + 1e-10
            both = sample.in_tetrahedron and sample.in_mirror
            agree = sample.separable == octahedron and both == octahedron
            if sample.in_tetrahedron:
                agree = agree and is_ppt(w_c_state(sample.c)) == octahedron
            disagreements += not agree
        fraction = sum(s.separable for s in samples) / len(samples)

        c = np.array([0.3, -0.2, 0.1])
        mirrored = geometry.mirror_point(c)
        return [
            _claim("grid four-way disagreements", "geometry", 0.0, disagreements, 0.0),
            _claim(
                "separable grid fraction",
                "geometry",
                ClosedFormValues.OCTAHEDRON_VOLUME_FRACTION,
                fraction,
                0.05 * ClosedFormValues.OCTAHEDRON_VOLUME_FRACTION,
            ),
            _claim("tetrahedron mesh faces", "geometry", 4, len(geometry.export_mesh("tetra").faces), 0.0),
            _claim("octahedron mesh faces", "geometry", 8, len(geometry.export_mesh("pyramid").faces), 0.0),
            _claim(
                "mirror reflection flips c2",
                "geometry",
                0.0,
                float(np.max(np.abs(mirrored - c * np.array([1.0, -1.0, 1.0])))),
                1e-12,
                ClaimRelation.AT_MOST,
            ),
        ]

    def _theorem(self) -> list[Claim]:
        rng = self._rng("theorem")
        residual = 0.0
        tangency = 0.0
        for _ in range(ReproductionDefaults.THEOREM_SAMPLES):
            state = random_state(rng)
            report, witness, b_value = self.analyzer.certify(state)
            residual = max(residual, abs(b_value - report.distance))
            if witness is not None:
                tangency = max(tangency, abs(hs_inner(report.minimizer.op, witness.op)))
        return [
            _claim("max |B - D| on random states", "theorem", 0.0, residual, 1e-5, ClaimRelation.AT_MOST),
            _claim("max |(rho0|A_max)|", "theorem", 0.0, tangency, 1e-8, ClaimRelation.AT_MOST),
        ]

    def _properties(self) -> list[Claim]:
        rng = self._rng("properties")
        invariance = 0.0
        lipschitz = 0.0
        out_of_range = 0
        for _ in range(ReproductionDefaults.PROPERTY_SAMPLES):
            w, v = random_state(rng), random_state(rng)
            d_w = self.solver.distance(w).distance
            d_v = self.solver.distance(v).distance
            rotated = DensityMatrix(conjugate(w.op, random_local_unitary(rng)))
            invariance = max(invariance, abs(self.solver.distance(rotated).distance - d_w))
            lipschitz = max(lipschitz, abs(d_w - d_v) - hs_norm(w.op - v.op))
            out_of_range += not (0.0 <= d_w <= ClosedFormValues.MAX_HS_DISTANCE)
        return [
            _claim("local unitary invariance", "properties", 0.0, invariance, 1e-6, ClaimRelation.AT_MOST),
            _claim("1-Lipschitz excess", "properties", 0.0, lipschitz, 1e-6, ClaimRelation.AT_MOST),
            _claim("D outside [0, sqrt 2]", "properties", 0.0, out_of_range, 0.0),
        ]

    def _oracle_agreement(self) -> list[Claim]:
        rng = self._rng("oracle")
        worst_gap = 0.0
        seesaw_worse = 0.0
        for _ in range(ReproductionDefaults.ORACLE_SAMPLES):
            direction = random_hermitian(rng)
            seesaw = self.oracle.min_over_separable(direction).value
            grid = self.oracle.grid_oracle(direction).value
            worst_gap = max(worst_gap, abs(grid - seesaw))
            seesaw_worse = max(seesaw_worse, seesaw - grid)

        disagreements = 0
        for _ in range(ReproductionDefaults.PPT_SAMPLES):
            state = random_state(rng)
            disagreements += (self.solver.distance(state).distance < 1e-6) != is_ppt(state)
        return [
            _claim("see-saw vs grid oracle", "oracle", 0.0, worst_gap, 2e-3, ClaimRelation.AT_MOST),
            _claim("see-saw worse than grid", "oracle", 0.0, seesaw_worse, 1e-12, ClaimRelation.AT_MOST),
            _claim("D = 0 vs PPT disagreements", "oracle", 0.0, disagreements, 0.0),
        ]

    def _pauli(self) -> list[Claim]:
        rng = self._rng("pauli")
        projectors = bell_projectors()
        gram = np.array([[hs_inner(p.op, q.op) for q in projectors] for p in projectors])
        identity_error = hs_norm(sum((p.op for p in projectors), HermitianOp.zeros(4)) - HermitianOp.identity(4))

        corners = np.zeros((4, 4))
        corners[np.ix_([0, 3], [0, 3])] = 0.5
        flip_pt_error = float(np.max(np.abs(partial_transpose_B(flip_operator()).entries - corners)))

        antiparallel_x = mixture(
            [product_state([1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]), product_state([-1.0, 0.0, 0.0], [1.0, 0.0, 0.0])],
            [0.5, 0.5],
        )
        expected_x = HermitianOp((np.eye(4) - np.kron(PAULI_X, PAULI_X)) / 4.0)

        expectation_error = 0.0
        for _ in range(ReproductionDefaults.EXPECTATION_SAMPLES):
            x, product = random_hermitian(rng), random_product(rng)
            direct = hs_inner(product_density(product).op, x)
            expectation_error = max(expectation_error, abs(ProductOracle.evaluate(x, product) - direct))

        return [
            _claim("||sigma.sigma||", "pauli", 2.0 * ClosedFormValues.SQRT3, hs_norm(sigma_dot_sigma()), 1e-12),
            _claim(
                "Pauli c of sigma.sigma is the identity",
                "pauli",
                0.0,
                float(np.max(np.abs(to_pauli(sigma_dot_sigma()).c - np.eye(3)))),
                1e-12,
                ClaimRelation.AT_MOST,
            ),
            _claim(
                "Pauli c of werner 0.6 is -0.15 I",
                "pauli",
                0.0,
                float(np.max(np.abs(to_pauli(werner(0.6).op).c + 0.15 * np.eye(3)))),
                1e-12,
                ClaimRelation.AT_MOST,
            ),
            _claim("flip operator trace", "pauli", 1.0, float(np.real(np.trace(flip_operator().entries))), 1e-12),
            _claim("partial transpose of flip operator", "pauli", 0.0, flip_pt_error, 1e-12, ClaimRelation.AT_MOST),
            _claim("min PT eigenvalue of singlet", "pauli", -0.5, min_pt_eigenvalue(werner(1.0)), 1e-12),
            _claim(
                "Bell projector Gram matrix",
                "pauli",
                0.0,
                float(np.max(np.abs(gram - np.eye(4)))),
                1e-12,
                ClaimRelation.AT_MOST,
            ),
            _claim("Bell projectors resolve the identity", "pauli", 0.0, identity_error, 1e-12, ClaimRelation.AT_MOST),
            _claim(
                "antiparallel x mixture is (1 - sx sx)/4",
                "pauli",
                0.0,
                hs_norm(antiparallel_x.op - expected_x),
                1e-12,
                ClaimRelation.AT_MOST,
            ),
            _claim(
                "product expectation from Pauli coefficients",
                "pauli",
                0.0,
                expectation_error,
                1e-12,
                ClaimRelation.AT_MOST,
            ),
        ]

    def _bounds(self) -> list[Claim]:
        exact_lower, exact_upper = self.solver.variational_bounds(werner(1.0), werner(1.0 / 3.0))
        loose_lower, loose_upper = self.solver.variational_bounds(werner(1.0), werner(0.0))
        singlet = werner_distance(1.0)
        return [
            _claim("lower bound at nearest trial", "bounds", 1.0 / ClosedFormValues.SQRT3, exact_lower, 1e-9),
            _claim("upper bound at nearest trial", "bounds", 1.0 / ClosedFormValues.SQRT3, exact_upper, 1e-12),
            _claim("lower bound at I/4", "bounds", singlet, loose_lower, 1e-9, ClaimRelation.AT_MOST),
            _claim("upper bound at I/4", "bounds", singlet, loose_upper, 1e-12, ClaimRelation.AT_LEAST),
        ]

    def _witness(self) -> list[Claim]:
        witness = self.analyzer.a_max(werner(1.0), werner(1.0 / 3.0))
        traceless = witness.op - HermitianOp.identity(4) * (float(np.real(np.trace(witness.op.entries))) / 4.0)
        unit_flip = sigma_dot_sigma() / (2.0 * ClosedFormValues.SQRT3)
        claims = [
            _claim("A_max of singlet from werner 1/3", "witness", 0.0, hs_norm(traceless - unit_flip), 1e-10),
            _claim("A_max tangent at werner 1/3", "witness", 0.0, hs_inner(werner(1.0 / 3.0).op, witness.op), 1e-10),
            _claim("A_max violation for singlet", "witness", werner_distance(1.0), witness.violation, 1e-8),
        ]
        for alpha in (0.5, 0.8, 1.0):
            claims.append(
                _claim(
                    f"GBI violation of werner {alpha:.4g}",
                    "witness",
                    ClosedFormValues.WERNER_SLOPE * (alpha - ClosedFormValues.WERNER_SEPARABLE_EDGE),
                    self.analyzer.gbi_violation(werner(alpha), unit_flip),
                    1e-9,
                )
            )
        return claims

    def _summary(self) -> list[Claim]:
        return [
            _claim(
                f"{row.observable} singlet minus separable",
                "summary",
                row.expected_difference,
                row.difference,
                ToleranceConstants.SUMMARY_DIFFERENCE,
            )
            for row in self.optimizer.violation_summary()
        ]


def format_table(claims: list[Claim]) -> str:
    """Aligned text table: claim, expected, computed, |Δ|, pass."""
    width = max([len(c.name) for c in claims] + [5])
    lines = [
        ReportFormattingConstants.SEPARATOR_DOUBLE,
        f"{'claim':<{width}}  {'expected':>14}  {'computed':>14}  {'|delta|':>10}  result",
        ReportFormattingConstants.SEPARATOR_SINGLE,
    ]
    for c in claims:
        mark = ReportFormattingConstants.PASS_MARK if c.passed else ReportFormattingConstants.FAIL_MARK
        lines.append(
            f"{c.name:<{width}}  {c.expected:>14.9g}  {c.computed:>14.9g}  "
            f"{c.delta:>10.2e}  {c.relation.value} {mark}"
        )
    passed = sum(c.passed for c in claims)
    lines.append(ReportFormattingConstants.SEPARATOR_SINGLE)
    lines.append(f"{passed}/{len(claims)} claims passed")
    return "\n".join(lines) + "\n"
