"""D(w) and B(w) along one-parameter state families."""
import csv
import io
import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Callable, Optional, Sequence

import numpy as np

from config.solver_config import SweepDefaults
from src.api.codecs import format_csv
from src.constants import ClosedFormValues
from src.domain.entities import DensityMatrix, SweepRow
from src.hs_pipeline.states import (
    WERNER_MAX_ALPHA,
    WERNER_MIN_ALPHA,
    is_ppt,
    w_c_state,
    werner,
)
from src.hs_pipeline.witness import WitnessAnalyzer
from src.infrastructure.errors import ConvergenceError, NotAStateError, ValidationError

logger = logging.getLogger(__name__)

CSV_HEADER = ("param", "D", "B", "lower", "upper", "ppt")


def werner_distance(alpha: float) -> float:
    """Closed form max(0, √3/2 (α − 1/3))."""
    return max(
        0.0,
        ClosedFormValues.WERNER_SLOPE * (alpha - ClosedFormValues.WERNER_SEPARABLE_EDGE),
    )


class SweepService:
    """Evaluate D and B on a grid of family parameters."""

    def __init__(
        self,
        analyzer: Optional[WitnessAnalyzer] = None,
        max_workers: int = SweepDefaults.MAX_WORKERS,
    ):
        """Initialize sweep service.

        Args:
            analyzer: Witness analyzer (carries the distance solver)
            max_workers: Thread pool size; 1 runs sequentially
        """
        self.analyzer = analyzer or WitnessAnalyzer()
        self.max_workers = max_workers

    @staticmethod
    def grid(lo: float, hi: float, steps: int) -> np.ndarray:
        if steps < 1:
            raise ValidationError("steps must be at least 1")
        if hi < lo:
            raise ValidationError(f"Empty range [{lo}, {hi}]")
        return np.array([lo]) if steps == 1 else np.linspace(lo, hi, steps)

    def _row(self, param: float, state: DensityMatrix, strict: bool) -> SweepRow:
        report, _, b_value = self.analyzer.certify(state)
        if not report.converged:
            if strict:
                raise ConvergenceError(f"Sweep point {param!r} did not converge")
            logger.warning("Sweep point %r did not reach the gap tolerance", param)
        return SweepRow(
            param=float(param),
            distance=report.distance,
            b_value=b_value,
            lower=report.lower_bound,
            upper=report.upper_bound,
            ppt=is_ppt(state),
            converged=report.converged,
        )

    def _run(
        self,
        params: np.ndarray,
        build: Callable[[float], DensityMatrix],
        strict: bool,
    ) -> list[SweepRow]:
        states = [build(float(p)) for p in params]
        rows: list[Optional[SweepRow]] = [None] * len(states)

        if self.max_workers <= 1 or len(states) == 1:
            for k, state in enumerate(states):
                rows[k] = self._row(params[k], state, strict)
        else:
            with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
                future_to_index = {
                    executor.submit(self._row, params[k], state, strict): k
                    for k, state in enumerate(states)
                }
                for future in as_completed(future_to_index):
                    rows[future_to_index[future]] = future.result()

        logger.info("Sweep finished: %d points", len(rows))
        return [row for row in rows if row is not None]

    def werner(
        self, lo: float, hi: float, steps: int, strict: bool = False
    ) -> list[SweepRow]:
        """Werner line w_α for α on an even grid.

        Raises:
            NotAStateError: If the range leaves [−1/3, 1]
        """
        slack = 1e-12
        if lo < WERNER_MIN_ALPHA - slack or hi > WERNER_MAX_ALPHA + slack:
            raise NotAStateError(f"Werner range [{lo}, {hi}] outside [-1/3, 1]")
        params = np.clip(self.grid(lo, hi, steps), WERNER_MIN_ALPHA, WERNER_MAX_ALPHA)
        return self._run(params, werner, strict)

    def wc_ray(
        self,
        lo: float,
        hi: float,
        steps: int,
        direction: Sequence[float] = SweepDefaults.WC_DIRECTION,
        strict: bool = False,
    ) -> list[SweepRow]:
        """States w_{t·d} with d the normalized direction.

        Raises:
            NotAStateError: If an endpoint leaves the tetrahedron of states
        """
        d = np.asarray(direction, dtype=float)
        norm = float(np.linalg.norm(d))
        if d.shape != (3,) or norm == 0.0:
            raise ValidationError("Direction must be a nonzero 3-vector")
        d = d / norm
        params = self.grid(lo, hi, steps)
        # the tetrahedron is convex, so checking the endpoints covers the ray
        for endpoint in (params[0], params[-1]):
            w_c_state(endpoint * d)
        return self._run(params, lambda t: w_c_state(t * d), strict)


def rows_to_csv(rows: Sequence[SweepRow]) -> str:
    """CSV with header param,D,B,lower,upper,ppt; numbers at 9 significant digits."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(
            [
                format_csv(row.param),
                format_csv(row.distance),
                format_csv(row.b_value),
                format_csv(row.lower),
                format_csv(row.upper),
                "true" if row.ppt else "false",
            ]
        )
    return buffer.getvalue()
