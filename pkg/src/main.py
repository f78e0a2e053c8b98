"""Command-line entry point (``hsgeo``).

Data goes to stdout or ``--out``; logs go to stderr. Exit codes: 0 success,
1 failed reproduction claims, 2 parse error, 3 invalid state, 4 convergence
failure under ``--strict``.
"""
import argparse
import csv
import io
import logging
import sys
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np
from pydantic import ValidationError as SchemaError

from config.solver_config import GeometryDefaults, SweepDefaults
from src.api import codecs
from src.api.schemas import (
    OracleReportSchema,
    ReproductionSchema,
    SettingSchema,
    ViolationRowSchema,
    ViolationSummarySchema,
    WitnessReportSchema,
)
from src.constants import TOOL_VERSION, ExitCodes, ReportFormattingConstants
from src.domain.entities import Region
from src.hs_pipeline import bell_classic, geometry
from src.hs_pipeline.bell_classic import SettingOptimizer
from src.infrastructure.errors import (
    ConvergenceError,
    EntanglementGeometryError,
    OracleError,
    StateSpecError,
    ValidationError,
)
from src.infrastructure.settings import AppConfig, RuntimeSettings
from src.services.analysis_service import AnalysisService, build_state, parse_state_spec
from src.services.reproduction_service import ReproductionService, format_table
from src.services.sweep_service import SweepService, rows_to_csv

logger = logging.getLogger("hsgeo")

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s — %(message)s"


def configure_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format=LOG_FORMAT,
        datefmt="%Y-%m-%d %H:%M:%S",
        stream=sys.stderr,
        force=True,
    )


def _common_flags(suppress: bool = False) -> argparse.ArgumentParser:
    """Flags accepted before and after the subcommand.

    Subcommand copies use SUPPRESS defaults so they do not overwrite values
    given before the subcommand name.
    """
    unset = argparse.SUPPRESS if suppress else None
    off = argparse.SUPPRESS if suppress else False
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=off, help="Emit JSON instead of text.")
    common.add_argument("--seed", type=int, default=unset, help="Root seed for all randomness.")
    common.add_argument("--tol", type=float, default=unset, help="Distance gap tolerance.")
    common.add_argument("--restarts", type=int, default=unset, help="Random see-saw restarts.")
    common.add_argument("--max-iters", type=int, default=unset, help="Projection iteration cap.")
    common.add_argument("--grid", type=int, default=unset, help="Grid oracle resolution.")
    common.add_argument(
        "--trust-ppt",
        action="store_true",
        default=off,
        help="Report D = 0 for PPT inputs without projecting.",
    )
    common.add_argument(
        "--strict",
        action="store_true",
        default=off,
        help="Fail (exit 4) when a solve does not converge.",
    )
    common.add_argument(
        "--timing", action="store_true", default=off, help="Include wall time in reports."
    )
    common.add_argument("--out", type=Path, default=unset, help="Write output to FILE.")
    common.add_argument("--config", type=Path, default=unset, help="JSON config file.")
    common.add_argument("--log-level", default=unset, help="DEBUG, INFO, WARNING or ERROR.")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hsgeo",
        description="Hilbert-Schmidt distance, witnesses and Bell inequalities for two qubits.",
        parents=[_common_flags()],
    )
    common = _common_flags(suppress=True)
    parser.add_argument("--version", action="version", version=f"%(prog)s {TOOL_VERSION}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    state_help = "werner:A, wc:C1,C2,C3, bell:K, product:NX,NY,NZ,MX,MY,MZ or a JSON matrix file"
    analyze = sub.add_parser("analyze", parents=[common], help="PPT, D(w), A_max and B(w).")
    analyze.add_argument("state", help=state_help)

    distance = sub.add_parser("distance", parents=[common], help="D(w) with bounds and atoms.")
    distance.add_argument("state", help=state_help)
    distance.add_argument("--trace", action="store_true", help="Include per-iteration bounds.")

    witness = sub.add_parser("witness", parents=[common], help="Optimal witness A_max.")
    witness.add_argument("state", help=state_help)

    bell = sub.add_parser("bell", parents=[common], help="CHSH and Bell inequalities.")
    bell_sub = bell.add_subparsers(dest="bell_command", metavar="KIND")
    chsh = bell_sub.add_parser("chsh", parents=[common], help="CHSH observable.")
    chsh.add_argument("--angles", type=float, nargs=4, metavar=("A", "A2", "B", "B2"))
    chsh.add_argument("--optimize", action="store_true", help="Maximize over settings.")
    chsh.add_argument("--state", default=None, help="State to optimize for (default singlet).")
    original = bell_sub.add_parser("original", parents=[common], help="Bell's 1964 observable.")
    original.add_argument("--angles", type=float, nargs=3, metavar=("A", "B", "B2"))
    original.add_argument("--optimize", action="store_true", help="Maximize over settings.")
    bell_sub.add_parser("summary", parents=[common], help="Separable versus singlet table.")

    geo = sub.add_parser("geometry", parents=[common], help="c-space tetrahedron picture.")
    geo_sub = geo.add_subparsers(dest="geometry_command", metavar="KIND")
    sample = geo_sub.add_parser("sample", parents=[common], help="Classify a c-space grid.")
    sample.add_argument("--resolution", type=int, default=GeometryDefaults.SAMPLE_RESOLUTION)
    sample.add_argument(
        "--distances", action="store_true", help="Spot-check D(w_c) on tetrahedron samples."
    )
    mesh = geo_sub.add_parser("mesh", parents=[common], help="Export a region mesh.")
    mesh.add_argument("--region", required=True, choices=[r.value for r in Region])
    mesh.add_argument("--format", choices=("json", "off"), default="json")

    sweep = sub.add_parser("sweep", parents=[common], help="D and B along a state family.")
    sweep.add_argument("family", choices=("werner", "wc-ray"))
    sweep.add_argument("--range", type=float, nargs=2, metavar=("LO", "HI"), required=True)
    sweep.add_argument("--steps", type=int, default=SweepDefaults.STEPS)
    sweep.add_argument(
        "--direction", type=float, nargs=3, default=list(SweepDefaults.WC_DIRECTION)
    )
    sweep.add_argument("--workers", type=int, default=SweepDefaults.MAX_WORKERS)

    reproduce = sub.add_parser("reproduce", parents=[common], help="Check closed-form claims.")
    reproduce.add_argument("--filter", default=None, help="Group or claim name substring.")

    oracle = sub.add_parser("oracle", parents=[common], help="Extrema of an operator over S.")
    oracle.add_argument("file", type=Path, help="Operator JSON (matrix or Pauli form).")
    return parser


def load_config(args: argparse.Namespace, settings: RuntimeSettings) -> AppConfig:
    """File config overridden by command-line flags, then seeded.

    Raises:
        pydantic.ValidationError: If the merged values are out of range
    """
    path = args.config or settings.config_file
    config = AppConfig.from_file(path) if path else AppConfig()

    data = config.model_dump()
    if args.tol is not None:
        data["solver"]["tol"] = args.tol
    if args.max_iters is not None:
        data["solver"]["max_iters"] = args.max_iters
    if args.trust_ppt:
        data["solver"]["trust_ppt"] = True
    if args.restarts is not None:
        data["solver"]["oracle"]["restarts"] = args.restarts
    if args.grid is not None:
        data["solver"]["oracle"]["grid_resolution"] = args.grid
    config = AppConfig.model_validate(data)
    return config.with_root_seed(args.seed) if args.seed is not None else config


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")
        logger.info("Wrote %s", out)


def _root_seed(args: argparse.Namespace, config: AppConfig) -> int:
    return args.seed if args.seed is not None else config.solver.oracle.seed


def cmd_analyze(args: argparse.Namespace, config: AppConfig) -> int:
    service = AnalysisService(config, seed=_root_seed(args, config))
    report = service.analyze(parse_state_spec(args.state), timing=args.timing, strict=args.strict)
    if args.json:
        _emit(codecs.dump_json(codecs.run_report_to_schema(report)), args.out)
    else:
        lines = [
            f"state     {report.spec.text}",
            f"ppt       {str(report.ppt).lower()}",
            f"D(w)      {report.distance.distance:.9g}",
            f"bounds    [{report.distance.lower_bound:.9g}, {report.distance.upper_bound:.9g}]",
            f"B(w)      {report.b_value:.9g}",
            f"|B - D|   {report.residual:.2e}",
            f"converged {str(report.distance.converged).lower()}",
        ]
        if report.timing_ms is not None:
            lines.append(f"time      {report.timing_ms:.1f} ms")
        _emit("\n".join(lines) + "\n", args.out)
    return ExitCodes.SUCCESS


def cmd_distance(args: argparse.Namespace, config: AppConfig) -> int:
    service = AnalysisService(config, seed=_root_seed(args, config))
    report = service.distance(parse_state_spec(args.state), strict=args.strict)
    if args.json:
        _emit(codecs.dump_json(codecs.distance_to_schema(report, include_trace=args.trace)), args.out)
        return ExitCodes.SUCCESS

    lines = [
        f"D(w) = {report.distance:.9g}  (lower {report.lower_bound:.9g}, gap {report.gap:.2e})",
        f"iterations {report.iterations}, converged {str(report.converged).lower()}",
        "atoms:",
    ]
    for atom in report.atoms:
        n = " ".join(f"{x:+.6f}" for x in atom.state.n)
        m = " ".join(f"{x:+.6f}" for x in atom.state.m)
        lines.append(f"  {atom.weight:.9f}  n=({n})  m=({m})")
    _emit("\n".join(lines) + "\n", args.out)
    return ExitCodes.SUCCESS


def cmd_witness(args: argparse.Namespace, config: AppConfig) -> int:
    service = AnalysisService(config, seed=_root_seed(args, config))
    report, witness, b_value = service.witness(parse_state_spec(args.state), strict=args.strict)
    residual = abs(b_value - report.distance)
    if args.json:
        schema = WitnessReportSchema(
            witness=codecs.witness_to_schema(witness) if witness is not None else None,
            b_value=codecs.round_sig(b_value),
            distance=codecs.round_sig(report.distance),
            residual=codecs.round_sig(residual),
        )
        _emit(codecs.dump_json(schema), args.out)
        return ExitCodes.SUCCESS

    if witness is None:
        _emit(f"separable: D(w) = {report.distance:.9g}, no witness\n", args.out)
        return ExitCodes.SUCCESS
    matrix = np.array2string(witness.op.entries, precision=6, suppress_small=True)
    lines = [
        "A_max =",
        matrix,
        f"min over S (rho|A)  {witness.sep_min:.9g}",
        f"(w|A)              {witness.violation_state_value:.9g}",
        f"B(w)               {b_value:.9g}",
        f"D(w)               {report.distance:.9g}",
        f"|B - D|            {residual:.2e}",
    ]
    _emit("\n".join(lines) + "\n", args.out)
    return ExitCodes.SUCCESS


def _setting_schema(
    observable: str,
    value: float,
    vectors: dict[str, np.ndarray],
    angles: Sequence[float],
    sep_max: Optional[float] = None,
    anticorrelated: Optional[float] = None,
) -> SettingSchema:
    return SettingSchema(
        observable=observable,
        value=codecs.round_sig(value),
        sep_max=codecs.round_sig(sep_max) if sep_max is not None else None,
        anticorrelated_max=codecs.round_sig(anticorrelated) if anticorrelated is not None else None,
        vectors={k: codecs.round_sig(np.asarray(v).tolist()) for k, v in vectors.items()},
        angles_deg=codecs.round_sig(list(angles)),
    )


def _setting_text(schema: SettingSchema) -> str:
    lines = [f"{schema.observable} value  {schema.value:.9g}"]
    if schema.sep_max is not None:
        lines.append(f"separable max      {schema.sep_max:.9g}")
    if schema.anticorrelated_max is not None:
        lines.append(f"anticorrelated max {schema.anticorrelated_max:.9g}")
    lines.append("angles (deg)       " + ", ".join(f"{a:.6g}" for a in schema.angles_deg))
    for name, vector in schema.vectors.items():
        lines.append(f"  {name:<8} ({', '.join(f'{x:+.6f}' for x in vector)})")
    return "\n".join(lines) + "\n"


def cmd_bell(args: argparse.Namespace, config: AppConfig) -> int:
    service = AnalysisService(config, seed=_root_seed(args, config))
    optimizer = SettingOptimizer(config.bell, service.oracle)
    kind = args.bell_command

    if kind == "summary":
        rows = optimizer.violation_summary()
        if args.json:
            schema = ViolationSummarySchema(
                rows=[
                    ViolationRowSchema(
                        observable=r.observable,
                        sep_extremum=codecs.round_sig(r.sep_extremum),
                        singlet_value=codecs.round_sig(r.singlet_value),
                        difference=codecs.round_sig(r.difference),
                        expected_difference=(
                            None
                            if r.expected_difference is None
                            else codecs.round_sig(r.expected_difference)
                        ),
                        matches=r.matches,
                    )
                    for r in rows
                ]
            )
            _emit(codecs.dump_json(schema), args.out)
        else:
            lines = [
                f"{'observable':<14}{'separable':>14}{'singlet':>14}"
                f"{'difference':>14}{'expected':>14}  result"
            ]
            for r in rows:
                expected = "" if r.expected_difference is None else f"{r.expected_difference:.9g}"
                mark = ReportFormattingConstants.PASS_MARK if r.matches else ReportFormattingConstants.FAIL_MARK
                lines.append(
                    f"{r.observable:<14}{r.sep_extremum:>14.9g}{r.singlet_value:>14.9g}"
                    f"{r.difference:>14.9g}{expected:>14}  {mark}"
                )
            _emit("\n".join(lines) + "\n", args.out)
        return ExitCodes.SUCCESS

    if kind == "chsh":
        if args.optimize or args.angles is None:
            state = build_state(parse_state_spec(args.state)) if args.state else None
            value, setting = optimizer.chsh_max_violation(state)
        else:
            setting = bell_classic.chsh_setting_from_angles(*args.angles)
            value = bell_classic.chsh_singlet_closed_form(setting)
        sep_max = service.oracle.max_over_separable(bell_classic.chsh_operator(setting)).value
        schema = _setting_schema(
            "CHSH",
            value,
            {"a": setting.a, "a_prime": setting.a_prime, "b": setting.b, "b_prime": setting.b_prime},
            bell_classic.chsh_angles(setting),
            sep_max=sep_max,
        )
    else:
        if args.optimize or args.angles is None:
            value, setting, anticorrelated, sep_max = optimizer.bell_max_violation()
        else:
            setting = bell_classic.bell_setting_from_angles(*args.angles)
            value = bell_classic.bell_singlet_closed_form(setting)
            op = bell_classic.bell_operator(setting)
            anticorrelated = service.oracle.max_over_anticorrelated(op).value
            sep_max = service.oracle.max_over_separable(op).value
        schema = _setting_schema(
            "Bell",
            value,
            {"a": setting.a, "b": setting.b, "b_prime": setting.b_prime},
            bell_classic.bell_angles(setting),
            sep_max=sep_max,
            anticorrelated=anticorrelated,
        )

    _emit(codecs.dump_json(schema) if args.json else _setting_text(schema), args.out)
    return ExitCodes.SUCCESS


def cmd_geometry(args: argparse.Namespace, config: AppConfig) -> int:
    if args.geometry_command == "mesh":
        mesh = geometry.export_mesh(args.region)
        if args.format == "off":
            _emit(geometry.mesh_to_off(mesh), args.out)
        else:
            _emit(codecs.dump_json(codecs.mesh_to_schema(mesh)), args.out)
        return ExitCodes.SUCCESS

    samples = geometry.sample_regions(args.resolution)
    if args.distances:
        service = AnalysisService(config, seed=_root_seed(args, config))
        samples = geometry.attach_distances(samples, service.solver)

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    header = ["c1", "c2", "c3", "in_tetra", "in_mirror", "separable"]
    writer.writerow(header + (["distance"] if args.distances else []))
    for s in samples:
        row = [codecs.format_csv(x) for x in s.c]
        row += [str(flag).lower() for flag in (s.in_tetrahedron, s.in_mirror, s.separable)]
        if args.distances:
            row.append("" if s.distance is None else codecs.format_csv(s.distance))
        writer.writerow(row)
    _emit(buffer.getvalue(), args.out)
    return ExitCodes.SUCCESS


def cmd_sweep(args: argparse.Namespace, config: AppConfig) -> int:
    service = AnalysisService(config, seed=_root_seed(args, config))
    sweeper = SweepService(service.analyzer, max_workers=args.workers)
    lo, hi = args.range
    if args.family == "werner":
        rows = sweeper.werner(lo, hi, args.steps, strict=args.strict)
    else:
        rows = sweeper.wc_ray(lo, hi, args.steps, args.direction, strict=args.strict)
    _emit(rows_to_csv(rows), args.out)
    return ExitCodes.SUCCESS


def cmd_reproduce(args: argparse.Namespace, config: AppConfig) -> int:
    service = ReproductionService(config, seed=_root_seed(args, config))
    claims = service.run(args.filter)
    failed = [c for c in claims if not c.passed]
    if args.json:
        schema = ReproductionSchema(
            claims=[codecs.claim_to_schema(c) for c in claims],
            passed=len(claims) - len(failed),
            failed=len(failed),
            tool_version=TOOL_VERSION,
        )
        _emit(codecs.dump_json(schema), args.out)
    else:
        _emit(format_table(claims), args.out)
    for claim in failed:
        logger.error("FAILED %s: expected %r, computed %r", claim.name, claim.expected, claim.computed)
    return ExitCodes.REPRODUCTION_FAILURE if failed else ExitCodes.SUCCESS


def cmd_oracle(args: argparse.Namespace, config: AppConfig) -> int:
    service = AnalysisService(config, seed=_root_seed(args, config))
    op = codecs.load_operator(args.file)
    low, high, tangent, checked = service.operator_extremes(op, args.grid)
    schema = OracleReportSchema(
        sep_min=codecs.round_sig(low.value),
        sep_min_state=codecs.product_to_schema(low.state),
        sep_max=codecs.round_sig(high.value),
        sep_max_state=codecs.product_to_schema(high.state),
        tangent=tangent,
        grid_min=codecs.round_sig(checked.value) if checked is not None else None,
        restarts_used=low.restarts_used,
    )
    if args.json:
        _emit(codecs.dump_json(schema), args.out)
    else:
        lines = [
            f"min over S  {schema.sep_min:.9g}",
            f"max over S  {schema.sep_max:.9g}",
            f"tangent     {str(tangent).lower()}",
        ]
        if schema.grid_min is not None:
            lines.append(f"grid min    {schema.grid_min:.9g}")
        _emit("\n".join(lines) + "\n", args.out)
    return ExitCodes.SUCCESS


COMMANDS: dict[str, Callable[[argparse.Namespace, AppConfig], int]] = {
    "analyze": cmd_analyze,
    "distance": cmd_distance,
    "witness": cmd_witness,
    "bell": cmd_bell,
    "geometry": cmd_geometry,
    "sweep": cmd_sweep,
    "reproduce": cmd_reproduce,
    "oracle": cmd_oracle,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    settings = RuntimeSettings()
    configure_logging(args.log_level or settings.log_level)

    nested = {"bell": "bell_command", "geometry": "geometry_command"}
    if args.command is None or (
        args.command in nested and getattr(args, nested[args.command]) is None
    ):
        parser.print_help(sys.stderr)
        return ExitCodes.PARSE_ERROR

    try:
        config = load_config(args, settings)
        return COMMANDS[args.command](args, config)
    except StateSpecError as exc:
        logger.error("Could not parse input: %s", exc)
        return ExitCodes.PARSE_ERROR
    except SchemaError as exc:
        logger.error("Invalid configuration: %s", exc)
        return ExitCodes.PARSE_ERROR
    except (ConvergenceError, OracleError) as exc:
        logger.error("Numerical failure: %s", exc)
        return ExitCodes.CONVERGENCE_FAILURE
    except ValidationError as exc:
        logger.error("Invalid state: %s", exc)
        return ExitCodes.INVALID_STATE
    except EntanglementGeometryError as exc:
        logger.error("%s", exc)
        return ExitCodes.INVALID_STATE
    except OSError as exc:
        logger.error("I/O error: %s", exc)
        return ExitCodes.PARSE_ERROR


if __name__ == "__main__":
    sys.exit(main())
