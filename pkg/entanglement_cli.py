#!/usr/bin/env python3
"""
Fermionic Entanglement Toolkit - command line front end

usage:
  entanglement_cli.py table FAMILY [--out FILE] [--grid-step H]
  entanglement_cli.py figure {1,2} [--family ID] [--q-start A --q-stop B --q-count K]
                                   [--include-inf | --no-include-inf] [--workers W]
  entanglement_cli.py analyze STATE.json [--q-start ...]
  entanglement_cli.py nfermion --N N --k K
  entanglement_cli.py selftest [--seed S] [--count C] [--n 4|6]

Exit codes: 0 success, 1 usage error (including argument values no command can use),
2 invalid input state, 3 property violation
"""

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import BaseModel, Field, ValidationError

from config.entanglement_config import DEFAULT_Q_GRID, SCAN_DEFAULTS, SELFTEST_DEFAULTS, TOLERANCES
from indicators.report import full_report
from scanners.csv_export import (
    table_frame, theta_frame, sweep_frame, wide_sweep_frame, write_csv
)
from scanners.families import FIGURE_FAMILIES, get_family
from scanners.property_checks import run_selftest
from scanners.threshold_scanner import (
    build_q_grid, nfermion_threshold_fraction, nfermion_threshold_numeric, q_sweep, table_rows,
    theta_detection_sweep
)
from states.state_io import load_density_matrix
from utils.common import setup_logging
from utils.error_handler import (
    ComputationError, DimensionTooLarge, EntanglementError, InputValidationError, OddDimension,
    PropertyViolation
)

logger = setup_logging("entanglement_cli")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID_STATE = 2
EXIT_PROPERTY_VIOLATION = 3


class CliConfig(BaseModel):
    """Validated command line settings"""
    command: str
    family: Optional[str] = None
    figure: Optional[int] = Field(default=None, ge=1, le=2)
    input: Optional[Path] = None
    q_start: Optional[float] = Field(default=None, ge=1.0)
    q_stop: Optional[float] = Field(default=None, ge=1.0)
    q_count: Optional[int] = Field(default=None, ge=1)
    include_inf: bool = SCAN_DEFAULTS['include_inf']
    out: Optional[Path] = None
    seed: int = SELFTEST_DEFAULTS['seed']
    count: int = Field(default=SELFTEST_DEFAULTS['count'], ge=0)
    n: int = Field(default=SELFTEST_DEFAULTS['n'], ge=2)
    N: Optional[int] = None
    k: Optional[int] = None
    grid_step: float = Field(default=SCAN_DEFAULTS['grid_step'], gt=0.0, le=0.5)
    workers: int = Field(default=SCAN_DEFAULTS['workers'], ge=1)
    bisect_tol: float = Field(default=TOLERANCES['bisection'], gt=0.0)
    verdict_tol: float = Field(default=TOLERANCES['verdict'], ge=0.0)
    theta_points: int = Field(default=SCAN_DEFAULTS['theta_points'], ge=2)

    @property
    def has_q_grid(self) -> bool:
        return any(v is not None for v in (self.q_start, self.q_stop, self.q_count))

    def q_grid(self):
        return build_q_grid(self.q_start, self.q_stop, self.q_count, self.include_inf)


class CliArgumentParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with EXIT_USAGE"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_q_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--q-start', type=float, help="first Renyi order (>= 1)")
    parser.add_argument('--q-stop', type=float, help="last finite Renyi order")
    parser.add_argument('--q-count', type=int, help="number of finite orders")
    parser.add_argument('--include-inf', action=argparse.BooleanOptionalAction,
                        default=SCAN_DEFAULTS['include_inf'], help="append q = inf")


def _add_scan_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--grid-step', type=float, default=SCAN_DEFAULTS['grid_step'])
    parser.add_argument('--bisect-tol', type=float, default=TOLERANCES['bisection'])
    parser.add_argument('--verdict-tol', type=float, default=TOLERANCES['verdict'])
    parser.add_argument('--out', type=Path, help="write output here instead of stdout")


def build_parser() -> CliArgumentParser:
    parser = CliArgumentParser(
        prog="entanglement_cli.py",
        description="Entropic entanglement criteria for systems of identical fermions",
    )
    sub = parser.add_subparsers(dest='command', required=True)

    table = sub.add_parser('table', help="detection thresholds of one family")
    table.add_argument('family', help="werner | gisin | theta | dim6-1 | dim6-2 | dim6-3")
    table.add_argument('--theta-points', type=int, default=SCAN_DEFAULTS['theta_points'])
    _add_scan_flags(table)

    figure = sub.add_parser('figure', help="p_min as a function of the Renyi order")
    figure.add_argument('figure', type=int, choices=sorted(FIGURE_FAMILIES))
    figure.add_argument('--family', help="restrict to one family (long q,p_min CSV)")
    figure.add_argument('--workers', type=int, default=SCAN_DEFAULTS['workers'])
    _add_q_flags(figure)
    _add_scan_flags(figure)

    analyze = sub.add_parser('analyze', help="indicator report of a JSON density matrix")
    analyze.add_argument('input', type=Path)
    analyze.add_argument('--verdict-tol', type=float, default=TOLERANCES['verdict'])
    analyze.add_argument('--out', type=Path)
    _add_q_flags(analyze)

    nfermion = sub.add_parser('nfermion', help="N-fermion R_inf threshold")
    nfermion.add_argument('--N', dest='N', type=int, required=True)
    nfermion.add_argument('--k', type=int, required=True)
    nfermion.add_argument('--grid-step', type=float, default=SCAN_DEFAULTS['grid_step'])
    nfermion.add_argument('--bisect-tol', type=float, default=TOLERANCES['bisection'])

    selftest = sub.add_parser('selftest', help="property checks on random separable states")
    selftest.add_argument('--seed', type=int, default=SELFTEST_DEFAULTS['seed'])
    selftest.add_argument('--count', type=int, default=SELFTEST_DEFAULTS['count'])
    selftest.add_argument('--n', type=int, default=SELFTEST_DEFAULTS['n'])

    return parser


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding='utf-8')
    logger.info("output_written", path=str(out))


def cmd_table(config: CliConfig) -> int:
    family = get_family(config.family)
    if family.family_id == 'theta':
        sweep = theta_detection_sweep(config.theta_points, verdict_tol=config.verdict_tol)
        text = write_csv(theta_frame(sweep), config.out)
        if config.out is None:
            sys.stdout.write(text)
        verdict = "all entangled theta detected" if sweep.all_entangled_detected \
            else "some entangled theta not detected"
        print(f"{verdict} ({sweep.entangled_count} entangled of {len(sweep.rows)})",
              file=sys.stderr)
        return EXIT_OK

    results = table_rows(family, grid_step=config.grid_step, bisect_tol=config.bisect_tol,
                         verdict_tol=config.verdict_tol)
    text = write_csv(table_frame(results), config.out)
    if config.out is None:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_figure(config: CliConfig) -> int:
    family_ids = FIGURE_FAMILIES[config.figure]
    q_grid = config.q_grid()
    kwargs = dict(grid_step=config.grid_step, workers=config.workers,
                  bisect_tol=config.bisect_tol, verdict_tol=config.verdict_tol)

    if config.family is not None:
        family = get_family(config.family)
        df = sweep_frame(q_sweep(family, q_grid, **kwargs))
    else:
        sweeps = {fid: q_sweep(get_family(fid), q_grid, **kwargs) for fid in family_ids}
        df = wide_sweep_frame(sweeps)

    text = write_csv(df, config.out)
    if config.out is None:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_analyze(config: CliConfig) -> int:
    rho = load_density_matrix(config.input)
    q_grid = config.q_grid() if config.has_q_grid else DEFAULT_Q_GRID
    report = full_report(rho, q_grid, verdict_tol=config.verdict_tol)
    _emit(report.model_dump_json(indent=2) + "\n", config.out)
    return EXIT_OK


def cmd_nfermion(config: CliConfig) -> int:
    N, k = config.N, config.k
    exact = nfermion_threshold_fraction(N, k * N)
    closed = float(exact)
    print(f"N={N} k={k} n={k * N}")
    print(f"closed form: {closed:.9f} ({exact.numerator}/{exact.denominator})")
    try:
        numeric = nfermion_threshold_numeric(N, k, grid_step=config.grid_step,
                                             bisect_tol=config.bisect_tol)
    except DimensionTooLarge as e:
        print(f"numeric: skipped ({e})")
        return EXIT_OK
    print(f"numeric: {numeric:.9f}")
    print(f"difference: {abs(numeric - closed):.3e}")
    return EXIT_OK


def cmd_selftest(config: CliConfig) -> int:
    summary = run_selftest(config.seed, config.count, config.n, raise_on_violation=False)
    print("\n".join(summary.lines()))
    if not summary.passed:
        raise PropertyViolation("; ".join(summary.violations), violations=summary.violations)
    return EXIT_OK


COMMANDS = {
    'table': cmd_table,
    'figure': cmd_figure,
    'analyze': cmd_analyze,
    'nfermion': cmd_nfermion,
    'selftest': cmd_selftest,
}


def check_arguments(config: CliConfig) -> None:
    """
    Resolve everything a command derives from its arguments before any work starts

    Raises:
        UnknownFamily, InvalidOrder, ParameterOutOfRange, InvalidDimensions, OddDimension
    """
    if config.family is not None:
        get_family(config.family)
    if config.command == 'figure' or config.has_q_grid:
        config.q_grid()
    if config.command == 'nfermion':
        nfermion_threshold_fraction(config.N, config.k * config.N)
    if config.command == 'selftest' and config.n % 2:
        raise OddDimension(f"single-particle dimension {config.n} is odd", n=config.n)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        config = CliConfig(**{k: v for k, v in vars(args).items() if v is not None})
    except ValidationError as e:
        for error in e.errors():
            location = ".".join(str(part) for part in error['loc'])
            print(f"{parser.prog}: error: --{location.replace('_', '-')}: {error['msg']}",
                  file=sys.stderr)
        return EXIT_USAGE

    try:
        check_arguments(config)
    except InputValidationError as e:
        print(f"{parser.prog}: error: {e.code}: {e}", file=sys.stderr)
        return EXIT_USAGE

    logger.info("command_started", command=config.command)
    try:
        return COMMANDS[config.command](config)
    except PropertyViolation as e:
        print(json.dumps(e.to_dict()), file=sys.stderr)
        return EXIT_PROPERTY_VIOLATION
    except InputValidationError as e:
        print(json.dumps(e.to_dict()))
        return EXIT_INVALID_STATE
    except ComputationError as e:
        print(json.dumps(e.to_dict()), file=sys.stderr)
        return EXIT_PROPERTY_VIOLATION
    except EntanglementError as e:
        print(json.dumps(e.to_dict()), file=sys.stderr)
        return EXIT_INVALID_STATE


if __name__ == "__main__":
    sys.exit(main())
