"""
Command-line interface for HHLCircuits.

Subcommands:
    solve    run the general HHL pipeline on a matrix/rhs file pair
    example  run the four-qubit 2x2 example at one r
    sweep    emit the fidelity/probability-versus-r table
    dump     print the example circuit, one op per line

Result documents go to stdout (or --out); logs go to stderr.
"""

import argparse
import dataclasses
import logging
import sys
from typing import List, Optional

import numpy as np

from .config import get_hhl_config, get_runtime_config
from .example2x2 import build_fig2_circuit, run_example, sweep_r
from .hhl import LinearSystemInstance, expectation_value, run_hhl
from .linalg import ValidationError, normalize
from .circuits import dump_circuit
from .statevector import ImpossibleOutcomeError
from .utils import (
    dumps_json,
    encode_complex_array,
    load_matrix,
    load_vector,
    records_to_csv,
    records_to_json,
    write_output,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_VALIDATION = 2
EXIT_IMPOSSIBLE = 3

# CLI spelling -> HHLConfig.inversion_mode
MODE_NAMES = {"exact": "exact_arcsin", "small-angle": "small_angle"}


def setup_logging(verbose: bool = False, level: str = "INFO") -> None:
    """Configure logging on stderr; --verbose forces DEBUG."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else getattr(logging, level, logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.StreamHandler(sys.stderr),
        ]
    )


def _add_mode(parser: argparse.ArgumentParser, default: str) -> None:
    parser.add_argument(
        "--mode",
        choices=list(MODE_NAMES),
        default=default,
        help="Eigenvalue inversion: exact arcsin angles or the small-angle 2C/lambda rule.",
    )


def _add_out(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", default="-", help="Output file, - for stdout.")


def _add_b(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--b1", type=float, default=1.0, help="First component of b.")
    parser.add_argument("--b2", type=float, default=0.0, help="Second component of b.")


def build_parser() -> argparse.ArgumentParser:
    """Argument parser for all subcommands."""
    parser = argparse.ArgumentParser(
        prog="HHLCircuits",
        description="HHLCircuits - state-vector simulation of the HHL linear-system algorithm",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument(
        "--verbose", "-v",
        action="store_true",
        help="Enable verbose logging.",
    )
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    solve = commands.add_parser(
        "solve",
        help="Run HHL on a Hermitian matrix and right-hand side.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    solve.add_argument("--matrix", required=True, help="MatrixFile holding A.")
    solve.add_argument("--rhs", required=True, help="MatrixFile holding b as a single column.")
    solve.add_argument("--clock", type=int, default=2, help="Number of clock qubits.")
    solve.add_argument("--t0", type=float, default=6.283185307, help="Phase-estimation evolution time.")
    solve.add_argument("--c", type=float, default=None, help="Rotation constant C (exact mode).")
    _add_mode(solve, "exact")
    solve.add_argument("--r", type=float, default=None, help="Small-angle exponent, C = 2^-r * pi.")
    solve.add_argument(
        "--signed",
        action="store_true",
        help="Read the clock register as two's complement (negative eigenvalues).",
    )
    solve.add_argument("--observable", default=None, help="MatrixFile holding a Hermitian M; reports <x|M|x>.")
    _add_out(solve)

    example = commands.add_parser(
        "example",
        help="Run the four-qubit 2x2 example circuit.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    example.add_argument("--r", type=float, default=4.0, help="Rotation exponent.")
    _add_b(example)
    _add_mode(example, "small-angle")
    _add_out(example)

    sweep = commands.add_parser(
        "sweep",
        help="Tabulate fidelity and success probability over a grid of r.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    sweep.add_argument("--r-min", type=float, default=2.0, help="First grid point.")
    sweep.add_argument("--r-max", type=float, default=8.0, help="Last grid point.")
    sweep.add_argument("--steps", type=int, default=25, help="Number of grid points.")
    _add_b(sweep)
    _add_mode(sweep, "small-angle")
    sweep.add_argument("--format", choices=["csv", "json"], default="csv", help="Output format.")
    sweep.add_argument(
        "--workers",
        type=int,
        default=None,
        help="Worker threads (default: HHLSIM_SWEEP_WORKERS or 1).",
    )
    _add_out(sweep)

    dump = commands.add_parser(
        "dump",
        help="Print the example circuit, one op per line.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    dump.add_argument("--r", type=float, default=4.0, help="Rotation exponent.")
    _add_mode(dump, "small-angle")
    _add_out(dump)

    return parser


def _cli_b(args: argparse.Namespace) -> np.ndarray:
    b = np.array([args.b1, args.b2], dtype=np.complex128)
    if not np.all(np.isfinite(b)):
        raise ValidationError(f"b must be finite, got ({args.b1}, {args.b2})")
    return normalize(b)


def cmd_solve(args: argparse.Namespace) -> int:
    """Run HHL on the files given and write a result document."""
    A = load_matrix(args.matrix)
    b = load_vector(args.rhs)
    instance = LinearSystemInstance.from_rhs(A, b)
    config = get_hhl_config(
        n_clock=args.clock,
        t0=args.t0,
        C=args.c,
        inversion_mode=MODE_NAMES[args.mode],
        r=args.r,
        signed_eigenvalues=args.signed,
    )

    result = run_hhl(instance, config)
    document = {
        "fidelity": result.fidelity_vs_classical,
        "probability": result.success_probability,
        "solution": encode_complex_array(result.solution_state),
        "config": dataclasses.asdict(config),
        "condition_number": result.condition_number,
        "clock_histogram": {str(k): v for k, v in result.clock_histogram.items()},
        "solution_norm_estimate": float(np.linalg.norm(result.rescaled_solution(instance.b_norm))),
    }
    if args.observable:
        M = load_matrix(args.observable)
        document["expectation"] = expectation_value(result.solution_state, M)

    write_output(dumps_json(document), args.out)
    return EXIT_OK


def cmd_example(args: argparse.Namespace) -> int:
    """Run the 2x2 example at one r."""
    b = _cli_b(args)
    mode = MODE_NAMES[args.mode]
    outcome = run_example(args.r, b, mode)
    document = {
        "fidelity": outcome.fidelity,
        "probability": outcome.probability,
        "solution": encode_complex_array(outcome.x_prime),
        "config": {
            "r": args.r,
            "b": encode_complex_array(b),
            "inversion_mode": mode,
        },
    }
    write_output(dumps_json(document), args.out)
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    """Write the r sweep as CSV or JSON."""
    b = _cli_b(args)
    workers = args.workers if args.workers is not None else get_runtime_config().sweep_workers
    if workers < 1:
        raise ValidationError(f"--workers must be >= 1, got {workers}")
    records = sweep_r(args.r_min, args.r_max, args.steps, b, MODE_NAMES[args.mode], workers=workers)
    if args.format == "csv":
        write_output(records_to_csv(records), args.out)
    else:
        write_output(records_to_json(records), args.out)
    return EXIT_OK


def cmd_dump(args: argparse.Namespace) -> int:
    """Print the example circuit."""
    write_output(dump_circuit(build_fig2_circuit(args.r, MODE_NAMES[args.mode])), args.out)
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "example": cmd_example,
    "sweep": cmd_sweep,
    "dump": cmd_dump,
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Main entry point.

    Returns:
        0 on success, 2 on invalid input, 3 when the ancilla can never read 1,
        1 on anything unexpected.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors and 0 on --help
        return e.code if isinstance(e.code, int) else EXIT_VALIDATION

    try:
        runtime = get_runtime_config()
        setup_logging(verbose=args.verbose, level=runtime.log_level)
        return COMMANDS[args.command](args)

    except ImpossibleOutcomeError as e:
        logger.error(f"Impossible outcome: {e}")
        return EXIT_IMPOSSIBLE
    except ValueError as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_VALIDATION
    except Exception as e:
        logger.exception(f"Unexpected error: {e}")
        return EXIT_INTERNAL
