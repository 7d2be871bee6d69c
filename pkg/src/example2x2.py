"""
The four-qubit circuit for A = 1/2 [[3, 1], [1, 3]] and the r sweep.

Qubits (x1, x2, x3, x4) = (0, 1, 2, 3): x1 is the rotation ancilla, x2 x3
the clock, x4 holds |b>. The eigenvalues 1 and 2 land exactly on clock
values |01> and |10>; a SWAP then turns them into 2/lambda, which controls
two Ry rotations on x1.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, NamedTuple, Tuple

import numpy as np

from .circuits import Circuit, dagger, make_exp_gate, make_standard_gate, run_circuit
from .config import INVERSION_MODES, R_MIN_RECOMMENDED, get_sweep_config
from .hhl import DomainError
from .linalg import ArrayLike, ComplexVector, ValidationError, as_vector, classical_solve, fidelity, normalize
from .statevector import extract_subregister, init_with_amplitudes, postselect

logger = logging.getLogger(__name__)

EXAMPLE_MATRIX = 0.5 * np.array([[3, 1], [1, 3]], dtype=np.complex128)
EIGENVALUES = (1.0, 2.0)
EIGENVECTORS = (
    np.array([1, -1], dtype=np.complex128) / math.sqrt(2),
    np.array([1, 1], dtype=np.complex128) / math.sqrt(2),
)
T0 = 2 * math.pi
DEFAULT_B = (1.0, 0.0)

ANCILLA, CLOCK_HIGH, CLOCK_LOW, SYSTEM = 0, 1, 2, 3
N_QUBITS = 4
PRE_ROTATION_OPS = 9


class ExampleOutcome(NamedTuple):
    fidelity: float
    probability: float
    x_prime: ComplexVector


class OracleValues(NamedTuple):
    fidelity: float
    probability: float


@dataclass(frozen=True)
class SweepRecord:
    """One point of the fidelity/probability-versus-r curve."""
    r: float
    fidelity: float
    probability: float


def max_r_for_resolution(omega: float) -> float:
    """Largest usable r when the smallest resolvable rotation angle is omega."""
    if omega <= 0:
        raise ValidationError(f"omega must be positive, got {omega!r}")
    return math.log2(math.pi / omega)


def _rotation_constant(r: float) -> float:
    return math.pi * 2.0 ** (-r)


def _check_r(r: float, inversion_mode: str) -> None:
    if not (r > 0 and math.isfinite(r)):
        raise ValidationError(f"r must be positive and finite, got {r!r}")
    if inversion_mode not in INVERSION_MODES:
        raise ValidationError(f"unknown inversion mode {inversion_mode!r}")
    if inversion_mode == "exact_arcsin" and _rotation_constant(r) > min(EIGENVALUES):
        raise DomainError(f"exact rotations need r >= log2(pi), got r={r}")


def _rotation_angles(r: float, inversion_mode: str) -> Tuple[float, float]:
    """Angles for the x2 (lambda = 1) and x3 (lambda = 2) branches."""
    C = _rotation_constant(r)
    if inversion_mode == "small_angle":
        return 2 * math.pi / 2 ** r, math.pi / 2 ** r
    return 2 * math.asin(C / EIGENVALUES[0]), 2 * math.asin(C / EIGENVALUES[1])


def build_pre_rotation_segment() -> Circuit:
    """Phase estimation, inverse QFT and the inversion SWAP (the first 9 ops)."""
    H = make_standard_gate("H")
    swap = make_standard_gate("SWAP")
    c = Circuit(N_QUBITS)
    c = c.add(H, [CLOCK_HIGH])
    c = c.add(H, [CLOCK_LOW])
    c = c.add(make_exp_gate(EXAMPLE_MATRIX, T0 / 4), [SYSTEM], [CLOCK_LOW])
    c = c.add(make_exp_gate(EXAMPLE_MATRIX, T0 / 2), [SYSTEM], [CLOCK_HIGH])
    c = c.add(swap, [CLOCK_HIGH, CLOCK_LOW])
    c = c.add(H, [CLOCK_LOW])
    c = c.add(make_standard_gate("Sdag"), [CLOCK_LOW], [CLOCK_HIGH])
    c = c.add(H, [CLOCK_HIGH])
    c = c.add(swap, [CLOCK_HIGH, CLOCK_LOW])
    return c


def build_fig2_circuit(r: float, inversion_mode: str = "small_angle") -> Circuit:
    """
    The 20-op example circuit: pre-rotation segment, two controlled Ry on x1, then its dagger.

    Args:
        r: Rotation exponent; C = 2^-r * pi.
        inversion_mode: small_angle (angles 2*pi/2^r and pi/2^r) or exact_arcsin.

    Raises:
        ValidationError: If r <= 0.
        DomainError: If exact_arcsin is asked for with r < log2(pi).
    """
    _check_r(r, inversion_mode)
    if r < R_MIN_RECOMMENDED:
        logger.warning(f"r={r:.4g} is below the recommended minimum log2(2*pi)={R_MIN_RECOMMENDED:.4g}")

    theta_high, theta_low = _rotation_angles(r, inversion_mode)
    segment = build_pre_rotation_segment()
    rotations = (
        Circuit(N_QUBITS)
        .add(make_standard_gate("Ry", theta_high), [ANCILLA], [CLOCK_HIGH])
        .add(make_standard_gate("Ry", theta_low), [ANCILLA], [CLOCK_LOW])
    )
    return segment + rotations + dagger(segment)


def _initial_amplitudes(b: ComplexVector) -> np.ndarray:
    register = np.zeros(2 ** (N_QUBITS - 1), dtype=np.complex128)
    register[0] = 1.0
    return np.kron(register, b)


def run_example(
    r: float,
    b: ArrayLike = DEFAULT_B,
    inversion_mode: str = "small_angle",
) -> ExampleOutcome:
    """
    Simulate the example circuit and postselect x1 = 1.

    Args:
        r: Rotation exponent.
        b: Normalized 2-vector loaded into x4.
        inversion_mode: small_angle or exact_arcsin.

    Returns:
        ExampleOutcome(fidelity, probability, x_prime).

    Raises:
        ImpossibleOutcomeError: If x1 = 1 has probability below 1e-12.
    """
    vec = as_vector(b)
    if vec.shape != (2,):
        raise ValidationError(f"b must be a 2-vector, got shape {vec.shape}")
    circuit = build_fig2_circuit(r, inversion_mode)
    state = init_with_amplitudes(N_QUBITS, _initial_amplitudes(vec))
    state = run_circuit(circuit, state)

    post, probability = postselect(state, ANCILLA, 1)
    x_prime = extract_subregister(
        post, [(ANCILLA, 1), (CLOCK_HIGH, 0), (CLOCK_LOW, 0)], [SYSTEM]
    )
    reference = normalize(classical_solve(EXAMPLE_MATRIX, vec))
    fid = fidelity(x_prime, reference)
    logger.debug(f"r={r:.6g}: fidelity={fid:.9f}, probability={probability:.9g}")
    return ExampleOutcome(fid, probability, x_prime)


def closed_form_oracle(
    r: float,
    b: ArrayLike = DEFAULT_B,
    inversion_mode: str = "small_angle",
) -> OracleValues:
    """
    Fidelity and probability predicted from the eigen-expansion of b.

    x' is proportional to beta1 s1 u1 + beta2 s2 u2 with s_j the ancilla |1>
    amplitude on branch j (sin(pi/2^r), sin(pi/2^(r+1)) in small_angle mode,
    C/lambda_j in exact_arcsin mode); the exact solution is beta1 u1 + beta2/2 u2.
    """
    _check_r(r, inversion_mode)
    vec = normalize(b)
    betas = np.array([np.vdot(u, vec) for u in EIGENVECTORS])
    theta_high, theta_low = _rotation_angles(r, inversion_mode)
    amplitudes = np.array([math.sin(theta_high / 2), math.sin(theta_low / 2)])

    probability = float(np.sum(np.abs(betas) ** 2 * amplitudes ** 2))
    quantum = betas * amplitudes
    exact = betas / np.array(EIGENVALUES)
    fid = abs(np.vdot(quantum, exact)) / (np.linalg.norm(quantum) * np.linalg.norm(exact))
    return OracleValues(min(1.0, float(fid)), probability)


def sweep_r(
    r_min: float,
    r_max: float,
    steps: int,
    b: ArrayLike = DEFAULT_B,
    inversion_mode: str = "small_angle",
    workers: int = 1,
) -> List[SweepRecord]:
    """
    Run the example on a uniform r grid, endpoints included.

    Args:
        workers: Thread count; results are ordered by r regardless.

    Raises:
        ConfigurationError: If the grid is invalid.
    """
    config = get_sweep_config(r_min=r_min, r_max=r_max, steps=steps)
    grid = [float(r) for r in np.linspace(config.r_min, config.r_max, config.steps)]
    logger.info(f"Sweeping r over [{config.r_min}, {config.r_max}] in {config.steps} points")

    def evaluate(r: float) -> SweepRecord:
        outcome = run_example(r, b, inversion_mode)
        return SweepRecord(r=r, fidelity=outcome.fidelity, probability=outcome.probability)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(evaluate, grid))
    return [evaluate(r) for r in grid]


def oracle_sweep(
    r_values: List[float],
    b: ArrayLike = DEFAULT_B,
    inversion_mode: str = "small_angle",
) -> List[SweepRecord]:
    """Closed-form counterpart of sweep_r on an explicit grid."""
    records = []
    for r in r_values:
        values = closed_form_oracle(r, b, inversion_mode)
        records.append(SweepRecord(r=float(r), fidelity=values.fidelity, probability=values.probability))
    return records

