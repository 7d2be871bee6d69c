"""
General HHL pipeline: phase estimation, eigenvalue-inversion rotations,
uncompute, postselection of the ancilla and solution extraction.

Register layout used by run_hhl: qubit 0 is the rotation ancilla, qubits
1..n_clock hold the clock (qubit 1 most significant), the remaining qubits
hold the system register |b>.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence

import numpy as np

from .circuits import Circuit, compose, dagger, inverse_qft_circuit, make_exp_gate, make_standard_gate, run_circuit
from .config import HHLConfig, validate_hhl_config
from .linalg import (
    ArrayLike,
    ComplexMatrix,
    ComplexVector,
    ValidationError,
    as_matrix,
    as_vector,
    classical_solve,
    condition_number,
    fidelity,
    hermitian_eig,
    is_hermitian,
    normalize,
)
from .statevector import (
    AMPLITUDE_LOAD_TOL,
    NotProductStateError,
    extract_subregister,
    init_with_amplitudes,
    postselect,
    reduced_density_matrix,
    register_histogram,
)

logger = logging.getLogger(__name__)

REPRESENTABLE_TOL = 1e-9
EXPECTATION_IMAG_TOL = 1e-10


class DomainError(ValidationError):
    """Raised when a rotation angle is undefined (|C / lambda| > 1)."""
    pass


class UnsupportedInstanceError(ValidationError):
    """Raised when an eigenvalue cannot be encoded exactly on the clock."""
    pass


@dataclass(frozen=True)
class LinearSystemInstance:
    """Hermitian A on 2^m dimensions with a normalized right-hand side b."""
    A: ComplexMatrix
    b: ComplexVector
    b_norm: float = 1.0  # ||b|| before normalization

    def __post_init__(self):
        A = as_matrix(self.A)
        b = as_vector(self.b)
        dim = A.shape[0]
        if A.shape[1] != dim or dim < 2 or dim & (dim - 1):
            raise ValidationError(f"A must be 2^m x 2^m with m >= 1, got {A.shape}")
        if not is_hermitian(A):
            raise ValidationError("A must be Hermitian")
        if b.shape[0] != dim:
            raise ValidationError(f"b has dimension {b.shape[0]}, A has {dim}")
        if abs(float(np.vdot(b, b).real) - 1.0) > AMPLITUDE_LOAD_TOL:
            raise ValidationError("b must be normalized; use LinearSystemInstance.from_rhs")
        A.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @classmethod
    def from_rhs(cls, A: ArrayLike, b: ArrayLike) -> "LinearSystemInstance":
        """Normalize an arbitrary nonzero right-hand side and remember its norm."""
        vec = as_vector(b)
        norm = float(np.linalg.norm(vec))
        return cls(A, normalize(vec), norm)

    @property
    def n_system(self) -> int:
        return self.A.shape[0].bit_length() - 1


@dataclass
class HHLResult:
    """Outputs of one HHL run."""
    solution_state: ComplexVector
    success_probability: float
    fidelity_vs_classical: float
    clock_histogram: Dict[int, float] = field(default_factory=dict)
    rotation_constant: float = 1.0
    condition_number: float = 1.0
    uncompute_residual: float = 0.0

    def rescaled_solution(self, b_norm: float = 1.0) -> ComplexVector:
        """||b|| * sqrt(P) / C * |x'>, which is A^-1 b on exactly representable spectra."""
        return b_norm * math.sqrt(self.success_probability) / self.rotation_constant * self.solution_state


def clock_eigenvalue(ell: int, config: HHLConfig) -> float:
    """Eigenvalue encoded by clock integer ell."""
    size = 2 ** config.n_clock
    if config.signed_eigenvalues and ell >= size // 2:
        ell -= size
    return 2 * math.pi * ell / config.t0


def rotation_constant(config: HHLConfig) -> float:
    """C for this config: 2^-r * pi in small_angle mode, else C or 2*pi/t0."""
    if config.inversion_mode == "small_angle":
        return math.pi * 2.0 ** (-config.r)
    if config.C is not None:
        return config.C
    return 2 * math.pi / config.t0


def rotation_angle(ell: int, config: HHLConfig) -> float:
    """
    Ry angle applied on clock branch ell.

    Raises:
        DomainError: If |C / lambda(ell)| > 1 in exact_arcsin mode.
    """
    lam = clock_eigenvalue(ell, config)
    C = rotation_constant(config)
    if config.inversion_mode == "small_angle":
        return 2 * C / lam
    ratio = C / lam
    if abs(ratio) > 1.0:
        raise DomainError(
            f"C={C:.6g} exceeds |lambda|={abs(lam):.6g} on clock value {ell}; arcsin undefined"
        )
    return 2 * math.asin(ratio)


def build_phase_estimation(
    A: ArrayLike,
    t0: float,
    clock_qubits: Sequence[int],
    system_qubits: Sequence[int],
    n_qubits: Optional[int] = None,
) -> Circuit:
    """
    Phase estimation of exp(iA t0) writing l = lambda * t0 / (2*pi) onto the clock.

    Args:
        A: Hermitian matrix on the system register.
        t0: Evolution time.
        clock_qubits: Clock register, most significant first.
        system_qubits: System register, most significant first.
        n_qubits: Circuit width; defaults to the highest index used + 1.

    Raises:
        ValidationError: If A does not match the system register.
    """
    A = as_matrix(A)
    clock = list(clock_qubits)
    system = list(system_qubits)
    if A.shape != (2 ** len(system),) * 2:
        raise ValidationError(
            f"A of shape {A.shape} does not act on {len(system)} system qubit(s)"
        )
    width = n_qubits if n_qubits is not None else max(clock + system) + 1
    n_clock = len(clock)

    circuit = Circuit(width)
    for q in clock:
        circuit = circuit.add(make_standard_gate("H"), [q])
    # Least significant clock qubit first, as drawn in the 2x2 example
    for i in reversed(range(n_clock)):
        power = 2 ** (n_clock - 1 - i)
        circuit = circuit.add(make_exp_gate(A, t0 * power / 2 ** n_clock), system, [clock[i]])

    return compose(circuit, inverse_qft_circuit(clock, width))


def build_inversion(
    clock_qubits: Sequence[int],
    ancilla_qubit: int,
    config: HHLConfig,
    n_qubits: Optional[int] = None,
) -> Circuit:
    """
    Multi-controlled Ry(theta(l)) on the ancilla for every nonzero clock value l.

    Zero-controls are realised by conjugating the clock qubit with X.

    Raises:
        DomainError: If an exact_arcsin angle is undefined.
    """
    clock = list(clock_qubits)
    if len(clock) != config.n_clock:
        raise ValidationError(f"config expects {config.n_clock} clock qubits, got {len(clock)}")
    width = n_qubits if n_qubits is not None else max(clock + [ancilla_qubit]) + 1
    n_clock = len(clock)

    circuit = Circuit(width)
    for ell in range(1, 2 ** n_clock):
        theta = rotation_angle(ell, config)
        zeros = [q for i, q in enumerate(clock) if not (ell >> (n_clock - 1 - i)) & 1]
        for q in zeros:
            circuit = circuit.add(make_standard_gate("X"), [q])
        circuit = circuit.add(make_standard_gate("Ry", theta), [ancilla_qubit], clock)
        for q in zeros:
            circuit = circuit.add(make_standard_gate("X"), [q])
    return circuit


def expectation_value(x: ArrayLike, M: ArrayLike) -> float:
    """
    <x|M|x> for a Hermitian observable.

    Raises:
        ValidationError: If M is not Hermitian or dimensions differ.
    """
    vec = as_vector(x)
    op = as_matrix(M)
    if not is_hermitian(op):
        raise ValidationError("observable must be Hermitian")
    if op.shape != (vec.shape[0],) * 2:
        raise ValidationError(f"observable of shape {op.shape} does not match vector of dimension {vec.shape[0]}")
    value = np.vdot(vec, op @ vec)
    if abs(value.imag) > EXPECTATION_IMAG_TOL:
        raise ValidationError(f"expectation has imaginary part {value.imag:.3e}")
    return float(value.real)


def _classical_reference(instance: LinearSystemInstance) -> ComplexVector:
    return normalize(classical_solve(instance.A, instance.b))


def run_hhl(instance: LinearSystemInstance, config: HHLConfig) -> HHLResult:
    """
    Run the full HHL circuit and postselect the ancilla on |1>.

    Returns:
        HHLResult with the quantum solution, success probability and fidelity
        against the normalized classical solution.

    Raises:
        ConfigurationError: If the config is invalid.
        SingularMatrixError: If A has no inverse.
        DomainError: If an exact_arcsin rotation is undefined.
        ImpossibleOutcomeError: If the ancilla never reads 1.
    """
    validate_hhl_config(config)
    reference = _classical_reference(instance)
    kappa = condition_number(instance.A)

    n_clock = config.n_clock
    n_system = instance.n_system
    n = 1 + n_clock + n_system
    ancilla = 0
    clock = list(range(1, 1 + n_clock))
    system = list(range(1 + n_clock, n))

    logger.info(
        f"HHL on {n} qubits: n_clock={n_clock}, t0={config.t0:.6g}, "
        f"mode={config.inversion_mode}, kappa={kappa:.4g}"
    )

    estimation = build_phase_estimation(instance.A, config.t0, clock, system, n)
    inversion = build_inversion(clock, ancilla, config, n)

    register = np.zeros(2 ** (1 + n_clock), dtype=np.complex128)
    register[0] = 1.0
    state = init_with_amplitudes(n, np.kron(register, instance.b))

    state = run_circuit(estimation, state)
    histogram = register_histogram(state, clock)
    state = run_circuit(inversion, state)
    state = run_circuit(dagger(estimation), state)

    residual = max(0.0, 1.0 - register_histogram(state, clock)[0])
    if residual > 1e-10:
        logger.warning(
            f"clock register not uncomputed (residual mass {residual:.3e}); "
            "some eigenvalues are not representable"
        )

    post, probability = postselect(state, ancilla, 1)

    try:
        solution = extract_subregister(post, [(ancilla, 1)] + [(q, 0) for q in clock], system)
        fid = fidelity(solution, reference)
    except NotProductStateError:
        logger.warning("system register is entangled with the clock; reporting mixed-state fidelity")
        rho = reduced_density_matrix(post, system)
        fid = math.sqrt(max(0.0, float(np.vdot(reference, rho @ reference).real)))
        solution = hermitian_eig(rho).eigenvectors[:, -1].copy()

    logger.info(f"HHL success probability {probability:.6g}, fidelity {fid:.9f}")

    return HHLResult(
        solution_state=solution,
        success_probability=probability,
        fidelity_vs_classical=min(1.0, fid),
        clock_histogram=histogram,
        rotation_constant=rotation_constant(config),
        condition_number=kappa,
        uncompute_residual=residual,
    )


def _clock_value(lam: float, config: HHLConfig) -> int:
    """Clock integer encoding lam exactly, or raise."""
    scaled = lam * config.t0 / (2 * math.pi)
    ell = round(scaled)
    size = 2 ** config.n_clock
    if abs(scaled - ell) > REPRESENTABLE_TOL or ell == 0:
        raise UnsupportedInstanceError(
            f"eigenvalue {lam:.10g} is not exactly representable (lambda*t0/2pi = {scaled:.10g})"
        )
    if config.signed_eigenvalues:
        low, high = -(size // 2), size // 2 - 1
    else:
        low, high = 1, size - 1
    if not low <= ell <= high:
        raise UnsupportedInstanceError(
            f"eigenvalue {lam:.10g} maps to clock value {ell}, outside [{low}, {high}]"
        )
    return ell % size


def success_probability_closed_form(instance: LinearSystemInstance, config: HHLConfig) -> float:
    """
    Postselection probability predicted from the eigen-expansion of b.

    exact_arcsin: sum |beta_j|^2 (C/lambda_j)^2; small_angle: sum |beta_j|^2 sin^2(C/lambda_j).

    Raises:
        UnsupportedInstanceError: If an eigenvalue is not exactly representable.
    """
    validate_hhl_config(config)
    eig = hermitian_eig(instance.A)
    betas = eig.eigenvectors.conj().T @ instance.b
    C = rotation_constant(config)

    total = 0.0
    for lam, beta in zip(eig.eigenvalues, betas):
        ell = _clock_value(float(lam), config)
        lam_encoded = clock_eigenvalue(ell, config)
        if config.inversion_mode == "small_angle":
            amplitude = math.sin(C / lam_encoded)
        else:
            if abs(C / lam_encoded) > 1.0:
                raise DomainError(f"C={C:.6g} exceeds |lambda|={abs(lam_encoded):.6g}")
            amplitude = C / lam_encoded
        total += abs(beta) ** 2 * amplitude ** 2
    return float(total)
