"""
n-qubit state-vector engine.

Qubit 0 is the most significant bit of the basis index and the top wire of
a circuit diagram: |x1 x2 x3 x4> sits at index 8*x1 + 4*x2 + 2*x3 + x4.
Gates act on a (2,)*n tensor view of the amplitudes; the full 2^n x 2^n
operator is never formed here.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from .linalg import (
    ArrayLike,
    ComplexMatrix,
    ComplexVector,
    ValidationError,
    as_matrix,
    as_vector,
    is_unitary,
)

logger = logging.getLogger(__name__)

STATE_NORM_TOL = 1e-10
AMPLITUDE_LOAD_TOL = 1e-8
POSTSELECT_TOL = 1e-12
PRODUCT_STATE_TOL = 1e-8


class ImpossibleOutcomeError(Exception):
    """Raised when postselecting on an outcome with (numerically) zero probability."""
    pass


class NotProductStateError(ValidationError):
    """Raised when a register cannot be factored out of the state."""
    pass


@dataclass(frozen=True)
class QuantumState:
    """Normalized amplitudes of an n-qubit register."""
    n_qubits: int
    amplitudes: ComplexVector

    def __post_init__(self):
        if not isinstance(self.n_qubits, (int, np.integer)) or self.n_qubits < 1:
            raise ValidationError(f"n_qubits must be a positive integer, got {self.n_qubits!r}")
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape[0] != 2 ** self.n_qubits:
            raise ValidationError(
                f"{self.n_qubits} qubits need {2 ** self.n_qubits} amplitudes, got {amps.shape[0]}"
            )
        norm_sq = float(np.vdot(amps, amps).real)
        if abs(norm_sq - 1.0) > STATE_NORM_TOL:
            raise ValidationError(f"state is not normalized (norm^2 = {norm_sq:.12f})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def tensor(self) -> np.ndarray:
        """Writable (2,)*n copy of the amplitudes, axis i = qubit i."""
        return self.amplitudes.reshape((2,) * self.n_qubits).copy()


def _check_qubits(n_qubits: int, qubits: Iterable[int], label: str) -> List[int]:
    checked = []
    for q in qubits:
        if not isinstance(q, (int, np.integer)) or not 0 <= q < n_qubits:
            raise ValidationError(f"{label} qubit {q!r} out of range for {n_qubits} qubits")
        checked.append(int(q))
    if len(set(checked)) != len(checked):
        raise ValidationError(f"{label} qubits must be distinct, got {checked}")
    return checked


def init_basis(n_qubits: int, index: int) -> QuantumState:
    """
    Computational basis state |index>.

    Raises:
        ValidationError: If index is outside [0, 2^n).
    """
    if not isinstance(n_qubits, (int, np.integer)) or n_qubits < 1:
        raise ValidationError(f"n_qubits must be a positive integer, got {n_qubits!r}")
    if not 0 <= index < 2 ** n_qubits:
        raise ValidationError(f"basis index {index} out of range for {n_qubits} qubits")
    amps = np.zeros(2 ** n_qubits, dtype=np.complex128)
    amps[index] = 1.0
    return QuantumState(n_qubits, amps)


def init_with_amplitudes(n_qubits: int, v: ArrayLike) -> QuantumState:
    """
    Load a (nearly) normalized vector directly as the register state.

    The input must have unit norm within 1e-8; it is renormalized exactly.

    Raises:
        ValidationError: On a dimension mismatch, the zero vector or a norm off by more than 1e-8.
    """
    amps = as_vector(v)
    if amps.shape[0] != 2 ** n_qubits:
        raise ValidationError(
            f"{n_qubits} qubits need {2 ** n_qubits} amplitudes, got {amps.shape[0]}"
        )
    norm = float(np.linalg.norm(amps))
    if norm == 0.0:
        raise ValidationError("cannot load the zero vector as a state")
    if abs(norm ** 2 - 1.0) > AMPLITUDE_LOAD_TOL:
        raise ValidationError(f"amplitudes are not normalized (norm = {norm:.10f})")
    return QuantumState(n_qubits, amps / norm)


def _apply_to_amplitudes(
    amplitudes: np.ndarray,
    n_qubits: int,
    U: ComplexMatrix,
    targets: Sequence[int],
    controls: Sequence[int],
) -> np.ndarray:
    """Apply U to raw (possibly unnormalized) amplitudes; returns a new flat array."""
    psi = np.array(amplitudes, dtype=np.complex128).reshape((2,) * n_qubits)

    index = [slice(None)] * n_qubits
    for c in controls:
        index[c] = 1
    index = tuple(index)

    # Integer indexing drops the control axes; shift target axes accordingly
    free_axes = [q for q in range(n_qubits) if q not in controls]
    target_axes = [free_axes.index(t) for t in targets]
    k = len(targets)

    block = np.moveaxis(psi[index], target_axes, list(range(k)))
    shape = block.shape
    block = (U @ block.reshape(2 ** k, -1)).reshape(shape)
    psi[index] = np.moveaxis(block, list(range(k)), target_axes)
    return psi.reshape(-1)


def apply_gate(
    state: QuantumState,
    U: ArrayLike,
    targets: Sequence[int],
    controls: Sequence[int] = (),
) -> QuantumState:
    """
    Apply a (controlled) k-qubit unitary.

    Args:
        state: Input state; not modified.
        U: Unitary of dimension 2^k; targets[0] is its most significant bit.
        targets: k distinct target qubits.
        controls: Qubits that must all be |1> for U to act.

    Returns:
        The new state.

    Raises:
        ValidationError: If U is not unitary or the qubit lists are invalid.
    """
    M = as_matrix(U)
    n = state.n_qubits
    targets = _check_qubits(n, targets, "target")
    controls = _check_qubits(n, controls, "control")
    if not targets:
        raise ValidationError("a gate needs at least one target qubit")
    if set(targets) & set(controls):
        raise ValidationError(f"targets {targets} and controls {controls} overlap")
    if M.shape != (2 ** len(targets),) * 2:
        raise ValidationError(
            f"matrix of shape {M.shape} does not act on {len(targets)} target qubit(s)"
        )
    if not is_unitary(M):
        raise ValidationError("gate matrix is not unitary")

    amps = _apply_to_amplitudes(state.amplitudes, n, M, targets, controls)
    return QuantumState(n, amps)


def prob_of_outcome(state: QuantumState, qubit: int, outcome: int) -> float:
    """Probability that measuring `qubit` yields `outcome`."""
    _check_qubits(state.n_qubits, [qubit], "measured")
    if outcome not in (0, 1):
        raise ValidationError(f"outcome must be 0 or 1, got {outcome!r}")
    psi = state.amplitudes.reshape((2,) * state.n_qubits)
    branch = np.take(psi, outcome, axis=qubit)
    return float(np.sum(np.abs(branch) ** 2))


def postselect(state: QuantumState, qubit: int, outcome: int) -> Tuple[QuantumState, float]:
    """
    Project onto `qubit == outcome` and renormalize.

    Returns:
        (post-measurement state, probability of the outcome before projection).

    Raises:
        ImpossibleOutcomeError: If the outcome probability is below 1e-12.
    """
    probability = prob_of_outcome(state, qubit, outcome)
    if probability < POSTSELECT_TOL:
        raise ImpossibleOutcomeError(
            f"outcome {outcome} on qubit {qubit} has probability {probability:.3e}"
        )
    psi = state.tensor()
    index = [slice(None)] * state.n_qubits
    index[qubit] = 1 - outcome
    psi[tuple(index)] = 0.0
    amps = psi.reshape(-1) / np.sqrt(probability)
    logger.debug(f"Postselected qubit {qubit}={outcome} with probability {probability:.6g}")
    return QuantumState(state.n_qubits, amps), probability


def extract_subregister(
    state: QuantumState,
    fixed: Sequence[Tuple[int, int]],
    keep: Sequence[int],
) -> ComplexVector:
    """
    Factor the kept register out of a state whose other qubits are fixed.

    Args:
        state: Full register state.
        fixed: (qubit, bit) pairs that must hold with certainty.
        keep: Qubits to return, keep[0] most significant.

    Returns:
        Normalized amplitude vector over the kept qubits.

    Raises:
        ValidationError: If fixed and keep do not partition the qubits.
        NotProductStateError: If more than 1e-8 of the mass violates the fixed bits.
    """
    n = state.n_qubits
    fixed_qubits = _check_qubits(n, [q for q, _ in fixed], "fixed")
    keep = _check_qubits(n, keep, "kept")
    if set(fixed_qubits) & set(keep) or len(fixed_qubits) + len(keep) != n:
        raise ValidationError(
            f"fixed {fixed_qubits} and kept {keep} qubits must partition all {n} qubits"
        )

    psi = state.amplitudes.reshape((2,) * n)
    index = [slice(None)] * n
    for q, bit in fixed:
        if bit not in (0, 1):
            raise ValidationError(f"fixed bit must be 0 or 1, got {bit!r}")
        index[q] = bit
    sub = psi[tuple(index)]

    total = float(np.sum(np.abs(psi) ** 2))
    consistent = float(np.sum(np.abs(sub) ** 2))
    if total - consistent > PRODUCT_STATE_TOL * total or consistent == 0.0:
        raise NotProductStateError(
            f"{total - consistent:.3e} of the amplitude mass violates the fixed bits {list(fixed)}"
        )

    # Remaining axes are the kept qubits in ascending order
    ascending = sorted(keep)
    vec = np.transpose(sub, [ascending.index(q) for q in keep]).reshape(-1)
    return vec / np.sqrt(consistent)


def reduced_density_matrix(state: QuantumState, keep: Sequence[int]) -> ComplexMatrix:
    """Partial trace over every qubit not in `keep` (keep[0] most significant)."""
    n = state.n_qubits
    keep = _check_qubits(n, keep, "kept")
    traced = [q for q in range(n) if q not in keep]
    psi = np.transpose(state.amplitudes.reshape((2,) * n), keep + traced)
    psi = psi.reshape(2 ** len(keep), -1)
    return psi @ psi.conj().T


def register_histogram(state: QuantumState, qubits: Sequence[int]) -> Dict[int, float]:
    """Marginal weight of every integer value of a register (qubits[0] most significant)."""
    n = state.n_qubits
    qubits = _check_qubits(n, qubits, "register")
    traced = tuple(q for q in range(n) if q not in qubits)
    probs = np.abs(state.amplitudes.reshape((2,) * n)) ** 2
    marginal = np.sum(probs, axis=traced) if traced else probs
    ascending = sorted(qubits)
    marginal = np.transpose(marginal, [ascending.index(q) for q in qubits]).reshape(-1)
    return {value: float(weight) for value, weight in enumerate(marginal)}


def states_equal(a: ArrayLike, b: ArrayLike, tol: float = 1e-10) -> bool:
    """Check if two states are equal up to global phase."""
    x, y = as_vector(a), as_vector(b)
    if x.shape != y.shape:
        return False
    norm_x, norm_y = np.linalg.norm(x), np.linalg.norm(y)
    if norm_x < tol or norm_y < tol:
        return bool(norm_x < tol and norm_y < tol)
    return bool(np.isclose(abs(np.vdot(x, y)) / (norm_x * norm_y), 1.0, atol=tol))
