"""
Gate catalog, circuit container, QFT builders, circuit inversion and the
dense full-unitary oracle.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from .linalg import ArrayLike, ComplexMatrix, ValidationError, as_matrix, exp_iAt, is_unitary
from .statevector import QuantumState, apply_gate

logger = logging.getLogger(__name__)

MAX_ORACLE_QUBITS = 10

_SQRT2_INV = 1 / math.sqrt(2)
_FIXED_GATES = {
    "H": np.array([[1, 1], [1, -1]], dtype=np.complex128) * _SQRT2_INV,
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
    "S": np.array([[1, 0], [0, 1j]], dtype=np.complex128),
    "Sdag": np.array([[1, 0], [0, -1j]], dtype=np.complex128),
    "SWAP": np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=np.complex128
    ),
}
_PARAM_GATES = {
    "Ry": lambda t: np.array(
        [[math.cos(t / 2), -math.sin(t / 2)], [math.sin(t / 2), math.cos(t / 2)]],
        dtype=np.complex128,
    ),
    "P": lambda t: np.array([[1, 0], [0, np.exp(1j * t)]], dtype=np.complex128),
}
_INVERSE_NAMES = {"S": "Sdag", "Sdag": "S", "H": "H", "X": "X", "Y": "Y", "Z": "Z", "SWAP": "SWAP"}
EXP_GATE_NAME = "expiAt"
DAGGER_SUFFIX = "^dag"


class ResourceError(ValidationError):
    """Raised when an operation would exceed its size cap."""
    pass


@dataclass(frozen=True)
class Gate:
    """A named unitary on k qubits; `param` is the angle (or time) it was built from."""
    name: str
    matrix: ComplexMatrix = field(repr=False)
    param: Optional[float] = None
    param_symbol: str = "θ"

    def __post_init__(self):
        M = as_matrix(self.matrix)
        dim = M.shape[0]
        if M.shape[1] != dim or dim < 2 or dim & (dim - 1):
            raise ValidationError(f"gate {self.name!r} must be 2^k x 2^k, got {M.shape}")
        if not is_unitary(M):
            raise ValidationError(f"gate {self.name!r} is not unitary")
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)

    @property
    def arity(self) -> int:
        return self.matrix.shape[0].bit_length() - 1

    def label(self) -> str:
        if self.param is None:
            return self.name
        return f"{self.name}({self.param_symbol}={self.param:.9g})"

    def dagger(self) -> "Gate":
        matrix = self.matrix.conj().T
        if self.param is not None:
            return Gate(self.name, matrix, -self.param, self.param_symbol)
        if self.name in _INVERSE_NAMES:
            return Gate(_INVERSE_NAMES[self.name], matrix)
        if self.name.endswith(DAGGER_SUFFIX):
            return Gate(self.name[: -len(DAGGER_SUFFIX)], matrix)
        return Gate(self.name + DAGGER_SUFFIX, matrix)


@dataclass(frozen=True)
class CircuitOp:
    """One gate placed on target qubits, optionally controlled."""
    gate: Gate
    targets: Tuple[int, ...]
    controls: Tuple[int, ...] = ()

    def __post_init__(self):
        targets = tuple(int(q) for q in self.targets)
        controls = tuple(int(q) for q in self.controls)
        if len(targets) != self.gate.arity:
            raise ValidationError(
                f"gate {self.gate.name!r} acts on {self.gate.arity} qubit(s), got targets {list(targets)}"
            )
        qubits = targets + controls
        if len(set(qubits)) != len(qubits):
            raise ValidationError(f"targets {list(targets)} and controls {list(controls)} must be distinct")
        if min(qubits) < 0:
            raise ValidationError(f"negative qubit index in {list(qubits)}")
        object.__setattr__(self, "targets", targets)
        object.__setattr__(self, "controls", controls)

    def describe(self) -> str:
        targets = ", ".join(str(q) for q in self.targets)
        controls = ", ".join(str(q) for q in self.controls)
        return f"{self.gate.label()} targets=[{targets}] controls=[{controls}]"

    def dagger(self) -> "CircuitOp":
        return CircuitOp(self.gate.dagger(), self.targets, self.controls)


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list on n qubits."""
    n_qubits: int
    ops: Tuple[CircuitOp, ...] = ()

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValidationError(f"a circuit needs at least one qubit, got {self.n_qubits}")
        ops = tuple(self.ops)
        for op in ops:
            if max(op.targets + op.controls) >= self.n_qubits:
                raise ValidationError(f"op '{op.describe()}' does not fit in {self.n_qubits} qubits")
        object.__setattr__(self, "ops", ops)

    def __len__(self) -> int:
        return len(self.ops)

    def __add__(self, other: "Circuit") -> "Circuit":
        return compose(self, other)

    def add(self, gate: Gate, targets: Sequence[int], controls: Sequence[int] = ()) -> "Circuit":
        """Return a copy with one more op appended."""
        return Circuit(self.n_qubits, self.ops + (CircuitOp(gate, tuple(targets), tuple(controls)),))


def make_standard_gate(name: str, theta: Optional[float] = None) -> Gate:
    """
    Build a catalog gate.

    Args:
        name: One of H, X, Y, Z, S, Sdag, SWAP (fixed) or Ry, P (parameterised).
        theta: Angle in radians for Ry and P.

    Returns:
        Gate instance.

    Raises:
        ValidationError: If the name is unknown or theta is missing.
    """
    if name in _FIXED_GATES:
        return Gate(name, _FIXED_GATES[name].copy())
    if name in _PARAM_GATES:
        if theta is None:
            raise ValidationError(f"gate {name!r} needs an angle")
        return Gate(name, _PARAM_GATES[name](float(theta)), float(theta))
    valid = sorted(list(_FIXED_GATES) + list(_PARAM_GATES))
    raise ValidationError(f"unknown gate {name!r}, valid options: {valid}")


def make_exp_gate(A: ArrayLike, t: float) -> Gate:
    """exp(iAt) as a gate, labelled with its evolution time."""
    return Gate(EXP_GATE_NAME, exp_iAt(A, t), float(t), param_symbol="t")


def make_unitary_gate(name: str, U: ArrayLike) -> Gate:
    """Wrap an arbitrary unitary as a named gate; Gate checks unitarity."""
    return Gate(name, as_matrix(U))


def compose(*circuits: Circuit) -> Circuit:
    """Concatenate circuits of equal width."""
    if not circuits:
        raise ValidationError("compose needs at least one circuit")
    n = circuits[0].n_qubits
    for c in circuits[1:]:
        if c.n_qubits != n:
            raise ValidationError(f"cannot compose circuits on {n} and {c.n_qubits} qubits")
    return Circuit(n, tuple(op for c in circuits for op in c.ops))


def _validate_register(qubits: Sequence[int]) -> Tuple[int, ...]:
    qubits = tuple(int(q) for q in qubits)
    if not qubits:
        raise ValidationError("register needs at least one qubit")
    if len(set(qubits)) != len(qubits):
        raise ValidationError(f"duplicate qubit indices in {list(qubits)}")
    if min(qubits) < 0:
        raise ValidationError(f"negative qubit index in {list(qubits)}")
    return qubits


def inverse_qft_circuit(qubits: Sequence[int], n_qubits: Optional[int] = None) -> Circuit:
    """
    Inverse quantum Fourier transform on a register (qubits[0] most significant).

    Maps sum_k exp(2*pi*i*j*k/2^n)|k>/sqrt(2^n) to |j>. For two qubits the ops
    are SWAP, H(q1), controlled-Sdag (control q0, target q1), H(q0).

    Raises:
        ValidationError: On an empty register or duplicate indices.
    """
    qubits = _validate_register(qubits)
    n = len(qubits)
    circuit = Circuit(n_qubits if n_qubits is not None else max(qubits) + 1)

    for i in range(n // 2):
        circuit = circuit.add(make_standard_gate("SWAP"), [qubits[i], qubits[n - 1 - i]])

    for i in reversed(range(n)):
        for j in reversed(range(i + 1, n)):
            span = j - i + 1
            if span == 2:
                gate = make_standard_gate("Sdag")
            else:
                gate = make_standard_gate("P", -2 * math.pi / 2 ** span)
            circuit = circuit.add(gate, [qubits[j]], [qubits[i]])
        circuit = circuit.add(make_standard_gate("H"), [qubits[i]])

    return circuit


def qft_circuit(qubits: Sequence[int], n_qubits: Optional[int] = None) -> Circuit:
    """Forward QFT, the inverse of inverse_qft_circuit."""
    return dagger(inverse_qft_circuit(qubits, n_qubits))


def dagger(c: Circuit) -> Circuit:
    """Reverse the ops and conjugate-transpose each gate."""
    return Circuit(c.n_qubits, tuple(op.dagger() for op in reversed(c.ops)))


def _embed_op(op: CircuitOp, n_qubits: int) -> ComplexMatrix:
    """Full-register matrix of one op, built column by column from basis indices."""
    dim = 2 ** n_qubits
    full = np.zeros((dim, dim), dtype=np.complex128)
    U = op.gate.matrix
    k = len(op.targets)
    shifts = [n_qubits - 1 - q for q in op.targets]
    control_mask = sum(1 << (n_qubits - 1 - q) for q in op.controls)
    target_mask = sum(1 << s for s in shifts)

    for col in range(dim):
        if col & control_mask != control_mask:
            full[col, col] = 1.0
            continue
        local_in = 0
        for s in shifts:
            local_in = (local_in << 1) | ((col >> s) & 1)
        rest = col & ~target_mask
        for local_out in range(2 ** k):
            row = rest
            for pos, s in enumerate(shifts):
                if (local_out >> (k - 1 - pos)) & 1:
                    row |= 1 << s
            full[row, col] = U[local_out, local_in]
    return full


def circuit_to_unitary(c: Circuit, max_qubits: int = MAX_ORACLE_QUBITS) -> ComplexMatrix:
    """
    Dense unitary of a whole circuit (later ops multiply on the left).

    Raises:
        ResourceError: If the circuit is wider than max_qubits.
    """
    if c.n_qubits > max_qubits:
        raise ResourceError(
            f"refusing to assemble a {2 ** c.n_qubits}-dimensional unitary "
            f"({c.n_qubits} qubits > cap of {max_qubits})"
        )
    total = np.eye(2 ** c.n_qubits, dtype=np.complex128)
    for op in c.ops:
        total = _embed_op(op, c.n_qubits) @ total
    return total


def run_circuit(c: Circuit, state: QuantumState) -> QuantumState:
    """Apply every op of the circuit in order."""
    if c.n_qubits != state.n_qubits:
        raise ValidationError(
            f"circuit acts on {c.n_qubits} qubits, state has {state.n_qubits}"
        )
    for op in c.ops:
        logger.debug(f"apply {op.describe()}")
        state = apply_gate(state, op.gate.matrix, op.targets, op.controls)
    return state


def dump_circuit(c: Circuit) -> str:
    """Text dump, one op per line, trailing newline."""
    return "".join(op.describe() + "\n" for op in c.ops)
