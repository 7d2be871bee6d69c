"""
Dense complex linear algebra for the simulator.

Hermitian eigendecomposition by cyclic Jacobi rotations, the unitary
exponential exp(iAt), a pivoted Gaussian-elimination reference solver,
condition numbers, tensor products and state fidelity.
"""

import logging
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

logger = logging.getLogger(__name__)

ComplexMatrix = np.ndarray
ComplexVector = np.ndarray
ArrayLike = Union[np.ndarray, Sequence]

HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-10
NORMALIZED_TOL = 1e-10
PIVOT_TOL = 1e-14
ZERO_EIGENVALUE_TOL = 1e-12
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100


class ValidationError(ValueError):
    """Raised when an input violates a precondition."""
    pass


class SingularMatrixError(ValidationError):
    """Raised when a matrix has no inverse at working precision."""
    pass


class ConvergenceError(ArithmeticError):
    """Raised when the Jacobi iteration exhausts its sweep budget."""
    pass


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues in ascending order with eigenvectors as matching columns."""
    eigenvalues: np.ndarray
    eigenvectors: ComplexMatrix

    def __post_init__(self):
        self.eigenvalues.setflags(write=False)
        self.eigenvectors.setflags(write=False)


def as_matrix(A: ArrayLike) -> ComplexMatrix:
    """Copy an array-like into a complex128 2-D array."""
    M = np.array(A, dtype=np.complex128)
    if M.ndim != 2 or M.size == 0:
        raise ValidationError(f"expected a non-empty 2-D matrix, got shape {M.shape}")
    return M


def as_vector(v: ArrayLike) -> ComplexVector:
    """Copy an array-like into a complex128 1-D array."""
    x = np.array(v, dtype=np.complex128)
    if x.ndim != 1 or x.size == 0:
        raise ValidationError(f"expected a non-empty 1-D vector, got shape {x.shape}")
    return x


def is_hermitian(A: ArrayLike, tol: float = HERMITIAN_TOL) -> bool:
    M = np.asarray(A, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        return False
    return bool(np.max(np.abs(M - M.conj().T), initial=0.0) < tol)


def is_unitary(U: ArrayLike, tol: float = UNITARY_TOL) -> bool:
    M = np.asarray(U, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        return False
    defect = M.conj().T @ M - np.eye(M.shape[0])
    return bool(np.max(np.abs(defect)) < tol)


def is_normalized(v: ArrayLike, tol: float = NORMALIZED_TOL) -> bool:
    return abs(float(np.vdot(v, v).real) - 1.0) < tol


def normalize(v: ArrayLike) -> ComplexVector:
    """Return v / ||v||; raises on the zero vector."""
    x = as_vector(v)
    norm = np.linalg.norm(x)
    if norm == 0.0:
        raise ValidationError("cannot normalize the zero vector")
    return x / norm


def _require_hermitian(A: ArrayLike) -> ComplexMatrix:
    M = as_matrix(A)
    if M.shape[0] != M.shape[1]:
        raise ValidationError(f"matrix must be square, got shape {M.shape}")
    if not is_hermitian(M):
        defect = np.max(np.abs(M - M.conj().T))
        raise ValidationError(f"matrix is not Hermitian (max |A - A^H| = {defect:.3e})")
    return M


def _jacobi_rotation(M: ComplexMatrix, V: ComplexMatrix, p: int, q: int) -> None:
    """Zero M[p, q] in place with a unitary plane rotation; accumulate it into V."""
    apq = M[p, q]
    magnitude = abs(apq)
    phase = apq / magnitude
    app, aqq = M[p, p].real, M[q, q].real

    # After the phase shift the 2x2 block is real symmetric [[app, |apq|], [|apq|, aqq]].
    # |theta| <= pi/4 keeps the cyclic sweep convergent.
    if aqq == app:
        theta = np.pi / 4
    else:
        theta = 0.5 * np.arctan(2.0 * magnitude / (aqq - app))
    c, s = np.cos(theta), np.sin(theta)
    G = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=np.complex128)

    cols = [p, q]
    M[:, cols] = M[:, cols] @ G
    M[cols, :] = G.conj().T @ M[cols, :]
    V[:, cols] = V[:, cols] @ G

    M[p, q] = 0.0
    M[q, p] = 0.0
    M[p, p] = M[p, p].real
    M[q, q] = M[q, q].real


def hermitian_eig(A: ArrayLike) -> EigenSystem:
    """
    Diagonalise a Hermitian matrix with cyclic Jacobi sweeps.

    Args:
        A: Square Hermitian matrix.

    Returns:
        EigenSystem with ascending eigenvalues and orthonormal eigenvector columns.

    Raises:
        ValidationError: If A is not square or not Hermitian.
        ConvergenceError: If the off-diagonal mass does not vanish in time.
    """
    M = _require_hermitian(A)
    n = M.shape[0]
    V = np.eye(n, dtype=np.complex128)

    # Relative threshold so scaled inputs converge the same way
    threshold = JACOBI_TOL * max(1.0, float(np.linalg.norm(M)))

    for sweep in range(JACOBI_MAX_SWEEPS + 1):
        off = np.sqrt(np.sum(np.abs(np.triu(M, k=1)) ** 2))
        if off < threshold:
            logger.debug(f"Jacobi converged after {sweep} sweeps (off={off:.2e})")
            break
        if sweep == JACOBI_MAX_SWEEPS:
            raise ConvergenceError(
                f"Jacobi iteration did not converge in {JACOBI_MAX_SWEEPS} sweeps "
                f"(off-diagonal norm {off:.3e})"
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                if M[p, q] != 0.0:
                    _jacobi_rotation(M, V, p, q)

    eigenvalues = np.real(np.diag(M)).copy()
    order = np.argsort(eigenvalues, kind="stable")
    return EigenSystem(eigenvalues=eigenvalues[order], eigenvectors=V[:, order].copy())


def exp_iAt(A: ArrayLike, t: float) -> ComplexMatrix:
    """
    Unitary time evolution exp(iAt) through the spectral decomposition of A.

    Args:
        A: Hermitian matrix.
        t: Evolution time.

    Returns:
        V diag(exp(i lambda_j t)) V^H.
    """
    eig = hermitian_eig(A)
    V = eig.eigenvectors
    phases = np.exp(1j * eig.eigenvalues * t)
    return (V * phases) @ V.conj().T


def classical_solve(A: ArrayLike, b: ArrayLike) -> ComplexVector:
    """
    Solve A x = b by Gaussian elimination with partial pivoting.

    Args:
        A: Square nonsingular matrix.
        b: Right-hand side with len(b) == rows(A).

    Returns:
        The solution vector x.

    Raises:
        ValidationError: On shape mismatch.
        SingularMatrixError: If a pivot falls below 1e-14.
    """
    M = as_matrix(A)
    x = as_vector(b)
    n = M.shape[0]
    if M.shape[1] != n:
        raise ValidationError(f"matrix must be square, got shape {M.shape}")
    if x.shape[0] != n:
        raise ValidationError(f"rhs has dimension {x.shape[0]}, matrix has {n} rows")

    for k in range(n):
        pivot = k + int(np.argmax(np.abs(M[k:, k])))
        if abs(M[pivot, k]) < PIVOT_TOL:
            raise SingularMatrixError(f"matrix is singular (pivot {abs(M[pivot, k]):.3e} in column {k})")
        if pivot != k:
            M[[k, pivot]] = M[[pivot, k]]
            x[[k, pivot]] = x[[pivot, k]]
        factors = M[k + 1:, k] / M[k, k]
        M[k + 1:, k:] -= np.outer(factors, M[k, k:])
        x[k + 1:] -= factors * x[k]

    for k in range(n - 1, -1, -1):
        x[k] = (x[k] - M[k, k + 1:] @ x[k + 1:]) / M[k, k]
    return x


def condition_number(A: ArrayLike) -> float:
    """
    kappa = max|lambda| / min|lambda| for a Hermitian matrix.

    Raises:
        SingularMatrixError: If an eigenvalue is (numerically) zero.
    """
    magnitudes = np.abs(hermitian_eig(A).eigenvalues)
    smallest = float(np.min(magnitudes))
    if smallest < ZERO_EIGENVALUE_TOL:
        raise SingularMatrixError(f"matrix has a zero eigenvalue (|lambda| = {smallest:.3e})")
    return float(np.max(magnitudes)) / smallest


def kron(A: ArrayLike, B: ArrayLike) -> ComplexMatrix:
    """Tensor product with A's index most significant."""
    return np.kron(as_matrix(A), as_matrix(B))


def fidelity(v: ArrayLike, w: ArrayLike) -> float:
    """
    |<v|w>| for two normalized vectors.

    Raises:
        ValidationError: On dimension mismatch or unnormalized input.
    """
    x, y = as_vector(v), as_vector(w)
    if x.shape != y.shape:
        raise ValidationError(f"dimension mismatch: {x.shape[0]} vs {y.shape[0]}")
    for name, vec in (("first", x), ("second", y)):
        if not is_normalized(vec):
            raise ValidationError(f"{name} vector is not normalized (norm^2 = {np.vdot(vec, vec).real:.12f})")
    return min(1.0, float(abs(np.vdot(x, y))))
