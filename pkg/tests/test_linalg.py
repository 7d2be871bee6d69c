"""
Unit tests for src/linalg.py
"""

import math

import numpy as np
import pytest

from src.linalg import (
    ConvergenceError,
    SingularMatrixError,
    ValidationError,
    classical_solve,
    condition_number,
    exp_iAt,
    fidelity,
    hermitian_eig,
    is_hermitian,
    is_unitary,
    kron,
    normalize,
)

SEEDS = [0, 1, 2, 3, 4, 5, 6, 7]


@pytest.fixture
def example_matrix():
    """A = 1/2 [[3, 1], [1, 3]]."""
    return 0.5 * np.array([[3, 1], [1, 3]], dtype=np.complex128)


def random_hermitian(rng, dim):
    X = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (X + X.conj().T) / 2


def random_well_conditioned(rng, dim):
    """Hermitian matrix with eigenvalues in [1, 50]."""
    Q, _ = np.linalg.qr(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
    return (Q * rng.uniform(1.0, 50.0, size=dim)) @ Q.conj().T


class TestHermitianEig:
    """Test hermitian_eig function."""

    def test_example_eigenvalues(self, example_matrix):
        """Test that the example matrix has eigenvalues 1 and 2."""
        eig = hermitian_eig(example_matrix)
        np.testing.assert_allclose(eig.eigenvalues, [1.0, 2.0], atol=1e-12)

    def test_example_eigenvectors(self, example_matrix):
        """Test that the eigenvectors are (1,-1)/sqrt2 and (1,1)/sqrt2 up to phase."""
        eig = hermitian_eig(example_matrix)
        u1 = np.array([1, -1]) / math.sqrt(2)
        u2 = np.array([1, 1]) / math.sqrt(2)
        assert abs(np.vdot(u1, eig.eigenvectors[:, 0])) == pytest.approx(1.0, abs=1e-12)
        assert abs(np.vdot(u2, eig.eigenvectors[:, 1])) == pytest.approx(1.0, abs=1e-12)

    def test_identity(self):
        """Test the degenerate identity case."""
        eig = hermitian_eig(np.eye(2))
        np.testing.assert_allclose(eig.eigenvalues, [1.0, 1.0])
        assert is_unitary(eig.eigenvectors)

    def test_already_diagonal_is_sorted(self):
        """Test that a diagonal input comes back in ascending order."""
        eig = hermitian_eig(np.diag([3.0, -1.0, 2.0]))
        np.testing.assert_allclose(eig.eigenvalues, [-1.0, 2.0, 3.0])

    def test_result_is_read_only(self, example_matrix):
        """Test that the returned arrays cannot be modified."""
        eig = hermitian_eig(example_matrix)
        with pytest.raises(ValueError):
            eig.eigenvalues[0] = 5.0

    @pytest.mark.parametrize("seed", SEEDS)
    def test_random_reconstruction(self, seed):
        """Test sum lambda_j v_j v_j^H == A for random Hermitian A."""
        rng = np.random.default_rng(seed)
        dim = int(rng.integers(1, 17))
        A = random_hermitian(rng, dim)
        eig = hermitian_eig(A)
        V = eig.eigenvectors
        np.testing.assert_allclose((V * eig.eigenvalues) @ V.conj().T, A, atol=1e-9)
        assert is_unitary(V)
        assert np.all(np.diff(eig.eigenvalues) >= 0)

    @pytest.mark.parametrize("seed", SEEDS)
    def test_random_residuals(self, seed):
        """Test ||A v - lambda v|| < 1e-10 for every eigenpair."""
        rng = np.random.default_rng(seed)
        A = random_hermitian(rng, 8)
        eig = hermitian_eig(A)
        for lam, v in zip(eig.eigenvalues, eig.eigenvectors.T):
            assert np.linalg.norm(A @ v - lam * v) < 1e-10

    def test_non_hermitian_rejected(self):
        """Test that a non-Hermitian matrix raises."""
        with pytest.raises(ValidationError) as exc_info:
            hermitian_eig([[1, 2], [0, 1]])
        assert "not Hermitian" in str(exc_info.value)

    def test_non_square_rejected(self):
        """Test that a non-square matrix raises."""
        with pytest.raises(ValidationError):
            hermitian_eig(np.ones((2, 3)))

    def test_convergence_error_on_exhausted_budget(self, monkeypatch):
        """Test that running out of sweeps raises ConvergenceError."""
        monkeypatch.setattr("src.linalg.JACOBI_MAX_SWEEPS", 0)
        with pytest.raises(ConvergenceError):
            hermitian_eig([[1.0, 0.5], [0.5, 2.0]])


class TestExpIAt:
    """Test exp_iAt function."""

    def test_zero_time(self, example_matrix):
        """Test exp(iA*0) = I."""
        np.testing.assert_allclose(exp_iAt(example_matrix, 0.0), np.eye(2), atol=1e-12)

    def test_full_period_is_identity(self, example_matrix):
        """Test exp(iA*2pi) = I for integer eigenvalues."""
        np.testing.assert_allclose(exp_iAt(example_matrix, 2 * math.pi), np.eye(2), atol=1e-10)

    def test_half_period_is_pauli_x(self, example_matrix):
        """Test exp(iA*pi) = X."""
        np.testing.assert_allclose(exp_iAt(example_matrix, math.pi), [[0, 1], [1, 0]], atol=1e-10)

    @pytest.mark.parametrize("seed", SEEDS)
    def test_unitary(self, seed):
        """Test that the result is unitary."""
        rng = np.random.default_rng(seed)
        U = exp_iAt(random_hermitian(rng, 6), rng.uniform(-10, 10))
        assert is_unitary(U)

    @pytest.mark.parametrize("seed", SEEDS)
    def test_group_law(self, seed):
        """Test exp(iAs) exp(iAt) = exp(iA(s+t))."""
        rng = np.random.default_rng(seed)
        A = random_hermitian(rng, 4)
        s, t = rng.uniform(-10, 10, size=2)
        np.testing.assert_allclose(exp_iAt(A, s) @ exp_iAt(A, t), exp_iAt(A, s + t), atol=1e-9)

    @pytest.mark.parametrize("seed", SEEDS)
    def test_eigenvector_phase(self, seed):
        """Test exp(iAt) u_j = exp(i lambda_j t) u_j."""
        rng = np.random.default_rng(seed)
        A = random_hermitian(rng, 4)
        t = rng.uniform(-10, 10)
        eig = hermitian_eig(A)
        U = exp_iAt(A, t)
        for lam, u in zip(eig.eigenvalues, eig.eigenvectors.T):
            np.testing.assert_allclose(U @ u, np.exp(1j * lam * t) * u, atol=1e-9)

    def test_non_hermitian_rejected(self):
        """Test that a non-Hermitian matrix raises."""
        with pytest.raises(ValidationError):
            exp_iAt([[0, 1], [0, 0]], 1.0)


class TestClassicalSolve:
    """Test classical_solve function."""

    def test_example_first_basis(self, example_matrix):
        """Test A x = (1, 0) gives (3/4, -1/4)."""
        np.testing.assert_allclose(classical_solve(example_matrix, [1, 0]), [0.75, -0.25], atol=1e-12)

    def test_example_second_basis(self, example_matrix):
        """Test A x = (0, 1) gives (-1/4, 3/4)."""
        np.testing.assert_allclose(classical_solve(example_matrix, [0, 1]), [-0.25, 0.75], atol=1e-12)

    def test_identity(self):
        """Test that the identity returns b."""
        b = np.array([1 + 2j, -3j, 0.5])
        np.testing.assert_allclose(classical_solve(np.eye(3), b), b)

    def test_needs_pivoting(self):
        """Test a system with a zero leading entry."""
        np.testing.assert_allclose(classical_solve([[0, 1], [1, 0]], [2, 3]), [3, 2])

    def test_inputs_untouched(self, example_matrix):
        """Test that A and b are not modified."""
        A = example_matrix.copy()
        b = np.array([1.0, 0.0], dtype=np.complex128)
        classical_solve(A, b)
        np.testing.assert_array_equal(A, example_matrix)
        np.testing.assert_array_equal(b, [1.0, 0.0])

    @pytest.mark.parametrize("seed", SEEDS)
    def test_random_residual(self, seed):
        """Test ||A x - b|| / ||b|| < 1e-10 on well-conditioned systems."""
        rng = np.random.default_rng(seed)
        dim = int(rng.integers(1, 17))
        A = random_well_conditioned(rng, dim)
        b = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        x = classical_solve(A, b)
        assert np.linalg.norm(A @ x - b) / np.linalg.norm(b) < 1e-10

    def test_singular(self):
        """Test that a singular matrix raises SingularMatrixError."""
        with pytest.raises(SingularMatrixError):
            classical_solve([[1, 1], [1, 1]], [1, 0])

    def test_dimension_mismatch(self):
        """Test that a wrong-sized rhs raises."""
        with pytest.raises(ValidationError):
            classical_solve(np.eye(2), [1, 0, 0])


class TestConditionNumber:
    """Test condition_number function."""

    def test_example(self, example_matrix):
        """Test kappa = 2 for the example matrix."""
        assert condition_number(example_matrix) == pytest.approx(2.0, abs=1e-12)

    def test_identity(self):
        """Test kappa(I) = 1."""
        assert condition_number(np.eye(4)) == pytest.approx(1.0)

    def test_diagonal(self):
        """Test kappa of diag(1, 8)."""
        assert condition_number(np.diag([1.0, 8.0])) == pytest.approx(8.0)

    def test_negative_eigenvalues_use_magnitude(self):
        """Test that kappa uses |lambda|."""
        assert condition_number(np.diag([-4.0, 2.0])) == pytest.approx(2.0)

    @pytest.mark.parametrize("scale", [-3.0, 0.01, 7.5])
    def test_scale_invariant(self, example_matrix, scale):
        """Test kappa(cA) = kappa(A)."""
        assert condition_number(scale * example_matrix) == pytest.approx(2.0, abs=1e-9)

    def test_singular(self):
        """Test that a zero eigenvalue raises."""
        with pytest.raises(SingularMatrixError):
            condition_number(np.diag([0.0, 1.0]))


class TestKron:
    """Test kron function."""

    def test_identity(self):
        """Test I2 x I2 = I4."""
        np.testing.assert_array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))

    def test_first_factor_is_most_significant(self):
        """Test that X on qubit 0 maps basis index 0 to 2."""
        X = np.array([[0, 1], [1, 0]])
        e0 = np.zeros(4)
        e0[0] = 1
        out = kron(X, np.eye(2)) @ e0
        assert np.argmax(np.abs(out)) == 2

    def test_walsh_hadamard(self):
        """Test that H x H has all entries +-1/2."""
        H = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
        np.testing.assert_allclose(np.abs(kron(H, H)), 0.5 * np.ones((4, 4)))

    def test_mixed_product(self):
        """Test (A x B)(C x D) = AC x BD."""
        rng = np.random.default_rng(11)
        A, B, C, D = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(4))
        np.testing.assert_allclose(kron(A, B) @ kron(C, D), kron(A @ C, B @ D), atol=1e-12)


class TestFidelity:
    """Test fidelity function."""

    def test_self(self):
        """Test F(v, v) = 1."""
        v = normalize([1 + 1j, 2, -1j])
        assert fidelity(v, v) == pytest.approx(1.0)

    def test_orthogonal(self):
        """Test orthogonal states have fidelity 0."""
        assert fidelity([1, 0], [0, 1]) == 0.0

    def test_half_overlap(self):
        """Test F((1,0), (1,1)/sqrt2) = 1/sqrt2."""
        assert fidelity([1, 0], np.array([1, 1]) / math.sqrt(2)) == pytest.approx(1 / math.sqrt(2))

    def test_phase_invariant(self):
        """Test that a global phase does not change the fidelity."""
        v = normalize([1, 2j])
        assert fidelity(v, np.exp(0.7j) * v) == pytest.approx(1.0)

    def test_dimension_mismatch(self):
        """Test that different dimensions raise."""
        with pytest.raises(ValidationError):
            fidelity([1, 0], [1, 0, 0])

    def test_unnormalized_rejected(self):
        """Test that an unnormalized input raises."""
        with pytest.raises(ValidationError) as exc_info:
            fidelity([1, 1], [1, 0])
        assert "not normalized" in str(exc_info.value)


class TestPredicates:
    """Test is_hermitian and is_unitary helpers."""

    def test_is_hermitian(self):
        """Test Hermitian detection."""
        assert is_hermitian([[1, 1j], [-1j, 2]])
        assert not is_hermitian([[1, 1j], [1j, 2]])

    def test_is_unitary(self):
        """Test unitary detection."""
        assert is_unitary([[0, 1], [1, 0]])
        assert not is_unitary([[1, 1], [0, 1]])

    def test_normalize_zero(self):
        """Test that normalizing the zero vector raises."""
        with pytest.raises(ValidationError):
            normalize([0, 0])
