import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from src.circuits import circuit_to_unitary
from src.example2x2 import ANCILLA, N_QUBITS, build_fig2_circuit, oracle_sweep
from src.linalg import fidelity, normalize

SPOT_VALUES = [2.0, 4.0, 6.0]

# Exact solution of A x = (1, 0) up to scale
REFERENCE = normalize([3.0, -1.0])


def dense_point(r):
    """Fidelity and probability from the full 16x16 circuit unitary."""
    U = circuit_to_unitary(build_fig2_circuit(r))
    out = U[:, 0]
    # x1 = 1 and clock = |00>: indices 0b1000 and 0b1001
    success = 1 << (N_QUBITS - 1 - ANCILLA)
    probability = float(np.sum(np.abs(out[success:]) ** 2))
    x_prime = normalize(out[[success, success + 1]])
    return fidelity(x_prime, REFERENCE), probability


def crosscheck():
    """Print dense-unitary values next to the closed form."""
    print(f"{'r':>4}  {'dense F':>12}  {'oracle F':>12}  {'dense P':>13}  {'oracle P':>13}")
    for record in oracle_sweep(SPOT_VALUES):
        fid, prob = dense_point(record.r)
        print(f"{record.r:>4g}  {fid:12.9f}  {record.fidelity:12.9f}  {prob:13.9g}  {record.probability:13.9g}")


if __name__ == "__main__":
    crosscheck()
