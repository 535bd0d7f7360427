import math

import numpy as np
import pytest

from twinprep import states


@pytest.fixture
def bell_psi_minus():
    amps = np.zeros(4, dtype=complex)
    amps[1] = 1 / math.sqrt(2)
    amps[2] = -1 / math.sqrt(2)
    return states.StateVector(("a", "B"), amps)


def random_state_vector(rng, labels):
    v = rng.normal(size=2 ** len(labels)) + 1j * rng.normal(size=2 ** len(labels))
    return states.StateVector(tuple(labels), v / np.linalg.norm(v))


def random_unitary(rng, dim=2):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density(rng, n_qubits=2, rank=4):
    dim = 2**n_qubits
    z = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = z @ z.conj().T
    return m / np.trace(m).real


def binary_entropy_bits(p):
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)
