import numpy as np
import pytest

from hamalg import OperatorAlgebra, OperatorElement, PhaseSpaceAlgebra

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@pytest.fixture
def paulis():
    return (OperatorElement(PAULI_X), OperatorElement(PAULI_Y), OperatorElement(PAULI_Z))


@pytest.fixture
def qha2():
    """Quantum algebra with hbar = 2 (a = 1) on 2x2 matrices."""
    return OperatorAlgebra(2, hbar=2.0)


@pytest.fixture
def cha1():
    return PhaseSpaceAlgebra(1, max_random_degree=3)


@pytest.fixture
def cha2():
    return PhaseSpaceAlgebra(2, max_random_degree=3)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
