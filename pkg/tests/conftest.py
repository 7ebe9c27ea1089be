import numpy as np
import pytest

from owdiscord.tensor import DensityMatrix, StateVector, SubsystemLayout, density, tensor

SQ2 = np.sqrt(2.0)


def ket(amps, labels):
    return StateVector.normalized(np.asarray(amps, dtype=complex), SubsystemLayout.qubits(labels))


def ghz(theta, labels="ABC"):
    a = np.zeros(2 ** len(labels), dtype=complex)
    a[0], a[-1] = np.cos(theta), np.sin(theta)
    return StateVector(a, SubsystemLayout.qubits(labels))


def h2(p):
    """Binary entropy, written out independently of the package."""
    if p <= 0 or p >= 1:
        return 0.0
    return float(-p * np.log2(p) - (1 - p) * np.log2(1 - p))


@pytest.fixture
def phi_plus():
    return density(ket([1, 0, 0, 1], "AB"))


@pytest.fixture
def product_ab():
    ra = DensityMatrix(np.array([[0.7, 0.2 - 0.1j], [0.2 + 0.1j, 0.3]]), SubsystemLayout.qubits("A"))
    rb = DensityMatrix(np.array([[0.4, 0.1j], [-0.1j, 0.6]]), SubsystemLayout.qubits("B"))
    return tensor(ra, rb)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(mod.RESULTS, key=str):
            terminalreporter.write_line(mod.RESULTS[n])
