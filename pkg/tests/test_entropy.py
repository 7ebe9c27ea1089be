import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import ghz, h2, ket
from owdiscord.entropy import (
    binary_entropy,
    conditional_entropy,
    interaction_information,
    mutual_information,
    von_neumann_entropy,
)
from owdiscord.families import FamilySpec, build
from owdiscord.tensor import (
    DensityMatrix,
    LayoutError,
    SubsystemLayout,
    density,
    haar_random_pure,
    partial_trace,
    permute,
    tensor,
)

Q = SubsystemLayout.qubits


def test_entropy_examples():
    assert von_neumann_entropy(density(ket([1, 0], "A"))) == 0.0
    assert von_neumann_entropy(DensityMatrix(np.eye(2) / 2, Q("A"))) == pytest.approx(1.0, abs=1e-15)
    rho_a = partial_trace(density(ghz(np.pi / 3)), "A")
    assert von_neumann_entropy(rho_a) == pytest.approx(0.8112781244591328, abs=1e-12)


def test_binary_entropy():
    assert binary_entropy(0) == 0.0
    assert binary_entropy(1) == 0.0
    assert binary_entropy(0.5) == pytest.approx(1.0)
    assert binary_entropy(0.25) == pytest.approx(-0.25 * np.log2(0.25) - 0.75 * np.log2(0.75))
    with pytest.raises(ValueError):
        binary_entropy(1.1)


@pytest.mark.parametrize("theta, expected", [(0.0, 1.0), (np.pi / 2, -1.0), (np.pi / 4, 0.0)])
def test_conditional_entropy_bellmix(theta, expected):
    rho = density(build(FamilySpec("bellmix", theta)))
    assert conditional_entropy(rho, "B", "C") == pytest.approx(expected, abs=1e-12)


def test_conditional_entropy_label_errors(phi_plus):
    with pytest.raises(LayoutError):
        conditional_entropy(phi_plus, "A", "A")
    with pytest.raises(LayoutError):
        conditional_entropy(phi_plus, "A", "Z")


def test_mutual_information_examples(phi_plus, product_ab):
    assert mutual_information(product_ab, "A", "B") == pytest.approx(0.0, abs=1e-12)
    assert mutual_information(phi_plus, "A", "B") == pytest.approx(2.0, abs=1e-12)
    rho_ab = partial_trace(density(ghz(np.pi / 4)), {"A", "B"})
    assert mutual_information(rho_ab, "A", "B") == pytest.approx(1.0, abs=1e-12)


def test_interaction_information_examples():
    rho = partial_trace(density(ghz(np.pi / 4, "ABCD")), {"A", "B", "C"})
    assert interaction_information(rho) == pytest.approx(-1.0, abs=1e-12)
    prod = tensor(tensor(DensityMatrix(np.diag([0.3, 0.7]), Q("A")), DensityMatrix(np.eye(2) / 2, Q("B"))),
                  DensityMatrix(np.diag([0.9, 0.1]), Q("C")))
    assert interaction_information(prod) == pytest.approx(0.0, abs=1e-12)
    for theta in np.linspace(0, np.pi / 2, 7):
        rho = partial_trace(density(ghz(theta, "ABCD")), {"A", "B", "C"})
        assert interaction_information(rho) == pytest.approx(-h2(np.cos(theta) ** 2), abs=1e-9)


def test_interaction_information_party_count(phi_plus):
    with pytest.raises(LayoutError):
        interaction_information(phi_plus)


def _relabel(rho, order):
    return DensityMatrix(permute(rho, order), SubsystemLayout(tuple(order), tuple(rho.layout.dim(p) for p in order)))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_interaction_information_symmetric(seed):
    rho = partial_trace(density(haar_random_pure(Q("ABCD"), seed)), {"A", "B", "C"})
    ref = interaction_information(rho)
    for order in itertools.permutations("ABC"):
        assert interaction_information(_relabel(rho, order)) == pytest.approx(ref, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_tripartite_pure_entropy_relations(seed):
    rho = density(haar_random_pure(Q("ABC"), seed))
    s = lambda *p: von_neumann_entropy(partial_trace(rho, p))  # noqa: E731
    assert s("A", "B") == pytest.approx(s("C"), abs=1e-9)
    assert conditional_entropy(rho, "B", "C") == pytest.approx(s("A") - s("C"), abs=1e-9)
    i_ab = mutual_information(rho, "A", "B")
    assert -1e-9 <= i_ab <= 2 * min(s("A"), s("B")) + 1e-9
