from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import SQ2, ghz, h2
from owdiscord.entropy import von_neumann_entropy
from owdiscord.measurement import (
    OptConfig,
    Povm,
    localizable_entropy_gain,
    measure_side,
    optimize_measurement,
    povm_from_params,
)
from owdiscord.tensor import LayoutError, SubsystemLayout, density, haar_random_pure, partial_trace, reduce_pure

PLUS_MINUS = Povm(np.array([[1, 1], [1, -1]]) / SQ2)


def ghz_ab(theta):
    return partial_trace(density(ghz(theta)), {"A", "B"})


def random_ab(seed, dims=(2, 2, 2)):
    psi = haar_random_pure(SubsystemLayout(("A", "B", "C"), dims), seed)
    return reduce_pure(psi, ("A", "B"))


def test_povm_completeness_checked():
    with pytest.raises(ValueError):
        Povm(np.array([[1, 0], [0, 0.5]]))


def test_povm_elements_sum_to_identity():
    trine = np.array([[1, -0.5, -0.5], [0, np.sqrt(3) / 2, -np.sqrt(3) / 2]]) * np.sqrt(2 / 3)
    p = Povm(trine)
    assert p.outcomes == 3 and p.dim == 2
    np.testing.assert_allclose(sum(p.elements), np.eye(2), atol=1e-12)


def test_povm_from_zero_params_is_computational():
    np.testing.assert_array_equal(povm_from_params(np.zeros(4), 2, 2).vectors, np.eye(2))


def test_povm_from_quarter_turn_is_plus_minus():
    p = povm_from_params([np.pi / 4, 0, 0, 0], 2, 2)
    overlaps = np.abs(p.vectors.conj().T @ PLUS_MINUS.vectors) ** 2
    np.testing.assert_allclose(np.sort(overlaps.max(axis=1)), [1, 1], atol=1e-12)


def test_povm_from_params_errors():
    with pytest.raises(ValueError):
        povm_from_params(np.zeros(1), 2, 1)
    with pytest.raises(ValueError):
        povm_from_params(np.zeros(5), 2, 2)


def test_measure_ghz_computational():
    out = measure_side(ghz_ab(np.pi / 4), Povm.computational(2), "B")
    assert [o.probability for o in out] == pytest.approx([0.5, 0.5])
    np.testing.assert_allclose(out[0].state.entries, np.diag([1, 0]), atol=1e-15)
    np.testing.assert_allclose(out[1].state.entries, np.diag([0, 1]), atol=1e-15)


def test_measure_ghz_plus_minus_leaves_mixture():
    out = measure_side(ghz_ab(np.pi / 4), PLUS_MINUS, "B")
    for o in out:
        assert o.probability == pytest.approx(0.5)
        np.testing.assert_allclose(o.state.entries, np.eye(2) / 2, atol=1e-15)


def test_measure_marks_zero_probability():
    out = measure_side(ghz_ab(0.0), Povm.computational(2), "B")
    assert out[1].degenerate and out[1].state is None
    assert not out[0].degenerate


def test_measure_dimension_mismatch():
    with pytest.raises(LayoutError):
        measure_side(ghz_ab(0.3), Povm.computational(3), "B")
    with pytest.raises(LayoutError):
        measure_side(ghz_ab(0.3), Povm.computational(2), "C")


@pytest.mark.parametrize("theta", [0.2, np.pi / 4, 1.1])
def test_gain_on_ghz_marginal(theta):
    rho = ghz_ab(theta)
    assert localizable_entropy_gain(rho, Povm.computational(2), "B") == pytest.approx(h2(np.cos(theta) ** 2), abs=1e-12)
    assert localizable_entropy_gain(rho, PLUS_MINUS, "B") == pytest.approx(0.0, abs=1e-12)


def test_gain_on_bell_state_is_one_for_any_measurement(phi_plus):
    for seed in range(5):
        povm = povm_from_params(np.random.default_rng(seed).uniform(0, 6, 9), 2, 3)
        assert localizable_entropy_gain(phi_plus, povm, "B") == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("theta", [0.3, np.pi / 4, 1.0])
def test_optimizer_ghz_marginal(theta):
    rho = ghz_ab(theta)
    j = optimize_measurement(rho, "B", "maximize")
    e = optimize_measurement(rho, "B", "minimize")
    assert j.value == pytest.approx(h2(np.cos(theta) ** 2), abs=1e-8)
    assert e.value == pytest.approx(0.0, abs=1e-8)
    assert j.outcomes == 2 and j.converged >= 1


def test_optimizer_product_state(product_ab):
    assert optimize_measurement(product_ab, "B", "maximize").value == pytest.approx(0.0, abs=1e-9)
    assert optimize_measurement(product_ab, "B", "minimize").value == pytest.approx(0.0, abs=1e-9)


def test_optimizer_sense_checked(phi_plus):
    with pytest.raises(ValueError):
        optimize_measurement(phi_plus, "B", "max")


def test_opt_config_validation():
    with pytest.raises(ValueError):
        OptConfig(restarts=0)
    with pytest.raises(ValueError):
        OptConfig(tol=0.0)
    with pytest.raises(ValueError):
        OptConfig(outcomes=0)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_gain_bounds(seed):
    rho = random_ab(seed)
    s_a = von_neumann_entropy(partial_trace(rho, "A"))
    povm = povm_from_params(np.random.default_rng(seed).uniform(0, 6.3, 16), 2, 4)
    g = localizable_entropy_gain(rho, povm, "B")
    assert -1e-9 <= g <= s_a + 1e-9


@pytest.mark.parametrize("seed", range(4))
def test_optimum_beats_random_probes(seed):
    rho = random_ab(seed)
    cfg = OptConfig(restarts=8, outcomes=3)
    j = optimize_measurement(rho, "B", "maximize", cfg).value
    e = optimize_measurement(rho, "B", "minimize", cfg).value
    rng = np.random.default_rng(100 + seed)
    for _ in range(100):
        g = localizable_entropy_gain(rho, povm_from_params(rng.uniform(0, 2 * np.pi, 9), 2, 3), "B")
        assert e - 1e-9 <= g <= j + 1e-9


@pytest.mark.parametrize("seed", range(3))
def test_more_restarts_never_worse(seed):
    rho = random_ab(seed, (2, 3, 2))
    for sense, better in (("maximize", np.greater_equal), ("minimize", np.less_equal)):
        prev = None
        for r in (1, 2, 4, 8):
            v = optimize_measurement(rho, "B", sense, OptConfig(restarts=r, seed=seed)).value
            if prev is not None:
                assert better(v, prev)
            prev = v


def test_reported_params_reproduce_value():
    rho = random_ab(21)
    res = optimize_measurement(rho, "B", "maximize", OptConfig(restarts=4, outcomes=3))
    povm = povm_from_params(res.params, 2, 3)
    assert localizable_entropy_gain(rho, povm, "B") == pytest.approx(res.value, abs=1e-10)
    assert res.restart_values.shape == (4,)
    assert res.restart_values[res.best_restart] == res.value


def test_deterministic_across_threads():
    states = [random_ab(s) for s in range(6)]
    cfg = OptConfig(restarts=6, seed=3)

    def run(rho):
        return optimize_measurement(rho, "B", "minimize", cfg).value

    serial = [run(r) for r in states]
    with ThreadPoolExecutor(3) as pool:
        threaded = list(pool.map(run, states))
    assert np.array(serial).tobytes() == np.array(threaded).tobytes()
