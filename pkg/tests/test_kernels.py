import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from owdiscord import kernels
from owdiscord.kernels import _python
from owdiscord.measurement import bipartite_tensor
from owdiscord.tensor import SubsystemLayout, haar_random_pure, reduce_pure


def _tensor(seed, dims=(2, 2, 2)):
    labels = tuple("ABC"[: len(dims)])
    psi = haar_random_pure(SubsystemLayout(labels, dims), seed)
    R, dx, dy, _ = bipartite_tensor(reduce_pure(psi, labels[:2]), labels[1])
    return R, dx, dy


def test_backend_name():
    assert kernels.BACKEND in ("numba", "numpy")


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.integers(0, 2))
def test_coisometry_rows_orthonormal(seed, d, extra):
    K = d + extra
    params = np.random.default_rng(seed).uniform(0, 2 * np.pi, K * K)
    for impl in (_python.coisometry, kernels.coisometry):
        W = impl(params, d, K)
        assert W.shape == (d, K)
        assert np.max(np.abs(W @ W.conj().T - np.eye(d))) <= 1e-12


def test_coisometry_zero_params_is_identity_block():
    W = _python.coisometry(np.zeros(9), 2, 3)
    np.testing.assert_array_equal(W, np.eye(2, 3))


ENT, CONC = _python.MODE_ENTROPY, _python.MODE_CONCURRENCE


@pytest.mark.parametrize(
    "dims, K, mode",
    [
        ((2, 2, 2), 2, ENT),
        ((2, 2, 2), 4, ENT),
        ((3, 2, 2), 3, ENT),
        ((2, 3, 2), 5, ENT),
        ((2, 2, 2), 4, CONC),
        ((2, 3, 2), 5, CONC),
    ],
)
def test_backends_agree_on_objective(dims, K, mode):
    R, dx, dy = _tensor(11, dims)
    rng = np.random.default_rng(1)
    for _ in range(20):
        x = rng.uniform(0, 2 * np.pi, K * K)
        a = _python.average_conditional(x, R, dx, dy, K, mode)
        b = _python.average_conditional_loops(x, R, dx, dy, K, mode)
        c = kernels.average_conditional(x, R, dx, dy, K, mode)
        assert a == pytest.approx(b, abs=1e-12)
        assert a == pytest.approx(c, abs=1e-12)


def test_backends_agree_on_multistart():
    R, dx, dy = _tensor(4)
    starts = np.random.default_rng(2).uniform(0, 2 * np.pi, (3, 4))
    args = (R, dx, dy, 2, _python.MODE_ENTROPY, -1.0, 0.4, 500, 1e-10, 3)
    v1, x1, _, c1 = _python.multistart(starts, *args)
    v2, x2, _, c2 = kernels.multistart(starts, *args)
    np.testing.assert_allclose(v1, v2, atol=1e-9)
    assert c1.all() and c2.all()


def test_nelder_mead_reaches_known_optimum():
    # rho = diag(c^2, 0, 0, s^2): the best average entropy over measurements on B is h(c^2)
    c2 = np.cos(0.4) ** 2
    R = np.diag([c2, 0, 0, 1 - c2]).astype(complex).reshape(2, 2, 2, 2)
    x, f, _, ok = kernels.nelder_mead(np.full(4, 0.3), R, 2, 2, 2, _python.MODE_ENTROPY, -1.0, 0.4, 500, 1e-12)
    h = -c2 * np.log2(c2) - (1 - c2) * np.log2(1 - c2)
    assert ok
    assert f == pytest.approx(h, abs=1e-8)


def test_env_flag_selects_numpy_backend():
    import os
    import subprocess
    import sys

    env = {**os.environ, "OWDISCORD_NUMBA": "0"}
    out = subprocess.run([sys.executable, "-m", "owdiscord", "--backend"], env=env,
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "kernel backend: numpy"
