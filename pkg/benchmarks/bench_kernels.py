"""Compare the numba and plain-numpy measurement kernels.

    python benchmarks/bench_kernels.py [--evals N] [--restarts R]

Both backends run the same source (``owdiscord.kernels._python``); the numba
one is its compiled clone. Prints per-call timings and the largest
disagreement between the two.
"""

import argparse
import time

import numpy as np

from owdiscord.kernels import _python
from owdiscord.measurement import bipartite_tensor
from owdiscord.tensor import SubsystemLayout, haar_random_pure, reduce_pure

try:
    from owdiscord.kernels import _numba
except ImportError:  # pragma: no cover
    _numba = None


def best_of(fn, repeat=3):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--evals", type=int, default=2000)
    ap.add_argument("--restarts", type=int, default=8)
    args = ap.parse_args()
    if _numba is None:
        raise SystemExit("numba is not installed")

    psi = haar_random_pure(SubsystemLayout.qubits("ABC"), 0)
    R, dx, dy, _ = bipartite_tensor(reduce_pure(psi, ("A", "B")), "B")
    K, mode = 4, _python.MODE_ENTROPY
    xs = np.random.default_rng(1).uniform(0, 2 * np.pi, (args.evals, K * K))
    starts = np.random.default_rng(2).uniform(0, 2 * np.pi, (args.restarts, K * K))
    ms_args = (R, dx, dy, K, mode, -1.0, 0.4, 500, 1e-10, 3)

    t0 = time.perf_counter()
    _numba.average_conditional(xs[0], R, dx, dy, K, mode)
    _numba.multistart(starts[:1], *ms_args)
    print(f"numba first call (compile or cache load): {time.perf_counter() - t0:.2f} s")

    rows = []
    for name, mod in (("numpy", _python), ("numba", _numba)):
        f = mod.average_conditional
        t_eval = best_of(lambda: [f(x, R, dx, dy, K, mode) for x in xs]) / args.evals
        t_ms = best_of(lambda: mod.multistart(starts, *ms_args), repeat=1)
        vals = np.array([f(x, R, dx, dy, K, mode) for x in xs])
        best = mod.multistart(starts, *ms_args)[0]
        rows.append((name, t_eval, t_ms, vals, best))

    for name, t_eval, t_ms, _, _ in rows:
        print(f"{name:6s} objective {t_eval * 1e6:9.2f} us/eval   multistart({args.restarts}) {t_ms:8.3f} s")
    (_, e0, m0, v0, b0), (_, e1, m1, v1, b1) = rows
    print(f"speedup: objective x{e0 / e1:.0f}, multistart x{m0 / m1:.0f}")
    print(f"max |numpy - numba|: objective {np.max(np.abs(v0 - v1)):.1e}, optima {np.max(np.abs(b0 - b1)):.1e}")


if __name__ == "__main__":
    main()
