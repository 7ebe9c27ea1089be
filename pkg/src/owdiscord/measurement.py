"""Rank-1 POVMs on one party and the multi-start optimizer over them."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import kernels
from .entropy import von_neumann_entropy
from .tensor import DensityMatrix, LayoutError, SubsystemLayout, derive_rng, partial_trace, permute

DEGENERATE_P = 1e-12


@dataclass(frozen=True, eq=False)
class Povm:
    """Rank-1 POVM with elements |m_k><m_k|; ``vectors[:, k]`` is m_k."""

    vectors: np.ndarray

    def __post_init__(self):
        v = np.array(self.vectors, dtype=np.complex128, copy=True)
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)
        dev = np.max(np.abs(v @ v.conj().T - np.eye(v.shape[0])))
        if dev > 1e-9:
            raise ValueError(f"POVM elements do not sum to identity (deviation {dev:.3g})")

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    @property
    def outcomes(self) -> int:
        return self.vectors.shape[1]

    @property
    def elements(self) -> list[np.ndarray]:
        return [np.outer(m, m.conj()) for m in self.vectors.T]

    @classmethod
    def computational(cls, d: int) -> "Povm":
        return cls(np.eye(d))


def povm_from_params(params, d: int, K: int) -> Povm:
    """POVM from the first ``d`` rows of a K x K unitary built from K*K angles.

    The unitary is ``diag(exp(i*a)) @ G_01 @ G_02 @ ... @ G_{K-2,K-1}``, each
    ``G_ij`` a complex Givens rotation ``[[c, -e^{i phi} s], [e^{-i phi} s, c]]``
    on coordinates i, j. ``params`` holds the K(K-1)/2 rotation angles, then the
    K(K-1)/2 phases ``phi``, then the K diagonal phases ``a``. A rotation angle
    ``t`` on a qubit turns the measurement axis by ``2t`` on the Bloch sphere.
    """
    if K < d:
        raise ValueError(f"need at least d={d} outcomes, got K={K}")
    params = np.asarray(params, dtype=float)
    if params.shape != (K * K,):
        raise ValueError(f"expected {K * K} parameters, got shape {params.shape}")
    return Povm(kernels.coisometry(params, d, K))


@dataclass(frozen=True)
class MeasurementOutcome:
    probability: float
    state: DensityMatrix | None

    @property
    def degenerate(self) -> bool:
        return self.probability <= DEGENERATE_P


def bipartite_tensor(rho: DensityMatrix, side: str) -> tuple[np.ndarray, int, int, str]:
    """``rho`` as an (dX, dY, dX, dY) array with Y the measured party."""
    if len(rho.labels) != 2:
        raise LayoutError(f"expected a bipartite state, got parties {rho.labels}")
    rho.layout.index(side)
    other = rho.labels[0] if rho.labels[1] == side else rho.labels[1]
    dx, dy = rho.layout.dim(other), rho.layout.dim(side)
    m = permute(rho, (other, side))
    return np.ascontiguousarray(m.reshape(dx, dy, dx, dy)), dx, dy, other


def measure_side(rho: DensityMatrix, povm: Povm, side: str) -> list[MeasurementOutcome]:
    R, dx, dy, other = bipartite_tensor(rho, side)
    if povm.dim != dy:
        raise LayoutError(f"POVM acts on dimension {povm.dim}, party {side!r} has {dy}")
    sig = np.einsum("bk,abcd,dk->kac", povm.vectors.conj(), R, povm.vectors)
    layout = SubsystemLayout((other,), (dx,))
    out = []
    for s in sig:
        p = float(np.trace(s).real)
        if p <= DEGENERATE_P:
            out.append(MeasurementOutcome(max(p, 0.0), None))
        else:
            s = s / p
            out.append(MeasurementOutcome(p, DensityMatrix(0.5 * (s + s.conj().T), layout)))
    return out


def localizable_entropy_gain(rho: DensityMatrix, povm: Povm, side: str) -> float:
    """S(rho_X) - sum_k p_k S(rho_k^X) for the POVM applied to ``side``."""
    outcomes = measure_side(rho, povm, side)
    other = rho.labels[0] if rho.labels[1] == side else rho.labels[1]
    s_x = von_neumann_entropy(partial_trace(rho, other))
    avg = sum(o.probability * von_neumann_entropy(o.state) for o in outcomes if not o.degenerate)
    return s_x - avg


@dataclass(frozen=True)
class OptConfig:
    """Multi-start settings.

    ``outcomes`` fixes the POVM outcome count K for every optimization; None
    means the per-quantity default (local dimension for measurements on a
    physical party, rank squared for purifier measurements).
    """

    restarts: int = 32
    seed: int = 0
    max_iter: int = 500
    tol: float = 1e-10
    outcomes: int | None = None
    step: float = 0.4
    polish: int = 3

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.outcomes is not None and self.outcomes < 1:
            raise ValueError("outcomes must be >= 1")


@dataclass(frozen=True, eq=False)
class OptResult:
    value: float
    params: np.ndarray
    outcomes: int
    converged: int
    gap: float
    restart_values: np.ndarray = field(repr=False)
    best_restart: int = 0
    iterations: int = 0


@lru_cache(maxsize=256)
def _start_points(seed: int, restarts: int, n: int) -> np.ndarray:
    starts = np.zeros((restarts, n))
    for r in range(1, restarts):
        starts[r] = derive_rng(seed, r).uniform(0.0, 2.0 * np.pi, n)
    starts.setflags(write=False)
    return starts


def start_points(cfg: OptConfig, n: int) -> np.ndarray:
    """Restart 0 is the all-zero point; restart r draws from stream (r,) of the seed.

    Restart r never depends on the total restart count, so adding restarts can
    only improve the optimum.
    """
    return _start_points(int(cfg.seed), int(cfg.restarts), int(n))


def optimize_average(R: np.ndarray, dx: int, dy: int, K: int, maximize: bool, cfg: OptConfig,
                     mode: int = kernels.MODE_ENTROPY) -> OptResult:
    """Optimize sum_k p_k f(rho_k^X) over K-outcome rank-1 POVMs on Y."""
    if K < dy:
        raise ValueError(f"need at least {dy} outcomes on a {dy}-dimensional party, got {K}")
    n = K * K
    sign = -1.0 if maximize else 1.0
    R = np.ascontiguousarray(R, dtype=np.complex128)
    values, xs, iters, conv = kernels.multistart(
        start_points(cfg, n), R, dx, dy, K, mode, sign, cfg.step, cfg.max_iter, cfg.tol, cfg.polish
    )
    signed = sign * values
    best = int(np.argmin(signed))
    srt = np.sort(signed)
    gap = float(srt[1] - srt[0]) if srt.size > 1 else 0.0
    return OptResult(
        value=float(values[best]),
        params=xs[best].copy(),
        outcomes=K,
        converged=int(conv.sum()),
        gap=gap,
        restart_values=values.copy(),
        best_restart=best,
        iterations=int(iters.sum()),
    )


def optimize_measurement(rho: DensityMatrix, side: str, sense: str, cfg: OptConfig | None = None) -> OptResult:
    """Best localizable entropy gain over rank-1 measurements on ``side``.

    ``sense`` is "maximize" (classical correlation) or "minimize"
    (unlocalizable entanglement). The returned value is the gain in bits.
    """
    if sense not in ("maximize", "minimize"):
        raise ValueError(f"sense must be 'maximize' or 'minimize', got {sense!r}")
    cfg = cfg or OptConfig()
    R, dx, dy, other = bipartite_tensor(rho, side)
    K = cfg.outcomes or dy
    s_x = von_neumann_entropy(partial_trace(rho, other))
    # max gain <=> min average conditional entropy
    res = optimize_average(R, dx, dy, K, maximize=(sense == "minimize"), cfg=cfg)
    gain = s_x - res.value
    return OptResult(
        value=gain,
        params=res.params,
        outcomes=K,
        converged=res.converged,
        gap=res.gap,
        restart_values=s_x - res.restart_values,
        best_restart=res.best_restart,
        iterations=res.iterations,
    )
