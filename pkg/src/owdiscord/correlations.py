"""Bipartite correlation measures.

Measurement-based quantities take the bipartite state and the label of the
measured party. Entanglement of assistance and the numeric entanglement of
formation search over pure-state decompositions by measuring the ancilla of a
purification: every rank-1 POVM on the ancilla induces a decomposition and
every decomposition arises this way.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .entropy import binary_entropy, mutual_information, von_neumann_entropy
from .measurement import OptConfig, OptResult, Povm, optimize_average, optimize_measurement
from .tensor import (
    DensityMatrix,
    LayoutError,
    StateError,
    StateVector,
    eig_hermitian,
    purify,
    reduce_pure,
)

SIGMA_Y2 = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


def _bipartite(rho: DensityMatrix) -> tuple[str, str]:
    if len(rho.labels) != 2:
        raise LayoutError(f"expected a bipartite state, got parties {rho.labels}")
    return rho.labels


def _mutual(rho: DensityMatrix) -> float:
    x, y = _bipartite(rho)
    return mutual_information(rho, x, y)


def classical_correlation_J(rho: DensityMatrix, measured: str, cfg: OptConfig | None = None) -> float:
    return optimize_measurement(rho, measured, "maximize", cfg).value


def quantum_discord_D(rho: DensityMatrix, measured: str, cfg: OptConfig | None = None) -> float:
    return _mutual(rho) - classical_correlation_J(rho, measured, cfg)


def unlocalizable_entanglement_Eu(rho: DensityMatrix, measured: str, cfg: OptConfig | None = None) -> float:
    return optimize_measurement(rho, measured, "minimize", cfg).value


def one_way_discord_delta(rho: DensityMatrix, measured: str, cfg: OptConfig | None = None) -> float:
    """Mutual information minus the unlocalizable entanglement."""
    return _mutual(rho) - unlocalizable_entanglement_Eu(rho, measured, cfg)


def _two_qubit(rho: DensityMatrix) -> np.ndarray:
    if rho.layout.dims != (2, 2):
        raise LayoutError(f"two-qubit state required, got dims {rho.layout.dims}")
    return rho.entries


def spin_flip_roots(rho: DensityMatrix) -> np.ndarray:
    """Descending square roots of the eigenvalues of rho (sy x sy) rho* (sy x sy)."""
    m = _two_qubit(rho)
    flipped = SIGMA_Y2 @ m.conj() @ SIGMA_Y2
    # sqrt(rho) flipped sqrt(rho) is Hermitian and isospectral with rho flipped
    w, v = eig_hermitian(m)
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    lam, _ = eig_hermitian(root @ flipped @ root)
    return np.sqrt(np.clip(lam, 0.0, None))


def concurrence(rho: DensityMatrix) -> float:
    lam = spin_flip_roots(rho)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def eof_from_concurrence(c: float) -> float:
    c = min(max(c, 0.0), 1.0)
    return binary_entropy(0.5 * (1.0 + np.sqrt(1.0 - c * c)))


def eof_wootters(rho: DensityMatrix) -> float:
    return eof_from_concurrence(concurrence(rho))


def concurrence_of_assistance(rho: DensityMatrix) -> float:
    return float(min(1.0, np.sum(spin_flip_roots(rho))))


@dataclass(frozen=True)
class Decomposition:
    weights: tuple[float, ...]
    components: tuple[StateVector, ...]

    def mixture(self) -> np.ndarray:
        return sum(p * np.outer(c.amplitudes, c.amplitudes.conj()) for p, c in zip(self.weights, self.components))


PURIFIER = "_purifier"


def _purifier_tensor(rho: DensityMatrix, party: str | None) -> tuple[np.ndarray, int, int]:
    """Purify ``rho`` and return its (party, ancilla) marginal as (dX, r, dX, r)."""
    x, _ = _bipartite(rho)
    party = x if party is None else party
    psi = purify(rho, PURIFIER)
    r = psi.layout.dim(PURIFIER)
    dx = rho.layout.dim(party)
    m = reduce_pure(psi, (party, PURIFIER)).entries
    return np.ascontiguousarray(m.reshape(dx, r, dx, r)), dx, r


def _purifier_outcomes(r: int, cfg: OptConfig) -> int:
    # explicit K below the rank cannot span the ancilla; raise it to the rank
    return max(cfg.outcomes, r) if cfg.outcomes else r * r


def optimize_decompositions(rho: DensityMatrix, maximize: bool, cfg: OptConfig | None = None,
                            party: str | None = None, mode: int = kernels.MODE_ENTROPY) -> OptResult:
    """Extremize the average entropy (or concurrence) of ``party`` over decompositions of ``rho``."""
    cfg = cfg or OptConfig()
    R, dx, r = _purifier_tensor(rho, party)
    if mode == kernels.MODE_CONCURRENCE and dx != 2:
        raise LayoutError("average concurrence needs a qubit party")
    return optimize_average(R, dx, r, _purifier_outcomes(r, cfg), maximize, cfg, mode)


def eoa_numeric(rho: DensityMatrix, cfg: OptConfig | None = None) -> float:
    return optimize_decompositions(rho, True, cfg).value


def eof_numeric_oracle(rho: DensityMatrix, cfg: OptConfig | None = None) -> float:
    return optimize_decompositions(rho, False, cfg).value


def assisted_concurrence_numeric(rho: DensityMatrix, cfg: OptConfig | None = None) -> float:
    """Largest average pure-component concurrence over decompositions (qubit first party)."""
    return optimize_decompositions(rho, True, cfg, mode=kernels.MODE_CONCURRENCE).value


def decomposition_from_measurement(rho: DensityMatrix, purifier_povm: Povm) -> Decomposition:
    """Decomposition induced by measuring ``purifier_povm`` on the purifying ancilla.

    Outcomes with probability at most 1e-12 carry no component and are dropped.
    """
    psi = purify(rho, PURIFIER)
    r = psi.layout.dim(PURIFIER)
    if purifier_povm.dim != r:
        raise LayoutError(f"purifier has dimension {r}, POVM acts on {purifier_povm.dim}")
    amps = psi.amplitudes.reshape(rho.layout.total, r)
    weights, comps = [], []
    for m in purifier_povm.vectors.T:
        phi = amps @ m.conj()
        p = float(np.vdot(phi, phi).real)
        if p <= 1e-12:
            continue
        weights.append(p)
        comps.append(StateVector.normalized(phi, rho.layout))
    total = sum(weights)
    if abs(total - 1.0) > 1e-9:
        raise StateError(f"decomposition weights sum to {total!r}")
    return Decomposition(tuple(weights), tuple(comps))


def average_component_entropy(decomp: Decomposition, party: str) -> float:
    return sum(p * von_neumann_entropy(reduce_pure(c, party)) for p, c in zip(decomp.weights, decomp.components))

