"""Dense multipartite states: layouts, tensor products, partial traces.

Basis convention: the first party in a layout is the most significant
tensor index, i.e. the ordering produced by ``np.kron``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence

import numpy as np

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
NORM_TOL = 1e-10
PSD_TOL = 1e-9


class LayoutError(ValueError):
    """Bad party labels or dimensions."""


class StateError(ValueError):
    """Array does not describe a valid quantum state."""


@dataclass(frozen=True)
class SubsystemLayout:
    labels: tuple[str, ...]
    dims: tuple[int, ...]

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "dims", dims)
        if len(labels) != len(dims):
            raise LayoutError(f"{len(labels)} labels but {len(dims)} dims")
        if not labels:
            raise LayoutError("layout needs at least one party")
        if len(set(labels)) != len(labels):
            raise LayoutError(f"duplicate party labels in {labels}")
        if any(d < 1 for d in dims):
            raise LayoutError(f"dimensions must be positive, got {dims}")

    @classmethod
    def qubits(cls, labels: str | Sequence[str]) -> "SubsystemLayout":
        labels = tuple(labels)
        return cls(labels, (2,) * len(labels))

    @property
    def total(self) -> int:
        return prod(self.dims)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise LayoutError(f"unknown party {label!r}; layout has {self.labels}") from None

    def dim(self, label: str) -> int:
        return self.dims[self.index(label)]

    def __add__(self, other: "SubsystemLayout") -> "SubsystemLayout":
        return SubsystemLayout(self.labels + other.labels, self.dims + other.dims)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StateVector:
    amplitudes: np.ndarray
    layout: SubsystemLayout

    def __post_init__(self):
        amps = _frozen(np.ravel(self.amplitudes))
        object.__setattr__(self, "amplitudes", amps)
        if amps.size != self.layout.total:
            raise StateError(f"{amps.size} amplitudes for layout of dimension {self.layout.total}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise StateError(f"state norm {norm!r} differs from 1")

    @classmethod
    def normalized(cls, amplitudes, layout: SubsystemLayout) -> "StateVector":
        amps = np.asarray(amplitudes, dtype=np.complex128).ravel()
        norm = np.linalg.norm(amps)
        if norm == 0.0:
            raise StateError("zero vector cannot be normalized")
        return cls(amps / norm, layout)

    @property
    def labels(self) -> tuple[str, ...]:
        return self.layout.labels


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    entries: np.ndarray
    layout: SubsystemLayout

    def __post_init__(self):
        m = _frozen(self.entries)
        object.__setattr__(self, "entries", m)
        n = self.layout.total
        if m.shape != (n, n):
            raise StateError(f"matrix shape {m.shape} does not match layout dimension {n}")
        herm = np.max(np.abs(m - m.conj().T)) if n else 0.0
        if herm > HERMITIAN_TOL:
            raise StateError(f"matrix is not Hermitian (deviation {herm:.3g})")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise StateError(f"trace {tr!r} differs from 1")
        lo = np.linalg.eigvalsh(m)[0]
        if lo < -PSD_TOL:
            raise StateError(f"negative eigenvalue {lo:.3g}")

    @property
    def labels(self) -> tuple[str, ...]:
        return self.layout.labels

    def purity(self) -> float:
        m = self.entries
        return float(np.vdot(m, m).real)


def density(psi: StateVector) -> DensityMatrix:
    a = psi.amplitudes
    return DensityMatrix(np.outer(a, a.conj()), psi.layout)


def tensor(x, y):
    """Kronecker product of two states of the same kind, layouts concatenated."""
    layout = x.layout + y.layout
    if isinstance(x, StateVector) and isinstance(y, StateVector):
        return StateVector(np.kron(x.amplitudes, y.amplitudes), layout)
    if isinstance(x, DensityMatrix) and isinstance(y, DensityMatrix):
        return DensityMatrix(np.kron(x.entries, y.entries), layout)
    raise TypeError(f"cannot tensor {type(x).__name__} with {type(y).__name__}")


def _keep_labels(layout: SubsystemLayout, keep: Iterable[str] | str) -> tuple[str, ...]:
    if isinstance(keep, str):
        keep = [keep]
    keep = set(keep)
    if not keep:
        raise LayoutError("keep-set is empty")
    for label in keep:
        layout.index(label)
    return tuple(lab for lab in layout.labels if lab in keep)


def partial_trace(rho: DensityMatrix, keep: Iterable[str] | str) -> DensityMatrix:
    """Reduced state on ``keep``; kept parties stay in their original order."""
    layout = rho.layout
    kept = _keep_labels(layout, keep)
    if kept == layout.labels:
        return rho
    n = len(layout.dims)
    t = rho.entries.reshape(layout.dims + layout.dims)
    row = list(range(n))
    col = [i + n if layout.labels[i] in kept else i for i in range(n)]
    out = [i for i in range(n) if layout.labels[i] in kept]
    out = out + [i + n for i in out]
    red = np.einsum(t, row + col, out)
    sub = SubsystemLayout(kept, tuple(layout.dims[layout.index(k)] for k in kept))
    return DensityMatrix(red.reshape(sub.total, sub.total), sub)


def reduce_pure(psi: StateVector, keep: Iterable[str] | str) -> DensityMatrix:
    """Marginal of a pure state, computed from the amplitudes without forming |psi><psi|."""
    layout = psi.layout
    kept = _keep_labels(layout, keep)
    idx = [layout.index(k) for k in kept]
    rest = [i for i in range(len(layout.dims)) if i not in idx]
    t = psi.amplitudes.reshape(layout.dims).transpose(idx + rest)
    dk = prod(layout.dims[i] for i in idx)
    m = t.reshape(dk, -1)
    sub = SubsystemLayout(kept, tuple(layout.dims[i] for i in idx))
    return DensityMatrix(m @ m.conj().T, sub)


def permute(rho: DensityMatrix, order: Sequence[str]) -> np.ndarray:
    """Entries of ``rho`` reordered to the party order ``order`` (raw array)."""
    layout = rho.layout
    if sorted(order) != sorted(layout.labels):
        raise LayoutError(f"order {tuple(order)} is not a permutation of {layout.labels}")
    perm = [layout.index(k) for k in order]
    n = len(perm)
    t = rho.entries.reshape(layout.dims + layout.dims).transpose(perm + [p + n for p in perm])
    return np.ascontiguousarray(t.reshape(layout.total, layout.total))


def eig_hermitian(m, tol: float = 1e-8) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues in descending order and matching orthonormal eigenvector columns.

    Raises
    ------
    StateError
        If ``m`` deviates from its conjugate transpose by more than ``tol``.
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise StateError(f"expected a square matrix, got shape {m.shape}")
    dev = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if dev > tol:
        raise StateError(f"matrix is not Hermitian (deviation {dev:.3g})")
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    return w[::-1].copy(), v[:, ::-1].copy()


RANK_CUTOFF = 1e-12


def purify(rho: DensityMatrix, ancilla: str = "anc") -> StateVector:
    """Purification sum_i sqrt(l_i)|v_i>|i> with ancilla dimension equal to the rank."""
    if ancilla in rho.labels:
        raise LayoutError(f"ancilla label {ancilla!r} already used")
    w, v = eig_hermitian(rho.entries)
    r = max(1, int(np.count_nonzero(w > RANK_CUTOFF)))
    w = np.clip(w[:r], 0.0, None)
    amps = v[:, :r] * np.sqrt(w)[None, :]
    layout = rho.layout + SubsystemLayout((ancilla,), (r,))
    return StateVector.normalized(amps.ravel(), layout)


def derive_rng(seed: int, *stream: int) -> np.random.Generator:
    """Counter-based generator for the sub-stream ``stream`` of ``seed``.

    Distinct ``stream`` tuples give independent generators, so results do not
    depend on the order in which tasks are scheduled.
    """
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(ss))


def haar_random_pure(layout: SubsystemLayout, seed: int, stream: Sequence[int] = ()) -> StateVector:
    rng = derive_rng(seed, *stream)
    z = rng.standard_normal(layout.total) + 1j * rng.standard_normal(layout.total)
    return StateVector.normalized(z, layout)


def basis_state(bits: Sequence[int], layout: SubsystemLayout) -> StateVector:
    a = np.zeros(layout.total, dtype=np.complex128)
    a[np.ravel_multi_index(tuple(bits), layout.dims)] = 1.0
    return StateVector(a, layout)
