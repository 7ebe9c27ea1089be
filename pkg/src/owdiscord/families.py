"""Parameterized example states and the custom-state text format.

Bell conventions: |Phi+> = (|00> + |11>)/sqrt2, |Psi+> = (|01> + |10>)/sqrt2.

Custom-state files are UTF-8 text. Lines starting with '#' and blank lines
are ignored. The first remaining line lists the party dimensions, e.g.
``2 2 2``; every following line holds one amplitude as ``re im``, in the
basis order of ``np.kron`` over the parties (first party most significant).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from pathlib import Path

import numpy as np

from .tensor import StateVector, SubsystemLayout

FAMILIES = ("ghz3", "ghz4", "bellmix", "custom")
PARTY_NAMES = "ABCDEFGHIJ"
AMPLITUDE_TOL = 1e-8


class FamilyError(ValueError):
    pass


@dataclass(frozen=True)
class CustomState:
    dims: tuple[int, ...]
    amplitudes: tuple[complex, ...]


@dataclass(frozen=True)
class FamilySpec:
    name: str
    theta: float = 0.0
    custom: CustomState | None = None

    def __post_init__(self):
        if self.name not in FAMILIES:
            raise FamilyError(f"unknown family {self.name!r}; expected one of {FAMILIES}")
        if self.name == "custom":
            if self.custom is None:
                raise FamilyError("custom family needs amplitudes")
        elif not (-1e-12 <= self.theta <= np.pi / 2 + 1e-12):
            raise FamilyError(f"theta {self.theta!r} outside [0, pi/2]")


def _ghz(n: int, theta: float) -> StateVector:
    a = np.zeros(2**n, dtype=np.complex128)
    a[0] = np.cos(theta)
    a[-1] = np.sin(theta)
    return StateVector(a, SubsystemLayout.qubits(PARTY_NAMES[:n]))


def _bellmix(theta: float) -> StateVector:
    # cos t |Phi+>_AB |0>_C + sin t |0>_A |Psi+>_BC
    a = np.zeros(8, dtype=np.complex128)
    c, s = np.cos(theta) / np.sqrt(2), np.sin(theta) / np.sqrt(2)
    a[0b000] += c
    a[0b110] += c
    a[0b001] += s
    a[0b010] += s
    return StateVector(a, SubsystemLayout.qubits("ABC"))


def build(spec: FamilySpec) -> StateVector:
    if spec.name == "ghz3":
        return _ghz(3, spec.theta)
    if spec.name == "ghz4":
        return _ghz(4, spec.theta)
    if spec.name == "bellmix":
        return _bellmix(spec.theta)
    cs = spec.custom
    if len(cs.dims) > len(PARTY_NAMES):
        raise FamilyError(f"at most {len(PARTY_NAMES)} parties supported")
    layout = SubsystemLayout(tuple(PARTY_NAMES[: len(cs.dims)]), cs.dims)
    amps = np.asarray(cs.amplitudes, dtype=np.complex128)
    if amps.size != layout.total:
        raise FamilyError(f"{amps.size} amplitudes for dimensions {cs.dims} (need {layout.total})")
    norm = np.linalg.norm(amps)
    if abs(norm - 1.0) > AMPLITUDE_TOL:
        raise FamilyError(f"amplitudes have norm {norm:.12g}, expected 1")
    return StateVector(amps / norm, layout)


def parse_custom(text: str) -> CustomState:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise FamilyError("custom state file is empty")
    try:
        dims = tuple(int(tok) for tok in lines[0].split())
    except ValueError:
        raise FamilyError(f"bad dimension header {lines[0]!r}") from None
    if not dims or any(d < 1 for d in dims):
        raise FamilyError(f"bad dimension header {lines[0]!r}")
    amps = []
    for n, ln in enumerate(lines[1:], start=2):
        toks = ln.split()
        if len(toks) != 2:
            raise FamilyError(f"amplitude line {n} must be 're im', got {ln!r}")
        try:
            amps.append(complex(float(toks[0]), float(toks[1])))
        except ValueError:
            raise FamilyError(f"amplitude line {n} is not numeric: {ln!r}") from None
    if len(amps) != prod(dims):
        raise FamilyError(f"{len(amps)} amplitudes for dimensions {dims} (need {prod(dims)})")
    return CustomState(dims, tuple(amps))


def load_custom(path: str | Path) -> CustomState:
    return parse_custom(Path(path).read_text(encoding="utf-8"))


def format_custom(psi: StateVector) -> str:
    out = [" ".join(str(d) for d in psi.layout.dims)]
    out += [f"{a.real:.17g} {a.imag:.17g}" for a in psi.amplitudes]
    return "\n".join(out) + "\n"
