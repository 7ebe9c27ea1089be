"""Entropic quantities in bits."""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .tensor import DensityMatrix, LayoutError, partial_trace

EIG_CUTOFF = 1e-12


def _labels(x: str | Iterable[str]) -> tuple[str, ...]:
    return (x,) if isinstance(x, str) else tuple(x)


def entropy_of_spectrum(w) -> float:
    w = np.asarray(w, dtype=float)
    w = w[w > EIG_CUTOFF]
    return float(-np.sum(w * np.log2(w))) if w.size else 0.0


def von_neumann_entropy(rho: DensityMatrix) -> float:
    return entropy_of_spectrum(np.linalg.eigvalsh(rho.entries))


def binary_entropy(p: float) -> float:
    if p < -1e-12 or p > 1 + 1e-12:
        raise ValueError(f"probability {p!r} outside [0, 1]")
    p = min(max(float(p), 0.0), 1.0)
    return entropy_of_spectrum([p, 1.0 - p])


def marginal_entropy(rho: DensityMatrix, parties: str | Iterable[str]) -> float:
    return von_neumann_entropy(partial_trace(rho, _labels(parties)))


def conditional_entropy(rho: DensityMatrix, target: str | Iterable[str], given: str | Iterable[str]) -> float:
    """S(target|given) = S(target, given) - S(given). May be negative."""
    target, given = _labels(target), _labels(given)
    if set(target) & set(given):
        raise LayoutError(f"target {target} overlaps conditioning set {given}")
    return marginal_entropy(rho, target + given) - marginal_entropy(rho, given)


def mutual_information(rho: DensityMatrix, part_a: str | Iterable[str], part_b: str | Iterable[str]) -> float:
    a, b = _labels(part_a), _labels(part_b)
    if not a or not b:
        raise LayoutError("both parts must be nonempty")
    if set(a) & set(b):
        raise LayoutError(f"parts {a} and {b} overlap")
    return marginal_entropy(rho, a) + marginal_entropy(rho, b) - marginal_entropy(rho, a + b)


def interaction_information(rho: DensityMatrix) -> float:
    """I(A:BC) - I(A:B) - I(A:C) for a three-party state."""
    if len(rho.labels) != 3:
        raise LayoutError(f"interaction information needs three parties, got {rho.labels}")
    a, b, c = rho.labels
    s = lambda *p: marginal_entropy(rho, p)  # noqa: E731
    return -s(a) - s(b) - s(c) + s(a, b) + s(a, c) + s(b, c) - s(a, b, c)
