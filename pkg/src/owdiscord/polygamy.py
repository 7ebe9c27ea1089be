"""Polygamy deficits of one-way unlocalizable discord and identity residuals.

Notation used in value keys: ``J[A|B]``, ``Eu[A|B]``, ``D[A|B]`` and
``delta[A|B]`` refer to the reduced state of A and B with the rank-1
measurement on B and entropies taken on A. ``Ea[AC]`` and ``Ef[AC]`` are the
entanglement of assistance and of formation of the reduced state of A and C.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .correlations import eoa_numeric, eof_numeric_oracle, eof_wootters
from .entropy import interaction_information, von_neumann_entropy
from .measurement import OptConfig, optimize_measurement
from .tensor import DensityMatrix, StateError, StateVector, reduce_pure

PURITY_TOL = 1e-9


def as_pure(state: StateVector | DensityMatrix) -> StateVector:
    if isinstance(state, StateVector):
        return state
    if state.purity() < 1.0 - PURITY_TOL:
        raise StateError(f"global state is not pure (purity {state.purity():.12g})")
    w, v = np.linalg.eigh(state.entries)
    return StateVector.normalized(v[:, -1], state.layout)


def _parties(psi: StateVector, n: int) -> tuple[str, ...]:
    if len(psi.labels) != n:
        raise StateError(f"expected a {n}-party state, got parties {psi.labels}")
    return psi.labels


class PureStateAnalysis:
    """Memoized correlation quantities of the marginals of one pure state.

    Each measurement-based quantity is one independent optimization on its own
    reduced state; nothing is derived from another optimized value.
    """

    def __init__(self, state: StateVector | DensityMatrix, cfg: OptConfig | None = None):
        self.psi = as_pure(state)
        self.cfg = cfg or OptConfig()
        self._memo: dict = {}
        self._optimized: dict[str, float] = {}

    def _get(self, key, fn):
        if key not in self._memo:
            self._memo[key] = fn()
        return self._memo[key]

    def _opt(self, name: str, fn):
        if name not in self._optimized:
            self._optimized[name] = fn()
        return self._optimized[name]

    def rho(self, *parties: str) -> DensityMatrix:
        order = tuple(p for p in self.psi.labels if p in parties)
        return self._get(("rho", order), lambda: reduce_pure(self.psi, order))

    def S(self, *parties: str) -> float:
        order = tuple(p for p in self.psi.labels if p in parties)
        return self._get(("S", order), lambda: von_neumann_entropy(self.rho(*order)))

    def I(self, x: str, y: str) -> float:  # noqa: E743
        return self.S(x) + self.S(y) - self.S(x, y)

    def cond(self, x: str, given: str) -> float:
        return self.S(x, given) - self.S(given)

    def J(self, x: str, y: str) -> float:
        """Classical correlation of x with the measurement on y."""
        return self._opt(f"J[{x}|{y}]", lambda: optimize_measurement(self.rho(x, y), y, "maximize", self.cfg).value)

    def Eu(self, x: str, y: str) -> float:
        return self._opt(f"Eu[{x}|{y}]", lambda: optimize_measurement(self.rho(x, y), y, "minimize", self.cfg).value)

    def D(self, x: str, y: str) -> float:
        return self.I(x, y) - self.J(x, y)

    def delta(self, x: str, y: str) -> float:
        return self.I(x, y) - self.Eu(x, y)

    def Ea(self, x: str, y: str) -> float:
        pair = "".join(p for p in self.psi.labels if p in (x, y))
        return self._opt(f"Ea[{pair}]", lambda: eoa_numeric(self.rho(x, y), self.cfg))

    def optimized_values(self) -> dict[str, float]:
        """Every optimization result computed so far, keyed like ``Eu[A|B]`` or ``Ea[AC]``."""
        return dict(self._optimized)

    def Ef(self, x: str, y: str) -> float:
        """Wootters closed form for two qubits, numeric decomposition search otherwise."""
        pair = "".join(p for p in self.psi.labels if p in (x, y))
        rho = self.rho(x, y)
        if rho.layout.dims == (2, 2):
            return self._get(("Ef", pair), lambda: eof_wootters(rho))
        return self._opt(f"Ef[{pair}]", lambda: eof_numeric_oracle(rho, self.cfg))


@dataclass(frozen=True)
class Deficit:
    """A deficit value (from its defining sum) with every alternative expression."""

    value: float
    routes: dict[str, float] = field(default_factory=dict)

    def __float__(self) -> float:
        return self.value

    def spread(self) -> float:
        vals = [self.value, *self.routes.values()]
        return max(vals) - min(vals)


def _analysis(state, cfg) -> PureStateAnalysis:
    return state if isinstance(state, PureStateAnalysis) else PureStateAnalysis(state, cfg)


def deficit_left_tri(state, cfg: OptConfig | None = None) -> Deficit:
    """Total one-way discord of A with BC minus the pairwise ones, measuring B and C.

    For a pure global state the A-versus-BC term equals S(A). The alternative
    route is the unlocalizable entanglement minus the assistance of AB.
    """
    an = _analysis(state, cfg)
    a, b, c = _parties(an.psi, 3)
    value = an.S(a) - an.delta(a, b) - an.delta(a, c)
    return Deficit(value, {"ue_minus_eoa": an.Eu(a, b) - an.Ea(a, b)})


def deficit_right_tri(state, cfg: OptConfig | None = None) -> Deficit:
    """Same deficit with every measurement on A.

    Routes: I(B:C) - 2 Ea(BC); S(A) + S(B|A) + S(C|A) - 2 Ea(BC);
    Eu[B|A] - delta[B|A].
    """
    an = _analysis(state, cfg)
    a, b, c = _parties(an.psi, 3)
    value = an.S(a) - an.delta(b, a) - an.delta(c, a)
    return Deficit(
        value,
        {
            "mutual_minus_twice_eoa": an.I(b, c) - 2.0 * an.Ea(b, c),
            "conditional_form": an.S(a) + an.cond(b, a) + an.cond(c, a) - 2.0 * an.Ea(b, c),
            "ue_minus_delta": an.Eu(b, a) - an.delta(b, a),
        },
    )


def deficit_quad(state, direction: str, cfg: OptConfig | None = None) -> Deficit:
    """Four-party deficit: S(A) minus the three pairwise one-way discords of A.

    ``direction="left"`` measures B, C, D; ``"right"`` measures A each time.
    """
    if direction not in ("left", "right"):
        raise ValueError(f"direction must be 'left' or 'right', got {direction!r}")
    an = _analysis(state, cfg)
    a, *others = _parties(an.psi, 4)
    if direction == "left":
        terms = [an.delta(a, y) for y in others]
    else:
        terms = [an.delta(y, a) for y in others]
    return Deficit(an.S(a) - sum(terms))


def quad_upper_bound(state) -> float:
    """Half the interaction information of the first three parties."""
    psi = as_pure(state.psi if isinstance(state, PureStateAnalysis) else state)
    a, b, c, _ = _parties(psi, 4)
    return 0.5 * interaction_information(reduce_pure(psi, (a, b, c)))


@dataclass
class CorrelationReport:
    values: dict[str, float]
    deficits: dict[str, Deficit]
    residuals: dict[str, float]
    violations: dict[str, float]
    outcomes: int | None = None

    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)


IDENTITIES = (
    "koashi_winter",
    "buscemi_gour_kim",
    "discord_gap_vs_eoa_eof",
    "shift_delta_conditional",
    "shift_discord_conditional",
    "delta_via_eoa",
    "left_deficit_two_sided",
    "right_deficit_two_sided",
    "left_deficit_routes",
    "right_deficit_mutual_info",
    "right_deficit_conditional",
    "right_deficit_ue_delta",
)
TRI_CHECKS = ("polygamy_left", "polygamy_right")
QUAD_CHECKS = ("quad_left_bound", "quad_right_bound")


def identity_report(state, cfg: OptConfig | None = None) -> CorrelationReport:
    """Residuals of every exact relation among the correlations of a three-party pure state.

    Each residual compares two sides that come from different optimizations
    (or a closed form against an optimization).
    """
    an = _analysis(state, cfg)
    a, b, c = _parties(an.psi, 3)
    s_a = an.S(a)
    s_b_given_c = an.cond(b, c)
    left = deficit_left_tri(an)
    right = deficit_right_tri(an)

    values = {
        f"S({a})": s_a,
        f"S({b})": an.S(b),
        f"S({c})": an.S(c),
        f"S({b}|{c})": s_b_given_c,
        f"S({a}|{b})": an.cond(a, b),
        f"I({a}:{b})": an.I(a, b),
        f"I({a}:{c})": an.I(a, c),
        f"I({b}:{c})": an.I(b, c),
    }
    for x, y in ((a, b), (c, b), (a, c), (b, a), (c, a)):
        values[f"Eu[{x}|{y}]"] = an.Eu(x, y)
        values[f"delta[{x}|{y}]"] = an.delta(x, y)
    for x, y in ((a, b), (c, b)):
        values[f"J[{x}|{y}]"] = an.J(x, y)
        values[f"D[{x}|{y}]"] = an.D(x, y)
    for x, y in ((a, b), (a, c), (b, c)):
        values[f"Ea[{x}{y}]"] = an.Ea(x, y)
    values[f"Ef[{a}{c}]"] = an.Ef(a, c)

    residuals = {
        "koashi_winter": abs(an.J(a, b) + an.Ef(a, c) - s_a),
        "buscemi_gour_kim": abs(an.Eu(a, b) + an.Ea(a, c) - s_a),
        "discord_gap_vs_eoa_eof": abs((an.delta(a, b) - an.D(a, b)) - (an.Ea(a, c) - an.Ef(a, c))),
        "shift_delta_conditional": abs(an.delta(a, b) - an.delta(c, b) - s_b_given_c),
        "shift_discord_conditional": abs(an.D(a, b) - an.D(c, b) - s_b_given_c),
        "delta_via_eoa": abs(an.delta(a, b) - an.Ea(a, c) + an.cond(a, b)),
        "left_deficit_two_sided": abs((an.Eu(a, b) - an.Ea(a, b)) - (an.Eu(a, c) - an.Ea(a, c))),
        "right_deficit_two_sided": abs((an.Eu(b, a) - an.delta(b, a)) - (an.Eu(c, a) - an.delta(c, a))),
        "left_deficit_routes": abs(left.value - left.routes["ue_minus_eoa"]),
        "right_deficit_mutual_info": abs(right.value - right.routes["mutual_minus_twice_eoa"]),
        "right_deficit_conditional": abs(right.value - right.routes["conditional_form"]),
        "right_deficit_ue_delta": abs(right.value - right.routes["ue_minus_delta"]),
    }
    violations = {
        "polygamy_left": max(0.0, left.value),
        "polygamy_right": max(0.0, right.value),
    }
    return CorrelationReport(values, {"left": left, "right": right}, residuals, violations, an.cfg.outcomes)


def quad_report(state, cfg: OptConfig | None = None) -> CorrelationReport:
    """Both four-party deficits and how far each exceeds half the interaction information."""
    an = _analysis(state, cfg)
    bound = quad_upper_bound(an)
    left = deficit_quad(an, "left")
    right = deficit_quad(an, "right")
    return CorrelationReport(
        values={"half_interaction": bound},
        deficits={"left": left, "right": right},
        residuals={},
        violations={
            "quad_left_bound": max(0.0, left.value - bound),
            "quad_right_bound": max(0.0, right.value - bound),
        },
        outcomes=an.cfg.outcomes,
    )
