"""Command line: theta sweeps to CSV, random-state identity checks, gnuplot scripts.

Exit codes: 0 success, 1 a verification check failed, 2 bad configuration or
input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import math
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable

import numpy as np

from . import kernels
from .families import FAMILIES, FamilyError, FamilySpec, build, load_custom
from .measurement import OptConfig
from .polygamy import (
    PureStateAnalysis,
    deficit_left_tri,
    deficit_quad,
    deficit_right_tri,
    identity_report,
    quad_report,
    quad_upper_bound,
)
from .tensor import LayoutError, StateError, SubsystemLayout, haar_random_pure

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Quantity:
    parties: int
    fn: Callable[[PureStateAnalysis], float]
    family: str | None = None


FIGURES = {
    "fig1a": Quantity(3, lambda an: an.delta("A", "B") - an.D("A", "B"), "ghz3"),
    "fig1b": Quantity(3, lambda an: an.cond("B", "C"), "bellmix"),
    "fig2a": Quantity(3, lambda an: an.I("B", "C") - 2.0 * an.Ea("B", "C"), "ghz3"),
    "fig2b": Quantity(4, lambda an: quad_upper_bound(an), "ghz4"),
    "eoa_minus_eof_AC": Quantity(3, lambda an: an.Ea("A", "C") - an.Ef("A", "C")),
    "delta_shift": Quantity(3, lambda an: an.delta("A", "B") - an.delta("C", "B")),
    "discord_shift": Quantity(3, lambda an: an.D("A", "B") - an.D("C", "B")),
    "deficit_left": Quantity(3, lambda an: deficit_left_tri(an).value),
    "deficit_right": Quantity(3, lambda an: deficit_right_tri(an).value),
    "deficit_quad_left": Quantity(4, lambda an: deficit_quad(an, "left").value),
    "deficit_quad_right": Quantity(4, lambda an: deficit_quad(an, "right").value),
    "half_interaction": Quantity(4, lambda an: quad_upper_bound(an)),
}

_MEASURED = re.compile(r"^(J|D|Eu|delta)\[([A-J])\|([A-J])\]$")
_PAIR = re.compile(r"^(Ea|Ef)\[([A-J])([A-J])\]$")
_ENTROPY = re.compile(r"^S\(([A-J]+)(?:\|([A-J]+))?\)$")
_MUTUAL = re.compile(r"^I\(([A-J]+):([A-J]+)\)$")


def resolve_quantity(key: str) -> Quantity:
    """Figure keys, named deficits, or expressions such as ``J[A|B]``, ``Ea[AC]``, ``S(B|C)``, ``I(A:BC)``."""
    if key in FIGURES:
        return FIGURES[key]
    if m := _MEASURED.match(key):
        name, x, y = m.groups()
        if x == y:
            raise ConfigError(f"quantity {key!r} needs two distinct parties")
        return Quantity(0, lambda an: getattr(an, name)(x, y))
    if m := _PAIR.match(key):
        name, x, y = m.groups()
        if x == y:
            raise ConfigError(f"quantity {key!r} needs two distinct parties")
        return Quantity(0, lambda an: getattr(an, name)(x, y))
    if m := _ENTROPY.match(key):
        t, g = m.groups()
        if g is None:
            return Quantity(0, lambda an: an.S(*t))
        return Quantity(0, lambda an: an.S(*t, *g) - an.S(*g))
    if m := _MUTUAL.match(key):
        x, y = m.groups()
        return Quantity(0, lambda an: an.S(*x) + an.S(*y) - an.S(*x, *y))
    raise ConfigError(f"unknown quantity {key!r}")


def parse_angle(text: str) -> float:
    """Radians, as a number or a multiple of pi such as ``pi/4`` or ``3*pi/8``."""
    s = text.strip().replace(" ", "")
    try:
        return float(s)
    except ValueError:
        pass
    m = re.fullmatch(r"(?:([0-9.]+)\*?)?pi(?:/([0-9.]+))?", s)
    if not m:
        raise ConfigError(f"cannot parse angle {text!r}")
    num = float(m.group(1)) if m.group(1) else 1.0
    den = float(m.group(2)) if m.group(2) else 1.0
    return num * math.pi / den


def fmt(value: float) -> str:
    """Fixed notation, 12 significant digits."""
    if value == 0.0:
        value = 0.0
    return np.format_float_positional(value, precision=12, unique=False, fractional=False, trim="-")


@dataclass(frozen=True)
class SweepConfig:
    family: str
    quantity: str
    x_start: float
    x_end: float
    steps: int
    opt: OptConfig
    out: str | None = None
    state_file: str | None = None
    workers: int = 1

    def grid(self) -> list[float]:
        n = self.steps - 1
        return [self.x_start + (self.x_end - self.x_start) * (i / n) for i in range(self.steps)]


def _family_state(cfg: SweepConfig, custom, x: float):
    theta = x * (math.pi / 2.0)
    theta = min(max(theta, 0.0), math.pi / 2.0)
    return build(FamilySpec(cfg.family, theta, custom))


def cmd_sweep(cfg: SweepConfig) -> int:
    if cfg.steps < 2:
        raise ConfigError("steps must be at least 2")
    if not (-1e-12 <= cfg.x_start <= 1 + 1e-12 and -1e-12 <= cfg.x_end <= 1 + 1e-12):
        raise ConfigError("theta range must lie within [0, pi/2]")
    if cfg.workers < 1:
        raise ConfigError("workers must be >= 1")
    quantity = resolve_quantity(cfg.quantity)
    custom = load_custom(cfg.state_file) if cfg.family == "custom" else None
    probe = _family_state(cfg, custom, cfg.x_start)
    if quantity.parties and len(probe.labels) != quantity.parties:
        raise ConfigError(f"{cfg.quantity} needs a {quantity.parties}-party state; {cfg.family} has {len(probe.labels)}")

    def point(x: float) -> float:
        return float(quantity.fn(PureStateAnalysis(_family_state(cfg, custom, x), cfg.opt)))

    xs = cfg.grid()
    try:
        with np.errstate(invalid="raise", divide="raise", over="raise"):
            if cfg.workers == 1:
                values = [point(x) for x in xs]
            else:
                with ThreadPoolExecutor(cfg.workers) as pool:
                    values = list(pool.map(point, xs))
    except (LayoutError, FamilyError) as exc:
        raise ConfigError(str(exc)) from exc
    except (FloatingPointError, np.linalg.LinAlgError, StateError) as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    bad = [x for x, v in zip(xs, values) if not math.isfinite(v)]
    if bad:
        print(f"error: non-finite value at 2theta/pi = {bad[0]!r}", file=sys.stderr)
        return EXIT_NUMERIC
    lines = [f"two_theta_over_pi,{cfg.quantity}"] + [f"{fmt(x)},{fmt(v)}" for x, v in zip(xs, values)]
    _write_text(cfg.out, "\n".join(lines) + "\n")
    return EXIT_OK


def _write_text(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


@dataclass(frozen=True)
class VerifyConfig:
    states: int
    dims: tuple[int, ...]
    seed: int
    tol_exact: float = 1e-9
    tol_opt: float = 1e-3
    outcomes: str = "auto"  # "auto", "dual", or an integer
    opt: OptConfig = OptConfig()
    out: str | None = None
    workers: int = 1
    discrepancy_log: float = 1e-6

    def validate(self) -> None:
        if self.states < 1:
            raise ConfigError("number of states must be positive")
        if len(self.dims) not in (3, 4):
            raise ConfigError("verification needs three or four parties")
        if any(d < 2 for d in self.dims):
            raise ConfigError("party dimensions must be at least 2")
        if not (self.tol_exact > 0 and self.tol_opt > 0):
            raise ConfigError("tolerances must be positive")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.outcomes not in ("auto", "dual"):
            try:
                k = int(self.outcomes)
            except ValueError:
                raise ConfigError(f"bad POVM outcome policy {self.outcomes!r}") from None
            if k < max(self.dims):
                raise ConfigError(f"{k} outcomes cannot span a {max(self.dims)}-dimensional party")


def _exact_checks(an: PureStateAnalysis) -> dict[str, float]:
    labels = an.psi.labels
    a = labels[0]
    if len(labels) == 3:
        _, b, c = labels
        return {
            "complementary_marginals": abs(an.S(a, b) - an.S(c)),
            "conditional_entropy_form": abs(an.cond(b, c) - (an.S(a) - an.S(c))),
        }
    rest = labels[1:]
    direct = an.S(a) - 0.5 * sum(an.I(a, y) for y in rest)
    return {"interaction_information_form": abs(quad_upper_bound(an) - direct)}


def _state_rows(cfg: VerifyConfig, index: int, opt: OptConfig):
    layout = SubsystemLayout(tuple("ABCD"[: len(cfg.dims)]), cfg.dims)
    psi = haar_random_pure(layout, cfg.seed, (index,))
    an = PureStateAnalysis(psi, opt)
    if len(cfg.dims) == 3:
        rep = identity_report(an)
        opt_checks = {**rep.residuals, **rep.violations}
    else:
        rep = quad_report(an)
        opt_checks = dict(rep.violations)
    return _exact_checks(an), opt_checks, an.optimized_values()


def _outcome_counts(cfg: VerifyConfig) -> list[int | None]:
    if cfg.outcomes == "auto":
        return [None]
    if cfg.outcomes == "dual":
        d = max(cfg.dims)
        return [d * d, d]
    return [int(cfg.outcomes)]


def cmd_verify(cfg: VerifyConfig) -> int:
    """Write one ``seed<TAB>identity<TAB>residual`` line per state and check.

    Inequalities are reported as the amount by which they are violated (zero
    when they hold). With the "dual" policy the gate uses K = d*d outcomes and
    the K = d run is compared against it; differences above
    ``discrepancy_log`` are listed as comment lines.
    """
    cfg.validate()
    counts = _outcome_counts(cfg)
    runs = []
    for k in counts:
        opt = replace(cfg.opt, outcomes=k)
        task = lambda i, opt=opt: _state_rows(cfg, i, opt)  # noqa: E731
        try:
            with np.errstate(invalid="raise", divide="raise", over="raise"):
                if cfg.workers == 1:
                    runs.append([task(i) for i in range(cfg.states)])
                else:
                    with ThreadPoolExecutor(cfg.workers) as pool:
                        runs.append(list(pool.map(task, range(cfg.states))))
        except (FloatingPointError, np.linalg.LinAlgError, StateError) as exc:
            print(f"error: numerical failure: {exc}", file=sys.stderr)
            return EXIT_NUMERIC

    gate = runs[0]
    lines, worst, failed = [], {}, False
    for i, (exact, opt_checks, _) in enumerate(gate):
        tag = f"{cfg.seed}:{i}"
        for name, tol, checks in (("exact", cfg.tol_exact, exact), ("opt", cfg.tol_opt, opt_checks)):
            for ident, r in checks.items():
                lines.append(f"{tag}\t{ident}\t{r:.12e}")
                worst[ident] = max(worst.get(ident, 0.0), r)
                if not r <= tol:
                    failed = True
    for ident, r in worst.items():
        lines.append(f"# max\t{ident}\t{r:.12e}")
    if len(runs) == 2:
        k_hi, k_lo = counts
        n_logged = 0
        for i, ((_, _, hi), (_, _, lo)) in enumerate(zip(runs[0], runs[1])):
            for key, v in hi.items():
                diff = abs(v - lo[key])
                if diff > cfg.discrepancy_log:
                    n_logged += 1
                    lines.append(f"# discrepancy K={k_lo} vs K={k_hi}\t{cfg.seed}:{i}\t{key}\t{diff:.12e}")
        lines.append(f"# discrepancies above {cfg.discrepancy_log:g}: {n_logged}")
    lines.append(f"# status\t{'FAIL' if failed else 'PASS'}\tstates={cfg.states}\tdims={'x'.join(map(str, cfg.dims))}")
    _write_text(cfg.out, "\n".join(lines) + "\n")
    print(f"{'FAIL' if failed else 'PASS'}: {cfg.states} states, max residuals: "
          + ", ".join(f"{k}={v:.2e}" for k, v in worst.items()), file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


GNUPLOT_TEMPLATE = """\
# gnuplot script for {csv}
set datafile separator ','
set key autotitle columnhead
set xlabel '2θ/π'
set ylabel '{ylabel}'
set xrange [0:1]
set grid
set terminal pngcairo size 800,600 enhanced
set output '{png}'
plot {curves}
"""


def read_sweep_csv(path: str | Path) -> tuple[list[str], list[list[float]]]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    if not rows:
        raise ConfigError(f"{path} is empty")
    header, body = rows[0], [r for r in rows[1:] if r]
    if len(header) < 2:
        raise ConfigError(f"{path}: header needs at least two columns")
    if not body:
        raise ConfigError(f"{path}: no data rows")
    data = []
    for n, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise ConfigError(f"{path}:{n}: expected {len(header)} fields")
        try:
            data.append([float(v) for v in row])
        except ValueError:
            raise ConfigError(f"{path}:{n}: non-numeric field") from None
    return header, data


def cmd_report(csv_path: str, emit_plotscript: bool = True, out: str | None = None) -> int:
    """Emit a gnuplot script for a sweep CSV; values are never recomputed."""
    header, _ = read_sweep_csv(csv_path)
    if not emit_plotscript:
        return EXIT_OK
    p = Path(csv_path)
    target = Path(out) if out else p.with_suffix(".gp")
    curves = ", ".join(f"'{p.name}' using 1:{i + 1} with linespoints" for i in range(1, len(header)))
    ylabel = header[1] if len(header) == 2 else "bits"
    script = GNUPLOT_TEMPLATE.format(csv=p.name, ylabel=ylabel, png=p.with_suffix(".png").name, curves=curves)
    target.write_text(script, encoding="utf-8")
    return EXIT_OK


def _opt_from_args(args) -> OptConfig:
    outcomes = None
    if getattr(args, "povm_outcomes", "auto") not in ("auto", "dual"):
        outcomes = int(args.povm_outcomes)
    return OptConfig(restarts=args.restarts, seed=args.seed, outcomes=outcomes)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="owdiscord", description=__doc__.splitlines()[0])
    parser.add_argument("--backend", action="version", version=f"kernel backend: {kernels.BACKEND}",
                        help="print the kernel backend (numba or numpy) and exit")
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="tabulate a quantity along a state family")
    sw.add_argument("--quantity", required=True,
                    help="fig1a|fig1b|fig2a|fig2b, a named deficit, or e.g. 'J[A|B]', 'Ea[AC]', 'S(B|C)'")
    sw.add_argument("--family", choices=FAMILIES, help="defaults to the figure's family")
    sw.add_argument("--state-file", help="custom-state file (family 'custom')")
    sw.add_argument("--theta-start", default="0", help="radians, e.g. 0 or pi/8")
    sw.add_argument("--theta-end", default="pi/2")
    sw.add_argument("--steps", type=int, default=101)
    sw.add_argument("--restarts", type=int, default=32)
    sw.add_argument("--povm-outcomes", default="auto", help="'auto' or a fixed outcome count")
    sw.add_argument("--seed", type=int, default=0)
    sw.add_argument("--workers", type=int, default=1)
    sw.add_argument("--out", help="CSV path (stdout if omitted)")

    vf = sub.add_parser("verify", help="check identities on Haar-random pure states")
    vf.add_argument("--states", type=int, default=200)
    vf.add_argument("--dims", default="2,2,2", help="comma-separated party dimensions")
    vf.add_argument("--seed", type=int, default=7)
    vf.add_argument("--tol-exact", type=float, default=1e-9)
    vf.add_argument("--tol-opt", type=float, default=1e-3)
    vf.add_argument("--povm-outcomes", default="auto", help="'auto', 'dual' (K=d and K=d^2) or an integer")
    vf.add_argument("--restarts", type=int, default=32)
    vf.add_argument("--workers", type=int, default=1)
    vf.add_argument("--out", help="report path (stdout if omitted)")

    rp = sub.add_parser("report", help="write a gnuplot script for a sweep CSV")
    rp.add_argument("csv")
    rp.add_argument("--plotscript", action=argparse.BooleanOptionalAction, default=True,
                    help="emit the gnuplot script (--no-plotscript only validates the CSV)")
    rp.add_argument("--out", help="script path (default: CSV path with .gp suffix)")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    try:
        if args.command == "sweep":
            quantity = resolve_quantity(args.quantity)
            family = args.family or quantity.family
            if family is None:
                raise ConfigError(f"--family is required for quantity {args.quantity!r}")
            if family == "custom" and not args.state_file:
                raise ConfigError("family 'custom' needs --state-file")
            t0, t1 = parse_angle(args.theta_start), parse_angle(args.theta_end)
            cfg = SweepConfig(
                family=family,
                quantity=args.quantity,
                x_start=2.0 * t0 / math.pi,
                x_end=2.0 * t1 / math.pi,
                steps=args.steps,
                opt=_opt_from_args(args),
                out=args.out,
                state_file=args.state_file,
                workers=args.workers,
            )
            return cmd_sweep(cfg)
        if args.command == "verify":
            try:
                dims = tuple(int(d) for d in args.dims.split(","))
            except ValueError:
                raise ConfigError(f"bad --dims {args.dims!r}") from None
            cfg = VerifyConfig(
                states=args.states,
                dims=dims,
                seed=args.seed,
                tol_exact=args.tol_exact,
                tol_opt=args.tol_opt,
                outcomes=args.povm_outcomes,
                opt=OptConfig(restarts=args.restarts, seed=args.seed),
                out=args.out,
                workers=args.workers,
            )
            return cmd_verify(cfg)
        return cmd_report(args.csv, args.plotscript, args.out)
    except (ConfigError, FamilyError, LayoutError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_exit()
