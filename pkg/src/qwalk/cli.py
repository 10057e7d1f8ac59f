"""Command-line front end: simulate, compare, asymptote, bench.

Angles are accepted in radians, either as plain floats or as exact
pi-fractions like ``pi/6`` or ``3pi/4`` (decimal inputs a hair outside a
legal range, such as 1.5708 for pi/2, snap to the range endpoint).
Output files are CSV (RFC 4180 quoting, ``#``-prefixed metadata header,
17 significant digits, fixed column order, so identical configurations
produce byte-identical files) or JSON (UTF-8, one top-level object).

Exit codes: 0 success, 2 parameter error, 3 I/O failure,
4 verification failure.
"""

from __future__ import annotations

import os

# The thread cap must be in the environment before numpy loads its BLAS.
_threads = os.environ.get("QWALK_THREADS", "").strip()
if _threads.isdigit() and int(_threads) > 0:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS",
                 "NUMEXPR_NUM_THREADS", "VECLIB_MAXIMUM_THREADS"):
        os.environ.setdefault(_var, _threads)

import argparse
import csv
import json
import math
import re
import sys
import time
from dataclasses import asdict, dataclass

import numpy as np

from .asymptotics import guarded_sites, rho_bounds, stationary_density
from .errors import (DegenerateCaseError, DomainError, ParameterError,
                     VerificationError)
from .evolution import evolve, iter_states, pmf
from .kernel import lambda_table_recursive, state_via_lambda
from .model import HALF_PI, CoinParameters, WalkerState
from .observables import continuity_residual, position_mean, probability_current
from .spectral import inverse_transform, pow2_size, spectral_evolve, closed_form_state

EXIT_OK = 0
EXIT_PARAMETER = 2
EXIT_IO = 3
EXIT_VERIFICATION = 4

#: Out-of-range angle inputs within this of a range endpoint snap to it.
ANGLE_SNAP_TOL = 1e-4

#: Equivalence budget enforced by the compare command.
COMPARE_TOL = 1e-8

METHODS = ("oracle", "closed", "spectral", "lambda", "all")
TRANSFORM_SIZES = ("minimal", "pow2")
FORMATS = ("csv", "json")
BENCH_SIZES = (256, 1024, 4096)

_PI_FRACTION = re.compile(
    r"^\s*(?P<num>\d+)?\s*\*?\s*pi\s*(?:/\s*(?P<den>\d+))?\s*$", re.IGNORECASE)


def parse_angle(text: str) -> float:
    """Parse a radian value, with exact pi-fraction syntax.

    ``pi``, ``pi/6``, ``3pi/4`` and ``2*pi/3`` evaluate as the exact
    double nearest the fraction, avoiding the decimal-rounding drift that
    would spoil symmetry checks; anything else is parsed as a float.
    """
    match = _PI_FRACTION.match(text)
    if match:
        num = int(match.group("num") or 1)
        den = int(match.group("den") or 1)
        if den == 0:
            raise ParameterError(f"zero denominator in angle {text!r}")
        return math.pi * num / den
    try:
        return float(text)
    except ValueError:
        raise ParameterError(f"cannot parse angle {text!r}") from None


def _snap(value: float, upper: float) -> float:
    if -ANGLE_SNAP_TOL <= value < 0.0:
        return 0.0
    if upper < value <= upper + ANGLE_SNAP_TOL:
        return upper
    return value


@dataclass(frozen=True)
class RunConfig:
    """Everything one command invocation needs.

    Angles are radians in the canonical ranges (validated on
    construction); grid_guard of None means the automatic band
    max(2/t, 1e-3).
    """

    theta: float
    varphi: float
    eta: float
    steps: int
    method: str = "oracle"
    transform_size: str = "minimal"
    output_format: str = "csv"
    output_path: str = "-"
    grid_guard: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta", _snap(float(self.theta), HALF_PI))
        object.__setattr__(self, "varphi", _snap(float(self.varphi), math.pi))
        object.__setattr__(self, "eta", _snap(float(self.eta), HALF_PI))
        self.coin_parameters()  # validates the angle ranges
        if self.steps < 0:
            raise ParameterError(f"steps must be nonnegative, got {self.steps}")
        if self.method not in METHODS:
            raise ParameterError(f"unknown method {self.method!r}")
        if self.transform_size not in TRANSFORM_SIZES:
            raise ParameterError(f"unknown transform size {self.transform_size!r}")
        if self.output_format not in FORMATS:
            raise ParameterError(f"unknown output format {self.output_format!r}")
        if self.grid_guard is not None and self.grid_guard < 0.0:
            raise ParameterError("grid guard must be nonnegative")

    def coin_parameters(self) -> CoinParameters:
        return CoinParameters(theta=self.theta, varphi=self.varphi, eta=self.eta)


def _transform_length(config: RunConfig, t: int) -> int | None:
    return pow2_size(t) if config.transform_size == "pow2" else None


def _solve(config: RunConfig, params: CoinParameters, t: int, method: str) -> WalkerState:
    if method == "oracle":
        return evolve(params, t)
    if method == "closed":
        return closed_form_state(params, t, _transform_length(config, t))
    if method == "spectral":
        return inverse_transform(
            spectral_evolve(params, t, _transform_length(config, t)))
    if method == "lambda":
        table = lambda_table_recursive(params.theta, t + 1)
        return state_via_lambda(params, t, table)
    raise ParameterError(f"method {method!r} does not produce a single state")


def _format_value(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _metadata(config: RunConfig, command: str, extra: dict | None = None) -> dict:
    meta = {
        "command": command,
        "theta": config.theta,
        "varphi": config.varphi,
        "eta": config.eta,
        "steps": config.steps,
        "method": config.method,
        "transform_size": config.transform_size,
    }
    if extra:
        meta.update(extra)
    return meta


def _open_output(path: str):
    if path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _write_csv_sections(path: str, metadata: dict, sections) -> None:
    """Write ``#`` metadata lines plus one or more (header, rows) tables.

    Sections are separated by a single blank line; every cell is written
    with 17 significant digits through an RFC 4180 writer.
    """
    handle, owned = _open_output(path)
    try:
        for key, value in metadata.items():
            handle.write(f"# {key} = {value}\n")
        writer = csv.writer(handle, lineterminator="\n")
        for index, (header, rows) in enumerate(sections):
            if index:
                handle.write("\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_format_value(cell) for cell in row])
    finally:
        if owned:
            handle.close()


def _write_json(path: str, payload: dict) -> None:
    handle, owned = _open_output(path)
    try:
        json.dump(payload, handle, indent=2)
        handle.write("\n")
    finally:
        if owned:
            handle.close()


def cmd_simulate(config: RunConfig) -> int:
    """Run one walk and write sites, amplitudes, mass function and current.

    Per-site columns are n, nu, psi0_re, psi0_im, psi1_re, psi1_im, rho,
    J at the final time, computed with the configured method; the <X>
    trajectory over all intermediate times follows as a second table.
    The trajectory always comes from operator evolution (re-solving every
    intermediate time with a closed-form method would be quadratically
    wasteful), which the xmean_method metadata records.
    """
    if config.method == "all":
        raise ParameterError("simulate needs a single method, not 'all'")
    params = config.coin_parameters()
    t = config.steps
    state = _solve(config, params, t, config.method)
    after = _solve(config, params, t + 1, config.method)
    current = probability_current(after)
    rho = pmf(state, method="oracle" if config.method == "oracle" else config.method)

    xmean = [position_mean(pmf(s)) for s in iter_states(params, t)]

    sites = np.arange(t + 1)
    nu = sites / t if t > 0 else sites.astype(float)
    rows = [
        (int(n), nu[n], state.amp0[n].real, state.amp0[n].imag,
         state.amp1[n].real, state.amp1[n].imag, rho.values[n], current[n])
        for n in sites
    ]
    metadata = _metadata(config, "simulate", {"xmean_method": "oracle"})
    if config.output_format == "csv":
        _write_csv_sections(
            config.output_path, metadata,
            [(("n", "nu", "psi0_re", "psi0_im", "psi1_re", "psi1_im", "rho", "J"), rows),
             (("s", "xmean"), list(enumerate(xmean)))])
    else:
        records = [
            {"n": int(n), "nu": float(nu[n]),
             "psi0_re": float(state.amp0[n].real), "psi0_im": float(state.amp0[n].imag),
             "psi1_re": float(state.amp1[n].real), "psi1_im": float(state.amp1[n].imag),
             "rho": float(rho.values[n]), "J": float(current[n])}
            for n in sites
        ]
        _write_json(config.output_path,
                    {"metadata": metadata, "records": records, "xmean": xmean})
    return EXIT_OK


@dataclass(frozen=True)
class MethodTiming:
    """Error and timing of one solver against the operator oracle."""

    method: str
    max_error: float
    norm_residual: float
    wall_clock: float


@dataclass(frozen=True)
class ComparisonReport:
    """Cross-method equivalence report at one time step."""

    t: int
    tolerance: float
    oracle_seconds: float
    oracle_norm_residual: float
    continuity_residual: float
    methods: tuple[MethodTiming, ...]

    @property
    def passed(self) -> bool:
        return all(m.max_error <= self.tolerance for m in self.methods)

    def as_dict(self) -> dict:
        return {
            "t": self.t,
            "tolerance": self.tolerance,
            "oracle_seconds": self.oracle_seconds,
            "oracle_norm_residual": self.oracle_norm_residual,
            "continuity_residual": self.continuity_residual,
            "methods": [asdict(m) for m in self.methods],
            "passed": self.passed,
        }


def cmd_compare(config: RunConfig, inject_error: float = 0.0) -> ComparisonReport:
    """Run all solvers against the oracle and report errors and timings.

    inject_error > 0 rotates the phase of the closed-form stay component,
    a norm-preserving corruption used to exercise the failure path.
    """
    if config.method != "all":
        raise ParameterError("compare requires method 'all'")
    params = config.coin_parameters()
    t = config.steps

    start = time.perf_counter()
    oracle = evolve(params, t)
    oracle_seconds = time.perf_counter() - start
    oracle_next = evolve(params, t + 1)
    continuity = continuity_residual(oracle, oracle_next)

    timings = []
    for method in ("closed", "spectral", "lambda"):
        start = time.perf_counter()
        state = _solve(config, params, t, method)
        elapsed = time.perf_counter() - start
        if method == "closed" and inject_error:
            state = WalkerState(
                t=state.t,
                amp0=state.amp0 * complex(math.cos(inject_error), math.sin(inject_error)),
                amp1=state.amp1)
        max_error = max(
            float(np.abs(state.amp0 - oracle.amp0).max()),
            float(np.abs(state.amp1 - oracle.amp1).max()))
        timings.append(MethodTiming(
            method=method,
            max_error=max_error,
            norm_residual=abs(state.norm() - 1.0),
            wall_clock=elapsed))
    return ComparisonReport(
        t=t,
        tolerance=COMPARE_TOL,
        oracle_seconds=oracle_seconds,
        oracle_norm_residual=abs(oracle.norm() - 1.0),
        continuity_residual=continuity,
        methods=tuple(timings))


def cmd_asymptote(config: RunConfig) -> int:
    """Write the exact-vs-asymptotic overlay plus the limit-density table.

    Columns n, nu, rho_exact, rho_bar, rho_sup, rho_inf, rho_med run over
    the guard-banded interior of the cone; a second table samples the
    stationary density of eps on a fixed 201-point grid.  Degenerate coin
    angles (theta at 0 or pi/2) are rejected: the cone has no interior.
    """
    if config.steps < 10:
        raise ParameterError(f"asymptote needs steps >= 10, got {config.steps}")
    params = config.coin_parameters()
    t = config.steps
    grid = guarded_sites(params.theta, t, config.grid_guard)  # degenerate theta raises below
    if grid.size == 0:
        raise DegenerateCaseError(
            "no interior sites survive the guard band; the allowed interval "
            "is degenerate at this theta")
    profile = rho_bounds(params, t, grid)
    exact = pmf(evolve(params, t))
    density = stationary_density(params)
    eps = np.linspace(-1.0, 1.0, 203)[1:-1]
    dens = density.pdf(eps)

    guard = config.grid_guard if config.grid_guard is not None else max(2.0 / t, 1e-3)
    metadata = _metadata(config, "asymptote", {
        "grid_guard": format(guard, ".17g"),
        "interior_sites": grid.size,
    })
    main_rows = [
        (int(n), profile.nus[i], exact.values[n], profile.rho_bar[i],
         profile.rho_sup[i], profile.rho_inf[i], profile.rho_med[i])
        for i, n in enumerate(grid)
    ]
    density_rows = list(zip(eps, dens))
    if config.output_format == "csv":
        _write_csv_sections(
            config.output_path, metadata,
            [(("n", "nu", "rho_exact", "rho_bar", "rho_sup", "rho_inf", "rho_med"),
              main_rows),
             (("eps", "density"), density_rows)])
    else:
        _write_json(config.output_path, {
            "metadata": metadata,
            "grid": [
                {"n": int(n), "nu": float(profile.nus[i]),
                 "rho_exact": float(exact.values[n]),
                 "rho_bar": float(profile.rho_bar[i]),
                 "rho_sup": float(profile.rho_sup[i]),
                 "rho_inf": float(profile.rho_inf[i]),
                 "rho_med": float(profile.rho_med[i])}
                for i, n in enumerate(grid)
            ],
            "density": [{"eps": float(e), "density": float(d)}
                        for e, d in density_rows],
        })
    return EXIT_OK


def _best_of(repeats: int, func):
    best = math.inf
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = func()
        best = min(best, time.perf_counter() - start)
    return best, result


def cmd_bench(config: RunConfig, repeats: int = 3) -> dict:
    """Time the spectral pipeline with minimal-size direct inversion
    against the power-of-two fast transform, and the oracle, at the
    standard sizes up to the configured step count.  Returns the
    machine-readable table; both spectral paths must agree, and the
    reported max_state_diff lets callers verify how well.
    """
    if config.steps < 256:
        raise ParameterError(f"bench needs steps >= 256, got {config.steps}")
    if repeats < 1:
        raise ParameterError(f"repeats must be positive, got {repeats}")
    params = config.coin_parameters()
    sizes = [s for s in BENCH_SIZES if s <= config.steps]

    # Warm-up so first-call overhead lands outside the timings.
    inverse_transform(spectral_evolve(params, 8, 16))
    inverse_transform(spectral_evolve(params, 8, 9))

    results = []
    for t in sizes:
        direct_n = t + 1
        fft_n = pow2_size(t)
        direct_seconds, direct_state = _best_of(
            repeats, lambda: inverse_transform(spectral_evolve(params, t, direct_n)))
        fft_seconds, fft_state = _best_of(
            repeats, lambda: inverse_transform(spectral_evolve(params, t, fft_n)))
        oracle_seconds, _ = _best_of(repeats, lambda: evolve(params, t))
        diff = max(
            float(np.abs(direct_state.amp0 - fft_state.amp0).max()),
            float(np.abs(direct_state.amp1 - fft_state.amp1).max()))
        results.append({
            "t": t,
            "direct_transform_size": direct_n,
            "fft_transform_size": fft_n,
            "direct_seconds": direct_seconds,
            "fft_seconds": fft_seconds,
            "oracle_seconds": oracle_seconds,
            "speedup": direct_seconds / fft_seconds,
            "max_state_diff": diff,
        })
    speedups = [row["speedup"] for row in results]
    return {
        "command": "bench",
        "theta": config.theta,
        "varphi": config.varphi,
        "eta": config.eta,
        "steps": config.steps,
        "repeats": repeats,
        "results": results,
        "speedup_non_decreasing": all(
            a <= b for a, b in zip(speedups, speedups[1:])),
    }


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qwalk",
        description="Unidirectional discrete-time quantum walk with a general coin.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_angles(p, required=True):
        p.add_argument("--theta", required=required, default=None,
                       help="coin angle in [0, pi/2]; accepts pi-fractions like pi/6")
        p.add_argument("--phi", required=required, default=None, dest="varphi",
                       help="coin phase in [0, pi]")
        p.add_argument("--eta", required=required, default=None,
                       help="initial qubit angle in [0, pi/2]")

    sim = sub.add_parser("simulate", help="evolve one walk and write its state")
    add_angles(sim)
    sim.add_argument("--steps", type=int, required=True)
    sim.add_argument("--method", choices=[m for m in METHODS if m != "all"],
                     default="oracle")
    sim.add_argument("--transform-size", choices=TRANSFORM_SIZES, default="minimal")
    sim.add_argument("--format", choices=FORMATS, default="csv")
    sim.add_argument("--output", required=True, help="output path, or - for stdout")

    cmp_ = sub.add_parser("compare", help="check all solvers against the oracle")
    add_angles(cmp_)
    cmp_.add_argument("--steps", type=int, required=True)
    cmp_.add_argument("--transform-size", choices=TRANSFORM_SIZES, default="minimal")
    cmp_.add_argument("--output", default=None, help="optional JSON report path")
    cmp_.add_argument("--inject-error", type=float, default=0.0,
                      help=argparse.SUPPRESS)

    asy = sub.add_parser("asymptote", help="exact vs asymptotic overlay tables")
    add_angles(asy)
    asy.add_argument("--steps", type=int, required=True)
    asy.add_argument("--grid-guard", type=float, default=None,
                     help="guard band half-width in nu (default max(2/t, 1e-3))")
    asy.add_argument("--format", choices=FORMATS, default="csv")
    asy.add_argument("--output", required=True)

    ben = sub.add_parser("bench", help="time the transform paths")
    add_angles(ben, required=False)
    ben.add_argument("--steps", type=int, default=4096)
    ben.add_argument("--repeats", type=int, default=3)
    ben.add_argument("--output", default=None, help="JSON path (default stdout)")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    def angle(text, fallback):
        return parse_angle(text) if text is not None else fallback

    return RunConfig(
        theta=angle(args.theta, math.pi / 6),
        varphi=angle(args.varphi, 0.0),
        eta=angle(args.eta, math.pi / 6),
        steps=args.steps,
        method=getattr(args, "method", "all" if args.command == "compare" else "oracle"),
        transform_size=getattr(args, "transform_size", "minimal"),
        output_format=getattr(args, "format", "csv"),
        output_path=getattr(args, "output", None) or "-",
        grid_guard=getattr(args, "grid_guard", None),
    )


def _print_comparison(report: ComparisonReport) -> None:
    print(f"t = {report.t}, tolerance = {report.tolerance:g}")
    print(f"oracle: {report.oracle_seconds * 1e3:.3f} ms, "
          f"|norm - 1| = {report.oracle_norm_residual:.3e}, "
          f"continuity residual = {report.continuity_residual:.3e}")
    for m in report.methods:
        verdict = "ok" if m.max_error <= report.tolerance else "FAIL"
        print(f"{m.method:>9}: max error {m.max_error:.3e}, "
              f"|norm - 1| = {m.norm_residual:.3e}, "
              f"{m.wall_clock * 1e3:.3f} ms  [{verdict}]")


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARAMETER if exc.code not in (0, None) else EXIT_OK

    try:
        config = _config_from_args(args)
        if args.command == "simulate":
            return cmd_simulate(config)
        if args.command == "compare":
            report = cmd_compare(config, inject_error=args.inject_error)
            _print_comparison(report)
            if args.output:
                _write_json(args.output, report.as_dict())
            return EXIT_OK if report.passed else EXIT_VERIFICATION
        if args.command == "asymptote":
            return cmd_asymptote(config)
        if args.command == "bench":
            table = cmd_bench(config, repeats=args.repeats)
            _write_json(args.output or "-", table)
            return EXIT_OK
        raise ParameterError(f"unknown command {args.command!r}")
    except (ParameterError, DomainError, DegenerateCaseError) as exc:
        print(f"qwalk: parameter error: {exc}", file=sys.stderr)
        return EXIT_PARAMETER
    except OSError as exc:
        print(f"qwalk: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except VerificationError as exc:
        print(f"qwalk: verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
