"""Physical quantities and structural checks on walker states.

Probability current, the discrete continuity identity it satisfies, the
position expectation and its one-step (Ehrenfest-style) increment, the
coin-expectation fairness residual, and the classification of parameter
triples into the families whose mass function is reflection-symmetric
about the midpoint t/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateCaseError, ParameterError
from .evolution import PmfSeries, evolve, pmf
from .model import HALF_PI, CoinMatrix, CoinParameters, WalkerState

#: Residual below which a trigonometric symmetry condition counts as exact.
SYMMETRY_TOL = 1e-12

#: Families a parameter triple can fall into, most specific first.
FAMILIES = ("endpoint", "confined", "odd-coin", "approximate", "none")


def probability_current(state_next: WalkerState) -> np.ndarray:
    """Current J(n, t) = |psi1(n+1, t+1)|^2 for n = 0..t.

    The flux between sites is carried by the move component alone, so the
    probability flowing from n to n+1 during step t -> t+1 is read off
    the state at t+1.  The argument is that later state.
    """
    if state_next.t < 1:
        raise ParameterError("current needs the state at t + 1 >= 1")
    return np.abs(state_next.amp1[1:]) ** 2


def probability_current_local(state: WalkerState, params: CoinParameters) -> np.ndarray:
    """Current evaluated from the local wave function at time t.

    J(n, t) = |e^{i varphi} sin(theta) psi0(n, t) - cos(theta) psi1(n, t)|^2.
    Independent route to probability_current, kept for cross-checking.
    """
    mix = (params.exp_plus_ivarphi * params.sin_theta * state.amp0
           - params.cos_theta * state.amp1)
    return np.abs(mix) ** 2


def continuity_residual(state_t: WalkerState, state_t1: WalkerState) -> float:
    """Worst violation of rho(n, t+1) - rho(n, t) = J(n-1, t) - J(n, t).

    The two arguments must be one step apart; they are deliberately not
    checked for coming from the same walk instance, so a large residual
    doubles as a mismatch detector.
    """
    if state_t1.t != state_t.t + 1:
        raise ParameterError(
            f"states must be one step apart, got t={state_t.t} and t={state_t1.t}")
    t = state_t.t
    rho_t = np.zeros(t + 2)
    rho_t[: t + 1] = np.abs(state_t.amp0) ** 2 + np.abs(state_t.amp1) ** 2
    rho_t1 = np.abs(state_t1.amp0) ** 2 + np.abs(state_t1.amp1) ** 2
    current = np.abs(state_t1.amp1[1:]) ** 2          # J(n, t), n = 0..t
    outflow = np.zeros(t + 2)
    outflow[: t + 1] = current                        # J(n, t) at site n
    inflow = np.zeros(t + 2)
    inflow[1:] = current                              # J(n-1, t) at site n
    return float(np.abs(rho_t1 - rho_t - inflow + outflow).max())


def position_mean(series: PmfSeries) -> float:
    """Expected position <X> = sum_n n rho(n)."""
    return float(np.arange(series.t + 1) @ series.values)


def ehrenfest_increment(state_t1: WalkerState) -> float:
    """One-step change of <X>, equal to the total current sum |psi1(., t+1)|^2.

    The state one step after t fixes <X>_{t+1} - <X>_t; at t = 0 this is
    the walker's initial rightward velocity.
    """
    return float(np.sum(np.abs(state_t1.amp1) ** 2))


def fair_coin_residual(state: WalkerState, coin: CoinMatrix) -> float:
    """Magnitude of the coin expectation <psi| U |psi> summed over sites.

    The coin acts identically at every site, so the full expectation
    factorizes into the site-local qubit forms accumulated here.  A zero
    residual is the quantum-game fairness condition.
    """
    a0, a1 = state.amp0, state.amp1
    value = np.sum(
        a0.conj() * (coin.u00 * a0 + coin.u01 * a1)
        + a1.conj() * (coin.u10 * a0 + coin.u11 * a1))
    return float(abs(value))


def reflection_residual(values: np.ndarray) -> float:
    """Worst asymmetry max_l |rho(floor(t/2) - l) - rho(ceil(t/2) + l)|.

    The floor/ceiling pairing covers both parities of t: for even t the
    midpoint site is compared with itself, for odd t the two central
    sites are compared with each other.
    """
    values = np.asarray(values, dtype=np.float64)
    t = values.size - 1
    left = values[t // 2:: -1]
    right = values[(t + 1) // 2:]
    return float(np.abs(left - right).max())


def approximate_symmetry_eta(theta: float, varphi: float) -> float:
    """The unique eta in (0, pi/2) with cot(2 eta) = -tan(theta) cos(varphi).

    cot(2 eta) sweeps all reals monotonically as eta runs over (0, pi/2),
    so the solution exists and is unique; it is taken in closed form as
    eta = arccot(-tan(theta) cos(varphi)) / 2 with the arccot branch in
    (0, pi).  theta = pi/2 makes the right side blow up and is rejected
    as singular.
    """
    if not 0.0 <= theta <= HALF_PI:
        raise ParameterError(f"theta must lie in [0, pi/2], got {theta}")
    if not 0.0 <= varphi <= math.pi:
        raise ParameterError(f"varphi must lie in [0, pi], got {varphi}")
    if theta == HALF_PI:
        raise DegenerateCaseError(
            "theta = pi/2 is singular: the balance condition degenerates")
    return 0.5 * math.atan2(1.0, -math.tan(theta) * math.cos(varphi))


@dataclass(frozen=True)
class SymmetryVerdict:
    """Outcome of the symmetry classification for one parameter triple.

    residuals records every condition actually measured: the two exact
    trigonometric constraints, the reflection asymmetry of the evolved
    mass function at the probe time, and (for the confined family) the
    measured dependence on varphi, which the constraints alone cannot
    predict.
    """

    family: str
    residuals: dict[str, float]
    threshold: float = SYMMETRY_TOL
    t_probe: int = field(default=0)


def classify_symmetry(params: CoinParameters, t_probe: int = 40,
                      threshold: float = SYMMETRY_TOL) -> SymmetryVerdict:
    """Assign a parameter triple to its exact or approximate symmetry family.

    Exact reflection symmetry of the mass function requires both

        cos(2 eta) cos(2 theta) + sin(2 eta) sin(2 theta) cos(varphi) = 0
        cos(2 eta) cos(theta)   + sin(2 eta) sin(theta)   cos(varphi) = 0

    whose joint solutions split into three families: eta = pi/4 with
    theta = 0 (endpoint concentration), with theta = pi/2 (confined), or
    with varphi = pi/2 (odd coin).  When only the second condition holds
    the symmetry is approximate and improves with time; theta = pi/2 is
    excluded there as singular.  Residuals are tested against the
    threshold, not the angles; the most specific exact family wins.  The
    reflection residual of the evolved mass function at t_probe is always
    measured and reported alongside.
    """
    if t_probe < 2:
        raise ParameterError(f"probe time must be at least 2, got {t_probe}")
    cos2e = math.cos(2.0 * params.eta)
    sin2e = math.sin(2.0 * params.eta)
    cos2t = math.cos(2.0 * params.theta)
    sin2t = math.sin(2.0 * params.theta)
    r_double = abs(cos2e * cos2t + sin2e * sin2t * params.cos_varphi)
    r_single = abs(cos2e * params.cos_theta
                   + sin2e * params.sin_theta * params.cos_varphi)
    measured = reflection_residual(pmf(evolve(params, t_probe)).values)
    residuals = {
        "double_angle_condition": r_double,
        "single_angle_condition": r_single,
        "reflection": measured,
    }

    family = "none"
    if r_double < threshold and r_single < threshold:
        if abs(params.sin_theta) < threshold:
            family = "endpoint"
        elif abs(params.cos_theta) < threshold:
            family = "confined"
        else:
            family = "odd-coin"
    elif r_single < threshold and abs(params.cos_theta) >= threshold:
        family = "approximate"

    if family == "confined":
        # varphi drops out of the confined walk; record that as a
        # measurement instead of assuming it.
        shifted = CoinParameters(
            theta=params.theta,
            varphi=math.fmod(params.varphi + 0.7, math.pi),
            eta=params.eta)
        other = pmf(evolve(shifted, t_probe)).values
        residuals["phi_dependence"] = float(
            np.abs(other - pmf(evolve(params, t_probe)).values).max())

    return SymmetryVerdict(family=family, residuals=residuals,
                           threshold=threshold, t_probe=t_probe)
