"""Step-by-step operator evolution: the ground truth all solvers are tested against.

One step applies the coin to the qubit at every site and then shifts the
move component right by one site:

    psi0(n, t+1) = u00 psi0(n, t)   + u01 psi1(n, t)
    psi1(n, t+1) = u10 psi0(n-1, t) + u11 psi1(n-1, t)

with out-of-range sites reading as zero.  Nothing here is approximated
and nothing is renormalized: accumulated norm drift beyond a small
diagnostic budget raises instead of being corrected, so this module
stays an honest oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import NormDriftError, ParameterError
from .model import CoinMatrix, CoinParameters, WalkerState, make_coin, make_initial_state

#: Diagnostic budget on accumulated |sum(rho) - 1| during evolution.
NORM_DRIFT_TOL = 1e-10

#: Budget on the norm change of a single step.
STEP_NORM_TOL = 1e-14

#: Allowed provenance tags for a probability mass function.
PMF_METHODS = frozenset({"oracle", "closed", "spectral", "lambda", "asymptotic"})


@dataclass(frozen=True)
class PmfSeries:
    """Site probabilities rho(n) = |psi0(n)|^2 + |psi1(n)|^2 at fixed time.

    The method tag records which solver produced the values.  All tags
    except "asymptotic" promise an exactly normalized mass function.
    """

    t: int
    values: np.ndarray
    method: str = "oracle"

    def __post_init__(self) -> None:
        if self.method not in PMF_METHODS:
            raise ParameterError(
                f"unknown method tag {self.method!r}; expected one of {sorted(PMF_METHODS)}")
        vals = np.array(self.values, dtype=np.float64, copy=True).reshape(-1)
        if vals.size != self.t + 1:
            raise ParameterError(
                f"PMF must cover sites 0..{self.t}, got {vals.size} values")
        if not np.all(np.isfinite(vals)):
            raise ParameterError("PMF contains non-finite values")
        if np.any(vals < 0.0):
            raise ParameterError("PMF contains negative values")
        if self.method != "asymptotic":
            err = abs(float(vals.sum()) - 1.0)
            if err > 1e-12:
                raise ParameterError(
                    f"PMF does not sum to 1: |sum - 1| = {err:.3e}")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)


def step(state: WalkerState, coin: CoinMatrix) -> WalkerState:
    """Advance a state by one coin-and-shift application.

    The output is freshly allocated with length t + 2; evolving in place
    would alias the psi(n-1, t) reads with the psi(n, t+1) writes.
    """
    t = state.t
    new0 = np.empty(t + 2, dtype=np.complex128)
    new1 = np.empty(t + 2, dtype=np.complex128)
    new0[: t + 1] = coin.u00 * state.amp0 + coin.u01 * state.amp1
    new0[t + 1] = 0.0
    new1[0] = 0.0
    new1[1:] = coin.u10 * state.amp0 + coin.u11 * state.amp1
    drift = abs(
        float(np.sum(np.abs(new0) ** 2 + np.abs(new1) ** 2)) - state.norm())
    if drift > STEP_NORM_TOL:
        raise NormDriftError(f"single step changed the norm by {drift:.3e}")
    return WalkerState(t=t + 1, amp0=new0, amp1=new1)


def evolve(params: CoinParameters, t: int) -> WalkerState:
    """State after t steps from the localized initial condition.

    Runs the same recursion as step() on preallocated buffers (the shifted
    component is materialized before the stay component is overwritten, so
    there is no aliasing).  Norm drift above NORM_DRIFT_TOL raises.
    """
    if t < 0:
        raise ParameterError(f"step count must be nonnegative, got {t}")
    if t == 0:
        return make_initial_state(params)
    c = params.cos_theta
    up = params.exp_plus_ivarphi * params.sin_theta
    um = params.exp_minus_ivarphi * params.sin_theta
    a0 = np.zeros(t + 1, dtype=np.complex128)
    a1 = np.zeros(t + 1, dtype=np.complex128)
    a0[0] = params.cos_eta
    a1[0] = params.sin_eta
    for k in range(t):
        seg0 = a0[: k + 1]
        seg1 = a1[: k + 1]
        shifted = up * seg0 - c * seg1
        a0[: k + 1] = c * seg0 + um * seg1
        a1[1: k + 2] = shifted
        a1[0] = 0.0
    drift = abs(float(np.sum(np.abs(a0) ** 2 + np.abs(a1) ** 2)) - 1.0)
    if drift > NORM_DRIFT_TOL:
        raise NormDriftError(
            f"norm drifted by {drift:.3e} after {t} steps")
    return WalkerState(t=t, amp0=a0, amp1=a1)


def iter_states(params: CoinParameters, t_max: int) -> Iterator[WalkerState]:
    """Yield the states at t = 0, 1, ..., t_max in order."""
    if t_max < 0:
        raise ParameterError(f"step count must be nonnegative, got {t_max}")
    state = make_initial_state(params)
    coin = make_coin(params)
    yield state
    for _ in range(t_max):
        state = step(state, coin)
        yield state


def pmf(state: WalkerState, method: str = "oracle") -> PmfSeries:
    """Probability mass function of a state, tagged with its provenance."""
    values = np.abs(state.amp0) ** 2 + np.abs(state.amp1) ** 2
    return PmfSeries(t=state.t, values=values, method=method)
