"""The real kernel Lambda(n, t) that carries the whole walk.

Both wave-function components decompose over a single real function
Lambda(n, t) and its values one step later:

    psi0(n, t) = psi0(0,0) Lambda(n, t)   + psi0(0,1) Lambda(n+1, t+1)
    psi1(n, t) = psi1(0,0) Lambda(n, t)   + psi1(1,1) Lambda(n, t+1)

Lambda obeys the two-step recursion

    Lambda(n, t+2) = cos(theta) [Lambda(n, t+1) - Lambda(n-1, t+1)]
                   + Lambda(n-1, t)

with Lambda(0,0) = 1, Lambda(0,1) = Lambda(1,1) = 0 and zero boundary
values, and is reflection-symmetric about t/2 up to the sign (-1)^t.
The module provides the recursion-filled table, the independent
frequency-sum evaluation of single entries, and the state and mass
function reconstructed from the table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, VerificationError
from .evolution import PmfSeries
from .model import HALF_PI, CoinParameters, WalkerState

#: Anchor values of a stored table must hold to this tolerance.
ANCHOR_TOL = 1e-12


@dataclass(frozen=True)
class LambdaTable:
    """Dense table values[t, n] = Lambda(n, t) for 0 <= n <= t <= t_max.

    Entries with n > t are stored as exact zeros.  The anchor values
    Lambda(0,0) = 1, Lambda(0,1) = Lambda(1,1) = 0 and the derived
    boundary zeros Lambda(0,t) = Lambda(t,t) = 0 for t >= 1 are verified
    at construction.
    """

    theta: float
    t_max: int
    values: np.ndarray

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta <= HALF_PI:
            raise ParameterError(f"theta must lie in [0, pi/2], got {self.theta}")
        if self.t_max < 0:
            raise ParameterError(f"t_max must be nonnegative, got {self.t_max}")
        vals = np.array(self.values, dtype=np.float64, copy=True)
        shape = (self.t_max + 1, self.t_max + 1)
        if vals.shape != shape:
            raise ParameterError(f"table must have shape {shape}, got {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise ParameterError("table contains non-finite values")
        if abs(vals[0, 0] - 1.0) > ANCHOR_TOL:
            raise VerificationError("Lambda(0, 0) must equal 1")
        if self.t_max >= 1:
            rows = np.arange(1, self.t_max + 1)
            if np.abs(vals[rows, 0]).max() > ANCHOR_TOL:
                raise VerificationError("Lambda(0, t) must vanish for t >= 1")
            if np.abs(vals[rows, rows]).max() > ANCHOR_TOL:
                raise VerificationError("Lambda(t, t) must vanish for t >= 1")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)


def lambda_value(theta: float, n: int, t: int, big_n: int) -> float:
    """Single kernel entry evaluated by its frequency sum.

    Lambda(n, t) = (1/N) [ (1 + (-1)^t)/2
                 + sum_{r=1}^{N-1} cos(pi(2n-t) r/N + omega (t-1)) / cos(omega) ].

    At theta = 0 with 2r = N the summand is a 0/0 limit; its value
    -(-1)^n (t - 1) (the limit of -(-1)^n sin(theta (t-1)) / sin(theta))
    is substituted so the sum stays exact over the whole theta range.
    """
    if not 0.0 <= theta <= HALF_PI:
        raise ParameterError(f"theta must lie in [0, pi/2], got {theta}")
    if not 0 <= n <= t:
        raise ParameterError(f"need 0 <= n <= t, got n={n}, t={t}")
    if big_n < t + 1:
        raise ParameterError(
            f"transform size must be at least t + 1 = {t + 1}, got {big_n}")
    r = np.arange(1, big_n)
    x = r / big_n
    omega = np.arcsin(math.cos(theta) * np.sin(np.pi * x))
    cosw = np.cos(omega)
    phase = np.pi * (2 * n - t) * x + omega * (t - 1)
    degenerate = (2 * r == big_n) & (theta == 0.0)
    safe = np.where(degenerate, 1.0, cosw)
    terms = np.cos(phase) / safe
    if np.any(degenerate):
        limit = -((-1.0) ** n) * (t - 1)
        terms = np.where(degenerate, limit, terms)
    even = 1.0 if t % 2 == 0 else 0.0
    return float((even + terms.sum()) / big_n)


def lambda_table_recursive(theta: float, t_max: int) -> LambdaTable:
    """Fill the kernel table from the two-step recursion.

    Rows 0 and 1 are the anchor values; every later row is one
    vectorized sweep of the recursion over the two rows above it.
    """
    if not 0.0 <= theta <= HALF_PI:
        raise ParameterError(f"theta must lie in [0, pi/2], got {theta}")
    if t_max < 0:
        raise ParameterError(f"t_max must be nonnegative, got {t_max}")
    ct = math.cos(theta)
    vals = np.zeros((t_max + 1, t_max + 1))
    vals[0, 0] = 1.0
    for t in range(2, t_max + 1):
        prev1 = vals[t - 1]
        prev2 = vals[t - 2]
        shifted1 = np.concatenate(([0.0], prev1[:-1]))
        shifted2 = np.concatenate(([0.0], prev2[:-1]))
        vals[t] = ct * (prev1 - shifted1) + shifted2
    return LambdaTable(theta=theta, t_max=t_max, values=vals)


def _row(table: LambdaTable, t: int) -> np.ndarray:
    if t > table.t_max:
        raise ParameterError(
            f"table covers t <= {table.t_max}, requested row {t}")
    return table.values[t]


def lambda_plus(table: LambdaTable, n, t: int):
    """Lambda+(n, t) = [Lambda(n+1, t+1) + Lambda(n, t+1)] / 2."""
    row = _row(table, t + 1)
    n = np.asarray(n)
    return 0.5 * (row[n + 1] + row[n])


def lambda_minus(table: LambdaTable, n, t: int):
    """Lambda-(n, t) = [Lambda(n+1, t+1) - Lambda(n, t+1)] / 2."""
    row = _row(table, t + 1)
    n = np.asarray(n)
    return 0.5 * (row[n + 1] - row[n])


def _first_step_amplitudes(params: CoinParameters) -> tuple[complex, complex]:
    """The two nonzero amplitudes one step in: psi0(0,1) and psi1(1,1)."""
    v0 = (params.cos_eta * params.cos_theta
          + params.exp_minus_ivarphi * params.sin_eta * params.sin_theta)
    v1 = (params.exp_plus_ivarphi * params.cos_eta * params.sin_theta
          - params.sin_eta * params.cos_theta)
    return v0, v1


def state_via_lambda(params: CoinParameters, t: int, table: LambdaTable) -> WalkerState:
    """Reconstruct the state at time t from a kernel table covering t + 1.

    Each component mixes only its own initial amplitude with the matching
    first-step amplitude; the cross coupling is entirely inside Lambda.
    """
    if table.theta != params.theta:
        raise ParameterError(
            f"table was built for theta={table.theta!r}, walk has theta={params.theta!r}")
    if t < 0:
        raise ParameterError(f"step count must be nonnegative, got {t}")
    if table.t_max < t + 1:
        raise ParameterError(
            f"table must cover t + 1 = {t + 1}, covers {table.t_max}")
    v0, v1 = _first_step_amplitudes(params)
    n = np.arange(t + 1)
    lam = table.values[t, n]
    psi0 = params.cos_eta * lam + v0 * table.values[t + 1, n + 1]
    psi1 = params.sin_eta * lam + v1 * table.values[t + 1, n]
    return WalkerState(t=t, amp0=psi0, amp1=psi1)


def pmf_via_lambda(params: CoinParameters, t: int, table: LambdaTable) -> PmfSeries:
    """Mass function assembled from Lambda and Lambda+/- without amplitudes.

    rho = L^2 + Lp^2 + Lm^2 + 2 cos(theta) L Lm
        + 2 [cos(2 eta) cos(2 theta) + sin(2 eta) sin(2 theta) cos(varphi)] Lp Lm
        + 2 [cos(2 eta) cos(theta)   + sin(2 eta) sin(theta)   cos(varphi)] L Lp

    The form is a sum of squared moduli, so analytic values are
    nonnegative; rounding at exact zeros of the mass function may dip a
    hair below zero and is clipped, anything worse raises.
    """
    if table.theta != params.theta:
        raise ParameterError(
            f"table was built for theta={table.theta!r}, walk has theta={params.theta!r}")
    if table.t_max < t + 1:
        raise ParameterError(
            f"table must cover t + 1 = {t + 1}, covers {table.t_max}")
    n = np.arange(t + 1)
    lam = table.values[t, n]
    lam_p = lambda_plus(table, n, t)
    lam_m = lambda_minus(table, n, t)
    cos2e = math.cos(2.0 * params.eta)
    sin2e = math.sin(2.0 * params.eta)
    cos2t = math.cos(2.0 * params.theta)
    sin2t = math.sin(2.0 * params.theta)
    values = (lam ** 2 + lam_p ** 2 + lam_m ** 2
              + 2.0 * params.cos_theta * lam * lam_m
              + 2.0 * (cos2e * cos2t + sin2e * sin2t * params.cos_varphi) * lam_p * lam_m
              + 2.0 * (cos2e * params.cos_theta + sin2e * params.sin_theta * params.cos_varphi)
              * lam * lam_p)
    low = float(values.min())
    if low < -1e-14:
        raise VerificationError(
            f"kernel mass function went negative by {low:.3e}")
    return PmfSeries(t=t, values=np.maximum(values, 0.0), method="lambda")
