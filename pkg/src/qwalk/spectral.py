"""Exact solvers in the frequency domain.

Two independent routes to the same wave function:

* closed_form_state evaluates the explicit trigonometric sums for
  psi0(n, t) and psi1(n, t) directly in the site domain;
* spectral_evolve solves the one-step recursion in the Fourier domain,
  where it diagonalizes into two unimodular eigenphases, and
  inverse_transform brings the result back to sites.

Both accept any transform size N >= t + 1 and give the same state.  The
transform runs through the in-repo radix-2 FFT when N is a power of two
and through the direct O(N^2) sum otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, VerificationError
from .fourier import transform
from .model import HALF_PI, CoinParameters, WalkerState

#: Components of the inverse transform beyond site t must vanish below this.
TAIL_TOL = 1e-10


def pow2_size(t: int) -> int:
    """Smallest power of two strictly greater than t."""
    if t < 0:
        raise ParameterError(f"step count must be nonnegative, got {t}")
    return 1 << int(t).bit_length()


def omega_of(theta: float, x):
    """Frequency angle omega(x) = arcsin(cos(theta) sin(pi x)).

    This is the unique solution in [0, pi/2]; its cosine never vanishes
    except at theta = 0, x = 1/2.  Accepts a scalar or an array of
    frequencies x in [0, 1).
    """
    if not 0.0 <= theta <= HALF_PI:
        raise ParameterError(f"theta must lie in [0, pi/2], got {theta}")
    xs = np.asarray(x, dtype=np.float64)
    if np.any(xs < 0.0) or np.any(xs >= 1.0):
        raise ParameterError("frequency x must lie in [0, 1)")
    result = np.arcsin(math.cos(theta) * np.sin(np.pi * xs))
    return float(result) if np.isscalar(x) else result


def phase_phi(nu: float, x, theta: float):
    """Oscillation phase phi(nu, x) = pi (2 nu - 1) x + omega(x)."""
    if not 0.0 <= nu <= 1.0:
        raise ParameterError(f"nu must lie in [0, 1], got {nu}")
    xs = np.asarray(x, dtype=np.float64)
    result = np.pi * (2.0 * nu - 1.0) * xs + omega_of(theta, xs)
    return float(result) if np.isscalar(x) else result


def eigenphases(theta: float, x):
    """One-step eigenvalues lam+ = e^{-i(omega - pi x)}, lam- = -e^{i(omega + pi x)}.

    Both are unimodular for every frequency, and their product is
    -e^{2i pi x}.
    """
    omega = omega_of(theta, x)
    xs = np.asarray(x, dtype=np.float64)
    lam_p = np.exp(-1j * (omega - np.pi * xs))
    lam_m = -np.exp(1j * (omega + np.pi * xs))
    if np.isscalar(x):
        return complex(lam_p), complex(lam_m)
    return lam_p, lam_m


def _check_transform_size(t: int, big_n: int | None) -> int:
    if t < 0:
        raise ParameterError(f"step count must be nonnegative, got {t}")
    if big_n is None:
        return t + 1
    big_n = int(big_n)
    if big_n < t + 1:
        raise ParameterError(
            f"transform size must be at least t + 1 = {t + 1}, got {big_n}")
    return big_n


def closed_form_state(params: CoinParameters, t: int, big_n: int | None = None) -> WalkerState:
    """Evaluate the explicit trigonometric sums for the wave function.

    For each component the r = 0 mode contributes a parity term and the
    modes r = 1..N-1 contribute cosines of pi(2n - t) r/N + omega t,
    weighted by 1 +/- cos(theta)cos(pi r/N)/cos(omega) on the diagonal
    channels and sin(theta)/cos(omega) on the cross channels.  At the
    half frequency 2r = N those weights are evaluated in fused form
    (the ratio is exactly 0 and sin(theta)/cos(omega) exactly 1, since
    cos(omega) = sin(theta) there), which keeps the sums finite for all
    theta including 0.  The result is independent of the choice of
    N >= t + 1.
    """
    big_n = _check_transform_size(t, big_n)
    ct, st = params.cos_theta, params.sin_theta
    r = np.arange(1, big_n)
    x = r / big_n
    omega = np.arcsin(ct * np.sin(np.pi * x))
    cosw = np.cos(omega)
    half = 2 * r == big_n
    safe = np.where(half, 1.0, cosw)
    ratio = np.where(half, 0.0, ct * np.cos(np.pi * x) / safe)
    cross = np.where(half, 1.0, st / safe)

    n = np.arange(t + 1)
    phase = np.pi * np.outer(2 * n - t, x) + omega * t
    cos_phase = np.cos(phase)
    sin_phase = np.sin(phase)
    cos_px = np.cos(np.pi * x)
    sin_px = np.sin(np.pi * x)

    sum_stay = cos_phase @ (1.0 + ratio)
    sum_move = cos_phase @ (1.0 - ratio)
    # cos(phase +/- pi x) expanded so only two trig matrices are needed
    cross_cos = cos_phase @ (cross * cos_px)
    cross_sin = sin_phase @ (cross * sin_px)
    sum_fwd = cross_cos - cross_sin
    sum_bwd = cross_cos + cross_sin

    even = 1.0 if t % 2 == 0 else 0.0
    odd = 1.0 - even
    ce, se = params.cos_eta, params.sin_eta
    psi0 = (ce / big_n) * (even + odd * ct + sum_stay) \
        + (params.exp_minus_ivarphi * se / big_n) * (odd * st + sum_fwd)
    psi1 = (params.exp_plus_ivarphi * ce / big_n) * (odd * st + sum_bwd) \
        + (se / big_n) * (even - odd * ct + sum_move)
    return WalkerState(t=t, amp0=psi0, amp1=psi1)


@dataclass(frozen=True)
class SpectralSlice:
    """Fourier-domain amplitudes over frequencies r = 0..N-1 at fixed time."""

    t: int
    big_n: int
    tilde0: np.ndarray
    tilde1: np.ndarray

    def __post_init__(self) -> None:
        if self.big_n < self.t + 1:
            raise ParameterError(
                f"transform size must be at least t + 1 = {self.t + 1}, got {self.big_n}")
        for name in ("tilde0", "tilde1"):
            arr = np.array(getattr(self, name), dtype=np.complex128, copy=True)
            if arr.shape != (self.big_n,):
                raise ParameterError(
                    f"{name} must have length {self.big_n}, got {arr.shape}")
            if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
                raise ParameterError(f"{name} contains non-finite values")
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


def spectral_evolve(params: CoinParameters, t: int, big_n: int | None = None) -> SpectralSlice:
    """Closed-form Fourier-domain amplitudes after t steps.

    For each frequency the one-step matrix has eigenvalues lam+/-, and
    the t-step amplitudes are linear combinations of lam+^t and lam-^t
    divided by 2 cos(omega).  The powers are taken as exponentials of
    t * (omega -/+ pi r/N), with the integer part t*r reduced mod 2N
    exactly so large t costs no phase accuracy.  cos(omega) vanishes only
    at theta = 0 with 2r = N, where the one-step matrix is the identity
    and the amplitudes stay at their initial values; that limit is
    substituted directly.
    """
    big_n = _check_transform_size(t, big_n)
    ct, st = params.cos_theta, params.sin_theta
    r = np.arange(big_n)
    x = r / big_n
    omega = np.arcsin(ct * np.sin(np.pi * x))
    cosw = np.cos(omega)
    degenerate = (2 * r == big_n) & (params.theta == 0.0)
    safe = np.where(degenerate, 1.0, cosw)

    lam_p = np.exp(-1j * (omega - np.pi * x))
    lam_m = -np.exp(1j * (omega + np.pi * x))
    k = (t * r) % (2 * big_n)  # exact reduction of the pi*t*r/N angle
    pk = np.pi * k / big_n
    sign_t = -1.0 if t % 2 else 1.0
    lam_p_t = np.exp(1j * (pk - t * omega))
    lam_m_t = sign_t * np.exp(1j * (t * omega + pk))

    ce, se = params.cos_eta, params.sin_eta
    pref = np.exp(-1j * np.pi * x) / (2.0 * safe)
    tilde0 = pref * ((lam_p_t * (ct - lam_m) - lam_m_t * (ct - lam_p)) * ce
                     + (lam_p_t - lam_m_t) * params.exp_minus_ivarphi * st * se)
    tilde1 = pref * ((lam_p_t - lam_m_t) * params.exp_plus_ivarphi * st
                     * np.exp(2j * np.pi * x) * ce
                     + (lam_p_t * (lam_p - ct) + lam_m_t * (ct - lam_m)) * se)
    if np.any(degenerate):
        tilde0 = np.where(degenerate, ce, tilde0)
        tilde1 = np.where(degenerate, se, tilde1)
    return SpectralSlice(t=t, big_n=big_n, tilde0=tilde0, tilde1=tilde1)


def inverse_transform(spectral: SpectralSlice, tail_tol: float = TAIL_TOL) -> WalkerState:
    """Recover the site-domain state: psi(n) = (1/N) sum_r tilde(r) e^{-2i pi r n / N}.

    Components at n in {t+1, ..., N-1} must vanish; their largest modulus
    is checked against tail_tol and a violation raises, since it means
    the slice does not describe a walk of the claimed age.  Runs in
    O(N log N) when N is a power of two, O(N^2) otherwise.
    """
    n_inv = 1.0 / spectral.big_n
    psi0 = transform(spectral.tilde0, sign=-1) * n_inv
    psi1 = transform(spectral.tilde1, sign=-1) * n_inv
    t = spectral.t
    tail = 0.0
    if spectral.big_n > t + 1:
        tail = max(float(np.abs(psi0[t + 1:]).max()),
                   float(np.abs(psi1[t + 1:]).max()))
        if tail > tail_tol:
            raise VerificationError(
                f"inverse transform leaks {tail:.3e} beyond site t = {t}")
    return WalkerState(t=t, amp0=psi0[: t + 1], amp1=psi1[: t + 1])


def forward_transform(state: WalkerState, big_n: int | None = None) -> SpectralSlice:
    """Fourier transform of a site-domain state, zero-padded to length N.

    Uses the kernel e^{+2i pi r n / N} without normalization, matching
    what inverse_transform undoes.
    """
    big_n = _check_transform_size(state.t, big_n)
    padded0 = np.zeros(big_n, dtype=np.complex128)
    padded1 = np.zeros(big_n, dtype=np.complex128)
    padded0[: state.t + 1] = state.amp0
    padded1[: state.t + 1] = state.amp1
    return SpectralSlice(
        t=state.t,
        big_n=big_n,
        tilde0=transform(padded0, sign=1),
        tilde1=transform(padded1, sign=1),
    )
