"""Walk instance definitions: coin parameters, coin matrix, walker states.

The walker lives on sites n = 0, 1, 2, ... and carries a two-state
chirality qubit.  Each time step applies a 2x2 unitary coin to the qubit
and then shifts the |1> component one site to the right while the |0>
component stays put.  After t steps the support is exactly {0, ..., t}.
The conventional two-directional walk is recovered by re-indexing sites
with m = 2n - t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError

HALF_PI = math.pi / 2

#: Tolerance on the total probability carried by a stored wave function.
NORM_TOL = 1e-12

#: Tolerance on unitarity of a stored coin matrix.
UNITARITY_TOL = 1e-14


def _checked_angle(name: str, value: float, upper: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ParameterError(f"{name} must be finite, got {value!r}")
    if value < 0.0 or value > upper:
        raise ParameterError(
            f"{name} must lie in [0, {upper:.17g}], got {value:.17g}")
    return value


@dataclass(frozen=True)
class CoinParameters:
    """The angle triple (theta, varphi, eta) defining a walk instance.

    theta in [0, pi/2] sets the coin bias, varphi in [0, pi] its phase,
    and eta in [0, pi/2] the initial chirality superposition.  The two
    residual gauge phases of the general coin and initial state are fixed
    to zero and are not representable.  Angles outside the reduced ranges
    are rejected rather than normalized, so every instance corresponds to
    the canonical gauge.

    Sines and cosines of the three angles are computed once here and
    reused by the solvers, keeping transcendental calls out of inner
    loops.  Instances are immutable and safe to share across threads.
    """

    theta: float
    varphi: float
    eta: float
    cos_theta: float = field(init=False, repr=False, compare=False)
    sin_theta: float = field(init=False, repr=False, compare=False)
    cos_varphi: float = field(init=False, repr=False, compare=False)
    sin_varphi: float = field(init=False, repr=False, compare=False)
    cos_eta: float = field(init=False, repr=False, compare=False)
    sin_eta: float = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        set_ = object.__setattr__
        set_(self, "theta", _checked_angle("theta", self.theta, HALF_PI))
        set_(self, "varphi", _checked_angle("varphi", self.varphi, math.pi))
        set_(self, "eta", _checked_angle("eta", self.eta, HALF_PI))
        set_(self, "cos_theta", math.cos(self.theta))
        set_(self, "sin_theta", math.sin(self.theta))
        set_(self, "cos_varphi", math.cos(self.varphi))
        set_(self, "sin_varphi", math.sin(self.varphi))
        set_(self, "cos_eta", math.cos(self.eta))
        set_(self, "sin_eta", math.sin(self.eta))

    @property
    def exp_plus_ivarphi(self) -> complex:
        return complex(self.cos_varphi, self.sin_varphi)

    @property
    def exp_minus_ivarphi(self) -> complex:
        return complex(self.cos_varphi, -self.sin_varphi)


def _readonly_complex(values, length: int, what: str) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128, copy=True).reshape(-1)
    if arr.size != length:
        raise ParameterError(
            f"{what} must have length {length}, got {arr.size}")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ParameterError(f"{what} contains non-finite amplitudes")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class CoinMatrix:
    """A 2x2 unitary coin, validated to unitarity at construction."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        mat = np.array(self.matrix, dtype=np.complex128, copy=True)
        if mat.shape != (2, 2):
            raise ParameterError(f"coin matrix must be 2x2, got {mat.shape}")
        if not np.all(np.isfinite(mat.real)) or not np.all(np.isfinite(mat.imag)):
            raise ParameterError("coin matrix contains non-finite entries")
        defect = np.abs(mat.conj().T @ mat - np.eye(2)).max()
        if defect > UNITARITY_TOL:
            raise ParameterError(
                f"coin matrix is not unitary (defect {defect:.3e})")
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)

    @property
    def u00(self) -> complex:
        return complex(self.matrix[0, 0])

    @property
    def u01(self) -> complex:
        return complex(self.matrix[0, 1])

    @property
    def u10(self) -> complex:
        return complex(self.matrix[1, 0])

    @property
    def u11(self) -> complex:
        return complex(self.matrix[1, 1])


@dataclass(frozen=True)
class WalkerState:
    """Two-component complex wave function over sites 0..t at fixed time t.

    amp0 holds the stay component, amp1 the move component.  Both arrays
    have length t + 1 and total probability 1 within NORM_TOL; the
    constructor rejects anything else.  Arrays are stored read-only.
    """

    t: int
    amp0: np.ndarray
    amp1: np.ndarray

    def __post_init__(self) -> None:
        if self.t < 0 or self.t != int(self.t):
            raise ParameterError(f"time step must be a nonnegative integer, got {self.t}")
        object.__setattr__(self, "t", int(self.t))
        n = self.t + 1
        object.__setattr__(self, "amp0", _readonly_complex(self.amp0, n, "amp0"))
        object.__setattr__(self, "amp1", _readonly_complex(self.amp1, n, "amp1"))
        err = abs(self.norm() - 1.0)
        if err > NORM_TOL:
            raise ParameterError(
                f"state is not normalized: |sum(rho) - 1| = {err:.3e}")

    def norm(self) -> float:
        """Total probability carried by the state."""
        return float(np.sum(np.abs(self.amp0) ** 2 + np.abs(self.amp1) ** 2))


def make_coin(params: CoinParameters) -> CoinMatrix:
    """Build the reduced-gauge coin for a parameter triple.

    Entries are [[cos(theta), e^{-i varphi} sin(theta)],
                 [e^{i varphi} sin(theta), -cos(theta)]].
    """
    c, s = params.cos_theta, params.sin_theta
    mat = np.array(
        [[c, params.exp_minus_ivarphi * s],
         [params.exp_plus_ivarphi * s, -c]],
        dtype=np.complex128)
    return CoinMatrix(mat)


def coin_from_axis(params: CoinParameters) -> np.ndarray:
    """Coin matrix assembled from its Bloch-axis decomposition.

    (theta, varphi) are the spherical angles of a unit vector u; the coin
    equals the Pauli vector projected onto u:
    sin(theta)cos(varphi) s1 + sin(theta)sin(varphi) s2 + cos(theta) s3.
    Kept as an independent construction route for cross-checking
    make_coin; returns a bare array, not a CoinMatrix.
    """
    s1 = np.array([[0, 1], [1, 0]], dtype=np.complex128)
    s2 = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
    s3 = np.array([[1, 0], [0, -1]], dtype=np.complex128)
    return (params.sin_theta * params.cos_varphi * s1
            + params.sin_theta * params.sin_varphi * s2
            + params.cos_theta * s3)


def make_initial_state(params: CoinParameters) -> WalkerState:
    """Walker localized at the origin with qubit (cos(eta), sin(eta))."""
    return WalkerState(
        t=0,
        amp0=np.array([params.cos_eta], dtype=np.complex128),
        amp1=np.array([params.sin_eta], dtype=np.complex128),
    )


def to_bidirectional(state: WalkerState) -> dict[int, tuple[complex, complex]]:
    """Re-index a unidirectional state onto the two-directional lattice.

    The amplitude at unidirectional site n appears at site m = 2n - t, so
    the support becomes the arithmetic progression {-t, -t+2, ..., t}
    sharing the parity of t.  The mapping is a bijection; no amplitudes
    are combined or altered.
    """
    t = state.t
    return {
        2 * n - t: (complex(state.amp0[n]), complex(state.amp1[n]))
        for n in range(t + 1)
    }
