"""Long-time behavior: stationary-phase approximation and the weak limit.

For t >> 1 at fixed nu = n/t the mass function concentrates on the cone

    (1 - cos(theta))/2 <= nu <= (1 + cos(theta))/2

and is approximated there by a smooth envelope times an oscillation whose
phase is stationary at a single interior frequency u0.  This module
evaluates the saddle data, the approximate wave functions, the
approximate mass function rho_bar with its envelope curves rho_sup,
rho_inf and their oscillation-free average rho_med, and the limiting
probability density of the rescaled position eps = (2 nu - 1)/cos(theta).

Everything here needs a genuine interior saddle, so theta = 0 and
theta = pi/2 are rejected as degenerate (the cone collapses to the
endpoint streams or to the midpoint).  The stationary density is the one
exception: it exists for every theta > 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import DegenerateCaseError, DomainError, ParameterError, VerificationError
from .evolution import PmfSeries
from .model import HALF_PI, CoinParameters

#: Median curve recomputed two ways must agree to this tolerance.
MEDIAN_TOL = 1e-14

#: The stationary density must integrate to 1 within this.
DENSITY_NORM_TOL = 1e-8


def allowed_interval(theta: float) -> tuple[float, float]:
    """The nu-range ((1 - cos(theta))/2, (1 + cos(theta))/2) of the cone."""
    if not 0.0 <= theta <= HALF_PI:
        raise ParameterError(f"theta must lie in [0, pi/2], got {theta}")
    ct = math.cos(theta)
    return (0.5 * (1.0 - ct), 0.5 * (1.0 + ct))


def guarded_sites(theta: float, t: int, guard: float | None = None) -> np.ndarray:
    """Integer sites whose nu = n/t stays clear of the cone edges.

    The envelope diverges like an inverse square root at the edges, so a
    guard band of width max(2/t, 1e-3) (overridable) is excluded on both
    sides.
    """
    if t < 1:
        raise ParameterError(f"need t >= 1, got {t}")
    if guard is None:
        guard = max(2.0 / t, 1e-3)
    if guard < 0.0:
        raise ParameterError(f"guard band must be nonnegative, got {guard}")
    lo, hi = allowed_interval(theta)
    n = np.arange(t + 1)
    nu = n / t
    return n[(nu >= lo + guard) & (nu <= hi - guard)]


def _require_interior_theta(theta: float) -> None:
    if theta <= 0.0 or theta >= HALF_PI:
        raise DegenerateCaseError(
            f"asymptotics need theta strictly inside (0, pi/2); "
            f"theta = {theta:.17g} has no interior saddle")


def _require_interior_nu(theta: float, nu) -> None:
    lo, hi = allowed_interval(theta)
    nus = np.asarray(nu, dtype=np.float64)
    if np.any(nus <= lo) or np.any(nus >= hi):
        raise DomainError(
            f"nu must lie strictly inside ({lo:.17g}, {hi:.17g})")


@dataclass(frozen=True)
class SaddleData:
    """Stationary-phase data at one relative position nu.

    u0 is the stationary frequency in (0, 1), omega0 the frequency angle
    there, phi0 the phase value and phi2 its (nonpositive) second
    derivative in u.
    """

    nu: float
    u0: float
    omega0: float
    phi0: float
    phi2: float


def saddle(theta: float, nu: float) -> SaddleData:
    """Solve the stationarity condition in closed form.

    The saddle satisfies

        cos(pi u0) = (1 - 2 nu) tan(theta) / (2 sqrt(nu(1 - nu)))
        sin(pi u0) = sqrt(cos^2(theta) - (2 nu - 1)^2)
                     / (2 cos(theta) sqrt(nu(1 - nu)))

    and the frequency angle there

        sin(omega0) = sqrt(cos^2(theta) - (2 nu - 1)^2) / (2 sqrt(nu(1 - nu)))
        cos(omega0) = sin(theta) / (2 sqrt(nu(1 - nu))).

    u0 is recovered from both sine and cosine so the branch is correct on
    either side of nu = 1/2; the phase is then
    phi0 = pi (2 nu - 1) u0 + omega0, with curvature
    phi2 = -4 pi^2 nu (1 - nu) sqrt(cos^2(theta) - (2 nu - 1)^2)/sin(theta).
    """
    _require_interior_theta(theta)
    _require_interior_nu(theta, nu)
    ct, st = math.cos(theta), math.sin(theta)
    spread = math.sqrt(nu * (1.0 - nu))
    depth = math.sqrt(ct * ct - (2.0 * nu - 1.0) ** 2)
    cos_pi_u0 = (1.0 - 2.0 * nu) * (st / ct) / (2.0 * spread)
    sin_pi_u0 = depth / (2.0 * ct * spread)
    u0 = math.atan2(sin_pi_u0, cos_pi_u0) / math.pi
    omega0 = math.atan2(depth / (2.0 * spread), st / (2.0 * spread))
    phi0 = math.pi * (2.0 * nu - 1.0) * u0 + omega0
    phi2 = -4.0 * math.pi ** 2 * nu * (1.0 - nu) * depth / st
    return SaddleData(nu=nu, u0=u0, omega0=omega0, phi0=phi0, phi2=phi2)


def _drift(params: CoinParameters) -> float:
    """cos(2 eta) cos(theta) + sin(2 eta) sin(theta) cos(varphi).

    Vanishing drift is the condition for the (approximately) symmetric
    envelope; it also equals the coin expectation in the initial state.
    """
    return (math.cos(2.0 * params.eta) * params.cos_theta
            + math.sin(2.0 * params.eta) * params.sin_theta * params.cos_varphi)


def _envelope_terms(params: CoinParameters, t: int, nus: np.ndarray):
    """Shared pieces of the asymptotic mass function on an array of nu.

    Returns (pref, base, amp, omega_angle, phi0) with

        rho_bar = pref * (base + amp * sin(2 phi0 t + omega_angle))
        rho_sup/inf = pref * (base +/- amp),   rho_med = pref * base.

    amp and omega_angle are the polar form of the two oscillation
    coefficients (the sin coefficient is the cosine component), so the
    quadrant of omega_angle is fixed by construction.
    """
    ct, st = params.cos_theta, params.sin_theta
    tan_t = st / ct
    cos2e = math.cos(2.0 * params.eta)
    sin2e = math.sin(2.0 * params.eta)
    skew = 2.0 * nus - 1.0
    depth2 = ct * ct - skew * skew
    depth = np.sqrt(depth2)
    spread2 = nus * (1.0 - nus)
    pref = st / (2.0 * math.pi * t * spread2 * depth)
    drift_full = cos2e + sin2e * tan_t * params.cos_varphi
    base = 1.0 - skew * drift_full
    coeff_sin = skew * (skew / ct ** 2 - drift_full)
    coeff_cos = skew * np.sqrt(1.0 - (skew / ct) ** 2) * (
        cos2e * tan_t - sin2e * params.cos_varphi)
    amp = np.hypot(coeff_sin, coeff_cos)
    omega_angle = np.arctan2(coeff_cos, coeff_sin)
    u0 = np.arctan2(depth, (1.0 - 2.0 * nus) * st) / math.pi
    omega0 = np.arctan2(depth, st)
    phi0 = math.pi * skew * u0 + omega0
    return pref, base, amp, omega_angle, phi0


def rho_bar(params: CoinParameters, t: int, n: int) -> float:
    """Asymptotic mass function at one site, oscillation included.

    rho_bar(n, t) = pref(nu) [ base(nu) + |R(nu)| sin(2 phi0(nu) t + Omega(nu)) ]

    where pref carries the inverse-square-root envelope, base the smooth
    drift term and |R|, Omega the polar form of the oscillation.
    """
    if t < 1:
        raise ParameterError(f"need t >= 1, got {t}")
    _require_interior_theta(params.theta)
    nu = n / t
    _require_interior_nu(params.theta, nu)
    nus = np.asarray([nu])
    pref, base, amp, omega_angle, phi0 = _envelope_terms(params, t, nus)
    value = pref * (base + amp * np.sin(2.0 * phi0 * t + omega_angle))
    return float(value[0])


@dataclass(frozen=True)
class AsymptoticProfile:
    """Envelope data on a grid of interior sites at one time.

    rho_inf <= rho_bar <= rho_sup pointwise, and rho_med is both the
    closed-form oscillation-free curve and the average of the two
    envelopes; the constructor re-checks both facts.
    """

    t: int
    nus: np.ndarray
    rho_bar: np.ndarray
    rho_sup: np.ndarray
    rho_inf: np.ndarray
    rho_med: np.ndarray
    r_mag: np.ndarray
    omega: np.ndarray

    def __post_init__(self) -> None:
        arrays = {}
        size = None
        for name in ("nus", "rho_bar", "rho_sup", "rho_inf", "rho_med",
                     "r_mag", "omega"):
            arr = np.array(getattr(self, name), dtype=np.float64, copy=True)
            if size is None:
                size = arr.size
            if arr.shape != (size,):
                raise ParameterError(f"{name} must have shape ({size},)")
            arr.flags.writeable = False
            arrays[name] = arr
            object.__setattr__(self, name, arr)
        if np.any(arrays["rho_inf"] > arrays["rho_bar"]) or \
                np.any(arrays["rho_bar"] > arrays["rho_sup"]):
            raise VerificationError("envelope ordering violated")
        med_err = np.abs(
            0.5 * (arrays["rho_sup"] + arrays["rho_inf"]) - arrays["rho_med"]).max(initial=0.0)
        if med_err > MEDIAN_TOL:
            raise VerificationError(
                f"median curve disagrees with envelope average by {med_err:.3e}")


def rho_bounds(params: CoinParameters, t: int, grid) -> AsymptoticProfile:
    """Envelope curves, median and oscillation data on a grid of sites.

    The median is evaluated directly from its closed form (pref * base)
    and checked against the average of the envelopes; the two must agree
    to MEDIAN_TOL.
    """
    if t < 1:
        raise ParameterError(f"need t >= 1, got {t}")
    _require_interior_theta(params.theta)
    sites = np.asarray(grid, dtype=np.int64)
    if sites.size == 0:
        raise ParameterError("grid must contain at least one site")
    nus = sites / t
    _require_interior_nu(params.theta, nus)
    pref, base, amp, omega_angle, phi0 = _envelope_terms(params, t, nus)
    bar = pref * (base + amp * np.sin(2.0 * phi0 * t + omega_angle))
    sup = pref * (base + amp)
    inf = pref * (base - amp)
    med = pref * base
    return AsymptoticProfile(
        t=t, nus=nus, rho_bar=bar, rho_sup=sup, rho_inf=inf, rho_med=med,
        r_mag=amp, omega=omega_angle)


def asymptotic_state(params: CoinParameters, t: int, n: int) -> tuple[complex, complex]:
    """Stationary-phase wave functions at one interior site.

    With x = phi0 t - pi/4 and the channel weights 2(1 - nu),
    2 sqrt(nu(1 - nu)) and 2 nu collapsing into the amplitudes below:

        psi0 ~ [cos(eta) sqrt(2(1-nu) sin(theta)/(pi nu depth)) cos(x)
               + e^{-i varphi} sin(eta) sqrt(2 sin(theta)/(pi depth))
                 cos(x + pi u0)] / sqrt(t)
        psi1 ~ [e^{i varphi} cos(eta) sqrt(2 sin(theta)/(pi depth))
                 cos(x - pi u0)
               + sin(eta) sqrt(2 nu sin(theta)/(pi (1-nu) depth)) cos(x)]
                 / sqrt(t)

    with depth = sqrt(cos^2(theta) - (2 nu - 1)^2).  Magnitudes scale as
    t^{-1/2} at fixed nu.
    """
    if t < 1:
        raise ParameterError(f"need t >= 1, got {t}")
    nu = n / t
    data = saddle(params.theta, nu)
    st = params.sin_theta
    depth = math.sqrt(params.cos_theta ** 2 - (2.0 * nu - 1.0) ** 2)
    x = data.phi0 * t - math.pi / 4.0
    stay = math.sqrt(2.0 * (1.0 - nu) * st / (math.pi * nu * depth))
    cross = math.sqrt(2.0 * st / (math.pi * depth))
    move = math.sqrt(2.0 * nu * st / (math.pi * (1.0 - nu) * depth))
    root_t = math.sqrt(t)
    psi0 = (params.cos_eta * stay * math.cos(x)
            + params.exp_minus_ivarphi * params.sin_eta * cross
            * math.cos(x + math.pi * data.u0)) / root_t
    psi1 = (params.exp_plus_ivarphi * params.cos_eta * cross
            * math.cos(x - math.pi * data.u0)
            + params.sin_eta * move * math.cos(x)) / root_t
    return complex(psi0), complex(psi1)


@dataclass(frozen=True)
class StationaryDensity:
    """Weak-limit density of the rescaled position eps = (2 nu - 1)/cos(theta).

    rho(eps) = sin(theta)/pi * [1 - eps * drift]
               / ((1 - eps^2 cos^2(theta)) sqrt(1 - eps^2))

    on (-1, 1), where drift = cos(2 eta) cos(theta)
    + sin(2 eta) sin(theta) cos(varphi) has modulus at most 1, making the
    density nonnegative and normalized.  theta = 0 collapses the law onto
    two endpoint masses; such an instance is returned flagged degenerate
    and refuses pointwise evaluation.
    """

    theta: float
    varphi: float
    eta: float
    drift: float
    degenerate: bool = False

    def _guard(self) -> None:
        if self.degenerate:
            raise DegenerateCaseError(
                "theta = 0 concentrates the limit law on endpoint masses; "
                "no density exists")

    def pdf(self, eps):
        """Density at eps strictly inside (-1, 1); scalar or array."""
        self._guard()
        values = np.asarray(eps, dtype=np.float64)
        if np.any(np.abs(values) >= 1.0):
            raise DomainError("eps must lie strictly inside (-1, 1)")
        ct = math.cos(self.theta)
        st = math.sin(self.theta)
        out = (st / math.pi) * (1.0 - values * self.drift) / (
            (1.0 - (values * ct) ** 2) * np.sqrt(1.0 - values ** 2))
        return float(out) if np.isscalar(eps) else out

    def cdf(self, eps):
        """Distribution function, evaluated in closed form; clamps outside [-1, 1].

        The antiderivative splits into an even arctangent part and an odd
        correction proportional to the drift; both vanish appropriately
        at the endpoints so cdf(-1) = 0 and cdf(1) = 1 exactly.
        """
        self._guard()
        values = np.clip(np.asarray(eps, dtype=np.float64), -1.0, 1.0)
        ct = math.cos(self.theta)
        st = math.sin(self.theta)
        root = np.sqrt(np.maximum(1.0 - values ** 2, 0.0))
        main = 0.5 + np.arctan2(st * values, root) / math.pi
        if abs(ct) < 1e-9:
            correction = self.drift * root / (math.pi * st)
        else:
            correction = (self.drift / (math.pi * ct)) * np.arctan(ct * root / st)
        out = main + correction
        return float(out) if np.isscalar(eps) else out

    def integral(self, lo: float = -1.0, hi: float = 1.0) -> float:
        """Adaptive quadrature of the density over [lo, hi].

        Substituting eps = sin(u) removes the inverse-square-root
        endpoint singularity, leaving a smooth integrand for quad.
        """
        self._guard()
        if not -1.0 <= lo <= hi <= 1.0:
            raise DomainError("integration limits must satisfy -1 <= lo <= hi <= 1")
        ct = math.cos(self.theta)
        st = math.sin(self.theta)
        drift = self.drift

        def integrand(u: float) -> float:
            e = math.sin(u)
            return (st / math.pi) * (1.0 - e * drift) / (1.0 - (e * ct) ** 2)

        value, _ = quad(integrand, math.asin(lo), math.asin(hi), limit=200)
        return float(value)


def stationary_density(params: CoinParameters) -> StationaryDensity:
    """Weak-limit density for a walk instance; flagged degenerate at theta = 0."""
    return StationaryDensity(
        theta=params.theta,
        varphi=params.varphi,
        eta=params.eta,
        drift=_drift(params),
        degenerate=params.theta == 0.0,
    )


def empirical_cdf_distance(series: PmfSeries, density: StationaryDensity) -> float:
    """Kolmogorov-Smirnov distance between a finite-t law and the weak limit.

    Sites map to atoms at eps_n = (2 n/t - 1)/cos(theta) carrying the
    mass-function weights; the supremum distance of the resulting step
    function from the limiting cdf is attained at the atoms and is
    evaluated from both sides there.
    """
    if density.degenerate:
        raise DegenerateCaseError("no limiting density exists at theta = 0")
    ct = math.cos(density.theta)
    if abs(ct) < 1e-9:
        raise DegenerateCaseError(
            "theta = pi/2 sends every atom to eps = 0/0; the rescaling "
            "by cos(theta) is singular")
    t = series.t
    if t < 1:
        raise ParameterError("need at least one step for an empirical law")
    eps = (2.0 * np.arange(t + 1) / t - 1.0) / ct
    limit_cdf = density.cdf(eps)
    above = np.cumsum(series.values)
    below = np.concatenate(([0.0], above[:-1]))
    return float(np.maximum(np.abs(limit_cdf - above),
                            np.abs(limit_cdf - below)).max())
