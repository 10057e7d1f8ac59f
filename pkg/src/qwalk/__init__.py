"""Discrete-time unidirectional quantum walk with a general coin.

Four mutually cross-checking routes to the walker's wave function
(operator evolution, explicit trigonometric sums, Fourier-domain
eigenphases with fast inversion, and the real recursion kernel), the
physical observables built on them, and the long-time asymptotics with
the weak-limit density.

Submodules load lazily so the command-line entry point can pin thread
environment variables before numpy comes in.
"""

from importlib import import_module

__version__ = "0.1.0"

_SUBMODULES = frozenset({
    "asymptotics", "cli", "errors", "evolution", "fourier", "kernel",
    "model", "observables", "spectral",
})

_EXPORTS = {
    # model
    "CoinParameters": "model",
    "CoinMatrix": "model",
    "WalkerState": "model",
    "make_coin": "model",
    "coin_from_axis": "model",
    "make_initial_state": "model",
    "to_bidirectional": "model",
    # evolution
    "PmfSeries": "evolution",
    "step": "evolution",
    "evolve": "evolution",
    "iter_states": "evolution",
    "pmf": "evolution",
    # spectral
    "omega_of": "spectral",
    "phase_phi": "spectral",
    "eigenphases": "spectral",
    "closed_form_state": "spectral",
    "SpectralSlice": "spectral",
    "spectral_evolve": "spectral",
    "inverse_transform": "spectral",
    "forward_transform": "spectral",
    "pow2_size": "spectral",
    # kernel
    "LambdaTable": "kernel",
    "lambda_value": "kernel",
    "lambda_table_recursive": "kernel",
    "lambda_plus": "kernel",
    "lambda_minus": "kernel",
    "state_via_lambda": "kernel",
    "pmf_via_lambda": "kernel",
    # observables
    "probability_current": "observables",
    "probability_current_local": "observables",
    "continuity_residual": "observables",
    "position_mean": "observables",
    "ehrenfest_increment": "observables",
    "fair_coin_residual": "observables",
    "reflection_residual": "observables",
    "approximate_symmetry_eta": "observables",
    "classify_symmetry": "observables",
    "SymmetryVerdict": "observables",
    # asymptotics
    "allowed_interval": "asymptotics",
    "guarded_sites": "asymptotics",
    "SaddleData": "asymptotics",
    "saddle": "asymptotics",
    "asymptotic_state": "asymptotics",
    "rho_bar": "asymptotics",
    "rho_bounds": "asymptotics",
    "AsymptoticProfile": "asymptotics",
    "StationaryDensity": "asymptotics",
    "stationary_density": "asymptotics",
    "empirical_cdf_distance": "asymptotics",
    # errors
    "QwalkError": "errors",
    "ParameterError": "errors",
    "DomainError": "errors",
    "DegenerateCaseError": "errors",
    "VerificationError": "errors",
    "NormDriftError": "errors",
}

__all__ = sorted(_EXPORTS) + sorted(_SUBMODULES)


def __getattr__(name):
    if name in _SUBMODULES:
        return import_module(f".{name}", __name__)
    if name in _EXPORTS:
        module = import_module(f".{_EXPORTS[name]}", __name__)
        return getattr(module, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


def __dir__():
    return sorted(set(globals()) | set(__all__))
