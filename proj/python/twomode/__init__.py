"""Two-mode Kerr model: exact diagonalization, mean-field theory with a
symmetry-breaking field, and Gaussian entanglement dynamics.

Entropies are in nats.
"""

from ._core import (
    BogoliubovParams,
    CondensateSolution,
    ConfigError,
    ConvergenceError,
    ModelParams,
    PhaseClassification,
    __version__,
    bogoliubov_params,
    check_group,
    classify_phase,
    dynamical_entropy,
    fock_condensate_entropy,
    fock_oracle_entropy,
    run,
    squeezed_ground_entropy,
    stationary_amplitude,
)

__all__ = [
    "BogoliubovParams",
    "CondensateSolution",
    "ConfigError",
    "ConvergenceError",
    "ModelParams",
    "PhaseClassification",
    "__version__",
    "bogoliubov_params",
    "check_group",
    "classify_phase",
    "dynamical_entropy",
    "fock_condensate_entropy",
    "fock_oracle_entropy",
    "run",
    "squeezed_ground_entropy",
    "stationary_amplitude",
]
