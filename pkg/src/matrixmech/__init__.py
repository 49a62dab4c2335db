"""matrixmech: from classical periodic orbits to quantum transition matrices.

Builds the commutative algebra of finite Fourier series, checks and fits
transition-frequency tables, integrates 1D oscillatory Hamiltonian systems
(symplectically, with per-orbit action/angle/Fourier data), discretizes the
action into a level ladder, and quantizes observables into banded
transition matrices whose commutators reduce to (hbar/i) times the
classical Poisson bracket, exactly for the harmonic oscillator.
"""

__version__ = "0.1.0"

from . import errors
from ._kernels import available_backends, backend_name, select_backend
from .classical_dynamics import (
    HamiltonianSystem,
    Orbit,
    PhasePoint,
    PolynomialObservable,
    action,
    energy_at_action,
    find_orbit,
    frequency_from_action,
    hamiltonian_flow_step,
    harmonic_action_angle_map,
    identity_map,
    jacobian_check,
    orbit_fourier_coefficients,
    parse_potential,
    poisson_bracket,
    scale_map,
)
from .fourier_algebra import FourierSeries, evaluate, involution, multiply
from .quantization import (
    ActionGrid,
    HeisenbergMatrix,
    build_action_grid,
    ccr_residual,
    commutator,
    correspondence_check,
    evaluate_at_time,
    matrix_difference,
    quantize,
)
from .spectral_algebra import (
    FrequencyTable,
    RydbergModel,
    TermValues,
    balmer_frequency,
    balmer_table,
    check_ritz,
    fit_term_values,
    overtone_ratio,
)

__all__ = [
    "__version__",
    "errors",
    "available_backends",
    "backend_name",
    "select_backend",
    "FourierSeries",
    "evaluate",
    "multiply",
    "involution",
    "FrequencyTable",
    "TermValues",
    "RydbergModel",
    "check_ritz",
    "fit_term_values",
    "balmer_frequency",
    "balmer_table",
    "overtone_ratio",
    "HamiltonianSystem",
    "PhasePoint",
    "Orbit",
    "PolynomialObservable",
    "parse_potential",
    "hamiltonian_flow_step",
    "find_orbit",
    "action",
    "energy_at_action",
    "frequency_from_action",
    "orbit_fourier_coefficients",
    "poisson_bracket",
    "jacobian_check",
    "identity_map",
    "scale_map",
    "harmonic_action_angle_map",
    "ActionGrid",
    "HeisenbergMatrix",
    "build_action_grid",
    "quantize",
    "evaluate_at_time",
    "matrix_difference",
    "commutator",
    "ccr_residual",
    "correspondence_check",
]
