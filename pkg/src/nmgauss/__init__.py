"""Non-Markovian dynamics of two-mode Gaussian states in bosonic baths.

The public API is re-exported here; see the submodules for details.
"""

from ._kernels import BACKEND
from .errors import (
    ConfigError,
    DomainError,
    IntegrationError,
    NmGaussError,
    NumericalDegeneracyError,
    QuadratureError,
    UndefinedMarkerError,
    UnphysicalStateError,
    UnsupportedFamilyError,
    UnsupportedInputError,
)
from .gaussian import (
    entropy_f,
    partial_transpose,
    symplectic_eigenvalues,
    thermal_state,
    twb_state,
    validate_physical,
)
from .markers import (
    DiscordOptions,
    classical_correlations,
    gaussian_discord,
    intensity_correlations,
    log_negativity,
    marker_sample,
    mutual_information,
)
from .oracles import discord_grid_oracle, ode_covariance, photon_statistics
from .propagation import (
    PropagatorMode,
    noise_block,
    propagate,
    propagate_common,
    propagate_independent,
    secular_integrals,
)
from .spectral import (
    BathSpec,
    SpectralFamily,
    coefficients,
    coefficients_closed_form,
    coefficients_quadrature,
    spectral_density,
)
from .sweep import SweepConfig, load_config, parse_config, run_sweep, verify_mode, write_csv

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
