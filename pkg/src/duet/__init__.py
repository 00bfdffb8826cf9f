"""Two damped quantum oscillators between two heat baths: exact stationary
state from linear response, Gaussian entanglement measures and a finite-bath
cross-check."""

from .bath import BathSpec, effective_temperature, force_noise_spectrum, spectral_density
from .covariance import CovarianceMatrix, interaction_coordinate_variance, stationary_covariance
from .errors import ConfigError, ConvergenceError, DuetError, PhysicalityError, SingularResponseError
from .gaussian import (
    duan_simon_separable,
    entropies,
    epr_pair,
    logarithmic_negativity,
    mutual_information,
    ppt_hermitian_min_eigenvalue,
    symplectic_eigenvalues,
    williamson,
)
from .quadrature import QuadratureConfig
from .response import OscillatorPair, evaluate_response, lossless_eigenfrequencies
from .spectra import cross_spectrum, fd_residual, heat_current_spectrum, net_heat_current

__version__ = "0.1.0"
