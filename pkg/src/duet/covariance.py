"""Stationary covariance matrix by adaptive frequency quadrature."""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ConvergenceError, PhysicalityError
from .gaussian import physical_min_eigenvalue
from .quadrature import QuadratureConfig, integrate_frequency
from .response import evaluate_response
from .spectra import COORDS, cross_spectrum, noise_spectra

_IU = np.triu_indices(4)


@dataclass(frozen=True)
class CovarianceMatrix:
    C: np.ndarray                 # symmetric 4x4 over (x, p_x, y, p_y)
    error: np.ndarray = None      # entrywise quadrature error estimate
    quad: QuadratureConfig = None

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.C, dtype=dtype)

    def entry(self, a, b):
        return self.C[COORDS.index(a), COORDS.index(b)]

    @property
    def A(self):
        return self.C[:2, :2]

    @property
    def B(self):
        return self.C[2:, 2:]

    @property
    def cross(self):
        return self.C[:2, 2:]


def _check_damped(baths):
    if not (baths[0].gamma > 0 and baths[1].gamma > 0):
        raise ConfigError("a stationary state needs gamma1 > 0 and gamma2 > 0")


def _sym(upper):
    M = np.zeros((4, 4))
    M[_IU] = upper
    return M + np.triu(M, 1).T


def stationary_covariance(pair, baths, quad=None, check=True):
    """C_AB = int_0^inf dw/2pi Re S_AB(w), all ten independent entries at once."""
    _check_damped(baths)
    quad = (quad or QuadratureConfig()).resolved(pair, baths)

    def f(w):
        S = cross_spectrum(pair, baths, w).S
        return S[:, _IU[0], _IU[1]].real / (2.0 * np.pi)

    res = integrate_frequency(f, quad)
    C = _sym(res.value)
    err = _sym(res.error)
    cov = CovarianceMatrix(C, err, quad)
    if check:
        # entries that vanish by symmetry are integrated anyway and must come out ~0
        for a in (0, 2):
            scale = np.sqrt(C[a, a] * C[a + 1, a + 1])
            bound = max(10 * err[a, a + 1], quad.abs_tol, 1e-10 * scale)
            if abs(C[a, a + 1]) > bound:
                raise ConvergenceError(
                    f"<{COORDS[a]},{COORDS[a + 1]}> = {C[a, a + 1]:.3g} should vanish; "
                    "quadrature misconfigured"
                )
        lo = physical_min_eigenvalue(C)
        if lo < -1e-8:
            raise PhysicalityError(
                f"covariance violates the uncertainty relation (min eigenvalue {lo:.3g}); "
                "quadrature misconfigured"
            )
    return cov


def interaction_coordinate_variance(pair, baths, quad=None, full_output=False):
    """<(x - y)^2> from its own spectral integrand."""
    _check_damped(baths)
    quad = (quad or QuadratureConfig()).resolved(pair, baths)

    def f(w):
        r = evaluate_response(pair, baths, w)
        SF = noise_spectra(baths, w)
        a1 = np.abs((r.K2 - pair.lam) / r.D) ** 2
        a2 = np.abs((r.K1 - pair.lam) / r.D) ** 2
        return ((a1 * SF[:, 0] + a2 * SF[:, 1]) / (2.0 * np.pi))[:, None]

    res = integrate_frequency(f, quad)
    if full_output:
        return float(res.value[0]), float(res.error[0])
    return float(res.value[0])
