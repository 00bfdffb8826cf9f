"""Bosonic heat baths: spectral density, friction kernel, force noise.

Units: hbar = k_B = 1; masses in units of m1, frequencies in units of the
bare frequency omega_10 of the first oscillator.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class BathSpec:
    """Ohm-Drude bath.

    Subclasses may override :meth:`rho` and :meth:`mu` to describe other
    spectral densities; everything downstream only calls these two methods
    plus ``temperature``. ``mu`` must stay analytic in the upper half plane
    with ``mu(w).real == rho(w)`` on the real axis.
    """

    gamma: float
    tau_c: float
    temperature: float = 0.0

    def __post_init__(self):
        if not self.gamma >= 0:
            raise ConfigError(f"bath gamma must be >= 0, got {self.gamma}")
        if not self.tau_c > 0:
            raise ConfigError(f"bath tau_c must be > 0, got {self.tau_c}")
        if not self.temperature >= 0:
            raise ConfigError(f"bath temperature must be >= 0, got {self.temperature}")

    def rho(self, omega):
        omega = np.asarray(omega, dtype=float)
        return (self.gamma / self.tau_c**2) / (omega**2 + 1.0 / self.tau_c**2)

    def mu(self, omega):
        omega = np.asarray(omega)
        return self.gamma / (1.0 - 1j * omega * self.tau_c)

    def kernel(self, tau):
        """Time-domain friction kernel, causal damped exponential."""
        tau = np.asarray(tau, dtype=float)
        return np.where(tau >= 0, self.gamma / self.tau_c * np.exp(-np.abs(tau) / self.tau_c), 0.0)

    def rho_integral(self, omega_max):
        """Closed form of int_0^omega_max rho(w) dw."""
        return self.gamma / self.tau_c * np.arctan(omega_max * self.tau_c)

    def with_temperature(self, temperature):
        return type(self)(self.gamma, self.tau_c, temperature)


def spectral_density(bath, omega):
    return bath.rho(omega)


def friction_kernel_fourier(bath, omega):
    return bath.mu(omega)


def _omega_nbar(T, w):
    # omega * nbar(omega) = T * y / expm1(y), y = omega/T; tiny T may overflow y to inf
    if T == 0:
        return np.zeros_like(w)
    with np.errstate(over="ignore"):
        y = w / T
    out = np.empty_like(y)
    small = y < 1e-8
    ys = y[small]
    out[small] = T * (1.0 - 0.5 * ys + ys**2 / 12.0)
    out[~small] = w[~small] / np.expm1(np.minimum(y[~small], 700.0))
    return out


def effective_temperature(T, omega):
    """(omega/2) coth(omega/2T), including zero-point energy; T=0 gives |omega|/2."""
    w = np.abs(np.asarray(omega, dtype=float))
    # (w/2) coth(w/2T) = w/2 + w nbar(w), no overflow for w/T > 700
    return 0.5 * w + _omega_nbar(T, w)


def effective_temperature_derivative(T, omega):
    """d theta / dT = (omega/2T)^2 / sinh^2(omega/2T)."""
    w = np.abs(np.asarray(omega, dtype=float))
    if T == 0:
        return np.zeros_like(w)
    with np.errstate(over="ignore"):
        x = w / (2.0 * T)
    out = np.ones_like(x)
    small = x < 1e-4
    out[small] = 1.0 - x[small] ** 2 / 3.0
    xl = np.minimum(x[~small], 350.0)
    out[~small] = (xl / np.sinh(xl)) ** 2
    return out


def effective_temperature_difference(T1, T2, omega):
    """theta(T1) - theta(T2) without cancellation of the zero-point parts.

    The sign is that of T1 - T2 at every frequency, enforced exactly.
    """
    w = np.abs(np.asarray(omega, dtype=float))
    d = _omega_nbar(T1, w) - _omega_nbar(T2, w)
    if T1 >= T2:
        return np.maximum(d, 0.0)
    return np.minimum(d, 0.0)


def force_noise_spectrum(bath, omega):
    """S_F = 4 rho theta: one-sided (d omega / 2 pi over omega >= 0) convention."""
    return 4.0 * bath.rho(omega) * effective_temperature(bath.temperature, omega)
