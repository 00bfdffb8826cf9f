"""Symmetrised correlation spectra of the stationary state.

Convention: for observables A, B with Fourier responses alpha_i, beta_i to the
Langevin forces,

    S_AB(w) = sum_i conj(alpha_i(w)) beta_i(w) S_Fi(w),
    <A(t), B(t')> = int_0^inf dw/2pi Re[exp(i w (t - t')) S_AB(w)].

Momentum responses follow from p = m x_dot, i.e. a factor -i m w.
"""

from dataclasses import dataclass

import numpy as np

from .bath import (
    effective_temperature,
    effective_temperature_derivative,
    effective_temperature_difference,
    force_noise_spectrum,
)
from .errors import ConfigError
from .quadrature import QuadratureConfig, integrate_frequency
from .response import evaluate_response

COORDS = ("x", "p_x", "y", "p_y")


@dataclass(frozen=True)
class SpectralMatrix4:
    omega: np.ndarray
    S: np.ndarray  # omega.shape + (4, 4), Hermitian, basis (x, p_x, y, p_y)

    def entry(self, a, b):
        return self.S[..., COORDS.index(a), COORDS.index(b)]


def response_rows(pair, baths, omega):
    """Responses of (x, p_x, y, p_y) to (F1, F2): array omega.shape + (4, 2)."""
    r = evaluate_response(pair, baths, omega)
    w = r.omega
    G = np.empty(w.shape + (4, 2), dtype=complex)
    G[..., 0, :] = r.R[..., 0, :]
    G[..., 2, :] = r.R[..., 1, :]
    G[..., 1, :] = (-1j * pair.m1 * w)[..., None] * r.R[..., 0, :]
    G[..., 3, :] = (-1j * pair.m2 * w)[..., None] * r.R[..., 1, :]
    return G


def noise_spectra(baths, omega):
    w = np.asarray(omega, dtype=float)
    return np.stack([force_noise_spectrum(b, w) for b in baths], axis=-1)


def cross_spectrum(pair, baths, omega):
    """Full 4x4 cross-correlation spectrum; Hermitian PSD by construction."""
    w = np.asarray(omega, dtype=float)
    G = response_rows(pair, baths, w)
    SF = noise_spectra(baths, w)
    S = np.einsum("...ai,...bi,...i->...ab", G.conj(), G, SF)
    # exact Hermiticity
    S = 0.5 * (S + np.conj(np.swapaxes(S, -1, -2)))
    return SpectralMatrix4(w, S)


def heat_current_spectrum(pair, baths, omega):
    """Integrand (per d omega / 2 pi) of the net heat current from bath 1 to bath 2."""
    w = np.asarray(omega, dtype=float)
    r = evaluate_response(pair, baths, w)
    b1, b2 = baths
    dtheta = effective_temperature_difference(b1.temperature, b2.temperature, w)
    return 4.0 * pair.lam**2 * w**2 * b1.rho(w) * b2.rho(w) * dtheta / np.abs(r.D) ** 2


def heat_conductance_spectrum(pair, baths, omega):
    """Linear-response limit of the spectrum per unit temperature difference.

    Uses d theta / dT at the mean bath temperature.
    """
    w = np.asarray(omega, dtype=float)
    r = evaluate_response(pair, baths, w)
    b1, b2 = baths
    T = 0.5 * (b1.temperature + b2.temperature)
    dtheta = effective_temperature_derivative(T, w)
    return 4.0 * pair.lam**2 * w**2 * b1.rho(w) * b2.rho(w) * dtheta / np.abs(r.D) ** 2


def heat_current_cross_route(pair, baths, omega):
    """Same integrand from (lam/2) Re[S_{x p_y}/m2 - S_{p_x y}/m1]."""
    S = cross_spectrum(pair, baths, omega)
    val = S.entry("x", "p_y") / pair.m2 - S.entry("p_x", "y") / pair.m1
    return 0.5 * pair.lam * val.real


def net_heat_current(pair, baths, quad=None, route="spectral", full_output=False):
    """Stationary heat current Q_dot(1 -> 2) = int_0^inf dw/2pi of the spectrum.

    ``route`` selects the closed-form integrand ("spectral") or the
    cross-correlation one ("cross"). With ``full_output`` returns
    (value, error_estimate).
    """
    if baths[0].gamma <= 0 or baths[1].gamma <= 0:
        raise ConfigError("net heat current needs gamma1, gamma2 > 0")
    quad = (quad or QuadratureConfig()).resolved(pair, baths)
    integrand = {"spectral": heat_current_spectrum, "cross": heat_current_cross_route}[route]

    def f(w):
        return (integrand(pair, baths, w) / (2.0 * np.pi))[:, None]

    res = integrate_frequency(f, quad)
    if full_output:
        return float(res.value[0]), float(res.error[0])
    return float(res.value[0])


def power_balance(pair, baths, quad=None):
    """Stationary power flowing into oscillator 1, split by source.

    Returns a dict with the work of the coupling spring, the friction
    (dissipated) power and the work of the bath noise; they sum to zero.
    """
    quad = (quad or QuadratureConfig()).resolved(pair, baths)
    b1 = baths[0]

    def f(w):
        S = cross_spectrum(pair, baths, w)
        r = evaluate_response(pair, baths, w)
        spring = pair.lam * (S.entry("p_x", "y") - S.entry("p_x", "x")).real / pair.m1
        diss = -(w**2) * b1.rho(w) * S.entry("x", "x").real
        noise = w * (r.R[..., 0, 0]).imag * force_noise_spectrum(b1, w)
        return np.stack([spring, diss, noise], axis=-1) / (2.0 * np.pi)

    res = integrate_frequency(f, quad)
    return dict(zip(("spring", "dissipation", "langevin_work"), map(float, res.value)))


def levy_kosloff_sign(pair, temps):
    """Sign of exp(w20/T2) - exp(w10/T1), the secular-coupling prediction."""
    T1, T2 = temps
    if not (T1 > 0 and T2 > 0):
        raise ConfigError("Levy-Kosloff comparison needs T1, T2 > 0")
    a, b = pair.omega20 / T2, pair.omega10 / T1
    # compare exponents; exp is monotone
    return int(np.sign(a - b))


def fd_residual(pair, baths, omega, temperature=None):
    """Relative violation of S_ij = -2i (theta/w) [R_ji - conj(R_ij)], i,j in {x, y}.

    Normalised by max |S_ij|; defined as 0 at omega = 0. Unequal bath
    temperatures are rejected unless ``temperature`` names the single
    temperature to use on the response side.
    """
    b1, b2 = baths
    if temperature is None:
        if b1.temperature != b2.temperature:
            raise ConfigError("fluctuation-dissipation check needs equal bath temperatures")
        temperature = b1.temperature
    w = np.atleast_1d(np.asarray(omega, dtype=float))
    out = np.zeros(w.shape)
    nz = w != 0
    if not np.any(nz):
        return out if np.ndim(omega) else float(out[0])
    wn = w[nz]
    S = cross_spectrum(pair, baths, wn).S[..., ::2, ::2]
    R = evaluate_response(pair, baths, wn).R
    theta = effective_temperature(temperature, wn)
    rhs = (-2j * theta / wn)[:, None, None] * (np.swapaxes(R, -1, -2) - R.conj())
    diff = np.abs(S - rhs).max(axis=(-1, -2))
    scale = np.abs(S).max(axis=(-1, -2))
    out[nz] = diff / scale
    return out if np.ndim(omega) else float(out[0])
