"""Frequency-domain response of the coupled pair.

The equations of motion in Fourier space read K(w) (x, y)^T = (F1, F2)^T with

    K = [[K1, -lam], [-lam, K2]],   K_i = -m_i w^2 - i w mu_i(w) + k_i',

where k_i' = k_i + lam. The response matrix is R = K^{-1}.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, SingularResponseError


@dataclass(frozen=True)
class OscillatorPair:
    m1: float
    m2: float
    k1: float
    k2: float
    lam: float

    def __post_init__(self):
        if not (self.m1 > 0 and self.m2 > 0):
            raise ConfigError("masses must be positive")
        if not (self.k1 > 0 and self.k2 > 0):
            raise ConfigError("spring constants must be positive")
        if not self.lam**2 < self.k1p * self.k2p:
            raise ConfigError(
                f"stability condition lam^2 < k1' k2' violated (lam={self.lam})"
            )

    @classmethod
    def from_frequencies(cls, omega10=1.0, omega20=1.0, lam=0.0, m1=1.0, m2=1.0):
        return cls(m1, m2, m1 * omega10**2, m2 * omega20**2, lam)

    @property
    def k1p(self):
        return self.k1 + self.lam

    @property
    def k2p(self):
        return self.k2 + self.lam

    @property
    def omega10(self):
        return np.sqrt(self.k1 / self.m1)

    @property
    def omega20(self):
        return np.sqrt(self.k2 / self.m2)

    @property
    def omega1(self):
        """Shifted frequency sqrt(k1'/m1)."""
        return np.sqrt(self.k1p / self.m1)

    @property
    def omega2(self):
        return np.sqrt(self.k2p / self.m2)

    @property
    def g2(self):
        return self.lam / np.sqrt(self.m1 * self.m2)

    def with_coupling(self, lam):
        return OscillatorPair(self.m1, self.m2, self.k1, self.k2, lam)


@dataclass(frozen=True)
class ResponseEval:
    omega: np.ndarray
    K1: np.ndarray
    K2: np.ndarray
    D: np.ndarray
    R: np.ndarray  # shape omega.shape + (2, 2)
    lam: float

    @property
    def K(self):
        out = np.empty(self.R.shape, dtype=complex)
        out[..., 0, 0] = self.K1
        out[..., 1, 1] = self.K2
        out[..., 0, 1] = out[..., 1, 0] = -self.lam
        return out


def inverse_susceptibilities(pair, baths, omega):
    w = np.asarray(omega, dtype=float)
    b1, b2 = baths
    K1 = -pair.m1 * w**2 - 1j * w * b1.mu(w) + pair.k1p
    K2 = -pair.m2 * w**2 - 1j * w * b2.mu(w) + pair.k2p
    return K1, K2


def evaluate_response(pair, baths, omega):
    w = np.asarray(omega, dtype=float)
    K1, K2 = inverse_susceptibilities(pair, baths, w)
    D = K1 * K2 - pair.lam**2
    if np.any(D == 0):
        raise SingularResponseError(
            "D(omega) = 0 on the real axis; steady state needs dissipation"
        )
    R = np.empty(w.shape + (2, 2), dtype=complex)
    R[..., 0, 0] = K2 / D
    R[..., 1, 1] = K1 / D
    R[..., 0, 1] = R[..., 1, 0] = pair.lam / D
    return ResponseEval(w, K1, K2, D, R, pair.lam)


def lossless_eigenfrequencies(pair):
    """Normal-mode frequencies (omega_plus, omega_minus) without damping."""
    w1s, w2s = pair.k1p / pair.m1, pair.k2p / pair.m2
    root = np.sqrt((w1s - w2s) ** 2 + 4.0 * pair.g2**2)
    wp2 = 0.5 * (w1s + w2s) + 0.5 * root
    wm2 = 0.5 * (w1s + w2s) - 0.5 * root
    return float(np.sqrt(wp2)), float(np.sqrt(wm2))


def rwa_eigenfrequencies(pair, baths):
    """Secular (near-resonant) complex eigenfrequencies (omega_plus, omega_minus).

    Valid only near resonance; no regime check is done here.
    """
    w1, w2 = pair.omega1, pair.omega2
    g1 = baths[0].mu(w1) / pair.m1
    g2 = baths[1].mu(w2) / pair.m2
    O1 = w1 - 0.5j * g1
    O2 = w2 - 0.5j * g2
    gr = pair.lam / np.sqrt(pair.m1 * pair.m2 * w1 * w2)
    root = np.sqrt((O1 - O2) ** 2 + gr**2)
    # keep the branch that reduces to (O1, O2) ordering by real part
    if root.real < 0:
        root = -root
    return complex(0.5 * (O1 + O2) + 0.5 * root), complex(0.5 * (O1 + O2) - 0.5 * root)


def determinant(pair, baths, z):
    """D at complex frequency z (Drude-type mu continues analytically)."""
    z = np.asarray(z, dtype=complex)
    b1, b2 = baths
    K1 = -pair.m1 * z**2 - 1j * z * b1.mu(z) + pair.k1p
    K2 = -pair.m2 * z**2 - 1j * z * b2.mu(z) + pair.k2p
    return K1 * K2 - pair.lam**2


def find_mode(pair, baths, seed, tol=1e-13, maxiter=100):
    """Complex Newton root of D near ``seed`` (derivative by central difference)."""
    z = complex(seed)
    for _ in range(maxiter):
        f = determinant(pair, baths, z)
        h = 1e-6 * max(1.0, abs(z))
        df = (determinant(pair, baths, z + h) - determinant(pair, baths, z - h)) / (2 * h)
        step = f / df
        z -= step
        if abs(step) < tol * max(1.0, abs(z)):
            return z
    raise SingularResponseError(f"Newton iteration for a root of D did not converge from {seed}")


def normal_modes(pair, baths):
    """Damped normal-mode frequencies (Re > 0 branch), seeded by the secular values."""
    wp, wm = rwa_eigenfrequencies(pair, baths)
    return find_mode(pair, baths, wp), find_mode(pair, baths, wm)


def count_upper_half_plane_zeros(pair, baths, radius=None, n=20000):
    """Argument-principle count of zeros of D in a rectangle of the upper half plane.

    The rectangle spans [-W, W] x [eps, W] with W = radius.
    """
    if radius is None:
        wp, _ = lossless_eigenfrequencies(pair)
        radius = 10.0 * wp
    eps = 1e-9 * radius
    corners = [complex(-radius, eps), complex(radius, eps),
               complex(radius, radius), complex(-radius, radius)]
    # avoid poles of mu: Drude pole at z = -i/tau_c lies in the lower half plane
    phase = 0.0
    for a, b in zip(corners, corners[1:] + corners[:1]):
        t = np.linspace(0.0, 1.0, n)
        vals = determinant(pair, baths, a + (b - a) * t)
        phase += np.sum(np.angle(vals[1:] / vals[:-1]))
    return int(round(phase / (2 * np.pi)))


def absorption_spectrum(pair, baths, omega, drive_weights=(1.0, 0.0)):
    """Time-averaged absorbed power per unit drive weights |f1|^2, |f2|^2."""
    f1, f2 = drive_weights
    if f1 < 0 or f2 < 0:
        raise ConfigError("drive weights must be non-negative")
    r = evaluate_response(pair, baths, omega)
    w = r.omega
    return w * f1 * np.imag(r.K2 / r.D) + w * f2 * np.imag(r.K1 / r.D)
