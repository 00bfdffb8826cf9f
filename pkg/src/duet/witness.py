"""Frequency-resolved entanglement witnesses.

Spectra are reported in the rescaled frame x -> sqrt(k_i/w_i0) x,
p -> p / sqrt(m_i w_i0), which is canonical and gives both quadratures of
each oscillator the same units. ``rescaled=False`` returns raw-frame spectra.
The per-frequency optimal eigenvectors define a (generally non-causal)
linear filter; no causality constraint is imposed on them.
"""

import numpy as np

from .gaussian import J2, invariant_I4
from .spectra import cross_spectrum

_SECTOR = {"position": (0, 2), "momentum": (1, 3)}


def frame_scales(pair):
    """Diagonal of the rescaling over (x, p_x, y, p_y)."""
    w1, w2 = pair.omega10, pair.omega20
    return np.array([
        np.sqrt(pair.k1 / w1), 1.0 / np.sqrt(pair.m1 * w1),
        np.sqrt(pair.k2 / w2), 1.0 / np.sqrt(pair.m2 * w2),
    ])


def rescaled_spectrum(pair, baths, omega, rescaled=True):
    S = cross_spectrum(pair, baths, omega).S
    if rescaled:
        d = frame_scales(pair)
        S = S * d[:, None] * d[None, :]
    return S


def sector_matrix(pair, baths, omega, sector="position", rescaled=True):
    i, j = _SECTOR[sector]
    S = rescaled_spectrum(pair, baths, omega, rescaled)
    return S[..., [i, j], :][..., :, [i, j]]


def position_spectral_matrix(pair, baths, omega, rescaled=True):
    """Hermitian 2x2 [[S_xx, S_xy], [S_yx, S_yy]] per frequency."""
    return sector_matrix(pair, baths, omega, "position", rescaled)


def optimal_quadrature_spectra(pair, baths, omega, sector="position", rescaled=True):
    """(S_min, S_max, eigenvectors) of the 2x2 sector matrix at each frequency.

    Eigenvectors are columns, ordered like the eigenvalues.
    """
    M = sector_matrix(pair, baths, omega, sector, rescaled)
    vals, vecs = np.linalg.eigh(M)
    return vals[..., 0], vals[..., 1], vecs


def reference_spectra_T0(pair, baths, omega, sector="position", rescaled=True):
    """Spectra of (q1 + q2)/sqrt2 and (q1 - q2)/sqrt2 with both baths at T = 0."""
    cold = tuple(b.with_temperature(0.0) for b in baths)
    M = sector_matrix(pair, cold, omega, sector, rescaled)
    common = 0.5 * (M[..., 0, 0].real + M[..., 1, 1].real)
    cross = M[..., 0, 1].real
    return common + cross, common - cross


def quadratic_form_spectrum(pair, baths, omega, coeffs):
    """Spectrum of the fixed real combination sum_i coeffs_i q_i (raw frame)."""
    S = cross_spectrum(pair, baths, omega).S
    c = np.asarray(coeffs, dtype=float)
    return np.einsum("a,...ab,b->...", c, S, c).real


def epr_fixed_pair_spectra(pair, baths, omega, epr):
    """(S_QQ, S_PP) for the EPR coordinates returned by gaussian.epr_pair."""
    return (quadratic_form_spectrum(pair, baths, omega, epr.Qcoeffs),
            quadratic_form_spectrum(pair, baths, omega, epr.Pcoeffs))


def spectral_block_checks(pair, baths, omega):
    """Relative size of det A(w), det B(w), det C(w) and I4(w) of the spectral blocks.

    Each is normalised by the matching product of entry magnitudes, so values
    of order machine epsilon mean the quantity vanishes.
    """
    S = cross_spectrum(pair, baths, omega).S
    A, B, X = S[..., :2, :2], S[..., 2:, 2:], S[..., :2, 2:]

    def rel_det(M):
        num = np.abs(M[..., 0, 0] * M[..., 1, 1] - M[..., 0, 1] * M[..., 1, 0])
        den = np.abs(M[..., 0, 0] * M[..., 1, 1]) + np.abs(M[..., 0, 1] * M[..., 1, 0])
        return num / den

    I4 = np.array([invariant_I4(a, b, x) for a, b, x in zip(A.reshape(-1, 2, 2), B.reshape(-1, 2, 2), X.reshape(-1, 2, 2))])
    Js = np.abs(J2)
    scale = np.array([
        np.trace(Js @ np.abs(a) @ Js @ np.abs(x) @ Js @ np.abs(b) @ Js @ np.abs(x).T)
        for a, b, x in zip(A.reshape(-1, 2, 2), B.reshape(-1, 2, 2), X.reshape(-1, 2, 2))
    ])
    shape = S.shape[:-2]
    return {
        "det_A": rel_det(A),
        "det_B": rel_det(B),
        "det_C": rel_det(X),
        "I4": (np.abs(I4) / scale).reshape(shape),
    }
