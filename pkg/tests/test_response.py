import numpy as np
import pytest
from scipy import linalg
from scipy.signal import argrelextrema

from duet.bath import BathSpec
from duet.errors import ConfigError, SingularResponseError
from duet.response import (
    OscillatorPair,
    absorption_spectrum,
    count_upper_half_plane_zeros,
    evaluate_response,
    find_mode,
    lossless_eigenfrequencies,
    normal_modes,
    rwa_eigenfrequencies,
)

from conftest import random_baths, random_pair


def test_static_limit(case_a):
    pair, baths = case_a
    r = evaluate_response(pair, baths, 0.0)
    assert r.K1 == pair.k1p and r.K2 == pair.k2p
    assert r.D.imag == 0 and r.D.real == pytest.approx(pair.k1p * pair.k2p - pair.lam**2)
    assert r.D.real > 0


def test_uncoupled_response_is_diagonal():
    pair = OscillatorPair.from_frequencies(1.0, 1.3, 0.0)
    baths = (BathSpec(0.1, 0.1), BathSpec(0.2, 0.5))
    w = np.linspace(0, 3, 31)
    r = evaluate_response(pair, baths, w)
    assert np.all(r.R[:, 0, 1] == 0)
    assert np.allclose(r.R[:, 0, 0], 1 / r.K1, rtol=1e-15)
    assert np.allclose(r.R[:, 1, 1], 1 / r.K2, rtol=1e-15)


def test_response_conjugation_symmetry(rng):
    for _ in range(20):
        pair, baths = random_pair(rng), random_baths(rng)
        w = rng.uniform(0, 10, 50)
        assert np.allclose(evaluate_response(pair, baths, -w).R,
                           evaluate_response(pair, baths, w).R.conj(), rtol=1e-14, atol=0)


def test_response_inverts_K(rng):
    for _ in range(50):
        pair, baths = random_pair(rng), random_baths(rng)
        r = evaluate_response(pair, baths, rng.uniform(0, 10, 100))
        prod = r.R @ r.K
        assert np.abs(prod - np.eye(2)).max() < 1e-12


def test_fig1a_eigenfrequencies(case_a):
    pair, _ = case_a
    wp, wm = lossless_eigenfrequencies(pair)
    assert wp == pytest.approx(1.19830, abs=5e-6)
    assert wm == pytest.approx(1.03276, abs=5e-6)
    # independent: generalised eigenproblem of the stiffness and mass matrices
    Kmat = np.array([[pair.k1p, -pair.lam], [-pair.lam, pair.k2p]])
    ev = np.sqrt(linalg.eigh(Kmat, np.diag([pair.m1, pair.m2]), eigvals_only=True))
    assert np.allclose([wm, wp], ev, rtol=1e-14)


def test_eigenfrequencies_limits():
    wp, wm = lossless_eigenfrequencies(OscillatorPair.from_frequencies(1.0, 1.4, 0.0))
    assert (wp, wm) == pytest.approx((1.4, 1.0), rel=1e-15)
    lam = 0.3
    wp, wm = lossless_eigenfrequencies(OscillatorPair.from_frequencies(1.0, 1.0, lam))
    assert wm == pytest.approx(1.0, rel=1e-15)
    assert wp**2 == pytest.approx(1 + 2 * lam, rel=1e-15)


def test_rwa_examples():
    lam = 0.1
    pair = OscillatorPair.from_frequencies(1.0, 1.0, lam)
    cold = (BathSpec(0.0, 0.1), BathSpec(0.0, 0.1))
    wp, wm = rwa_eigenfrequencies(pair, cold)
    gr = lam / np.sqrt(pair.m1 * pair.m2 * pair.omega1 * pair.omega2)
    assert wp == pytest.approx(pair.omega1 + gr / 2, rel=1e-14)
    assert wm == pytest.approx(pair.omega1 - gr / 2, rel=1e-14)
    assert wp.imag == 0 and wm.imag == 0

    free = OscillatorPair.from_frequencies(1.0, 1.2, 0.0)
    baths = (BathSpec(0.1, 0.02), BathSpec(0.3, 0.02))
    wp, wm = rwa_eigenfrequencies(free, baths)
    O1 = free.omega1 - 0.5j * baths[0].mu(free.omega1)
    O2 = free.omega2 - 0.5j * baths[1].mu(free.omega2) / free.m2
    assert {complex(round(wp.real, 12), round(wp.imag, 12)), complex(round(wm.real, 12), round(wm.imag, 12))} == {
        complex(round(O1.real, 12), round(O1.imag, 12)), complex(round(O2.real, 12), round(O2.imag, 12))}


def test_rwa_modes_damped(rng):
    for _ in range(200):
        pair, baths = random_pair(rng), random_baths(rng)
        wp, wm = rwa_eigenfrequencies(pair, baths)
        assert wp.imag < 0 and wm.imag < 0


def test_no_zeros_in_upper_half_plane(rng):
    for _ in range(15):
        pair, baths = random_pair(rng), random_baths(rng)
        assert count_upper_half_plane_zeros(pair, baths) == 0


class _AntiDamped:
    """Negative constant friction: every mode grows, roots sit above the axis."""

    def mu(self, z):
        return -0.1 + 0 * np.asarray(z)


def test_zero_count_detects_upper_half_plane_roots():
    pair = OscillatorPair.from_frequencies(1.0, 1.3, 0.0)
    assert count_upper_half_plane_zeros(pair, (_AntiDamped(), _AntiDamped())) == 4


def test_lossless_matches_damped_roots_for_weak_damping(rng):
    for _ in range(30):
        pair = random_pair(rng)
        g = 10 ** rng.uniform(-4, -2)
        baths = (BathSpec(g, 0.02), BathSpec(g, 0.02))
        wp, wm = lossless_eigenfrequencies(pair)
        zp, zm = normal_modes(pair, baths)
        scale = g / min(pair.m1, pair.m2)
        assert abs(zp.real - wp) < 2 * scale
        assert abs(zm.real - wm) < 2 * scale
        assert zp.imag < 0 and zm.imag < 0


def test_find_mode_is_a_root(case_a):
    pair, baths = case_a
    from duet.response import determinant

    z = find_mode(pair, baths, 1.2 - 0.05j)
    assert abs(determinant(pair, baths, z)) < 1e-12


def test_absorption_without_dissipation_vanishes():
    pair = OscillatorPair.from_frequencies(1.0, 1.15, 0.09)
    cold = (BathSpec(0.0, 0.02), BathSpec(0.0, 0.02))
    w = np.linspace(0.1, 3, 77)
    assert np.all(absorption_spectrum(pair, cold, w, (1, 1)) == 0)


def test_absorption_single_oscillator():
    pair = OscillatorPair.from_frequencies(1.0, 1.3, 0.0)
    baths = (BathSpec(0.05, 0.02), BathSpec(0.05, 0.02))
    w = np.linspace(0.5, 1.5, 1001)
    a = absorption_spectrum(pair, baths, w, (1.0, 0.0))
    r = evaluate_response(pair, baths, w)
    assert np.allclose(a, w * np.imag(1 / r.K1), rtol=1e-14)
    assert abs(w[np.argmax(a)] - pair.omega1) < 2e-3


def test_absorption_fig1a_peak_and_shoulder(case_a):
    pair, baths = case_a
    wp, wm = lossless_eigenfrequencies(pair)
    w = np.arange(0.5, 1.6, 1e-3)
    a = absorption_spectrum(pair, baths, w, (1.0, 0.0))
    peaks = w[argrelextrema(a, np.greater)[0]]
    assert len(peaks) == 1 and abs(peaks[0] - wm) <= 2e-3
    # shoulder: the slope flattens (local minimum of |slope|) close to omega_plus
    slope = np.abs(np.gradient(a, w))
    flat = w[argrelextrema(slope, np.less)[0]]
    assert np.any(np.abs(flat - wp) < 0.03)
    # driving the blue oscillator puts the maximum at omega_plus
    a2 = absorption_spectrum(pair, baths, w, (0.0, 1.0))
    assert abs(w[np.argmax(a2)] - wp) <= 2e-3


def test_absorption_nonnegative(rng):
    for _ in range(200):
        pair, baths = random_pair(rng), random_baths(rng)
        w = rng.uniform(0, 20, 100)
        f = rng.uniform(0, 1, 2)
        assert absorption_spectrum(pair, baths, w, f).min() >= 0


def test_singular_response_reported():
    pair = OscillatorPair.from_frequencies(1.0, 1.0, 0.0)
    cold = (BathSpec(0.0, 0.02), BathSpec(0.0, 0.02))
    with pytest.raises(SingularResponseError):
        evaluate_response(pair, cold, np.array([0.5, 1.0]))


@pytest.mark.parametrize("args", [(0, 1, 1, 1, 0), (1, 1, -1, 1, 0), (1, 1, 1, 1, -0.6)])
def test_pair_validation(args):
    with pytest.raises(ConfigError):
        OscillatorPair(*args)


def test_negative_weights_rejected(case_a):
    with pytest.raises(ConfigError):
        absorption_spectrum(*case_a, 1.0, (-1, 0))
