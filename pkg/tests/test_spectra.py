import numpy as np
import pytest

from duet.bath import BathSpec, force_noise_spectrum
from duet.errors import ConfigError
from duet.quadrature import QuadratureConfig
from duet.response import OscillatorPair, evaluate_response
from duet.spectra import (
    cross_spectrum,
    fd_residual,
    heat_conductance_spectrum,
    heat_current_cross_route,
    heat_current_spectrum,
    levy_kosloff_sign,
    net_heat_current,
    power_balance,
)

from conftest import random_baths, random_pair

W = np.linspace(0.0, 6.0, 241)


def test_position_block_closed_forms(rng):
    for _ in range(20):
        pair, baths = random_pair(rng), random_baths(rng)
        w = rng.uniform(0.01, 8, 40)
        S = cross_spectrum(pair, baths, w)
        r = evaluate_response(pair, baths, w)
        F1, F2 = force_noise_spectrum(baths[0], w), force_noise_spectrum(baths[1], w)
        D2 = np.abs(r.D) ** 2
        sxx = (np.abs(r.K2) ** 2 * F1 + pair.lam**2 * F2) / D2
        syy = (pair.lam**2 * F1 + np.abs(r.K1) ** 2 * F2) / D2
        sxy = pair.lam * (r.K2.conj() * F1 + r.K1 * F2) / D2
        assert np.allclose(S.entry("x", "x"), sxx, rtol=1e-12)
        assert np.allclose(S.entry("y", "y"), syy, rtol=1e-12)
        assert np.allclose(S.entry("x", "y"), sxy, rtol=1e-12, atol=1e-14 * np.abs(sxx).max())
        # momentum rows: factor -i m w on the response
        assert np.allclose(S.entry("p_x", "p_x"), pair.m1**2 * w**2 * sxx, rtol=1e-12)
        assert np.allclose(S.entry("x", "p_x"), -1j * pair.m1 * w * sxx, rtol=1e-12)


def test_spectral_matrix_hermitian_psd(rng):
    for _ in range(50):
        pair, baths = random_pair(rng), random_baths(rng)
        S = cross_spectrum(pair, baths, rng.uniform(0, 20, 30)).S
        assert np.array_equal(S, np.conj(np.swapaxes(S, -1, -2)))
        ev = np.linalg.eigvalsh(S)
        tr = np.trace(S, axis1=-2, axis2=-1).real
        assert np.all(ev[:, 0] >= -1e-12 * tr)
        assert np.all(np.diagonal(S, axis1=-2, axis2=-1).real >= 0)


def test_xpx_purely_imaginary(rng):
    for _ in range(20):
        pair, baths = random_pair(rng), random_baths(rng)
        S = cross_spectrum(pair, baths, W)
        # zero up to rounding of one complex product
        for a, b in (("x", "p_x"), ("y", "p_y")):
            z = S.entry(a, b)
            assert np.all(np.abs(z.real) <= 1e-15 * np.abs(z.imag))


def test_equal_temperature_mixed_entries_imaginary(rng):
    for _ in range(20):
        pair = random_pair(rng)
        baths = random_baths(rng, T=rng.uniform(0, 5))
        S = cross_spectrum(pair, baths, W)
        scale = np.abs(S.S).max(axis=(-1, -2))
        assert np.all(np.abs(S.entry("x", "p_y").real) <= 1e-13 * scale)
        assert np.all(np.abs(S.entry("p_x", "y").real) <= 1e-13 * scale)


def test_uncoupled_cross_blocks_vanish():
    pair = OscillatorPair.from_frequencies(1.0, 1.3, 0.0)
    baths = (BathSpec(0.1, 0.1, 1.0), BathSpec(0.2, 0.5, 0.0))
    S = cross_spectrum(pair, baths, W).S
    assert np.all(S[:, :2, 2:] == 0)


def test_heat_spectrum_examples(rng):
    pair = random_pair(rng)
    assert np.all(heat_current_spectrum(pair, random_baths(rng, T=2.0), W) == 0)
    free = OscillatorPair.from_frequencies(1.0, 1.2, 0.0)
    assert np.all(heat_current_spectrum(free, random_baths(rng, ordered=True), W) == 0)
    for _ in range(100):
        pair, baths = random_pair(rng), random_baths(rng, ordered=True)
        assert heat_current_spectrum(pair, baths, W).min() >= 0
        hot, cold = baths[1].temperature, baths[0].temperature
        swapped = (baths[0].with_temperature(hot), baths[1].with_temperature(cold))
        assert heat_current_spectrum(pair, swapped, W).max() <= 0


def test_net_heat_current_equal_temperature(rng):
    for _ in range(10):
        pair = random_pair(rng)
        baths = random_baths(rng, T=rng.uniform(0, 5))
        assert abs(net_heat_current(pair, baths)) < 1e-10


def test_net_heat_current_relabel_symmetry(rng):
    for _ in range(10):
        p, baths = random_pair(rng), random_baths(rng)
        q = OscillatorPair(p.m2, p.m1, p.k2, p.k1, p.lam)
        a = net_heat_current(p, baths)
        b = net_heat_current(q, baths[::-1])
        assert b == pytest.approx(-a, rel=1e-9, abs=1e-15)


def test_heat_current_two_routes_agree(rng):
    for _ in range(10):
        pair, baths = random_pair(rng), random_baths(rng, ordered=True)
        w = rng.uniform(0, 5, 50)
        a = heat_current_spectrum(pair, baths, w)
        b = heat_current_cross_route(pair, baths, w)
        assert np.allclose(a, b, rtol=1e-9, atol=1e-13 * np.abs(a).max())
        q1 = net_heat_current(pair, baths)
        q2 = net_heat_current(pair, baths, route="cross")
        assert q2 == pytest.approx(q1, rel=1e-8, abs=1e-14)


def test_levy_kosloff_regime():
    pair = OscillatorPair.from_frequencies(1.0, 0.6, 0.36)
    baths = tuple(BathSpec(g, 0.02, T) for g, T in ((0.1, 5.0), (0.1, 4.0)))
    assert levy_kosloff_sign(pair, (5.0, 4.0)) == -1
    assert net_heat_current(pair, baths) > 0


def test_levy_kosloff_sign_examples():
    pair = OscillatorPair.from_frequencies(1.0, 0.5, 0.1)
    assert levy_kosloff_sign(pair, (2.0, 1.0)) == 0
    equal = OscillatorPair.from_frequencies(1.0, 1.0, 0.1)
    assert levy_kosloff_sign(equal, (2.0, 1.0)) == 1
    with pytest.raises(ConfigError):
        levy_kosloff_sign(equal, (0.0, 1.0))


def test_linear_response_spectrum(case_a):
    pair, baths = case_a
    T, h = 1.0, 1e-4
    hot = (baths[0].with_temperature(T + h), baths[1].with_temperature(T - h))
    mid = (baths[0].with_temperature(T), baths[1].with_temperature(T))
    w = np.linspace(0.1, 3, 30)
    fd = heat_current_spectrum(pair, hot, w) / (2 * h)
    assert np.allclose(heat_conductance_spectrum(pair, mid, w), fd, rtol=1e-6)


def test_fd_residual_uncoupled_exact():
    pair = OscillatorPair.from_frequencies(1.0, 1.3, 0.0)
    baths = (BathSpec(0.1, 0.1, 0.7), BathSpec(0.2, 0.5, 0.7))
    assert fd_residual(pair, baths, W).max() < 1e-14


def test_fd_residual_random(rng):
    for _ in range(30):
        pair = random_pair(rng, lam_ratio=rng.uniform(0, 0.9))
        baths = random_baths(rng, T=rng.uniform(0, 10))
        assert fd_residual(pair, baths, rng.uniform(0, 20, 100)).max() < 1e-9


def test_fd_residual_zero_frequency(case_a):
    assert fd_residual(*case_a, 0.0) == 0.0


def test_fd_residual_nonequilibrium(case_a):
    pair, _ = case_a
    baths = (BathSpec(0.1, 0.02, 1.0), BathSpec(0.1, 0.02, 0.2))
    with pytest.raises(ConfigError):
        fd_residual(pair, baths, 1.0)
    res = fd_residual(pair, baths, np.array([0.5, 1.0, 1.2]), temperature=0.6)
    assert np.all(res > 1e-3)


def test_power_balance(case_a):
    pair, _ = case_a
    baths = (BathSpec(0.1, 0.02, 0.5), BathSpec(0.1, 0.02, 0.25))
    terms = power_balance(pair, baths)
    total = sum(terms.values())
    assert abs(total) < 1e-8 * max(abs(v) for v in terms.values())
    assert terms["spring"] == pytest.approx(-net_heat_current(pair, baths), rel=1e-8)


def test_net_heat_current_needs_damping(case_a):
    pair, _ = case_a
    with pytest.raises(ConfigError):
        net_heat_current(pair, (BathSpec(0.0, 0.02, 1.0), BathSpec(0.1, 0.02, 0.0)))


def test_net_heat_current_deterministic(case_a):
    pair, _ = case_a
    baths = (BathSpec(0.1, 0.02, 0.5), BathSpec(0.1, 0.02, 0.25))
    q = QuadratureConfig(rel_tol=1e-9)
    assert net_heat_current(pair, baths, q) == net_heat_current(pair, baths, q)
