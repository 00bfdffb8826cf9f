import numpy as np
import pytest

from duet.bath import BathSpec
from duet.response import OscillatorPair


def random_pair(rng, lam_ratio=None):
    """Random stable pair; lam_ratio fixes lam^2 / (k1' k2')."""
    m2 = rng.uniform(0.3, 3.0)
    w20 = rng.uniform(0.3, 3.0)
    k1, k2 = 1.0, m2 * w20**2
    if lam_ratio is None:
        lmin = -k1 * k2 / (k1 + k2)
        lam = rng.uniform(0.98 * lmin, 2.0)
    else:
        # lam^2 = r (k1 + lam)(k2 + lam)
        r = lam_ratio
        a, b, c = 1.0 - r, -r * (k1 + k2), -r * k1 * k2
        roots = np.roots([a, b, c]).real
        neg = [x for x in roots if x < 0 and k1 + x > 0 and k2 + x > 0]
        lam = neg[0] if neg and rng.random() < 0.5 else max(roots)
    return OscillatorPair(1.0, m2, k1, k2, lam)


def random_baths(rng, T=None, ordered=False):
    g = 10 ** rng.uniform(-3, 0, 2)
    tc = rng.uniform(0.02, 5.0, 2)
    if T is None:
        T = rng.uniform(0, 10, 2)
        if ordered:
            T = np.sort(T)[::-1]
    else:
        T = (T, T)
    return BathSpec(g[0], tc[0], T[0]), BathSpec(g[1], tc[1], T[1])


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


@pytest.fixture
def case_a():
    pair = OscillatorPair.from_frequencies(1.0, 1.15, 0.09)
    baths = (BathSpec(0.1, 0.02, 0.0), BathSpec(0.1, 0.02, 0.0))
    return pair, baths
