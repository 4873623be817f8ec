import itertools

import numpy as np
import pytest


def brute_force(z, bits):
    """Max of |sum z_i exp(j k_i 2pi/L)| over every index vector, by itertools."""
    z = np.asarray(z, dtype=complex)
    L = 2**bits
    roots = np.exp(2j * np.pi * np.arange(L) / L)
    best, arg = -1.0, None
    for k in itertools.product(range(L), repeat=z.size):
        v = abs(np.sum(z * roots[list(k)]))
        if v > best:
            best, arg = v, k
    return best, np.array(arg)


def cgauss(rng, n):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


@pytest.fixture
def rng():
    return np.random.default_rng(20221017)
