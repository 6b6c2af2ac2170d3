import numpy as np
import pytest
import scipy.fft as sfft

import liedlab as ll


def band_limited_random(grid, seed, k_frac=0.4):
    """Smooth random test field: white noise low-passed below k_frac * k_max.

    Spectral identities (translation/symmetry commutation, Parseval) hold to
    machine precision only for Nyquist-free fields, which all physical states
    here are.
    """
    rng = np.random.default_rng(seed)
    spec = (rng.standard_normal((grid.n_y, grid.n_z))
            + 1j * rng.standard_normal((grid.n_y, grid.n_z)))
    k_max = np.pi / grid.dy
    kk = np.sqrt(grid.k_squared)
    spec *= np.exp(-((kk / (k_frac * k_max)) ** 8))
    vals = sfft.ifft2(spec)
    return ll.WaveFunction(grid, vals).normalized()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
