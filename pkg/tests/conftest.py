import numpy as np
import pytest

from mhdlab.spectral import Field, Grid, VecField, leray_project


def band_limited_field(grid, kmax, rng):
    """Random real field with spectrum confined to |m_i| <= kmax."""
    keep = np.abs(grid.modes1d) <= kmax
    c = np.zeros(grid.shape, dtype=np.complex128)
    sel = np.ix_(*([keep] * grid.d))
    c[sel] = (rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape))[sel]
    samples = np.real(np.fft.ifftn(c)) * c.size
    return Field.from_samples(grid, samples)


def rand_divfree(grid, kmax, seed):
    rng = np.random.default_rng(seed)
    v = VecField([band_limited_field(grid, kmax, rng) for _ in range(grid.d)])
    return leray_project(v)


@pytest.fixture
def grid2():
    return Grid(2, 64, 1.0)


@pytest.fixture
def grid2m8():
    return Grid(2, 256, 8.0)
