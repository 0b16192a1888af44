"""Periodic grids, spectral transforms, differential operators, projection.

Everything lives on the torus [0, 2*pi*M)^d sampled with N points per axis.
Fourier coefficients are normalized so that

    c_k = |domain|^{-1} * integral(u * exp(-i k.x)),
    ||u||_{L2}^2 = |domain| * sum_k |c_k|^2,

with wavenumbers k = m/M for integer index m in [-N/2, N/2).  With this
calibration the discrete Sobolev norms converge to their whole-space
counterparts as the period grows.
"""

import numpy as np
import scipy.fft as _fft

from . import _kernels

_WORKERS = -1  # let pocketfft use all cores; plans are deterministic


def fftn(a):
    return _fft.fftn(a, workers=_WORKERS)


def ifftn(a):
    return _fft.ifftn(a, workers=_WORKERS)


class GridError(ValueError):
    pass


class Grid:
    """Uniform periodic grid descriptor plus cached wavenumber tables."""

    def __init__(self, d, npts, period_scale=8.0):
        if d not in (1, 2, 3):
            raise GridError(f"dimension must be 1, 2 or 3, got {d}")
        npts = int(npts)
        if npts < 8 or npts % 2 != 0:
            raise GridError(f"points per axis must be even and >= 8, got {npts}")
        if not period_scale > 0:
            raise GridError(f"period scale must be positive, got {period_scale}")
        self.d = d
        self.npts = npts
        self.period_scale = float(period_scale)
        self.length = 2.0 * np.pi * self.period_scale
        self.volume = self.length**d
        self.spacing = self.length / npts

        # integer mode indices in fft layout, and physical wavenumbers m/M
        self.modes1d = np.fft.fftfreq(npts, d=1.0 / npts).astype(np.int64)
        self.k1d = self.modes1d / self.period_scale
        self.x1d = self.spacing * np.arange(npts)

        self._k_axes = None
        self._k_sq = None
        self._dealias_mask = None

    @property
    def shape(self):
        return (self.npts,) * self.d

    def axis_wavenumbers(self, axis):
        """Wavenumber array for one axis, shaped for broadcasting."""
        if self._k_axes is None:
            axes = []
            for a in range(self.d):
                shape = [1] * self.d
                shape[a] = self.npts
                axes.append(self.k1d.reshape(shape))
            self._k_axes = tuple(axes)
        return self._k_axes[axis]

    @property
    def k_sq(self):
        """Dense |k|^2 over the full spectral grid."""
        if self._k_sq is None:
            acc = np.zeros(self.shape)
            for a in range(self.d):
                acc = acc + self.axis_wavenumbers(a) ** 2
            self._k_sq = acc
        return self._k_sq

    @property
    def dealias_mask(self):
        """Boolean mask keeping modes with |m_i| <= N/3 on every axis."""
        if self._dealias_mask is None:
            cut = self.npts // 3
            keep1d = np.abs(self.modes1d) <= cut
            mask = np.ones(self.shape, dtype=bool)
            for a in range(self.d):
                shape = [1] * self.d
                shape[a] = self.npts
                mask &= keep1d.reshape(shape)
            self._dealias_mask = mask
        return self._dealias_mask

    def meshgrid(self):
        return np.meshgrid(*([self.x1d] * self.d), indexing="ij")

    def __eq__(self, other):
        return (
            isinstance(other, Grid)
            and self.d == other.d
            and self.npts == other.npts
            and self.period_scale == other.period_scale
        )

    def __hash__(self):
        return hash((self.d, self.npts, self.period_scale))

    def __repr__(self):
        return f"Grid(d={self.d}, npts={self.npts}, period_scale={self.period_scale})"


class Field:
    """Real scalar field with consistent physical and spectral views."""

    __slots__ = ("grid", "_coeffs", "_samples")

    def __init__(self, grid, coeffs=None, samples=None):
        self.grid = grid
        self._coeffs = coeffs
        self._samples = samples

    @classmethod
    def from_samples(cls, grid, samples):
        samples = np.asarray(samples, dtype=np.float64)
        if samples.shape != grid.shape:
            raise ValueError(f"samples shape {samples.shape} != grid {grid.shape}")
        return cls(grid, samples=samples)

    @classmethod
    def from_coefficients(cls, grid, coeffs):
        coeffs = np.asarray(coeffs, dtype=np.complex128)
        if coeffs.shape != grid.shape:
            raise ValueError(f"coefficient shape {coeffs.shape} != grid {grid.shape}")
        return cls(grid, coeffs=coeffs)

    @classmethod
    def zeros(cls, grid):
        return cls(grid, coeffs=np.zeros(grid.shape, dtype=np.complex128))

    @property
    def coefficients(self):
        if self._coeffs is None:
            self._coeffs = fftn(self._samples) / self._samples.size
        return self._coeffs

    @property
    def samples(self):
        if self._samples is None:
            n_total = self._coeffs.size
            self._samples = np.real(ifftn(self._coeffs)) * n_total
        return self._samples

    def l2_norm(self):
        c = self.coefficients
        w = np.ones_like(c, dtype=np.float64)
        return float(np.sqrt(self.grid.volume * _kernels.weighted_sumsq(c, w)))

    def __add__(self, other):
        _check_same_grid(self, other)
        return Field(self.grid, coeffs=self.coefficients + other.coefficients)

    def __sub__(self, other):
        _check_same_grid(self, other)
        return Field(self.grid, coeffs=self.coefficients - other.coefficients)

    def __mul__(self, scalar):
        return Field(self.grid, coeffs=self.coefficients * float(scalar))

    __rmul__ = __mul__

    def __neg__(self):
        return Field(self.grid, coeffs=-self.coefficients)


class VecField:
    """Vector field: d scalar components sharing one grid."""

    __slots__ = ("grid", "components")

    def __init__(self, components):
        components = tuple(components)
        if not components:
            raise ValueError("VecField needs at least one component")
        grid = components[0].grid
        for c in components[1:]:
            if c.grid != grid:
                raise ValueError("all components must share one grid")
        if len(components) != grid.d:
            raise ValueError(
                f"expected {grid.d} components for d={grid.d}, got {len(components)}"
            )
        self.grid = grid
        self.components = components

    @classmethod
    def from_samples(cls, grid, *arrays):
        return cls([Field.from_samples(grid, a) for a in arrays])

    @classmethod
    def zeros(cls, grid):
        return cls([Field.zeros(grid) for _ in range(grid.d)])

    def map(self, fn):
        return VecField([fn(c) for c in self.components])

    def l2_norm(self):
        return float(np.sqrt(sum(c.l2_norm() ** 2 for c in self.components)))

    def __add__(self, other):
        return VecField([a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other):
        return VecField([a - b for a, b in zip(self.components, other.components)])

    def __mul__(self, scalar):
        return VecField([c * scalar for c in self.components])

    __rmul__ = __mul__

    def __neg__(self):
        return VecField([-c for c in self.components])


def _check_same_grid(a, b):
    if a.grid != b.grid:
        raise ValueError("operands live on different grids")


# ---------------------------------------------------------------------------
# differential operators (all pure spectral multipliers)
# ---------------------------------------------------------------------------

def gradient(f):
    """Spectral gradient of a scalar field."""
    c = f.coefficients
    comps = []
    for a in range(f.grid.d):
        k = f.grid.axis_wavenumbers(a)
        comps.append(Field.from_coefficients(f.grid, 1j * k * c))
    return VecField(comps)


def divergence(v):
    """Spectral divergence of a vector field."""
    grid = v.grid
    acc = np.zeros(grid.shape, dtype=np.complex128)
    for a, comp in enumerate(v.components):
        acc += 1j * grid.axis_wavenumbers(a) * comp.coefficients
    return Field.from_coefficients(grid, acc)


def laplacian(f):
    """Spectral Laplacian of a scalar field."""
    return Field.from_coefficients(f.grid, -f.grid.k_sq * f.coefficients)


def inv_laplacian(f):
    """Solve -lap(u) = -f i.e. u = lap^{-1} f with zero-mean convention."""
    grid = f.grid
    ksq = grid.k_sq
    safe = np.where(ksq == 0.0, 1.0, ksq)
    c = -f.coefficients / safe
    out = np.array(c)
    out.flat[0] = 0.0
    return Field.from_coefficients(grid, out)


def leray_project(v):
    """Remove the gradient part of a vector field (divergence-free output).

    The k=0 mode passes through unchanged; constants are divergence-free.
    """
    grid = v.grid
    ksq = grid.k_sq
    inv = np.where(ksq == 0.0, 0.0, 1.0 / np.where(ksq == 0.0, 1.0, ksq))
    coeffs = [np.array(c.coefficients) for c in v.components]
    div = np.zeros(grid.shape, dtype=np.complex128)
    for a in range(grid.d):
        div += grid.axis_wavenumbers(a) * coeffs[a]
    div *= inv
    for a in range(grid.d):
        coeffs[a] -= grid.axis_wavenumbers(a) * div
    return VecField([Field.from_coefficients(grid, c) for c in coeffs])


def perp_curl(f):
    """Rotated gradient (d2 f, -d1 f) of a scalar, spectrally exact.

    In 3D the third component is zero; the result is divergence-free to
    roundoff because the mixed derivatives cancel identically.
    """
    grid = f.grid
    c = f.coefficients
    k1 = grid.axis_wavenumbers(0)
    k2 = grid.axis_wavenumbers(1)
    comps = [
        Field.from_coefficients(grid, 1j * k2 * c),
        Field.from_coefficients(grid, -1j * k1 * c),
    ]
    if grid.d == 3:
        comps.append(Field.zeros(grid))
    return VecField(comps)


def dealias(f):
    """Zero every coefficient with any |m_i| > N/3 (2/3-rule truncation)."""
    out = np.where(f.grid.dealias_mask, f.coefficients, 0.0 + 0.0j)
    return Field.from_coefficients(f.grid, out)


def dealias_vec(v):
    return v.map(dealias)


def divergence_defect(v):
    """||div v||_{L2} / ||v||_{L2}; 0 for a zero field."""
    denom = v.l2_norm()
    if denom == 0.0:
        return 0.0
    return divergence(v).l2_norm() / denom
