"""MHDF1 binary field files.

Layout (little-endian throughout):

    bytes 0..3   magic "MHDF"
    byte  4      version, u8 = 1
    byte  5      d, u8
    bytes 6..9   N, u32
    bytes 10..17 M, f64
    byte  18     n_components, u8
    then n_components blocks of N^d f64 physical samples, x1 fastest.

Arrays in memory are indexed samples[i1, i2(, i3)] (C order, last axis
fastest), so components are transposed on the way in and out.
"""

import struct

import numpy as np

from .spectral import Field, Grid, VecField

MAGIC = b"MHDF"
VERSION = 1
_HEADER = struct.Struct("<4sBBIdB")


class MhdfError(IOError):
    """Malformed MHDF1 file; message carries the file name and byte offset."""


def write_field(path, field):
    """Write a Field or VecField to an MHDF1 file."""
    if isinstance(field, Field):
        components = (field,)
    else:
        components = field.components
    grid = components[0].grid
    header = _HEADER.pack(
        MAGIC, VERSION, grid.d, grid.npts, grid.period_scale, len(components)
    )
    with open(path, "wb") as fh:
        fh.write(header)
        for comp in components:
            fh.write(np.ascontiguousarray(comp.samples.T, dtype="<f8").tobytes())


def read_field(path):
    """Read an MHDF1 file; returns (grid, Field) or (grid, VecField)."""
    with open(path, "rb") as fh:
        raw = fh.read(_HEADER.size)
        if len(raw) < _HEADER.size:
            raise MhdfError(f"{path}: truncated header at offset {len(raw)}")
        magic, version, d, npts, scale, ncomp = _HEADER.unpack(raw)
        if magic != MAGIC:
            raise MhdfError(f"{path}: bad magic {magic!r} at offset 0")
        if version != VERSION:
            raise MhdfError(f"{path}: unsupported version {version} at offset 4")
        try:
            grid = Grid(d, npts, scale)
        except ValueError as exc:
            raise MhdfError(f"{path}: invalid grid header at offset 5: {exc}") from exc
        if ncomp < 1:
            raise MhdfError(f"{path}: zero components at offset 18")
        count = npts**d
        comps = []
        for i in range(ncomp):
            offset = _HEADER.size + i * count * 8
            buf = fh.read(count * 8)
            if len(buf) != count * 8:
                raise MhdfError(
                    f"{path}: truncated component {i} at offset {offset + len(buf)}"
                )
            arr = np.frombuffer(buf, dtype="<f8").reshape((npts,) * d)
            comps.append(Field.from_samples(grid, np.ascontiguousarray(arr.T)))
        trailing = fh.read(1)
        if trailing:
            raise MhdfError(
                f"{path}: trailing bytes at offset {_HEADER.size + ncomp * count * 8}"
            )
    if ncomp == 1:
        return grid, comps[0]
    return grid, VecField(comps)
