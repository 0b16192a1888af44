import struct

import numpy as np
import pytest

from mhdlab.fieldio import MhdfError, read_field, write_field
from mhdlab.spectral import Field, Grid, VecField


def test_scalar_round_trip(tmp_path):
    g = Grid(2, 16, 2.0)
    rng = np.random.default_rng(0)
    f = Field.from_samples(g, rng.standard_normal(g.shape))
    path = tmp_path / "f.mhdf"
    write_field(path, f)
    g2, back = read_field(path)
    assert g2 == g
    assert np.array_equal(back.samples, f.samples)


def test_vector_round_trip_3d(tmp_path):
    g = Grid(3, 8, 1.0)
    rng = np.random.default_rng(1)
    v = VecField.from_samples(g, *[rng.standard_normal(g.shape) for _ in range(3)])
    path = tmp_path / "v.mhdf"
    write_field(path, v)
    _, back = read_field(path)
    for a, b in zip(back.components, v.components):
        assert np.array_equal(a.samples, b.samples)


def test_x1_fastest_in_file(tmp_path):
    # byte order: sample (i1, i2) sits at offset i1 + N*i2 (x1 fastest)
    g = Grid(2, 8, 1.0)
    samples = np.arange(64, dtype=float).reshape(8, 8)  # value = 8*i1 + i2
    path = tmp_path / "o.mhdf"
    write_field(path, Field.from_samples(g, samples))
    raw = path.read_bytes()
    header = 19
    flat = np.frombuffer(raw[header:], dtype="<f8")
    i1, i2 = 3, 5
    assert flat[i1 + 8 * i2] == samples[i1, i2]


def test_bad_magic(tmp_path):
    path = tmp_path / "bad.mhdf"
    path.write_bytes(b"NOPE" + bytes(40))
    with pytest.raises(MhdfError, match="bad magic.*offset 0"):
        read_field(path)


def test_bad_version(tmp_path):
    g = Grid(2, 8, 1.0)
    path = tmp_path / "v.mhdf"
    write_field(path, Field.zeros(g))
    raw = bytearray(path.read_bytes())
    raw[4] = 9
    path.write_bytes(bytes(raw))
    with pytest.raises(MhdfError, match="version"):
        read_field(path)


def test_truncated_payload(tmp_path):
    g = Grid(2, 8, 1.0)
    path = tmp_path / "t.mhdf"
    write_field(path, Field.zeros(g))
    raw = path.read_bytes()
    path.write_bytes(raw[:-8])
    with pytest.raises(MhdfError, match="truncated component"):
        read_field(path)


def test_trailing_bytes(tmp_path):
    g = Grid(2, 8, 1.0)
    path = tmp_path / "x.mhdf"
    write_field(path, Field.zeros(g))
    path.write_bytes(path.read_bytes() + b"\x00")
    with pytest.raises(MhdfError, match="trailing"):
        read_field(path)
