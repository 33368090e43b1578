"""STV container format and CSV helpers."""

import numpy as np
import pytest

from conewave.stcwt import SequenceVolume
from conewave.stvio import (
    read_csv,
    read_sidecar,
    read_stv,
    read_stv_array,
    write_csv,
    write_stv,
)


def test_file_layout(tmp_path):
    seq = SequenceVolume(np.zeros((64, 64, 16)))
    path = tmp_path / "vol.stv"
    write_stv(path, seq, dtype="float32")
    assert path.stat().st_size == 20 + 4 * 64 * 64 * 16
    write_stv(path, seq, dtype="float64")
    assert path.stat().st_size == 20 + 8 * 64 * 64 * 16
    raw = path.read_bytes()
    assert raw[:4] == b"STV1"


def test_round_trip_float64_bit_exact(tmp_path):
    rng = np.random.default_rng(0)
    data = rng.standard_normal((5, 4, 3))
    path = tmp_path / "vol.stv"
    write_stv(path, SequenceVolume(data), dtype="float64")
    back = read_stv(path)
    assert np.array_equal(back.data, data)


def test_round_trip_float32_bit_exact(tmp_path):
    rng = np.random.default_rng(1)
    data = rng.standard_normal((5, 4, 3)).astype(np.float32).astype(np.float64)
    path = tmp_path / "vol.stv"
    write_stv(path, SequenceVolume(data), dtype="float32")
    back = read_stv(path)
    assert np.array_equal(back.data, data)


def test_sample_order_is_x_fastest(tmp_path):
    data = np.arange(2 * 3 * 2, dtype=float).reshape((2, 3, 2))
    path = tmp_path / "vol.stv"
    write_stv(path, data, dtype="float64")
    flat = np.frombuffer(path.read_bytes(), dtype="<f8", offset=20)
    # first samples walk x with y and t fixed
    assert flat[0] == data[0, 0, 0]
    assert flat[1] == data[1, 0, 0]
    assert flat[2] == data[0, 1, 0]
    assert flat[6] == data[0, 0, 1]


def test_single_plane_volume_round_trips(tmp_path):
    data = np.ones((4, 4, 1))
    path = tmp_path / "plane.stv"
    write_stv(path, data, dtype="float64")
    assert np.array_equal(read_stv_array(path), data)


def test_corrupt_files_rejected(tmp_path):
    path = tmp_path / "bad.stv"
    path.write_bytes(b"NOPE" + b"\0" * 32)
    with pytest.raises(ValueError):
        read_stv(path)
    good = tmp_path / "short.stv"
    write_stv(good, np.zeros((2, 2, 2)), dtype="float32")
    good.write_bytes(good.read_bytes()[:-2])
    with pytest.raises(ValueError):
        read_stv(good)
    with pytest.raises(ValueError):
        write_stv(tmp_path / "x.stv", np.zeros((2, 2, 2)), dtype="float16")


def test_sidecar(tmp_path):
    path = tmp_path / "vol.stv"
    write_stv(path, np.zeros((2, 2, 2)), sidecar={"scene": {"v_r": 3.0}})
    assert read_sidecar(path) == {"scene": {"v_r": 3.0}}
    other = tmp_path / "other.stv"
    write_stv(other, np.zeros((2, 2, 2)))
    assert read_sidecar(other) is None


def test_csv_round_trip(tmp_path):
    path = tmp_path / "curve.csv"
    write_csv(path, "c,energy", [(1.0, 0.125), (1.25, 2.5e-12)], ["# v_m=1.25"])
    header, rows, meta = read_csv(path)
    assert header == ["c", "energy"]
    assert [float(r[1]) for r in rows] == [0.125, 2.5e-12]
    assert meta["v_m"] == "1.25"
