"""Binary sequence-volume container and the tool's CSV readers.

STV layout: magic "STV1" (4 bytes), little-endian u32 nx, ny, nt, a u32
dtype tag (0 = float32, 1 = float64), then nx*ny*nt samples in x-fastest
order (x, then y, then t).  File length is exactly 20 + sample_size *
nx*ny*nt bytes.  An optional JSON sidecar with the same basename and a
".json" suffix carries scene provenance.

Volumes are stored float32 by default and promoted to float64 in memory.
"""

import json
import struct
from pathlib import Path

import numpy as np

from .stcwt import SequenceVolume

MAGIC = b"STV1"
_DTYPES = {0: np.dtype("<f4"), 1: np.dtype("<f8")}
_TAGS = {"float32": 0, "float64": 1}


def write_stv(path, volume, dtype: str = "float32",
              sidecar: dict | None = None) -> None:
    """Write a 3D volume (SequenceVolume or real ndarray); optionally drop
    a JSON sidecar next to it."""
    if dtype not in _TAGS:
        raise ValueError(f"dtype must be float32 or float64, got {dtype!r}")
    data = volume.data if isinstance(volume, SequenceVolume) else np.asarray(volume, float)
    if data.ndim != 3:
        raise ValueError(f"expected a 3D volume, got shape {data.shape}")
    tag = _TAGS[dtype]
    path = Path(path)
    nx, ny, nt = data.shape
    header = MAGIC + struct.pack("<IIII", nx, ny, nt, tag)
    samples = np.ascontiguousarray(data.ravel(order="F"), dtype=_DTYPES[tag])
    path.write_bytes(header + samples.tobytes())
    if sidecar is not None:
        sidecar_path(path).write_text(json.dumps(sidecar, sort_keys=True, indent=2))


def read_stv_array(path) -> np.ndarray:
    """Read a volume as a float64 (nx, ny, nt) array."""
    raw = Path(path).read_bytes()
    if len(raw) < 20 or raw[:4] != MAGIC:
        raise ValueError(f"{path}: not an STV volume")
    nx, ny, nt, tag = struct.unpack("<IIII", raw[4:20])
    if tag not in _DTYPES:
        raise ValueError(f"{path}: unknown dtype tag {tag}")
    dt = _DTYPES[tag]
    expected = 20 + dt.itemsize * nx * ny * nt
    if len(raw) != expected:
        raise ValueError(f"{path}: expected {expected} bytes, found {len(raw)}")
    flat = np.frombuffer(raw, dtype=dt, offset=20)
    return flat.reshape((nx, ny, nt), order="F").astype(np.float64)


def read_stv(path) -> SequenceVolume:
    """Read a sequence volume, promoting samples to float64."""
    return SequenceVolume(read_stv_array(path))


def sidecar_path(path) -> Path:
    return Path(path).with_suffix(".json")


def read_sidecar(path) -> dict | None:
    side = sidecar_path(path)
    if not side.exists():
        return None
    return json.loads(side.read_text())


def write_csv(path, header: str, rows, footer_lines=()) -> None:
    """Write CSV with full-precision floats and '#'-prefixed footer lines."""
    lines = [header]
    for row in rows:
        lines.append(",".join(_format_value(v) for v in row))
    lines.extend(footer_lines)
    Path(path).write_text("\n".join(lines) + "\n")


def _format_value(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (np.floating,)):
        return repr(float(v))
    return str(v)


def read_csv(path) -> tuple[list[str], list[list[str]], dict[str, str]]:
    """Parse a tool CSV into (header fields, data rows, footer metadata)."""
    header: list[str] = []
    rows: list[list[str]] = []
    meta: dict[str, str] = {}
    for line in Path(path).read_text().splitlines():
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, value = body.split("=", 1)
                meta[key.strip()] = value.strip()
            continue
        if not header:
            header = line.split(",")
        else:
            rows.append(line.split(","))
    return header, rows, meta
