"""
Field snapshots: NDJSON coefficient records and a raw binary dump.

Binary layout: 64-byte little-endian header (magic "VNSF", version, d, N, L,
component count, zero padding) followed by complex128 coefficients in C order.
"""
import json
import struct
from pathlib import Path

import numpy as np

from vnslab.errors import UsageError
from vnslab.spectral.grid import Grid, SpectralField

FIELD_MAGIC = b"VNSF"
FIELD_VERSION = 1
HEADER_SIZE = 64
_HEADER = struct.Struct("<4sIIIdI")


def write_field_binary(z: SpectralField, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    grid = z.grid
    header = _HEADER.pack(FIELD_MAGIC, FIELD_VERSION, grid.dimension, grid.points, grid.box, z.components)
    with open(path, "wb") as fh:
        fh.write(header.ljust(HEADER_SIZE, b"\0"))
        fh.write(np.ascontiguousarray(z.coefficients, dtype="<c16").tobytes())
    return path


def read_field_binary(path: str | Path) -> SpectralField:
    data = Path(path).read_bytes()
    if len(data) < HEADER_SIZE:
        raise UsageError(f"{path}: truncated field dump")
    magic, version, d, n, box, components = _HEADER.unpack_from(data)
    if magic != FIELD_MAGIC or version != FIELD_VERSION:
        raise UsageError(f"{path}: not a version {FIELD_VERSION} field dump")
    grid = Grid(d, n, box)
    coefficients = np.frombuffer(data, dtype="<c16", offset=HEADER_SIZE)
    return SpectralField(grid, coefficients.reshape((components,) + grid.shape).copy())


def write_field_ndjson(z: SpectralField, t: float, path: str | Path) -> Path:
    """One line per nonzero coefficient: {t, component, k, re, im} with signed lattice indices."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    indices = z.grid.indices
    with open(path, "w", encoding="utf-8") as fh:
        for position in zip(*np.nonzero(z.coefficients)):
            component, lattice = position[0], position[1:]
            value = z.coefficients[position]
            record = {
                "t": t,
                "component": int(component),
                "k": [int(indices[(axis,) + lattice]) for axis in range(z.grid.dimension)],
                "re": float(value.real),
                "im": float(value.imag),
            }
            fh.write(json.dumps(record) + "\n")
    return path


def read_field_ndjson(path: str | Path, grid: Grid, components: int) -> tuple[float | None, SpectralField]:
    coefficients = np.zeros((components,) + grid.shape, dtype=complex)
    t = None
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            record = json.loads(line)
            t = record["t"]
            lattice = tuple(int(k) % grid.points for k in record["k"])
            coefficients[(record["component"],) + lattice] = complex(record["re"], record["im"])
    return t, SpectralField(grid, coefficients)
