"""
Particle snapshots: NDJSON lines {i, x, v, w} and a raw binary dump.

Binary layout: 64-byte little-endian header (magic "VNSP", version, d,
particle count, L, zero padding) followed by float64 blocks in order
positions, velocities, weights, initial positions, initial velocities.
"""
import json
import struct
from pathlib import Path

import numpy as np

from vnslab.errors import UsageError
from vnslab.kinetic.particles import ParticleEnsemble

PARTICLE_MAGIC = b"VNSP"
PARTICLE_VERSION = 1
HEADER_SIZE = 64
_HEADER = struct.Struct("<4sIIQd")


def write_particles_binary(ens: ParticleEnsemble, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = _HEADER.pack(PARTICLE_MAGIC, PARTICLE_VERSION, ens.dimension, ens.count, ens.box)
    with open(path, "wb") as fh:
        fh.write(header.ljust(HEADER_SIZE, b"\0"))
        for block in (ens.positions, ens.velocities, ens.weights,
                      ens.initial_positions, ens.initial_velocities):
            fh.write(np.ascontiguousarray(block, dtype="<f8").tobytes())
    return path


def read_particles_binary(path: str | Path) -> ParticleEnsemble:
    data = Path(path).read_bytes()
    if len(data) < HEADER_SIZE:
        raise UsageError(f"{path}: truncated particle dump")
    magic, version, d, count, box = _HEADER.unpack_from(data)
    if magic != PARTICLE_MAGIC or version != PARTICLE_VERSION:
        raise UsageError(f"{path}: not a version {PARTICLE_VERSION} particle dump")
    values = np.frombuffer(data, dtype="<f8", offset=HEADER_SIZE)
    if values.size != count * (4 * d + 1):
        raise UsageError(f"{path}: expected {count} particles in {d} dimensions")
    phase = count * d
    x, v = values[:phase], values[phase:2 * phase]
    w = values[2 * phase:2 * phase + count]
    x0 = values[2 * phase + count:3 * phase + count]
    v0 = values[3 * phase + count:]
    return ParticleEnsemble(
        positions=x.reshape(count, d).copy(),
        velocities=v.reshape(count, d).copy(),
        weights=w.copy(),
        initial_positions=x0.reshape(count, d).copy(),
        initial_velocities=v0.reshape(count, d).copy(),
        box=box,
    )


def write_particles_ndjson(ens: ParticleEnsemble, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for i in range(ens.count):
            record = {
                "i": i,
                "x": ens.positions[i].tolist(),
                "v": ens.velocities[i].tolist(),
                "w": float(ens.weights[i]),
            }
            fh.write(json.dumps(record) + "\n")
    return path


def read_particles_ndjson(path: str | Path, box: float) -> ParticleEnsemble:
    """Current state only; the loaded positions become the initial records."""
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                records.append(json.loads(line))
    if not records:
        raise UsageError(f"{path}: empty particle snapshot")
    records.sort(key=lambda r: r["i"])
    return ParticleEnsemble.from_arrays(
        [r["x"] for r in records], [r["v"] for r in records], [r["w"] for r in records], box,
    )
