"""Flat binary velocity snapshots.

Layout (little-endian):
  magic   5 bytes  b"NSCF1"
  n1,n2,n3  3x uint32
  L, t      2x float64
  u1, u2, u3  each n1*n2*n3 float64 in x1-fastest order
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .fields import VectorField
from .grid import GridSpec

MAGIC = b"NSCF1"
_HEADER = struct.Struct("<5sIIIdd")


def write_snapshot(path: Path, field: VectorField, t: float = 0.0) -> None:
    g = field.grid
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, g.n1, g.n2, g.n3, g.length, t))
        for comp in field.components:
            fh.write(np.ascontiguousarray(comp.samples.ravel(order="F"), dtype="<f8").tobytes())


def read_snapshot(path: Path) -> tuple[VectorField, float]:
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) != _HEADER.size:
            raise ValueError(f"{path}: truncated header")
        magic, n1, n2, n3, length, t = _HEADER.unpack(head)
        if magic != MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}")
        grid = GridSpec(int(n1), int(n2), int(n3), float(length))
        comps = []
        count = grid.npoints
        for _ in range(3):
            raw = fh.read(count * 8)
            if len(raw) != count * 8:
                raise ValueError(f"{path}: truncated component data")
            arr = np.frombuffer(raw, dtype="<f8").reshape(grid.shape, order="F")
            comps.append(np.ascontiguousarray(arr))
    return VectorField.from_samples(grid, *comps), float(t)
