"""Periodic box geometry and cached spectral lattice quantities.

Physical fields are sampled on a uniform n1 x n2 x n3 grid covering
[0, L)^3 with x1 along the first array axis. Spectral data lives in the
real-FFT half lattice (last axis truncated to n3//2 + 1), with integer
wavevectors scaled by 2*pi/L.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class GridSpec:
    """Uniform collocation grid on the periodic box [0, L]^3."""

    n1: int
    n2: int
    n3: int
    length: float = TWO_PI

    def __post_init__(self):
        for n in (self.n1, self.n2, self.n3):
            if not isinstance(n, (int, np.integer)) or n < 4 or n % 2 != 0:
                raise ValueError(f"points per axis must be even integers >= 4, got {n!r}")
        if not (isinstance(self.length, (int, float)) and math.isfinite(self.length) and self.length > 0.0):
            raise ValueError(f"box edge must be a positive finite real, got {self.length!r}")

    @classmethod
    def cubic(cls, n: int, length: float = TWO_PI) -> "GridSpec":
        return cls(n, n, n, length)

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.n1, self.n2, self.n3)

    @property
    def spectral_shape(self) -> tuple[int, int, int]:
        return (self.n1, self.n2, self.n3 // 2 + 1)

    @property
    def npoints(self) -> int:
        return self.n1 * self.n2 * self.n3

    @property
    def volume(self) -> float:
        return self.length ** 3

    @property
    def cell_volume(self) -> float:
        return self.length ** 3 / self.npoints

    @property
    def dx(self) -> tuple[float, float, float]:
        return tuple(self.length / n for n in self.shape)

    def axis_coords(self, axis: int) -> np.ndarray:
        """Collocation points x_m = m*L/n along a 1-based axis."""
        n = self.shape[axis - 1]
        return np.arange(n) * (self.length / n)

    def meshgrid(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Open (broadcastable) coordinate arrays X1, X2, X3."""
        x1, x2, x3 = (self.axis_coords(a) for a in (1, 2, 3))
        return x1[:, None, None], x2[None, :, None], x3[None, None, :]


class Wavenumbers:
    """rfft-layout wavevector arrays for one grid.

    Two quadratic symbols are kept: ``ksq`` uses the full fftfreq values
    (correct for the Laplacian and the viscous factor, where the Nyquist
    sign is immaterial), while first-derivative arrays ``d1..d3`` zero the
    Nyquist mode so that odd derivatives of real fields stay real.
    """

    def __init__(self, grid: GridSpec):
        self.grid = grid
        n1, n2, n3 = grid.shape
        scale = TWO_PI / grid.length

        i1 = np.fft.fftfreq(n1, 1.0 / n1)
        i2 = np.fft.fftfreq(n2, 1.0 / n2)
        i3 = np.fft.rfftfreq(n3, 1.0 / n3)
        self.i1 = i1[:, None, None]
        self.i2 = i2[None, :, None]
        self.i3 = i3[None, None, :]

        self.ksq = (scale ** 2) * (self.i1 ** 2 + self.i2 ** 2 + self.i3 ** 2)

        d1, d2, d3 = scale * i1, scale * i2, scale * i3.copy()
        d1[n1 // 2] = 0.0
        d2[n2 // 2] = 0.0
        d3[n3 // 2] = 0.0
        self.d1 = d1[:, None, None]
        self.d2 = d2[None, :, None]
        self.d3 = d3[None, None, :]

        self.ksq_grad = self.d1 ** 2 + self.d2 ** 2 + self.d3 ** 2
        self.ksq_h = self.d1 ** 2 + self.d2 ** 2
        safe = np.where(self.ksq_grad > 0.0, self.ksq_grad, 1.0)
        self.inv_ksq_grad = np.where(self.ksq_grad > 0.0, 1.0 / safe, 0.0)

        self.dealias_mask = (
            (np.abs(self.i1) <= n1 / 3.0)
            & (np.abs(self.i2) <= n2 / 3.0)
            & (np.abs(self.i3) <= n3 / 3.0)
        )

        # rfft multiplicity: interior k3 entries stand for a conjugate pair.
        w3 = np.full(n3 // 2 + 1, 2.0)
        w3[0] = 1.0
        w3[-1] = 1.0
        self.weights = w3[None, None, :]

        self._dense = None

    def dense(self) -> dict[str, np.ndarray]:
        """Raveled full-size arrays for the pointwise kernels (lazy)."""
        if self._dense is None:
            shape = self.grid.spectral_shape
            full = lambda a: np.array(np.broadcast_to(a, shape), dtype=np.float64).ravel()
            self._dense = {
                "d1": full(self.d1),
                "d2": full(self.d2),
                "d3": full(self.d3),
                "inv_ksq": full(self.inv_ksq_grad),
                "mask": full(self.dealias_mask.astype(np.float64)),
            }
        return self._dense


@lru_cache(maxsize=64)
def wavenumbers(grid: GridSpec) -> Wavenumbers:
    return Wavenumbers(grid)
