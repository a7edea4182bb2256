"""Scalar and vector fields on the periodic box, and the spectral operators.

All operations are pure: inputs are never mutated. Transforms use the real
FFT over the last axis; coefficients are normalized so that the zero mode
equals the field mean and ``coefficient(-k) == conj(coefficient(k))``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
import scipy.fft

from .grid import GridSpec, wavenumbers


def fft_workers() -> int:
    """FFT worker threads, capped by the NSC_THREADS environment variable."""
    try:
        return max(1, int(os.environ.get("NSC_THREADS", "1")))
    except ValueError:
        return 1


@dataclass
class ScalarField:
    """Real point values f(x_m) on the collocation grid."""

    grid: GridSpec
    samples: np.ndarray

    def __post_init__(self):
        self.samples = np.ascontiguousarray(self.samples, dtype=np.float64)
        if self.samples.shape != self.grid.shape:
            raise ValueError(f"samples shape {self.samples.shape} != grid shape {self.grid.shape}")
        if not np.isfinite(self.samples).all():
            raise ValueError("scalar field contains non-finite samples")


@dataclass
class VectorField:
    """Three scalar components u1, u2, u3 sharing one grid."""

    grid: GridSpec
    u1: ScalarField
    u2: ScalarField
    u3: ScalarField

    def __post_init__(self):
        for c in self.components:
            if c.grid != self.grid:
                raise ValueError("vector components must share the grid")

    @classmethod
    def from_samples(cls, grid: GridSpec, a1, a2, a3) -> "VectorField":
        return cls(grid, ScalarField(grid, a1), ScalarField(grid, a2), ScalarField(grid, a3))

    @property
    def components(self) -> tuple[ScalarField, ScalarField, ScalarField]:
        return (self.u1, self.u2, self.u3)

    def component(self, j: int) -> ScalarField:
        """1-based component access."""
        return self.components[j - 1]


@dataclass
class SpectralScalarField:
    """Fourier coefficients in rfft layout, zero mode = field mean."""

    grid: GridSpec
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.ascontiguousarray(self.coeffs, dtype=np.complex128)
        if self.coeffs.shape != self.grid.spectral_shape:
            raise ValueError(f"coeff shape {self.coeffs.shape} != spectral shape {self.grid.spectral_shape}")
        if not np.isfinite(self.coeffs).all():
            raise ValueError("spectral field contains non-finite coefficients")


@dataclass
class SpectralVectorField:
    """Stacked spectral components, shape (3,) + spectral_shape."""

    grid: GridSpec
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.ascontiguousarray(self.coeffs, dtype=np.complex128)
        if self.coeffs.shape != (3,) + self.grid.spectral_shape:
            raise ValueError(f"coeff shape {self.coeffs.shape} != (3,)+{self.grid.spectral_shape}")
        if not np.isfinite(self.coeffs).all():
            raise ValueError("spectral field contains non-finite coefficients")

    def component(self, j: int) -> SpectralScalarField:
        """1-based component access (copies the slice)."""
        return SpectralScalarField(self.grid, self.coeffs[j - 1].copy())


# -- transforms ---------------------------------------------------------------

def forward(field: ScalarField) -> SpectralScalarField:
    """Physical samples -> normalized rfft coefficients."""
    c = scipy.fft.rfftn(field.samples, workers=fft_workers()) / field.grid.npoints
    return SpectralScalarField(field.grid, c)


def inverse(spec: SpectralScalarField) -> ScalarField:
    """Normalized rfft coefficients -> physical samples."""
    s = scipy.fft.irfftn(spec.coeffs * spec.grid.npoints, s=spec.grid.shape, workers=fft_workers())
    return ScalarField(spec.grid, s)


def forward_vector(v: VectorField) -> SpectralVectorField:
    c = np.stack([forward(comp).coeffs for comp in v.components])
    return SpectralVectorField(v.grid, c)


def inverse_vector(spec: SpectralVectorField) -> VectorField:
    comps = [inverse(SpectralScalarField(spec.grid, spec.coeffs[i])).samples for i in range(3)]
    return VectorField.from_samples(spec.grid, *comps)


def coefficient(spec: SpectralScalarField, k1: int, k2: int, k3: int) -> complex:
    """Coefficient at integer wavevector k, resolving the implicit half lattice."""
    n1, n2, n3 = spec.grid.shape
    for k, n in ((k1, n1), (k2, n2), (k3, n3)):
        if abs(k) > n // 2:
            raise ValueError(f"wavevector component {k} beyond Nyquist {n // 2}")
    if k3 < 0:
        return complex(np.conj(spec.coeffs[(-k1) % n1, (-k2) % n2, -k3]))
    return complex(spec.coeffs[k1 % n1, k2 % n2, k3])


def hermitian_defect(spec: SpectralScalarField) -> float:
    """Max |coeff(-k) - conj(coeff(k))| over the self-conjugate k3 planes."""
    defect = 0.0
    for i3 in (0, spec.grid.n3 // 2):
        plane = spec.coeffs[:, :, i3]
        mirrored = plane[::-1, ::-1]
        mirrored = np.roll(mirrored, (1, 1), axis=(0, 1))
        defect = max(defect, float(np.max(np.abs(mirrored - np.conj(plane)))))
    return defect


# -- spectral operators --------------------------------------------------------

def derivative(spec: SpectralScalarField, axis: int) -> SpectralScalarField:
    """Spectral partial derivative along a 1-based axis (Nyquist mode zeroed)."""
    if axis not in (1, 2, 3):
        raise ValueError(f"axis must be 1, 2 or 3, got {axis}")
    kk = wavenumbers(spec.grid)
    d = (kk.d1, kk.d2, kk.d3)[axis - 1]
    return SpectralScalarField(spec.grid, 1j * d * spec.coeffs)


def divergence(spec: SpectralVectorField) -> SpectralScalarField:
    kk = wavenumbers(spec.grid)
    c = 1j * (kk.d1 * spec.coeffs[0] + kk.d2 * spec.coeffs[1] + kk.d3 * spec.coeffs[2])
    return SpectralScalarField(spec.grid, c)


def leray_project(spec: SpectralVectorField) -> SpectralVectorField:
    """Mode-wise projection onto divergence-free fields; zero mode unchanged."""
    kk = wavenumbers(spec.grid)
    c = spec.coeffs
    d = (kk.d1 * c[0] + kk.d2 * c[1] + kk.d3 * c[2]) * kk.inv_ksq_grad
    out = np.stack([c[0] - kk.d1 * d, c[1] - kk.d2 * d, c[2] - kk.d3 * d])
    return SpectralVectorField(spec.grid, out)


def dealias(spec: SpectralScalarField | SpectralVectorField):
    """Zero all modes with any |k_i| > n_i/3 (2/3 rule)."""
    mask = wavenumbers(spec.grid).dealias_mask
    if isinstance(spec, SpectralVectorField):
        return SpectralVectorField(spec.grid, spec.coeffs * mask)
    return SpectralScalarField(spec.grid, spec.coeffs * mask)


def refine(field: ScalarField, factor: int = 2) -> ScalarField:
    """Resample on a factor-times finer grid by zero-padding the spectrum."""
    if factor < 1:
        raise ValueError("refinement factor must be >= 1")
    g = field.grid
    fine = GridSpec(g.n1 * factor, g.n2 * factor, g.n3 * factor, g.length)
    src = forward(field).coeffs
    out = np.zeros(fine.spectral_shape, dtype=np.complex128)
    h1, h2 = g.n1 // 2, g.n2 // 2
    sl1 = np.r_[0:h1 + 1, fine.n1 - (g.n1 - h1 - 1):fine.n1]
    sl2 = np.r_[0:h2 + 1, fine.n2 - (g.n2 - h2 - 1):fine.n2]
    out[np.ix_(sl1, sl2, np.arange(g.n3 // 2 + 1))] = src
    return inverse(SpectralScalarField(fine, out))


def transpose_x1_x3(field: ScalarField) -> ScalarField:
    """Relabel axes x1 <-> x3 (used by the axis-duality checks)."""
    g = field.grid
    return ScalarField(GridSpec(g.n3, g.n2, g.n1, g.length), field.samples.transpose(2, 1, 0).copy())


# -- canonical initial conditions ---------------------------------------------

def taylor_green(grid: GridSpec) -> VectorField:
    """Solenoidal vortex u = (sin kx1 cos kx2 cos kx3, -cos kx1 sin kx2 cos kx3, 0), k = 2*pi/L."""
    x1, x2, x3 = grid.meshgrid()
    k = 2.0 * np.pi / grid.length
    a1 = np.broadcast_to(np.sin(k * x1) * np.cos(k * x2) * np.cos(k * x3), grid.shape)
    a2 = np.broadcast_to(-np.cos(k * x1) * np.sin(k * x2) * np.cos(k * x3), grid.shape)
    return VectorField.from_samples(grid, a1.copy(), a2.copy(), np.zeros(grid.shape))


def random_solenoidal(grid: GridSpec, energy_spectrum_slope: float, k_peak: float, seed: int) -> VectorField:
    """Seeded divergence-free field with shell energy ~ k^slope * exp(-(k/k_peak)^2).

    Built from white noise shaped mode-by-mode, solenoidally projected,
    zero-meaned, dealiased and normalized to unit mean-square velocity.
    """
    band = min(grid.shape) // 3
    if not (0 < k_peak <= band):
        raise ValueError(f"k_peak must lie in the dealiased band (0, {band}], got {k_peak}")
    kk = wavenumbers(grid)
    rng = np.random.default_rng(seed)
    kmag = np.sqrt(kk.i1 ** 2 + kk.i2 ** 2 + kk.i3 ** 2)
    safe = np.where(kmag > 0.0, kmag, 1.0)
    amp = safe ** (0.5 * (energy_spectrum_slope - 2.0)) * np.exp(-0.5 * (kmag / k_peak) ** 2)
    amp[kmag == 0.0] = 0.0
    coeffs = np.empty((3,) + grid.spectral_shape, dtype=np.complex128)
    for i in range(3):
        noise = rng.standard_normal(grid.shape)
        coeffs[i] = scipy.fft.rfftn(noise, workers=fft_workers()) / grid.npoints * amp
    spec = dealias(leray_project(SpectralVectorField(grid, coeffs)))
    spec.coeffs[:, 0, 0, 0] = 0.0
    v = inverse_vector(spec)
    msq = sum(float(np.mean(c.samples ** 2)) for c in v.components)
    if msq <= 0.0:
        raise ValueError("random field degenerated to zero; widen the spectrum")
    s = 1.0 / np.sqrt(msq)
    return VectorField.from_samples(grid, *(s * c.samples for c in v.components))


def random_bandlimited(grid: GridSpec, max_mode: int, rng: np.random.Generator) -> ScalarField:
    """Random trigonometric polynomial with |k_i| <= max_mode per axis."""
    if max_mode < 1 or max_mode > min(grid.shape) // 2 - 1:
        raise ValueError(f"max_mode must be in [1, {min(grid.shape) // 2 - 1}], got {max_mode}")
    kk = wavenumbers(grid)
    keep = (np.abs(kk.i1) <= max_mode) & (np.abs(kk.i2) <= max_mode) & (np.abs(kk.i3) <= max_mode)
    noise = rng.standard_normal(grid.shape)
    c = scipy.fft.rfftn(noise, workers=fft_workers()) / grid.npoints * keep
    return inverse(SpectralScalarField(grid, c))
