"""Lebesgue, Sobolev and axis-collapsed norms on the collocation grid.

L^p values for general p come from rectangle-rule quadrature, which for
smooth periodic integrands converges faster than any polynomial order;
p = infinity is the max over samples (an underestimate of the true sup
for under-resolved fields). L^2-type gradient norms are evaluated in
spectral space via the Parseval identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .fields import ScalarField, SpectralScalarField, VectorField, forward, forward_vector
from .grid import wavenumbers


@dataclass(frozen=True)
class NormValue:
    value: float
    p: float
    kind: str  # lebesgue | sobolev_h1 | sup_axis_mixed

    def __post_init__(self):
        if self.value < 0.0 or not math.isfinite(self.value):
            raise ValueError(f"norm value must be finite and nonnegative, got {self.value}")


@dataclass(frozen=True)
class GradientNorms:
    """L2 norms of the velocity Jacobian and its contractions (not squared)."""

    grad: float          # ||grad u||_2
    grad_h: float        # first two Jacobian columns only
    laplacian: float     # ||lap u||_2
    grad_h_grad: float   # ||grad_h grad u||_2
    entries: dict[float, np.ndarray]  # alpha -> 3x3 matrix of ||d u_j / d x_k||_alpha


def _quad_lp(samples: np.ndarray, p: float, cell: float) -> float:
    if p == math.inf:
        return float(np.max(np.abs(samples)))
    return (cell * kernels.abs_pow_sum(samples.ravel(), p)) ** (1.0 / p)


def _quad_lp_vec(v: VectorField, p: float) -> float:
    a, b, c = (comp.samples.ravel() for comp in v.components)
    if p == math.inf:
        return float(np.sqrt(np.max(a * a + b * b + c * c)))
    return (v.grid.cell_volume * kernels.mag_pow_sum(a, b, c, p)) ** (1.0 / p)


def lp_norm(field: ScalarField | VectorField, p: float) -> NormValue:
    """Quadrature L^p norm; vector fields use the pointwise Euclidean magnitude."""
    if p != math.inf and not p >= 1.0:
        raise ValueError(f"exponent p must be >= 1 or inf, got {p}")
    if isinstance(field, VectorField):
        return NormValue(_quad_lp_vec(field, p), p, "lebesgue")
    return NormValue(_quad_lp(field.samples, p, field.grid.cell_volume), p, "lebesgue")


def _spectral_l2sq(spec: SpectralScalarField, symbol: np.ndarray | None = None) -> float:
    """V * sum of weights * symbol * |coeff|^2 over the half lattice."""
    kk = wavenumbers(spec.grid)
    mag = (spec.coeffs.real ** 2 + spec.coeffs.imag ** 2) * kk.weights
    if symbol is not None:
        mag = mag * symbol
    return float(spec.grid.volume * np.sum(mag))


def l2_norm_spectral(spec: SpectralScalarField) -> float:
    """Parseval L2 norm from coefficients."""
    return math.sqrt(_spectral_l2sq(spec))


def _h1_sq_scalar(field: ScalarField) -> float:
    spec = forward(field)
    kk = wavenumbers(field.grid)
    return _spectral_l2sq(spec) + _spectral_l2sq(spec, kk.ksq_grad)


def h1_norm(field: ScalarField | VectorField) -> NormValue:
    """(||f||_2^2 + ||grad f||_2^2)^(1/2) with spectral gradients."""
    if isinstance(field, VectorField):
        val = math.sqrt(sum(_h1_sq_scalar(c) for c in field.components))
    else:
        val = math.sqrt(_h1_sq_scalar(field))
    return NormValue(val, 2.0, "sobolev_h1")


def sup_axis_lr_norm(field: ScalarField, axis: int, r: float) -> NormValue:
    """Collapse one axis by max |f|, then the discrete L^r norm over the rest."""
    if axis not in (1, 2, 3):
        raise ValueError(f"axis must be 1, 2 or 3, got {axis}")
    if not (1.0 <= r < math.inf):
        raise ValueError(f"exponent r must satisfy 1 <= r < inf, got {r}")
    collapsed = np.max(np.abs(field.samples), axis=axis - 1)
    dx = field.grid.dx
    area = math.prod(d for i, d in enumerate(dx) if i != axis - 1)
    val = (area * kernels.abs_pow_sum(np.ascontiguousarray(collapsed).ravel(), r)) ** (1.0 / r)
    return NormValue(val, r, "sup_axis_mixed")


def grad_norms(u: VectorField, alphas: tuple[float, ...] = ()) -> GradientNorms:
    """Jacobian L2 contractions plus the 3x3 entry-norm matrix per requested alpha.

    ``laplacian`` uses the full quadratic symbol (Nyquist included, since
    the Laplacian of the trigonometric interpolant keeps that mode); all
    first-derivative quantities share the derivative convention of
    :func:`nscrit.fields.derivative` (Nyquist zeroed).
    """
    grid = u.grid
    kk = wavenumbers(grid)
    spec = forward_vector(u)

    grad_sq = grad_h_sq = lap_sq = hh_sq = 0.0
    for i in range(3):
        comp = SpectralScalarField(grid, spec.coeffs[i])
        grad_sq += _spectral_l2sq(comp, kk.ksq_grad)
        grad_h_sq += _spectral_l2sq(comp, kk.ksq_h)
        lap_sq += _spectral_l2sq(comp, kk.ksq ** 2)
        hh_sq += _spectral_l2sq(comp, kk.ksq_h * kk.ksq_grad)

    entries: dict[float, np.ndarray] = {}
    if alphas:
        import scipy.fft

        from .fields import fft_workers

        ds = (kk.d1, kk.d2, kk.d3)
        deriv_phys = np.empty((3, 3) + grid.shape)
        for j in range(3):
            for k in range(3):
                deriv_phys[j, k] = scipy.fft.irfftn(
                    1j * ds[k] * spec.coeffs[j] * grid.npoints, s=grid.shape, workers=fft_workers()
                )
        for alpha in alphas:
            m = np.empty((3, 3))
            for j in range(3):
                for k in range(3):
                    m[j, k] = _quad_lp(deriv_phys[j, k], alpha, grid.cell_volume)
            entries[float(alpha)] = m

    return GradientNorms(
        grad=math.sqrt(grad_sq),
        grad_h=math.sqrt(grad_h_sq),
        laplacian=math.sqrt(lap_sq),
        grad_h_grad=math.sqrt(hh_sq),
        entries=entries,
    )
