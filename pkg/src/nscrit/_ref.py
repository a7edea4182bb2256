"""Pure-numpy reference implementations of the hot pointwise kernels.

Signatures mirror the compiled backend in ``_accel.pyx``: all array
arguments are raveled C-contiguous views, output arguments are written
in place.
"""

from __future__ import annotations

import numpy as np

NAME = "python"


def abs_pow_sum(x: np.ndarray, p: float) -> float:
    """Sum of |x|**p."""
    if p == 2.0:
        return float(np.dot(x, x))
    if p == 1.0:
        return float(np.sum(np.abs(x)))
    return float(np.sum(np.abs(x) ** p))


def mag_pow_sum(x: np.ndarray, y: np.ndarray, z: np.ndarray, p: float) -> float:
    """Sum of (x^2 + y^2 + z^2)^(p/2)."""
    msq = x * x + y * y + z * z
    if p == 2.0:
        return float(np.sum(msq))
    return float(np.sum(msq ** (0.5 * p)))


def triple_product_sum(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> float:
    """Sum of a*b*c."""
    return float(np.sum(a * b * c))


def advect(u1, u2, u3, g11, g12, g13, g21, g22, g23, g31, g32, g33, w1, w2, w3) -> None:
    """w_i = sum_j u_j * g_ij with g_ij the derivative of component i along axis j."""
    np.copyto(w1, u1 * g11 + u2 * g12 + u3 * g13)
    np.copyto(w2, u1 * g21 + u2 * g22 + u3 * g23)
    np.copyto(w3, u1 * g31 + u2 * g32 + u3 * g33)


def project_and_mask(c1, c2, c3, k1, k2, k3, inv_ksq, mask) -> None:
    """In-place solenoidal projection fused with the dealias mask.

    c_i <- (c_i - k_i * (k . c) / |k|^2) * mask, with inv_ksq zero at
    modes where the derivative symbol vanishes (those stay untouched by
    the projection part).
    """
    d = (k1 * c1 + k2 * c2 + k3 * c3) * inv_ksq
    c1 -= k1 * d
    c2 -= k2 * d
    c3 -= k3 * d
    c1 *= mask
    c2 *= mask
    c3 *= mask
