# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled pointwise kernels: fused loops over raveled field arrays.

Same signatures as the numpy fallback in ``_ref.py``. The win over numpy
comes from avoiding temporaries, integer-exponent powers by repeated
multiplication, and fused projection arithmetic.
"""

from libc.math cimport fabs, pow, sqrt

NAME = "compiled"


cdef inline double _ipow(double v, int ip) nogil:
    cdef double acc = v
    cdef int j
    for j in range(ip - 1):
        acc *= v
    return acc


def abs_pow_sum(double[::1] x, double p):
    """Sum of |x|**p."""
    cdef Py_ssize_t i, n = x.shape[0]
    cdef double acc = 0.0, v
    cdef int ip = <int> p
    if p == 2.0:
        for i in range(n):
            v = x[i]
            acc += v * v
    elif p == 1.0:
        for i in range(n):
            acc += fabs(x[i])
    elif p == ip and 1 <= ip <= 32:
        if ip % 2 == 0:
            for i in range(n):
                v = x[i] * x[i]
                acc += _ipow(v, ip // 2)
        else:
            for i in range(n):
                acc += _ipow(fabs(x[i]), ip)
    elif p - ip == 0.5 and 1 <= ip <= 32:
        for i in range(n):
            v = fabs(x[i])
            acc += _ipow(v, ip) * sqrt(v)
    else:
        for i in range(n):
            acc += pow(fabs(x[i]), p)
    return acc


def mag_pow_sum(double[::1] x, double[::1] y, double[::1] z, double p):
    """Sum of (x^2 + y^2 + z^2)^(p/2)."""
    cdef Py_ssize_t i, n = x.shape[0]
    cdef double acc = 0.0, m
    cdef double half_p = 0.5 * p
    cdef int ihalf = <int> half_p
    if p == 2.0:
        for i in range(n):
            acc += x[i] * x[i] + y[i] * y[i] + z[i] * z[i]
    elif half_p == ihalf and 1 <= ihalf <= 16:
        for i in range(n):
            m = x[i] * x[i] + y[i] * y[i] + z[i] * z[i]
            acc += _ipow(m, ihalf)
    elif p == <int> p and 1 <= <int> p <= 32:
        # odd integer p: m^((p-1)/2) * sqrt(m)
        for i in range(n):
            m = x[i] * x[i] + y[i] * y[i] + z[i] * z[i]
            acc += _ipow(m, (<int> p - 1) // 2) * sqrt(m) if p > 1 else sqrt(m)
    else:
        for i in range(n):
            m = x[i] * x[i] + y[i] * y[i] + z[i] * z[i]
            acc += pow(m, half_p)
    return acc


def triple_product_sum(double[::1] a, double[::1] b, double[::1] c):
    """Sum of a*b*c."""
    cdef Py_ssize_t i, n = a.shape[0]
    cdef double acc = 0.0
    for i in range(n):
        acc += a[i] * b[i] * c[i]
    return acc


def advect(double[::1] u1, double[::1] u2, double[::1] u3,
           double[::1] g11, double[::1] g12, double[::1] g13,
           double[::1] g21, double[::1] g22, double[::1] g23,
           double[::1] g31, double[::1] g32, double[::1] g33,
           double[::1] w1, double[::1] w2, double[::1] w3):
    """w_i = sum_j u_j * g_ij with g_ij the derivative of component i along axis j."""
    cdef Py_ssize_t i, n = u1.shape[0]
    cdef double a, b, c
    for i in range(n):
        a = u1[i]
        b = u2[i]
        c = u3[i]
        w1[i] = a * g11[i] + b * g12[i] + c * g13[i]
        w2[i] = a * g21[i] + b * g22[i] + c * g23[i]
        w3[i] = a * g31[i] + b * g32[i] + c * g33[i]
    return None


def project_and_mask(double complex[::1] c1, double complex[::1] c2, double complex[::1] c3,
                     double[::1] k1, double[::1] k2, double[::1] k3,
                     double[::1] inv_ksq, double[::1] mask):
    """In-place solenoidal projection fused with the dealias mask."""
    cdef Py_ssize_t i, n = c1.shape[0]
    cdef double a1, b1, a2, b2, a3, b3, dr, di, m, q1, q2, q3
    for i in range(n):
        a1 = c1[i].real
        b1 = c1[i].imag
        a2 = c2[i].real
        b2 = c2[i].imag
        a3 = c3[i].real
        b3 = c3[i].imag
        q1 = k1[i]
        q2 = k2[i]
        q3 = k3[i]
        dr = (q1 * a1 + q2 * a2 + q3 * a3) * inv_ksq[i]
        di = (q1 * b1 + q2 * b2 + q3 * b3) * inv_ksq[i]
        m = mask[i]
        c1[i] = ((a1 - q1 * dr) + 1j * (b1 - q1 * di)) * m
        c2[i] = ((a2 - q2 * dr) + 1j * (b2 - q2 * di)) * m
        c3[i] = ((a3 - q3 * dr) + 1j * (b3 - q3 * di)) * m
    return None
