# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops.

The spectral integrands are exported through ``__pyx_capi__`` with the
``double (double, void *)`` signature so that ``scipy.integrate.quad`` can
call them as ``LowLevelCallable`` objects without re-entering Python.
``user_data`` points to a C array of doubles; slot 0 is the temperature ratio.
"""

from libc.math cimport tanh, sqrt, M_PI

import numpy as np


cdef api double ohmic_density(double w, void *user_data) noexcept nogil:
    return w / (M_PI * (w * w + 1.0))


cdef api double ohmic_noise_bose(double w, void *user_data) noexcept nogil:
    cdef double temp = (<double *> user_data)[0]
    if w == 0.0:
        return 2.0 * temp / M_PI
    return w / (M_PI * (w * w + 1.0)) / tanh(w / (2.0 * temp))


cdef api double ohmic_noise_high_t(double w, void *user_data) noexcept nogil:
    cdef double temp = (<double *> user_data)[0]
    return temp / (M_PI * (w * w + 1.0))


cdef inline double _cond_det(const double[:, ::1] s, double p, double q) noexcept nogil:
    # det of A - C (B + sigma_M)^-1 C^T, sigma_M parametrised on the unit disk
    cdef double t2 = p * p + q * q
    cdef double h = 0.5 / sqrt(1.0 - t2)
    cdef double m00 = s[2, 2] + h * (1.0 + p)
    cdef double m01 = s[2, 3] - h * q
    cdef double m11 = s[3, 3] + h * (1.0 - p)
    cdef double det_m = m00 * m11 - m01 * m01
    cdef double i00 = m11 / det_m
    cdef double i01 = -m01 / det_m
    cdef double i11 = m00 / det_m
    cdef double c00 = s[0, 2], c01 = s[0, 3], c10 = s[1, 2], c11 = s[1, 3]
    # C M^-1
    cdef double k00 = c00 * i00 + c01 * i01
    cdef double k01 = c00 * i01 + c01 * i11
    cdef double k10 = c10 * i00 + c11 * i01
    cdef double k11 = c10 * i01 + c11 * i11
    cdef double t00 = s[0, 0] - (k00 * c00 + k01 * c01)
    cdef double t01 = s[0, 1] - (k00 * c10 + k01 * c11)
    cdef double t11 = s[1, 1] - (k10 * c10 + k11 * c11)
    return t00 * t11 - t01 * t01


def conditional_det(sigma, double p, double q):
    cdef const double[:, ::1] s = np.ascontiguousarray(sigma, dtype=np.float64)
    return _cond_det(s, p, q)


def conditional_det_grid(sigma, p, q):
    cdef const double[:, ::1] s = np.ascontiguousarray(sigma, dtype=np.float64)
    cdef const double[::1] pv = np.ascontiguousarray(p, dtype=np.float64).ravel()
    cdef const double[::1] qv = np.ascontiguousarray(q, dtype=np.float64).ravel()
    cdef Py_ssize_t n = pv.shape[0], i
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    with nogil:
        for i in range(n):
            ov[i] = _cond_det(s, pv[i], qv[i])
    return out.reshape(np.shape(p))
