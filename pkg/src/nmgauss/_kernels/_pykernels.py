"""Pure-Python twins of the compiled kernels (same signatures, same math)."""

import math

import numpy as np


def ohmic_density(w, temp=None):
    return w / (math.pi * (w * w + 1.0))


def ohmic_noise_bose(w, temp):
    if w == 0.0:
        return 2.0 * temp / math.pi
    return w / (math.pi * (w * w + 1.0)) / math.tanh(w / (2.0 * temp))


def ohmic_noise_high_t(w, temp):
    return temp / (math.pi * (w * w + 1.0))


def conditional_det(sigma, p, q):
    s = sigma
    h = 0.5 / math.sqrt(1.0 - p * p - q * q)
    m00 = s[2, 2] + h * (1.0 + p)
    m01 = s[2, 3] - h * q
    m11 = s[3, 3] + h * (1.0 - p)
    det_m = m00 * m11 - m01 * m01
    i00, i01, i11 = m11 / det_m, -m01 / det_m, m00 / det_m
    c00, c01, c10, c11 = s[0, 2], s[0, 3], s[1, 2], s[1, 3]
    k00 = c00 * i00 + c01 * i01
    k01 = c00 * i01 + c01 * i11
    k10 = c10 * i00 + c11 * i01
    k11 = c10 * i01 + c11 * i11
    t00 = s[0, 0] - (k00 * c00 + k01 * c01)
    t01 = s[0, 1] - (k00 * c10 + k01 * c11)
    t11 = s[1, 1] - (k10 * c10 + k11 * c11)
    return float(t00 * t11 - t01 * t01)


def conditional_det_grid(sigma, p, q):
    s = np.asarray(sigma, dtype=float)
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    h = 0.5 / np.sqrt(1.0 - p * p - q * q)
    m00 = s[2, 2] + h * (1.0 + p)
    m01 = s[2, 3] - h * q
    m11 = s[3, 3] + h * (1.0 - p)
    det_m = m00 * m11 - m01 * m01
    i00, i01, i11 = m11 / det_m, -m01 / det_m, m00 / det_m
    c00, c01, c10, c11 = s[0, 2], s[0, 3], s[1, 2], s[1, 3]
    k00 = c00 * i00 + c01 * i01
    k01 = c00 * i01 + c01 * i11
    k10 = c10 * i00 + c11 * i01
    k11 = c10 * i01 + c11 * i11
    t00 = s[0, 0] - (k00 * c00 + k01 * c01)
    t01 = s[0, 1] - (k00 * c10 + k01 * c11)
    t11 = s[1, 1] - (k10 * c10 + k11 * c11)
    return t00 * t11 - t01 * t01
