"""Closed-form covariance propagation for independent and common reservoirs.

Per mode, the weak-coupling dynamics is a damped rotation plus diffusion:

    sigma(t) = exp(-Gamma) R sigma0 R^T + N(t),
    N(t)    = int_0^t exp(-(Gamma(t) - Gamma(s))) R(t-s) D(s) R(t-s)^T ds,

with ``R(u) = [[cos w0 u, sin w0 u], [-sin w0 u, cos w0 u]]``,
``D = [[0, Pi], [Pi, 2 Delta]]`` and ``Gamma(t) = 2 int_0^t gamma``.
Expanding ``R D R^T`` gives the noise block in terms of six scalar
integrals (see :class:`SecularIntegrals`)::

    N = Delta_G * 1 + [[-(D_co - P_si), D_si + P_co],
                       [  D_si + P_co,  D_co - P_si ]]

The common reservoir couples only X+ = (X1 + X2)/sqrt(2) to the bath, with
every coefficient multiplied by ``sqrt(2)``; the (+) mode then decays with
``exp(-sqrt(2) Gamma)`` and receives ``sqrt(2)`` times the noise, while the
(-) mode rotates freely. The derivation is in docs/moment_equations.md.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DomainError, QuadratureError, UnsupportedInputError
from .gaussian import TwoModeBlocks, as_covariance, is_twb_form
from .spectral import coefficient_model

COMMON_SCALE = math.sqrt(2.0)


class PropagatorMode(str, enum.Enum):
    SHORT_TIME = "short-time"
    EXACT = "exact"


@dataclass(frozen=True)
class SecularIntegrals:
    """Gamma and the five time convolutions of Delta and Pi.

    ``delta_gamma`` is the weighted integral of Delta; the ``*_co``/``*_si``
    entries carry the extra factor cos/sin(2 w0 (t - s)).
    """

    big_gamma: float
    delta_gamma: float
    delta_co: float
    delta_si: float
    pi_co: float
    pi_si: float
    error_estimate: float = 0.0

    @property
    def ns_diag(self):
        """Delta_co - Pi_si, the traceless diagonal part of the noise block."""
        return self.delta_co - self.pi_si

    @property
    def ns_off(self):
        """Delta_si + Pi_co, the off-diagonal part of the noise block."""
        return self.delta_si + self.pi_co

    def scaled(self, factor):
        return SecularIntegrals(
            self.big_gamma,
            factor * self.delta_gamma,
            factor * self.delta_co,
            factor * self.delta_si,
            factor * self.pi_co,
            factor * self.pi_si,
            factor * self.error_estimate,
        )


def rotation(tau, omega0=1.0):
    """Free rotation R(tau) of one mode; ``omega0 = 1/x`` in scaled units."""
    if tau < 0:
        raise DomainError("tau must be >= 0")
    c, s = math.cos(omega0 * tau), math.sin(omega0 * tau)
    return np.array([[c, s], [-s, c]])


def _e1(mu, t):
    """int_0^t exp(mu u) du for complex mu."""
    if abs(mu * t) < 1e-8:
        return t * (1 + mu * t / 2)
    return np.expm1(mu * t) / mu


def _short_time_closed(tau, bath, model):
    # Delta(s) = A [x - Re((x+i) e^{lam s})], Pi(s) = A [1 - Re((1-ix) e^{lam s})]
    x = bath.resonance_ratio
    amp = model.k * bath.temperature_ratio
    lam = model.lam
    ib = 2j * bath.omega0
    phase = np.exp(ib * tau)

    def conv(b, w):
        e_free = _e1(ib, tau)
        osc = 0.5 * phase * (w * _e1(lam - ib, tau) + np.conj(w) * _e1(np.conj(lam) - ib, tau))
        plain = b * tau - (w * _e1(lam, tau)).real
        return amp * plain, amp * (b * e_free - osc)

    d_plain, d_osc = conv(x, complex(x, 1.0))
    _, p_osc = conv(1.0, complex(1.0, -x))
    return SecularIntegrals(
        float(model.big_gamma(tau)),
        float(d_plain),
        float(d_osc.real),
        float(d_osc.imag),
        float(p_osc.real),
        float(p_osc.imag),
    )


def _numeric(tau, bath, model, weighted, gamma_scale, epsabs):
    w2 = 2.0 * bath.omega0
    big_t = float(model.big_gamma(tau))

    def integrand(s):
        d, p = model.delta(s), model.pi(s)
        w = math.exp(gamma_scale * (model.big_gamma(s) - big_t)) if weighted else 1.0
        c, sn = math.cos(w2 * (tau - s)), math.sin(w2 * (tau - s))
        return w * np.array([d, d * c, d * sn, p * c, p * sn])

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        vals, err = integrate.quad_vec(
            integrand, 0.0, float(tau), epsabs=epsabs, epsrel=1e-13, limit=4000
        )
    if not np.all(np.isfinite(vals)) or err > max(1e3 * epsabs, 1e-9 * np.max(np.abs(vals))):
        raise QuadratureError(f"secular integrals at tau={tau} did not converge", estimate=err)
    return SecularIntegrals(big_t, *(float(v) for v in vals), error_estimate=float(err))


def secular_integrals(tau, bath, mode=PropagatorMode.SHORT_TIME, gamma_scale=1.0, *,
                      epsabs=1e-13, model=None):
    """Gamma(tau) and the five convolution integrals.

    In short-time mode the weights ``exp(Gamma(s) - Gamma(tau))`` are set to 1;
    for the closed-form bath the integrals are then elementary and evaluated
    analytically. In exact mode the weights ``exp(g (Gamma(s) - Gamma(tau)))``
    are kept, with ``g = gamma_scale`` (``sqrt(2)`` for the (+) mode of a
    common reservoir), and the integrals are done by adaptive quadrature.
    ``Gamma`` itself is always reported unscaled.
    """
    mode = PropagatorMode(mode)
    tau = float(tau)
    if tau < 0:
        raise DomainError("tau must be >= 0")
    if tau == 0:
        return SecularIntegrals(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    if model is None:
        model = coefficient_model(bath, tau)
    if mode is PropagatorMode.SHORT_TIME and getattr(model, "analytic", False):
        return _short_time_closed(tau, bath, model)
    weighted = mode is PropagatorMode.EXACT
    return _numeric(tau, bath, model, weighted, gamma_scale, epsabs)


def noise_from_integrals(ints):
    """The matrix 2 W-bar assembled from the convolution integrals."""
    dg, nd, no = ints.delta_gamma, ints.ns_diag, ints.ns_off
    return np.array([[dg - nd, no], [no, dg + nd]])


def noise_block(tau, bath, mode=PropagatorMode.SHORT_TIME, gamma_scale=1.0, **kw):
    """W-bar(tau), such that a single mode picks up ``2 W-bar`` of noise."""
    return 0.5 * noise_from_integrals(secular_integrals(tau, bath, mode, gamma_scale, **kw))


def _direct_sum(a, b):
    out = np.zeros((4, 4))
    out[:2, :2] = a
    out[2:, 2:] = b
    return out


def propagate_independent(sigma0, tau, bath, mode=PropagatorMode.SHORT_TIME, *, ints=None,
                          **kw):
    """sigma(tau) = exp(-Gamma) [R + R] sigma0 [R + R]^T + 2 [W + W].

    Works for any two-mode covariance; see :func:`independent_blocks` for
    the symmetric-block closed form.
    """
    s0 = as_covariance(sigma0)
    if tau == 0:
        return s0
    if ints is None:
        ints = secular_integrals(tau, bath, mode, **kw)
    r = rotation(tau, bath.omega0)
    rr = _direct_sum(r, r)
    noise = noise_from_integrals(ints)
    out = math.exp(-ints.big_gamma) * rr @ s0 @ rr.T + _direct_sum(noise, noise)
    return 0.5 * (out + out.T)


def _check_normal_block(sigma0):
    s = as_covariance(sigma0)
    a = s[0, 0]
    c1, c2 = s[0, 2], s[1, 3]
    expected = TwoModeBlocks(a * np.eye(2), np.diag([c1, c2])).matrix()
    if not np.allclose(s, expected, rtol=0, atol=1e-12 * max(1.0, abs(a))):
        raise UnsupportedInputError(
            "closed form needs A = B = a*1 and C = diag(c1, c2)"
        )
    return a, c1, c2


def independent_blocks(sigma0, tau, bath, mode=PropagatorMode.SHORT_TIME, *, ints=None, **kw):
    """Closed-form A_t and C_t for ``A0 = a*1``, ``C0 = diag(c1, c2)``.

    ``A_t = a e^{-G} 1 + N`` and ``C_t = e^{-G} R C0 R^T``; for the twin beam
    (c2 = -c1 = -c) the latter is ``c e^{-G} [[cos 2u, -sin 2u], [-sin 2u, -cos 2u]]``
    with ``u = w0 tau``.
    """
    a, c1, c2 = _check_normal_block(sigma0)
    if ints is None:
        ints = secular_integrals(tau, bath, mode, **kw)
    damp = math.exp(-ints.big_gamma)
    u2 = 2.0 * bath.omega0 * tau
    cos2, sin2 = math.cos(u2), math.sin(u2)
    mean, diff = 0.5 * (c1 + c2), 0.5 * (c1 - c2)
    a_t = a * damp * np.eye(2) + noise_from_integrals(ints)
    c_t = damp * (mean * np.eye(2) + diff * np.array([[cos2, -sin2], [-sin2, -cos2]]))
    return TwoModeBlocks(a_t, c_t)


_PM = np.array(
    [[1.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, 1.0], [1.0, 0.0, -1.0, 0.0], [0.0, 1.0, 0.0, -1.0]]
) / math.sqrt(2.0)


def plus_minus_transform(sigma):
    """Covariance in the (X+, P+, X-, P-) coordinates."""
    s = np.asarray(sigma, dtype=float)
    return _PM @ s @ _PM.T


def plus_minus_inverse(sigma_pm):
    """Back from (X+, P+, X-, P-) to (X1, P1, X2, P2); the map is an involution."""
    s = np.asarray(sigma_pm, dtype=float)
    return _PM.T @ s @ _PM


def _common_integrals(tau, bath, mode, scale, kw):
    # The (+) mode sees every coefficient times `scale`, hence Gamma -> scale*Gamma
    # in the weights and an overall factor `scale` on the convolutions.
    ints = secular_integrals(tau, bath, mode, gamma_scale=scale, **kw)
    return ints.scaled(scale)


def propagate_common(sigma0, tau, bath, mode=PropagatorMode.SHORT_TIME, *, path="auto",
                     printed_damping=False, scale=COMMON_SCALE, ints=None, **kw):
    """Common-reservoir evolution.

    ``path="generic"`` transforms to (+, -) coordinates, damps and feeds
    noise into the (+) block, rotates the (-) block freely and transforms
    back; it accepts any covariance. ``path="closed"`` evaluates the
    entrywise closed form for twin-beam inputs (``"auto"`` picks it when it
    applies). ``printed_damping=True`` damps the (+) block with
    ``exp(-Gamma)`` instead of ``exp(-sqrt(2) Gamma)`` in the closed form;
    this variant is kept for comparison only.
    """
    s0 = as_covariance(sigma0)
    if tau == 0 and not printed_damping:
        return s0
    if path == "auto":
        path = "closed" if is_twb_form(s0) else "generic"
    if ints is None:
        ints = _common_integrals(tau, bath, mode, scale, kw)
    if path == "closed":
        return common_blocks(s0, tau, bath, ints=ints, printed_damping=printed_damping,
                             scale=scale).matrix()
    if path != "generic":
        raise ValueError(f"unknown path {path!r}")
    if printed_damping:
        raise ValueError("printed_damping applies to the closed-form path only")
    kappa = scale * ints.big_gamma
    r = rotation(tau, bath.omega0)
    damped = _direct_sum(math.exp(-0.5 * kappa) * r, r)
    pm = damped @ plus_minus_transform(s0) @ damped.T
    pm[:2, :2] += noise_from_integrals(ints)
    out = plus_minus_inverse(pm)
    return 0.5 * (out + out.T)


def common_blocks(sigma0, tau, bath, mode=PropagatorMode.SHORT_TIME, *, ints=None,
                  printed_damping=False, scale=COMMON_SCALE, **kw):
    """Entrywise common-reservoir solution for a thermal twin beam.

    Returns A_t = [[chi, z], [z, y]] and C_t = [[mu, xi], [xi, nu]] with
    ``g_pm = (1 +- exp(-kappa))/2``, ``kappa = sqrt(2) Gamma`` and ``u = w0 tau``::

        chi = g+ a - g- c cos2u + (Dg - nd)/sqrt2     mu = -g- a + g+ c cos2u + (Dg - nd)/sqrt2
        y   = g+ a + g- c cos2u + (Dg + nd)/sqrt2     nu = -g- a - g+ c cos2u + (Dg + nd)/sqrt2
        z   = g- c sin2u + no/sqrt2                   xi = -g+ c sin2u + no/sqrt2

    where ``nd = D_co - P_si`` and ``no = D_si + P_co`` are the unscaled
    (weight ``sqrt(2) Gamma``) convolution integrals.
    """
    s0 = as_covariance(sigma0)
    if not is_twb_form(s0):
        raise UnsupportedInputError("closed common-reservoir form needs a twin-beam input")
    a, c = s0[0, 0], s0[0, 2]
    if ints is None:
        ints = _common_integrals(tau, bath, mode, scale, kw)
    kappa = ints.big_gamma if printed_damping else scale * ints.big_gamma
    e = math.exp(-kappa)
    g_p, g_m = 0.5 * (1 + e), 0.5 * (1 - e)
    u2 = 2.0 * bath.omega0 * tau
    cos2, sin2 = math.cos(u2), math.sin(u2)
    # `ints` is already multiplied by `scale`, so half of it is the 1/sqrt2 term
    dg, nd, no = 0.5 * ints.delta_gamma, 0.5 * ints.ns_diag, 0.5 * ints.ns_off
    chi = g_p * a - g_m * c * cos2 + dg - nd
    y = g_p * a + g_m * c * cos2 + dg + nd
    z = g_m * c * sin2 + no
    mu = -g_m * a + g_p * c * cos2 + dg - nd
    nu = -g_m * a - g_p * c * cos2 + dg + nd
    xi = -g_p * c * sin2 + no
    return TwoModeBlocks(np.array([[chi, z], [z, y]]), np.array([[mu, xi], [xi, nu]]))


def propagate(sigma0, tau, bath, topology="independent", mode=PropagatorMode.SHORT_TIME, **kw):
    if topology == "independent":
        return propagate_independent(sigma0, tau, bath, mode, **kw)
    if topology == "common":
        return propagate_common(sigma0, tau, bath, mode, **kw)
    raise ValueError(f"unknown topology {topology!r}")
