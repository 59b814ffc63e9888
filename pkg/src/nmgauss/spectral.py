"""Bath spectral densities and the time-dependent master-equation coefficients.

Everything is in scaled units: hbar = 1, the cutoff frequency omega_c = 1,
time is tau = omega_c t and the oscillator frequency is omega_0 = 1/x with
x = omega_c/omega_0 the resonance ratio.

Two routes compute the coefficients (Delta, Pi, gamma, r):

* :func:`coefficients_quadrature` evaluates the second-order double integrals
  numerically for any bath family;
* :func:`coefficients_closed_form` evaluates the high-temperature Ohmic
  Lorentz-Drude expressions.

The closed forms are the double integrals with the thermal weight replaced by
``temperature_ratio / omega`` (pass ``thermal="high_t"`` to the quadrature to
integrate exactly that). The exact weight ``2 N(omega) + 1`` tends to *twice*
that value at high temperature, so ``thermal="bose"`` results for Delta and Pi
are about twice the closed-form ones; gamma and r do not depend on temperature.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from . import _kernels
from .errors import DomainError, QuadratureError, UnsupportedFamilyError

HIGH_T_THRESHOLD = 10.0


class SpectralFamily(str, enum.Enum):
    OHMIC_LORENTZ_DRUDE = "ohmic-lorentz-drude"
    TABULATED = "tabulated"


@dataclass(frozen=True)
class BathSpec:
    """Reservoir parameters in scaled units.

    ``table`` is only used by the tabulated family: a pair of equal-length
    tuples ``(omegas, J_values)`` interpolated linearly, zero outside the range.
    """

    resonance_ratio: float
    coupling: float = 0.1
    temperature_ratio: float = 100.0
    family: SpectralFamily = SpectralFamily.OHMIC_LORENTZ_DRUDE
    table: tuple | None = None
    cutoff: float = field(default=1.0, init=False)
    omega0: float = field(init=False)

    def __post_init__(self):
        x = float(self.resonance_ratio)
        if not (x > 0 and math.isfinite(x)):
            raise DomainError(f"resonance ratio must be > 0, got {x}")
        # coupling 0 is the closed-system limit
        if not self.coupling >= 0:
            raise DomainError(f"coupling must be >= 0, got {self.coupling}")
        if not self.temperature_ratio >= 0:
            raise DomainError(
                f"temperature ratio must be >= 0, got {self.temperature_ratio}"
            )
        family = SpectralFamily(self.family)
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "resonance_ratio", x)
        object.__setattr__(self, "omega0", 1.0 / x)
        if family is SpectralFamily.TABULATED:
            if self.table is None:
                raise DomainError("tabulated family needs a (omegas, values) table")
            w, j = (tuple(float(v) for v in col) for col in self.table)
            if len(w) != len(j) or len(w) < 2:
                raise DomainError("table columns must have equal length >= 2")
            if w[0] < 0 or any(b <= a for a, b in zip(w, w[1:])):
                raise DomainError("table frequencies must be >= 0 and increasing")
            object.__setattr__(self, "table", (w, j))

    @property
    def uses_closed_form(self):
        return (
            self.family is SpectralFamily.OHMIC_LORENTZ_DRUDE
            and self.temperature_ratio >= HIGH_T_THRESHOLD
        )

    def with_coupling(self, coupling):
        return BathSpec(
            self.resonance_ratio, coupling, self.temperature_ratio, self.family, self.table
        )


@dataclass(frozen=True)
class CoefficientSet:
    """Master-equation coefficients at one scaled time (or an array of times).

    ``r_ren_available`` is False when ``r_ren`` was not computed (closed-form
    route) and the stored zero is only a placeholder.
    """

    delta: float
    pi: float
    gamma: float
    r_ren: float = 0.0
    r_ren_available: bool = False
    error_estimate: float = 0.0


def spectral_density(omega, bath):
    """J(omega) in scaled units, for scalars or arrays."""
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0):
        raise DomainError("spectral density is defined for omega >= 0")
    if bath.family is SpectralFamily.OHMIC_LORENTZ_DRUDE:
        out = w / (np.pi * (w * w + 1.0))
    else:
        tw, tj = bath.table
        out = np.interp(w, tw, tj, left=0.0, right=0.0)
    return out if out.ndim else float(out)


def bose_occupation(omega, temperature_ratio):
    """Mean thermal occupation 1/(exp(omega/T) - 1); zero for a vacuum bath."""
    w = np.asarray(omega, dtype=float)
    if temperature_ratio == 0:
        out = np.zeros_like(w)
    else:
        if np.any(w <= 0):
            raise DomainError("bose occupation has a pole at omega = 0")
        out = 1.0 / np.expm1(w / temperature_ratio)
    return out if out.ndim else float(out)


def coefficients_closed_form(tau, bath):
    """High-T Ohmic Lorentz-Drude coefficients; accepts scalar or array ``tau``.

    Valid for ``temperature_ratio`` >= 10 or so (caller's responsibility).
    The frequency renormalization is not part of this route and is reported
    as 0 with ``r_ren_available=False``.
    """
    if bath.family is not SpectralFamily.OHMIC_LORENTZ_DRUDE:
        raise UnsupportedFamilyError(
            f"no closed form for spectral family {bath.family.value!r}"
        )
    t = np.asarray(tau, dtype=float)
    x = bath.resonance_ratio
    k = bath.coupling**2 * bath.omega0 * x * x / (2.0 * (1.0 + x * x))
    e = np.exp(-t)
    c, s = np.cos(t / x), np.sin(t / x)
    decay = 1.0 - e * (c + x * s)
    temp = bath.temperature_ratio
    delta = k * temp * (x - e * (x * c - s))
    pi = k * temp * decay
    gamma = k * decay
    if t.ndim == 0:
        delta, pi, gamma = float(delta), float(pi), float(gamma)
    return CoefficientSet(delta, pi, gamma)


def coefficients(tau, bath):
    """Dispatch to the closed form when valid, otherwise to quadrature."""
    if bath.uses_closed_form:
        return coefficients_closed_form(tau, bath)
    return coefficients_quadrature(tau, bath)


def _omega_max(bath):
    return max(50.0, 50.0 / bath.resonance_ratio)


def _fourier_integral(f, s, kind, w_max, epsabs):
    """int_0^inf f(w) cos/sin(w s) dw: QAWO on [0, w_max], QAWF on the tail."""
    func = _kernels.quad_func(f)
    head = integrate.quad(
        func, 0.0, w_max, weight=kind, wvar=s, epsabs=epsabs, epsrel=0.0, limit=400,
        full_output=1,
    )
    tail = integrate.quad(
        func, w_max, np.inf, weight=kind, wvar=s, epsabs=epsabs, limlst=200,
        full_output=1,
    )
    return head[0] + tail[0], head[1] + tail[1]


class _Integrands:
    """The two inner integrands: J(w) and J(w) times the thermal weight."""

    def __init__(self, bath, thermal):
        temp = bath.temperature_ratio
        if bath.family is SpectralFamily.OHMIC_LORENTZ_DRUDE:
            be = _kernels.ACTIVE
            self.density = be.integrand("ohmic_density")
            if thermal == "high_t":
                self.noise = be.integrand("ohmic_noise_high_t", temp)
            elif temp == 0:
                self.noise = self.density
            else:
                self.noise = be.integrand("ohmic_noise_bose", temp)
            return

        tw, tj = (np.asarray(col, dtype=float) for col in bath.table)
        # J(w)/w as w -> 0, from the first table segment
        slope0 = (tj[1] - tj[0]) / (tw[1] - tw[0]) if tw[0] == 0 else 0.0

        def density(w):
            return float(np.interp(w, tw, tj, left=0.0, right=0.0))

        def noise_high_t(w):
            return density(w) * temp / w if w > 0 else slope0 * temp

        def noise_bose(w):
            return density(w) / math.tanh(w / (2 * temp)) if w > 0 else 2 * temp * slope0

        self.density = density
        if thermal == "high_t":
            self.noise = noise_high_t
        elif temp == 0:
            self.noise = density
        else:
            self.noise = noise_bose


def _outer_integral(s0, s1, bath, thermal, epsabs):
    """alpha^2 times the outer time integral over [s0, s1], with its error."""
    if bath.coupling == 0:
        return np.zeros(4), 0.0
    w0 = bath.omega0
    fns = _Integrands(bath, thermal)
    w_max = _omega_max(bath)
    inner_tol = epsabs * 1e-2

    # The fifth component integrates the inner error estimates, so a log
    # singularity of the noise kernel at s -> 0 is charged only its true weight.
    def outer(s):
        noise, e1 = _fourier_integral(fns.noise, s, "cos", w_max, inner_tol)
        damp, e2 = _fourier_integral(fns.density, s, "sin", w_max, inner_tol)
        cw, sw = math.cos(w0 * s), math.sin(w0 * s)
        return np.array([noise * cw, noise * sw, damp * sw, damp * cw, e1 + e2])

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        vals, err = integrate.quad_vec(
            outer, s0, s1, epsabs=epsabs, epsrel=1e-12, norm="max", limit=2000
        )
    vals, inner_err = vals[:4], vals[4]
    a2 = bath.coupling**2
    total = float(a2 * (err + inner_err))
    budget = max(1e3 * epsabs, 1e-8 * float(np.max(np.abs(vals))))
    if not np.all(np.isfinite(vals)) or total > budget:
        raise QuadratureError(
            f"coefficient quadrature on [{s0}, {s1}] did not converge", estimate=total
        )
    return a2 * vals, total


def coefficients_quadrature(tau, bath, *, thermal="bose", epsabs=1e-10):
    """Second-order coefficients by adaptive double quadrature.

    The inner frequency integrals use QUADPACK's Fourier-weighted rules (QAWO
    up to ``max(50, 50/x)``, QAWF beyond); the outer time integral is adaptive
    Gauss-Kronrod on a vector integrand so that all four coefficients share
    the inner evaluations.

    ``thermal`` selects the noise weight: ``"bose"`` for ``2 N(omega) + 1``
    or ``"high_t"`` for ``temperature_ratio / omega``.
    """
    if thermal not in ("bose", "high_t"):
        raise ValueError(f"unknown thermal weight {thermal!r}")
    if tau < 0:
        raise DomainError("tau must be >= 0")
    if tau == 0 or bath.coupling == 0:
        return CoefficientSet(0.0, 0.0, 0.0, 0.0, r_ren_available=True)
    if thermal == "high_t" and bath.temperature_ratio == 0:
        raise DomainError("high-temperature weight needs temperature_ratio > 0")
    vals, total = _outer_integral(0.0, float(tau), bath, thermal, epsabs)
    delta, pi, gamma, r_ren = (float(v) for v in vals)
    return CoefficientSet(delta, pi, gamma, r_ren, r_ren_available=True, error_estimate=total)


def _expm1_ratio(mu, t):
    """(exp(mu t) - 1)/mu for complex mu, equal to t at mu = 0."""
    mu = complex(mu)
    if mu == 0:
        return complex(t)
    return complex(np.expm1(mu * t) / mu) if abs(mu * t) > 1e-8 else t * (1 + mu * t / 2)


class ClosedFormModel:
    """Analytic coefficient functions of the high-T Ohmic Lorentz-Drude bath.

    Besides Delta, Pi and gamma this provides the damping exponent
    ``Gamma(t) = 2 int_0^t gamma`` and the frequency renormalization, whose
    inner integral ``int J(w) sin(w s) dw = exp(-s)/2`` is elementary for any
    temperature.
    """

    analytic = True

    def __init__(self, bath):
        if bath.family is not SpectralFamily.OHMIC_LORENTZ_DRUDE:
            raise UnsupportedFamilyError("closed-form model needs the Ohmic family")
        self.bath = bath
        x = bath.resonance_ratio
        self.k = bath.coupling**2 * bath.omega0 * x * x / (2.0 * (1.0 + x * x))
        self.lam = complex(-1.0, bath.omega0)

    def coefficients(self, s):
        return coefficients_closed_form(s, self.bath)

    def delta(self, s):
        return self.coefficients(s).delta

    def pi(self, s):
        return self.coefficients(s).pi

    def gamma(self, s):
        return self.coefficients(s).gamma

    def renormalization(self, s):
        a2 = self.bath.coupling**2
        return 0.5 * a2 * np.real(np.vectorize(_expm1_ratio)(self.lam, s))

    def big_gamma(self, s):
        x = self.bath.resonance_ratio
        e = np.vectorize(_expm1_ratio)(self.lam, s)
        return 2.0 * self.k * (np.asarray(s, dtype=float) - np.real((1 - 1j * x) * e))


class TabulatedModel:
    """Coefficient functions from quadrature, tabulated once and splined.

    The coefficients are accumulated interval by interval on a grid that is
    quadratically refined towards ``s = 0`` (where the Bose noise kernel has a
    logarithmic singularity) and then interpolated with cubic splines.
    """

    analytic = False

    def __init__(self, bath, tau_max, nodes=241, thermal="bose", epsabs=1e-10):
        from scipy.interpolate import CubicSpline

        if tau_max <= 0:
            raise DomainError("tau_max must be > 0")
        self.bath = bath
        self.tau_max = float(tau_max)
        u = np.linspace(0.0, 1.0, nodes)
        grid = self.tau_max * u * u
        vals = np.zeros((nodes, 4))
        for i in range(1, nodes):
            step = coefficients_quadrature_interval(
                grid[i - 1], grid[i], bath, thermal=thermal, epsabs=epsabs
            )
            vals[i] = vals[i - 1] + step
        self.grid = grid
        self._splines = [CubicSpline(grid, vals[:, j]) for j in range(4)]
        self._big_gamma = self._splines[2].antiderivative()

    def _eval(self, j, s):
        s = np.asarray(s, dtype=float)
        if np.any(s > self.tau_max * (1 + 1e-12)):
            raise DomainError(f"time beyond tabulated range {self.tau_max}")
        out = self._splines[j](s)
        return out if out.ndim else float(out)

    def delta(self, s):
        return self._eval(0, s)

    def pi(self, s):
        return self._eval(1, s)

    def gamma(self, s):
        return self._eval(2, s)

    def renormalization(self, s):
        return self._eval(3, s)

    def coefficients(self, s):
        return CoefficientSet(
            self.delta(s), self.pi(s), self.gamma(s), self.renormalization(s), True
        )

    def big_gamma(self, s):
        out = 2.0 * self._big_gamma(np.asarray(s, dtype=float))
        return out if out.ndim else float(out)


def coefficients_quadrature_interval(s0, s1, bath, *, thermal="bose", epsabs=1e-10):
    """Increment of (Delta, Pi, gamma, r) between times ``s0`` and ``s1``."""
    if s1 <= s0:
        return np.zeros(4)
    return _outer_integral(float(s0), float(s1), bath, thermal, epsabs)[0]


_MODEL_CACHE = {}


def coefficient_model(bath, tau_max=None):
    """Coefficient functions for ``bath``: analytic when the closed form
    applies, otherwise a (cached) tabulated model covering ``[0, tau_max]``."""
    if bath.uses_closed_form:
        return ClosedFormModel(bath)
    if tau_max is None:
        raise DomainError("a tabulated coefficient model needs tau_max")
    key = (bath, float(tau_max))
    model = _MODEL_CACHE.get(key)
    if model is None:
        model = _MODEL_CACHE[key] = TabulatedModel(bath, tau_max)
    return model
