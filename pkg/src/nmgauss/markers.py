"""Nonclassicality markers of two-mode Gaussian states.

* intensity correlations relative to the shot-noise level,
* logarithmic negativity (natural log),
* Gaussian quantum discord with a Gaussian measurement on mode 2, plus the
  mutual information and the classical part ``I - D``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import _kernels
from .errors import DomainError, NumericalDegeneracyError, UndefinedMarkerError, UnphysicalStateError
from .gaussian import (
    PHYSICAL_TOL,
    as_covariance,
    entropy_f,
    partial_transpose,
    symplectic_eigenvalues,
)

DENOMINATOR_EPS = 1e-9
DISCORD_NEG_TOL = 1e-9


def _require_physical(s, tol=PHYSICAL_TOL):
    _, nu = symplectic_eigenvalues(s)
    if nu < 0.5 - tol:
        raise UnphysicalStateError(f"state violates the uncertainty bound (nu-={nu:.6g})", nu)
    return nu


def intensity_correlations(sigma, eps=DENOMINATOR_EPS):
    """I_corr = 1 - Var(n1 - n2) / <n1 + n2>, from covariance entries.

    For a symmetric-block state this is

        1 - [s11^2 + s22^2 + 2 s12^2 - s13^2 - s14^2 - s23^2 - s24^2 - 1/2]
            / [s11 + s22 - 1]

    (entries 1-based). The general expression used here averages the two
    local terms, so it reduces to the above when the diagonal blocks agree.
    """
    s = as_covariance(sigma)
    local = 0.5 * (
        s[0, 0] ** 2 + s[1, 1] ** 2 + 2 * s[0, 1] ** 2
        + s[2, 2] ** 2 + s[3, 3] ** 2 + 2 * s[2, 3] ** 2
    )
    cross = s[0, 2] ** 2 + s[0, 3] ** 2 + s[1, 2] ** 2 + s[1, 3] ** 2
    denom = 0.5 * (s[0, 0] + s[1, 1] + s[2, 2] + s[3, 3]) - 1.0
    if denom <= eps:
        raise UndefinedMarkerError("intensity marker is 0/0 for a state with no photons")
    return float(1.0 - (local - cross - 0.5) / denom)


def second_order_g2(sigma, eps=DENOMINATOR_EPS):
    """g2 = <n1 n2> / (<n1><n2>) - 1 for a zero-mean Gaussian state."""
    s = as_covariance(sigma)
    n1 = 0.5 * (s[0, 0] + s[1, 1]) - 0.5
    n2 = 0.5 * (s[2, 2] + s[3, 3]) - 0.5
    if n1 <= eps or n2 <= eps:
        raise UndefinedMarkerError("g2 needs both modes to carry photons")
    cov = 0.5 * (s[0, 2] ** 2 + s[0, 3] ** 2 + s[1, 2] ** 2 + s[1, 3] ** 2)
    return float(cov / (n1 * n2))


def pt_symplectic_min(sigma):
    """Smallest symplectic eigenvalue of the partially transposed state."""
    return symplectic_eigenvalues(partial_transpose(sigma))[1]


def log_negativity(sigma):
    """max(0, -ln(2 nu~_-)), nu~_- the smallest PT symplectic eigenvalue."""
    s = as_covariance(sigma)
    _require_physical(s)
    nu_pt = pt_symplectic_min(s)
    return max(0.0, -math.log(2.0 * nu_pt))


def mutual_information(sigma):
    s = as_covariance(sigma)
    _require_physical(s)
    n_plus, n_minus = symplectic_eigenvalues(s)
    local = entropy_f(math.sqrt(np.linalg.det(s[:2, :2]))) + entropy_f(
        math.sqrt(np.linalg.det(s[2:, 2:]))
    )
    return max(0.0, local - entropy_f(n_plus) - entropy_f(n_minus))


@dataclass(frozen=True)
class MeasurementParams:
    rho: float
    phi: float

    def __post_init__(self):
        if self.rho < 0:
            raise DomainError("measurement squeezing must be >= 0")
        object.__setattr__(self, "phi", float(self.phi) % (2 * math.pi))

    @classmethod
    def from_disk(cls, p, q):
        """Inverse of ``p = tanh(2 rho) cos(phi)``, ``q = tanh(2 rho) sin(phi)``."""
        rad = math.hypot(p, q)
        return cls(0.5 * math.atanh(min(rad, 1.0 - 1e-16)), math.atan2(q, p) if rad else 0.0)


def measurement_cov(params):
    """Covariance sigma_M(rho, phi) of a general Gaussian measurement; det = 1/4."""
    c2 = math.cosh(2 * params.rho) / 2
    t2 = math.tanh(2 * params.rho)
    cp, sp = math.cos(params.phi), math.sin(params.phi)
    return c2 * np.array([[1 + t2 * cp, -t2 * sp], [-t2 * sp, 1 - t2 * cp]])


def conditional_cov(A, C, sigma_m, B=None):
    """tau = A - C (B + sigma_M)^{-1} C^T, with B = A when not given."""
    a = np.asarray(A, dtype=float)
    c = np.asarray(C, dtype=float)
    b = a if B is None else np.asarray(B, dtype=float)
    m = b + np.asarray(sigma_m, dtype=float)
    if abs(np.linalg.det(m)) < 1e-14 * max(1.0, np.max(np.abs(m))) ** 2:
        raise NumericalDegeneracyError("B + sigma_M is singular")
    t = a - c @ np.linalg.solve(m, c.T)
    return 0.5 * (t + t.T)


@dataclass(frozen=True)
class DiscordOptions:
    rho_max: float = 6.0
    grid_rho: int = 25
    grid_phi: int = 24
    xatol: float = 1e-11
    fatol: float = 1e-14
    tie_ulps: float = 16.0
    polar_starts: int = 3
    backend: str | None = None


@dataclass(frozen=True)
class DiscordResult:
    discord: float
    argmin: MeasurementParams
    conditional_entropy: float
    boundary: bool


def _rho_grid(opts):
    # rho = 0 (heterodyne) plus a geometric ladder up to rho_max
    ladder = np.geomspace(1e-3, opts.rho_max, opts.grid_rho - 1)
    return np.concatenate(([0.0], ladder))


def _disk(rho, phi):
    t = math.tanh(2 * rho)
    return t * math.cos(phi), t * math.sin(phi)


def _minimize_cond_det(s, opts):
    backend = _kernels.get_backend(opts.backend)
    radius = math.tanh(2 * opts.rho_max)
    rho = _rho_grid(opts)
    phi = np.linspace(0.0, 2 * np.pi, opts.grid_phi, endpoint=False)
    rr, pp = np.meshgrid(rho, phi, indexing="ij")
    tt = np.tanh(2 * rr)
    p_grid, q_grid = (tt * np.cos(pp)).ravel(), (tt * np.sin(pp)).ravel()
    # det(tau) >= 1/4 for any physical state; values below are round-off
    dets = np.maximum(np.asarray(backend.conditional_det_grid(s, p_grid, q_grid)).ravel(), 0.25)
    order = np.argsort(dets, kind="stable")
    k = int(order[0])
    best = (float(dets[k]), float(p_grid[k]), float(q_grid[k]))
    scale = max(abs(best[0]), 1e-300)
    nm = {"xatol": opts.xatol, "fatol": opts.fatol, "maxiter": 4000}

    def keep(p, q):
        nonlocal best
        val = max(backend.conditional_det(s, p, q), 0.25)
        if val < best[0]:
            best = (val, p, q)

    # Disk coordinates are smooth through heterodyne (rho = 0) ...
    def clip(v):
        rad = math.hypot(v[0], v[1])
        if rad > radius:
            return v[0] * radius / rad, v[1] * radius / rad
        return float(v[0]), float(v[1])

    def disk_objective(v):
        return max(backend.conditional_det(s, *clip(v)), 0.25) / scale

    for start in sorted({(best[1], best[2]), (0.0, 0.0)}):
        res = minimize(disk_objective, np.array(start), method="Nelder-Mead", options=nm)
        keep(*clip(res.x))

    # ... but squeeze the large-rho region towards the rim, so strongly
    # eccentric optima are refined in (rho, phi) from the best grid cells.
    def polar_objective(v):
        return max(backend.conditional_det(s, *_disk(v[0], v[1])), 0.25) / scale

    bounds = [(0.0, opts.rho_max), (None, None)]
    for idx in order[: opts.polar_starts]:
        start = np.array([rr.ravel()[idx], pp.ravel()[idx]])
        if start[0] == 0.0:
            continue
        res = minimize(polar_objective, start, method="Nelder-Mead", bounds=bounds, options=nm)
        keep(*_disk(float(res.x[0]), float(res.x[1])))

    # Break ties in favour of heterodyne (for pure states every measurement
    # is optimal). Round-off in det(tau) grows like eps * |sigma|^2.
    het = max(backend.conditional_det(s, 0.0, 0.0), 0.25)
    tie = opts.tie_ulps * np.finfo(float).eps * max(1.0, float(np.max(np.abs(s)))) ** 2
    if het <= best[0] + tie:
        best = (het, 0.0, 0.0)
    return best, radius


def gaussian_discord(sigma, opts=DiscordOptions()):
    """Gaussian discord with the measurement on mode 2.

    D = f(sqrt det B) + min_M f(sqrt det tau_M) - f(n+) - f(n-), with B the
    block of the measured mode. The minimum
    is found on a (rho, phi) grid that contains heterodyne (rho = 0), then
    refined by Nelder-Mead, once in the disk coordinates
    ``(tanh 2rho cos phi, tanh 2rho sin phi)`` from the best grid point and
    from heterodyne, and once in ``(rho, phi)`` from the ``polar_starts``
    best grid points. ``boundary`` flags minima at ``rho_max``.
    """
    s = np.ascontiguousarray(as_covariance(sigma))
    _require_physical(s)
    (det_t, p, q), _ = _minimize_cond_det(s, opts)
    cond = entropy_f(math.sqrt(max(det_t, 0.0)))
    n_plus, n_minus = symplectic_eigenvalues(s)
    # the measured mode's entropy enters: D = S(B) - S(AB) + min S(A | M_B)
    d = entropy_f(math.sqrt(np.linalg.det(s[2:, 2:]))) + cond - entropy_f(n_plus) - entropy_f(n_minus)
    if d < -DISCORD_NEG_TOL:
        raise NumericalDegeneracyError(f"negative discord {d:.3e}")
    argmin = MeasurementParams.from_disk(p, q)
    boundary = argmin.rho >= opts.rho_max * (1 - 1e-4)
    return DiscordResult(max(d, 0.0), argmin, cond, bool(boundary))


def classical_correlations(sigma, opts=DiscordOptions(), discord=None):
    """I - D, the classical correlations restricted to Gaussian measurements."""
    if discord is None:
        discord = gaussian_discord(sigma, opts).discord
    return mutual_information(sigma) - discord


@dataclass(frozen=True)
class MarkerSample:
    tau: float
    icorr: float | None
    negativity: float
    discord: float
    mutual_information: float
    classical_correlations: float
    rho_star: float
    phi_star: float
    nu_minus: float
    boundary: bool = False

    @property
    def icorr_subshot(self):
        return self.icorr is not None and 0.0 < self.icorr <= 1.0


def marker_sample(sigma, tau=0.0, opts=DiscordOptions()):
    """All markers of one state, bundled as a :class:`MarkerSample`."""
    s = as_covariance(sigma)
    nu = _require_physical(s)
    try:
        icorr = intensity_correlations(s)
    except UndefinedMarkerError:
        icorr = None
    dres = gaussian_discord(s, opts)
    mi = mutual_information(s)
    return MarkerSample(
        float(tau), icorr, log_negativity(s), dres.discord, mi, mi - dres.discord,
        dres.argmin.rho, dres.argmin.phi, nu, dres.boundary,
    )
