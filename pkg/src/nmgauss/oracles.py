"""Brute-force reference implementations used for verification only.

None of these share code with the fast paths they check: the ODE oracle
integrates the moment equations of the master equation directly, the photon
statistics come from Wick pairings of ladder-operator moments, and the
discord oracle scans a dense measurement grid without refinement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DomainError, IntegrationError
from .gaussian import as_covariance
from .spectral import coefficient_model

_PM = np.array(
    [[1.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, 1.0], [1.0, 0.0, -1.0, 0.0], [0.0, 1.0, 0.0, -1.0]]
) / math.sqrt(2.0)


@dataclass(frozen=True)
class OdeOptions:
    rtol: float = 1e-9
    atol: float = 1e-12
    max_step: float = 0.01
    method: str = "DOP853"

    def __post_init__(self):
        if not (self.rtol > 0 and self.atol > 0 and self.max_step > 0):
            raise DomainError("ODE tolerances and max step must be > 0")


def _mode_drift(omega0, gamma, renorm, damping):
    if damping == "secular":
        g = np.array([[-gamma, omega0], [-omega0, -gamma]])
    elif damping == "literal":
        g = np.array([[0.0, omega0], [-omega0, -2.0 * gamma]])
    else:
        raise ValueError(f"unknown damping model {damping!r}")
    g[1, 0] += renorm
    return g


def ode_covariance(sigma0, tau, bath, topology="independent", *, damping="secular",
                   include_renormalization=False, common_scale=math.sqrt(2.0),
                   options=OdeOptions()):
    """Integrate d sigma/dt = G sigma + sigma G^T + D from the master equation.

    Per coupled mode the drift is ``G = [[0, w0], [-w0, -2 gamma]]`` and the
    diffusion ``D = [[0, Pi], [Pi, 2 Delta]]`` (``damping="literal"``).
    ``damping="secular"`` spreads the damping evenly over both quadratures,
    ``G = [[-gamma, w0], [-w0, -gamma]]``, which is the dynamics the
    closed-form propagators solve exactly. For the common topology only the
    (+) mode is coupled, with all coefficients scaled by ``common_scale``.

    ``tau`` may be a scalar (returns one 4x4 matrix) or an increasing array
    (returns a stack).
    """
    s0 = as_covariance(sigma0)
    if topology not in ("independent", "common"):
        raise ValueError(f"unknown topology {topology!r}")
    times = np.atleast_1d(np.asarray(tau, dtype=float))
    if np.any(times < 0) or np.any(np.diff(times) < 0):
        raise DomainError("times must be >= 0 and non-decreasing")
    t_end = float(times[-1])
    if t_end == 0:
        out = np.repeat(s0[None], len(times), axis=0)
        return out[0] if np.ndim(tau) == 0 else out

    model = coefficient_model(bath, t_end)
    w0 = bath.omega0
    common = topology == "common"
    scale = common_scale if common else 1.0
    start = _PM @ s0 @ _PM.T if common else s0
    free = np.array([[0.0, w0], [-w0, 0.0]])

    def rhs(t, y):
        sig = y.reshape(4, 4)
        c = model.coefficients(t)
        renorm = model.renormalization(t) if include_renormalization else 0.0
        g1 = _mode_drift(w0, scale * c.gamma, scale * renorm, damping)
        d1 = scale * np.array([[0.0, c.pi], [c.pi, 2.0 * c.delta]])
        g = np.zeros((4, 4))
        d = np.zeros((4, 4))
        g[:2, :2] = g1
        d[:2, :2] = d1
        if common:
            g[2:, 2:] = free
        else:
            g[2:, 2:] = g1
            d[2:, 2:] = d1
        return (g @ sig + sig @ g.T + d).ravel()

    sol = solve_ivp(rhs, (0.0, t_end), start.ravel(), method=options.method, t_eval=times,
                    rtol=options.rtol, atol=options.atol, max_step=options.max_step)
    if not sol.success:
        raise IntegrationError(f"moment ODE failed at t={sol.t[-1] if sol.t.size else 0}: "
                               f"{sol.message}")
    mats = sol.y.T.reshape(-1, 4, 4)
    if common:
        mats = np.einsum("ij,njk,lk->nil", _PM.T, mats, _PM.T)
    mats = 0.5 * (mats + np.transpose(mats, (0, 2, 1)))
    return mats[0] if np.ndim(tau) == 0 else mats


@dataclass(frozen=True)
class PhotonStatistics:
    n1: float
    n2: float
    var_n1: float
    var_n2: float
    n1n2: float

    @property
    def covariance(self):
        return self.n1n2 - self.n1 * self.n2

    @property
    def var_difference(self):
        """Variance of the intensity difference n1 - n2."""
        return self.var_n1 + self.var_n2 - 2.0 * self.covariance


def photon_statistics(sigma):
    """Photon-number moments of a zero-mean Gaussian state via Wick's theorem.

    With a = (X + iP)/sqrt(2), normal-ordered fourth moments factor into
    products of <a^dag a>, <a a> and the cross-mode pairings.
    """
    s = as_covariance(sigma)

    def single(i):
        x, p, xp = s[i, i], s[i + 1, i + 1], s[i, i + 1]
        n = 0.5 * (x + p) - 0.5
        aa = 0.5 * (x - p + 2j * xp)
        return n, aa

    n1, aa1 = single(0)
    n2, aa2 = single(2)
    # <a1 a2> and <a1^dag a2>
    a1a2 = 0.5 * (s[0, 2] - s[1, 3] + 1j * (s[0, 3] + s[1, 2]))
    a1da2 = 0.5 * (s[0, 2] + s[1, 3] + 1j * (s[0, 3] - s[1, 2]))
    # <n^2> = <a^dag a^dag a a> + <n>, and the Wick expansion of the first term
    var1 = n1 * n1 + abs(aa1) ** 2 + n1
    var2 = n2 * n2 + abs(aa2) ** 2 + n2
    n1n2 = n1 * n2 + abs(a1a2) ** 2 + abs(a1da2) ** 2
    return PhotonStatistics(float(n1), float(n2), float(var1), float(var2), float(n1n2))


def _f(v):
    v = np.maximum(np.asarray(v, dtype=float), 0.5)
    with np.errstate(divide="ignore", invalid="ignore"):
        hi = (v + 0.5) * np.log(v + 0.5)
        lo = np.where(v > 0.5, (v - 0.5) * np.log(np.where(v > 0.5, v - 0.5, 1.0)), 0.0)
    return hi - lo


@dataclass(frozen=True)
class GridDiscord:
    discord: float
    resolution: float
    rho: float
    phi: float


def discord_grid_oracle(sigma, grid_rho=200, grid_phi=200, rho_max=6.0, details=False):
    """Gaussian discord by exhaustive evaluation on a (rho, phi) grid.

    Mode 2 is measured. The rho grid is uniform on [0, rho_max] and contains
    rho = 0 (heterodyne) exactly; no local refinement is performed, so the
    result is an upper bound on the true minimum. With ``details=True`` a
    :class:`GridDiscord` is returned whose ``resolution`` is the spread of the
    conditional entropy over the grid neighbours of the best cell, a
    practical bound on how far the grid minimum can sit above the true one.
    """
    s = as_covariance(sigma)
    a, c, b = s[:2, :2], s[:2, 2:], s[2:, 2:]
    rho = np.linspace(0.0, rho_max, grid_rho)
    phi = np.linspace(0.0, 2 * np.pi, grid_phi, endpoint=False)
    rr, pp = np.meshgrid(rho, phi, indexing="ij")
    ch, th = np.cosh(2 * rr) / 2, np.tanh(2 * rr)
    m11 = ch * (1 + th * np.cos(pp)) + b[0, 0]
    m22 = ch * (1 - th * np.cos(pp)) + b[1, 1]
    m12 = -ch * th * np.sin(pp) + b[0, 1]
    det = m11 * m22 - m12 * m12
    # inverse of [[m11, m12], [m12, m22]] applied as C M^{-1} C^T
    i11, i22, i12 = m22 / det, m11 / det, -m12 / det
    t = np.empty(rr.shape + (2, 2))
    for i in range(2):
        for j in range(2):
            t[..., i, j] = a[i, j] - (
                c[i, 0] * (i11 * c[j, 0] + i12 * c[j, 1])
                + c[i, 1] * (i12 * c[j, 0] + i22 * c[j, 1])
            )
    det_t = t[..., 0, 0] * t[..., 1, 1] - t[..., 0, 1] * t[..., 1, 0]
    fvals = _f(np.sqrt(np.maximum(det_t, 0.25)))
    i, j = np.unravel_index(int(np.argmin(fvals)), fvals.shape)
    cond = float(fvals[i, j])
    rows = [k for k in (i - 1, i, i + 1) if 0 <= k < grid_rho]
    cols = [(j + k) % grid_phi for k in (-1, 0, 1)]
    resolution = float(np.max(fvals[np.ix_(rows, cols)]) - cond)
    # symplectic spectrum from the eigenvalues of i Omega sigma
    omega = np.kron(np.eye(2), np.array([[0.0, 1.0], [-1.0, 0.0]]))
    nus = np.sort(np.abs(np.linalg.eigvals(1j * omega @ s)))[::2]
    total = float(_f(math.sqrt(np.linalg.det(b))) - _f(nus[0]) - _f(nus[1]))
    if details:
        return GridDiscord(total + cond, resolution, float(rho[i]), float(phi[j]))
    return total + cond
