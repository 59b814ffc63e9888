"""Two-mode Gaussian states described by their 4x4 covariance matrix.

Ordering is (X1, P1, X2, P2) and the vacuum of each mode has covariance
(1/2) * identity. All states are zero-mean.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .errors import DomainError, NumericalDegeneracyError

SYMMETRY_TOL = 1e-12
PHYSICAL_TOL = 1e-9
# symplectic eigenvalues this close below 1/2 are treated as exactly 1/2
CLAMP_TOL = 1e-9

OMEGA = np.array(
    [[0.0, 1.0, 0.0, 0.0], [-1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0], [0.0, 0.0, -1.0, 0.0]]
)
# partial transposition of mode 2 = time reversal P2 -> -P2
PT_FLIP = np.diag([1.0, 1.0, 1.0, -1.0])


def as_covariance(sigma, tol=SYMMETRY_TOL):
    """Return ``sigma`` as a float 4x4 array, checking shape and symmetry."""
    s = np.array(sigma, dtype=float)
    if s.shape != (4, 4):
        raise DomainError(f"expected a 4x4 covariance matrix, got shape {s.shape}")
    if not np.all(np.isfinite(s)):
        raise DomainError("covariance matrix has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(s))))
    if np.max(np.abs(s - s.T)) > tol * scale:
        raise DomainError("covariance matrix is not symmetric")
    return 0.5 * (s + s.T)


@dataclass(frozen=True)
class TwoModeBlocks:
    """The 2x2 blocks of ``[[A, C], [C^T, B]]``; ``B`` defaults to ``A``."""

    A: np.ndarray
    C: np.ndarray
    B: np.ndarray | None = None

    @classmethod
    def from_matrix(cls, sigma):
        s = as_covariance(sigma)
        return cls(s[:2, :2].copy(), s[:2, 2:].copy(), s[2:, 2:].copy())

    def matrix(self):
        a = np.asarray(self.A, dtype=float)
        b = a if self.B is None else np.asarray(self.B, dtype=float)
        c = np.asarray(self.C, dtype=float)
        return np.block([[a, c], [c.T, b]])

    @property
    def is_symmetric_block(self):
        return self.B is None or np.allclose(self.A, self.B, rtol=0, atol=1e-12)


def twb_parameters(r, n_th):
    """The (a, c) pair of a thermal twin beam."""
    if r < 0 or n_th < 0:
        raise DomainError(f"squeezing and thermal photons must be >= 0, got r={r}, N={n_th}")
    return (n_th + 0.5) * np.cosh(2 * r), (n_th + 0.5) * np.sinh(2 * r)


def twb_state(r, n_th):
    """Thermal twin beam: two-mode squeezing ``r`` applied to thermal(N) x thermal(N)."""
    a, c = twb_parameters(r, n_th)
    return TwoModeBlocks(a * np.eye(2), np.diag([c, -c])).matrix()


def thermal_state(n_th):
    if n_th < 0:
        raise DomainError("thermal photon number must be >= 0")
    return (n_th + 0.5) * np.eye(4)


def is_twb_form(sigma, tol=1e-12):
    """True when sigma has A = B = a*1 and C = diag(c, -c)."""
    s = np.asarray(sigma, dtype=float)
    a, c = s[0, 0], s[0, 2]
    return bool(np.allclose(s, twb_from_ac(a, c), rtol=0, atol=tol * max(1.0, abs(a))))


def twb_from_ac(a, c):
    return TwoModeBlocks(a * np.eye(2), np.diag([c, -c])).matrix()


def _invariants(sigma):
    s = np.asarray(sigma, dtype=float)
    det_a = np.linalg.det(s[:2, :2])
    det_b = np.linalg.det(s[2:, 2:])
    det_c = np.linalg.det(s[:2, 2:])
    return det_a + det_b + 2 * det_c, np.linalg.det(s)


def symplectic_eigenvalues(sigma, method="williamson"):
    """Symplectic eigenvalues ``(n_plus, n_minus)`` of a two-mode covariance.

    ``method="williamson"`` (default) factors sigma = L L^T and takes the
    eigenvalues +-n of the Hermitian matrix L^T (i Omega) L; this stays
    accurate to ~eps*|sigma| even when n_plus = n_minus (pure states).
    ``method="invariants"`` uses the seralian D = det A + det B + 2 det C and
    det sigma, n^2 = (D +- sqrt(D^2 - 4 det sigma))/2; near a degenerate
    spectrum it only resolves the pair to ~sqrt(eps).
    ``method="spectrum"`` takes the moduli of the eigenvalues of i Omega sigma.
    """
    s = np.asarray(sigma, dtype=float)
    if method == "williamson":
        try:
            low = np.linalg.cholesky(s)
        except np.linalg.LinAlgError:
            raise NumericalDegeneracyError("covariance matrix is not positive definite") from None
        ev = np.linalg.eigvalsh(low.T @ (1j * OMEGA) @ low)
        return float(ev[3]), float(ev[2])
    if method == "spectrum":
        ev = np.sort(np.abs(np.linalg.eigvals(1j * OMEGA @ s)))
        return float(ev[-1]), float(ev[0])
    if method != "invariants":
        raise ValueError(f"unknown method {method!r}")
    seralian, det = _invariants(s)
    disc = seralian * seralian - 4 * det
    if disc < 0:
        if disc < -1e-12 * max(1.0, seralian * seralian):
            raise NumericalDegeneracyError(
                f"negative discriminant {disc:.3e} in symplectic spectrum"
            )
        disc = 0.0
    n_plus_sq = 0.5 * (seralian + np.sqrt(disc))
    if n_plus_sq <= 0 or det < 0:
        raise NumericalDegeneracyError("non-positive symplectic spectrum")
    n_plus = np.sqrt(n_plus_sq)
    n_minus = np.sqrt(det) / n_plus
    return float(n_plus), float(n_minus)


def partial_transpose(sigma):
    """Partial transpose on mode 2: flip the sign of P2, T sigma T with T = diag(1,1,1,-1).

    Flipping both momenta would be a full transposition, which leaves the
    symplectic spectrum unchanged and cannot detect entanglement.
    """
    return PT_FLIP @ np.asarray(sigma, dtype=float) @ PT_FLIP


@dataclass(frozen=True)
class PhysicalityReport:
    ok: bool
    nu_minus: float
    violation: float


def validate_physical(sigma, tol=PHYSICAL_TOL):
    """Check the uncertainty principle through the smallest symplectic eigenvalue."""
    _, nu = symplectic_eigenvalues(sigma)
    violation = max(0.0, 0.5 - nu)
    return PhysicalityReport(nu >= 0.5 - tol, nu, violation)


def entropy_f(x):
    """f(x) = (x + 1/2) ln(x + 1/2) - (x - 1/2) ln(x - 1/2), in nats.

    Arguments within ``CLAMP_TOL`` below 1/2 are clamped to 1/2, where f = 0.
    """
    v = np.asarray(x, dtype=float)
    if np.any(v < 0.5 - CLAMP_TOL):
        raise DomainError(f"entropy function needs x >= 1/2, got min {np.min(v)}")
    v = np.maximum(v, 0.5)
    out = xlogy(v + 0.5, v + 0.5) - xlogy(v - 0.5, v - 0.5)
    return out if out.ndim else float(out)


def von_neumann_entropy(sigma):
    """Entropy of a one-mode (2x2) or two-mode (4x4) Gaussian state."""
    s = np.asarray(sigma, dtype=float)
    if s.shape == (2, 2):
        return entropy_f(np.sqrt(max(np.linalg.det(s), 0.0)))
    n_plus, n_minus = symplectic_eigenvalues(s)
    return entropy_f(n_plus) + entropy_f(n_minus)


def local_rotation(theta):
    """Phase rotation R(theta) on both modes, a symplectic 4x4 matrix."""
    c, s = np.cos(theta), np.sin(theta)
    r = np.array([[c, s], [-s, c]])
    return np.kron(np.eye(2), r)


def swap_modes(sigma):
    s = np.asarray(sigma, dtype=float)
    perm = [2, 3, 0, 1]
    return s[np.ix_(perm, perm)]


def random_physical_state(rng, symmetric=False, max_squeeze=1.5, max_thermal=3.0):
    """Random two-mode covariance matrix built as S (nu-diag) S^T.

    ``symmetric=True`` returns states with equal diagonal blocks and a
    symmetric C block, obtained from a thermal twin beam by identical local
    rotations and squeezings plus a common thermal admixture.
    """
    if symmetric:
        r = rng.uniform(0, max_squeeze)
        n_th = rng.uniform(0, max_thermal)
        sigma = twb_state(r, n_th)
        theta = rng.uniform(0, 2 * np.pi)
        sq = rng.uniform(-0.5, 0.5)
        local = np.kron(np.eye(2), np.diag([np.exp(sq), np.exp(-sq)]))
        sym = local_rotation(theta) @ local
        return sym @ sigma @ sym.T
    nus = 0.5 + rng.uniform(0, max_thermal, size=2)
    base = np.diag([nus[0], nus[0], nus[1], nus[1]])
    sym = _random_symplectic(rng, max_squeeze)
    return sym @ base @ sym.T


def _random_symplectic(rng, max_squeeze):
    # orthogonal symplectic (passive) x single-mode squeezers x passive
    def passive():
        h = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        u, _ = np.linalg.qr(h)
        re, im = u.real, u.imag
        # (x1, x2, p1, p2) ordering, then permute to (x1, p1, x2, p2)
        big = np.block([[re, -im], [im, re]])
        perm = [0, 2, 1, 3]
        return big[np.ix_(perm, perm)]

    sq = rng.uniform(-max_squeeze, max_squeeze, size=2)
    squeeze = np.diag([np.exp(sq[0]), np.exp(-sq[0]), np.exp(sq[1]), np.exp(-sq[1])])
    return passive() @ squeeze @ passive()
