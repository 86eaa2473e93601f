"""Jiang-Shu WENO reconstruction with global Lax-Friedrichs flux splitting.

For ``r`` in {2, 3} the reconstruction combines ``r`` candidate stencils of
``r`` points each and is formally of order ``2r - 1``. The flux difference at
node j reads values j-r..j+r, so the scheme is a (2r+1)-point scheme.
"""
from __future__ import annotations

import numpy as np

from ..exceptions import DomainError

EPS = 1e-6
POWER = 2

_IDEAL = {
    2: np.array([1 / 3, 2 / 3]),
    3: np.array([0.1, 0.6, 0.3]),
}


def _candidates(f: np.ndarray, r: int):
    """Candidate values and smoothness indicators at x_{j+1/2}, left-biased.

    ``f`` has leading axis of length 2r-1 holding f_{j-r+1} .. f_{j+r-1}.
    """
    if r == 2:
        fm, f0, fp = f
        q = np.stack([-0.5 * fm + 1.5 * f0, 0.5 * f0 + 0.5 * fp])
        beta = np.stack([(f0 - fm) ** 2, (fp - f0) ** 2])
    elif r == 3:
        fmm, fm, f0, fp, fpp = f
        q = np.stack([
            fmm / 3 - 7 * fm / 6 + 11 * f0 / 6,
            -fm / 6 + 5 * f0 / 6 + fp / 3,
            f0 / 3 + 5 * fp / 6 - fpp / 6,
        ])
        beta = np.stack([
            13 / 12 * (fmm - 2 * fm + f0) ** 2 + 0.25 * (fmm - 4 * fm + 3 * f0) ** 2,
            13 / 12 * (fm - 2 * f0 + fp) ** 2 + 0.25 * (fm - fp) ** 2,
            13 / 12 * (f0 - 2 * fp + fpp) ** 2 + 0.25 * (3 * f0 - 4 * fp + fpp) ** 2,
        ])
    else:
        raise DomainError(f"WENO is implemented for r in {{2, 3}}, got {r}")
    return q, beta


def weno_weights(f: np.ndarray, r: int, eps: float = EPS) -> np.ndarray:
    """Nonlinear weights, shape ``(r, ...)``; the ideal weights are ``ideal_weights(r)``."""
    _, beta = _candidates(f, r)
    alpha = _IDEAL[r][:, None] / (beta.reshape(r, -1) + eps) ** POWER
    return (alpha / alpha.sum(axis=0)).reshape(beta.shape)


def ideal_weights(r: int) -> np.ndarray:
    return _IDEAL[r].copy()


def reconstruct(f: np.ndarray, r: int, eps: float = EPS) -> np.ndarray:
    """Value at x_{j+1/2} from ``f_{j-r+1} .. f_{j+r-1}`` (leading axis)."""
    q, _ = _candidates(f, r)
    w = weno_weights(f, r, eps)
    return (w * q).sum(axis=0)


def _shifts(v: np.ndarray, offsets) -> np.ndarray:
    return np.stack([np.roll(v, -k) for k in offsets])


def interface_flux(u: np.ndarray, flux_values: np.ndarray, alpha: float, r: int) -> np.ndarray:
    """Numerical flux at x_{j+1/2} for each j on a periodic grid."""
    fplus = 0.5 * (flux_values + alpha * u)
    fminus = 0.5 * (flux_values - alpha * u)
    left = reconstruct(_shifts(fplus, range(-r + 1, r)), r)
    # mirror image: f_{j+r} .. f_{j-r+2}, reconstructed toward x_{j+1/2}
    right = reconstruct(_shifts(fminus, range(r, -r + 1, -1)), r)
    return left + right


def weno_derivative(u: np.ndarray, h: float, flux, speed, r: int) -> np.ndarray:
    """``-(F_{j+1/2} - F_{j-1/2}) / h`` with ``alpha = max |speed(u)|`` over the grid."""
    alpha = float(np.max(np.abs(speed(u))))
    F = interface_flux(u, flux(u), alpha, r)
    return -(F - np.roll(F, 1)) / h


def local_derivative(u: np.ndarray, flux, alpha: float, r: int) -> np.ndarray:
    """``H(u_{-r}, ..., u_r) = -(F_{+1/2} - F_{-1/2})`` from one (2r+1)-point window.

    ``u`` has leading axis 2r+1; ``alpha`` is the splitting constant, fixed
    here because a single window cannot see the global maximum.
    """
    u = np.asarray(u, dtype=float)
    fv = flux(u)
    fplus = 0.5 * (fv + alpha * u)
    fminus = 0.5 * (fv - alpha * u)
    n = 2 * r + 1
    right_face = reconstruct(fplus[1:n - 1], r) + reconstruct(fminus[2:][::-1], r)
    left_face = reconstruct(fplus[0:n - 2], r) + reconstruct(fminus[1:n - 1][::-1], r)
    return -(right_face - left_face)
