"""Von Neumann analysis of forward Euler on a linearized semidiscrete scheme.

The linear update ``w_j <- w_j + lam * sum_l alpha_l w_{j+l}`` multiplies the
Fourier mode ``exp(i j theta)`` by

    1 + lam * sum_l alpha_l exp(i l theta).

When the coefficients are antisymmetric (``alpha_{-l} = -alpha_l``,
``alpha_0 = 0``) the sum is purely imaginary, so the modulus exceeds one
wherever ``sum_l alpha_l sin(l theta)`` is nonzero, for every ``lam > 0``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from scipy.optimize import minimize_scalar

from .exceptions import DomainError
from .order import Stencil

GRID_POINTS = 4096
THETA_TOL = 1e-10
STABILITY_TOL = 1e-12
LAMBDA_MIN = 1e-6
LAMBDA_MAX = 10.0
CFL_TOL = 1e-6


@dataclass(frozen=True)
class LinearizedScheme:
    """Coefficients ``alpha_{-r..r}`` of ``w_j' = sum_l alpha_l w_{j+l} / h``."""

    r: int
    alpha: np.ndarray
    antisymmetric: bool

    @property
    def offsets(self) -> np.ndarray:
        return np.arange(-self.r, self.r + 1)

    @property
    def normal_form(self) -> Optional[np.ndarray]:
        """``alpha_1..alpha_r`` when ``w_j' = sum alpha_l (w_{j+l} - w_{j-l}) / h`` applies."""
        return self.alpha[self.r + 1:].copy() if self.antisymmetric else None


def linearize(c, consistency_tol: float = 1e-12) -> LinearizedScheme:
    """Wrap stencil coefficients (a :class:`Stencil` or real vector)."""
    if isinstance(c, Stencil):
        alpha = c.as_array()
    else:
        alpha = np.asarray(c, dtype=float)
    if alpha.ndim != 1 or alpha.size % 2 == 0:
        raise DomainError("coefficients must be a vector of odd length")
    if abs(alpha.sum()) > consistency_tol:
        raise DomainError(f"coefficients sum to {alpha.sum():.3e}, not 0")
    r = (alpha.size - 1) // 2
    antisym = bool(alpha[r] == 0 and np.all(alpha[r + 1:] == -alpha[:r][::-1]))
    return LinearizedScheme(r, alpha, antisym)


def symbol(L: LinearizedScheme, lam: float, theta):
    """Amplification factor of one forward Euler step at ratio ``lam = dt/h``."""
    if lam <= 0:
        raise DomainError("lambda must be positive")
    theta = np.asarray(theta, dtype=float)
    if L.antisymmetric:
        s = sum(a * np.sin(l * theta) for l, a in enumerate(L.normal_form, start=1))
        out = 1 + 2j * lam * s
    else:
        out = 1 + lam * sum(a * np.exp(1j * l * theta) for l, a in zip(L.offsets, L.alpha))
    out = np.asarray(out, dtype=complex)
    return complex(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class AmplificationReport:
    lam: float
    max_modulus: float
    argmax_theta: float
    unstable_for_all_lambda: bool

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "max_modulus": self.max_modulus,
            "argmax_theta": self.argmax_theta,
            "unstable_for_all_lambda": self.unstable_for_all_lambda,
        }


def _refined_max(func, grid_points: int = GRID_POINTS) -> tuple:
    """Maximise a 2pi-periodic function: grid scan, then golden section."""
    theta = np.linspace(0.0, 2 * np.pi, grid_points, endpoint=False)
    vals = func(theta)
    k = int(np.argmax(vals))
    dtheta = 2 * np.pi / grid_points
    lo, mid, hi = theta[k] - dtheta, theta[k], theta[k] + dtheta
    best_t, best_v = theta[k], float(vals[k])
    if func(np.array([lo]))[0] < best_v and func(np.array([hi]))[0] < best_v:
        res = minimize_scalar(lambda t: -func(np.array([t]))[0], bracket=(lo, mid, hi),
                              method="golden", tol=THETA_TOL)
        if -res.fun >= best_v:
            best_t, best_v = float(res.x), float(-res.fun)
    return best_t % (2 * np.pi), best_v


def max_amplification(L: LinearizedScheme, lam: float) -> AmplificationReport:
    """Largest ``|symbol|`` over theta with its location."""
    if lam <= 0:
        raise DomainError("lambda must be positive")
    theta, value = _refined_max(lambda t: np.abs(symbol(L, lam, t)))
    unstable_all = L.antisymmetric and bool(np.any(L.alpha != 0))
    return AmplificationReport(float(lam), value, theta, unstable_all)


class InstabilityWitness(NamedTuple):
    unstable: bool
    theta: Optional[float]
    sine_sum: float

    def modulus(self, lam: float) -> float:
        return float(np.sqrt(1 + 4 * lam ** 2 * self.sine_sum ** 2))


def certify_fe_instability(L: LinearizedScheme) -> InstabilityWitness:
    """Witness theta with ``sum alpha_l sin(l theta) != 0`` for an antisymmetric scheme.

    The modulus there is ``sqrt(1 + 4 lam^2 S^2) > 1`` for every ``lam > 0``.
    """
    if not L.antisymmetric:
        raise DomainError("instability is only certified for antisymmetric coefficients")
    a = L.normal_form
    if not np.any(a):
        return InstabilityWitness(False, None, 0.0)

    def sine_sum(theta):
        return sum(al * np.sin(l * theta) for l, al in enumerate(a, start=1))

    theta, value = _refined_max(lambda t: np.abs(sine_sum(t)))
    s = float(sine_sum(theta))
    return InstabilityWitness(s != 0.0, theta, s)


def is_stable(L: LinearizedScheme, lam: float) -> bool:
    return max_amplification(L, lam).max_modulus <= 1 + STABILITY_TOL


def max_stable_cfl(L: LinearizedScheme) -> float:
    """Largest ``lam`` in ``(0, 10]`` with ``max |symbol| <= 1 + 1e-12``, by bisection.

    Antisymmetric nonzero schemes return 0 directly: their excess modulus
    ``~2 lam^2 S^2`` is below the tolerance for ``lam`` near 1e-6 only
    because of the tolerance, not because they are stable.
    """
    if L.antisymmetric and np.any(L.alpha):
        return 0.0
    if is_stable(L, LAMBDA_MAX):
        return LAMBDA_MAX
    if not is_stable(L, LAMBDA_MIN):
        return 0.0
    lo, hi = LAMBDA_MIN, LAMBDA_MAX
    while hi - lo > CFL_TOL:
        mid = 0.5 * (lo + hi)
        if is_stable(L, mid):
            lo = mid
        else:
            hi = mid
    return lo
