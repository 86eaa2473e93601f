"""Grid functions and test problems on the periodic domain [0, 2pi)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..exceptions import DomainError

PERIOD = 2 * np.pi


def grid(N: int) -> np.ndarray:
    return np.arange(N) * (PERIOD / N)


@dataclass(frozen=True)
class GridFunction:
    """Nodal values ``v_j ~ u(x_j)`` with ``x_j = j h``, ``h = 2pi / N``."""

    values: np.ndarray
    h: float

    @classmethod
    def sample(cls, func: Callable, N: int) -> "GridFunction":
        return cls(np.asarray(func(grid(N))), PERIOD / N)

    @property
    def N(self) -> int:
        return self.values.size

    @property
    def x(self) -> np.ndarray:
        return grid(self.N)

    @property
    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.values)))

    def max_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def two_norm(self) -> float:
        """Grid L2 norm ``sqrt(h * sum |v_j|^2)``."""
        return float(np.sqrt(self.h * np.sum(np.abs(self.values) ** 2)))


@dataclass(frozen=True)
class Problem:
    """``u_t = a(u) u_x`` with initial data and, optionally, the exact solution.

    ``flux`` is an f with ``f'(u) = -a(u)``, needed by conservative (WENO)
    discretizations of ``u_t + f(u)_x = 0``.
    """

    a: Callable
    initial: Callable
    exact: Optional[Callable] = None
    T: float = 1.0
    flux: Optional[Callable] = None
    name: str = "custom"

    def __post_init__(self):
        if self.T < 0:
            raise DomainError("final time must be non-negative")
        if self.exact is not None:
            xs = np.linspace(0.0, PERIOD, 17)
            gap = np.max(np.abs(np.asarray(self.exact(xs, 0.0)) - np.asarray(self.initial(xs))))
            if gap > 1e-12:
                raise DomainError(f"exact(x, 0) differs from initial(x) by {gap:.3e}")

    def speed(self, u):
        return np.broadcast_to(np.asarray(self.a(u)), np.shape(u))


def advection(speed: float = 1.0, T: float = 1.0) -> Problem:
    """Constant speed: ``u_t = c u_x``, ``u0 = sin``, exact ``sin(x + c t)``."""
    c = float(speed)
    return Problem(
        a=lambda u: np.full(np.shape(u), c),
        initial=np.sin,
        exact=lambda x, t: np.sin(x + c * t),
        T=T,
        flux=lambda u: -c * u,
        name="advection",
    )


def _burgers_exact(x, t, u0=np.sin, du0=np.cos, iters=50):
    # characteristics u = u0(x - u t), solved by Newton before the shock (t < 1)
    x = np.asarray(x, dtype=float)
    u = u0(x)
    for _ in range(iters):
        g = u - u0(x - u * t)
        dg = 1 + t * du0(x - u * t)
        step = g / dg
        u = u - step
        if np.max(np.abs(step)) < 1e-15:
            break
    return u


def burgers(T: float = 0.5) -> Problem:
    """``u_t = -u u_x`` (inviscid Burgers), ``u0 = sin``; smooth for T < 1."""
    if T >= 1:
        raise DomainError("the sine profile steepens into a shock at t = 1")
    return Problem(
        a=lambda u: -np.asarray(u),
        initial=np.sin,
        exact=_burgers_exact,
        T=T,
        flux=lambda u: 0.5 * np.asarray(u) ** 2,
        name="burgers",
    )


PROBLEMS = {"advection": advection, "burgers": burgers}
