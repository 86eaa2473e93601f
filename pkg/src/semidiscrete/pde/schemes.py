"""Spatial operators ``H(v_{j-r}, ..., v_{j+r}) / h`` on periodic grids."""
from __future__ import annotations

from typing import Optional

import numpy as np

from ..exceptions import BlowUpError, DomainError
from ..order import SchemeFunction, Stencil, stencil_on_nodes
from . import weno
from .problems import GridFunction, Problem


def make_upwind_stencil(r: int, direction: int = 1) -> Stencil:
    """Order 2r-1 stencil on the 2r nodes biased toward ``direction``.

    ``direction=+1`` uses offsets -(r-1)..r, the upwind side for
    ``u_t = a u_x`` with ``a > 0``; ``-1`` mirrors it.
    """
    if r < 1:
        raise DomainError("r must be positive")
    if direction not in (1, -1):
        raise DomainError("direction must be +1 or -1")
    nodes = range(-(r - 1), r + 1) if direction > 0 else range(-r, r)
    return stencil_on_nodes(r, nodes)


def _shifted(w: np.ndarray, r: int) -> np.ndarray:
    # row l + r holds w_{j+l}
    return np.stack([np.roll(w, -l) for l in range(-r, r + 1)])


def _differences(w: np.ndarray, r: int) -> np.ndarray:
    # w_{j+l} - w_j: with sum c_l = 0 this is the same operator, and exactly
    # zero on constants even when the float c_l do not sum to zero
    return _shifted(w, r) - w


def _check_finite(w: np.ndarray):
    bad = np.flatnonzero(~np.isfinite(w))
    if bad.size:
        raise BlowUpError(f"non-finite value at node {bad[0]}", index=int(bad[0]))


class SpatialScheme:
    """Base class; subclasses implement :meth:`derivative`."""

    kind = "abstract"
    r: int
    order: int

    def derivative(self, w: np.ndarray, h: float, problem: Problem) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, w: np.ndarray, h: float, problem: Problem) -> np.ndarray:
        _check_finite(w)
        if w.size < 2 * self.r + 2:
            raise DomainError(f"N={w.size} too small for a {2 * self.r + 1}-point scheme")
        return self.derivative(w, h, problem)

    def describe(self) -> dict:
        return {"kind": self.kind, "r": self.r, "order": self.order, "points": 2 * self.r + 1}


class LinearStencilScheme(SpatialScheme):
    """``H_j = a(w_j) * sum_l c_l w_{j+l}`` (speed frozen at the node).

    Accepts a :class:`Stencil` or, via :meth:`from_coefficients`, a plain
    float vector (whose order is then reported as 0, unknown).
    """

    kind = "linear_stencil"

    def __init__(self, stencil: Stencil):
        self.stencil = stencil
        self.r = stencil.r
        self.order = stencil.order()
        self._c = stencil.as_array()

    @classmethod
    def from_coefficients(cls, c) -> "LinearStencilScheme":
        c = np.asarray(c, dtype=float)
        if c.ndim != 1 or c.size % 2 == 0:
            raise DomainError("coefficients must be a vector of odd length")
        self = cls.__new__(cls)
        self.stencil = None
        self.r = (c.size - 1) // 2
        self.order = 0
        self._c = c
        return self

    def derivative(self, w, h, problem):
        acc = np.tensordot(self._c, _differences(w, self.r), axes=(0, 0))
        return problem.speed(w) * acc / h


class UpwindScheme(SpatialScheme):
    """Order 2r-1 upwind-biased linear scheme.

    ``direction="adaptive"`` picks the biased stencil per node from the sign
    of ``a(w_j)``; ``"fixed"`` always uses the ``a > 0`` stencil.
    """

    kind = "upwind_linear"

    def __init__(self, r: int, direction: str = "adaptive"):
        if direction not in ("adaptive", "fixed"):
            raise DomainError(f"unknown direction handling {direction!r}")
        self.r = r
        self.direction = direction
        self.plus = make_upwind_stencil(r, 1)
        self.minus = make_upwind_stencil(r, -1)
        self.order = 2 * r - 1
        self._cp = self.plus.as_array()
        self._cm = self.minus.as_array()

    def derivative(self, w, h, problem):
        shifts = _differences(w, self.r)
        a = problem.speed(w)
        acc = np.tensordot(self._cp, shifts, axes=(0, 0))
        if self.direction == "adaptive":
            acc = np.where(np.real(a) >= 0, acc, np.tensordot(self._cm, shifts, axes=(0, 0)))
        return a * acc / h


class WenoScheme(SpatialScheme):
    """Finite-difference WENO with global Lax-Friedrichs splitting.

    Solves the conservative form ``u_t + f(u)_x = 0`` with ``f' = -a``,
    which is the same equation for constant ``a`` and for Burgers.
    """

    kind = "weno"

    def __init__(self, r: int):
        if r not in (2, 3):
            raise DomainError("WENO is available for r = 2 and r = 3")
        self.r = r
        self.order = 2 * r - 1

    def derivative(self, w, h, problem):
        if problem.flux is None:
            raise DomainError("WENO needs a problem with a flux function")
        return weno.weno_derivative(w, h, problem.flux, problem.speed, self.r)


class FunctionScheme(SpatialScheme):
    """Generic ``H`` from a :class:`SchemeFunction`, applied to stacked shifts."""

    kind = "scheme_function"

    def __init__(self, scheme: SchemeFunction, order: Optional[int] = None):
        self.scheme = scheme
        self.r = scheme.r
        self.order = order if order is not None else (scheme.formal_order or 0)

    def derivative(self, w, h, problem):
        return np.asarray(self.scheme(_shifted(w, self.r))) / h


def rhs(S: SpatialScheme, P: Problem, w: GridFunction) -> GridFunction:
    """Semidiscrete right-hand side ``H(w_{j-r}, ..., w_{j+r}) / h`` at every node."""
    return GridFunction(S(np.asarray(w.values), w.h, P), w.h)
