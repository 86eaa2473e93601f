"""Named schemes shared by the command line and the acceptance battery."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .exceptions import DomainError
from .order import SchemeFunction, linear_scheme, max_order_stencil
from .pde import weno
from .pde.schemes import LinearStencilScheme, SpatialScheme, UpwindScheme, WenoScheme, \
    FunctionScheme, make_upwind_stencil


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    formal_order: int
    speed: Callable
    scheme_function: Callable[[], SchemeFunction]
    spatial: Callable[[], SpatialScheme]
    description: str


def _unit_speed(u):
    return np.ones_like(np.asarray(u, dtype=float))


def _burgers_H(u):
    # u_t = -u u_x: H = -(u_{+1}^2 - u_{-1}^2) / 4
    return -(u[2] ** 2 - u[0] ** 2) / 4


def _weno_function(r):
    def H(u):
        return weno.local_derivative(u, lambda v: -v, 1.0, r)
    return SchemeFunction(r, H, name=f"weno{2 * r - 1}", formal_order=2 * r - 1,
                          description="WENO, unit speed, Lax-Friedrichs constant 1")


def get_scheme(name: str) -> CatalogEntry:
    """Look up ``centralR``, ``upwindR``, ``weno3``, ``weno5`` or ``burgers-central``."""
    m = re.fullmatch(r"central(\d)", name)
    if m:
        r = int(m.group(1))
        st = max_order_stencil(r)
        return CatalogEntry(name, 2 * r, _unit_speed, lambda: linear_scheme(st, name),
                            lambda: LinearStencilScheme(st), f"order-{2 * r} central difference")
    m = re.fullmatch(r"upwind(\d)", name)
    if m:
        r = int(m.group(1))
        st = make_upwind_stencil(r, 1)
        return CatalogEntry(name, 2 * r - 1, _unit_speed, lambda: linear_scheme(st, name),
                            lambda: UpwindScheme(r), f"order-{2 * r - 1} upwind-biased")
    if name in ("weno3", "weno5"):
        r = 2 if name == "weno3" else 3
        return CatalogEntry(name, 2 * r - 1, _unit_speed, lambda: _weno_function(r),
                            lambda: WenoScheme(r), f"WENO order {2 * r - 1}, {2 * r + 1} points")
    if name == "burgers-central":
        sf = SchemeFunction(1, _burgers_H, name=name, formal_order=2,
                            description="central flux difference for u_t = -u u_x")
        return CatalogEntry(name, 2, lambda u: -np.asarray(u), lambda: sf,
                            lambda: FunctionScheme(sf, 2), sf.description)
    raise DomainError(f"unknown scheme {name!r}")


SCHEME_NAMES = ["central1", "central2", "central3", "upwind1", "upwind2", "upwind3",
                "weno3", "weno5", "burgers-central"]
