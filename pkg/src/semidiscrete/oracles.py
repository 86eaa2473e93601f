"""Numerical derivative oracles that share no code with the jet engine."""
from __future__ import annotations

from math import comb

import mpmath
import numpy as np


def central_difference(g, x: float, s: int, h: float) -> float:
    """s-th derivative of scalar ``g`` by the symmetric s-th difference.

    Nodes sit at ``x + (s/2 - k) h``, so the error expansion is even in h.
    """
    total = 0.0
    for k in range(s + 1):
        total += (-1) ** k * comb(s, k) * g(x + (s / 2 - k) * h)
    return total / h ** s


def richardson_derivative(g, x: float, s: int, h: float = 1e-2, levels: int = 3,
                          dps: int | None = None) -> float:
    """Richardson-extrapolated :func:`central_difference`.

    Builds the Neville table over steps ``h, h/2, ..., h/2**(levels-1)``
    eliminating the h^2, h^4, ... error terms. With ``dps`` set, ``g`` is
    called on mpmath numbers at that many digits; double precision loses
    about ``eps / h**s`` to cancellation, which is too much past s = 3.
    """
    if dps is None:
        table = [central_difference(g, x, s, h / 2 ** i) for i in range(levels)]
        factor = 4.0
    else:
        with mpmath.workdps(dps):
            x, h = mpmath.mpf(x), mpmath.mpf(h)
            table = [central_difference(g, x, s, h / 2 ** i) for i in range(levels)]
            factor = mpmath.mpf(4)
            for k in range(1, levels):
                fk = factor ** k
                table = [(fk * table[i + 1] - table[i]) / (fk - 1) for i in range(len(table) - 1)]
            return float(table[0])
    for k in range(1, levels):
        fk = factor ** k
        table = [(fk * table[i + 1] - table[i]) / (fk - 1) for i in range(len(table) - 1)]
    return float(table[0])


def composite_derivative(f, u, x: float, s: int, h: float = 1e-2, levels: int = 3,
                         dps: int = 40) -> float:
    """Derivative of ``x -> f(u(x))`` from function values only.

    Uses the mpmath forms ``f.mp_func`` and ``u.mp_func`` at ``dps`` digits.
    """
    if f.mp_func is None or u.mp_func is None:
        return richardson_derivative(lambda y: float(f(u(y))), x, s, h, levels)
    return richardson_derivative(lambda y: f.mp_func(u.mp_func(y)), x, s, h, levels, dps)


def relative_error(value, reference) -> float:
    value = complex(value)
    reference = complex(reference)
    if reference == 0:
        return abs(value)
    return abs(value - reference) / abs(reference)


def gradient_fd(func, point, step: float = 1e-6) -> np.ndarray:
    """Second-order central-difference gradient, used for cross-checks only."""
    point = np.asarray(point, dtype=float)
    out = np.empty_like(point)
    for i in range(point.size):
        e = np.zeros_like(point)
        e[i] = step
        out[i] = (func(point + e) - func(point - e)) / (2 * step)
    return out


# -- exact univariate polynomials (coefficient lists, lowest degree first) --


def poly_add(p, q):
    n = max(len(p), len(q))
    return [(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)]


def poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def poly_pow(p, k):
    out = [1]
    for _ in range(k):
        out = poly_mul(out, p)
    return out


def poly_derivative(p, s=1):
    for _ in range(s):
        p = [i * c for i, c in enumerate(p)][1:] or [0]
    return p


def poly_eval(p, x):
    total = 0
    for c in reversed(p):
        total = total * x + c
    return total


def composed_polynomial_derivative(coeffs, components, x, s):
    """Exact ``d^s/dx^s f(u(x))`` for polynomial f and u by full expansion.

    ``coeffs`` maps exponent tuples to coefficients of f; ``components``
    lists the coefficient sequence of each u_i.
    """
    total = [0]
    for e, c in coeffs.items():
        term = [c]
        for comp, ei in zip(components, e):
            term = poly_mul(term, poly_pow(list(comp), ei))
        total = poly_add(total, term)
    return poly_eval(poly_derivative(total, s), x)
