"""Multivariate Faa di Bruno formula.

For ``f: R^n -> R`` and a curve ``u: R -> R^n`` the s-th derivative of
``f(u(x))`` is

    sum over m in P_s of  multinomial(m) * f^(|m|)(u(x)) applied to D^m u(x)

where ``P_s`` is the set of multi-indices ``m`` with ``sum_j j*m_j = s`` and
``D^m u`` repeats the scaled derivative ``u^(j)/j!`` exactly ``m_j`` times as
columns. Derivative tensors act multilinearly on those columns.

Values may be floats or Fractions; with polynomial jets built from
Fractions the whole evaluation is exact.
"""
from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence

import mpmath
import numpy as np

from .exceptions import CapabilityError, DomainError

Partition = tuple

MAX_PARTITION_ORDER = 20
MAX_RECURSION_ORDER = 12
MAX_TENSOR_DIM = 8
MAX_TENSOR_ORDER = 8


# -- partitions ------------------------------------------------------------


def enumerate_partitions(s: int) -> list:
    """All ``m`` in ``P_s`` as tuples of length ``s``.

    Ordered lexicographically from the largest ``m`` down, so for s=3 the
    result is ``[(3, 0, 0), (1, 1, 0), (0, 0, 1)]``.
    """
    if not isinstance(s, (int, np.integer)) or not 1 <= s <= MAX_PARTITION_ORDER:
        raise DomainError(f"s must be an integer in [1, {MAX_PARTITION_ORDER}], got {s!r}")
    s = int(s)
    out = []

    def rec(j, remaining, prefix):
        if j > s:
            if remaining == 0:
                out.append(tuple(prefix))
            return
        for mj in range(remaining // j, -1, -1):
            prefix.append(mj)
            rec(j + 1, remaining - j * mj, prefix)
            prefix.pop()

    rec(1, s, [])
    return out


def partition_order(m: Sequence[int]) -> int:
    """``sum_j j*m_j``, the derivative order a multi-index belongs to."""
    return sum((j + 1) * mj for j, mj in enumerate(m))


def _check_partition(m) -> tuple:
    m = tuple(int(x) for x in m)
    if any(x < 0 for x in m):
        raise DomainError(f"negative entry in {m}")
    return m


def multinomial(m: Sequence[int]) -> int:
    """``s! / (m_1! ... m_s!)`` with ``s = sum_j j*m_j``."""
    m = _check_partition(m)
    out = math.factorial(partition_order(m))
    for mj in m:
        out //= math.factorial(mj)
    return out


def raw_derivative_coefficient(m: Sequence[int]) -> int:
    """Coefficient of ``f^(|m|) * prod_j (u^(j))^{m_j}`` in unscaled form.

    This is the classical Faa di Bruno integer ``multinomial(m) / prod_j (j!)^m_j``;
    e.g. 3 for ``f'' u' u''`` in the third derivative.
    """
    m = _check_partition(m)
    denom = 1
    for j, mj in enumerate(m, start=1):
        denom *= math.factorial(j) ** mj
    num = multinomial(m)
    assert num % denom == 0
    return num // denom


# -- tensors and jets ------------------------------------------------------


@dataclass(frozen=True)
class Tensor:
    """Dense covariant tensor of order ``s`` over ``R^n`` (shape ``(n,)*s``)."""

    entries: np.ndarray

    def __post_init__(self):
        e = self.entries
        if e.ndim and len(set(e.shape)) > 1:
            raise DomainError(f"tensor must be n x ... x n, got shape {e.shape}")

    @property
    def order(self) -> int:
        return self.entries.ndim

    @property
    def dim(self) -> int:
        return self.entries.shape[0] if self.entries.ndim else 0

    def apply(self, A):
        """Contract with the columns of an ``n x s`` matrix.

        Returns ``sum T[i1..is] A[i1,0] ... A[is,s-1]``.
        """
        A = np.asarray(A)
        if A.ndim == 1:
            A = A[:, None]
        if A.shape[1] != self.order or (self.order and A.shape[0] != self.dim):
            raise DomainError(
                f"order-{self.order} tensor over R^{self.dim} cannot act on shape {A.shape}"
            )
        out = self.entries
        for k in range(A.shape[1]):
            out = np.tensordot(out, A[:, k], axes=(0, 0))
        return out[()] if isinstance(out, np.ndarray) else out

    def is_symmetric(self, samples: int = 64, rng=None, atol: float = 0.0) -> bool:
        """Check invariance under index permutations at sampled entries."""
        if self.order < 2:
            return True
        rng = np.random.default_rng(rng)
        e = self.entries
        for _ in range(samples):
            idx = tuple(rng.integers(0, self.dim, size=self.order))
            perm = tuple(rng.permutation(idx))
            if abs(e[idx] - e[perm]) > atol:
                return False
        return True


class JetFunction:
    """Scalar function on ``R^n`` with access to its derivative tensors.

    Parameters
    ----------
    func : callable
        ``func(u) -> scalar`` for ``u`` of shape ``(n,)``.
    n : int
        Input dimension.
    jet : callable, optional
        ``jet(k, u) -> array of shape (n,)*k`` returning the k-th derivative
        tensor. When omitted, tensors are approximated by nested central
        differences with step ``fd_step`` per level. That fallback loses
        roughly ``eps / fd_step**k`` of relative accuracy, so it is only
        useful for low orders.
    max_order : int, optional
        Highest order ``jet`` can supply; asking for more raises
        :class:`CapabilityError`.
    """

    def __init__(self, func: Callable, n: int, jet: Optional[Callable] = None,
                 max_order: Optional[int] = None, fd_step: float = 1e-3,
                 mp_func: Optional[Callable] = None):
        if not 1 <= n <= MAX_TENSOR_DIM:
            raise DomainError(f"dimension {n} outside [1, {MAX_TENSOR_DIM}]")
        self.func = func
        # same function written against mpmath, for high-precision oracles
        self.mp_func = mp_func
        self.n = n
        self.jet = jet
        self.max_order = MAX_TENSOR_ORDER if max_order is None else max_order
        self.fd_step = fd_step

    def __call__(self, u):
        return self.func(np.asarray(u))

    def derivative(self, k: int, u) -> Tensor:
        if k > self.max_order or k > MAX_TENSOR_ORDER:
            raise CapabilityError(f"derivative of order {k} not available")
        u = np.asarray(u)
        if k == 0:
            return Tensor(np.asarray(self.func(u)))
        if self.jet is not None:
            return Tensor(np.asarray(self.jet(k, u)))
        return Tensor(self._fd_tensor(k, u.astype(float)))

    def _fd_tensor(self, k, u):
        n, h = self.n, self.fd_step
        if k == 0:
            return np.asarray(float(self.func(u)))
        out = np.empty((n,) * k)
        for i in range(n):
            e = np.zeros(n)
            e[i] = h
            out[i] = (self._fd_tensor(k - 1, u + e) - self._fd_tensor(k - 1, u - e)) / (2 * h)
        return out

    def __add__(self, other: "JetFunction") -> "JetFunction":
        if self.n != other.n:
            raise DomainError("dimension mismatch")
        if self.jet is None or other.jet is None:
            jet = None
        else:
            def jet(k, u, a=self, b=other):
                return np.asarray(a.jet(k, u)) + np.asarray(b.jet(k, u))
        mp_func = None
        if self.mp_func is not None and other.mp_func is not None:
            def mp_func(u, a=self, b=other):
                return a.mp_func(u) + b.mp_func(u)
        return JetFunction(lambda u, a=self, b=other: a.func(u) + b.func(u), self.n, jet,
                           min(self.max_order, other.max_order), self.fd_step, mp_func)


class CurveJet:
    """Curve ``u: R -> R^n`` with nodal derivative access.

    ``derivative(j, x)`` must return an array of shape ``(n,)``; ``j = 0``
    is the value itself.
    """

    def __init__(self, derivative: Callable, n: int, max_order: int = MAX_TENSOR_ORDER,
                 mp_func: Optional[Callable] = None):
        self._derivative = derivative
        self.n = n
        self.max_order = max_order
        self.mp_func = mp_func

    def __call__(self, x):
        return self.derivative(0, x)

    def derivative(self, j: int, x):
        if j > self.max_order:
            raise CapabilityError(f"curve derivative of order {j} not available")
        return np.asarray(self._derivative(j, x))


def build_Dm(u: CurveJet, x, m: Sequence[int]) -> np.ndarray:
    """The ``n x |m|`` matrix whose column block j repeats ``u^(j)(x)/j!`` m_j times."""
    m = _check_partition(m)
    cols = []
    for j, mj in enumerate(m, start=1):
        if mj == 0:
            continue
        d = u.derivative(j, x)
        col = _scale(d, j)
        cols.extend([col] * mj)
    if not cols:
        return np.zeros((u.n, 0))
    return np.stack(cols, axis=1)


def _scale(d, j):
    if d.dtype == object:
        return d / math.factorial(j)
    return d / float(math.factorial(j))


def fdb_derivative(f: JetFunction, u: CurveJet, x, s: int):
    """``d^s/dx^s f(u(x))`` via the partition sum."""
    if s < 1:
        raise DomainError("s must be positive")
    ux = u(x)
    total = 0
    for m in enumerate_partitions(s):
        D = build_Dm(u, x, m)
        total = total + multinomial(m) * f.derivative(D.shape[1], ux).apply(D)
    return total


def fdb_recursion_coefficients(s: int) -> dict:
    """Coefficients on ``P_{s+1}`` built by repeated differentiation.

    Starting from ``{(1,): 1}`` (the chain rule), each step differentiates
    every term ``a_m f^(|m|)(u) D^m u``. Differentiating ``f^(|m|)(u)``
    prepends a ``u'`` column (m_1 increases by one, weight 1); differentiating
    one of the ``m_k`` columns ``u^(k)/k!`` turns it into
    ``(k+1) u^(k+1)/(k+1)!`` (m_k decreases, m_{k+1} increases, weight
    ``m_k (k+1)``). Like terms are collected after each step. The result
    should coincide with :func:`multinomial`; nothing here consults it.
    """
    if not isinstance(s, (int, np.integer)) or not 1 <= s <= MAX_RECURSION_ORDER:
        raise DomainError(f"s must be an integer in [1, {MAX_RECURSION_ORDER}], got {s!r}")
    coeffs = {(1,): 1}
    for t in range(1, s + 1):
        nxt = defaultdict(int)
        for m, a in coeffs.items():
            padded = list(m) + [0]
            grown = padded.copy()
            grown[0] += 1
            nxt[tuple(grown)] += a
            for k in range(1, t + 1):
                mk = m[k - 1]
                if mk == 0:
                    continue
                shifted = padded.copy()
                shifted[k - 1] -= 1
                shifted[k] += 1
                nxt[tuple(shifted)] += a * mk * (k + 1)
        coeffs = dict(nxt)
    return {m: coeffs[m] for m in enumerate_partitions(s + 1)}


def product_rule_derivative(T: Tensor, dT: Tensor, du, A, dA):
    """Derivative of ``x -> T(u(x)) A(x)`` from values at a point.

    ``dT`` is the order-(s+1) tensor ``T'(u)`` whose first index is the
    differentiation direction, ``du = u'(x)``, ``A`` and ``dA`` are the
    ``n x s`` matrix and its derivative. Returns
    ``T'(u)[u' A] + sum_j T(A with column j replaced by A'_j)``.
    """
    A = np.asarray(A)
    dA = np.asarray(dA)
    out = dT.apply(np.column_stack([np.asarray(du), A]))
    for j in range(A.shape[1]):
        Aj = A.copy()
        Aj[:, j] = dA[:, j]
        out = out + T.apply(Aj)
    return out


# -- ready-made jets -------------------------------------------------------


def _frac_array(shape):
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def polynomial_function(coeffs: Mapping[tuple, object], n: int) -> JetFunction:
    """Polynomial ``sum c_e u^e`` on ``R^n`` with exact derivative tensors.

    ``coeffs`` maps exponent tuples of length ``n`` to coefficients. With
    Fraction coefficients and Fraction inputs all jets are exact.
    """
    terms = [(tuple(int(x) for x in e), Fraction(c)) for e, c in coeffs.items()]
    if any(len(e) != n for e, _ in terms):
        raise DomainError("exponent length must equal n")

    def value_of(terms_, u):
        total = Fraction(0)
        for e, c in terms_:
            v = c
            for ui, ei in zip(u, e):
                v = v * ui ** ei
            total = total + v
        return total

    def func(u):
        return value_of(terms, list(u))

    def jet(k, u):
        u = list(u)
        out = _frac_array((n,) * k)
        for idx in itertools.product(range(n), repeat=k):
            counts = [idx.count(i) for i in range(n)]
            total = Fraction(0)
            for e, c in terms:
                if any(ei < ci for ei, ci in zip(e, counts)):
                    continue
                v = c
                for ui, ei, ci in zip(u, e, counts):
                    v = v * (math.factorial(ei) // math.factorial(ei - ci)) * ui ** (ei - ci)
                total = total + v
            out[idx] = total
        return out

    return JetFunction(func, n, jet)


def polynomial_curve(components: Sequence[Sequence[object]]) -> CurveJet:
    """Curve whose i-th component is ``sum_k components[i][k] x**k``."""
    comps = [[Fraction(c) for c in comp] for comp in components]

    def derivative(j, x):
        out = np.empty(len(comps), dtype=object)
        for i, comp in enumerate(comps):
            total = Fraction(0)
            for k in range(j, len(comp)):
                total += comp[k] * (math.factorial(k) // math.factorial(k - j)) * Fraction(x) ** (k - j)
            out[i] = total
        return out

    return CurveJet(derivative, len(comps))


_RIDGE_PROFILES = {
    "exp": lambda k, t: np.exp(t),
    "sin": lambda k, t: np.sin(t + k * np.pi / 2),
    "cos": lambda k, t: np.cos(t + k * np.pi / 2),
}


def ridge_function(kind: str, w, b: float = 0.0, scale: float = 1.0) -> JetFunction:
    """``scale * g(w . u + b)`` for ``g`` in {exp, sin, cos}, with analytic jets."""
    g = _RIDGE_PROFILES[kind]
    w = np.asarray(w, dtype=float)
    n = w.size

    def func(u):
        return scale * g(0, float(np.dot(w, u)) + b)

    def jet(k, u):
        t = float(np.dot(w, u)) + b
        out = np.asarray(scale * g(k, t))
        for _ in range(k):
            out = np.multiply.outer(out, w)
        return out

    def mp_func(u):
        t = mpmath.fsum(mpmath.mpf(float(wi)) * ui for wi, ui in zip(w, u)) + b
        return scale * {"exp": mpmath.exp, "sin": mpmath.sin, "cos": mpmath.cos}[kind](t)

    return JetFunction(func, n, jet, mp_func=mp_func)


def trig_curve(amplitudes, frequencies, phases) -> CurveJet:
    """Curve with components ``A_i sin(w_i x + p_i)``."""
    A = np.asarray(amplitudes, dtype=float)
    w = np.asarray(frequencies, dtype=float)
    p = np.asarray(phases, dtype=float)

    def derivative(j, x):
        return A * w ** j * np.sin(w * x + p + j * np.pi / 2)

    def mp_func(x):
        return [mpmath.mpf(float(a)) * mpmath.sin(mpmath.mpf(float(wi)) * x + float(pi))
                for a, wi, pi in zip(A, w, p)]

    return CurveJet(derivative, A.size, mp_func=mp_func)
