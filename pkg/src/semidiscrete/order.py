"""Order conditions for semidiscrete (2r+1)-point schemes.

A scheme ``v_j' = H(v_{j-r}, ..., v_{j+r}) / h`` approximating
``u_t = a(u) u_x`` to order p must satisfy, at every constant state v,

    sum_l l**k c_l = delta_{k,1} a(v),   k = 0..p,

with ``c_l = dH/du_l (v, ..., v)``. This module builds stencils from those
moment conditions, shows that order 2r+1 is impossible and checks the
structure forced at order 2r.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .exact import (
    RationalMatrix,
    as_fraction,
    det_lemma2,
    det_oracle,
    rank,
    solve_exact,
)
from .exceptions import (
    ConsistencyWarning,
    DegenerateFitError,
    DomainError,
    EvaluationError,
    PreconditionError,
)

MAX_R = 8


@dataclass(frozen=True)
class Stencil:
    """Coefficients ``c_{-r..r}`` with exact rational entries."""

    r: int
    c: tuple
    wave_speed: Fraction = Fraction(1)

    def __post_init__(self):
        if self.r < 1:
            raise DomainError("r must be positive")
        c = tuple(as_fraction(x) for x in self.c)
        if len(c) != 2 * self.r + 1:
            raise DomainError(f"stencil for r={self.r} needs {2 * self.r + 1} entries, got {len(c)}")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "wave_speed", as_fraction(self.wave_speed))

    @property
    def offsets(self) -> range:
        return range(-self.r, self.r + 1)

    def coefficient(self, l: int) -> Fraction:
        return self.c[l + self.r]

    def as_array(self) -> np.ndarray:
        return np.array([float(x) for x in self.c])

    def to_dict(self) -> dict:
        return {"r": self.r, "c": [str(x) for x in self.c], "wave_speed": str(self.wave_speed)}

    @classmethod
    def from_dict(cls, d: dict) -> "Stencil":
        return cls(int(d["r"]), tuple(d["c"]), d.get("wave_speed", "1"))

    def order(self, k_limit: int = 4 * MAX_R) -> int:
        """Largest p with ``M_k = delta_{k,1} * wave_speed`` for all k <= p; -1 if inconsistent."""
        ms = moments(self, k_limit)
        p = -1
        for k, mk in enumerate(ms):
            if mk != (self.wave_speed if k == 1 else 0):
                break
            p = k
        return p


def _coefficients(c) -> tuple:
    if isinstance(c, Stencil):
        return c.r, c.c
    c = tuple(c)
    if len(c) % 2 == 0:
        raise DomainError("stencil length must be odd")
    return (len(c) - 1) // 2, c


def moments(c, k_max: int) -> tuple:
    """``(M_0, ..., M_kmax)`` with ``M_k = sum_l l**k c_l`` (``0**0 = 1``).

    Exact for rational stencils; float entries give float moments.
    """
    if k_max < 0:
        raise DomainError("k_max must be non-negative")
    r, coeffs = _coefficients(c)
    exact = all(isinstance(x, (int, Fraction)) for x in coeffs)
    out = []
    for k in range(k_max + 1):
        terms = (l ** k * cl for l, cl in zip(range(-r, r + 1), coeffs))
        out.append(sum(terms, Fraction(0)) if exact else float(sum(terms)))
    return tuple(out)


def moment_matrix(nodes: Sequence[int], powers: Sequence[int]) -> RationalMatrix:
    """Rows ``[node**k for node in nodes]`` for each k in ``powers``."""
    return RationalMatrix.from_rows([[Fraction(l) ** k for l in nodes] for k in powers])


def stencil_on_nodes(r: int, nodes: Sequence[int], wave_speed=1) -> Stencil:
    """Solve ``M_k = delta_{k,1} wave_speed`` for k < len(nodes) on the given offsets.

    Offsets outside ``nodes`` get zero weight. Raises if the square system
    is singular (repeated nodes).
    """
    nodes = list(nodes)
    if any(abs(l) > r for l in nodes):
        raise DomainError(f"nodes {nodes} do not fit in r={r}")
    w = as_fraction(wave_speed)
    M = moment_matrix(nodes, range(len(nodes)))
    rhs = [w if k == 1 else 0 for k in range(len(nodes))]
    sol = solve_exact(M, rhs)
    if not isinstance(sol, tuple):
        raise DomainError(f"moment system on nodes {nodes} is singular")
    c = [Fraction(0)] * (2 * r + 1)
    for l, x in zip(nodes, sol):
        c[l + r] = x
    return Stencil(r, tuple(c), w)


def max_order_stencil(r: int, wave_speed=1) -> Stencil:
    """The unique (2r+1)-point stencil of order 2r (central differences)."""
    if not 1 <= r <= MAX_R:
        raise DomainError(f"r must be in [1, {MAX_R}]")
    return stencil_on_nodes(r, range(-r, r + 1), wave_speed)


@dataclass(frozen=True)
class BarrierCertificate:
    r: int
    system_rank: int
    augmented_rank: int
    conclusion: str
    homogeneous_rank: int
    unknowns: int
    det_homogeneous: Fraction
    det_closed_form: Fraction
    det_closed_form_zero_first: Fraction
    zero_first_sign: int

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "system_rank": self.system_rank,
            "augmented_rank": self.augmented_rank,
            "homogeneous_rank": self.homogeneous_rank,
            "unknowns": self.unknowns,
            "conclusion": self.conclusion,
            "det_homogeneous": str(self.det_homogeneous),
            "det_closed_form": str(self.det_closed_form),
            "det_closed_form_zero_first": str(self.det_closed_form_zero_first),
            "zero_first_sign": self.zero_first_sign,
        }


def _permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def barrier_demonstration(r: int, wave_speed=1) -> BarrierCertificate:
    """Show that no (2r+1)-point stencil reaches order 2r+1.

    Order 2r+1 would need ``M_k = 0`` for k in {0, 2, ..., 2r+1}. That
    square system has matrix A(-r, ..., r) (ones row, then powers 2..2r+1),
    which is nonsingular, so c = 0 and ``M_1 = wave_speed`` cannot hold.
    """
    if not 1 <= r <= MAX_R:
        raise DomainError(f"r must be in [1, {MAX_R}]")
    w = as_fraction(wave_speed)
    nodes = list(range(-r, r + 1))
    hom_powers = [0] + list(range(2, 2 * r + 2))
    A = moment_matrix(nodes, hom_powers)
    hom_rank = rank(A)

    full = moment_matrix(nodes, hom_powers + [1])
    rhs = [0] * len(hom_powers) + [w]
    result = solve_exact(full, rhs)
    if isinstance(result, tuple):
        system_rank = augmented_rank = len(nodes)
    else:
        system_rank, augmented_rank = result.rank, result.augmented_rank

    if hom_rank == len(nodes) and augmented_rank > system_rank:
        conclusion = "inconsistent_with_advection"
    elif hom_rank == len(nodes):
        conclusion = "only_trivial_solution"
    else:
        # unreachable for distinct integer nodes; kept so a bad matrix is visible
        conclusion = "nontrivial_solutions"

    zero_first = [r] + [i for i in range(len(nodes)) if i != r]
    return BarrierCertificate(
        r=r,
        system_rank=system_rank,
        augmented_rank=augmented_rank,
        conclusion=conclusion,
        homogeneous_rank=hom_rank,
        unknowns=len(nodes),
        det_homogeneous=det_oracle(A),
        det_closed_form=det_lemma2(nodes),
        det_closed_form_zero_first=det_lemma2([nodes[i] for i in zero_first]),
        zero_first_sign=_permutation_sign(zero_first),
    )


def order2r_consequences(c: Stencil) -> dict:
    """Check antisymmetry and a vanishing centre weight for an order-2r stencil."""
    if not isinstance(c, Stencil):
        c = Stencil(_coefficients(c)[0], tuple(c))
    ms = moments(c, 2 * c.r)
    for k, mk in enumerate(ms):
        target = c.wave_speed if k == 1 else 0
        if mk != target:
            raise PreconditionError(f"stencil is not of order {2 * c.r}: M_{k} = {mk}", index=k)
    return {
        "antisymmetric": all(c.coefficient(l) + c.coefficient(-l) == 0 for l in range(1, c.r + 1)),
        "c0_zero": c.coefficient(0) == 0,
    }


# -- nonlinear schemes -----------------------------------------------------


@dataclass
class SchemeFunction:
    """Numerical derivative function ``H`` of a (2r+1)-point scheme.

    ``H`` takes an array whose leading axis has length 2r+1 (values at
    offsets -r..r) and reduces over it, so it can be applied to one stencil
    or to a whole grid of stacked shifts at once.
    """

    r: int
    H: Callable
    name: str = ""
    description: str = ""
    formal_order: Optional[int] = None
    metadata: dict = field(default_factory=dict)

    def __call__(self, values):
        return self.H(np.asarray(values))


_FD6 = ((1, 3 / 4), (2, -3 / 20), (3, 1 / 60))


def stencil_from_scheme(S: SchemeFunction, v: float, consistency_tol: float = 1e-12) -> np.ndarray:
    """``dH/du_l`` at the constant state ``(v, ..., v)``.

    Sixth-order central differences per coordinate with step
    ``1e-3 * (1 + |v|)``. Emits :class:`ConsistencyWarning` when
    ``H(v, ..., v)`` is not zero.
    """
    n = 2 * S.r + 1
    base = np.full(n, float(v))
    h0 = S(base)
    if not np.isfinite(h0):
        raise EvaluationError(f"H({v}, ...) is not finite")
    if abs(h0) > consistency_tol * max(1.0, abs(v)):
        warnings.warn(f"{S.name or 'scheme'}: H(v,...,v) = {h0} at v = {v}", ConsistencyWarning,
                      stacklevel=2)
    step = 1e-3 * (1 + abs(v))
    out = np.empty(n)
    for i in range(n):
        acc = 0.0
        for k, wk in _FD6:
            plus = base.copy()
            minus = base.copy()
            plus[i] += k * step
            minus[i] -= k * step
            hp, hm = S(plus), S(minus)
            if not (np.isfinite(hp) and np.isfinite(hm)):
                raise EvaluationError(f"H not finite near the constant state, coordinate {i - S.r}")
            acc += wk * (hp - hm)
        out[i] = acc / step
    return out


def linear_scheme(stencil, name: str = "") -> SchemeFunction:
    """``H(u) = sum_l c_l u_l`` as a scheme function."""
    r, coeffs = _coefficients(stencil)
    w = np.array([float(x) for x in coeffs])

    def H(u):
        return np.tensordot(w, u, axes=(0, 0))

    order = stencil.order() if isinstance(stencil, Stencil) else None
    return SchemeFunction(r, H, name=name, description="linear stencil", formal_order=order,
                          metadata={"stencil": stencil})


def default_profile(y):
    return np.sin(y + 0.37)


def default_profile_derivative(y):
    return np.cos(y + 0.37)


@dataclass(frozen=True)
class OrderFit:
    slope: float
    h: tuple
    residuals: tuple


def empirical_order(S: SchemeFunction, a: Callable = None, profile: Callable = None,
                    x: float = 0.7, h_list: Sequence[float] = None,
                    dprofile: Callable = None) -> OrderFit:
    """Least-squares slope of log truncation error against log h.

    The residual at step h is ``|H(u(x-rh), ..., u(x+rh))/h - a(u(x)) u'(x)|``.
    Steps whose residual is below ``1e3 * eps * |u'(x)|`` are dropped as
    rounding-dominated and the slope uses the last four remaining steps.
    """
    if a is None:
        a = lambda u: 1.0  # noqa: E731
    if profile is None:
        profile, dprofile = default_profile, default_profile_derivative
    elif dprofile is None:
        raise DomainError("a custom profile needs its derivative")
    if h_list is None:
        h_list = [0.1 / 2 ** i for i in range(6)]
    h_list = sorted((float(h) for h in h_list), reverse=True)
    if len(h_list) < 4:
        raise DomainError("need at least four step sizes")

    offsets = np.arange(-S.r, S.r + 1)
    target = a(profile(x)) * dprofile(x)
    floor = 1e3 * np.finfo(float).eps * abs(dprofile(x))
    hs, res = [], []
    for h in h_list:
        value = S(profile(x + offsets * h)) / h
        resid = abs(value - target)
        if not np.isfinite(resid):
            raise EvaluationError(f"non-finite residual at h={h}")
        if resid < floor:
            if not hs:
                raise DegenerateFitError(f"residual {resid:.3e} at h={h} is at rounding level")
            continue
        hs.append(h)
        res.append(resid)
    if len(hs) < 2:
        raise DegenerateFitError("fewer than two usable step sizes")
    hs_fit, res_fit = hs[-4:], res[-4:]
    slope = np.polyfit(np.log(hs_fit), np.log(res_fit), 1)[0]
    return OrderFit(float(slope), tuple(hs), tuple(res))
