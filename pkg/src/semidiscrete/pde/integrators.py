"""Time integration, norm histories and convergence studies."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ..exceptions import BlowUpError, DomainError
from .problems import GridFunction, Problem, grid, PERIOD
from .schemes import SpatialScheme

BLOWUP_THRESHOLD = 1e10


@dataclass(frozen=True)
class IntegratorSpec:
    """Time stepper and step-size rule ``dt = cfl * h**dt_exponent / max|a(u0)|``.

    ``dt_exponent=None`` means 1 (the usual CFL rule) in :func:`evolve` and
    ``max(1, order/3)`` in :func:`convergence_study`, which keeps the SSPRK3
    error below the spatial error.
    """

    kind: str = "ssprk3"
    cfl: float = 0.4
    dt_exponent: Optional[float] = None

    def __post_init__(self):
        if self.kind not in ("forward_euler", "ssprk3"):
            raise DomainError(f"unknown integrator {self.kind!r}")
        if self.cfl <= 0:
            raise DomainError("cfl must be positive")

    def time_step(self, h: float, max_speed: float, default_exponent: float = 1.0) -> float:
        q = self.dt_exponent if self.dt_exponent is not None else default_exponent
        return self.cfl * h ** q / (max_speed if max_speed > 0 else 1.0)


def _fe(S, P, w, h, dt):
    return w + dt * S(w, h, P)


def _ssprk3(S, P, w, h, dt):
    w1 = w + dt * S(w, h, P)
    w2 = 0.75 * w + 0.25 * (w1 + dt * S(w1, h, P))
    return w / 3 + 2 / 3 * (w2 + dt * S(w2, h, P))


_STEPPERS = {"forward_euler": _fe, "ssprk3": _ssprk3}


def step_fe(S: SpatialScheme, P: Problem, w: GridFunction, dt: float) -> GridFunction:
    """``w + dt * rhs(w)``."""
    if dt < 0:
        raise DomainError("dt must be non-negative")
    if dt == 0:
        return GridFunction(np.array(w.values), w.h)
    return GridFunction(_fe(S, P, np.asarray(w.values), w.h, dt), w.h)


def step_ssprk3(S: SpatialScheme, P: Problem, w: GridFunction, dt: float) -> GridFunction:
    """Three-stage Shu-Osher SSP Runge-Kutta step."""
    if dt < 0:
        raise DomainError("dt must be non-negative")
    if dt == 0:
        return GridFunction(np.array(w.values), w.h)
    return GridFunction(_ssprk3(S, P, np.asarray(w.values), w.h, dt), w.h)


@dataclass
class EvolveResult:
    final: GridFunction
    t: float
    dt: float
    times: np.ndarray
    max_norms: np.ndarray
    two_norms: np.ndarray
    blowup_step: Optional[int] = None
    message: str = ""

    @property
    def steps(self) -> int:
        return len(self.times) - 1

    @property
    def blew_up(self) -> bool:
        return self.blowup_step is not None

    def growth_factors(self) -> np.ndarray:
        """Per-step ratio of consecutive 2-norms."""
        return self.two_norms[1:] / self.two_norms[:-1]

    def series(self) -> list:
        """Rows ``(step, t, max_norm, two_norm)``."""
        return [(i, float(t), float(m), float(n))
                for i, (t, m, n) in enumerate(zip(self.times, self.max_norms, self.two_norms))]


def _norms(w, h):
    return float(np.max(np.abs(w))), float(np.sqrt(h * np.sum(np.abs(w) ** 2)))


def evolve(S: SpatialScheme, P: Problem, I: IntegratorSpec, N: int,
           initial: Optional[np.ndarray] = None, dt: Optional[float] = None) -> EvolveResult:
    """Integrate from t=0 to ``P.T`` on N nodes, recording norms per step.

    ``initial`` overrides ``P.initial`` sampled on the grid; ``dt`` overrides
    the step rule. The last step is shortened to land on ``T``. A
    non-finite state or a max-norm above 1e10 stops the run and is reported
    through ``blowup_step`` instead of raising.
    """
    if N < 2 * S.r + 2:
        raise DomainError(f"N={N} too small for a {2 * S.r + 1}-point scheme")
    h = PERIOD / N
    w = np.asarray(P.initial(grid(N))) if initial is None else np.array(initial)
    if dt is None:
        dt = I.time_step(h, float(np.max(np.abs(P.speed(w)))))
    step = _STEPPERS[I.kind]

    times, maxn, twon = [0.0], [], []
    m, n = _norms(w, h)
    maxn.append(m)
    twon.append(n)
    nsteps = 0 if P.T == 0 else math.ceil(P.T / dt - 1e-9)
    t = 0.0
    blowup, message = None, ""
    for k in range(1, nsteps + 1):
        dtk = min(dt, P.T - t) if k == nsteps else dt
        try:
            w = step(S, P, w, h, dtk)
        except BlowUpError as exc:
            blowup, message = k, str(exc)
            break
        t = P.T if k == nsteps else t + dtk
        m, n = _norms(w, h)
        times.append(t)
        maxn.append(m)
        twon.append(n)
        if not np.isfinite(m) or m > BLOWUP_THRESHOLD:
            blowup, message = k, f"max-norm {m:.3e} exceeds {BLOWUP_THRESHOLD:.0e}"
            break
    return EvolveResult(GridFunction(w, h), t, dt, np.array(times), np.array(maxn),
                        np.array(twon), blowup, message)


@dataclass(frozen=True)
class ConvergenceRow:
    N: int
    h: float
    error: float
    observed_order: Optional[float]


@dataclass
class ConvergenceStudy:
    rows: list = field(default_factory=list)
    dt_exponent: float = 1.0

    @property
    def finest_order(self) -> Optional[float]:
        return self.rows[-1].observed_order if self.rows else None

    def to_csv_rows(self) -> list:
        return [(r.N, r.h, r.error, "" if r.observed_order is None else r.observed_order)
                for r in self.rows]


def convergence_study(S: SpatialScheme, P: Problem, I: IntegratorSpec,
                      N_list: Sequence[int]) -> ConvergenceStudy:
    """Max-norm error at ``P.T`` for each N and orders between consecutive N."""
    if P.exact is None:
        raise DomainError("a convergence study needs the exact solution")
    q = I.dt_exponent if I.dt_exponent is not None else max(1.0, S.order / 3)
    spec = IntegratorSpec(I.kind, I.cfl, q)
    study = ConvergenceStudy(dt_exponent=q)
    prev = None
    for N in N_list:
        res = evolve(S, P, spec, N)
        if res.blew_up:
            err = math.inf
        else:
            err = float(np.max(np.abs(res.final.values - P.exact(grid(N), P.T))))
        h = PERIOD / N
        order = None
        if prev is not None and np.isfinite(err) and err > 0:
            order = math.log(prev[1] / err) / math.log(N / prev[0])
        study.rows.append(ConvergenceRow(N, h, err, order))
        prev = (N, err)
    return study
