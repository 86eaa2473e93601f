"""The acceptance battery: one function per criterion, all seedable.

Each check returns a :class:`CriterionResult`; failures and exceptions are
recorded, never raised, so a full report is always produced.
"""
from __future__ import annotations

import math
import time
import traceback
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import exact, fdb, oracles
from .order import barrier_demonstration, max_order_stencil, moments, order2r_consequences
from .pde import (
    IntegratorSpec,
    LinearStencilScheme,
    UpwindScheme,
    WenoScheme,
    advection,
    convergence_study,
    evolve,
    grid,
    make_upwind_stencil,
    step_fe,
    GridFunction,
)
from .stability import certify_fe_instability, linearize, max_amplification, max_stable_cfl, symbol

R_RANGE = range(1, 6)


@dataclass
class CriterionResult:
    id: int
    name: str
    passed: bool
    value: dict
    tolerance: str
    runtime: float = 0.0
    error: str = ""

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "status": "pass" if self.passed else "fail",
            "value": self.value,
            "tolerance": self.tolerance,
            "runtime_s": round(self.runtime, 3),
            "error": self.error,
        }

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.id}. {self.name}: {self.tolerance}"


@dataclass
class SuiteReport:
    seed: int
    results: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self, include_timing: bool = False) -> dict:
        rows = []
        for r in self.results:
            d = r.to_dict()
            if not include_timing:
                d.pop("runtime_s")
            rows.append(d)
        return {"seed": self.seed, "passed": self.passed, "criteria": rows}

    def table(self) -> str:
        width = max(len(r.name) for r in self.results)
        lines = [f"{'id':>2}  {'criterion':<{width}}  status  tolerance"]
        for r in self.results:
            lines.append(f"{r.id:>2}  {r.name:<{width}}  {'pass' if r.passed else 'FAIL':<6}  {r.tolerance}")
        lines.append(f"overall: {'pass' if self.passed else 'FAIL'}")
        return "\n".join(lines)


# -- criteria --------------------------------------------------------------


def check_barrier(seed: int = 42) -> CriterionResult:
    tol = "conclusion inconsistent_with_advection; M_k = delta_k1 for k <= 2r, M_2r+1 != 0 (exact); < 1 s"
    t0 = time.perf_counter()
    rows = {}
    ok = True
    for r in R_RANGE:
        cert = barrier_demonstration(r)
        c = max_order_stencil(r)
        ms = moments(c, 2 * r + 1)
        exact_ok = all(ms[k] == (1 if k == 1 else 0) for k in range(2 * r + 1))
        sharp = ms[2 * r + 1] != 0
        dets = cert.det_homogeneous == cert.det_closed_form == \
            cert.zero_first_sign * cert.det_closed_form_zero_first != 0
        rows[r] = {"conclusion": cert.conclusion, "moments_exact": exact_ok,
                   "M_2r+1": str(ms[2 * r + 1]), "det": str(cert.det_homogeneous),
                   "det_closed_form_agrees": dets}
        ok &= cert.conclusion == "inconsistent_with_advection" and exact_ok and sharp and dets
    runtime = time.perf_counter() - t0
    ok &= runtime < 1.0
    return CriterionResult(1, "order barrier p <= 2r is sharp", ok, rows, tol, runtime)


def check_order2r_consequences(seed: int = 42) -> CriterionResult:
    tol = "c_{-l} = -c_l and c_0 = 0 exactly"
    rows = {r: order2r_consequences(max_order_stencil(r)) for r in R_RANGE}
    ok = all(v["antisymmetric"] and v["c0_zero"] for v in rows.values())
    return CriterionResult(2, "order-2r stencils are antisymmetric with c_0 = 0", ok, rows, tol)


def instability_run(r: int, cfl: float, N: int = 128, steps: int = 100, seed: int = 42) -> dict:
    """Forward Euler on the order-2r stencil; measured vs predicted growth.

    Initial data is the most amplified resolved mode plus 1% seeded noise,
    scaled so the state stays O(1) after ``steps`` steps (the problem is
    linear, so only ratios matter).
    """
    L = linearize(max_order_stencil(r))
    rep = max_amplification(L, cfl)
    x = grid(N)
    ks = np.arange(N // 2 + 1)
    k_star = int(ks[np.argmax(np.abs(symbol(L, cfl, 2 * np.pi * ks / N)))])
    rng = np.random.default_rng(seed)
    w0 = np.cos(k_star * x) + 0.01 * rng.standard_normal(N)
    w0 *= rep.max_modulus ** (-steps)
    h = 2 * np.pi / N
    dt = cfl * h
    P = advection(T=steps * dt)
    res = evolve(LinearStencilScheme(max_order_stencil(r)), P, IntegratorSpec("forward_euler", cfl),
                 N, initial=w0, dt=dt)
    g = res.growth_factors()
    measured = float(g[-1]) if len(g) else float("nan")
    predicted = rep.max_modulus
    rel = abs((measured - 1) - (predicted - 1)) / (predicted - 1)
    return {
        "steps": res.steps,
        "blew_up": res.blew_up,
        "mode": k_star,
        "measured_growth": measured,
        "predicted_growth": predicted,
        "excess_rel_error": rel,
        "monotone": bool(np.all(g > 1)),
    }


def check_fe_instability(seed: int = 42) -> CriterionResult:
    tol = "witness found for r=1..5; N=128 growth excess within 5% of symbol after 100 steps"
    rows = {}
    ok = True
    for r in R_RANGE:
        w = certify_fe_instability(linearize(max_order_stencil(r)))
        row = {"certified": w.unstable, "witness_theta": w.theta, "sine_sum": w.sine_sum}
        ok &= w.unstable
        for cfl in (0.1, 0.5, 1.0):
            run = instability_run(r, cfl, seed=seed)
            row[f"cfl={cfl}"] = run
            ok &= (run["steps"] == 100 and not run["blew_up"] and run["monotone"]
                   and run["excess_rel_error"] <= 0.05)
        rows[r] = row
    return CriterionResult(3, "forward Euler unstable for every dt/h at order 2r", ok, rows, tol)


def _random_rational(rng, lo=-10, hi=10, max_den=10) -> Fraction:
    q = int(rng.integers(1, max_den + 1))
    return Fraction(int(rng.integers(lo * q, hi * q + 1)), q)


def _distinct_rationals(rng, n, exclude=()) -> list:
    out, seen = [], set(exclude)
    while len(out) < n:
        v = _random_rational(rng)
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


def check_lemmas(seed: int = 42, trials: int = 500, n_max: int = 8) -> CriterionResult:
    tol = f"closed forms == Bareiss determinant exactly on {trials} inputs each (n <= {n_max}); nonzero criteria; < 5 s"
    t0 = time.perf_counter()
    value = lemma_trials(seed, trials, n_max)
    runtime = time.perf_counter() - t0
    ok = value["lemma1_ok"] and value["lemma2_ok"] and runtime < 5.0
    return CriterionResult(4, "determinant closed forms", ok, value, tol, runtime)


def lemma_trials(seed: int, trials: int, n_max: int) -> dict:
    rng = np.random.default_rng(seed)
    l1_mismatch = l2_mismatch = l1_zero = l2_zero = 0
    for _ in range(trials):
        n = int(rng.integers(1, n_max + 1))
        a = [_random_rational(rng) for _ in range(n)]
        if exact.det_power_vandermonde(a) != exact.det_oracle(exact.power_matrix(a)):
            l1_mismatch += 1
        qualifying = _distinct_rationals(rng, n, exclude=(Fraction(0),))
        if exact.det_power_vandermonde(qualifying) == 0:
            l1_zero += 1

        n2 = int(rng.integers(2, n_max + 1))
        b = [_random_rational(rng) for _ in range(n2)]
        if exact.det_lemma2(b) != exact.det_oracle(exact.lemma2_matrix(b)):
            l2_mismatch += 1
        qualifying2 = [Fraction(0)] + _distinct_rationals(rng, n2 - 1, exclude=(Fraction(0),))
        if exact.det_lemma2(qualifying2) == 0 or exact.det_oracle(exact.lemma2_matrix(qualifying2)) == 0:
            l2_zero += 1
    return {
        "trials": trials,
        "lemma1_ok": l1_mismatch == 0 and l1_zero == 0,
        "lemma2_ok": l2_mismatch == 0 and l2_zero == 0,
        "lemma1_mismatches": l1_mismatch,
        "lemma2_mismatches": l2_mismatch,
        "lemma1_zero_on_qualifying": l1_zero,
        "lemma2_zero_on_qualifying": l2_zero,
    }


def random_smooth_case(rng, n_max: int = 3):
    n = int(rng.integers(1, n_max + 1))
    kinds = ("exp", "sin", "cos")
    f = fdb.ridge_function(kinds[rng.integers(3)], rng.uniform(-1, 1, n), rng.uniform(-1, 1),
                           rng.uniform(0.5, 2))
    f = f + fdb.ridge_function(kinds[rng.integers(3)], rng.uniform(-1, 1, n), rng.uniform(-1, 1))
    u = fdb.trig_curve(rng.uniform(0.5, 1.5, n), rng.uniform(0.5, 1.5, n), rng.uniform(0, 2 * np.pi, n))
    return f, u, float(rng.uniform(-1, 1))


def random_polynomial_case(rng, n_max: int = 3, degree: int = 4, curve_degree: int = 3):
    n = int(rng.integers(1, n_max + 1))
    coeffs = {}
    for _ in range(int(rng.integers(2, 7))):
        e = [0] * n
        for _ in range(int(rng.integers(0, degree + 1))):
            e[int(rng.integers(n))] += 1
        coeffs[tuple(e)] = coeffs.get(tuple(e), 0) + _random_rational(rng, -5, 5, 6)
    comps = [[_random_rational(rng, -3, 3, 5) for _ in range(curve_degree + 1)] for _ in range(n)]
    return coeffs, comps, _random_rational(rng, -2, 2, 7)


def fdb_trials(seed: int, trials: int, s_max: int = 5, poly_trials: int = 20) -> dict:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        f, u, x = random_smooth_case(rng)
        s = int(rng.integers(1, s_max + 1))
        err = oracles.relative_error(fdb.fdb_derivative(f, u, x, s),
                                     oracles.composite_derivative(f, u, x, s))
        worst = max(worst, err)
    poly_exact = 0
    for _ in range(poly_trials):
        coeffs, comps, x = random_polynomial_case(rng)
        s = int(rng.integers(1, s_max + 1))
        n = len(comps)
        got = fdb.fdb_derivative(fdb.polynomial_function(coeffs, n), fdb.polynomial_curve(comps), x, s)
        want = oracles.composed_polynomial_derivative(coeffs, comps, x, s)
        poly_exact += int(isinstance(got, Fraction) and got == want)
    return {"trials": trials, "max_rel_error": worst, "polynomial_trials": poly_trials,
            "polynomial_exact": poly_exact}


def check_fdb(seed: int = 42) -> CriterionResult:
    tol = "rel. error < 1e-6 vs Richardson oracle on 50 cases (n <= 3, s <= 5); exact on polynomials"
    v = fdb_trials(seed, 50)
    ok = v["max_rel_error"] < 1e-6 and v["polynomial_exact"] == v["polynomial_trials"]
    return CriterionResult(5, "Faa di Bruno formula", ok, v, tol)


def recursion_matches(s_max: int = 8) -> dict:
    out = {}
    for s in range(1, s_max + 1):
        rec = fdb.fdb_recursion_coefficients(s)
        expected = {m: fdb.multinomial(m) for m in fdb.enumerate_partitions(s + 1)}
        out[s] = rec == expected
    return out


def check_recursion(seed: int = 42) -> CriterionResult:
    v = recursion_matches(8)
    return CriterionResult(6, "coefficient recursion gives multinomials", all(v.values()), v,
                           "exact integer equality for s <= 8")


def check_convergence(seed: int = 42) -> CriterionResult:
    tol = "upwind r=2: 3.0 +/- 0.2; WENO r=3: 5.0 +/- 0.3 (finest pair, N=40..320); each < 60 s"
    P = advection(T=1.0)
    I = IntegratorSpec("ssprk3", 0.4)
    N_list = [40, 80, 160, 320]
    rows, ok = {}, True
    for label, S, target, band in (("upwind_r2", UpwindScheme(2), 3.0, 0.2),
                                   ("weno_r3", WenoScheme(3), 5.0, 0.3)):
        t0 = time.perf_counter()
        study = convergence_study(S, P, I, N_list)
        runtime = time.perf_counter() - t0
        p = study.finest_order
        rows[label] = {"errors": [r.error for r in study.rows],
                       "orders": [r.observed_order for r in study.rows],
                       "dt_exponent": study.dt_exponent, "finest_order": p}
        ok &= p is not None and abs(p - target) <= band and runtime < 60
    return CriterionResult(7, "order 2r-1 attained by stable schemes", ok, rows, tol)


def check_cfl(seed: int = 42, N: int = 128) -> CriterionResult:
    tol = "upwind CFL = 1 +/- 1e-5; FE at cfl 0.9 max-norm growth <= 1e-8 over 10/h steps"
    L = linearize(make_upwind_stencil(1, 1))
    cfl = max_stable_cfl(L)
    h = 2 * np.pi / N
    steps = math.ceil(10 / h)
    dt = 0.9 * h
    res = evolve(UpwindScheme(1), advection(T=steps * dt), IntegratorSpec("forward_euler", 0.9), N, dt=dt)
    growth = float(np.max(res.max_norms) - res.max_norms[0])
    ok = abs(cfl - 1.0) <= 1e-5 and growth <= 1e-8 and res.steps == steps and not res.blew_up
    return CriterionResult(8, "stable CFL of first-order upwind", ok,
                           {"max_stable_cfl": cfl, "steps": res.steps, "max_norm_growth": growth}, tol)


def random_consistent_stencil(rng, r_max: int = 4) -> np.ndarray:
    r = int(rng.integers(1, r_max + 1))
    c = rng.uniform(-1, 1, 2 * r + 1)
    c[r] -= c.sum()
    return c


def fourier_trials(seed: int, trials: int = 20, N: int = 64) -> dict:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        c = random_consistent_stencil(rng)
        L = linearize(c, consistency_tol=1e-12)
        lam = float(rng.uniform(0.05, 2.0))
        k = int(rng.integers(0, N))
        theta = 2 * np.pi * k / N
        w0 = np.exp(1j * k * grid(N))
        h = 2 * np.pi / N
        S = LinearStencilScheme.from_coefficients(c)
        w1 = step_fe(S, advection(), GridFunction(w0, h), lam * h).values
        worst = max(worst, float(np.max(np.abs(w1 / w0 - symbol(L, lam, theta)))))
    return {"trials": trials, "max_abs_error": worst}


def check_fourier(seed: int = 42) -> CriterionResult:
    v = fourier_trials(seed)
    return CriterionResult(9, "single-mode amplification equals the symbol", v["max_abs_error"] <= 1e-10,
                           v, "|step_fe factor - symbol| <= 1e-10 on 20 random (stencil, lambda, theta)")


CRITERIA: list = [
    check_barrier,
    check_order2r_consequences,
    check_fe_instability,
    check_lemmas,
    check_fdb,
    check_recursion,
    check_convergence,
    check_cfl,
    check_fourier,
]


def run_criterion(check: Callable, seed: int) -> CriterionResult:
    t0 = time.perf_counter()
    try:
        result = check(seed)
    except Exception as exc:  # a crash is a failed criterion, not an aborted suite
        idx = CRITERIA.index(check) + 1 if check in CRITERIA else 0
        result = CriterionResult(idx, check.__name__, False, {}, "", error=traceback.format_exception_only(
            type(exc), exc)[-1].strip())
    if not result.runtime:
        result.runtime = time.perf_counter() - t0
    return result


def run_suite(seed: int = 42) -> SuiteReport:
    report = SuiteReport(seed)
    for check in CRITERIA:
        report.results.append(run_criterion(check, seed))
    return report
