import itertools
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from semidiscrete import fdb, oracles
from semidiscrete.exceptions import CapabilityError, DomainError
from semidiscrete.suite import random_polynomial_case, random_smooth_case


def brute_partitions(s):
    out = []
    for m in itertools.product(range(s + 1), repeat=s):
        if sum(j * mj for j, mj in enumerate(m, start=1)) == s:
            out.append(m)
    return out


def test_partitions_small():
    assert fdb.enumerate_partitions(1) == [(1,)]
    assert set(fdb.enumerate_partitions(3)) == {(3, 0, 0), (1, 1, 0), (0, 0, 1)}
    assert len(fdb.enumerate_partitions(5)) == 7


@pytest.mark.parametrize("s", range(1, 8))
def test_partitions_match_brute_force(s):
    got = fdb.enumerate_partitions(s)
    assert len(got) == len(set(got))
    assert sorted(got) == sorted(brute_partitions(s))
    assert got == sorted(got, reverse=True)


def test_partition_count_p20():
    assert len(fdb.enumerate_partitions(20)) == 627


@pytest.mark.parametrize("s", [0, 21, -3])
def test_partitions_domain(s):
    with pytest.raises(DomainError):
        fdb.enumerate_partitions(s)


def test_multinomial_examples():
    assert fdb.multinomial((0, 0, 1)) == 6
    assert fdb.multinomial((1, 1, 0)) == 6
    assert fdb.multinomial((2, 1, 0, 0)) == 12


def test_multinomial_rejects_non_partition():
    with pytest.raises(DomainError):
        fdb.multinomial((1, -1))


def test_raw_coefficients_are_classical():
    # third derivative of a scalar composition: 1, 3, 1
    assert [fdb.raw_derivative_coefficient(m) for m in fdb.enumerate_partitions(3)] == [1, 3, 1]


def _scalar_curve(derivs):
    return fdb.CurveJet(lambda j, x: np.array([derivs[j]], dtype=float), 1)


def test_build_Dm_examples():
    u = _scalar_curve({0: 0.0, 1: 3.0, 2: 4.0})
    assert np.array_equal(fdb.build_Dm(u, 0.0, (2, 0)), [[3.0, 3.0]])
    assert np.array_equal(fdb.build_Dm(u, 0.0, (0, 1)), [[2.0]])
    curve = fdb.polynomial_curve([[0, 1], [0, 0, 1]])
    D = fdb.build_Dm(curve, 0, (1, 1, 0))
    assert D.tolist() == [[1, 0], [0, 1]]


@pytest.mark.parametrize("s", range(1, 7))
def test_build_Dm_shape(s):
    u = fdb.trig_curve([1.0, 0.5], [1.0, 2.0], [0.1, 0.2])
    for m in fdb.enumerate_partitions(s):
        D = fdb.build_Dm(u, 0.3, m)
        assert D.shape == (2, sum(m))
        assert sum(j * mj for j, mj in enumerate(m, start=1)) == s


def test_chain_rule_s1():
    f = fdb.ridge_function("sin", [0.7, -0.2])
    u = fdb.trig_curve([1.0, 1.3], [0.9, 1.1], [0.0, 0.5])
    x = 0.4
    grad = f.derivative(1, u(x)).entries
    assert fdb.fdb_derivative(f, u, x, 1) == pytest.approx(grad @ u.derivative(1, x), rel=1e-14)


def test_scalar_third_derivative_expansion():
    f = fdb.ridge_function("exp", [1.0])
    u = fdb.trig_curve([1.0], [1.0], [0.0])
    x = 0.3
    d1, d2, d3 = (float(u.derivative(j, x)[0]) for j in (1, 2, 3))
    fv = math.exp(math.sin(x))
    want = fv * d1 ** 3 + 3 * fv * d1 * d2 + fv * d3
    assert fdb.fdb_derivative(f, u, x, 3) == pytest.approx(want, rel=1e-13)


def _sympy_jet(expr, syms):
    cache = {}

    def jet(k, u):
        if k not in cache:
            n = len(syms)
            cache[k] = {idx: sp.lambdify(syms, sp.diff(expr, *[syms[i] for i in idx]))
                        for idx in itertools.product(range(n), repeat=k)}
        out = np.empty((len(syms),) * k)
        for idx, g in cache[k].items():
            out[idx] = g(*u)
        return out

    return jet


def test_exp_u1u2_fourth_derivative():
    u1, u2 = sp.symbols("u1 u2")
    expr = sp.exp(u1 * u2)
    f = fdb.JetFunction(lambda u: math.exp(u[0] * u[1]), 2, _sympy_jet(expr, (u1, u2)),
                        mp_func=lambda u: mpmath.exp(u[0] * u[1]))
    u = fdb.trig_curve([1.0, 1.0], [1.0, 1.0], [0.0, math.pi / 2])
    got = fdb.fdb_derivative(f, u, 0.3, 4)
    x = sp.Symbol("x")
    exact = float(sp.diff(sp.exp(sp.sin(x) * sp.cos(x)), x, 4).subs(x, 0.3))
    assert got == pytest.approx(exact, rel=1e-12)
    # central differences at step 1e-2, Richardson-extrapolated in 40-digit arithmetic
    g = lambda t: mpmath.exp(mpmath.sin(t) * mpmath.cos(t))
    ref = oracles.richardson_derivative(g, 0.3, 4, h=1e-2, dps=40)
    assert oracles.relative_error(got, float(ref)) < 1e-6
    assert oracles.relative_error(got, oracles.composite_derivative(f, u, 0.3, 4)) < 1e-10


def test_smooth_cases_against_oracle():
    rng = np.random.default_rng(7)
    for _ in range(20):
        f, u, x = random_smooth_case(rng)
        s = int(rng.integers(1, 6))
        ref = oracles.composite_derivative(f, u, x, s)
        assert oracles.relative_error(fdb.fdb_derivative(f, u, x, s), ref) < 1e-6


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 5))
def test_polynomial_cases_exact(seed, s):
    coeffs, comps, x = random_polynomial_case(np.random.default_rng(seed))
    n = len(comps)
    got = fdb.fdb_derivative(fdb.polynomial_function(coeffs, n), fdb.polynomial_curve(comps), x, s)
    assert isinstance(got, Fraction)
    assert got == oracles.composed_polynomial_derivative(coeffs, comps, x, s)


def test_column_permutation_symmetry():
    rng = np.random.default_rng(3)
    f = fdb.ridge_function("cos", [0.4, -0.9, 0.3], 0.2) + fdb.ridge_function("exp", [0.1, 0.5, -0.2])
    u = fdb.trig_curve([1, 0.8, 1.2], [1.0, 0.7, 1.4], [0.3, 1.0, 2.0])
    x, s = 0.2, 5
    total = 0.0
    for m in fdb.enumerate_partitions(s):
        D = fdb.build_Dm(u, x, m)
        D = D[:, rng.permutation(D.shape[1])]
        total += fdb.multinomial(m) * f.derivative(D.shape[1], u(x)).apply(D)
    assert total == pytest.approx(fdb.fdb_derivative(f, u, x, s), rel=1e-13)


def test_derivative_tensors_symmetric():
    f = fdb.ridge_function("sin", [0.3, 0.2, -0.5]) + fdb.ridge_function("exp", [1.0, 0.1, 0.0])
    for k in range(2, 5):
        assert f.derivative(k, np.array([0.1, 0.2, 0.3])).is_symmetric(rng=0, atol=1e-12)
    assert not fdb.Tensor(np.array([[0.0, 1.0], [2.0, 0.0]])).is_symmetric(rng=0, samples=200)


def test_tensor_apply_multilinear():
    rng = np.random.default_rng(0)
    T = fdb.Tensor(rng.normal(size=(3, 3, 3)))
    A, B = rng.normal(size=(3, 3)), rng.normal(size=(3, 3))
    C = A.copy()
    C[:, 1] = 2 * A[:, 1] - 3 * B[:, 1]
    AB = A.copy()
    AB[:, 1] = B[:, 1]
    assert T.apply(C) == pytest.approx(2 * T.apply(A) - 3 * T.apply(AB))
    with pytest.raises(DomainError):
        T.apply(np.ones((3, 2)))


def test_capability_error():
    f = fdb.JetFunction(lambda u: float(u[0]), 1, lambda k, u: np.zeros((1,) * k), max_order=2)
    with pytest.raises(CapabilityError):
        f.derivative(3, np.zeros(1))


def test_fd_fallback_jet_low_order():
    f = fdb.JetFunction(lambda u: math.sin(u[0]) * u[1], 2)
    u = fdb.trig_curve([1.0, 1.0], [1.0, 2.0], [0.0, 0.0])
    g = lambda t: math.sin(math.sin(t)) * math.sin(2 * t)
    assert fdb.fdb_derivative(f, u, 0.5, 2) == pytest.approx(
        oracles.richardson_derivative(g, 0.5, 2), rel=1e-5)


def test_recursion_examples_follow_multinomials():
    assert fdb.fdb_recursion_coefficients(1) == {(2, 0): 1, (0, 1): 2}
    assert fdb.fdb_recursion_coefficients(2) == {(3, 0, 0): 1, (1, 1, 0): 6, (0, 0, 1): 6}
    # dividing out the j! scalings recovers the classical 1, 3, 1
    raw = {m: fdb.raw_derivative_coefficient(m) for m in fdb.enumerate_partitions(3)}
    assert raw == {(3, 0, 0): 1, (1, 1, 0): 3, (0, 0, 1): 1}


@pytest.mark.parametrize("s", range(1, 12))
def test_recursion_equals_multinomial(s):
    rec = fdb.fdb_recursion_coefficients(s)
    assert list(rec) == fdb.enumerate_partitions(s + 1)
    assert rec == {m: fdb.multinomial(m) for m in fdb.enumerate_partitions(s + 1)}


@pytest.mark.parametrize("s", [0, 13])
def test_recursion_domain(s):
    with pytest.raises(DomainError):
        fdb.fdb_recursion_coefficients(s)


def test_product_rule_against_fd():
    # d/dx [f''(u(x)) applied to (u'(x), u''(x)/2)]
    f = fdb.ridge_function("exp", [0.5, -0.3]) + fdb.ridge_function("sin", [0.2, 0.9])
    u = fdb.trig_curve([1.0, 0.7], [1.2, 0.8], [0.1, 0.9])

    def G(x):
        A = np.column_stack([u.derivative(1, x), u.derivative(2, x) / 2])
        return f.derivative(2, u(x)).apply(A)

    x = 0.35
    A = np.column_stack([u.derivative(1, x), u.derivative(2, x) / 2])
    dA = np.column_stack([u.derivative(2, x), u.derivative(3, x) / 2])
    got = fdb.product_rule_derivative(f.derivative(2, u(x)), f.derivative(3, u(x)),
                                      u.derivative(1, x), A, dA)
    for step in (1e-3, 1e-4):
        fd = (G(x + step) - G(x)) / step
        assert abs(got - fd) < 20 * step
    assert got == pytest.approx(oracles.richardson_derivative(G, x, 1), rel=1e-8)
