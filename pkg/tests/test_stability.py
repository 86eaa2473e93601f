import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from semidiscrete.exceptions import DomainError
from semidiscrete.order import max_order_stencil
from semidiscrete.pde.schemes import make_upwind_stencil
from semidiscrete.stability import (
    certify_fe_instability,
    is_stable,
    linearize,
    max_amplification,
    max_stable_cfl,
    symbol,
)
from semidiscrete.suite import random_consistent_stencil

CENTRAL = linearize(max_order_stencil(1))
UPWIND = linearize([0, -1, 1])


def test_linearize_examples():
    assert CENTRAL.antisymmetric
    assert CENTRAL.normal_form.tolist() == [0.5]
    assert not UPWIND.antisymmetric
    assert UPWIND.normal_form is None
    with pytest.raises(DomainError):
        linearize([1, 1, 1])
    with pytest.raises(DomainError):
        linearize([1, -1])


def test_symbol_examples():
    assert symbol(CENTRAL, 1.0, math.pi / 2) == pytest.approx(1 + 1j, abs=1e-15)
    assert abs(symbol(CENTRAL, 1.0, math.pi / 2)) == pytest.approx(math.sqrt(2))
    assert symbol(UPWIND, 1.0, math.pi) == pytest.approx(-1, abs=1e-15)
    with pytest.raises(DomainError):
        symbol(CENTRAL, 0.0, 1.0)


def test_symbol_vectorised():
    theta = np.linspace(0, 2 * np.pi, 9)
    z = symbol(UPWIND, 0.5, theta)
    assert z.shape == theta.shape
    assert z == pytest.approx(1 + 0.5 * (np.exp(1j * theta) - 1))


stencils = st.integers(0, 10_000).map(lambda s: random_consistent_stencil(np.random.default_rng(s)))


@settings(max_examples=50, deadline=None)
@given(stencils, st.floats(0.01, 5.0))
def test_symbol_at_zero_is_one(c, lam):
    assert abs(symbol(linearize(c), lam, 0.0) - 1) <= 1e-14


@settings(max_examples=50, deadline=None)
@given(stencils, st.floats(0.01, 5.0), st.floats(-10, 10))
def test_conjugate_symmetry(c, lam, theta):
    L = linearize(c)
    assert symbol(L, lam, theta) == pytest.approx(np.conj(symbol(L, lam, -theta)), abs=1e-13)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 5), st.floats(0.01, 10.0), st.floats(-10, 10))
def test_antisymmetric_real_part_is_one(r, lam, theta):
    assert symbol(linearize(max_order_stencil(r)), lam, theta).real == pytest.approx(1, abs=1e-14)


def test_max_amplification_examples():
    rep = max_amplification(CENTRAL, 0.5)
    assert rep.max_modulus == pytest.approx(math.sqrt(1.25), rel=1e-12)
    assert math.sin(rep.argmax_theta) == pytest.approx(1, abs=1e-10) or \
        math.sin(rep.argmax_theta) == pytest.approx(-1, abs=1e-10)
    assert rep.unstable_for_all_lambda
    assert max_amplification(UPWIND, 1.0).max_modulus == pytest.approx(1, abs=1e-12)
    rep = max_amplification(UPWIND, 1.2)
    assert rep.max_modulus > 1
    assert rep.max_modulus == pytest.approx(1.4, abs=1e-12)
    assert set(rep.to_dict()) == {"lambda", "max_modulus", "argmax_theta", "unstable_for_all_lambda"}


@pytest.mark.parametrize("r", range(1, 4))
def test_antisymmetric_modulus_increasing_in_lambda(r):
    L = linearize(max_order_stencil(r))
    mods = [max_amplification(L, lam).max_modulus for lam in np.geomspace(0.01, 10, 25)]
    assert all(b > a for a, b in zip(mods, mods[1:]))


def test_certify_central():
    w = certify_fe_instability(CENTRAL)
    assert w.unstable
    assert w.theta == pytest.approx(math.pi / 2, abs=1e-6) or w.theta == pytest.approx(3 * math.pi / 2, abs=1e-6)
    assert w.modulus(1.0) == pytest.approx(math.sqrt(2), rel=1e-12)


def test_certify_zero_and_nonantisymmetric():
    w = certify_fe_instability(linearize([0, 0, 0]))
    assert not w.unstable and w.theta is None
    with pytest.raises(DomainError):
        certify_fe_instability(UPWIND)


@pytest.mark.parametrize("r", range(1, 6))
def test_certify_max_order(r):
    L = linearize(max_order_stencil(r))
    w = certify_fe_instability(L)
    assert w.unstable and w.sine_sum != 0
    for lam in (1e-3, 0.1, 1.0, 10.0):
        assert abs(symbol(L, lam, w.theta)) > 1
        assert not is_stable(L, lam)


def test_max_stable_cfl_examples():
    assert max_stable_cfl(UPWIND) == pytest.approx(1.0, abs=1e-6)
    assert max_stable_cfl(CENTRAL) == 0.0
    assert max_stable_cfl(linearize([0, 0, 0])) == 10.0


def test_max_stable_cfl_third_order_upwind_regression():
    # FE with the 3rd-order biased stencil is unstable for every lambda; the
    # excess ~0.75 lam^3 drops under the 1e-12 tolerance near lam = 1.1e-4
    value = max_stable_cfl(linearize(make_upwind_stencil(2)))
    assert 0 < value < 1
    assert value == pytest.approx(1.0948e-4, rel=1e-3)
