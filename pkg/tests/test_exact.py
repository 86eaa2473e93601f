from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from semidiscrete import exact
from semidiscrete.exceptions import DomainError
from semidiscrete.order import moment_matrix

rationals = st.fractions(min_value=-10, max_value=10, max_denominator=10)


def cofactor_det(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = Fraction(0)
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        total += (-1) ** j * rows[0][j] * cofactor_det(minor)
    return total


def test_det_examples():
    assert exact.det_oracle(exact.RationalMatrix.identity(3)) == 1
    assert exact.det_oracle([[1, 2], [3, 4]]) == -2
    rng = np.random.default_rng(0)
    rows = rng.integers(-9, 10, size=(6, 6)).tolist()
    rows[4] = rows[1]
    assert exact.det_oracle(rows) == 0


def test_det_needs_pivoting():
    assert exact.det_oracle([[0, 1], [1, 0]]) == -1
    assert exact.det_oracle([[0, 0, 1], [0, 1, 0], [1, 0, 0]]) == -1


def test_det_domain():
    with pytest.raises(DomainError):
        exact.det_oracle([[1, 2, 3], [4, 5, 6]])
    with pytest.raises(DomainError):
        exact.det_oracle(exact.RationalMatrix.identity(13))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(rationals, min_size=n, max_size=n),
                                                    min_size=n, max_size=n)))
def test_det_matches_cofactor(rows):
    assert exact.det_oracle(rows) == cofactor_det(rows)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6).flatmap(lambda n: st.lists(st.lists(st.integers(-20, 20), min_size=n,
                                                             max_size=n), min_size=n, max_size=n)))
def test_det_matches_sympy(rows):
    assert exact.det_oracle(rows) == Fraction(int(sp.Matrix(rows).det()))


def test_power_vandermonde_examples():
    assert exact.det_power_vandermonde([1, 2]) == 2
    assert exact.det_oracle(exact.power_matrix([1, 2])) == 2
    assert exact.det_power_vandermonde([1, 2, 3]) == 12
    assert exact.det_oracle(exact.power_matrix([1, 2, 3])) == 12
    assert exact.det_power_vandermonde([Fraction(3, 2), 0, 5]) == 0


def test_ones_row_det_examples():
    assert exact.det_lemma2([1, 3]) == 8
    assert exact.det_lemma2([0, 1, 2]) == 4
    assert exact.det_oracle([[1, 1, 1], [0, 1, 4], [0, 1, 8]]) == 4
    assert exact.lemma2_matrix([0, 1, 2]).to_lists() == [[1, 1, 1], [0, 1, 4], [0, 1, 8]]
    for n in range(2, 9):
        assert exact.det_lemma2(list(range(n))) != 0
    with pytest.raises(DomainError):
        exact.det_lemma2([1])


@settings(max_examples=150, deadline=None)
@given(st.lists(rationals, min_size=1, max_size=8))
def test_power_vandermonde_matches_oracle(a):
    assert exact.det_power_vandermonde(a) == exact.det_oracle(exact.power_matrix(a))


@settings(max_examples=150, deadline=None)
@given(st.lists(rationals, min_size=2, max_size=8))
def test_ones_row_det_matches_oracle(a):
    assert exact.det_lemma2(a) == exact.det_oracle(exact.lemma2_matrix(a))


@settings(max_examples=60, deadline=None)
@given(st.lists(rationals, min_size=2, max_size=7), st.data())
def test_swap_negates_closed_forms(a, data):
    j = data.draw(st.integers(0, len(a) - 1))
    k = data.draw(st.integers(0, len(a) - 1).filter(lambda i: i != j))
    b = list(a)
    b[j], b[k] = b[k], b[j]
    assert exact.det_power_vandermonde(b) == -exact.det_power_vandermonde(a)
    assert exact.det_lemma2(b) == -exact.det_lemma2(a)


@settings(max_examples=60, deadline=None)
@given(st.lists(rationals.filter(lambda x: x != 0), min_size=1, max_size=8, unique=True))
def test_power_vandermonde_nonzero(a):
    assert exact.det_power_vandermonde(a) != 0


@settings(max_examples=60, deadline=None)
@given(st.lists(rationals.filter(lambda x: x != 0), min_size=1, max_size=7, unique=True))
def test_ones_row_det_nonzero(rest):
    a = [Fraction(0)] + rest
    assert exact.det_lemma2(a) != 0
    assert exact.det_oracle(exact.lemma2_matrix(a)) != 0


def test_solve_identity():
    b = [Fraction(1, 3), -2, 5]
    assert exact.solve_exact(exact.RationalMatrix.identity(3), b) == tuple(Fraction(x) for x in b)


def test_solve_central_difference():
    M = moment_matrix([-1, 0, 1], [0, 1, 2])
    assert exact.solve_exact(M, [0, 1, 0]) == (Fraction(-1, 2), Fraction(0), Fraction(1, 2))


def test_solve_inconsistent_certificate():
    cert = exact.solve_exact([[1], [1]], [0, 1])
    assert isinstance(cert, exact.RankCertificate)
    assert cert.kind == "inconsistent"
    assert (cert.rank, cert.augmented_rank, cert.unknowns) == (1, 2, 1)
    assert cert.to_dict()["kind"] == "inconsistent"


def test_solve_rank_deficient_certificate():
    cert = exact.solve_exact([[1, 1], [2, 2]], [1, 2])
    assert cert.kind == "rank_deficient"
    assert cert.consistent


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.tuples(
    st.lists(st.lists(rationals, min_size=n, max_size=n), min_size=n, max_size=n),
    st.lists(rationals, min_size=n, max_size=n))))
def test_solve_roundtrip(case):
    rows, b = case
    x = exact.solve_exact(rows, b)
    if exact.det_oracle(rows) == 0:
        assert isinstance(x, exact.RankCertificate)
    else:
        assert [sum(r * xi for r, xi in zip(row, x)) for row in rows] == [Fraction(v) for v in b]


def test_rank_and_matrix_helpers():
    M = exact.RationalMatrix.from_rows([[1, 2], [2, 4], [0, 1]])
    assert exact.rank(M) == 2
    assert M.transpose().to_lists() == [[1, 2, 0], [2, 4, 1]]
    assert M[1, 1] == 4
    with pytest.raises(DomainError):
        exact.RationalMatrix.from_rows([[1, 2], [3]])


def test_as_fraction():
    assert exact.as_fraction("-3/4") == Fraction(-3, 4)
    assert exact.as_fraction(0.5) == Fraction(1, 2)
