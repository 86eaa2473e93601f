"""Exact rational linear algebra.

Everything here works on :class:`fractions.Fraction` values so the
determinant identities and moment systems can be checked with equality
rather than tolerances.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence, Union

from .exceptions import DomainError

RationalLike = Union[int, Fraction, str]

MAX_DET_SIZE = 12


def as_fraction(x) -> Fraction:
    """Convert ints, Fractions, ``"p/q"`` strings or floats to a Fraction.

    Floats convert exactly (binary value), so ``0.1`` does not become 1/10.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


@dataclass(frozen=True)
class RationalMatrix:
    """Dense row-major matrix of Fractions."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DomainError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[RationalLike]]) -> "RationalMatrix":
        rows = [list(r) for r in rows]
        if not rows:
            raise DomainError("matrix needs at least one row")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise DomainError("ragged rows")
        flat = tuple(as_fraction(x) for r in rows for x in r)
        return cls(len(rows), ncols, flat)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def to_lists(self) -> list:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix.from_rows(
            [[self[i, j] for i in range(self.rows)] for j in range(self.cols)]
        )

    def permute_columns(self, order: Sequence[int]) -> "RationalMatrix":
        return RationalMatrix.from_rows([[r[k] for k in order] for r in self.to_lists()])

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols


def _as_matrix(M) -> RationalMatrix:
    return M if isinstance(M, RationalMatrix) else RationalMatrix.from_rows(M)


def det_oracle(M) -> Fraction:
    """Determinant by fraction-free (Bareiss) elimination.

    Rows are first scaled to integers by the lcm of their denominators, the
    integer determinant is computed with exact divisions, and the scaling is
    undone at the end.
    """
    M = _as_matrix(M)
    if not M.is_square:
        raise DomainError(f"determinant of a {M.rows}x{M.cols} matrix")
    n = M.rows
    if n > MAX_DET_SIZE:
        raise DomainError(f"matrix size {n} exceeds cap {MAX_DET_SIZE}")

    scale = 1
    a = []
    for row in M.to_lists():
        d = lcm(*(x.denominator for x in row))
        scale *= d
        a.append([int(x * d) for x in row])

    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = pivot
    return Fraction(sign * a[n - 1][n - 1], scale)


def vandermonde_product(a: Sequence[RationalLike]) -> Fraction:
    """prod_{j<k} (a_k - a_j)."""
    a = [as_fraction(x) for x in a]
    out = Fraction(1)
    for j in range(len(a)):
        for k in range(j + 1, len(a)):
            out *= a[k] - a[j]
    return out


def power_matrix(a: Sequence[RationalLike]) -> RationalMatrix:
    """Matrix with entry (i, j) = a_j ** i for i = 1..n."""
    a = [as_fraction(x) for x in a]
    n = len(a)
    return RationalMatrix.from_rows([[x ** i for x in a] for i in range(1, n + 1)])


def lemma2_matrix(a: Sequence[RationalLike]) -> RationalMatrix:
    """First row all ones; row i >= 2 holds a_j ** i (the power 1 row is absent)."""
    a = [as_fraction(x) for x in a]
    n = len(a)
    if n < 2:
        raise DomainError("needs at least two nodes")
    rows = [[Fraction(1)] * n] + [[x ** i for x in a] for i in range(2, n + 1)]
    return RationalMatrix.from_rows(rows)


def det_power_vandermonde(a: Sequence[RationalLike]) -> Fraction:
    """Closed-form determinant of :func:`power_matrix`.

    Equals the Vandermonde product times the product of all nodes.
    """
    a = [as_fraction(x) for x in a]
    if not a:
        raise DomainError("needs at least one node")
    out = vandermonde_product(a)
    for x in a:
        out *= x
    return out


def det_lemma2(a: Sequence[RationalLike]) -> Fraction:
    """Closed-form determinant of :func:`lemma2_matrix`.

    The Vandermonde product times the elementary symmetric polynomial of
    degree n-1 (sum over j of the product of all nodes except a_j).
    """
    a = [as_fraction(x) for x in a]
    if len(a) < 2:
        raise DomainError("needs at least two nodes")
    esym = Fraction(0)
    for j in range(len(a)):
        p = Fraction(1)
        for k, x in enumerate(a):
            if k != j:
                p *= x
        esym += p
    return vandermonde_product(a) * esym


@dataclass(frozen=True)
class RankCertificate:
    """Returned by :func:`solve_exact` when no unique solution exists."""

    rank: int
    augmented_rank: int
    unknowns: int

    @property
    def consistent(self) -> bool:
        return self.rank == self.augmented_rank

    @property
    def kind(self) -> str:
        return "rank_deficient" if self.consistent else "inconsistent"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "rank": self.rank,
            "augmented_rank": self.augmented_rank,
            "unknowns": self.unknowns,
        }


def _row_reduce(rows: list, ncols: int) -> tuple:
    """Gauss-Jordan elimination in place; returns (rows, pivot columns)."""
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        rows[r] = [x / p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(M) -> int:
    M = _as_matrix(M)
    _, pivots = _row_reduce(M.to_lists(), M.cols)
    return len(pivots)


def solve_exact(M, b: Iterable[RationalLike]):
    """Solve ``M x = b`` exactly.

    Returns the unique solution as a tuple of Fractions, or a
    :class:`RankCertificate` when the system is inconsistent or has free
    variables. Inconsistency is an expected outcome for some callers, so
    it is reported as data.
    """
    M = _as_matrix(M)
    b = [as_fraction(x) for x in b]
    if len(b) != M.rows:
        raise DomainError(f"rhs length {len(b)} does not match {M.rows} rows")
    aug = [row + [bi] for row, bi in zip(M.to_lists(), b)]
    reduced, pivots = _row_reduce(aug, M.cols + 1)
    aug_rank = len(pivots)
    coeff_rank = len([c for c in pivots if c < M.cols])
    if coeff_rank != aug_rank or coeff_rank < M.cols:
        return RankCertificate(coeff_rank, aug_rank, M.cols)
    x = [Fraction(0)] * M.cols
    for i, c in enumerate(pivots):
        x[c] = reduced[i][M.cols]
    return tuple(x)
