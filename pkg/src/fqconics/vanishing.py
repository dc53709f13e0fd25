"""Nonzero low-degree polynomials vanishing (to a given multiplicity) on a point set.

Each constraint f^(i)(s) = 0 is linear in the coefficients of f, so the
problem is a nullspace computation over F_q. Columns are the monomials of
degree <= d in graded-lex order; rows are (point, derivative index) pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .poly import DEGREE_BUDGET, MultiPoly, binom_mod, indices_of_weight, monomials

Point = tuple[int, ...]


class InfeasibleError(ValueError):
    """The dimension count does not guarantee a nonzero solution."""

    def __init__(self, message: str, rows: int | None = None, cols: int | None = None):
        super().__init__(message)
        self.rows = rows
        self.cols = cols


@dataclass(frozen=True)
class VanishingProblem:
    field: object
    n: int
    points: tuple[Point, ...]
    d: int
    m: int = 1

    @property
    def rows(self) -> int:
        return len(self.points) * math.comb(self.m + self.n - 1, self.n)

    @property
    def cols(self) -> int:
        return math.comb(self.d + self.n, self.n)

    @property
    def feasible(self) -> bool:
        return self.rows < self.cols

    def derivative_indices(self) -> list[tuple[int, ...]]:
        return [i for w in range(self.m) for i in indices_of_weight(self.n, w)]


def min_feasible_degree(size: int, n: int, m: int = 1) -> int:
    """Smallest d with size * C(m+n-1, n) < C(d+n, n)."""
    rows = size * math.comb(m + n - 1, n)
    d = 0
    while math.comb(d + n, n) <= rows:
        d += 1
    return d


def constraint_matrix(problem: VanishingProblem) -> np.ndarray:
    """Row (s, i), column e holds C(e, i) s^(e - i): the coefficient of c_e in f^(i)(s)."""
    F, n, d = problem.field, problem.n, problem.d
    p = F.p
    cols = monomials(n, d)
    idx = problem.derivative_indices()
    M = np.zeros((len(problem.points) * len(idx), len(cols)), dtype=np.int64)
    r = 0
    for s in problem.points:
        pows = []
        for x in s:
            row = [1]
            for _ in range(d):
                row.append(F.mul(row[-1], x))
            pows.append(row)
        for i in idx:
            out = M[r]
            for j, e in enumerate(cols):
                v = 1
                b = 1
                for t in range(n):
                    if e[t] < i[t]:
                        b = 0
                        break
                    b = b * binom_mod(e[t], i[t], p) % p
                    v = F.mul(v, pows[t][e[t] - i[t]])
                if b:
                    out[j] = F.mul(F.from_int(b), v)
            r += 1
    return M


def first_nullspace_vector(M: np.ndarray, F) -> np.ndarray | None:
    """Nullspace vector with the lowest-index free column set to 1, the other free columns 0.

    Gauss-Jordan elimination column by column, pivoting on the first
    nonzero entry; stops at the first column without a pivot. Returns None
    when every column has a pivot (trivial nullspace).
    """
    A = M.copy()
    rows, cols = A.shape
    pivots: list[tuple[int, int]] = []  # (row, col)
    r = 0
    for col in range(cols):
        nz = np.nonzero(A[r:, col])[0] if r < rows else np.array([], dtype=np.int64)
        if nz.size == 0:
            x = np.zeros(cols, dtype=np.int64)
            x[col] = 1
            for pr, pc in pivots:
                x[pc] = F.neg(int(A[pr, col]))
            return x
        pr = r + int(nz[0])
        if pr != r:
            A[[r, pr]] = A[[pr, r]]
        A[r] = F.vec_scale(A[r], F.inv(int(A[r, col])))
        others = np.nonzero(A[:, col])[0]
        for o in others:
            if o != r:
                A[o] = F.vec_sub(A[o], F.vec_scale(A[r], int(A[o, col])))
        pivots.append((r, col))
        r += 1
    return None


def _solve(problem: VanishingProblem) -> MultiPoly:
    if problem.d > DEGREE_BUDGET:
        raise InfeasibleError(f"degree {problem.d} exceeds the budget {DEGREE_BUDGET}")
    if not problem.feasible:
        raise InfeasibleError(
            f"|S| * C(m+n-1, n) = {problem.rows} is not < C(d+n, n) = {problem.cols}",
            problem.rows,
            problem.cols,
        )
    M = constraint_matrix(problem)
    x = first_nullspace_vector(M, problem.field)
    if x is None:  # pragma: no cover - rows < cols forces a free column
        raise AssertionError("no nullspace vector despite rows < cols")
    cols = monomials(problem.n, problem.d)
    return MultiPoly(problem.field, problem.n, {e: int(c) for e, c in zip(cols, x) if c})


def _check_points(points: Sequence[Sequence[int]], n: int | None) -> tuple[tuple[Point, ...], int]:
    pts = tuple(tuple(s) for s in points)
    if n is None:
        if not pts:
            raise ValueError("n is required for an empty point set")
        n = len(pts[0])
    if any(len(s) != n for s in pts):
        raise ValueError(f"all points must have {n} coordinates")
    return pts, n


def vanishing_polynomial(F, points: Sequence[Sequence[int]], d: int, n: int | None = None) -> MultiPoly:
    """Nonzero f with deg f <= d and f(s) = 0 for every s in points."""
    return vanishing_polynomial_with_multiplicity(F, points, d, 1, n)


def vanishing_polynomial_with_multiplicity(
    F, points: Sequence[Sequence[int]], d: int, m: int, n: int | None = None
) -> MultiPoly:
    """Nonzero f with deg f <= d and Mult(f, s) >= m for every s in points."""
    if m < 1:
        raise InfeasibleError("multiplicity m must be at least 1")
    pts, n = _check_points(points, n)
    problem = VanishingProblem(F, n, pts, d, m)
    f = _solve(problem)
    if f.is_zero() or f.degree > d:
        raise AssertionError("solver returned an invalid polynomial")
    for s in pts:
        ok = (f.evaluate(s) == 0) if m == 1 else (f.multiplicity_at(s) >= m)
        if not ok:
            raise AssertionError(f"post-check failed at {s}")
    return f
