"""
Hermite and Smith normal forms of integer matrices, with transforms.

Conventions (row style):
- HNF: H = U*A is upper triangular with its zero rows at the bottom,
  pivots are positive and move strictly right going down, and every entry
  above a pivot lies in [0, pivot).
- SNF: U*A*V is diagonal with positive b_1 | b_2 | ... ; only the nonzero
  invariant factors are returned.
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

try:
    from sympy.core.intfunc import igcdex
except ImportError:  # sympy < 1.13
    from sympy.core.numbers import igcdex
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix

from core.exceptions import MalformedMatrixError
from zlinalg.rational import shape

logger = logging.getLogger(__name__)

IntMatrix = List[List[int]]


@dataclass(frozen=True)
class HNFResult:
    H: IntMatrix
    U: IntMatrix
    det_sign: int
    pivots: Tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.pivots)


@dataclass(frozen=True)
class SNFResult:
    diag: Tuple[int, ...]
    U: IntMatrix
    V: IntMatrix


def int_identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _copy(rows: Sequence[Sequence[int]]) -> IntMatrix:
    return [[int(x) for x in row] for row in rows]


def int_matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    ar, ac = shape(a)
    br, bc = shape(b)
    if ac != br:
        raise MalformedMatrixError(f"cannot multiply {ar}x{ac} by {br}x{bc}")
    if not ar or not bc:
        return [[] for _ in range(ar)] if not bc else []
    if not ac:
        return [[0] * bc for _ in range(ar)]
    da = DomainMatrix([[ZZ(int(x)) for x in row] for row in a], (ar, ac), ZZ)
    db = DomainMatrix([[ZZ(int(x)) for x in row] for row in b], (br, bc), ZZ)
    return [[int(x) for x in row] for row in da.matmul(db).to_list()]


def int_det(rows: Sequence[Sequence[int]]) -> int:
    n, m = shape(rows)
    if n != m:
        raise MalformedMatrixError(f"determinant of a {n}x{m} matrix")
    if n == 0:
        return 1
    return int(DomainMatrix([[ZZ(int(x)) for x in row] for row in rows], (n, n), ZZ).det())


def _combine_rows(M: IntMatrix, r: int, i: int, x: int, y: int, u: int, v: int) -> None:
    """(row_r, row_i) <- (x row_r + y row_i, u row_r + v row_i)."""
    top, bottom = M[r], M[i]
    M[r] = [x * s + y * t for s, t in zip(top, bottom)]
    M[i] = [u * s + v * t for s, t in zip(top, bottom)]


def hnf(rows: Sequence[Sequence[int]]) -> HNFResult:
    """
    Row Hermite normal form H = U*A.

    Args:
        rows: Integer matrix A

    Returns:
        HNFResult with H, the unimodular U, det(U) and the pivot columns.
        When H has a zero row, det(U) is normalized to +1 by negating the
        corresponding row of U.
    """
    m, n = shape(rows)
    A = _copy(rows)
    U = int_identity(m)
    sign = 1
    pivots = []
    r = 0
    for j in range(n):
        if r == m:
            break
        nonzero = [i for i in range(r, m) if A[i][j]]
        if not nonzero:
            continue
        p = nonzero[0]
        if p != r:
            A[r], A[p] = A[p], A[r]
            U[r], U[p] = U[p], U[r]
            sign = -sign
        for i in range(r + 1, m):
            if A[i][j]:
                a, b = A[r][j], A[i][j]
                x, y, g = igcdex(a, b)
                x, y, g = int(x), int(y), int(g)
                _combine_rows(A, r, i, x, y, -b // g, a // g)
                _combine_rows(U, r, i, x, y, -b // g, a // g)
        if A[r][j] < 0:
            A[r] = [-t for t in A[r]]
            U[r] = [-t for t in U[r]]
            sign = -sign
        pivot = A[r][j]
        for i in range(r):
            q = A[i][j] // pivot
            if q:
                A[i] = [s - q * t for s, t in zip(A[i], A[r])]
                U[i] = [s - q * t for s, t in zip(U[i], U[r])]
        pivots.append(j)
        r += 1
    if sign < 0 and r < m:
        U[m - 1] = [-t for t in U[m - 1]]
        sign = 1
    return HNFResult(A, U, sign, tuple(pivots))


def is_hnf(rows: Sequence[Sequence[int]]) -> bool:
    """Check the three row-HNF conditions."""
    last = -1
    seen_zero = False
    for i, row in enumerate(rows):
        lead = next((j for j, x in enumerate(row) if x), None)
        if lead is None:
            seen_zero = True
            continue
        if seen_zero or lead <= last or row[lead] <= 0:
            return False
        for k in range(i):
            if not 0 <= rows[k][lead] < row[lead]:
                return False
        last = lead
    return True


def pivot_product(rows: Sequence[Sequence[int]]) -> int:
    """
    Product of the pivots of a matrix in HNF.

    Raises:
        MalformedMatrixError: a zero row precedes a nonzero row
    """
    alpha = 1
    seen_zero = False
    for row in rows:
        lead = next((x for x in row if x), 0)
        if not lead:
            seen_zero = True
            continue
        if seen_zero:
            raise MalformedMatrixError("zero row encountered before the last nonzero row")
        alpha *= lead
    return alpha


def snf(rows: Sequence[Sequence[int]]) -> SNFResult:
    """
    Smith normal form with transforms: U*A*V = diag(b_1, ..., b_r, 0, ...).

    Pivoting moves the smallest nonzero entry to the corner, clears its row
    and column by Euclidean steps, and folds in any entry the corner does
    not divide.
    """
    m, n = shape(rows)
    A = _copy(rows)
    U = int_identity(m)
    V = int_identity(n)

    def swap_rows(i, k):
        A[i], A[k] = A[k], A[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for M in (A, V):
            for row in M:
                row[j], row[k] = row[k], row[j]

    t = 0
    while t < min(m, n):
        entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not entries:
            break
        _, i0, j0 = min(entries)
        if i0 != t:
            swap_rows(t, i0)
        if j0 != t:
            swap_cols(t, j0)
        while True:
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    A[i] = [s - q * u for s, u in zip(A[i], A[t])]
                    U[i] = [s - q * u for s, u in zip(U[i], U[t])]
                    clean = clean and not A[i][t]
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    for M in (A, V):
                        for row in M:
                            row[j] -= q * row[t]
                    clean = clean and not A[t][j]
            if not clean:
                edge = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                edge += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, i0, j0 = min(edge)
                if i0 != t:
                    swap_rows(t, i0)
                if j0 != t:
                    swap_cols(t, j0)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % A[t][t]),
                None,
            )
            if bad is None:
                break
            A[t] = [s + u for s, u in zip(A[t], A[bad])]
            U[t] = [s + u for s, u in zip(U[t], U[bad])]
        if A[t][t] < 0:
            A[t] = [-s for s in A[t]]
            U[t] = [-s for s in U[t]]
        t += 1
    diag = tuple(A[i][i] for i in range(t))
    return SNFResult(diag, U, V)


def invariant_factors(rows: Sequence[Sequence[int]]) -> Tuple[int, ...]:
    return snf(rows).diag
