"""
Exact linear algebra over Q and F_p on top of sympy's ``DomainMatrix``.

Matrices cross the module boundary as lists of rows of ``Fraction`` (or
int); ``DomainMatrix`` over ``QQ``/``GF(p)`` does the elimination.

- ``rref``, ``rank``, ``kernel``, ``left_kernel``: echelon data and null spaces
- ``solve_left``: X with X*A = B for full-row-rank A
- ``inverse``, ``matmul``: small dense helpers
- ``rank_mod_p``, ``left_kernel_mod_p``: the same over F_p
"""

import logging
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from sympy import isprime
from sympy.polys.domains import GF, QQ
from sympy.polys.matrices import DomainMatrix

from core.exceptions import (
    InconsistentSystemError,
    InputError,
    MalformedMatrixError,
    RankDeficientError,
)

logger = logging.getLogger(__name__)

Matrix = List[List[Fraction]]


def shape(rows: Sequence[Sequence]) -> Tuple[int, int]:
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    for row in rows:
        if len(row) != ncols:
            raise MalformedMatrixError("ragged matrix rows")
    return nrows, ncols


def to_domain(rows: Sequence[Sequence], ncols: Optional[int] = None, domain=QQ) -> DomainMatrix:
    nrows, width = shape(rows)
    if ncols is None:
        ncols = width
    if nrows and width != ncols:
        raise MalformedMatrixError(f"expected {ncols} columns, got {width}")
    if domain == QQ:
        data = [[QQ(Fraction(x).numerator, Fraction(x).denominator) for x in row] for row in rows]
    else:
        data = [[domain(int(x)) for x in row] for row in rows]
    return DomainMatrix(data, (nrows, ncols), domain)


def from_domain(dm: DomainMatrix) -> Matrix:
    """Rows of a ``QQ`` DomainMatrix as Fractions."""
    return [
        [Fraction(int(QQ.numer(x)), int(QQ.denom(x))) for x in row]
        for row in dm.to_list()
    ]


def transpose(rows: Sequence[Sequence], ncols: Optional[int] = None) -> Matrix:
    nrows, width = shape(rows)
    if ncols is None:
        ncols = width
    return [[rows[i][j] for i in range(nrows)] for j in range(ncols)]


def rref(rows: Sequence[Sequence], ncols: Optional[int] = None) -> Tuple[Matrix, Tuple[int, ...]]:
    """Reduced row echelon form over Q (zero rows dropped) and pivot columns."""
    nrows, width = shape(rows)
    if ncols is None:
        ncols = width
    if nrows == 0 or ncols == 0:
        return [], ()
    reduced, pivots = to_domain(rows, ncols).rref()
    return from_domain(reduced)[:len(pivots)], tuple(pivots)


def rank(rows: Sequence[Sequence], ncols: Optional[int] = None) -> int:
    return len(rref(rows, ncols)[1])


def kernel(rows: Sequence[Sequence], ncols: Optional[int] = None) -> Matrix:
    """
    Basis of the right null space {x : A x = 0}.

    The basis is returned in reduced row echelon form (leading coefficient
    1, pivot-sorted), so it depends only on the null space itself.
    """
    nrows, width = shape(rows)
    if ncols is None:
        ncols = width
    if ncols == 0:
        return []
    reduced, pivots = rref(rows, ncols)
    free = [j for j in range(ncols) if j not in set(pivots)]
    vectors = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -reduced[i][f]
        vectors.append(v)
    if not vectors:
        return []
    basis, _ = rref(vectors, ncols)
    return basis


def left_kernel(rows: Sequence[Sequence], ncols: Optional[int] = None) -> Matrix:
    """Basis of {y : y A = 0}, echelonized like ``kernel``."""
    nrows, width = shape(rows)
    if ncols is None:
        ncols = width
    if nrows == 0:
        return []
    return kernel(transpose(rows, ncols), nrows)


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    ar, ac = shape(a)
    br, bc = shape(b)
    if ac != br:
        raise MalformedMatrixError(f"cannot multiply {ar}x{ac} by {br}x{bc}")
    if not ar or not bc:
        return [[] for _ in range(ar)] if not bc else []
    if not ac:
        return [[Fraction(0)] * bc for _ in range(ar)]
    return from_domain(to_domain(a, ac).matmul(to_domain(b, bc)))


def inverse(rows: Sequence[Sequence]) -> Matrix:
    n, m = shape(rows)
    if n != m:
        raise MalformedMatrixError(f"cannot invert a {n}x{m} matrix")
    if n == 0:
        return []
    dm = to_domain(rows, n)
    if dm.rank() < n:
        raise RankDeficientError("matrix is singular")
    return from_domain(dm.inv())


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def solve_left(
    a: Sequence[Sequence],
    b: Sequence[Sequence],
    pivots: Optional[Sequence[int]] = None,
) -> Matrix:
    """
    Solve X*A = B exactly over Q.

    Args:
        a: r x n coefficient matrix of full row rank
        b: m x n target matrix
        pivots: r column indices with A[:, pivots] invertible, if known

    Returns:
        The unique m x r solution X

    Raises:
        RankDeficientError: A lacks full row rank
        InconsistentSystemError: some row of B is outside the row space of A
    """
    r, n = shape(a)
    m, bn = shape(b)
    if m and bn != n:
        raise MalformedMatrixError(f"target has {bn} columns, coefficient matrix has {n}")
    if r == 0:
        if any(x for row in b for x in row):
            raise InconsistentSystemError("nonzero target against an empty coefficient matrix")
        return [[] for _ in range(m)]
    if pivots is None:
        _, pivots = rref(a, n)
    pivots = list(pivots)
    if len(pivots) < r:
        raise RankDeficientError(f"coefficient matrix has rank {len(pivots)} < {r} rows")
    square = [[a[i][p] for p in pivots] for i in range(r)]
    target = [[row[p] for p in pivots] for row in b]
    x = matmul(target, inverse(square)) if m else []
    if m and matmul(x, a) != [[Fraction(v) for v in row] for row in b]:
        raise InconsistentSystemError("target rows are not in the row space")
    return x


# =============================================================================
# PRIME FIELDS
# =============================================================================

def _prime_field(p: int):
    if not isinstance(p, int) or p < 2 or not isprime(p):
        raise InputError(f"{p!r} is not a prime")
    return GF(p)


def rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    """Rank of an integer matrix over F_p."""
    field = _prime_field(p)
    nrows, ncols = shape(rows)
    if not nrows or not ncols:
        return 0
    return to_domain([[x % p for x in row] for row in rows], ncols, field).rank()


def left_kernel_mod_p(rows: Sequence[Sequence[int]], p: int) -> List[List[int]]:
    """Basis (entries in range(p)) of {c : c A = 0 mod p}, rows of an rref."""
    field = _prime_field(p)
    nrows, ncols = shape(rows)
    if not nrows:
        return []
    if not ncols:
        return [[int(i == j) for j in range(nrows)] for i in range(nrows)]
    at = to_domain([[rows[i][j] % p for i in range(nrows)] for j in range(ncols)], nrows, field)
    reduced, pivots = at.rref()
    data = [[int(field.to_sympy(x)) % p for x in row] for row in reduced.to_list()]
    free = [j for j in range(nrows) if j not in set(pivots)]
    basis = []
    for f in free:
        v = [0] * nrows
        v[f] = 1
        for i, piv in enumerate(pivots):
            v[piv] = (-data[i][f]) % p
        basis.append(v)
    return basis
