"""
Matrices over Q(zeta_n) and linear solves by restriction of scalars.

An equation over Q(zeta_n) splits into phi(n) rational equations: write
x in the power basis and multiplication by a as the phi(n) x phi(n)
rational matrix ``mult_matrix(a)``. ``solve_left_cyc`` assembles the
split system and hands it to the rational ``solve_left``.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple, Union

from core.exceptions import CyclotomicError, MalformedMatrixError
from cyclo.numbers import CycNum, euler_phi, lcm
from zlinalg.rational import Matrix, solve_left

logger = logging.getLogger(__name__)

Entry = Union[CycNum, int, Fraction]


def mult_matrix(a: CycNum) -> Matrix:
    """Row t holds the coordinates of zeta^t * a, so coords(x*a) = coords(x) * M."""
    n = a.conductor
    return [list((CycNum.zeta(n, t) * a).coeffs) for t in range(euler_phi(n))]


@dataclass(frozen=True)
class CycMatrix:
    """
    A dense matrix with entries in Q(zeta_n), all stored at one conductor.
    """

    conductor: int
    rows: Tuple[Tuple[CycNum, ...], ...]

    def __post_init__(self):
        n = self.conductor
        width = len(self.rows[0]) if self.rows else 0
        rows = []
        for row in self.rows:
            if len(row) != width:
                raise MalformedMatrixError("ragged matrix rows")
            rows.append(tuple(CycNum.coerce(x, n) for x in row))
        object.__setattr__(self, 'rows', tuple(rows))

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Entry]], conductor: int = None) -> "CycMatrix":
        """Build from mixed entries; the conductor defaults to the lcm of the entries'."""
        n = conductor or 1
        if conductor is None:
            for row in rows:
                for x in row:
                    if isinstance(x, CycNum):
                        n = lcm(n, x.conductor)
        return cls(n, tuple(tuple(row) for row in rows))

    @classmethod
    def identity(cls, size: int, conductor: int = 1) -> "CycMatrix":
        return cls(conductor, tuple(tuple(int(i == j) for j in range(size)) for i in range(size)))

    @classmethod
    def zero(cls, nrows: int, ncols: int, conductor: int = 1) -> "CycMatrix":
        return cls(conductor, tuple(tuple(0 for _ in range(ncols)) for _ in range(nrows)))

    # -- shape and access -----------------------------------------------------

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def __getitem__(self, index):
        i, j = index
        return self.rows[i][j]

    def lift(self, m: int) -> "CycMatrix":
        if m == self.conductor:
            return self
        return CycMatrix(m, tuple(tuple(x.lift(m) for x in row) for row in self.rows))

    def _common(self, other: "CycMatrix") -> Tuple["CycMatrix", "CycMatrix"]:
        m = lcm(self.conductor, other.conductor)
        return self.lift(m), other.lift(m)

    def is_rational(self) -> bool:
        return all(x.is_rational() for row in self.rows for x in row)

    def is_integral(self) -> bool:
        return all(x.is_integral() for row in self.rows for x in row)

    def to_rational(self) -> Matrix:
        return [[x.rational_value() for x in row] for row in self.rows]

    def denominator(self) -> int:
        den = 1
        for row in self.rows:
            for x in row:
                den = lcm(den, x.denominator())
        return den

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other: "CycMatrix") -> "CycMatrix":
        a, b = self._common(other)
        if (a.nrows, a.ncols) != (b.nrows, b.ncols):
            raise MalformedMatrixError("cannot add matrices of different shapes")
        return CycMatrix(a.conductor, tuple(
            tuple(x + y for x, y in zip(r, s)) for r, s in zip(a.rows, b.rows)
        ))

    def __neg__(self) -> "CycMatrix":
        return CycMatrix(self.conductor, tuple(tuple(-x for x in row) for row in self.rows))

    def __sub__(self, other: "CycMatrix") -> "CycMatrix":
        return self + (-other)

    def scale(self, c: Entry) -> "CycMatrix":
        n = lcm(self.conductor, c.conductor) if isinstance(c, CycNum) else self.conductor
        return CycMatrix(n, tuple(tuple(x * c for x in row) for row in self.rows))

    def __matmul__(self, other: "CycMatrix") -> "CycMatrix":
        a, b = self._common(other)
        if a.ncols != b.nrows:
            raise MalformedMatrixError(f"cannot multiply {a.nrows}x{a.ncols} by {b.nrows}x{b.ncols}")
        n = a.conductor
        cols = list(zip(*b.rows)) if b.rows else []
        out = []
        for row in a.rows:
            out_row = []
            for col in cols:
                acc = CycNum.zero(n)
                for x, y in zip(row, col):
                    if x and y:
                        acc = acc + x * y
                out_row.append(acc)
            out.append(tuple(out_row))
        return CycMatrix(n, tuple(out))

    def __pow__(self, exponent: int) -> "CycMatrix":
        if exponent < 0:
            raise MalformedMatrixError("negative matrix powers are not supported")
        result = CycMatrix.identity(self.nrows, self.conductor)
        base = self
        while exponent:
            if exponent & 1:
                result = result @ base
            base = base @ base
            exponent >>= 1
        return result

    def galois(self, d: int) -> "CycMatrix":
        """Entrywise sigma_d."""
        return CycMatrix(self.conductor, tuple(tuple(x.galois(d) for x in row) for row in self.rows))

    def transpose(self) -> "CycMatrix":
        return CycMatrix(self.conductor, tuple(zip(*self.rows)) if self.rows else ())

    def vector_mul(self, v: Sequence[Entry]) -> Tuple[CycNum, ...]:
        """The row vector v * self."""
        if len(v) != self.nrows:
            raise MalformedMatrixError(f"vector of length {len(v)} against {self.nrows} rows")
        row = CycMatrix.from_rows([list(v)], None)
        return (row @ self).rows[0]

    def __eq__(self, other):
        if not isinstance(other, CycMatrix):
            return NotImplemented
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            return False
        a, b = self._common(other)
        return a.rows == b.rows

    def __hash__(self):
        return hash((self.nrows, self.ncols))

    def format(self, var: str = "z") -> str:
        return "[" + ",\n ".join(
            "[" + ", ".join(x.format(var) for x in row) + "]" for row in self.rows
        ) + "]"


def split_vector(v: Sequence[CycNum], n: int) -> List[Fraction]:
    """Concatenated power-basis coordinates of v at conductor n."""
    out = []
    for x in v:
        out.extend(CycNum.coerce(x, n).coeffs)
    return out


def solve_left_cyc(a: CycMatrix, b: CycMatrix) -> CycMatrix:
    """
    Solve X*A = B over Q(zeta_n).

    Rational A is solved coordinatewise; otherwise the system is split by
    restriction of scalars into a rational one of phi(n) times the size.

    Raises:
        RankDeficientError: A lacks full row rank
        InconsistentSystemError: no solution exists
    """
    a, b = a._common(b)
    n = a.conductor
    phi = euler_phi(n)
    if b.nrows and b.ncols != a.ncols:
        raise MalformedMatrixError("target and coefficient matrices differ in width")
    if a.is_rational():
        ra = a.to_rational()
        parts = []
        for t in range(phi):
            parts.append(solve_left(ra, [[x.coeffs[t] for x in row] for row in b.rows]))
        rows = tuple(
            tuple(CycNum(n, tuple(parts[t][i][j] for t in range(phi))) for j in range(a.nrows))
            for i in range(b.nrows)
        )
        return CycMatrix(n, rows)
    big = []
    for row in a.rows:
        blocks = [mult_matrix(x) for x in row]
        for t in range(phi):
            big.append([c for blk in blocks for c in blk[t]])
    target = [split_vector(row, n) for row in b.rows]
    solved = solve_left(big, target)
    logger.debug(f"Solved {b.nrows} cyclotomic rows over conductor {n} (split size {len(big)})")
    rows = tuple(
        tuple(CycNum(n, tuple(sol[i * phi:(i + 1) * phi])) for i in range(a.nrows))
        for sol in solved
    )
    if any(len(sol) != a.nrows * phi for sol in solved):
        raise CyclotomicError("split solve returned a vector of the wrong length")
    return CycMatrix(n, rows)
