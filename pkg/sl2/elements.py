"""
Elements of GL2(Z/NZ), lifts to SL2(Z) and words in S and T.

Matrices are (a, b, c, d) for [[a, b], [c, d]]. A word is a string over
"S", "T" and "t" (= T^-1), read left to right as a product.
"""

import logging
from dataclasses import dataclass
from math import gcd
from typing import Iterable, List, Sequence, Tuple

from sympy import factorint
try:
    from sympy.core.intfunc import igcdex
except ImportError:  # sympy < 1.13
    from sympy.core.numbers import igcdex

from core.exceptions import InputError
from cyclo.units import is_unit, unit_inverse

logger = logging.getLogger(__name__)

IntMatrix2 = Tuple[int, int, int, int]

S = (0, -1, 1, 0)
T = (1, 1, 0, 1)
T_INV = (1, -1, 0, 1)
LETTERS = {'S': S, 'T': T, 't': T_INV}


def mat_mul(x: Sequence[int], y: Sequence[int]) -> IntMatrix2:
    a, b, c, d = x
    e, f, g, h = y
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


@dataclass(frozen=True)
class GL2Element:
    """[[a, b], [c, d]] modulo N with unit determinant."""

    N: int
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.N < 1:
            raise InputError(f"modulus must be positive, got {self.N}")
        for name in 'abcd':
            object.__setattr__(self, name, getattr(self, name) % self.N)
        if not is_unit(self.det, self.N):
            raise InputError(f"{self.entries} has determinant {self.det}, not a unit mod {self.N}")

    @classmethod
    def from_entries(cls, entries: Iterable[int], N: int) -> "GL2Element":
        entries = [int(x) for x in entries]
        if len(entries) != 4:
            raise InputError(f"a 2x2 matrix needs four entries, got {entries}")
        return cls(N, *entries)

    @classmethod
    def identity(cls, N: int) -> "GL2Element":
        return cls(N, 1, 0, 0, 1)

    @classmethod
    def diagonal(cls, N: int, d: int) -> "GL2Element":
        """[[1, 0], [0, d]]."""
        return cls(N, 1, 0, 0, d)

    @property
    def entries(self) -> IntMatrix2:
        return (self.a, self.b, self.c, self.d)

    @property
    def det(self) -> int:
        return (self.a * self.d - self.b * self.c) % self.N

    def is_identity(self) -> bool:
        return self.entries == GL2Element.identity(self.N).entries

    def is_sl2(self) -> bool:
        return self.det == 1 % self.N

    def __mul__(self, other: "GL2Element") -> "GL2Element":
        if other.N != self.N:
            raise InputError(f"moduli differ: {self.N} and {other.N}")
        return GL2Element(self.N, *mat_mul(self.entries, other.entries))

    def inverse(self) -> "GL2Element":
        u = unit_inverse(self.det, self.N)
        return GL2Element(self.N, self.d * u, -self.b * u, -self.c * u, self.a * u)

    def __pow__(self, exponent: int) -> "GL2Element":
        base = self if exponent >= 0 else self.inverse()
        result = GL2Element.identity(self.N)
        for _ in range(abs(exponent)):
            result = result * base
        return result

    def split_det(self) -> Tuple["GL2Element", int]:
        """(gamma, d) with self = gamma * [[1, 0], [0, d]] and gamma in SL2(Z/NZ)."""
        d = self.det
        gamma = self * GL2Element.diagonal(self.N, unit_inverse(d, self.N))
        return gamma, d

    def __str__(self):
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]] mod {self.N}"


def _coprime_shift(c: int, d: int, N: int) -> int:
    """c + t N coprime to d, for d != 0 and gcd(c, d, N) = 1."""
    t = 1
    for p in factorint(abs(d)):
        if c % p:
            t *= p
    shifted = c + t * N
    if gcd(shifted, d) != 1:
        raise InputError(f"bottom row ({c}, {d}) is not primitive modulo {N}")
    return shifted


def lift_sl2(g: GL2Element) -> IntMatrix2:
    """
    An integer matrix of determinant 1 congruent to ``g`` modulo N.

    The bottom row is shifted by multiples of N until it is primitive,
    completed to gamma_0 in SL2(Z) with the extended Euclidean algorithm,
    and the remaining upper unipotent factor T^x is put in front.

    Raises:
        InputError: det(g) != 1
    """
    N = g.N
    if not g.is_sl2():
        raise InputError(f"{g} is not in SL2(Z/{N}Z)")
    if N == 1:
        return (1, 0, 0, 1)
    a, b, c, d = g.entries
    if d == 0:
        d = N
    if gcd(c, d) != 1:
        c = _coprime_shift(c, d, N)
    x0, y0, one = (int(v) for v in igcdex(d, -c))
    # x0 * d + y0 * (-c) = 1, so [[x0, y0], [c, d]] has determinant 1
    if one != 1:
        x0, y0 = -x0, -y0
    gamma0 = (x0, y0, c, d)
    x = (b * x0 - a * y0) % N
    lifted = mat_mul((1, x, 0, 1), gamma0)
    if tuple(v % N for v in lifted) != g.entries:
        raise InputError(f"lift of {g} failed")
    return lifted


def _simplify(word: str) -> str:
    stack: List[str] = []
    for letter in word:
        if stack and {stack[-1], letter} == {'T', 't'}:
            stack.pop()
            continue
        stack.append(letter)
        if len(stack) >= 4 and stack[-4:] == ['S'] * 4:
            del stack[-4:]
    return ''.join(stack)


def word_decompose(m: Sequence[int]) -> str:
    """
    A word in S, T, t whose product is the integer matrix ``m`` (det 1).

    Euclid on the bottom row: right-multiply by T^q to shrink |d| below
    |c|, then by S to swap the columns, until c = 0.

    Raises:
        InputError: det(m) != 1
    """
    a, b, c, d = (int(v) for v in m)
    if a * d - b * c != 1:
        raise InputError(f"{(a, b, c, d)} does not have determinant 1")
    current = (a, b, c, d)
    applied: List[str] = []
    while current[2] != 0:
        c, d = current[2], current[3]
        q = -(d // c)
        if abs(d + (q + 1) * c) < abs(d + q * c):
            q += 1
        if q:
            current = mat_mul(current, (1, q, 0, 1))
            applied.append(('T' if q > 0 else 't') * abs(q))
        current = mat_mul(current, S)
        applied.append('S')
    a, b = current[0], current[1]
    # current = a * T^(a b), a = +-1; S^-1 = -S
    s_count = sum(chunk.count('S') for chunk in applied)
    sign = a * (-1) ** s_count
    inverse = ''.join(
        chunk if chunk == 'S' else chunk.swapcase() for chunk in reversed(applied)
    )
    shift = a * b
    word = ('SS' if sign < 0 else '') + ('T' if shift > 0 else 't') * abs(shift) + inverse
    word = _simplify(word)
    if word_matrix(word) != (int(m[0]), int(m[1]), int(m[2]), int(m[3])):
        raise InputError(f"word decomposition of {tuple(m)} failed")
    return word


def word_matrix(word: str) -> IntMatrix2:
    """The integer product of a word."""
    result = (1, 0, 0, 1)
    for letter in word:
        try:
            result = mat_mul(result, LETTERS[letter])
        except KeyError as e:
            raise InputError(f"unknown letter {letter!r} in word {word!r}") from e
    return result


def word_runs(word: str) -> List[Tuple[str, int]]:
    """Collapse a word into ('S', 1) and ('T', j) runs."""
    runs: List[Tuple[str, int]] = []
    for letter in word:
        if letter == 'S':
            runs.append(('S', 1))
            continue
        step = 1 if letter == 'T' else -1
        if runs and runs[-1][0] == 'T':
            runs[-1] = ('T', runs[-1][1] + step)
        else:
            runs.append(('T', step))
    return [r for r in runs if r != ('T', 0)]
