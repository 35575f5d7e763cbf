"""
Exact arithmetic in cyclotomic fields Q(zeta_n).

This module provides:
- ``CycNum``: an element of Q(zeta_n) in the power basis 1, zeta, ..., zeta^(phi(n)-1)
- ``GaloisChar``: the automorphism sigma_d with sigma_d(zeta_n) = zeta_n^d
- ``field_arith`` and ``galois_apply``: functional entry points

Reduction modulo the n-th cyclotomic polynomial is eager; per-conductor
tables (the modulus and the coordinates of every power of zeta) are built
once and shared.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence, Tuple, Union

from flint import fmpq, fmpq_poly
from sympy import cyclotomic_poly, mobius, totient

from core.exceptions import CyclotomicError

logger = logging.getLogger(__name__)

MAX_CONDUCTOR = 1 << 20

Scalar = Union[int, Fraction]


# =============================================================================
# PER-CONDUCTOR TABLES
# =============================================================================

@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    return int(totient(n))


@lru_cache(maxsize=None)
def cyclotomic_modulus(n: int) -> fmpq_poly:
    """The n-th cyclotomic polynomial as an ``fmpq_poly``."""
    coeffs = [int(c) for c in reversed(cyclotomic_poly(n, polys=True).all_coeffs())]
    return fmpq_poly(coeffs)


@lru_cache(maxsize=None)
def power_table(n: int) -> Tuple[Tuple[int, ...], ...]:
    """Integer power-basis coordinates of zeta_n^e for e = 0..n-1."""
    phi = euler_phi(n)
    modulus = cyclotomic_modulus(n)
    rows = []
    for e in range(n):
        if e < phi:
            rows.append(tuple(1 if i == e else 0 for i in range(phi)))
            continue
        reduced = fmpq_poly([0] * e + [1]) % modulus
        coeffs = reduced.coeffs()
        rows.append(tuple(int(coeffs[i].p) if i < len(coeffs) else 0 for i in range(phi)))
    logger.debug(f"Built power table for conductor {n} (phi={phi})")
    return tuple(rows)


@lru_cache(maxsize=None)
def ramanujan_sum(n: int, i: int) -> int:
    """Tr_{Q(zeta_n)/Q}(zeta_n^i) = mu(n/g) phi(n) / phi(n/g) with g = gcd(n, i)."""
    m = n // gcd(n, i)
    return int(mobius(m)) * euler_phi(n) // euler_phi(m)


def _check_conductor(n: int) -> int:
    if not isinstance(n, int) or n < 1:
        raise CyclotomicError(f"conductor must be a positive integer, got {n!r}")
    if n > MAX_CONDUCTOR:
        raise CyclotomicError(f"conductor {n} exceeds the supported maximum {MAX_CONDUCTOR}")
    return n


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _fold(n: int, poly_coeffs: Iterable[Scalar]) -> Tuple[Fraction, ...]:
    """Reduce sum c_e zeta_n^e (any length) to power-basis coordinates."""
    table = power_table(n)
    acc = [Fraction(0)] * euler_phi(n)
    for e, c in enumerate(poly_coeffs):
        if not c:
            continue
        for j, t in enumerate(table[e % n]):
            if t:
                acc[j] += c * t
    return tuple(acc)


def _from_flint(n: int, poly: fmpq_poly) -> "CycNum":
    reduced = poly % cyclotomic_modulus(n)
    coeffs = reduced.coeffs()
    phi = euler_phi(n)
    values = [Fraction(int(c.p), int(c.q)) for c in coeffs] + [Fraction(0)] * (phi - len(coeffs))
    return CycNum(n, tuple(values[:phi]))


# =============================================================================
# CYCLOTOMIC NUMBERS
# =============================================================================

@dataclass(frozen=True)
class CycNum:
    """
    An element sum c_i zeta_n^i of Q(zeta_n).

    ``coeffs`` always has length phi(n). Mixed arithmetic with ints and
    Fractions is supported; operands of different conductors are lifted
    to the lcm conductor first.
    """

    conductor: int
    coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        _check_conductor(self.conductor)
        coeffs = tuple(Fraction(c) for c in self.coeffs)
        if len(coeffs) != euler_phi(self.conductor):
            raise CyclotomicError(
                f"expected {euler_phi(self.conductor)} coefficients for conductor "
                f"{self.conductor}, got {len(coeffs)}"
            )
        object.__setattr__(self, 'coeffs', coeffs)

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_rational(cls, n: int, value: Scalar) -> "CycNum":
        phi = euler_phi(_check_conductor(n))
        return cls(n, (Fraction(value),) + (Fraction(0),) * (phi - 1))

    @classmethod
    def zero(cls, n: int) -> "CycNum":
        return cls.from_rational(n, 0)

    @classmethod
    def one(cls, n: int) -> "CycNum":
        return cls.from_rational(n, 1)

    @classmethod
    def zeta(cls, n: int, power: int = 1) -> "CycNum":
        """zeta_n^power."""
        _check_conductor(n)
        return cls(n, tuple(Fraction(t) for t in power_table(n)[power % n]))

    @classmethod
    def from_poly(cls, n: int, coeffs: Sequence[Scalar]) -> "CycNum":
        """The element sum coeffs[e] zeta_n^e for a polynomial of any length."""
        _check_conductor(n)
        return cls(n, _fold(n, coeffs))

    @classmethod
    def coerce(cls, value: Union["CycNum", Scalar], n: int) -> "CycNum":
        """Bring ``value`` to conductor ``n`` (lifting a CycNum when needed)."""
        if isinstance(value, CycNum):
            return value if value.conductor == n else value.lift(n)
        if isinstance(value, (int, Fraction)):
            return cls.from_rational(n, value)
        raise CyclotomicError(f"cannot interpret {value!r} as an element of Q(zeta_{n})")

    # -- predicates -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise CyclotomicError(f"{self} is not rational")
        return self.coeffs[0]

    def denominator(self) -> int:
        """Least common multiple of the coefficient denominators."""
        den = 1
        for c in self.coeffs:
            den = lcm(den, c.denominator)
        return den

    # -- structure ------------------------------------------------------------

    def lift(self, m: int) -> "CycNum":
        """Image under Q(zeta_n) -> Q(zeta_m), zeta_n -> zeta_m^(m/n)."""
        n = self.conductor
        _check_conductor(m)
        if m % n:
            raise CyclotomicError(f"cannot lift conductor {n} to {m}: {n} does not divide {m}")
        if m == n:
            return self
        step = m // n
        poly = [Fraction(0)] * m
        for i, c in enumerate(self.coeffs):
            poly[(i * step) % m] += c
        return CycNum(m, _fold(m, poly))

    def galois(self, d: int) -> "CycNum":
        """sigma_d(self)."""
        n = self.conductor
        if gcd(d, n) != 1:
            raise CyclotomicError(f"{d} is not a unit modulo {n}")
        d %= n
        if d == 1 % n or self.is_rational():
            return self
        poly = [Fraction(0)] * n
        for i, c in enumerate(self.coeffs):
            if c:
                poly[(d * i) % n] += c
        return CycNum(n, _fold(n, poly))

    def conjugate(self) -> "CycNum":
        """Complex conjugation, i.e. sigma_{-1}."""
        return self.galois(-1)

    def trace(self) -> Fraction:
        """Tr_{Q(zeta_n)/Q}(self)."""
        n = self.conductor
        return sum((c * ramanujan_sum(n, i) for i, c in enumerate(self.coeffs) if c), Fraction(0))

    def to_flint(self) -> fmpq_poly:
        return fmpq_poly([fmpq(c.numerator, c.denominator) for c in self.coeffs])

    def inverse(self) -> "CycNum":
        if self.is_zero():
            raise CyclotomicError("division by zero in Q(zeta_n)")
        n = self.conductor
        if self.is_rational():
            return CycNum.from_rational(n, 1 / self.coeffs[0])
        g, s, _ = self.to_flint().xgcd(cyclotomic_modulus(n))
        if g.degree() != 0:
            raise CyclotomicError(f"{self} is not invertible modulo Phi_{n}")
        return _from_flint(n, s * (1 / g[0]))

    # -- arithmetic -----------------------------------------------------------

    def _pair(self, other) -> Tuple["CycNum", "CycNum"]:
        if isinstance(other, CycNum):
            if other.conductor == self.conductor:
                return self, other
            m = lcm(self.conductor, other.conductor)
            return self.lift(m), other.lift(m)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self, CycNum.from_rational(self.conductor, other)
        return NotImplemented, NotImplemented

    def __add__(self, other):
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        return CycNum(a.conductor, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.conductor, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        return CycNum(a.conductor, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return CycNum(self.conductor, tuple(c * other for c in self.coeffs))
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        if b.is_rational():
            return a * b.coeffs[0]
        if a.is_rational():
            return b * a.coeffs[0]
        return _from_flint(a.conductor, a.to_flint() * b.to_flint())

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                raise CyclotomicError("division by zero in Q(zeta_n)")
            return self * (1 / Fraction(other))
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = CycNum.one(self.conductor)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, CycNum):
            return NotImplemented
        if other.conductor == self.conductor:
            return self.coeffs == other.coeffs
        a, b = self._pair(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        # the normalized trace does not depend on the ambient conductor
        return hash(self.trace() / euler_phi(self.conductor))

    def __bool__(self):
        return not self.is_zero()

    def format(self, var: str = "z") -> str:
        """Human-readable polynomial in ``var`` = zeta_n."""
        terms = []
        for i in reversed(range(len(self.coeffs))):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = str(mag)
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        sign, body = terms[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"CycNum({self.conductor}, {self.format()})"


# =============================================================================
# GALOIS ACTION
# =============================================================================

@dataclass(frozen=True)
class GaloisChar:
    """sigma_d in Gal(Q(zeta_n)/Q); composition multiplies exponents mod n."""

    conductor: int
    exponent: int

    def __post_init__(self):
        _check_conductor(self.conductor)
        if gcd(self.exponent, self.conductor) != 1:
            raise CyclotomicError(f"{self.exponent} is not a unit modulo {self.conductor}")
        object.__setattr__(self, 'exponent', self.exponent % self.conductor)

    def compose(self, other: "GaloisChar") -> "GaloisChar":
        if other.conductor != self.conductor:
            raise CyclotomicError("cannot compose Galois elements of different conductors")
        return GaloisChar(self.conductor, self.exponent * other.exponent)

    def __call__(self, a: CycNum) -> CycNum:
        return galois_apply(self, a)


def galois_apply(s: GaloisChar, a: Union[CycNum, Scalar]) -> Union[CycNum, Fraction]:
    """
    Apply sigma_d to ``a``.

    Elements of a subfield Q(zeta_m), m | n, are acted on through the
    restriction sigma_{d mod m}.
    """
    if not isinstance(a, CycNum):
        return Fraction(a)
    if a.conductor == s.conductor:
        return a.galois(s.exponent)
    if s.conductor % a.conductor == 0:
        return a.galois(s.exponent % a.conductor)
    raise CyclotomicError(
        f"conductor mismatch: sigma on Q(zeta_{s.conductor}) applied to Q(zeta_{a.conductor})"
    )


def field_arith(a: Union[CycNum, Scalar], b: Union[CycNum, Scalar], op: str) -> CycNum:
    """Exact ``a op b`` for op in {add, sub, mul, div}, reduced to the power basis."""
    if not isinstance(a, CycNum):
        a = CycNum.from_rational(b.conductor if isinstance(b, CycNum) else 1, a)
    if op == 'add':
        return a + b
    if op == 'sub':
        return a - b
    if op == 'mul':
        return a * b
    if op == 'div':
        return a / b
    raise CyclotomicError(f"unknown field operation {op!r}")
