"""
Number fields L = Q[a] given by a monic integer polynomial.

Newform coefficients arrive as rational vectors in the power basis
1, a, ..., a^(deg-1). Arithmetic reduces modulo the defining polynomial
with python-flint's ``fmpq_poly``.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Sequence, Tuple, Union

from flint import acb, fmpq, fmpq_poly, fmpz_poly

from core.exceptions import NewformDataError
from cyclo.embedding import rational_ball

Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class NumberField:
    """Q[x]/(poly); ``poly`` is ascending (constant term first), monic, integral."""

    poly: Tuple[int, ...]

    def __post_init__(self):
        poly = tuple(int(c) for c in self.poly)
        if len(poly) < 2 or poly[-1] != 1:
            raise NewformDataError(f"field polynomial {list(poly)} must be monic of degree >= 1")
        object.__setattr__(self, 'poly', poly)

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    @property
    def modulus(self) -> fmpq_poly:
        return _modulus(self.poly)

    def element(self, coeffs: Sequence[Scalar]) -> "NFElement":
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) > self.degree:
            return _from_flint(self, _to_flint(coeffs) % self.modulus)
        return NFElement(self, tuple(coeffs) + (Fraction(0),) * (self.degree - len(coeffs)))

    def rational(self, value: Scalar) -> "NFElement":
        return self.element([value])

    def zero(self) -> "NFElement":
        return self.rational(0)

    def one(self) -> "NFElement":
        return self.rational(1)

    def generator(self) -> "NFElement":
        """The class a of x."""
        return self.element([0, 1])

    def power_traces(self) -> Tuple[Fraction, ...]:
        """Tr(a^j) for j = 0..deg-1."""
        return _power_traces(self.poly)

    def roots(self) -> List[acb]:
        """
        Isolating balls for the complex roots, at the current working precision.

        Roots are sorted by the midpoints of (real, imaginary) parts so the
        embedding order is reproducible; real parts are rounded first so a
        conjugate pair always sorts by its imaginary part.
        """
        found = fmpz_poly(list(self.poly)).complex_roots()
        balls = []
        for root, multiplicity in found:
            if multiplicity != 1:
                raise NewformDataError(f"field polynomial {list(self.poly)} is not squarefree")
            balls.append(root)
        return sorted(balls, key=lambda r: (round(float(r.real.mid()), 12), float(r.imag.mid())))


@lru_cache(maxsize=None)
def _modulus(poly: Tuple[int, ...]) -> fmpq_poly:
    return fmpq_poly(list(poly))


def _to_flint(coeffs: Sequence[Fraction]) -> fmpq_poly:
    return fmpq_poly([fmpq(c.numerator, c.denominator) for c in coeffs])


def _from_flint(field: NumberField, poly: fmpq_poly) -> "NFElement":
    coeffs = poly.coeffs()
    values = [Fraction(int(c.p), int(c.q)) for c in coeffs]
    values += [Fraction(0)] * (field.degree - len(values))
    return NFElement(field, tuple(values[:field.degree]))


@lru_cache(maxsize=None)
def _power_traces(poly: Tuple[int, ...]) -> Tuple[Fraction, ...]:
    field = NumberField(poly)
    a = field.generator()
    traces = []
    x = field.one()
    for _ in range(field.degree):
        traces.append(sum((row[i] for i, row in enumerate(x.mult_matrix())), Fraction(0)))
        x = x * a
    return tuple(traces)


@dataclass(frozen=True)
class NFElement:
    """sum coeffs[i] a^i in the number field ``field``."""

    field: NumberField
    coeffs: Tuple[Fraction, ...]

    def _other(self, other) -> "NFElement":
        if isinstance(other, NFElement):
            if other.field != self.field:
                raise NewformDataError("arithmetic between different number fields")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.field.rational(other)
        return NotImplemented

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return NFElement(self.field, tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return NFElement(self.field, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return NFElement(self.field, tuple(x * other for x in self.coeffs))
        other = self._other(other)
        if other is NotImplemented:
            return other
        return _from_flint(self.field, (_to_flint(self.coeffs) * _to_flint(other.coeffs)) % self.field.modulus)

    __rmul__ = __mul__

    def inverse(self) -> "NFElement":
        if self.is_zero():
            raise NewformDataError("division by zero in a number field")
        g, s, _ = _to_flint(self.coeffs).xgcd(self.field.modulus)
        if g.degree() != 0:
            raise NewformDataError("element is a zero divisor: field polynomial is reducible")
        return _from_flint(self.field, (s * (1 / g[0])) % self.field.modulus)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self * (1 / Fraction(other))
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = self.field.one()
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
        if not isinstance(other, NFElement):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field.poly, self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def is_one(self) -> bool:
        return self.is_rational() and self.coeffs[0] == 1

    def mult_matrix(self) -> List[List[Fraction]]:
        """Row j holds the coordinates of a^j * self."""
        a = self.field.generator()
        rows = []
        x = self
        for _ in range(self.field.degree):
            rows.append(list(x.coeffs))
            x = x * a
        return rows

    def trace(self) -> Fraction:
        """Tr_{L/Q}(self)."""
        traces = self.field.power_traces()
        return sum((c * t for c, t in zip(self.coeffs, traces) if c), Fraction(0))

    def embed(self, root: acb) -> acb:
        """Image under a -> root (Horner evaluation in ball arithmetic)."""
        result = acb(0)
        for c in reversed(self.coeffs):
            result = result * root + rational_ball(c)
        return result

    def __repr__(self):
        return f"NFElement({list(self.field.poly)}, {[str(c) for c in self.coeffs]})"
