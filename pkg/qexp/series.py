"""
Truncated q-expansions in q_w = exp(2 pi i tau / w).

A ``QExp`` knows the coefficients a_0..a_{prec-1}; nothing beyond ``prec``
is ever read, and every operation reports the largest precision its
result is valid to. Coefficients are rationals, cyclotomic numbers
(``CycNum``) or number-field elements (``NFElement``); a series never mixes
the last two.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from flint import fmpq, fmpq_poly

from core.exceptions import (
    CyclotomicError,
    InsufficientPrecisionError,
    MalformedMatrixError,
    NonIntegralError,
)
from cyclo.numbers import CycNum, GaloisChar, euler_phi, galois_apply, lcm
from qexp.numberfield import NFElement

logger = logging.getLogger(__name__)

Coeff = Union[Fraction, CycNum, NFElement]


class Ring:
    """Coefficient ring tags."""

    Z = 'Z'
    Q = 'Q'
    Z_ZETA = 'Z[zeta]'
    Q_ZETA = 'Q(zeta)'
    FIELD = 'L'


def _normalize(coeffs: Sequence) -> Tuple[Coeff, ...]:
    conductor = 1
    nf = None
    for c in coeffs:
        if isinstance(c, CycNum):
            conductor = lcm(conductor, c.conductor)
        elif isinstance(c, NFElement):
            nf = c.field
    if nf is not None and conductor != 1:
        raise CyclotomicError("a q-expansion cannot mix cyclotomic and number-field coefficients")
    if nf is not None:
        return tuple(c if isinstance(c, NFElement) else nf.rational(c) for c in coeffs)
    if conductor != 1:
        return tuple(CycNum.coerce(c, conductor) for c in coeffs)
    return tuple(c.rational_value() if isinstance(c, CycNum) else Fraction(c) for c in coeffs)


def _is_zero(c: Coeff) -> bool:
    if isinstance(c, (CycNum, NFElement)):
        return c.is_zero()
    return c == 0


@dataclass(frozen=True)
class QExp:
    """
    sum_{n < prec} a_n q_w^n, plus metadata.

    ``weight`` and ``level`` are carried along but not interpreted by the
    arithmetic here.
    """

    coeffs: Tuple[Coeff, ...]
    width: int = 1
    weight: int = 0
    level: int = 1
    conductor: int = field(init=False, default=1)

    def __post_init__(self):
        if self.width < 1:
            raise MalformedMatrixError(f"width must be positive, got {self.width}")
        coeffs = _normalize(self.coeffs)
        object.__setattr__(self, 'coeffs', coeffs)
        conductor = 1
        for c in coeffs:
            if isinstance(c, CycNum):
                conductor = c.conductor
                break
        object.__setattr__(self, 'conductor', conductor)

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_terms(cls, terms: dict, prec: int, **meta) -> "QExp":
        """From a sparse {exponent: coefficient} mapping."""
        coeffs = [Fraction(0)] * prec
        for n, c in terms.items():
            if n < prec:
                coeffs[n] = c
        return cls(tuple(coeffs), **meta)

    @classmethod
    def one(cls, prec: int, **meta) -> "QExp":
        return cls.from_terms({0: 1}, prec, **meta)

    # -- inspection -----------------------------------------------------------

    @property
    def prec(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n: int) -> Coeff:
        if not 0 <= n < self.prec:
            raise InsufficientPrecisionError(f"coefficient {n} requested, only {self.prec} known")
        return self.coeffs[n]

    def valuation(self) -> Optional[int]:
        """Index of the first nonzero coefficient, or None if zero to known precision."""
        for n, c in enumerate(self.coeffs):
            if not _is_zero(c):
                return n
        return None

    def _effective_valuation(self) -> int:
        v = self.valuation()
        return self.prec if v is None else v

    @property
    def ring(self) -> str:
        if any(isinstance(c, NFElement) for c in self.coeffs):
            return Ring.FIELD
        if self.conductor > 1:
            integral = all(c.is_integral() for c in self.coeffs)
            return Ring.Z_ZETA if integral else Ring.Q_ZETA
        return Ring.Z if all(c.denominator == 1 for c in self.coeffs) else Ring.Q

    def is_integral(self) -> bool:
        return self.ring in (Ring.Z, Ring.Z_ZETA)

    def is_cusp_form(self) -> bool:
        return self.prec == 0 or _is_zero(self.coeffs[0])

    def integer_coeffs(self, start: int = 0, stop: Optional[int] = None) -> List[int]:
        stop = self.prec if stop is None else stop
        if stop > self.prec:
            raise InsufficientPrecisionError(f"coefficients up to {stop} requested, only {self.prec} known")
        if self.ring != Ring.Z:
            raise NonIntegralError(f"expected integer coefficients, ring is {self.ring}")
        return [int(c) for c in self.coeffs[start:stop]]

    def _meta(self, **changes) -> dict:
        meta = {'width': self.width, 'weight': self.weight, 'level': self.level}
        meta.update(changes)
        return meta

    # -- linear structure -----------------------------------------------------

    def truncate(self, prec: int) -> "QExp":
        if prec > self.prec:
            raise InsufficientPrecisionError(f"cannot extend precision {self.prec} to {prec}")
        return QExp(self.coeffs[:prec], **self._meta())

    def _check_width(self, other: "QExp"):
        if other.width != self.width:
            raise MalformedMatrixError(f"width mismatch: {self.width} vs {other.width}")

    def __add__(self, other: "QExp") -> "QExp":
        self._check_width(other)
        prec = min(self.prec, other.prec)
        return QExp(tuple(a + b for a, b in zip(self.coeffs[:prec], other.coeffs[:prec])), **self._meta())

    def __neg__(self) -> "QExp":
        return QExp(tuple(-c for c in self.coeffs), **self._meta())

    def __sub__(self, other: "QExp") -> "QExp":
        return self + (-other)

    def scale(self, c) -> "QExp":
        return QExp(tuple(x * c for x in self.coeffs), **self._meta())

    def __eq__(self, other):
        if not isinstance(other, QExp):
            return NotImplemented
        return self.width == other.width and self.prec == other.prec and all(
            _is_zero(a - b) for a, b in zip(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash((self.width, self.prec))

    # -- operators on expansions ----------------------------------------------

    def degeneracy(self, d: int) -> "QExp":
        """alpha_d: a_n moves to index d*n; precision becomes d*prec."""
        if d < 1:
            raise MalformedMatrixError(f"degeneracy index must be positive, got {d}")
        if d == 1:
            return self
        zero = self.coeffs[0] * 0 if self.coeffs else Fraction(0)
        coeffs = [zero] * (d * self.prec)
        for n, c in enumerate(self.coeffs):
            coeffs[d * n] = c
        return QExp(tuple(coeffs), **self._meta(level=self.level * d))

    def galois_twist(self, s: GaloisChar) -> "QExp":
        """Apply sigma_d to every coefficient."""
        if self.ring == Ring.FIELD:
            raise CyclotomicError("Galois twists act on cyclotomic coefficients only")
        if s.conductor % self.conductor:
            raise CyclotomicError(
                f"coefficients of conductor {self.conductor} are not in Q(zeta_{s.conductor})"
            )
        return QExp(tuple(galois_apply(s, c) for c in self.coeffs), **self._meta())

    def t_twist(self, power: int) -> "QExp":
        """a_n -> zeta_w^(power*n) a_n, i.e. the action of T^power on a series in q_w."""
        w = self.width
        if power % w == 0:
            return self
        n = lcm(w, self.conductor)
        coeffs = tuple(
            CycNum.coerce(c, n) * CycNum.zeta(w, power * i) if not _is_zero(c) else c
            for i, c in enumerate(self.coeffs)
        )
        return QExp(coeffs, **self._meta())

    def trace_down(self) -> "QExp":
        """Coefficientwise Tr_{L/Q}; expansions already over Q are returned unchanged."""
        if self.ring != Ring.FIELD:
            return self
        return QExp(tuple(c.trace() for c in self.coeffs), **self._meta())

    def rescale_width(self, w: int) -> "QExp":
        """
        Re-express a series in q_W as one in q_w, w | W.

        Needs every nonzero exponent divisible by W/w.
        """
        if self.width % w:
            raise MalformedMatrixError(f"{w} does not divide the width {self.width}")
        r = self.width // w
        if r == 1:
            return self
        for n, c in enumerate(self.coeffs):
            if n % r and not _is_zero(c):
                raise MalformedMatrixError(f"exponent {n} is not divisible by {r}")
        prec = -(-self.prec // r)
        return QExp(tuple(self.coeffs[r * m] for m in range(prec)), **self._meta(width=w))

    def mul(self, other: "QExp") -> "QExp":
        """Cauchy product, valid to min(prec_f + v_g, prec_g + v_f); weights add."""
        self._check_width(other)
        prec = min(
            self.prec + other._effective_valuation(),
            other.prec + self._effective_valuation(),
        )
        coeffs = _convolve(self.coeffs, other.coeffs, prec)
        return QExp(coeffs, **self._meta(weight=self.weight + other.weight))

    __mul__ = mul

    def format(self, terms: int = 8, var: str = "q") -> str:
        parts = []
        for n, c in enumerate(self.coeffs):
            if _is_zero(c):
                continue
            text = str(c) if not isinstance(c, CycNum) else f"({c})"
            mono = "" if n == 0 else (var if n == 1 else f"{var}^{n}")
            parts.append(mono if text == "1" and mono else f"{text}*{mono}" if mono else text)
            if len(parts) == terms:
                break
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O({var}^{self.prec})"

    def __repr__(self):
        return f"QExp(width={self.width}, {self.format()})"


# =============================================================================
# PRODUCTS
# =============================================================================

def _poly_coeffs(poly: fmpq_poly, length: int) -> List[Fraction]:
    coeffs = poly.coeffs()
    values = [Fraction(int(c.p), int(c.q)) for c in coeffs[:length]]
    return values + [Fraction(0)] * (length - len(values))


def _flint(values: Sequence[Fraction]) -> fmpq_poly:
    return fmpq_poly([fmpq(v.numerator, v.denominator) for v in values])


def _convolve(a: Sequence[Coeff], b: Sequence[Coeff], prec: int) -> Tuple[Coeff, ...]:
    """First ``prec`` coefficients of the product series (Kronecker substitution)."""
    a, b = a[:prec], b[:prec]
    if prec <= 0:
        return ()
    sample = next((c for c in tuple(a) + tuple(b) if not isinstance(c, Fraction)), None)
    if sample is None:
        return tuple(_poly_coeffs(_flint(a) * _flint(b), prec))
    if isinstance(sample, CycNum):
        n = lcm(_conductor(a), _conductor(b))
        phi = euler_phi(n)
        k = 2 * phi - 1
        packed = []
        for seq in (a, b):
            flat = [Fraction(0)] * (k * len(seq))
            for i, c in enumerate(seq):
                for t, x in enumerate(CycNum.coerce(c, n).coeffs):
                    flat[i * k + t] = x
            packed.append(_flint(flat))
        product = _poly_coeffs(packed[0] * packed[1], k * prec)
        return tuple(CycNum.from_poly(n, product[i * k:(i + 1) * k]) for i in range(prec))
    out = []
    for m in range(prec):
        acc = sample.field.zero()
        for i in range(m + 1):
            if i < len(a) and m - i < len(b):
                acc = acc + a[i] * b[m - i]
        out.append(acc)
    return tuple(out)


def _conductor(seq: Sequence[Coeff]) -> int:
    n = 1
    for c in seq:
        if isinstance(c, CycNum):
            n = lcm(n, c.conductor)
    return n


def eval_monomial(exponents: Sequence[int], forms: Sequence[QExp], prec: Optional[int] = None) -> QExp:
    """
    m(f_1, ..., f_g) for the monomial with the given exponent vector.

    Args:
        exponents: One nonnegative exponent per form
        forms: Series sharing one width
        prec: Required output length, if any

    Raises:
        InsufficientPrecisionError: the product is known to fewer than ``prec`` terms
    """
    if len(exponents) != len(forms):
        raise MalformedMatrixError(f"{len(exponents)} exponents for {len(forms)} forms")
    if not forms:
        raise MalformedMatrixError("no forms to evaluate on")
    width = forms[0].width
    result = None
    for e, f in zip(exponents, forms):
        if f.width != width:
            raise MalformedMatrixError("forms of different widths")
        for _ in range(e):
            result = f if result is None else result.mul(f)
    if result is None:
        result = QExp.one(min(f.prec for f in forms), width=width)
    if prec is not None:
        if result.prec < prec:
            raise InsufficientPrecisionError(
                f"monomial {tuple(exponents)} known to {result.prec} terms, {prec} required"
            )
        result = result.truncate(prec)
    return result


def coefficient_matrix(forms: Sequence[QExp], start: int, stop: int) -> List[List[int]]:
    """Integer rows [a_start .. a_{stop-1}] of each form."""
    return [f.integer_coeffs(start, stop) for f in forms]
