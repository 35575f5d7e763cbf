"""
Homogeneous pieces I_d(C) of the canonical ideal.

A form F of degree d lies in I_d(C) exactly when F(f_1, ..., f_g) vanishes
through q_w^(d(2g-1)); the canonical divisor has degree 2g-2, so a
nonzero F(f) cannot vanish to that order. Each cyclotomic coefficient
equation is split into phi(N) rational ones and the kernel is solved
over Q.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Dict, List, Sequence, Tuple

import sympy

from core.exceptions import InputError, InsufficientPrecisionError
from qexp.series import QExp, eval_monomial
from zlinalg.cyclomatrix import split_vector
from zlinalg.rational import left_kernel

logger = logging.getLogger(__name__)

Exponents = Tuple[int, ...]


@lru_cache(maxsize=None)
def monomials(g: int, d: int) -> Tuple[Exponents, ...]:
    """Exponent vectors of degree d in g variables, graded lexicographic (x_1^d first)."""
    if g == 0:
        return ((),) if d == 0 else ()
    if g == 1:
        return ((d,),)
    out = []
    for e in range(d, -1, -1):
        for rest in monomials(g - 1, d - e):
            out.append((e,) + rest)
    return tuple(out)


def variable_names(g: int) -> Tuple[str, ...]:
    if g <= 3:
        return ('x', 'y', 'z')[:g]
    return tuple(f"x{i}" for i in range(1, g + 1))


@dataclass(frozen=True)
class HomogeneousPolynomial:
    """Coefficients over ``monomials(g, d)``, in that order."""

    g: int
    d: int
    coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = tuple(Fraction(c) for c in self.coeffs)
        if len(coeffs) != len(monomials(self.g, self.d)):
            raise InputError(
                f"{len(coeffs)} coefficients for {len(monomials(self.g, self.d))} monomials "
                f"of degree {self.d} in {self.g} variables"
            )
        object.__setattr__(self, 'coeffs', coeffs)

    @property
    def terms(self) -> Dict[Exponents, Fraction]:
        return {m: c for m, c in zip(monomials(self.g, self.d), self.coeffs) if c}

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def primitive(self) -> "HomogeneousPolynomial":
        """The integer multiple with coprime coefficients and positive leading term."""
        if self.is_zero():
            return self
        den = lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        content = 0
        for x in ints:
            content = gcd(content, x)
        lead = next(x for x in ints if x)
        if lead < 0:
            content = -content
        return HomogeneousPolynomial(self.g, self.d, tuple(Fraction(x, content) for x in ints))

    def times_variable(self, i: int) -> "HomogeneousPolynomial":
        index = {m: j for j, m in enumerate(monomials(self.g, self.d + 1))}
        out = [Fraction(0)] * len(index)
        for m, c in self.terms.items():
            shifted = tuple(e + (j == i) for j, e in enumerate(m))
            out[index[shifted]] += c
        return HomogeneousPolynomial(self.g, self.d + 1, tuple(out))

    def evaluate(self, forms: Sequence[QExp], prec: int) -> QExp:
        """F(f_1, ..., f_g) to ``prec`` terms."""
        total = None
        for m, c in self.terms.items():
            term = eval_monomial(m, forms, prec).scale(c)
            total = term if total is None else total + term
        if total is None:
            raise InputError("cannot evaluate the zero polynomial")
        return total

    def to_sympy(self) -> sympy.Poly:
        gens = sympy.symbols(variable_names(self.g))
        terms = {m: sympy.Rational(c.numerator, c.denominator) for m, c in self.terms.items()}
        return sympy.Poly.from_dict(terms, *gens, domain='QQ')

    def format(self) -> str:
        return str(self.to_sympy().as_expr())

    def __str__(self):
        return self.format()


def required_terms(g: int, d: int) -> int:
    """Series terms (indices 0..d(2g-1)) that decide membership in I_d(C)."""
    return d * (2 * g - 1) + 1


def coefficient_system(forms: Sequence[QExp], d: int, conductor: int) -> List[List[Fraction]]:
    """Row m: the zeta-split coefficients of m(f_1, ..., f_g) through q_w^(d(2g-1))."""
    g = len(forms)
    terms = required_terms(g, d)
    rows = []
    for m in monomials(g, d):
        series = eval_monomial(m, forms, terms)
        rows.append(split_vector(series.coeffs, conductor))
    return rows


def compute_Id(basis, d: int) -> List[HomogeneousPolynomial]:
    """
    An echelonized Q-basis of I_d(C) for the canonical curve of ``basis``.

    Args:
        basis: ``InvariantBasis`` with g >= 1 forms
        d: Degree

    Raises:
        InsufficientPrecisionError: the forms are known to fewer than
            d(2g-2) + 2 terms
    """
    g = basis.genus
    if g < 1:
        raise InputError("no forms: the canonical ideal is undefined")
    if d < 2:
        return []
    needed = d * (2 * g - 2) + 2
    if basis.prec < needed:
        raise InsufficientPrecisionError(
            f"I_{d} needs {needed} coefficients of each form, only {basis.prec} known"
        )
    rows = coefficient_system(basis.forms, d, basis.N)
    found = [HomogeneousPolynomial(g, d, tuple(v)) for v in left_kernel(rows)]
    logger.info(f"dim I_{d}(C) = {len(found)} (g = {g}, {len(rows)} monomials)")
    return found
