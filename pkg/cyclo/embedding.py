"""
Complex embeddings of cyclotomic numbers as certified python-flint balls.

The standard embedding sends zeta_n to exp(2 pi i / n).
"""

from fractions import Fraction
from typing import Union

from flint import acb, arb, fmpq

from core.precision import working_precision
from cyclo.numbers import CycNum


def rational_ball(value: Union[int, Fraction]) -> arb:
    value = Fraction(value)
    return arb(fmpq(value.numerator, value.denominator))


def zeta_ball(n: int) -> acb:
    """exp(2 pi i / n) at the current working precision."""
    angle = arb(fmpq(2, n))
    return acb(angle.cos_pi(), angle.sin_pi())


def embed_current(a: Union[CycNum, int, Fraction]) -> acb:
    """Embed at the precision already in effect (inside ``working_precision``)."""
    if not isinstance(a, CycNum):
        return acb(rational_ball(a))
    if a.is_rational():
        return acb(rational_ball(a.coeffs[0]))
    z = zeta_ball(a.conductor)
    result = acb(0)
    for c in reversed(a.coeffs):
        result = result * z + rational_ball(c)
    return result


def embed_complex(a: Union[CycNum, int, Fraction], precision: int) -> acb:
    """
    A complex ball containing the image of ``a`` under zeta_n -> exp(2 pi i/n).

    Args:
        a: Cyclotomic number (or rational)
        precision: Working precision in bits, at least 32

    Returns:
        An ``acb`` ball; its radius shrinks as ``precision`` grows
    """
    with working_precision(precision):
        return embed_current(a)
