"""
Nebentypus of a newform, recovered from its coefficients.

For primes p not dividing M the Hecke relation
a_{p^2} = a_p^2 - eps(p) p^(k-1) determines eps(p) in L; the values at
enough primes generate (Z/MZ)^x and extend multiplicatively.

The exponent is k-1 because a_p is the eigenvalue of the classical T_p,
so for k = 2 the term is eps(p) p. Writing p^(k-2) here is a common slip;
it would make the weight-2 relation read a_{p^2} = a_p^2 - eps(p).
"""

import logging
from math import isqrt
from typing import Dict, Sequence, TYPE_CHECKING, Tuple

from sympy import divisors, primerange

from core.exceptions import NewformDataError
from cyclo.numbers import CycNum, euler_phi, lcm
from cyclo.units import multiplicative_order
from qexp.numberfield import NFElement, NumberField

if TYPE_CHECKING:
    from newforms.records import NewformRecord

logger = logging.getLogger(__name__)


def character_order(value: NFElement, modulus: int) -> int:
    """Order of eps(d), a root of unity of order dividing phi(modulus)."""
    for r in divisors(euler_phi(modulus)):
        if (value ** int(r)).is_one():
            return int(r)
    raise NewformDataError(f"{value} is not a root of unity of order dividing phi({modulus})")


def _root_of_unity_order(value: CycNum) -> int:
    for r in divisors(lcm(2, value.conductor)):
        if value ** int(r) == 1:
            return int(r)
    raise NewformDataError(f"supplied character value {value} is not a root of unity")


def character_closure(
    M: int,
    generators: Sequence[Tuple[int, NFElement]],
    field: NumberField,
    label: str = "",
) -> Dict[int, NFElement]:
    """
    Extend values at generating residues multiplicatively to (Z/MZ)^x.

    Raises:
        NewformDataError: the residues do not generate, or two products of
            generators reach one residue with different values
    """
    table = {1 % M: field.one()}
    frontier = [1 % M]
    while frontier:
        x = frontier.pop()
        for p, eps in generators:
            y = (x * p) % M
            value = table[x] * eps
            if y not in table:
                table[y] = value
                frontier.append(y)
            elif table[y] != value:
                raise NewformDataError(
                    f"newform {label}: character values are not multiplicative (p={p})"
                )
    if len(table) != euler_phi(M):
        raise NewformDataError(
            f"newform {label}: residues {sorted({p % M for p, _ in generators})} "
            f"do not generate (Z/{M}Z)^x"
        )
    return table


def nebentypus_from_coeffs(rec: "NewformRecord") -> Dict[int, NFElement]:
    """
    The nebentypus of ``rec`` as a table d -> eps(d) over (Z/MZ)^x.

    Args:
        rec: Newform record with coefficients through a_{p^2} for enough primes

    Returns:
        eps(d) in L for every unit d modulo M (for M = 1 the single entry 0)

    Raises:
        NewformDataError: too few primes to generate (Z/MZ)^x, a value that is
            not a root of unity, a non-multiplicative extension, or a mismatch
            with the supplied character values
    """
    M, k, L = rec.level, rec.weight, rec.field
    if M == 1:
        return {0: L.one()}

    generators = []
    for p in primerange(2, isqrt(rec.n_max) + 1):
        if M % p == 0:
            continue
        a_p, a_p2 = rec.coefficient(p), rec.coefficient(p * p)
        eps = (a_p * a_p - a_p2) / (p ** (k - 1))
        order = multiplicative_order(p % M, M)
        if not (eps ** order).is_one():
            raise NewformDataError(
                f"newform {rec.label}: a_{p * p} is inconsistent with a_{p} at p={p} "
                f"(eps(p) is not a root of unity of order dividing {order})"
            )
        generators.append((p, eps))

    table = character_closure(M, generators, L, rec.label)

    for d, supplied in rec.char_values.items():
        derived = table.get(d % M)
        if derived is None:
            raise NewformDataError(f"newform {rec.label}: character value given at non-unit {d}")
        if isinstance(supplied, CycNum):
            if _root_of_unity_order(supplied) != character_order(derived, M):
                raise NewformDataError(
                    f"newform {rec.label}: supplied eps({d}) has the wrong order"
                )
        elif supplied != derived:
            raise NewformDataError(f"newform {rec.label}: supplied eps({d}) disagrees with a_p data")
    logger.debug(f"Derived nebentypus of {rec.label} from {len(generators)} primes")
    return table
