"""
Indices of congruence subgroups, Sturm bounds and cusp-form dimensions.

The dimension formulas (genus of X_0(N), X_1(N) plus the usual weight-k
correction) are used as an independent check on newform block
enumeration.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from sympy import divisors, factorint, jacobi_symbol

from core.exceptions import InputError
from cyclo.numbers import euler_phi


@dataclass(frozen=True)
class SturmBound:
    """s = floor(k/12 * [SL2(Z) : Gamma_1(N)])."""

    k: int
    N: int
    s: int


def _check(k: int, N: int):
    if k < 1 or N < 1:
        raise InputError(f"weight and level must be positive, got k={k}, N={N}")


def gamma1_index(N: int) -> int:
    """[SL2(Z) : Gamma_1(N)]."""
    if N == 1:
        return 1
    if N == 2:
        return 6
    index = Fraction(N * N)
    for p in factorint(N):
        index *= 1 - Fraction(1, p * p)
    return int(index)


def gamma0_index(N: int) -> int:
    """[SL2(Z) : Gamma_0(N)] = N prod (1 + 1/p)."""
    index = Fraction(N)
    for p in factorint(N):
        index *= 1 + Fraction(1, p)
    return int(index)


def sturm_bound(k: int, N: int) -> SturmBound:
    _check(k, N)
    return SturmBound(k, N, (k * gamma1_index(N)) // 12)


# =============================================================================
# DIMENSIONS
# =============================================================================

def _nu2(N: int) -> int:
    if N % 4 == 0:
        return 0
    count = 1
    for p in factorint(N):
        count *= 1 if p == 2 else 1 + jacobi_symbol(p - 1, p)
    return count


def _nu3(N: int) -> int:
    if N % 9 == 0:
        return 0
    count = 1
    for p in factorint(N):
        if p == 2:
            count *= 0
        elif p == 3:
            count *= 1
        else:
            count *= 1 + jacobi_symbol((-3) % p, p)
    return count


def _cusps0(N: int) -> int:
    return sum(euler_phi(gcd(d, N // d)) for d in divisors(N))


def dim_cusp_gamma0(k: int, N: int) -> int:
    """dim S_k(Gamma_0(N)) for even k >= 2."""
    _check(k, N)
    if k % 2:
        return 0
    mu = gamma0_index(N)
    nu2, nu3, cusps = _nu2(N), _nu3(N), _cusps0(N)
    genus = 1 + Fraction(mu, 12) - Fraction(nu2, 4) - Fraction(nu3, 3) - Fraction(cusps, 2)
    if k == 2:
        return int(genus)
    return int(
        (k - 1) * (genus - 1)
        + (Fraction(k, 2) - 1) * cusps
        + nu2 * (k // 4)
        + nu3 * (k // 3)
    )


def dim_cusp_gamma1(k: int, N: int) -> int:
    """
    dim S_k(Gamma_1(N)) for N >= 5, k >= 2 (no elliptic points, regular cusps).

    Smaller levels fall back to the Gamma_0 formula, to which they are
    equal at even weight.
    """
    _check(k, N)
    if N < 5:
        if N <= 2 or k % 2 == 0:
            return dim_cusp_gamma0(k, N) if k % 2 == 0 else 0
        raise InputError(f"odd weight dimension for level {N} is not supported")
    mu = Fraction(gamma1_index(N), 2)
    cusps = Fraction(sum(euler_phi(d) * euler_phi(N // d) for d in divisors(N)), 2)
    genus = 1 + mu / 12 - cusps / 2
    if k == 2:
        return int(genus)
    return int((k - 1) * (genus - 1) + (Fraction(k, 2) - 1) * cusps)
