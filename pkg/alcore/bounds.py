from typing import Tuple

from sympy import factorint

from core.exceptions import InputError


def denominator_bounds(k: int, N: int) -> Tuple[int, int]:
    """
    (B, C) with B = prod_{p | N} p^ceil(k/(p-1)) and C = prod_{p | N} p^floor(k/(p-1)).

    B times the pivot product bounds the denominators of the Atkin-Lehner
    matrix; C is the sharper bound expected for Gamma_0-type spaces.
    """
    if k < 1 or N < 1:
        raise InputError(f"weight and level must be positive, got k={k}, N={N}")
    B = C = 1
    for p in factorint(N):
        B *= p ** valuation_exponent(k, p)
        C *= p ** (k // (p - 1))
    return B, C


def valuation_exponent(k: int, p: int) -> int:
    """ceil(k/(p-1)), the exponent of p in B."""
    return -(-k // (p - 1))
