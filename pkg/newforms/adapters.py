"""
Import adapters: full coefficient lists from prime eigenvalues.

- ``expand_from_ap``: a_n for n <= n_max from a_p and the nebentypus, by
  multiplicativity and the Hecke recursion at prime powers
- ``parse_aplist_line``: one line of an elliptic-curve a_p table
  ("N class a_2 a_3 a_5 ..."), with "+"/"-" at bad primes standing for
  the local W-eigenvalue
"""

import logging
from typing import Callable, Dict, List, Tuple

from sympy import factorint, prime, primerange

from core.exceptions import NewformDataError
from qexp.numberfield import NFElement, NumberField

logger = logging.getLogger(__name__)


def expand_from_ap(
    level: int,
    weight: int,
    field: NumberField,
    ap: Dict[int, NFElement],
    epsilon: Callable[[int], NFElement],
    n_max: int,
) -> Tuple[NFElement, ...]:
    """
    Coefficients a_1..a_{n_max} of a newform from its prime eigenvalues.

    Args:
        level: M
        weight: k
        field: Coefficient field L
        ap: a_p for every prime p <= n_max
        epsilon: The nebentypus, called on primes p not dividing M
        n_max: Number of coefficients to produce

    Returns:
        (a_1, ..., a_{n_max})

    Raises:
        NewformDataError: a needed a_p is missing
    """
    missing = [p for p in primerange(2, n_max + 1) if p not in ap]
    if missing:
        raise NewformDataError(f"a_p missing for primes {missing[:5]} (need all p <= {n_max})")
    a: List[NFElement] = [field.zero(), field.one()] + [None] * (n_max - 1)
    for n in range(2, n_max + 1):
        factors = factorint(n)
        p = min(factors)
        r = factors[p]
        pr = p ** r
        if pr != n:
            a[n] = a[pr] * a[n // pr]
        elif r == 1:
            a[n] = ap[p]
        elif level % p == 0:
            a[n] = ap[p] * a[n // p]
        else:
            a[n] = ap[p] * a[n // p] - epsilon(p) * (p ** (weight - 1)) * a[n // (p * p)]
    return tuple(a[1:])


def _ap_token(token: str, p: int, level: int) -> int:
    if token in ('+', '-'):
        if level % (p * p) == 0:
            return 0
        return -1 if token == '+' else 1
    try:
        return int(token)
    except ValueError as e:
        raise NewformDataError(f"bad a_p entry {token!r} at p={p}") from e


def parse_aplist_line(line: str) -> Tuple[int, str, Dict[int, int]]:
    """
    Parse "N class a_2 a_3 ..." into (N, class, {p: a_p}).

    Trailing "+(q)"/"-(q)" entries for large bad primes carry no a_p and
    are skipped.
    """
    tokens = line.split()
    if len(tokens) < 3:
        raise NewformDataError(f"a_p line too short: {line!r}")
    try:
        level = int(tokens[0])
    except ValueError as e:
        raise NewformDataError(f"bad level in a_p line: {line!r}") from e
    iso = tokens[1]
    values = [t for t in tokens[2:] if '(' not in t]
    primes = [prime(i + 1) for i in range(len(values))]
    ap = {p: _ap_token(t, p, level) for p, t in zip(primes, values)}
    logger.debug(f"Parsed {len(ap)} a_p values for {level}{iso}")
    return level, iso, ap
