"""
The unit groups (Z/nZ)^x.

Residues are represented in range(n); for n = 1 the single unit is 0.
"""

from functools import lru_cache
from math import gcd
from typing import FrozenSet, Iterable, Tuple

from core.exceptions import CyclotomicError


@lru_cache(maxsize=None)
def units(n: int) -> Tuple[int, ...]:
    """Sorted representatives of (Z/nZ)^x."""
    if n < 1:
        raise CyclotomicError(f"modulus must be positive, got {n}")
    return tuple(a for a in range(n) if gcd(a, n) == 1)


def is_unit(a: int, n: int) -> bool:
    return gcd(a, n) == 1


def unit_inverse(a: int, n: int) -> int:
    if not is_unit(a, n):
        raise CyclotomicError(f"{a} is not a unit modulo {n}")
    return pow(a, -1, n) if n > 1 else 0


def multiplicative_order(a: int, n: int) -> int:
    if not is_unit(a, n):
        raise CyclotomicError(f"{a} is not a unit modulo {n}")
    one = 1 % n
    x, k = a % n, 1
    while x != one:
        x = (x * a) % n
        k += 1
    return k


def subgroup(n: int, generators: Iterable[int]) -> FrozenSet[int]:
    """The subgroup of (Z/nZ)^x generated by ``generators``."""
    gens = [g % n for g in generators]
    for g in gens:
        if not is_unit(g, n):
            raise CyclotomicError(f"{g} is not a unit modulo {n}")
    seen = {1 % n}
    frontier = [1 % n]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = (x * g) % n
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return frozenset(seen)


@lru_cache(maxsize=None)
def unit_generators(n: int) -> Tuple[int, ...]:
    """A deterministic generating set of (Z/nZ)^x, chosen greedily by size."""
    full = set(units(n))
    gens = []
    current = subgroup(n, [])
    for a in units(n):
        if current == full:
            break
        if a not in current:
            gens.append(a)
            current = subgroup(n, gens)
    return tuple(gens)


def congruence_units(N: int, M: int) -> FrozenSet[int]:
    """{h in (Z/NZ)^x : h = 1 mod M}, the diamond subgroup of Gamma_0(N) cap Gamma_1(M)."""
    if N % M:
        raise CyclotomicError(f"{M} does not divide {N}")
    return frozenset(h for h in units(N) if h % M == 1 % M)


def lift_unit(d: int, Q: int, N: int) -> int:
    """The smallest unit m modulo N with m = d mod Q (Q divides N)."""
    if N % Q:
        raise CyclotomicError(f"{Q} does not divide {N}")
    for t in range(N // Q):
        m = (d % Q) + t * Q
        if is_unit(m, N):
            return m % N
    raise CyclotomicError(f"{d} mod {Q} has no unit lift modulo {N}")
