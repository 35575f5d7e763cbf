"""
Trace maps and the trace-pairing reconstruction of Q(zeta_n).

The pairing (x, y) -> Tr(x y) is nondegenerate, so x is determined by the
rationals Tr(zeta^b x), b = 0..phi(n)-1. ``trace_reconstruct`` inverts the
Gram matrix Tr(zeta^(a+b)), cached per conductor.
"""

from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Tuple, Union

from core.exceptions import CyclotomicError
from cyclo.numbers import CycNum, euler_phi, ramanujan_sum
from zlinalg.rational import inverse


def trace_to_Q(a: Union[CycNum, int, Fraction]) -> Fraction:
    """Tr_{Q(zeta_n)/Q}(a); rationals are treated as elements of Q."""
    if isinstance(a, CycNum):
        return a.trace()
    return Fraction(a)


@lru_cache(maxsize=None)
def gram_inverse(n: int) -> Tuple[Tuple[Fraction, ...], ...]:
    """Inverse of the Gram matrix G[b][a] = Tr(zeta_n^(a+b))."""
    phi = euler_phi(n)
    gram = [[ramanujan_sum(n, a + b) for a in range(phi)] for b in range(phi)]
    return tuple(tuple(row) for row in inverse(gram))


def trace_reconstruct(traces: Sequence[Union[int, Fraction]], n: int) -> CycNum:
    """
    The unique x in Q(zeta_n) with Tr(zeta_n^b x) = traces[b].

    Args:
        traces: phi(n) rationals
        n: conductor

    Returns:
        x as a CycNum of conductor n
    """
    phi = euler_phi(n)
    if len(traces) != phi:
        raise CyclotomicError(f"expected {phi} traces for conductor {n}, got {len(traces)}")
    ginv = gram_inverse(n)
    t = [Fraction(v) for v in traces]
    return CycNum(n, tuple(sum((g * v for g, v in zip(row, t)), Fraction(0)) for row in ginv))


def trace_vector(a: CycNum) -> Tuple[Fraction, ...]:
    """[Tr(zeta^b a) for b in range(phi(n))]; the inverse of ``trace_reconstruct``."""
    n = a.conductor
    return tuple((CycNum.zeta(n, b) * a).trace() for b in range(euler_phi(n)))
