"""
Complex embeddings of newforms and their pseudo-eigenvalues.

Everything here is ball arithmetic (python-flint ``arb``/``acb``); a ball
that is too wide to decide a question raises ``PrecisionError`` so the
caller can retry at higher precision.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import List, Optional, Sequence, Tuple

from flint import acb, arb

from core.exceptions import ConjugateMatchError, InputError, PrecisionError
from core.precision import working_precision
from cyclo.embedding import rational_ball
from newforms.records import NewformRecord

logger = logging.getLogger(__name__)

# Evaluation points tried for the pseudo-eigenvalue, closest to 1 first.
B_SCHEDULE = tuple(Fraction(n, 10) for n in (10, 11, 9, 12, 8, 13, 7, 14))


@dataclass(frozen=True)
class EmbeddedNewform:
    """sigma_i(f): the newform under the embedding a -> roots[i]."""

    source: NewformRecord
    embedding_index: int
    root: acb
    coeff_balls: Tuple[acb, ...]
    precision: int

    def coefficient(self, n: int) -> acb:
        """sigma_i(a_n); a_0 = 0."""
        if n == 0:
            return acb(0)
        return self.coeff_balls[n - 1]

    def epsilon(self, m: int) -> acb:
        """sigma_i(eps_f(m))."""
        with working_precision(self.precision):
            return self.source.epsilon(m).embed(self.root)


def embed(rec: NewformRecord, index: int, precision: int) -> EmbeddedNewform:
    """
    Embed ``rec`` through the ``index``-th root of its field polynomial.

    Raises:
        InputError: no such embedding
    """
    with working_precision(precision):
        roots = rec.field.roots()
        if not 0 <= index < len(roots):
            raise InputError(f"newform {rec.label} has {len(roots)} embeddings, asked for #{index}")
        root = roots[index]
        balls = tuple(c.embed(root) for c in rec.an)
    return EmbeddedNewform(rec, index, root, balls, precision)


def embed_all(rec: NewformRecord, precision: int) -> Tuple[EmbeddedNewform, ...]:
    """All embeddings of ``rec``, in root order."""
    with working_precision(precision):
        roots = rec.field.roots()
        return tuple(
            EmbeddedNewform(rec, i, root, tuple(c.embed(root) for c in rec.an), precision)
            for i, root in enumerate(roots)
        )


def conjugate_index(embedded: Sequence[EmbeddedNewform], i: int) -> int:
    """
    Index j with sigma_j(f) = complex conjugate of sigma_i(f).

    Raises:
        PrecisionError: several roots overlap the conjugate ball
        ConjugateMatchError: none does
    """
    target = embedded[i].root.conjugate()
    matches = [j for j, ef in enumerate(embedded) if ef.root.overlaps(target)]
    if len(matches) == 1:
        return matches[0]
    label = embedded[i].source.label
    if matches:
        raise PrecisionError(f"newform {label}: conjugate of embedding {i} not separated from {matches}")
    raise ConjugateMatchError(f"newform {label}: conjugate of embedding {i} is not a root")


# =============================================================================
# TAIL BOUNDS
# =============================================================================

def tail_bound_ball(k: int, x: arb, n0: int) -> arb:
    """
    Upper bound, as a ball, for sum_{n > n0} d(n) n^(k/2) x^n.

    Uses d(n) n^(k/2) <= n^m with m = 1 + ceil(k/2): the terms n^m x^n are
    summed explicitly while their ratio is >= 1, then the rest is dominated
    by a geometric series whose ratio only decreases.
    """
    xu = arb(x.upper())
    if not xu < 1:
        raise InputError(f"tail bound needs 0 < x < 1, got {x}")
    m = 1 + ceil(k / 2)
    n = max(n0, 0) + 1
    head = arb(0)
    while True:
        term = arb(n) ** m * xu ** n
        ratio = (arb(n + 1) / n) ** m * xu
        if ratio < 1:
            return head + term / (1 - ratio)
        head += term
        n += 1


def tail_bound(k: int, x: float, n0: int) -> float:
    """
    A certified float upper bound for sum_{n > n0} d(n) n^(k/2) x^n.

    Raises:
        InputError: x outside (0, 1)
    """
    if not 0 < x < 1:
        raise InputError(f"tail bound needs 0 < x < 1, got {x}")
    with working_precision(64):
        bound = tail_bound_ball(k, arb(x), n0).upper()
    # float() rounds to nearest; pad by a relative ulp margin
    return float(bound) * (1 + 2 ** -40) + 1e-300


# =============================================================================
# PSEUDO-EIGENVALUES
# =============================================================================

@dataclass(frozen=True)
class PseudoEigenvalue:
    """lambda_N(f) as a certified complex ball."""

    value: acb
    b_used: Fraction
    terms_used: int
    precision: int

    def has_unit_modulus(self) -> bool:
        """Whether |value| can be 1."""
        return arb(1) in abs(self.value)

    def radius(self) -> float:
        return float(max(self.value.real.rad(), self.value.imag.rad()))


def _error_disk(radius: arb) -> acb:
    return acb(arb(0, radius), arb(0, radius))


def pseudo_eigenvalue(
    ef: EmbeddedNewform,
    b: Fraction,
    precision: Optional[int] = None,
    terms: Optional[int] = None,
) -> PseudoEigenvalue:
    """
    Approximate lambda_N(sigma_i f) at the evaluation parameter ``b``.

    lambda = i^k b^(-k) [sum a_n exp(-2 pi n/(b sqrt N))] / [sum conj(a_n) exp(-2 pi n b/sqrt N)],
    each series truncated after ``terms`` coefficients with a certified tail.

    Args:
        ef: Embedded newform of level N
        b: Positive rational evaluation parameter
        precision: Working precision (defaults to the embedding's)
        terms: Coefficients to sum (defaults to all known)

    Raises:
        PrecisionError: the denominator ball contains 0
        InputError: b <= 0, or more terms requested than known
    """
    rec = ef.source
    b = Fraction(b)
    if b <= 0:
        raise InputError(f"evaluation parameter must be positive, got {b}")
    precision = precision or ef.precision
    terms = rec.n_max if terms is None else terms
    if not 1 <= terms <= rec.n_max:
        raise InputError(f"newform {rec.label}: {terms} terms requested, {rec.n_max} known")
    k, N = rec.weight, rec.level

    with working_precision(precision):
        b_ball = rational_ball(b)
        sqrt_n = arb(N).sqrt()
        two_pi = 2 * arb.pi()
        x1 = (-two_pi / (b_ball * sqrt_n)).exp()
        x2 = (-two_pi * b_ball / sqrt_n).exp()

        num = acb(0)
        den = acb(0)
        p1, p2 = acb(1), acb(1)
        for n in range(1, terms + 1):
            p1 *= x1
            p2 *= x2
            a_n = ef.coefficient(n)
            num += a_n * p1
            den += a_n.conjugate() * p2
        num += _error_disk(tail_bound_ball(k, x1, terms))
        den += _error_disk(tail_bound_ball(k, x2, terms))

        if 0 in den:
            raise PrecisionError(f"newform {rec.label}: denominator series not separated from 0 at b={b}")
        value = acb(0, 1) ** k * (b_ball ** -k) * num / den

    logger.debug(f"lambda({rec.label}, #{ef.embedding_index}) at b={b}: {value}")
    return PseudoEigenvalue(value, b, terms, precision)


def approximate_pseudo_eigenvalue(
    ef: EmbeddedNewform,
    precision: Optional[int] = None,
    terms: Optional[int] = None,
    schedule: Sequence[Fraction] = B_SCHEDULE,
) -> PseudoEigenvalue:
    """
    ``pseudo_eigenvalue`` at the first b of ``schedule`` with a usable denominator.

    Raises:
        PrecisionError: every b failed
    """
    failures: List[Fraction] = []
    for b in schedule:
        try:
            return pseudo_eigenvalue(ef, b, precision, terms)
        except PrecisionError:
            failures.append(b)
    raise PrecisionError(
        f"newform {ef.source.label}: denominator contains 0 for every b in {[str(b) for b in failures]}"
    )
