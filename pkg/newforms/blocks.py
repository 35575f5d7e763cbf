"""
Atkin-Lehner-Li blocks of S_k(Gamma) and the operators acting on them.

S_k(Gamma) is the sum over M | N, over Galois orbits f of level M with
eps_f trivial on H, and over d | N/M with d^2 <= N/M, of the span of
alpha_d(sigma f) and alpha_e(sigma f), e = N/M/d. Each block has two
presentations:

- the exact trace basis t_{c,j} = alpha_c(Tr(a^j f)), branch-major
- the embedded basis e_{c,i} = alpha_c(sigma_i f)

related by t = V e with V the block Vandermonde matrix of the roots.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, List, Sequence, Tuple

from flint import acb, acb_mat, arb
from sympy import divisors

from core.exceptions import InputError
from core.precision import working_precision
from newforms.loader import NewformStore
from newforms.numerics import EmbeddedNewform, PseudoEigenvalue, conjugate_index
from newforms.records import NewformRecord

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EigenBlock:
    """The span of alpha_d and alpha_e of one Galois orbit at level N."""

    form: NewformRecord
    N: int
    d: int
    e: int

    @property
    def M(self) -> int:
        return self.form.level

    @property
    def weight(self) -> int:
        return self.form.weight

    @property
    def degree(self) -> int:
        return self.form.degree

    @property
    def branches(self) -> Tuple[int, ...]:
        return (self.d,) if self.d == self.e else (self.d, self.e)

    @property
    def dimension(self) -> int:
        return self.degree * len(self.branches)

    def __str__(self):
        return f"{self.form.label}[d={self.d}, e={self.e}]"


def enumerate_blocks(N: int, k: int, H: Iterable[int], store: NewformStore) -> List[EigenBlock]:
    """
    The blocks of S_k(Gamma) for Gamma with diamond subgroup H mod N.

    Ordered by (M ascending, orbit order, d ascending).

    Raises:
        MissingFixtureError: some M | N has no fixture at weight k
    """
    H = tuple(H)
    blocks = []
    for M in divisors(N):
        for rec in store.load(int(M), k):
            if rec.is_trivial_on(H):
                blocks.extend(mf_space(rec, N))
    logger.info(
        f"Level {N}, weight {k}: {len(blocks)} block(s), dimension {space_dimension(blocks)}"
    )
    return blocks


def mf_space(rec: NewformRecord, N: int) -> List[EigenBlock]:
    """The blocks spanned by the degeneracies of one orbit at level N."""
    if N % rec.level:
        raise InputError(f"level {rec.level} of {rec.label} does not divide {N}")
    quotient = N // rec.level
    return [
        EigenBlock(rec, N, int(d), quotient // int(d))
        for d in divisors(quotient) if d * d <= quotient
    ]


def space_dimension(blocks: Sequence[EigenBlock]) -> int:
    return sum(b.dimension for b in blocks)


# =============================================================================
# DIAMOND OPERATORS
# =============================================================================

def block_diamond_action(blk: EigenBlock, m: int) -> List[List[Fraction]]:
    """
    <m> on the trace basis of ``blk``, exactly.

    t_{c,j} = alpha_c(Tr(a^j f)) goes to alpha_c(Tr(a^j eps_f(m) f)); row j of
    the multiplication matrix of eps_f(m) holds its coordinates.
    """
    if gcd(m, blk.N) != 1:
        raise InputError(f"{m} is not a unit modulo {blk.N}")
    local = blk.form.epsilon(m).mult_matrix()
    g = blk.degree
    size = blk.dimension
    rows = [[Fraction(0)] * size for _ in range(size)]
    for b in range(len(blk.branches)):
        for i in range(g):
            for j in range(g):
                rows[b * g + i][b * g + j] = local[i][j]
    return rows


def block_diamond_balls(blk: EigenBlock, m: int, embedded: Sequence[EmbeddedNewform]) -> acb_mat:
    """<m> on the embedded basis: diagonal with entries sigma_i(eps_f(m))."""
    g = blk.degree
    out = acb_mat(blk.dimension, blk.dimension)
    for b in range(len(blk.branches)):
        for i, ef in enumerate(embedded):
            out[b * g + i, b * g + i] = ef.epsilon(m)
    return out


# =============================================================================
# EMBEDDED BASIS
# =============================================================================

def block_vandermonde(blk: EigenBlock, embedded: Sequence[EmbeddedNewform]) -> acb_mat:
    """V with t_{c,j} = sum_i V[(c,j),(c,i)] e_{c,i}, i.e. entries root_i^j."""
    g = blk.degree
    out = acb_mat(blk.dimension, blk.dimension)
    with working_precision(embedded[0].precision):
        for b in range(len(blk.branches)):
            for i, ef in enumerate(embedded):
                power = acb(1)
                for j in range(g):
                    out[b * g + j, b * g + i] = power
                    power *= ef.root
    return out


def embedded_coefficient(ef: EmbeddedNewform, c: int, n: int) -> acb:
    """The n-th coefficient of alpha_c(sigma_i f)."""
    if n % c:
        return acb(0)
    return ef.coefficient(n // c)


def block_wn_action(
    blk: EigenBlock,
    embedded: Sequence[EmbeddedNewform],
    lambdas: Sequence[PseudoEigenvalue],
) -> acb_mat:
    """
    W_N on the embedded basis of ``blk``; row r holds the image of basis vector r.

    With c_i = lambda_M(sigma_i f) (-1)^k M^(k/2) and j the conjugate embedding
    of i: e_{d,i} -> e^k c_i e_{e,j} and e_{e,i} -> d^k c_i e_{d,j}.

    Raises:
        ConjugateMatchError: a conjugate embedding is not a root
        PrecisionError: conjugate roots are not separated
    """
    k, M, g = blk.weight, blk.M, blk.degree
    if len(embedded) != g or len(lambdas) != g:
        raise InputError(f"block {blk} needs {g} embeddings and pseudo-eigenvalues")
    out = acb_mat(blk.dimension, blk.dimension)
    with working_precision(embedded[0].precision):
        scale = (-1) ** k * arb(M).sqrt() ** k
        for i in range(g):
            j = conjugate_index(embedded, i)
            c_i = lambdas[i].value * scale
            if blk.d == blk.e:
                out[i, j] = c_i * blk.d ** k
            else:
                out[i, g + j] = c_i * blk.e ** k
                out[g + i, j] = c_i * blk.d ** k
    return out
