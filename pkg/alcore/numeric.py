"""
Certified numerical approximation of the Atkin-Lehner matrix.

For each block the embedded basis e carries the ball matrix of W_N, and
t = V e with V the block Vandermonde matrix. The coefficients of
f_j|W_N at the pivot columns of A are therefore

    C_P = R * diag_b(V_b * W_b * E_b)

where E_b holds the coefficient balls of e at those columns, and
W = C_P * A_P^-1 with A_P the (exact, triangular) pivot block of A.
"""

import logging
from fractions import Fraction
from typing import Callable, Dict, Sequence

from flint import acb, acb_mat

from alcore.basis import ZBasis
from alcore.diamonds import DiamondRep
from core.exceptions import InconsistentResultError, MalformedMatrixError, PrecisionError
from core.precision import working_precision
from cyclo.embedding import rational_ball
from cyclo.units import lift_unit, units
from newforms.blocks import (
    EigenBlock,
    block_diamond_balls,
    block_vandermonde,
    block_wn_action,
    embedded_coefficient,
)
from newforms.numerics import EmbeddedNewform, PseudoEigenvalue
from zlinalg.rational import Matrix, inverse

logger = logging.getLogger(__name__)

Embeddings = Dict[str, Sequence[EmbeddedNewform]]
Lambdas = Dict[str, Sequence[PseudoEigenvalue]]


def exact_to_balls(rows: Matrix) -> acb_mat:
    """An exact rational matrix as a ball matrix at the current precision."""
    if not rows:
        return acb_mat(0, 0)
    out = acb_mat(len(rows), len(rows[0]))
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            if x:
                out[i, j] = acb(rational_ball(Fraction(x)))
    return out


def _coefficient_balls(blk: EigenBlock, embedded: Sequence[EmbeddedNewform], columns: Sequence[int]) -> acb_mat:
    """E_b: row (c, i) holds the coefficients of alpha_c(sigma_i f) at a_{col+1}."""
    g = blk.degree
    out = acb_mat(blk.dimension, len(columns))
    for b, c in enumerate(blk.branches):
        for i, ef in enumerate(embedded):
            for col, j in enumerate(columns):
                out[b * g + i, col] = embedded_coefficient(ef, c, j + 1)
    return out


def _assemble(
    basis: ZBasis,
    embeddings: Embeddings,
    block_operator: Callable[[EigenBlock, Sequence[EmbeddedNewform]], acb_mat],
) -> acb_mat:
    """R * diag_b(V_b * X_b * E_b) * A_P^-1 for a per-block operator X."""
    g = basis.g
    columns = basis.pivots
    stacked = acb_mat(g, g)
    offset = 0
    for blk in basis.blocks:
        embedded = embeddings[blk.form.label]
        if len(embedded) != blk.degree:
            raise MalformedMatrixError(f"{blk}: {len(embedded)} embeddings for degree {blk.degree}")
        part = block_vandermonde(blk, embedded) * block_operator(blk, embedded) * _coefficient_balls(
            blk, embedded, columns
        )
        for i in range(blk.dimension):
            for j in range(g):
                stacked[offset + i, j] = part[i, j]
        offset += blk.dimension
    if offset != g:
        raise MalformedMatrixError(f"blocks have total dimension {offset}, basis has {g} forms")
    return exact_to_balls([list(r) for r in basis.R]) * stacked * exact_to_balls(inverse(basis.pivot_block()))


def numeric_W(basis: ZBasis, embeddings: Embeddings, lambdas: Lambdas, precision: int) -> acb_mat:
    """
    W as a g x g ball matrix: f_j|W_N = sum_k W_jk f_k.

    Args:
        basis: Z-basis built from eigenblocks
        embeddings: All embeddings of every block newform, by label
        lambdas: Pseudo-eigenvalues of those embeddings (at their own level)
        precision: Working precision in bits

    Raises:
        PrecisionError: conjugate embeddings could not be separated
        ConjugateMatchError: a conjugate embedding is missing
    """
    if basis.g == 0:
        return acb_mat(0, 0)
    with working_precision(precision):
        W = _assemble(
            basis,
            embeddings,
            lambda blk, embedded: block_wn_action(blk, embedded, lambdas[blk.form.label]),
        )
    logger.debug(f"Numeric W ({basis.g}x{basis.g}) at {precision} bits, max radius {max_radius(W):.3e}")
    return W


def numeric_diamond(basis: ZBasis, embeddings: Embeddings, m: int, precision: int) -> acb_mat:
    """D_m approximated through the embedded blocks."""
    with working_precision(precision):
        return _assemble(basis, embeddings, lambda blk, embedded: block_diamond_balls(blk, m, embedded))


def max_radius(balls: acb_mat) -> float:
    radius = 0.0
    for i in range(balls.nrows()):
        for j in range(balls.ncols()):
            x = balls[i, j]
            radius = max(radius, float(x.real.rad()), float(x.imag.rad()))
    return radius


def contains_exact(balls: acb_mat, rows) -> bool:
    return all(
        acb(rational_ball(Fraction(rows[i][j]))) in balls[i, j]
        for i in range(balls.nrows())
        for j in range(balls.ncols())
    )


def cross_check_diamonds(basis: ZBasis, rep: DiamondRep, embeddings: Embeddings, precision: int) -> None:
    """
    Check every exact D_d against its numerical approximation.

    Raises:
        PrecisionError: some ball is not finite
        InconsistentResultError: an exact D_d lies outside its ball
    """
    N = basis.space.N
    for d in units(rep.Q):
        m = lift_unit(d, rep.Q, N)
        balls = numeric_diamond(basis, embeddings, m, precision)
        if not all(balls[i, j].is_finite() for i in range(balls.nrows()) for j in range(balls.ncols())):
            raise PrecisionError(f"numerical D_{m} is not finite at {precision} bits")
        if not contains_exact(balls, rep[d]):
            raise InconsistentResultError(f"exact D_{m} disagrees with its numerical approximation")
