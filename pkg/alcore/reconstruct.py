"""
Exact Atkin-Lehner matrices from certified approximations.

W has entries in Q(zeta_Q) and sigma_d(W) = W D_d, so the rational
matrices beta_b = Tr(zeta_Q^b W) = W * sum_d zeta_Q^(db) D_d can be read
off numerically. B * alpha * beta_b is an integer matrix; once every ball
pins down a unique integer, W follows entrywise from the trace pairing.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from django.conf import settings
from flint import acb, acb_mat, arb

from alcore.basis import ZBasis
from alcore.bounds import denominator_bounds
from alcore.diamonds import DiamondRep
from alcore.numeric import exact_to_balls
from core.exceptions import MalformedMatrixError, PrecisionError
from core.utils import parse_rational
from cyclo.embedding import rational_ball, zeta_ball
from cyclo.numbers import euler_phi
from cyclo.trace import trace_reconstruct
from cyclo.units import units
from zlinalg.cyclomatrix import CycMatrix

logger = logging.getLogger(__name__)

RationalRows = Tuple[Tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class ALMatrix:
    """W_N on a Z-basis: f_j|W_N = sum_k W_jk f_k."""

    W: CycMatrix
    basis: ZBasis
    diamonds: DiamondRep
    betas: Tuple[RationalRows, ...]
    denom_bound: int
    c_bound: int

    @property
    def Q(self) -> int:
        return self.diamonds.Q

    @property
    def g(self) -> int:
        return self.basis.g

    @property
    def k(self) -> int:
        return self.basis.space.k

    @property
    def N(self) -> int:
        return self.basis.space.N


def integer_margin() -> Fraction:
    return parse_rational(getattr(settings, 'AL_INTEGER_MARGIN', '1/4'))


def diamond_sum(rep: DiamondRep, b: int) -> acb_mat:
    """sum_{d in (Z/QZ)^x} zeta_Q^(d b) D_d at the current precision."""
    Q, g = rep.Q, rep.g
    zeta = zeta_ball(Q)
    total = acb_mat(g, g)
    for d in units(Q):
        total += exact_to_balls([list(r) for r in rep[d]]) * zeta ** (d * b)
    return total


def round_certified(x: acb, margin: arb, where: str) -> int:
    """
    The unique integer in the ball ``x``.

    Raises:
        PrecisionError: the imaginary part excludes 0, the radius reaches
            ``margin``, or the ball holds no unique integer
    """
    if not x.is_finite() or 0 not in x.imag:
        raise PrecisionError(f"{where}: ball {x} is not real")
    if not x.real.rad() < margin or not x.imag.rad() < margin:
        raise PrecisionError(f"{where}: radius {float(x.real.rad()):.3e} too large to round")
    n = x.real.unique_fmpz()
    if n is None:
        raise PrecisionError(f"{where}: ball {x} holds no unique integer")
    return int(n)


def reconstruct_W(
    numW: acb_mat,
    rep: DiamondRep,
    basis: ZBasis,
    margin: Optional[Fraction] = None,
) -> ALMatrix:
    """
    Recover W in M_g(Q(zeta_Q)) from its certified approximation.

    Must run inside the ``working_precision`` numW was computed at.

    Raises:
        PrecisionError: some scaled beta entry cannot be rounded with certainty
    """
    k, N, g = basis.space.k, basis.space.N, basis.g
    B, C = denominator_bounds(k, N)
    Q = rep.Q
    if g == 0:
        return ALMatrix(CycMatrix(Q, ()), basis, rep, ((),) * euler_phi(Q), B, C)
    if numW.nrows() != g or numW.ncols() != g:
        raise MalformedMatrixError(f"numerical W is {numW.nrows()}x{numW.ncols()}, basis has {g} forms")
    margin = integer_margin() if margin is None else Fraction(margin)
    margin_ball = rational_ball(margin)
    scale = B * basis.alpha

    betas = []
    for b in range(euler_phi(Q)):
        scaled = numW * diamond_sum(rep, b) * scale
        beta = tuple(
            tuple(
                Fraction(round_certified(scaled[i, j], margin_ball, f"beta_{b}[{i},{j}]"), scale)
                for j in range(g)
            )
            for i in range(g)
        )
        betas.append(beta)

    W = CycMatrix(
        Q,
        tuple(
            tuple(trace_reconstruct([beta[i][j] for beta in betas], Q) for j in range(g))
            for i in range(g)
        ),
    )
    logger.info(f"Reconstructed W over Q(zeta_{Q}) from {len(betas)} trace matrices (B*alpha = {scale})")
    return ALMatrix(W, basis, rep, tuple(betas), B, C)
