"""
The distinguished Z-basis of S_k(Gamma, Z).

The trace forms of every eigenblock span the space over Q and generate a
finite-index sublattice of the integral forms. ``saturate`` removes the
index one prime at a time (a mod-p dependency among the rows, divided by
p), then puts the basis in Hermite normal form on the coefficients
a_1..a_s, s the Sturm bound. The pivot product of that form is alpha.

Alongside the forms we track the exact change of basis R with
f = R t, t the concatenated block trace bases, which the diamond and
Atkin-Lehner computations need.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from sympy import factorint

from alcore.spaces import CuspSpace
from core.exceptions import InsufficientPrecisionError, NonIntegralError, RankDeficientError
from newforms.blocks import EigenBlock, enumerate_blocks, space_dimension
from newforms.loader import NewformStore
from qexp.series import QExp
from qexp.sturm import SturmBound
from zlinalg.normalforms import hnf, invariant_factors, pivot_product
from zlinalg.rational import Matrix, identity, inverse, left_kernel_mod_p, matmul

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ZBasis:
    """
    f_1..f_g with integer coefficients; A holds a_1..a_n of each, in HNF.

    ``R`` (f = R t) and ``blocks`` are present when the basis was built
    from eigenblocks; a basis read back from a cache carries neither.
    """

    space: CuspSpace
    forms: Tuple[QExp, ...]
    A: Tuple[Tuple[int, ...], ...]
    alpha: int
    blocks: Tuple[EigenBlock, ...] = ()
    R: Optional[Tuple[Tuple[Fraction, ...], ...]] = field(default=None, compare=False)

    @property
    def g(self) -> int:
        return len(self.forms)

    @property
    def n(self) -> int:
        return len(self.A[0]) if self.A else 0

    @property
    def pivots(self) -> Tuple[int, ...]:
        """Column index of the leading entry of each row of A."""
        return tuple(next(j for j, x in enumerate(row) if x) for row in self.A)

    def pivot_block(self) -> Matrix:
        """A restricted to its pivot columns (upper triangular, invertible)."""
        return [[Fraction(row[p]) for p in self.pivots] for row in self.A]

    def R_inverse(self) -> Matrix:
        return inverse(self.R)


def trace_span(blk: EigenBlock, prec: int) -> List[QExp]:
    """
    alpha_c(Tr(a^j f)) for each branch c of ``blk`` and j < [L:Q], known to ``prec`` terms.

    Raises:
        InsufficientPrecisionError: the newform has too few coefficients
        NonIntegralError: a trace form is not integral
    """
    rec = blk.form
    span = []
    for c in blk.branches:
        for j in range(blk.degree):
            t = rec.trace_form(j).degeneracy(c)
            if t.prec < prec:
                raise InsufficientPrecisionError(
                    f"{blk}: {rec.n_max} coefficients of {rec.label} give {t.prec} terms, {prec} needed"
                )
            t = QExp(t.coeffs[:prec], weight=rec.weight, level=blk.N)
            if not t.is_integral():
                raise NonIntegralError(f"{blk}: trace form {j} has non-integral coefficients")
            span.append(t)
    return span


def _combine(coeffs: Sequence[int], rows: Sequence[Sequence]) -> List:
    out = [0] * len(rows[0])
    for c, row in zip(coeffs, rows):
        if c:
            out = [x + c * y for x, y in zip(out, row)]
    return out


def saturate(
    spanning: Sequence[QExp],
    s: SturmBound,
    space: Optional[CuspSpace] = None,
    blocks: Sequence[EigenBlock] = (),
) -> ZBasis:
    """
    Saturate the lattice spanned by ``spanning`` inside the integral forms.

    Args:
        spanning: Linearly independent integral expansions, known past index s
        s: Sturm bound of the ambient space
        space: Descriptor stored on the result
        blocks: Eigenblocks the spanning forms came from, in order

    Returns:
        The HNF basis, with R expressing it over ``spanning``

    Raises:
        RankDeficientError: the expansions are dependent on a_1..a_s
        NonIntegralError: a division by p leaves a fraction (too few coefficients)
    """
    g = len(spanning)
    if space is None:
        space = CuspSpace.gamma1(s.k, s.N)
    if g == 0:
        return ZBasis(space, (), (), 1, tuple(blocks), ())
    ncols = max(s.s, 1)
    prec = min(f.prec for f in spanning)
    if prec <= ncols:
        raise InsufficientPrecisionError(f"{prec} terms known, Sturm bound needs {ncols + 1}")

    full = [f.integer_coeffs(1, prec) for f in spanning]
    C: Matrix = identity(g)
    steps = 0
    while True:
        rows = [r[:ncols] for r in full]
        factors = invariant_factors(rows)
        if len(factors) < g:
            raise RankDeficientError(f"{g} spanning forms have rank {len(factors)} on a_1..a_{ncols}")
        largest = factors[-1]
        if largest == 1:
            break
        p = min(factorint(largest))
        c = left_kernel_mod_p(rows, p)[0]
        i0 = c.index(1)
        combined = _combine(c, full)
        if any(x % p for x in combined):
            raise NonIntegralError(
                f"saturation at p={p}: combination is not divisible beyond the Sturm bound; "
                f"more coefficients are needed"
            )
        full[i0] = [x // p for x in combined]
        C[i0] = [x / p for x in _combine(c, C)]
        steps += 1
        logger.debug(f"Saturation step {steps}: divided row {i0} by {p}")

    result = hnf([r[:ncols] for r in full])
    U = result.U
    forms_full = [_combine(u, full) for u in U]
    R = matmul(U, C)
    H = tuple(tuple(int(x) for x in row) for row in result.H[:g])
    alpha = pivot_product(H)
    forms = tuple(
        QExp((Fraction(0),) + tuple(Fraction(x) for x in row), weight=s.k, level=s.N)
        for row in forms_full
    )
    logger.info(f"Saturated {g} forms in {steps} step(s); alpha = {alpha}")
    return ZBasis(
        space, forms, H, alpha, tuple(blocks),
        tuple(tuple(Fraction(x) for x in row) for row in R),
    )


def build_zbasis(space: CuspSpace, store: NewformStore, extra_terms: int = 0) -> ZBasis:
    """
    The Z-basis of S_k(Gamma) from the newform data in ``store``.

    Raises:
        MissingFixtureError: a level M | N has no fixture
        RankDeficientError: the trace forms do not have full rank
    """
    blocks = enumerate_blocks(space.N, space.k, space.H, store)
    s = space.sturm
    prec = max(s.s, 1) + 1 + extra_terms
    if blocks:
        available = min(b.form.n_max + 1 for b in blocks)
        prec = max(prec, min(available, 2 * prec))
    spanning = []
    for blk in blocks:
        spanning.extend(trace_span(blk, prec))
    logger.info(f"{space}: {space_dimension(blocks)} trace forms to {prec} terms")
    return saturate(spanning, s, space, blocks)
