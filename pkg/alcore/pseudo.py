"""
Exact pseudo-eigenvalues from an exact Atkin-Lehner matrix.

For a newform f of level N with coefficient field L, write f over its
trace basis, f = sum_j y_j Tr(a^j f) with y_j the trace-dual basis of L.
The matrix of W_N on that trace basis has entries in Q(zeta_Q), so the
constant c in f|W_N = c * conj(f) (the q^1 coefficient of f|W_N) is

    c = sum_j y_j (x) w_j,   w_j = sum_l (W_t)_{jl} Tr(a^l),

an element of L (x) Q(zeta_Q).
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

from flint import acb, arb

from alcore.reconstruct import ALMatrix
from core.exceptions import InconsistentResultError, NotInSpaceError
from core.precision import working_precision
from cyclo.embedding import embed_current, rational_ball
from cyclo.numbers import CycNum
from newforms.numerics import embed_all
from newforms.records import NewformRecord
from qexp.numberfield import NFElement
from zlinalg.cyclomatrix import CycMatrix
from zlinalg.rational import inverse

logger = logging.getLogger(__name__)

CHECK_PRECISION = 128
CHECK_TERMS = 20


@dataclass(frozen=True)
class ExactPseudoEigenvalue:
    """c = sum y_j w_j, with f|W_N = c conj(f) and |c|^2 = N^k."""

    label: str
    k: int
    N: int
    terms: Tuple[Tuple[NFElement, CycNum], ...]

    def embed(self, root: acb) -> acb:
        """sigma(c) for the embedding a -> root, at the current precision."""
        total = acb(0)
        for y, w in self.terms:
            total += y.embed(root) * embed_current(w)
        return total

    def as_cycnum(self) -> Optional[CycNum]:
        """c itself when it lies in Q(zeta_Q), i.e. every y_j is rational."""
        if not all(y.is_rational() for y, _ in self.terms):
            return None
        total = CycNum.zero(1)
        for y, w in self.terms:
            total = total + w * y.coeffs[0]
        return total

    def pseudo_eigenvalue(self, root: acb) -> acb:
        """lambda_N(sigma f) = (-1)^k c / N^(k/2)."""
        return (-1) ** self.k * self.embed(root) / arb(self.N).sqrt() ** self.k


def _trace_dual_basis(rec: NewformRecord) -> List[NFElement]:
    L = rec.field
    g = L.degree
    a = L.generator()
    gram = [[(a ** (m + l)).trace() for l in range(g)] for m in range(g)]
    return [L.element(row) for row in inverse(gram)]


def _locate(al: ALMatrix, rec: NewformRecord) -> int:
    offset = 0
    for blk in al.basis.blocks:
        if blk.form.label == rec.label and blk.M == al.N:
            return offset
        offset += blk.dimension
    raise NotInSpaceError(f"newform {rec.label} of level {rec.level} is not an eigenblock of level {al.N}")


def trace_basis_action(al: ALMatrix, offset: int, size: int) -> CycMatrix:
    """W_N on the trace basis of the block at ``offset``."""
    Q, g = al.Q, al.g
    R = CycMatrix.from_rows(al.basis.R, Q)
    R_inv = CycMatrix.from_rows(al.basis.R_inverse(), Q)
    rows = CycMatrix(Q, R_inv.rows[offset:offset + size])
    full = rows @ al.W @ R
    for row in full.rows:
        if any(not row[j].is_zero() for j in range(g) if not offset <= j < offset + size):
            raise InconsistentResultError("W_N does not preserve the newform's block")
    return CycMatrix(Q, tuple(row[offset:offset + size] for row in full.rows))


def exact_pseudo_eigenvalue(al: ALMatrix, rec: NewformRecord) -> ExactPseudoEigenvalue:
    """
    c with f|W_N = c conj(f), exactly, for a newform f of level N = al.N.

    Raises:
        NotInSpaceError: f is not one of the basis blocks at level N
        InconsistentResultError: |c|^2 != N^k, or c conj(f) disagrees with
            f|W_N on the first coefficients of some embedding
    """
    if al.basis.R is None:
        raise NotInSpaceError("the Z-basis carries no eigenblock data")
    if rec.level != al.N:
        raise NotInSpaceError(f"newform {rec.label} has level {rec.level}, not {al.N}")
    size = rec.degree
    offset = _locate(al, rec)
    W_t = trace_basis_action(al, offset, size)
    L = rec.field
    a = L.generator()
    power_traces = [(a ** l).trace() for l in range(size)]
    duals = _trace_dual_basis(rec)
    terms = []
    for j, y in enumerate(duals):
        w = CycNum.zero(al.Q)
        for l in range(size):
            w = w + W_t[j, l] * power_traces[l]
        terms.append((y, w))
    c = ExactPseudoEigenvalue(rec.label, al.k, al.N, tuple(terms))
    _check(c, rec, W_t)
    return c


def _check(c: ExactPseudoEigenvalue, rec: NewformRecord, W_t: CycMatrix) -> None:
    k, N = c.k, c.N
    size = rec.degree
    a = rec.field.generator()
    n_terms = min(CHECK_TERMS, rec.n_max)
    duals = _trace_dual_basis(rec)
    with working_precision(CHECK_PRECISION):
        target = arb(N) ** k
        for ef in embed_all(rec, CHECK_PRECISION):
            value = c.embed(ef.root)
            if target not in abs(value) ** 2:
                raise InconsistentResultError(f"newform {rec.label}: |c|^2 does not contain {N}^{k}")
            y = [d.embed(ef.root) for d in duals]
            for n in range(1, n_terms + 1):
                traces = [(a ** l * rec.coefficient(n)).trace() for l in range(size)]
                image = acb(0)
                for j in range(size):
                    for l in range(size):
                        image += y[j] * embed_current(W_t[j, l]) * rational_ball(traces[l])
                if not (image - value * ef.coefficient(n).conjugate()).overlaps(acb(0)):
                    raise InconsistentResultError(
                        f"newform {rec.label}: f|W_N != c conj(f) at q^{n}"
                    )
    logger.info(f"Exact pseudo-eigenvalue of {rec.label} verified on {n_terms} coefficients")
