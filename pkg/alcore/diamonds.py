"""
Diamond operators on the Z-basis.

<m> acts on each block through the nebentypus, so on the trace basis it is
block diagonal with exact rational blocks; conjugating by R gives D_m on
f_1..f_g. Q is the smallest divisor of N such that D_m only depends on
m mod Q, and the family is indexed by (Z/QZ)^x.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from sympy import divisors

from alcore.basis import ZBasis
from core.exceptions import InconsistentResultError, NonIntegralError
from cyclo.units import congruence_units, lift_unit, unit_generators, unit_inverse, units
from newforms.blocks import EigenBlock, block_diamond_action
from zlinalg.normalforms import int_det, int_identity, int_matmul
from zlinalg.rational import Matrix, matmul

logger = logging.getLogger(__name__)

IntRows = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class DiamondRep:
    """D_d in GL_g(Z) for d in (Z/QZ)^x, with f_j|<d> = sum_k (D_d)_{jk} f_k."""

    N: int
    Q: int
    matrices: Dict[int, IntRows]

    def __getitem__(self, d: int) -> IntRows:
        return self.matrices[d % self.Q]

    @property
    def g(self) -> int:
        return len(self.matrices[1 % self.Q])

    def as_lists(self, d: int) -> List[List[int]]:
        return [list(row) for row in self[d]]


def _block_diagonal(parts: Sequence[Matrix]) -> Matrix:
    size = sum(len(p) for p in parts)
    out = [[Fraction(0)] * size for _ in range(size)]
    offset = 0
    for part in parts:
        for i, row in enumerate(part):
            for j, x in enumerate(row):
                out[offset + i][offset + j] = x
        offset += len(part)
    return out


def trace_diamond(blocks: Sequence[EigenBlock], m: int) -> Matrix:
    """<m> on the concatenated trace basis."""
    return _block_diagonal([block_diamond_action(blk, m) for blk in blocks])


def diamond_conductor(blocks: Sequence[EigenBlock], N: int) -> int:
    """The least Q | N with eps_f(m) = 1 for every block and every m = 1 mod Q."""
    forms = {blk.form.label: blk.form for blk in blocks}.values()
    for Q in divisors(N):
        kernel = congruence_units(N, int(Q))
        if all(rec.is_trivial_on(kernel) for rec in forms):
            return int(Q)
    return N


def _to_integer_matrix(rows: Matrix, m: int) -> IntRows:
    out = []
    for row in rows:
        if any(Fraction(x).denominator != 1 for x in row):
            raise NonIntegralError(f"D_{m} has non-integral entries: basis or newform data is corrupt")
        out.append(tuple(int(x) for x in row))
    return tuple(out)


def diamond_matrices(basis: ZBasis) -> DiamondRep:
    """
    The family D_d, d in (Z/QZ)^x, computed exactly.

    Raises:
        NonIntegralError: some D_d is not integral
        InconsistentResultError: some D_d is not unimodular, or the family
            is not a homomorphism
    """
    N = basis.space.N
    g = basis.g
    if g == 0:
        return DiamondRep(N, 1, {0: ()})
    blocks = basis.blocks
    Q = diamond_conductor(blocks, N)
    R = [list(row) for row in basis.R]
    R_inv = basis.R_inverse()
    matrices = {}
    for d in units(Q):
        m = lift_unit(d, Q, N)
        D = _to_integer_matrix(matmul(matmul(R, trace_diamond(blocks, m)), R_inv), m)
        if abs(int_det(D)) != 1:
            raise InconsistentResultError(f"D_{m} has determinant {int_det(D)}, expected +-1")
        matrices[d] = D
    rep = DiamondRep(N, Q, matrices)
    check_homomorphism(rep)
    logger.info(f"Diamond operators: Q = {Q}, {len(matrices)} matrices")
    return rep


def check_homomorphism(rep: DiamondRep) -> None:
    """
    D_1 = I and D_a D_b = D_{ab} for a among the generators of (Z/QZ)^x.

    Raises:
        InconsistentResultError: a relation fails
    """
    Q, g = rep.Q, rep.g
    if [list(r) for r in rep[1]] != int_identity(g):
        raise InconsistentResultError("D_1 is not the identity")
    for a in unit_generators(Q):
        for b in units(Q):
            if int_matmul(rep[a], rep[b]) != rep.as_lists(a * b):
                raise InconsistentResultError(f"D_{a} D_{b} != D_{a * b % Q}")
        if int_matmul(rep[a], rep[unit_inverse(a, Q)]) != int_identity(g):
            raise InconsistentResultError(f"D_{a} is not inverse to D_{unit_inverse(a, Q)}")


def diamond_order_ok(rep: DiamondRep, d: int, order: int) -> bool:
    """Whether D_d^order = I."""
    acc = int_identity(rep.g)
    for _ in range(order):
        acc = int_matmul(acc, rep[d])
    return acc == int_identity(rep.g)
