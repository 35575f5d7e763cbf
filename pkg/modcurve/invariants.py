"""
The invariant subspace S_2(Gamma(N), Q(zeta_N))^G.

G acts Q-linearly (sigma_d-semilinearly over Q(zeta_N)), so the fixed
space is computed over Q on the g*phi(N) vectors zeta_N^t h_i. Its
integral forms are the saturation of that space in Z^(g phi(N)); the
final basis is the HNF (or, on request, an LLL-reduced basis) of their
zeta-split q-expansion coefficients.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import List, Sequence, Tuple

from flint import fmpz_mat

from core.exceptions import InconsistentResultError, InputError
from cyclo.numbers import CycNum, euler_phi
from modcurve.groups import GroupSpec, validate_group
from qexp.series import QExp
from sl2.table import ActionTable, act
from zlinalg.cyclomatrix import split_vector
from zlinalg.normalforms import hnf
from zlinalg.rational import kernel, left_kernel, matmul, solve_left

logger = logging.getLogger(__name__)

Vector = Tuple[CycNum, ...]


@dataclass(frozen=True)
class InvariantBasis:
    """f_1..f_g in q_w spanning the G-invariant forms; ``coordinates`` are in the h-basis."""

    N: int
    width: int
    forms: Tuple[QExp, ...]
    coordinates: Tuple[Vector, ...]
    ambient_dimension: int
    lll: bool = False

    @property
    def genus(self) -> int:
        return len(self.forms)

    @property
    def prec(self) -> int:
        return min((f.prec for f in self.forms), default=0)

    def describe(self) -> dict:
        return {
            'modulus': self.N,
            'width': self.width,
            'genus': self.genus,
            'ambient_dimension': self.ambient_dimension,
            'lll': self.lll,
        }


def _unit_vector(g: int, i: int, t: int, N: int) -> Vector:
    return tuple(CycNum.zeta(N, t) if j == i else CycNum.zero(N) for j in range(g))


def _from_split(v: Sequence, g: int, N: int) -> Vector:
    phi = euler_phi(N)
    return tuple(CycNum(N, tuple(v[i * phi:(i + 1) * phi])) for i in range(g))


def fixed_space(table: ActionTable, group: GroupSpec) -> List[List[Fraction]]:
    """Q-basis (zeta-split coordinates, echelonized) of the vectors fixed by every generator."""
    g, N = table.g, table.N
    phi = euler_phi(N)
    dim = g * phi
    if dim == 0:
        return []
    stacked = [[] for _ in range(dim)]
    for A in group.generators:
        d = A.det
        for i in range(g):
            row = act(_unit_vector(g, i, 0, N), A, table)
            # (zeta^t e_i)|A = zeta^(d t) (e_i|A)
            for t in range(phi):
                r = i * phi + t
                zeta = CycNum.zeta(N, d * t)
                image = split_vector([zeta * x for x in row], N)
                image[r] -= 1
                stacked[r].extend(image)
        logger.debug(f"Applied generator {A} to {dim} basis vectors")
    if not stacked[0]:
        return [[Fraction(int(i == j)) for j in range(dim)] for i in range(dim)]
    return left_kernel(stacked)


def saturate_subspace(vectors: Sequence[Sequence[Fraction]]) -> List[List[int]]:
    """A Z-basis of span_Q(vectors) cap Z^m."""
    if not vectors:
        return []
    m = len(vectors[0])
    complement = kernel(vectors, m)
    if not complement:
        return [[int(i == j) for j in range(m)] for i in range(m)]
    cols = []
    for v in complement:
        den = lcm(*(x.denominator for x in v))
        cols.append([int(x * den) for x in v])
    # integer v with v . c = 0 for every complement vector c
    result = hnf([[c[i] for c in cols] for i in range(m)])
    return [list(row) for row in result.U[result.rank:]]


def _coefficient_rows(coords: Sequence[Sequence[int]], table: ActionTable, prec: int) -> List[List[int]]:
    """Zeta-split coefficients a_1..a_(prec-1) of sum_i v_i h_i for each coordinate row."""
    g, N = table.g, table.N
    phi = euler_phi(N)
    rows = []
    for v in coords:
        out = []
        for n in range(1, prec):
            acc = [0] * phi
            for i, h in enumerate(table.basis):
                a = int(h.coeffs[n])
                if a:
                    for t in range(phi):
                        acc[t] += a * v[i * phi + t]
            out.extend(acc)
        rows.append(out)
    return rows


def _lll_rows(rows: List[List[int]]) -> List[List[int]]:
    reduced = fmpz_mat(rows).lll()
    return [[int(reduced[i, j]) for j in range(reduced.ncols())] for i in range(reduced.nrows())]


def invariant_subspace(table: ActionTable, group: GroupSpec, lll: bool = False) -> InvariantBasis:
    """
    The Z[zeta_N]-integral basis of S_2(Gamma(N), Q(zeta_N))^G, in q_w.

    Raises:
        InputError: the table is not weight 2 or has another level
        GroupValidationError: G fails validation
        InconsistentResultError: a basis form is not fixed by a generator
    """
    if table.k != 2:
        raise InputError(f"canonical models need weight 2, the table has weight {table.k}")
    if group.N != table.N:
        raise InputError(f"group modulo {group.N} against a level {table.N} table")
    if not group.validated:
        group = validate_group(group)
    g, N = table.g, table.N
    phi = euler_phi(N)
    ambient = g * phi

    fixed = fixed_space(table, group)
    if not fixed:
        logger.info(f"No G-invariant forms in S_2(Gamma({N})) (ambient dimension {ambient})")
        return InvariantBasis(N, group.w, (), (), ambient, lll)

    coords = saturate_subspace(fixed)
    prec = min(h.prec for h in table.basis)
    coeffs = _coefficient_rows(coords, table, prec)
    result = hnf(coeffs)
    coeffs = result.H[:len(coords)]
    coords = [list(map(int, row)) for row in matmul(result.U, coords)]
    if lll:
        reduced = _lll_rows(coeffs)
        change = solve_left(coeffs, reduced)
        coords = [[int(x) for x in row] for row in matmul(change, coords)]
        coeffs = reduced

    forms = []
    vectors = []
    for v, c in zip(coords, coeffs):
        series = (CycNum.zero(N),) + tuple(
            CycNum(N, tuple(c[n * phi:(n + 1) * phi])) for n in range(prec - 1)
        )
        forms.append(QExp(series, width=N, weight=2, level=N).rescale_width(group.w))
        vectors.append(_from_split(v, g, N))

    for A in group.generators:
        for v in vectors:
            if act(v, A, table) != v:
                raise InconsistentResultError(f"invariant form is moved by {A}")
    logger.info(
        f"G-invariant subspace of S_2(Gamma({N})): dimension {len(forms)} of {ambient}, width {group.w}"
    )
    return InvariantBasis(N, group.w, tuple(forms), tuple(vectors), ambient, lll)
