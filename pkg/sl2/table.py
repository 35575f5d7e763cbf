"""
The right action of SL2(Z) and GL2(Z/NZ) on S_k(Gamma(N)).

With Gamma = Gamma_0(N^2) cap Gamma_1(N), relabeling q -> q_N sends the
Z-basis f_1..f_g of S_k(Gamma) to a Z-basis h_1..h_g of S_k(Gamma(N)),
and h_j|S = N^-k sum_l W_jl h_l for the Atkin-Lehner matrix W at level
N^2. T acts by the twist a_n -> zeta_N^n a_n on q_N-expansions, and
[[1, 0], [0, d]] applies sigma_d to the coefficients.

Vectors are coordinates in the h-basis and matrices act on the right:
(sum v_j h_j)|gamma = sum_l (v M(gamma))_l h_l.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Dict, Optional, Sequence, Tuple

from alcore.pipeline import compute_al_matrix
from alcore.reconstruct import ALMatrix
from alcore.spaces import CuspSpace
from core.exceptions import InconsistentResultError, InputError, MalformedMatrixError
from core.precision import PrecisionPolicy
from cyclo.numbers import CycNum
from cyclo.units import congruence_units
from newforms.loader import NewformStore
from qexp.series import QExp
from sl2.elements import GL2Element, lift_sl2, word_decompose, word_runs
from zlinalg.cyclomatrix import CycMatrix
from zlinalg.rational import inverse

logger = logging.getLogger(__name__)

Vector = Tuple[CycNum, ...]


@dataclass(frozen=True)
class ActionTable:
    """
    S_k(Gamma(N), Z) with the matrices of S and T.

    ``A`` holds a_1..a_n of each h_j (the HNF coefficient matrix of the
    level N^2 basis); the T-twist is applied through its pivot columns.
    """

    N: int
    k: int
    basis: Tuple[QExp, ...]
    A: Tuple[Tuple[int, ...], ...]
    S_matrix: CycMatrix
    report: Dict[str, bool] = field(default_factory=dict, compare=False)
    _twists: Dict[int, CycMatrix] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.N < 1:
            raise InputError(f"level must be positive, got {self.N}")
        g = len(self.basis)
        if len(self.A) != g or self.S_matrix.nrows != g or self.S_matrix.ncols != g:
            raise MalformedMatrixError(
                f"basis of size {g} against A with {len(self.A)} rows and a "
                f"{self.S_matrix.nrows}x{self.S_matrix.ncols} S matrix"
            )
        if self.S_matrix.conductor != self.N:
            object.__setattr__(self, 'S_matrix', self.S_matrix.lift(self.N))

    @classmethod
    def from_al_matrix(cls, al: ALMatrix) -> "ActionTable":
        """
        Build the table from W at level N^2 on Gamma_0(N^2) cap Gamma_1(N).

        Raises:
            InputError: ``al`` is not attached to such a space
        """
        level = al.N
        N = isqrt(level)
        if N * N != level:
            raise InputError(f"level {level} is not a square")
        expected = congruence_units(level, N)
        if al.basis.space.H != expected:
            raise InputError(f"{al.basis.space} is not Gamma_0({level}) cap Gamma_1({N})")
        k = al.k
        forms = tuple(QExp(f.coeffs, width=N, weight=k, level=N) for f in al.basis.forms)
        S = al.W.lift(N).scale(Fraction(1, N ** k)) if al.g else CycMatrix(N, ())
        return cls(N, k, forms, al.basis.A, S)

    # -- shape ----------------------------------------------------------------

    @property
    def g(self) -> int:
        return len(self.basis)

    @property
    def conductor(self) -> int:
        return self.N

    @property
    def pivots(self) -> Tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(row) if x) for row in self.A)

    @property
    def pivot_inverse(self):
        cached = self.__dict__.get('_pivot_inverse')
        if cached is None:
            block = [[Fraction(row[p]) for p in self.pivots] for row in self.A]
            cached = inverse(block) if block else []
            object.__setattr__(self, '_pivot_inverse', cached)
        return cached

    # -- generators -----------------------------------------------------------

    def coerce_vector(self, v: Sequence) -> Vector:
        if len(v) != self.g:
            raise MalformedMatrixError(f"vector of length {len(v)} for a space of dimension {self.g}")
        return tuple(CycNum.coerce(x, self.N) for x in v)

    def apply_S(self, v: Vector) -> Vector:
        if not self.g:
            return ()
        return tuple(CycNum.coerce(x, self.N) for x in self.S_matrix.vector_mul(v))

    def apply_T(self, v: Vector, power: int = 1) -> Vector:
        """v M(T^power), through the diagonal twist on the pivot coefficients."""
        N = self.N
        if power % N == 0 or not self.g:
            return v
        twisted = []
        for p in self.pivots:
            c = CycNum.zero(N)
            for x, row in zip(v, self.A):
                if row[p]:
                    c = c + x * row[p]
            twisted.append(c * CycNum.zeta(N, power * (p + 1)))
        P_inv = self.pivot_inverse
        out = []
        for i in range(self.g):
            acc = CycNum.zero(N)
            for c, row in zip(twisted, P_inv):
                if row[i]:
                    acc = acc + c * row[i]
            out.append(acc)
        return tuple(out)

    def T_matrix(self, power: int = 1) -> CycMatrix:
        """Dense matrix of T^power, built on first use."""
        power %= self.N
        if power not in self._twists:
            rows = []
            for i in range(self.g):
                e = tuple(CycNum.one(self.N) if j == i else CycNum.zero(self.N) for j in range(self.g))
                rows.append(self.apply_T(e, power))
            self._twists[power] = CycMatrix(self.N, tuple(rows))
        return self._twists[power]

    def twisted_coefficients(self, power: int = 1) -> CycMatrix:
        """a_n(h_j) zeta_N^(power n) on every known column."""
        N = self.N
        return CycMatrix(N, tuple(
            tuple(CycNum.zeta(N, power * (n + 1)) * x for n, x in enumerate(row))
            for row in self.A
        ))

    def __str__(self):
        return f"ActionTable(N={self.N}, k={self.k}, g={self.g})"


def act(v: Sequence, A: GL2Element, table: ActionTable) -> Vector:
    """
    v|A for A in GL2(Z/NZ).

    A = gamma [[1, 0], [0, d]] with gamma in SL2(Z/NZ); gamma is lifted to
    SL2(Z), written as a word in S and T and applied letter by letter, then
    sigma_d acts on the coordinates (the h_j have rational coefficients).

    Raises:
        InputError: A has another modulus than the table
        MalformedMatrixError: v has the wrong length
    """
    if A.N != table.N:
        raise InputError(f"matrix modulo {A.N} acting on a level {table.N} table")
    w = table.coerce_vector(v)
    gamma, d = A.split_det()
    word = word_decompose(lift_sl2(gamma))
    for letter, power in word_runs(word):
        w = table.apply_S(w) if letter == 'S' else table.apply_T(w, power)
    if d != 1 % table.N:
        w = tuple(x.galois(d) for x in w)
    return w


def action_matrix(A: GL2Element, table: ActionTable) -> CycMatrix:
    """Rows are the images of the basis vectors; sigma_d-semilinear when det A != 1."""
    N = table.N
    rows = []
    for i in range(table.g):
        e = tuple(CycNum.one(N) if j == i else CycNum.zero(N) for j in range(table.g))
        rows.append(act(e, A, table))
    return CycMatrix(N, tuple(rows))


def verify_table(table: ActionTable) -> Dict[str, bool]:
    """
    Exact relations of the representation.

    - s_squared: S^2 = (-1)^k I
    - braid: (S T)^3 = (-1)^k I
    - t_order: T^N = I
    - twist_closed: the T-twist of every h_j lies in their span
    """
    g, N, k = table.g, table.N, table.k
    if g == 0:
        return {'s_squared': True, 'braid': True, 't_order': True, 'twist_closed': True}
    sign = CycMatrix.identity(g, N).scale((-1) ** k)
    S = table.S_matrix
    T = table.T_matrix(1)
    A = CycMatrix.from_rows(table.A, N)
    checks = {
        's_squared': S @ S == sign,
        'braid': (S @ T) ** 3 == sign,
        't_order': T ** N == CycMatrix.identity(g, N),
        'twist_closed': T @ A == table.twisted_coefficients(1),
    }
    if all(checks.values()):
        logger.info(f"{table}: S and T relations hold")
    else:
        logger.error(f"{table}: relations failed: {[n for n, ok in checks.items() if not ok]}")
    return checks


def build_action_table(
    N: int,
    k: int,
    store: NewformStore,
    policy: Optional[PrecisionPolicy] = None,
    margin=None,
    strict: bool = True,
) -> ActionTable:
    """
    The action table of S_k(Gamma(N)), from W at level N^2.

    With ``strict=False`` failed checks are left in ``table.report``.

    Raises:
        MissingFixtureError: a level M | N^2 has no fixture
        PrecisionExhaustedError: W could not be certified
        InconsistentResultError: W failed verification, or S and T violate
            the SL2 relations
    """
    space = CuspSpace.gamma0_gamma1(k, N * N, N)
    al, al_report = compute_al_matrix(space, store, policy, margin, strict)
    table = ActionTable.from_al_matrix(al)
    checks = verify_table(table)
    if strict and not all(checks.values()):
        raise InconsistentResultError(f"{table}: SL2 relations fail: {checks}")
    table.report.update({f"W.{name}": ok for name, ok in al_report.checks.items()})
    table.report.update(checks)
    logger.info(f"Built {table} from {space}")
    return table
