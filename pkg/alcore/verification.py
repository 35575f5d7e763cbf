"""
Exact invariant checks on a reconstructed Atkin-Lehner matrix.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List

from sympy import factorint

from alcore.bounds import valuation_exponent
from alcore.reconstruct import ALMatrix
from cyclo.units import unit_generators, unit_inverse, units
from zlinalg.cyclomatrix import CycMatrix

logger = logging.getLogger(__name__)

# Reported, but not required for a result to pass.
INFORMATIONAL = frozenset({'c_bound_integral', 'valuation_lower_bound'})


@dataclass
class VerificationReport:
    checks: Dict[str, bool] = field(default_factory=dict)
    details: Dict[str, str] = field(default_factory=dict)

    def record(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks[name] = ok
        if detail:
            self.details[name] = detail

    @property
    def passed(self) -> bool:
        return all(ok for name, ok in self.checks.items() if name not in INFORMATIONAL)

    @property
    def failures(self) -> List[str]:
        return [name for name, ok in self.checks.items() if not ok and name not in INFORMATIONAL]

    def to_dict(self) -> dict:
        return {
            'passed': self.passed,
            'checks': dict(sorted(self.checks.items())),
            'details': dict(sorted(self.details.items())),
        }


def _diamond(al: ALMatrix, d: int) -> CycMatrix:
    return CycMatrix.from_rows(al.diamonds[d], al.Q)


def _p_integral(M: CycMatrix, p: int) -> bool:
    return all(c.denominator % p != 0 for row in M.rows for x in row for c in x.coeffs)


def verify_W(al: ALMatrix) -> VerificationReport:
    """
    Run every exact check on ``al``; nothing is raised, failures are reported.

    - w_squared: W^2 = (-1)^k N^k I
    - galois: sigma_d(W) = W D_d for generators d of (Z/QZ)^x
    - diamond_commutation: D_d W = W D_{d^-1}
    - denominator: B * alpha * W is integral over Z[zeta_Q]
    - c_bound_integral: C * alpha * W is integral (informational)
    - valuation_lower_bound: p^ceil(k/(p-1)) (f_j|W_N) is p-integral for p | N
      on the known coefficients (informational)
    """
    report = VerificationReport()
    W, k, N, Q, g = al.W, al.k, al.N, al.Q, al.g
    if g == 0:
        for name in ('w_squared', 'galois', 'diamond_commutation', 'denominator'):
            report.record(name, True, "empty space")
        return report

    target = CycMatrix.identity(g, Q).scale((-1) ** k * N ** k)
    report.record('w_squared', W @ W == target)

    bad = [d for d in unit_generators(Q) if W.galois(d) != W @ _diamond(al, d)]
    report.record('galois', not bad, f"fails for d in {bad}" if bad else "")

    bad = [d for d in units(Q) if _diamond(al, d) @ W != W @ _diamond(al, unit_inverse(d, Q))]
    report.record('diamond_commutation', not bad, f"fails for d in {bad}" if bad else "")

    report.record('denominator', W.scale(al.denom_bound * al.basis.alpha).is_integral())
    report.record('c_bound_integral', W.scale(al.c_bound * al.basis.alpha).is_integral())

    A = CycMatrix.from_rows(al.basis.A, Q)
    images = W @ A
    bad = [
        p for p in factorint(N)
        if not _p_integral(images.scale(p ** valuation_exponent(k, p)), p)
    ]
    report.record('valuation_lower_bound', not bad, f"fails at p in {bad}" if bad else "")

    if report.passed:
        logger.info(f"W verified: level {N}, weight {k}, g = {g}, Q = {Q}")
    else:
        logger.error(f"W verification failed: {report.failures}")
    return report
