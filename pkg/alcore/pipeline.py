"""
End-to-end computation of the Atkin-Lehner matrix of S_k(Gamma).

Exact stages (Z-basis, diamond matrices) run once; the numerical stages
(embeddings, pseudo-eigenvalues, W as balls, integer recognition) run
under the escalation policy, doubling the working precision and the
number of coefficients summed on every retry. A result is only returned
once every exact check passes.
"""

import logging
from typing import Dict, Optional, Tuple

from alcore.basis import ZBasis, build_zbasis
from alcore.diamonds import DiamondRep, diamond_matrices
from alcore.numeric import cross_check_diamonds, numeric_W
from alcore.reconstruct import ALMatrix, reconstruct_W
from alcore.spaces import CuspSpace
from alcore.verification import VerificationReport, verify_W
from core.exceptions import InconsistentResultError, PrecisionError, PrecisionExhaustedError
from core.precision import PrecisionPolicy, working_precision
from newforms.loader import NewformStore
from newforms.numerics import approximate_pseudo_eigenvalue, embed_all

logger = logging.getLogger(__name__)


def _numeric_stage(basis: ZBasis, rep: DiamondRep, bits: int, terms: int, margin) -> ALMatrix:
    forms = {blk.form.label: blk.form for blk in basis.blocks}
    embeddings: Dict[str, tuple] = {}
    lambdas: Dict[str, tuple] = {}
    with working_precision(bits):
        for label, rec in forms.items():
            embedded = embed_all(rec, bits)
            embeddings[label] = embedded
            lambdas[label] = tuple(
                approximate_pseudo_eigenvalue(ef, bits, min(terms, rec.n_max)) for ef in embedded
            )
        numW = numeric_W(basis, embeddings, lambdas, bits)
        cross_check_diamonds(basis, rep, embeddings, bits)
        return reconstruct_W(numW, rep, basis, margin)


def compute_al_matrix(
    space: CuspSpace,
    store: NewformStore,
    policy: Optional[PrecisionPolicy] = None,
    margin=None,
    strict: bool = True,
) -> Tuple[ALMatrix, VerificationReport]:
    """
    W_N on the distinguished Z-basis of ``space``, verified.

    With ``strict=False`` a certified W that fails an exact check is
    returned together with its failing report instead of raising.

    Raises:
        MissingFixtureError: a level M | N has no fixture
        PrecisionExhaustedError: rounding stayed uncertain after every escalation
        InconsistentResultError: a certified result failed an exact check
    """
    basis = build_zbasis(space, store)
    rep = diamond_matrices(basis)
    if basis.g == 0:
        al = reconstruct_W(None, rep, basis, margin)
        return al, verify_W(al)

    policy = policy or PrecisionPolicy.from_settings()
    if not policy.start_terms:
        policy = policy.with_terms(space.sturm.s + basis.g)

    last_error = None
    for attempt, bits, terms in policy.schedule():
        try:
            al = _numeric_stage(basis, rep, bits, terms, margin)
        except PrecisionError as e:
            last_error = e
            logger.warning(f"Attempt {attempt} at {bits} bits failed: {e}")
            continue
        report = verify_W(al)
        if not report.passed:
            if not strict:
                logger.error(f"W for {space} failed verification: {report.failures}")
                return al, report
            raise InconsistentResultError(
                f"reconstructed W for {space} failed verification: {report.failures}"
            )
        logger.info(f"W for {space} computed at {bits} bits ({terms} terms)")
        return al, report
    raise PrecisionExhaustedError(
        f"{space}: no certified W after {policy.max_escalations} escalations "
        f"(last failure: {last_error})"
    )
