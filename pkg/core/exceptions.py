"""
Exception hierarchy for the cuspforms project.

Every error carries an ``exit_code`` so management commands can map a
failure to the documented process status:
- 2: an exact result failed verification
- 3: bad input (fixtures, group files, options) or a violated contract
- 4: precision escalation exhausted
"""

EXIT_OK = 0
EXIT_VERIFICATION = 2
EXIT_INPUT = 3
EXIT_PRECISION = 4


class CuspformsError(Exception):
    """Base class for all project errors."""

    exit_code = EXIT_INPUT


# =============================================================================
# INPUT ERRORS
# =============================================================================

class InputError(CuspformsError):
    """Invalid user-supplied input."""

    exit_code = EXIT_INPUT


class FixtureError(InputError):
    """A newform fixture file is unreadable or violates the schema."""


class MissingFixtureError(FixtureError):
    """No fixture file exists for a required (level, weight)."""

    def __init__(self, level, weight, root=None):
        self.level = level
        self.weight = weight
        where = f" under {root}" if root else ""
        super().__init__(f"missing newform fixture for level {level}, weight {weight}{where}")


class NewformDataError(FixtureError):
    """A newform record violates an arithmetic invariant."""


class GroupValidationError(InputError):
    """A subgroup of GL2(Z/NZ) fails the modular-curve hypotheses."""


class JobConfigError(InputError):
    """Command options failed validation."""


# =============================================================================
# COMPUTATIONAL CONTRACT ERRORS
# =============================================================================

class CyclotomicError(CuspformsError):
    """Invalid cyclotomic arithmetic (zero division, conductor misuse)."""


class MalformedMatrixError(CuspformsError):
    """A matrix does not have the shape a routine requires."""


class InconsistentSystemError(CuspformsError):
    """A linear system has no solution."""


class RankDeficientError(CuspformsError):
    """A coefficient matrix lacks full row rank."""


class InsufficientPrecisionError(CuspformsError):
    """Known q-expansion coefficients do not reach a required index."""


class NonIntegralError(CuspformsError):
    """Coefficients expected in Z (or Z[zeta]) are not integral."""


class ConjugateMatchError(CuspformsError):
    """The complex-conjugate embedding of a newform could not be identified."""


class NotInSpaceError(CuspformsError):
    """A q-expansion does not lie in the span of a basis."""


# =============================================================================
# NUMERICS AND VERIFICATION
# =============================================================================

class PrecisionError(CuspformsError):
    """A ball computation was too wide at the current precision; retryable."""

    exit_code = EXIT_PRECISION


class PrecisionExhaustedError(PrecisionError):
    """The escalation policy ran out of attempts."""


class VerificationError(CuspformsError):
    """An exact result failed one of its invariant checks."""

    exit_code = EXIT_VERIFICATION


class InconsistentResultError(VerificationError):
    """A reconstructed matrix failed verification after rounding."""


class ModelInconsistencyError(VerificationError):
    """Canonical-ideal dimensions contradict the hyperelliptic dichotomy."""
