"""
Working precision for python-flint ball arithmetic.

- ``working_precision``: context manager that sets ``flint.ctx.prec`` and
  restores it afterwards
- ``PrecisionPolicy``: the escalation schedule used by the Atkin-Lehner
  pipeline (bits and coefficient counts double on every retry)
"""

import logging
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator, Tuple

from django.conf import settings
from flint import ctx

from core.exceptions import JobConfigError

logger = logging.getLogger(__name__)

MIN_PRECISION_BITS = 32


@contextmanager
def working_precision(bits: int):
    """
    Run a block with ``bits`` of working precision.

    Args:
        bits: Binary precision for arb/acb operations

    Yields:
        The precision that was set
    """
    if bits < MIN_PRECISION_BITS:
        raise JobConfigError(f"precision must be at least {MIN_PRECISION_BITS} bits, got {bits}")
    saved = ctx.prec
    ctx.prec = bits
    try:
        yield bits
    finally:
        ctx.prec = saved


@dataclass(frozen=True)
class PrecisionPolicy:
    """
    Escalation schedule for certified numerics.

    Attempt 0 runs at ``start_bits`` with ``start_terms`` coefficients;
    every escalation doubles both. At most ``max_escalations`` retries
    follow the first attempt.
    """

    start_bits: int = 128
    max_escalations: int = 8
    start_terms: int = 0

    def __post_init__(self):
        if self.start_bits < 64:
            raise JobConfigError(f"precision start must be >= 64 bits, got {self.start_bits}")
        if not 0 <= self.max_escalations <= 8:
            raise JobConfigError(f"max escalations must lie in [0, 8], got {self.max_escalations}")

    @classmethod
    def from_settings(cls, start_terms: int = 0) -> "PrecisionPolicy":
        return cls(
            start_bits=settings.AL_PRECISION_START_BITS,
            max_escalations=settings.AL_MAX_ESCALATIONS,
            start_terms=start_terms,
        )

    def with_terms(self, start_terms: int) -> "PrecisionPolicy":
        return PrecisionPolicy(self.start_bits, self.max_escalations, start_terms)

    def schedule(self) -> Iterator[Tuple[int, int, int]]:
        """Yield ``(attempt, bits, terms)`` for every allowed attempt."""
        for attempt in range(self.max_escalations + 1):
            factor = 2 ** attempt
            if attempt:
                logger.warning(
                    f"Escalating precision: attempt {attempt} at {self.start_bits * factor} bits"
                )
            yield attempt, self.start_bits * factor, self.start_terms * factor
