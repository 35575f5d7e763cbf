"""
Newform records: the ingested description of one Galois orbit of newforms.
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from typing import Dict, Tuple, Union

from core.exceptions import InsufficientPrecisionError
from cyclo.numbers import CycNum
from qexp.numberfield import NFElement, NumberField
from qexp.series import QExp

CharValue = Union[NFElement, CycNum]


@dataclass(frozen=True)
class NewformRecord:
    """
    A newform f of level M and weight k with coefficients in L = Q[a].

    ``an[n - 1]`` is a_n(f) in the power basis of a. ``char_values`` holds
    the supplied nebentypus values (possibly empty); the values actually
    used are derived from the coefficients by ``nebentypus``.
    """

    label: str
    level: int
    weight: int
    field: NumberField
    an: Tuple[NFElement, ...]
    char_values: Dict[int, CharValue] = dc_field(default_factory=dict, compare=False)

    @property
    def degree(self) -> int:
        return self.field.degree

    @property
    def n_max(self) -> int:
        return len(self.an)

    def coefficient(self, n: int) -> NFElement:
        """a_n(f), with a_0 = 0."""
        if n == 0:
            return self.field.zero()
        if not 1 <= n <= self.n_max:
            raise InsufficientPrecisionError(
                f"newform {self.label}: a_{n} requested, {self.n_max} coefficients known"
            )
        return self.an[n - 1]

    def qexp(self) -> QExp:
        """f as a series with coefficients in L, known through a_{n_max}."""
        return QExp((self.field.zero(),) + self.an, weight=self.weight, level=self.level)

    def trace_form(self, j: int) -> QExp:
        """Tr_{L/Q}(a^j f)."""
        a_j = self.field.generator() ** j
        coeffs = (Fraction(0),) + tuple((a_j * c).trace() for c in self.an)
        return QExp(coeffs, weight=self.weight, level=self.level)

    def sort_key(self) -> Tuple:
        """Orbit order: label, then the coefficient vectors a_2, a_3, ..."""
        return (self.label, tuple(c.coeffs for c in self.an[1:]))

    @cached_property
    def nebentypus(self) -> Dict[int, NFElement]:
        from newforms.character import nebentypus_from_coeffs

        return nebentypus_from_coeffs(self)

    def epsilon(self, m: int) -> NFElement:
        """epsilon_f(m mod M) for m prime to M."""
        if self.level == 1:
            return self.field.one()
        return self.nebentypus[m % self.level]

    def is_trivial_on(self, subgroup) -> bool:
        return all(self.epsilon(h).is_one() for h in subgroup)

    def __hash__(self):
        return hash((self.label, self.level, self.weight, self.field.poly))


def default_label(level: int, weight: int, index: int) -> str:
    """"<level>.<weight>.<index>" for records without an explicit label."""
    return f"{level}.{weight}.{index}"
