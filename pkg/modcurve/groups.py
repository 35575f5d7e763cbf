"""
Subgroups G of GL2(Z/NZ) defining modular curves X_G.

A usable G contains -I and has det(G) = (Z/NZ)^x. Validation computes
the closure of the generators (up to ``MODCURVE_MAX_GROUP_ORDER``
elements), the width w of Gamma_G at infinity and the subgroup
H = {d : [[1, 0], [0, d]] in G}.
"""

import logging
from collections import deque
from dataclasses import dataclass, field, replace
from typing import FrozenSet, Optional, Sequence, Tuple

from django.conf import settings

from core.exceptions import GroupValidationError, InputError
from cyclo.units import subgroup, units
from sl2.elements import GL2Element, IntMatrix2, mat_mul

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GroupSpec:
    """Generators of G, plus what validation derives from them."""

    N: int
    generators: Tuple[GL2Element, ...]
    elements: Optional[FrozenSet[IntMatrix2]] = field(default=None, compare=False, repr=False)
    H: Optional[FrozenSet[int]] = None
    w: Optional[int] = None

    @classmethod
    def from_lists(cls, N: int, generators: Sequence[Sequence[int]]) -> "GroupSpec":
        """
        Raises:
            GroupValidationError: an entry list is malformed or singular mod N
        """
        try:
            return cls(N, tuple(GL2Element.from_entries(g, N) for g in generators))
        except InputError as e:
            raise GroupValidationError(f"invalid generator modulo {N}: {e}") from e

    @property
    def validated(self) -> bool:
        return self.elements is not None

    @property
    def order(self) -> int:
        if self.elements is None:
            raise GroupValidationError("group has not been validated")
        return len(self.elements)

    def contains(self, A: GL2Element) -> bool:
        if self.elements is None:
            raise GroupValidationError("group has not been validated")
        return A.entries in self.elements

    def describe(self) -> dict:
        return {
            'modulus': self.N,
            'generators': [list(g.entries) for g in self.generators],
            'order': len(self.elements) if self.elements is not None else None,
            'width': self.w,
            'H': sorted(self.H) if self.H is not None else None,
        }


def max_group_order() -> int:
    return int(getattr(settings, 'MODCURVE_MAX_GROUP_ORDER', 2 ** 24))


def _mod(m: Sequence[int], N: int) -> IntMatrix2:
    return tuple(x % N for x in m)


def closure(N: int, generators: Sequence[GL2Element], max_elements: Optional[int] = None) -> FrozenSet[IntMatrix2]:
    """
    All products of the generators and their inverses, by breadth-first search.

    Raises:
        GroupValidationError: more than ``max_elements`` elements were found
    """
    identity = GL2Element.identity(N).entries
    steps = []
    for g in generators:
        steps.append(g.entries)
        steps.append(g.inverse().entries)
    steps = list(dict.fromkeys(steps))

    seen = {identity}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for g in steps:
            y = _mod(mat_mul(x, g), N)
            if y not in seen:
                seen.add(y)
                if max_elements is not None and len(seen) > max_elements:
                    raise GroupValidationError(
                        f"group exceeds {max_elements} elements at modulus {N}; "
                        f"membership testing is refused above this size"
                    )
                queue.append(y)
    return frozenset(seen)


def validate_group(group: GroupSpec) -> GroupSpec:
    """
    Check -I in G and det(G) = (Z/NZ)^x; attach the closure, H and w.

    Raises:
        GroupValidationError: either hypothesis fails, or G is too large
    """
    N = group.N
    if N < 1:
        raise GroupValidationError(f"modulus must be positive, got {N}")
    for g in group.generators:
        if g.N != N:
            raise GroupValidationError(f"generator {g} has modulus {g.N}, expected {N}")

    dets = subgroup(N, [g.det for g in group.generators]) if group.generators else frozenset({1 % N})
    if dets != frozenset(units(N)):
        raise GroupValidationError(
            f"det(G) = {sorted(dets)} is a proper subgroup of (Z/{N}Z)^x"
        )

    elements = closure(N, group.generators, max_group_order())
    minus_one = GL2Element(N, -1, 0, 0, -1).entries
    if minus_one not in elements:
        raise GroupValidationError(f"-I is not in the group generated modulo {N}")

    H = frozenset(d for d in units(N) if GL2Element.diagonal(N, d).entries in elements)
    w = next(w for w in range(1, N + 1) if _mod((1, w, 0, 1), N) in elements)
    logger.info(f"Group modulo {N}: order {len(elements)}, width {w}, |H| = {len(H)}")
    return replace(group, elements=elements, H=H, w=w)


def full_group(N: int) -> GroupSpec:
    """GL2(Z/NZ) from elementary generators."""
    gens = [GL2Element(N, 1, 1, 0, 1), GL2Element(N, 1, 0, 1, 1), GL2Element(N, -1, 0, 0, -1)]
    gens.extend(GL2Element.diagonal(N, d) for d in units(N) if d != 1 % N)
    return GroupSpec(N, tuple(gens))
