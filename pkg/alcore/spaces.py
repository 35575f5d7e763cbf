"""
Cusp-form spaces S_k(Gamma) for Gamma_1(N) <= Gamma <= Gamma_0(N).

Such a Gamma is determined by its level N and the subgroup
H = {d : diag(1, d) in Gamma} of (Z/NZ)^x; the diamond operators <d>,
d in H, act trivially on S_k(Gamma).
"""

from dataclasses import dataclass
from typing import FrozenSet, Iterable

from core.exceptions import InputError
from cyclo.units import congruence_units, is_unit, subgroup, units
from qexp.sturm import SturmBound, sturm_bound


@dataclass(frozen=True)
class CuspSpace:
    k: int
    N: int
    H: FrozenSet[int]

    def __post_init__(self):
        if self.k < 1 or self.N < 1:
            raise InputError(f"weight and level must be positive, got k={self.k}, N={self.N}")
        H = frozenset(h % self.N for h in self.H)
        if any(not is_unit(h, self.N) for h in H):
            raise InputError(f"H must consist of units modulo {self.N}")
        if subgroup(self.N, H) != H:
            raise InputError(f"H is not a subgroup of (Z/{self.N}Z)^x")
        object.__setattr__(self, 'H', H)

    @classmethod
    def gamma0(cls, k: int, N: int) -> "CuspSpace":
        return cls(k, N, frozenset(units(N)))

    @classmethod
    def gamma1(cls, k: int, N: int) -> "CuspSpace":
        return cls(k, N, frozenset({1 % N}))

    @classmethod
    def gamma0_gamma1(cls, k: int, N: int, M: int) -> "CuspSpace":
        """Gamma_0(N) cap Gamma_1(M), M | N."""
        return cls(k, N, congruence_units(N, M))

    @classmethod
    def from_subgroup(cls, k: int, N: int, generators: Iterable[int]) -> "CuspSpace":
        return cls(k, N, subgroup(N, generators))

    @property
    def sturm(self) -> SturmBound:
        return sturm_bound(self.k, self.N)

    def describe(self) -> dict:
        return {'weight': self.k, 'level': self.N, 'H': sorted(self.H)}

    def __str__(self):
        return f"S_{self.k}(N={self.N}, |H|={len(self.H)})"
