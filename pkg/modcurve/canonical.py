"""
Canonical models of X_G from its invariant basis.

- g = 2: the canonical image is P^1 and the ideal is zero
- hyperelliptic (dim I_2 = (g-1)(g-2)/2): the quadrics cut out a rational normal curve
- g = 3 non-hyperelliptic: a single plane quartic spans I_4
- g >= 4 non-hyperelliptic: the quadrics, plus cubics when x_i F_j fall short of I_3
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

from core.exceptions import InputError, ModelInconsistencyError
from modcurve.ideals import HomogeneousPolynomial, compute_Id, required_terms, variable_names
from modcurve.invariants import InvariantBasis
from zlinalg.rational import rank

logger = logging.getLogger(__name__)


def hyperelliptic_quadrics(g: int) -> int:
    return (g - 1) * (g - 2) // 2


def petri_quadrics(g: int) -> int:
    return (g - 2) * (g - 3) // 2


def canonical_cubics(g: int) -> int:
    """dim I_3(C) for a non-hyperelliptic canonical curve of genus g >= 4."""
    return (g - 3) * (g * g + 6 * g - 10) // 6


@dataclass(frozen=True)
class CurveModel:
    genus: int
    hyperelliptic: bool
    generators: Tuple[HomogeneousPolynomial, ...]
    quadrics: int = 0
    cubics_added: Optional[int] = None

    @property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(F.d for F in self.generators)

    @property
    def variables(self) -> Tuple[str, ...]:
        return variable_names(self.genus)

    def describe(self) -> dict:
        return {
            'genus': self.genus,
            'hyperelliptic': self.hyperelliptic,
            'variables': list(self.variables),
            'degrees': list(self.degrees),
            'polynomials': [F.format() for F in self.generators],
        }


def verify_model(model: CurveModel, basis: InvariantBasis) -> bool:
    """
    Every generator of degree d vanishes on the basis through q_w^(d(2g-1)).

    Raises:
        ModelInconsistencyError: some generator does not vanish
    """
    g = basis.genus
    for F in model.generators:
        terms = required_terms(g, F.d)
        value = F.evaluate(basis.forms, terms)
        bad = value.valuation()
        if bad is not None:
            raise ModelInconsistencyError(f"{F} does not vanish at q^{bad}")
    logger.info(f"Verified {len(model.generators)} generator(s) of the genus {g} model")
    return True


def _cubic_complement(quadrics: List[HomogeneousPolynomial], basis: InvariantBasis) -> List[HomogeneousPolynomial]:
    g = basis.genus
    products = [F.times_variable(i) for F in quadrics for i in range(g)]
    spanned = rank([p.coeffs for p in products]) if products else 0
    expected = canonical_cubics(g)
    if spanned == expected:
        return []
    cubics = compute_Id(basis, 3)
    if len(cubics) != expected:
        raise ModelInconsistencyError(f"dim I_3 = {len(cubics)}, expected {expected} for genus {g}")
    rows = [p.coeffs for p in products]
    added = []
    for G in cubics:
        candidate = rows + [G.coeffs]
        if rank(candidate) > spanned:
            rows = candidate
            spanned += 1
            added.append(G.primitive())
    return added


def model_select(basis: InvariantBasis) -> CurveModel:
    """
    The canonical model of X_G: hyperelliptic flag and ideal generators.

    Raises:
        InputError: g < 2
        ModelInconsistencyError: dim I_2 fits neither the hyperelliptic nor the
            non-hyperelliptic count, or a generator fails to vanish
    """
    g = basis.genus
    if g < 2:
        raise InputError(f"genus {g}: canonical models need g >= 2")
    if g == 2:
        model = CurveModel(2, True, ())
        logger.info("Genus 2: canonical image is P^1, ideal is zero")
        return model

    quadrics = compute_Id(basis, 2)
    r = len(quadrics)
    if r == hyperelliptic_quadrics(g):
        model = CurveModel(g, True, tuple(F.primitive() for F in quadrics), r)
    elif r == petri_quadrics(g):
        if g == 3:
            quartics = compute_Id(basis, 4)
            if len(quartics) != 1:
                raise ModelInconsistencyError(f"dim I_4 = {len(quartics)} for a plane quartic")
            model = CurveModel(3, False, (quartics[0].primitive(),), 0)
        else:
            cubics = _cubic_complement(quadrics, basis)
            if cubics and len(cubics) != g - 3:
                logger.warning(f"Added {len(cubics)} cubic generator(s), expected {g - 3}")
            model = CurveModel(
                g, False, tuple(F.primitive() for F in quadrics) + tuple(cubics), r, len(cubics)
            )
    else:
        raise ModelInconsistencyError(
            f"dim I_2 = {r} for genus {g}: expected {hyperelliptic_quadrics(g)} "
            f"(hyperelliptic) or {petri_quadrics(g)}"
        )
    verify_model(model, basis)
    kind = "hyperelliptic" if model.hyperelliptic else "non-hyperelliptic"
    logger.info(f"Genus {g} {kind} model with generator degrees {model.degrees}")
    return model
