"""Coefficient pairs and maximal contact coordinates."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from sympy.polys.matrices import DomainMatrix

from . import config
from .algebra import INFINITY, Monomial, Poly, VarSplit, hasse_derive, order_origin, substitute
from .cone import LinearSpan, maximal_contact_directions
from .errors import PreconditionError, UnsupportedCharacteristicError
from .pairs import Pair, PairSystem, clear_denominator, ord_origin_system

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CoeffLevel:
    level: int
    weight: int
    generators: Tuple[Poly, ...]


@dataclass(frozen=True)
class CoeffPair:
    """Levels I(l) = <f_B : |B| = l> with weight b - l, for 0 <= l < b, zero levels kept."""

    b: int
    levels: Tuple[CoeffLevel, ...]
    system: PairSystem


def coefficient_pair(E: Pair, split: Optional[VarSplit] = None) -> CoeffPair:
    if split is not None and split != E.split:
        E = E.reindex(split)
    if not E.split.base_names:
        raise PreconditionError("The coefficient ring has no variables: e = 0 and nothing adjoined")
    E = clear_denominator(E)
    b = int(E.b)
    base = E.split.base()
    buckets: Dict[int, List[Poly]] = {l: [] for l in range(b)}
    for g in E.generators:
        for B, coefficient in g.y_expansion().items():
            l = sum(B)
            if l < b and coefficient not in buckets[l]:
                buckets[l].append(coefficient)
    levels = tuple(CoeffLevel(l, b - l, tuple(buckets[l])) for l in range(b))
    system = PairSystem(tuple(Pair(E.field, base, level.generators, level.weight) for level in levels))
    return CoeffPair(b, levels, system)


def coeff_order(D: CoeffPair) -> Union[Fraction, float]:
    """min over nonzero levels of ord(I(l))/(b - l); infinity when every level vanishes."""
    orders = []
    for level in D.levels:
        if level.generators:
            orders.append(Fraction(min(order_origin(g) for g in level.generators)) / level.weight)
    return min(orders, default=INFINITY)


def clamped_coeff_order(D: CoeffPair) -> Union[Fraction, float]:
    return ord_origin_system(D.system)


@dataclass(frozen=True)
class ContactWitness:
    y: str
    multi_index: Monomial
    generator_index: int
    scale: Fraction
    z: Poly


@dataclass(frozen=True)
class MaximalContact:
    """New coordinates z_j, the inverse y(u, z) and the pair re-expanded in (u, z)."""

    witnesses: Tuple[ContactWitness, ...]
    z: Dict[str, Poly]
    inverse: Dict[str, Poly]
    pair: Pair
    truncated: bool


def _invert(A: List[List[object]], field) -> List[List[object]]:
    n = len(A)
    return DomainMatrix(A, (n, n), field.domain).inv().to_list()


def maximal_contact(E: Pair, split: Optional[VarSplit] = None, choice: int = 0,
                    degree_bound: int = config.DEFAULT_DEGREE_BOUND) -> MaximalContact:
    """
    Coordinates z_j = D'_M(f)/eps with linear part in the directrix, and E
    rewritten in them. The y names are reused for the z coordinates.
    """
    if split is not None and split != E.split:
        E = E.reindex(split)
    E = clear_denominator(E)
    field, split = E.field, E.split
    if field.p and E.b >= field.p:
        raise UnsupportedCharacteristicError(f"Maximal contact needs b < p, got b = {E.b} in {field}")
    directions = maximal_contact_directions(E, choice)
    graded = split.graded()
    if directions.span != LinearSpan.of_variables(field, graded, graded.y_names):
        raise PreconditionError("The y-block does not span the directrix of the tangent cone")

    y_idx = split.indices(split.y_names)
    witnesses, zs = [], {}
    for w in directions.witnesses:
        y = split.names[graded.names.index(w.variable)]
        _, gi = w.source
        f = E.generators[gi].truncate(degree_bound)
        z = hasse_derive(w.multi_index, f).scale(field.convert(1 / w.scale))
        zs[y] = z
        witnesses.append(ContactWitness(y, w.multi_index, gi, w.scale, z))

    names = list(split.y_names)
    linear = [[z_j.element.get(tuple(1 if k == i else 0 for k in range(len(split.names))), field.domain.zero)
               for i in y_idx] for z_j in (zs[y] for y in names)]
    inverse_matrix = _invert(linear, field)
    unit = {y: Poly.variable(field, split, y).truncate(degree_bound) for y in names}
    # z_j = A y + N_j(u, y), N of order >= 2
    nonlinear = {}
    for j, y in enumerate(names):
        part = zs[y]
        for k, yk in enumerate(names):
            part = part - unit[yk].scale(linear[j][k])
        nonlinear[y] = part

    def apply_inverse(vector: Dict[str, Poly]) -> Dict[str, Poly]:
        result = {}
        for i, y in enumerate(names):
            total = Poly.zero(field, split).truncate(degree_bound)
            for k, yk in enumerate(names):
                total = total + vector[yk].scale(inverse_matrix[i][k])
            result[y] = total
        return result

    guess = apply_inverse(unit)
    for _ in range(degree_bound + 1):
        residual = {y: unit[y] - substitute(nonlinear[y], guess) for y in names}
        following = apply_inverse(residual)
        if all(following[y] == guess[y] for y in names):
            break
        guess = following
    else:
        logger.warning("Inverse of the maximal contact coordinates did not stabilize below degree %d", degree_bound)

    generators = [substitute(g.truncate(degree_bound), guess) for g in E.generators]
    pair = E.replace(generators)
    truncated = pair.truncated or any(p.truncated for p in guess.values())
    return MaximalContact(tuple(witnesses), zs, guess, pair, truncated)


