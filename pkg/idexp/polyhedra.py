"""
Orthant polyhedra and the polyhedra attached to pairs.

Every polyhedron is conv(points) + R^e_{>=0} for finitely many rational points.
Vertices are computed exactly: a staircase hull in dimension <= 2 and an exact
rational phase-one simplex in higher dimension. No floating point is used.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .algebra import INFINITY, Poly, VarSplit, order_modulo_base
from .errors import InputError
from .lp import combination_below
from .pairs import Pair, PairSystem, as_system, clear_denominator

logger = logging.getLogger(__name__)

Point = Tuple[Fraction, ...]


def fraction_json(value: Union[Fraction, int, float]):
    """[num, den] for rationals, "infinity" for the unbounded value."""
    if value == INFINITY:
        return "infinity"
    value = Fraction(value)
    return [value.numerator, value.denominator]


def _dominates(p: Point, q: Point) -> bool:
    return all(a >= b for a, b in zip(p, q))


def _cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


class OrthantPolyhedron:
    """conv(points) + the nonnegative orthant, with a canonical vertex set."""

    def __init__(self, dimension: int, points: Iterable[Sequence] = ()):
        if dimension < 0:
            raise InputError("Polyhedron dimension must be nonnegative")
        normalized = set()
        for p in points:
            p = tuple(Fraction(x) for x in p)
            if len(p) != dimension:
                raise InputError(f"Point {p} does not have dimension {dimension}")
            if any(x < 0 for x in p):
                raise InputError(f"Point {p} is not in the nonnegative orthant")
            normalized.add(p)
        self.dimension = dimension
        self.points = frozenset(normalized)

    @property
    def is_empty(self) -> bool:
        return not self.points

    @cached_property
    def minimal_points(self) -> Tuple[Point, ...]:
        """Points not dominated by another generator point."""
        pts = sorted(self.points)
        return tuple(p for p in pts if not any(q != p and _dominates(p, q) for q in pts))

    @cached_property
    def vertices(self) -> Tuple[Point, ...]:
        candidates = list(self.minimal_points)
        if self.dimension <= 1 or len(candidates) <= 2:
            return tuple(candidates)
        if self.dimension == 2:
            return tuple(self._staircase(candidates))
        kept = []
        for j, p in enumerate(candidates):
            others = candidates[:j] + candidates[j + 1:]
            if not combination_below(others, p):
                kept.append(p)
        logger.debug("%d of %d minimal points are vertices", len(kept), len(candidates))
        return tuple(kept)

    @staticmethod
    def _staircase(points: List[Point]) -> List[Point]:
        # minimal points sorted by x ascending have y strictly descending
        hull: List[Point] = []
        for p in points:
            while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) <= 0:
                hull.pop()
            hull.append(p)
        return hull

    def delta(self) -> Union[Fraction, float]:
        """Minimal coordinate sum, infinity when empty."""
        if self.is_empty:
            return INFINITY
        return min(sum(p, Fraction(0)) for p in self.vertices)

    def contains(self, q: Sequence) -> bool:
        q = tuple(Fraction(x) for x in q)
        if len(q) != self.dimension:
            raise InputError(f"Point {q} does not have dimension {self.dimension}")
        if self.is_empty:
            return False
        vertices = self.vertices
        if any(_dominates(q, v) for v in vertices):
            return True
        if self.dimension <= 1:
            return False
        if self.dimension == 2:
            return self._above_staircase(q)
        return combination_below(vertices, q)

    def _above_staircase(self, q: Point) -> bool:
        chain = self.vertices
        if q[0] < chain[0][0] or q[1] < chain[-1][1]:
            return False
        for a, b in zip(chain, chain[1:]):
            if a[0] <= q[0] <= b[0]:
                return _cross(a, b, q) >= 0
        return q[1] >= chain[-1][1]

    def issubset(self, other: "OrthantPolyhedron") -> bool:
        if self.dimension != other.dimension:
            return False
        return all(other.contains(v) for v in self.vertices)

    def equals(self, other: "OrthantPolyhedron") -> bool:
        return self.dimension == other.dimension and set(self.vertices) == set(other.vertices)

    def __eq__(self, other):
        if not isinstance(other, OrthantPolyhedron):
            return NotImplemented
        return self.equals(other)

    def __hash__(self):
        return hash((self.dimension, frozenset(self.vertices)))

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "points": [[fraction_json(x) for x in p] for p in sorted(self.points)],
            "vertices": [[fraction_json(x) for x in p] for p in sorted(self.vertices)],
            "delta": fraction_json(self.delta()),
        }

    def __repr__(self):
        shown = ", ".join("(" + ", ".join(str(x) for x in v) + ")" for v in sorted(self.vertices))
        return f"OrthantPolyhedron(dim={self.dimension}, vertices=[{shown}])"


def delta(P: OrthantPolyhedron) -> Union[Fraction, float]:
    return P.delta()


def vertices(P: OrthantPolyhedron) -> Tuple[Point, ...]:
    return P.vertices


@dataclass(frozen=True)
class NuWeights:
    """Weights of a monomial valuation: alpha on the base block, beta on the y block."""

    alpha: Tuple[Fraction, ...]
    beta: Tuple[Fraction, ...]

    def __post_init__(self):
        alpha = tuple(Fraction(a) for a in self.alpha)
        beta = tuple(Fraction(b) for b in self.beta)
        if any(a <= 0 for a in alpha + beta):
            raise InputError("Valuation weights must be strictly positive")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)


def _resplit(S: Union[Pair, PairSystem], split: Optional[VarSplit]) -> PairSystem:
    S = as_system(S)
    if split is None or split == S.split:
        return S
    return S.reindex(split)


def _blocks(split: VarSplit) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    return split.indices(split.base_names), split.indices(split.y_names)


def newton_polyhedron(S: Union[Pair, PairSystem], split: Optional[VarSplit] = None) -> OrthantPolyhedron:
    """Points (A, B)/b with |B| <= b, coordinates ordered base block then y block."""
    S = _resplit(S, split)
    base, ys = _blocks(S.split)
    points = []
    for E in S:
        E = clear_denominator(E)
        for g in E.generators:
            for exps in g.support():
                if sum(exps[i] for i in ys) <= E.b:
                    points.append(tuple(Fraction(exps[i]) / E.b for i in base + ys))
    return OrthantPolyhedron(len(base) + len(ys), points)


def pair_points(S: Union[Pair, PairSystem], split: Optional[VarSplit] = None) -> Iterator[Point]:
    S = _resplit(S, split)
    base, ys = _blocks(S.split)
    for E in S:
        E = clear_denominator(E)
        for g in E.generators:
            for exps in g.support():
                height = sum(exps[i] for i in ys)
                if height < E.b:
                    yield tuple(Fraction(exps[i]) / (E.b - height) for i in base)


def pair_polyhedron(S: Union[Pair, PairSystem], split: Optional[VarSplit] = None) -> OrthantPolyhedron:
    """Points A/(b - |B|) with |B| < b over all generators of all components."""
    S = _resplit(S, split)
    return OrthantPolyhedron(len(S.split.base_names), pair_points(S))


def ideal_polyhedron(generators: Sequence[Poly], split: Optional[VarSplit] = None) -> OrthantPolyhedron:
    """Per-generator points A/(n_f - |B|), n_f the order of f modulo the base variables."""
    if not generators:
        raise InputError("ideal_polyhedron needs at least one generator")
    if split is not None:
        generators = [g.reindex(split) for g in generators]
    split = generators[0].split
    base, ys = _blocks(split)
    points = []
    for f in generators:
        n = order_modulo_base(f)
        if n == INFINITY:
            raise InputError(f"Generator {f.to_text()} lies in the ideal of the u-variables")
        for exps in f.support():
            height = sum(exps[i] for i in ys)
            if height < n:
                points.append(tuple(Fraction(exps[i], n - height) for i in base))
    return OrthantPolyhedron(len(base), points)


def project_newton(P: OrthantPolyhedron, split: VarSplit, b: Optional[Fraction] = None) -> OrthantPolyhedron:
    """Map (a, beta) to a/(1 - |beta|) when |beta| < 1; other points are dropped."""
    e = len(split.base_names)
    if P.dimension != e + split.r:
        raise InputError("Newton polyhedron does not match the split")
    points = []
    for p in P.points:
        a, beta = p[:e], p[e:]
        height = sum(beta, Fraction(0))
        if height < 1:
            points.append(tuple(x / (1 - height) for x in a))
    return OrthantPolyhedron(e, points)


def nu_polyhedron(S: Union[Pair, PairSystem], weights: NuWeights,
                  split: Optional[VarSplit] = None) -> OrthantPolyhedron:
    """Points (alpha·A)/(b - beta·B) with beta·B < b."""
    S = _resplit(S, split)
    base, ys = _blocks(S.split)
    if len(weights.alpha) != len(base) or len(weights.beta) != len(ys):
        raise InputError("Valuation weights do not match the variable blocks")
    points = []
    for E in S:
        E = clear_denominator(E)
        for g in E.generators:
            for exps in g.support():
                height = sum((w * exps[i] for w, i in zip(weights.beta, ys)), Fraction(0))
                if height < E.b:
                    points.append(tuple(w * exps[i] / (E.b - height) for w, i in zip(weights.alpha, base)))
    return OrthantPolyhedron(len(base), points)
