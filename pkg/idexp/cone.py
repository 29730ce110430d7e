"""
Tangent cones of pair systems and their directrix and ridge.

Homogeneous ideals live on the graded variables (upper case names). All
membership questions are answered degree by degree with exact linear algebra.

Directrix: in characteristic 0, or p above every generator degree, the
translations leaving the cone stable are cut out by linear conditions on
first derivatives. Otherwise the ridge is found first by searching flags of
F_p-subspaces, and the directrix is the span of the q-th roots of the ridge.
"""

import itertools
import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from . import config
from .algebra import Field, Monomial, Poly, VarSplit, hasse_derive, initial_form, monomials_of_degree, order_origin
from .errors import InputError, PreconditionError, SearchBudgetExceeded, UnsupportedCharacteristicError
from .linalg import Echelon, intersect
from .pairs import Pair, PairSystem, as_system, in_singular_locus

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def _monomial_index(n: int, d: int) -> Dict[Monomial, int]:
    return {m: i for i, m in enumerate(monomials_of_degree(n, d))}


def _vector(f: Poly, d: int) -> List[object]:
    index = _monomial_index(len(f.split.names), d)
    row = [f.field.domain.zero] * len(index)
    for exps, c in f.items():
        row[index[exps]] = c
    return row


def _from_vector(field: Field, split: VarSplit, row: Sequence[object], d: int) -> Poly:
    monomials = monomials_of_degree(len(split.names), d)
    return Poly._from_elements(field, split, {m: c for m, c in zip(monomials, row) if c})


def _shifted_rows(f: Poly, k: int) -> Iterator[List[object]]:
    """Coefficient rows of m·f for every monomial m of degree k."""
    n = len(f.split.names)
    d = sum(next(iter(f.element)))
    index = _monomial_index(n, d + k)
    zero = f.field.domain.zero
    for m in monomials_of_degree(n, k):
        row = [zero] * len(index)
        for exps, c in f.items():
            row[index[tuple(a + b for a, b in zip(exps, m))]] = c
        yield row


@dataclass(frozen=True)
class HomogIdeal:
    """Ideal of the graded ring generated by homogeneous polynomials."""

    field: Field
    split: VarSplit
    generators: Tuple[Poly, ...]
    _parts: dict = dc_field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        gens = tuple(g for g in self.generators if not g.is_zero())
        for g in gens:
            if not g.is_homogeneous():
                raise InputError(f"Generator {g.to_text()} is not homogeneous")
            if g.field != self.field or g.split.names != self.split.names:
                raise InputError("Generators must live on the ideal's graded ring")
        object.__setattr__(self, "generators", gens)

    @property
    def variables(self) -> Tuple[str, ...]:
        return self.split.names

    @property
    def is_zero(self) -> bool:
        return not self.generators

    @property
    def max_degree(self) -> int:
        return max((int(g.degree()) for g in self.generators), default=0)

    def degree_part(self, d: int) -> Echelon:
        """Basis of I_d inside the space of forms of degree d."""
        if d not in self._parts:
            rows = []
            for g in self.generators:
                k = d - int(g.degree())
                if k >= 0:
                    rows.extend(_shifted_rows(g, k))
            self._parts[d] = Echelon(self.field, len(_monomial_index(len(self.variables), d)), rows)
        return self._parts[d]

    def same_ideal(self, other: "HomogIdeal") -> bool:
        """Equality of ideals, compared degree-wise up to the largest generator degree."""
        top = max(self.max_degree, other.max_degree)
        return all(self.degree_part(d) == other.degree_part(d) for d in range(top + 1))

    def contains(self, f: Poly) -> bool:
        if f.is_zero():
            return True
        if not f.is_homogeneous():
            return all(self.contains(f.homogeneous_part(d)) for d in {sum(e) for e in f.element})
        return self.degree_part(int(f.degree())).contains(_vector(f, int(f.degree())))

    def power(self, a: int) -> "HomogIdeal":
        products = []
        for combo in itertools.combinations_with_replacement(self.generators, a):
            product = combo[0]
            for g in combo[1:]:
                product = product * g
            products.append(product)
        return HomogIdeal(self.field, self.split, tuple(products))

    def to_text(self) -> List[str]:
        return [g.to_text() for g in self.generators]


@dataclass(frozen=True)
class LinearSpan:
    """Span of linear forms in the graded variables, stored in reduced echelon form."""

    field: Field
    split: VarSplit
    basis: Tuple[Tuple[Fraction, ...], ...]

    @classmethod
    def from_rows(cls, field: Field, split: VarSplit, rows: Sequence[Sequence[object]]) -> "LinearSpan":
        echelon = Echelon(field, len(split.names), rows)
        return cls(field, split, tuple(tuple(row) for row in echelon.canonical()))

    @classmethod
    def of_variables(cls, field: Field, split: VarSplit, names: Sequence[str]) -> "LinearSpan":
        one, zero = field.domain.one, field.domain.zero
        rows = [[one if v == name else zero for v in split.names] for name in names]
        return cls.from_rows(field, split, rows)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def rows(self) -> List[List[object]]:
        return [[self.field.convert(x) for x in row] for row in self.basis]

    def echelon(self) -> Echelon:
        return Echelon(self.field, len(self.split.names), self.rows())

    def forms(self) -> List[Poly]:
        return [_from_vector(self.field, self.split, row, 1) for row in self.rows()]

    def contains(self, form: Poly) -> bool:
        return self.echelon().contains(_vector(form, 1))

    def to_text(self) -> List[str]:
        return [f.to_text() for f in self.forms()]


@dataclass(frozen=True)
class AdditivePoly:
    """phi = sum_i lambda_i W_i^q with q a power of the characteristic (q = 1 in char 0)."""

    q: int
    coefficients: Tuple[Fraction, ...]

    def to_poly(self, field: Field, split: VarSplit) -> Poly:
        n = len(split.names)
        terms = {tuple(self.q if j == i else 0 for j in range(n)): c
                 for i, c in enumerate(self.coefficients) if c}
        return Poly.from_terms(field, split, terms)

    def root(self, field: Field, split: VarSplit) -> Poly:
        """The linear form whose q-th power is phi; Frobenius fixes F_p coefficients."""
        return AdditivePoly(1, self.coefficients).to_poly(field, split)

    def to_text(self, field: Field, split: VarSplit) -> str:
        base = self.root(field, split).to_text()
        return base if self.q == 1 else f"({base})^{self.q}"


# tangent cones


def tangent_cone(S: Union[Pair, PairSystem]) -> HomogIdeal:
    """In(E): degree-b initial forms of all generators, on the graded variables."""
    S = as_system(S)
    graded = S.split.graded()
    generators = []
    for E in S:
        for g in E.generators:
            if order_origin(g) < E.b:
                raise PreconditionError(f"The origin is not in Sing{E}: ord({g.to_text()}) < {E.b}")
            generators.append(initial_form(g, E.b).rename(graded))
    return HomogIdeal(S.field, graded, tuple(generators))


def itc_pair(S: Union[Pair, PairSystem]) -> PairSystem:
    """Idealistic tangent cone: one component (In(E_i), b_i) per input component."""
    S = as_system(S)
    graded = S.split.graded()
    components = []
    for E in S:
        forms = []
        for g in E.generators:
            if order_origin(g) < E.b:
                raise PreconditionError(f"The origin is not in Sing{E}: ord({g.to_text()}) < {E.b}")
            forms.append(initial_form(g, E.b).rename(graded))
        components.append(Pair(S.field, graded, tuple(forms), E.b))
    return PairSystem(tuple(components))


# generation by subalgebras


def _algebra_parts(algebra: Sequence[Poly], field: Field, n: int, top: int) -> Dict[int, Echelon]:
    """Degree-k parts of K[algebra] for k <= top."""
    degrees = [int(a.degree()) for a in algebra]
    products: Dict[int, List[Poly]] = {k: [] for k in range(top + 1)}

    def walk(i: int, degree: int, product: Optional[Poly]):
        if i == len(algebra):
            if product is not None:
                products[degree].append(product)
            return
        power = None
        extra = 0
        while degree + extra <= top:
            walk(i + 1, degree + extra, product if power is None else (power if product is None else product * power))
            if degrees[i] == 0:
                break
            power = algebra[i] if power is None else power * algebra[i]
            extra += degrees[i]

    walk(0, 0, None)
    parts = {}
    for k in range(top + 1):
        width = len(_monomial_index(n, k))
        if k == 0:
            parts[k] = Echelon(field, width, [[field.domain.one]])
        else:
            parts[k] = Echelon(field, width, [_vector(p, k) for p in products[k]])
    return parts


def is_generated_in(I: HomogIdeal, algebra: Sequence[Poly]) -> bool:
    """Whether I is generated by I ∩ K[algebra], checked degree-wise."""
    if I.is_zero:
        return True
    n = len(I.variables)
    top = I.max_degree
    parts = _algebra_parts(list(algebra), I.field, n, top)
    meets: Dict[int, Echelon] = {}
    for g in sorted(I.generators, key=lambda g: int(g.degree())):
        d = int(g.degree())
        target = _vector(g, d)
        if parts[d].contains(target):
            continue
        rows = []
        for k in range(d + 1):
            if k not in meets:
                meets[k] = intersect(I.degree_part(k), parts[k])
            for row in meets[k].rows:
                rows.extend(_shifted_rows(_from_vector(I.field, I.split, row, k), d - k))
        if not Echelon(I.field, len(target), rows).contains(target):
            return False
    return True


def enumerate_subspaces(field: Field, n: int, k: int) -> Iterator[List[List[object]]]:
    """All k-dimensional subspaces of F_p^n, as reduced echelon bases, in lexicographic order."""
    if field.p == 0:
        raise UnsupportedCharacteristicError("Subspace enumeration needs a finite field")
    dom = field.domain
    values = [dom(x) for x in range(field.p)]
    for pivots in itertools.combinations(range(n), k):
        free = [(i, j) for i, c in enumerate(pivots) for j in range(c + 1, n) if j not in pivots]
        for choice in itertools.product(values, repeat=len(free)):
            rows = [[dom.zero] * n for _ in range(k)]
            for i, c in enumerate(pivots):
                rows[i][c] = dom.one
            for (i, j), x in zip(free, choice):
                rows[i][j] = x
            yield rows


# directrix and ridge


def _uses_derivatives(I: HomogIdeal) -> bool:
    return I.field.p == 0 or I.field.p > I.max_degree


def _directrix_by_derivatives(I: HomogIdeal) -> LinearSpan:
    """Annihilator of the translations v with D_v(I) ⊆ I, from first derivatives."""
    n = len(I.variables)
    rows = []
    for g in I.generators:
        d = int(g.degree())
        lower = I.degree_part(d - 1)
        derivatives = []
        for i in range(n):
            unit = tuple(1 if j == i else 0 for j in range(n))
            derivatives.append(lower.reduce(_vector(hasse_derive(unit, g), d - 1)))
        for c in range(len(derivatives[0])):
            rows.append([derivatives[i][c] for i in range(n)])
    return LinearSpan.from_rows(I.field, I.split, rows)


def directrix(I: HomogIdeal) -> LinearSpan:
    """Minimal span V of linear forms with I generated by I ∩ K[V]."""
    if I.is_zero:
        return LinearSpan(I.field, I.split, ())
    if _uses_derivatives(I):
        return _directrix_by_derivatives(I)
    roots = [phi.root(I.field, I.split) for phi in ridge(I)]
    return LinearSpan.from_rows(I.field, I.split, [_vector(r, 1) for r in roots])


def _levels(I: HomogIdeal) -> List[int]:
    p, top = I.field.p, I.max_degree
    levels, q = [], 1
    while q <= top:
        levels.append(q)
        q *= p
    return levels


def _dimension_profiles(n: int, length: int, total: int) -> Iterator[Tuple[int, ...]]:
    """Nondecreasing tuples of subspace dimensions with the given sum."""
    def build(prefix: Tuple[int, ...], low: int, remaining: int):
        slots = length - len(prefix)
        if slots == 0:
            if remaining == 0:
                yield prefix
            return
        for d in range(low, n + 1):
            if d * slots > remaining:
                break
            yield from build(prefix + (d,), d, remaining - d)
    yield from build((), 0, total)


def _flags(field: Field, n: int, profile: Tuple[int, ...]) -> Iterator[List[Echelon]]:
    """Chains V_0 ⊆ ... ⊆ V_L of F_p-subspaces with the given dimensions."""
    top_dim = profile[-1]
    for top_rows in enumerate_subspaces(field, n, top_dim) if top_dim else [[]]:
        top = Echelon(field, n, top_rows)
        yield from _subflags(field, n, profile[:-1], top, [top])


def _subflags(field: Field, n: int, profile: Tuple[int, ...], ambient: Echelon,
              chain: List[Echelon]) -> Iterator[List[Echelon]]:
    if not profile:
        yield list(reversed(chain))
        return
    d = profile[-1]
    if d == ambient.dimension:
        yield from _subflags(field, n, profile[:-1], ambient, chain + [ambient])
        return
    if d == 0:
        empty = Echelon(field, n)
        yield from _subflags(field, n, profile[:-1], empty, chain + [empty])
        return
    for coords in enumerate_subspaces(field, ambient.dimension, d):
        rows = [[sum((c * r[j] for c, r in zip(coord, ambient.rows)), field.domain.zero) for j in range(n)]
                for coord in coords]
        sub = Echelon(field, n, rows)
        yield from _subflags(field, n, profile[:-1], sub, chain + [sub])


def _flag_generators(I: HomogIdeal, flag: List[Echelon], levels: List[int]) -> List[AdditivePoly]:
    generators: List[AdditivePoly] = []
    below = Echelon(I.field, len(I.variables))
    for q, space in zip(levels, flag):
        for row in space.rows:
            if not below.contains(row):
                below = below.extended([row])
                generators.append(AdditivePoly(q, tuple(I.field.to_fraction(x) for x in row)))
    return generators


def ridge(I: HomogIdeal, budget: int = config.RIDGE_SEARCH_BUDGET) -> Tuple[AdditivePoly, ...]:
    """
    Minimal additive algebra K[phi_1, ..., phi_l] generating I.

    In small characteristic the candidates are flags A_1 ⊆ A_p ⊆ ... of
    F_p-subspaces (A_q holding the linear forms whose q-th power is in the
    algebra), tried by increasing total dimension. The first hit is the ridge.
    """
    if I.is_zero:
        return ()
    if _uses_derivatives(I):
        return tuple(AdditivePoly(1, row) for row in _directrix_by_derivatives(I).basis)
    n = len(I.variables)
    levels = _levels(I)
    tried = 0
    for total in range(n * len(levels) + 1):
        for profile in _dimension_profiles(n, len(levels), total):
            for flag in _flags(I.field, n, profile):
                tried += 1
                if tried > budget:
                    raise SearchBudgetExceeded(f"Ridge search exceeded {budget} candidate flags")
                generators = _flag_generators(I, flag, levels)
                if is_generated_in(I, [phi.to_poly(I.field, I.split) for phi in generators]):
                    logger.debug("Ridge found after %d candidate flags", tried)
                    return tuple(generators)
    raise SearchBudgetExceeded("Ridge search exhausted every flag")


@dataclass(frozen=True)
class DirRid:
    dir_pair: Pair
    rid_system: PairSystem
    directrix: LinearSpan
    ridge: Tuple[AdditivePoly, ...]
    frobenius_check: bool


def dir_rid_pairs(S: Union[Pair, PairSystem]) -> DirRid:
    """(IDir, 1) and the intersection of (phi_i, q_i) for the tangent cone of S."""
    I = tangent_cone(S)
    span = directrix(I)
    additive = ridge(I)
    dir_pair = Pair(I.field, I.split, tuple(span.forms()), 1)
    rid_components = tuple(Pair(I.field, I.split, (phi.to_poly(I.field, I.split),), phi.q) for phi in additive)
    if not rid_components:
        rid_components = (Pair(I.field, I.split, (), 1),)
    roots = LinearSpan.from_rows(I.field, I.split, [_vector(phi.root(I.field, I.split), 1) for phi in additive])
    return DirRid(dir_pair, PairSystem(rid_components), span, additive, roots == span)


def sing_chain_holds(S: Union[Pair, PairSystem], point: Dict[str, int]) -> bool:
    """At ``point`` (graded names): x ∈ Sing(Dir) ⇒ x ∈ Sing(Rid) ⇒ x ∈ Sing(TC)."""
    result = dir_rid_pairs(S)
    cone = itc_pair(S)
    in_dir = in_singular_locus(result.dir_pair, point)
    in_rid = in_singular_locus(result.rid_system, point)
    in_cone = in_singular_locus(cone, point)
    return (not in_dir or in_rid) and (not in_rid or in_cone)


# maximal contact directions


@dataclass(frozen=True)
class DirectionWitness:
    variable: str
    multi_index: Monomial
    generator: Poly
    source: Tuple[int, int]
    scale: Fraction
    form: Poly


@dataclass(frozen=True)
class ContactDirections:
    span: LinearSpan
    witnesses: Tuple[DirectionWitness, ...]


def maximal_contact_directions(S: Union[Pair, PairSystem], choice: int = 0) -> ContactDirections:
    """
    For every directrix direction, a generator F of the tangent cone and a
    multi-index M with D_M(F) = scale · Y*, Y* normalized at the pivot variable.

    ``choice`` picks among the admissible (F, M) candidates for each direction.
    """
    S = as_system(S)
    p = S.field.p
    if p and any(E.b >= p for E in S):
        raise UnsupportedCharacteristicError(f"Maximal contact needs every weight below the characteristic {p}")
    graded = S.split.graded()
    sources = []
    for ci, E in enumerate(S):
        for gi, g in enumerate(E.generators):
            if order_origin(g) < E.b:
                raise PreconditionError(f"The origin is not in Sing{E}")
            form = initial_form(g, E.b).rename(graded)
            if not form.is_zero():
                sources.append(((ci, gi), form))
    if not sources:
        raise PreconditionError("The tangent cone is zero")
    I = HomogIdeal(S.field, graded, tuple(f for _, f in sources))
    span = directrix(I)
    field, n = S.field, len(graded.names)
    chosen = Echelon(field, n)
    witnesses = []
    for pivot in span.echelon().pivots:
        candidates = []
        for source, F in sources:
            for exps, c in sorted(F.items(), key=lambda item: item[0], reverse=True):
                if not exps[pivot]:
                    continue
                scale = c * field.domain.convert(exps[pivot])
                if not scale:
                    continue
                M = exps[:pivot] + (exps[pivot] - 1,) + exps[pivot + 1:]
                form = hasse_derive(M, F).scale(field.domain.one / scale)
                row = _vector(form, 1)
                if chosen.extended([row]).dimension == chosen.dimension + 1:
                    candidates.append(DirectionWitness(graded.names[pivot], M, F, source,
                                                       field.to_fraction(scale), form))
        if not candidates:
            raise PreconditionError(f"No derivative witness for direction {graded.names[pivot]}")
        witness = candidates[min(choice, len(candidates) - 1)]
        chosen = chosen.extended([_vector(witness.form, 1)])
        witnesses.append(witness)
    return ContactDirections(span, tuple(witnesses))
