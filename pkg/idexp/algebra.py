"""
Exact fields, sparse polynomials over a (u; y) variable split, orders,
initial forms, Hasse differential operators and substitutions.

Polynomials are thin immutable wrappers around sympy's sparse ring elements
(``sympy.polys.rings``) over ``QQ`` or ``GF(p)``. The wrapper adds what the
ring does not know about: the (u; y; t) block structure of the variables and
an optional truncation degree for values that stand for power series.

Features:
- Field: rationals or a prime field, canonical scalars as ``Fraction``
- VarSplit: the ordered variable blocks u, y and adjoined t
- Poly: arithmetic, homogeneous parts, truncation, re-indexing, text I/O
- orders at the origin, along a block and at coordinate points
- Hasse derivatives (plain and logarithmic) and ring substitutions
"""

import logging
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations
from sympy.polys.domains import GF, QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyRing

from .errors import InputError, PreconditionError

logger = logging.getLogger(__name__)

INFINITY = math.inf

Monomial = Tuple[int, ...]
Number = Union[int, Fraction]
Order = Union[int, float]

_TRANSFORMS = standard_transformations + (convert_xor,)
_ALLOWED_TEXT = re.compile(r"^[0-9A-Za-z_\s+\-*^()/]+$")
_IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


@lru_cache(maxsize=None)
def _domain(p: int):
    return QQ if p == 0 else GF(p)


@dataclass(frozen=True)
class Field:
    """Rationals (``p == 0``) or the prime field F_p."""

    p: int = 0

    def __post_init__(self):
        if self.p == 0:
            return
        if self.p < 2 or self.p >= 2 ** 31 or not sympy.isprime(self.p):
            raise InputError(f"Field characteristic must be a prime below 2^31, got {self.p}")

    @classmethod
    def rationals(cls) -> "Field":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "Field":
        return cls(int(p))

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def domain(self):
        return _domain(self.p)

    def convert(self, value: Number):
        """Map an integer or fraction into the sympy domain of this field."""
        value = Fraction(value)
        if self.p == 0:
            return QQ(value.numerator, value.denominator)
        if value.denominator % self.p == 0:
            raise InputError(f"{value} has no image in F_{self.p}")
        dom = self.domain
        return dom(value.numerator) / dom(value.denominator)

    def to_fraction(self, element) -> Fraction:
        """Canonical form: reduced fraction, or residue in [0, p)."""
        if self.p == 0:
            return Fraction(int(element.numerator), int(element.denominator))
        return Fraction(int(self.domain.to_int(element)) % self.p)

    def __str__(self):
        return "Q" if self.p == 0 else f"F_{self.p}"


def graded_names(names: Sequence[str]) -> Tuple[str, ...]:
    """Names of the graded variables: upper case, made unique by trailing underscores."""
    taken = set(names)
    result = []
    for name in names:
        candidate = name.upper()
        while candidate in result or (candidate in taken and candidate != name):
            candidate += "_"
        result.append(candidate)
    return tuple(result)


@dataclass(frozen=True)
class VarSplit:
    """Ordered variable blocks: u (parameters), y (the chosen system) and adjoined t."""

    u_names: Tuple[str, ...] = ()
    y_names: Tuple[str, ...] = ()
    t_names: Tuple[str, ...] = ()

    def __post_init__(self):
        for attr in ("u_names", "y_names", "t_names"):
            object.__setattr__(self, attr, tuple(getattr(self, attr)))
        names = self.names
        if not names:
            raise InputError("A variable split needs at least one variable")
        for name in names:
            if not isinstance(name, str) or not name.isidentifier():
                raise InputError(f"Invalid variable name: {name!r}")
        if len(set(names)) != len(names):
            raise InputError(f"Variable names must be distinct: {list(names)}")

    @property
    def names(self) -> Tuple[str, ...]:
        return self.u_names + self.y_names + self.t_names

    @property
    def e(self) -> int:
        return len(self.u_names)

    @property
    def r(self) -> int:
        return len(self.y_names)

    @property
    def base_names(self) -> Tuple[str, ...]:
        """Variables playing the role of u in polyhedra: u followed by adjoined t."""
        return self.u_names + self.t_names

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise InputError(f"Unknown variable '{name}'") from None

    def indices(self, names: Iterable[str]) -> Tuple[int, ...]:
        return tuple(self.index(name) for name in names)

    def exponent(self, powers: Mapping[str, int]) -> Monomial:
        exps = [0] * len(self.names)
        for name, k in powers.items():
            if k < 0:
                raise InputError(f"Negative exponent for '{name}'")
            exps[self.index(name)] = int(k)
        return tuple(exps)

    def with_t(self, name: str) -> "VarSplit":
        if name in self.names:
            raise InputError(f"Adjoined variable '{name}' is not fresh")
        return VarSplit(self.u_names, self.y_names, self.t_names + (name,))

    def base(self) -> "VarSplit":
        """The split of the coefficient ring: u and t only."""
        return VarSplit(self.u_names, (), self.t_names)

    def graded(self) -> "VarSplit":
        """Same blocks with the graded (upper case) variable names."""
        upper = graded_names(self.names)
        e, r = self.e, self.r
        return VarSplit(upper[:e], upper[e:e + r], upper[e + r:])


@lru_cache(maxsize=None)
def _ring(names: Tuple[str, ...], p: int) -> PolyRing:
    return PolyRing(names, _domain(p), grlex)


class Poly:
    """
    Immutable sparse polynomial over a Field and a VarSplit.

    ``truncation`` is the degree bound D when the value stands for a power
    series; ``truncated`` records whether terms above D were ever dropped.
    """

    __slots__ = ("field", "split", "element", "truncation", "truncated")

    def __init__(self, field: Field, split: VarSplit, element, truncation: Optional[int] = None,
                 truncated: bool = False):
        if truncation is not None:
            element, dropped = _truncate_element(element, truncation)
            truncated = truncated or dropped
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "split", split)
        object.__setattr__(self, "element", element)
        object.__setattr__(self, "truncation", truncation)
        object.__setattr__(self, "truncated", truncated)

    def __setattr__(self, key, value):
        raise AttributeError("Poly is immutable")

    # construction

    @classmethod
    def ring(cls, field: Field, split: VarSplit) -> PolyRing:
        return _ring(split.names, field.p)

    @classmethod
    def zero(cls, field: Field, split: VarSplit) -> "Poly":
        return cls(field, split, cls.ring(field, split).zero)

    @classmethod
    def constant(cls, field: Field, split: VarSplit, value: Number) -> "Poly":
        ring = cls.ring(field, split)
        return cls(field, split, ring.ground_new(field.convert(value)))

    @classmethod
    def variable(cls, field: Field, split: VarSplit, name: str) -> "Poly":
        return cls.monomial(field, split, split.exponent({name: 1}))

    @classmethod
    def monomial(cls, field: Field, split: VarSplit, exps: Monomial, value: Number = 1) -> "Poly":
        return cls.from_terms(field, split, {tuple(exps): value})

    @classmethod
    def from_terms(cls, field: Field, split: VarSplit, terms: Mapping[Monomial, Number],
                   truncation: Optional[int] = None) -> "Poly":
        n = len(split.names)
        converted = {}
        for exps, value in terms.items():
            exps = tuple(int(k) for k in exps)
            if len(exps) != n or min(exps, default=0) < 0:
                raise InputError(f"Exponent vector {exps} does not fit {n} variables")
            converted[exps] = field.convert(value)
        return cls._from_elements(field, split, converted, truncation)

    @classmethod
    def _from_elements(cls, field: Field, split: VarSplit, terms: Mapping[Monomial, object],
                       truncation: Optional[int] = None, truncated: bool = False) -> "Poly":
        element = cls.ring(field, split).from_dict({exps: c for exps, c in terms.items() if c})
        return cls(field, split, element, truncation, truncated)

    @classmethod
    def parse(cls, text: str, field: Field, split: VarSplit, truncation: Optional[int] = None) -> "Poly":
        return parse_poly(text, field, split, truncation)

    def _derived(self, element, other: Optional["Poly"] = None) -> "Poly":
        truncation, truncated = self.truncation, self.truncated
        if other is not None:
            truncation = _min_bound(truncation, other.truncation)
            truncated = truncated or other.truncated
        return Poly(self.field, self.split, element, truncation, truncated)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.field != self.field or other.split.names != self.split.names:
                raise InputError("Polynomials live over different fields or variable splits")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.constant(self.field, self.split, other)
        return NotImplemented

    # inspection

    def items(self) -> Iterator[Tuple[Monomial, object]]:
        return iter(self.element.items())

    def terms(self) -> Dict[Monomial, Fraction]:
        """Monomial -> canonical scalar, in graded lexicographic order."""
        ordered = sorted(self.element.items(), key=lambda item: (sum(item[0]), item[0]))
        return {exps: self.field.to_fraction(c) for exps, c in ordered}

    def coefficient(self, exps: Monomial) -> Fraction:
        value = self.element.get(tuple(exps))
        return Fraction(0) if value is None else self.field.to_fraction(value)

    def support(self) -> frozenset:
        return frozenset(self.element.keys())

    def is_zero(self) -> bool:
        return not self.element

    def __bool__(self):
        return not self.is_zero()

    def degree(self) -> Order:
        if self.is_zero():
            return -INFINITY
        return max(sum(exps) for exps in self.element)

    def is_homogeneous(self) -> bool:
        return len({sum(exps) for exps in self.element}) <= 1

    def homogeneous_part(self, d: int) -> "Poly":
        return self._derived(self.ring(self.field, self.split).from_dict(
            {exps: c for exps, c in self.element.items() if sum(exps) == d}))

    def truncate(self, bound: int) -> "Poly":
        return Poly(self.field, self.split, self.element, _min_bound(self.truncation, bound), self.truncated)

    # arithmetic

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._derived(self.element + other.element, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._derived(self.element - other.element, other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return self._derived(-self.element)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._derived(self.element * other.element, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise InputError("Negative powers are not polynomials")
        result = self._derived(self.ring(self.field, self.split).one)
        for _ in range(k):
            result = result * self
        return result

    def scale(self, value) -> "Poly":
        """Multiply by a scalar given as int, Fraction or domain element."""
        if isinstance(value, (int, Fraction)):
            value = self.field.convert(value)
        return self._derived(self.element * value)

    def monic(self) -> "Poly":
        """Scale so that the leading coefficient (graded lex) is one."""
        if self.is_zero():
            return self
        lead = max(self.element.items(), key=lambda item: (sum(item[0]), item[0]))[1]
        return self.scale(self.field.domain.one / lead)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return (self.field == other.field and self.split.names == other.split.names
                and dict(self.element) == dict(other.element))

    def __hash__(self):
        return hash((self.field, self.split.names, frozenset(self.element.items())))

    # re-indexing

    def reindex(self, split: VarSplit) -> "Poly":
        """Move to another split by variable name; dropped variables must not occur."""
        target = {name: i for i, name in enumerate(split.names)}
        moved = {}
        for exps, c in self.element.items():
            new = [0] * len(split.names)
            for name, k in zip(self.split.names, exps):
                if not k:
                    continue
                if name not in target:
                    raise InputError(f"Variable '{name}' does not exist in the target split")
                new[target[name]] = k
            moved[tuple(new)] = c
        return Poly._from_elements(self.field, split, moved, self.truncation, self.truncated)

    def rename(self, split: VarSplit) -> "Poly":
        """Same exponent vectors, read over a positionally matching split."""
        if len(split.names) != len(self.split.names):
            raise InputError("Renaming needs splits of equal length")
        return Poly._from_elements(self.field, split, dict(self.element), self.truncation, self.truncated)

    def y_expansion(self) -> Dict[Monomial, "Poly"]:
        """Expansion f = sum_B f_B(u) y^B, as B -> f_B over the base split."""
        split = self.split
        y_idx = split.indices(split.y_names)
        base_idx = split.indices(split.base_names)
        base = split.base() if split.base_names else None
        grouped: Dict[Monomial, Dict[Monomial, object]] = {}
        for exps, c in self.element.items():
            b = tuple(exps[i] for i in y_idx)
            a = tuple(exps[i] for i in base_idx)
            grouped.setdefault(b, {})[a] = c
        if base is None:
            raise PreconditionError("No u-variables to carry the coefficients")
        return {b: Poly._from_elements(self.field, base, terms, self.truncation, self.truncated)
                for b, terms in sorted(grouped.items())}

    # text

    def to_text(self) -> str:
        if self.is_zero():
            return "0"
        pieces = []
        ordered = sorted(self.element.items(), key=lambda item: (sum(item[0]), item[0]), reverse=True)
        for exps, c in ordered:
            value = self.field.to_fraction(c)
            factors = [name if k == 1 else f"{name}^{k}" for name, k in zip(self.split.names, exps) if k]
            sign = "-" if value < 0 else "+"
            magnitude = abs(value)
            if magnitude != 1 or not factors:
                factors.insert(0, str(magnitude))
            pieces.append((sign, "*".join(factors)))
        text = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"Poly({self.to_text()!r} over {self.field})"


def _min_bound(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _truncate_element(element, bound: int):
    if all(sum(exps) <= bound for exps in element):
        return element, False
    kept = {exps: c for exps, c in element.items() if sum(exps) <= bound}
    return element.ring.from_dict(kept), True


def parse_poly(text: str, field: Field, split: VarSplit, truncation: Optional[int] = None) -> Poly:
    """Parse ``text`` (integers, variables, ^, *, +, -, parentheses) into a Poly."""
    if not isinstance(text, str) or not text.strip():
        raise InputError("Empty polynomial text")
    if not _ALLOWED_TEXT.match(text):
        raise InputError(f"Unexpected characters in polynomial '{text}'")
    for name in _IDENTIFIER.findall(text):
        if name not in split.names:
            raise InputError(f"Unknown variable '{name}' in '{text}'")
    symbols = {name: sympy.Symbol(name) for name in split.names}
    try:
        expr = parse_expr(text, local_dict=dict(symbols), transformations=_TRANSFORMS)
        parsed = sympy.Poly(expr, *[symbols[name] for name in split.names], domain=sympy.QQ)
    except Exception as exc:
        # SyntaxError, TokenError, SympifyError and PolynomialError all land here
        raise InputError(f"Cannot parse polynomial '{text}': {exc}") from exc
    terms = {tuple(monom): Fraction(int(c.p), int(c.q)) for monom, c in parsed.terms()}
    return Poly.from_terms(field, split, terms, truncation)


# orders


def order_origin(f: Poly) -> Order:
    """Minimal total degree of a term; infinity for the zero polynomial."""
    if f.is_zero():
        return INFINITY
    return min(sum(exps) for exps in f.element)


def order_along(f: Poly, names: Iterable[str]) -> Order:
    """Minimal partial degree in ``names`` over the terms of f."""
    names = list(names)
    if not names:
        raise InputError("order_along needs at least one variable")
    idx = f.split.indices(names)
    if f.is_zero():
        return INFINITY
    return min(sum(exps[i] for i in idx) for exps in f.element)


def order_modulo_base(f: Poly) -> Order:
    """Order of f modulo the ideal of the base variables (u and t)."""
    base_idx = f.split.indices(f.split.base_names)
    degrees = [sum(exps) for exps in f.element if not any(exps[i] for i in base_idx)]
    return min(degrees) if degrees else INFINITY


def order_at(f: Poly, point: Mapping[str, Number]) -> Order:
    """Order of f at a rational point, given by coordinates of the nonzero variables."""
    assignment = {}
    for name, value in point.items():
        if value:
            assignment[name] = Poly.variable(f.field, f.split, name) + Fraction(value)
    return order_origin(substitute(f, assignment) if assignment else f)


def initial_form(f: Poly, b: Number) -> Poly:
    """in(f, b): the degree-b part of f, zero when b is not a positive integer."""
    b = Fraction(b)
    if b <= 0:
        raise InputError(f"Weight must be positive, got {b}")
    if f.is_zero():
        return f
    if b > order_origin(f):
        raise PreconditionError(f"in(f, {b}) is undefined: ord(f) = {order_origin(f)} < {b}")
    if b.denominator != 1:
        return Poly.zero(f.field, f.split)
    return f.homogeneous_part(int(b))


# differential operators


def _multi_index(M: Union[Sequence[int], Mapping[str, int]], split: VarSplit) -> Monomial:
    if isinstance(M, Mapping):
        return split.exponent(M)
    M = tuple(int(k) for k in M)
    if len(M) != len(split.names) or min(M, default=0) < 0:
        raise InputError(f"Multi-index {M} does not fit the variables {list(split.names)}")
    return M


def hasse_derive(M: Union[Sequence[int], Mapping[str, int]], f: Poly) -> Poly:
    """D_M(t^E) = binom(E, M) t^(E-M), binomials reduced into the field."""
    M = _multi_index(M, f.split)
    convert = f.field.domain.convert
    terms = {}
    for exps, c in f.element.items():
        if any(e < m for e, m in zip(exps, M)):
            continue
        weight = 1
        for e, m in zip(exps, M):
            weight *= math.comb(e, m)
        terms[tuple(e - m for e, m in zip(exps, M))] = c * convert(weight)
    return Poly._from_elements(f.field, f.split, terms, f.truncation, f.truncated)


def hasse_derive_log(M: Union[Sequence[int], Mapping[str, int]], f: Poly) -> Poly:
    """Logarithmic operator t^M D_M; its support stays inside the support of f."""
    M = _multi_index(M, f.split)
    return hasse_derive(M, f) * Poly.monomial(f.field, f.split, M)


def multi_indices(n: int, m: int) -> Iterator[Monomial]:
    """All exponent vectors of length n and total degree m, in lexicographic order (descending)."""
    if n == 0:
        if m == 0:
            yield ()
        return
    for first in range(m, -1, -1):
        for rest in multi_indices(n - 1, m - first):
            yield (first,) + rest


def monomials_of_degree(n: int, d: int) -> List[Monomial]:
    return list(multi_indices(n, d))


# substitution


def substitute(f: Poly, assignment: Mapping[str, Poly], target: Optional[VarSplit] = None) -> Poly:
    """
    Ring homomorphism image of f under name -> Poly.

    Unassigned variables map to themselves in ``target`` (default: f's split).
    The truncation degree of the result is the smallest one involved.
    """
    target = target or f.split
    ring = Poly.ring(f.field, target)
    images: Dict[str, Poly] = {}
    bound = f.truncation
    truncated = f.truncated
    for name in f.split.names:
        if name in assignment:
            image = assignment[name]
            if image.field != f.field or image.split.names != target.names:
                raise InputError(f"Replacement for '{name}' lives over a different ring")
            bound = _min_bound(bound, image.truncation)
            truncated = truncated or image.truncated
        else:
            image = Poly.variable(f.field, target, name)
        images[name] = image
    unknown = set(assignment) - set(f.split.names)
    if unknown:
        raise InputError(f"Cannot substitute unknown variables {sorted(unknown)}")

    powers: Dict[str, List[object]] = {name: [ring.one] for name in f.split.names}
    dropped = [False]

    def cut(element):
        if bound is None:
            return element
        element, lost = _truncate_element(element, bound)
        dropped[0] = dropped[0] or lost
        return element

    def power(name: str, k: int):
        cache = powers[name]
        while len(cache) <= k:
            cache.append(cut(cache[-1] * images[name].element))
        return cache[k]

    result = ring.zero
    for exps, c in f.element.items():
        term = ring.ground_new(c)
        for name, k in zip(f.split.names, exps):
            if k:
                term = cut(term * power(name, k))
        result = result + term
    return Poly(f.field, target, result, bound, truncated or dropped[0])
