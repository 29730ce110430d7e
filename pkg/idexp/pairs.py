"""
Pairs (J, b), their intersections and the algebra around them.

1. Pair / PairSystem hold generators with a positive rational weight.
2. Orders follow the idealistic convention: ord(J)/b when ord(J) >= b, else 0.
3. power_pair, merge_pairs and product_pair build new pairs from old ones.
4. transform_blowup and run_lsb execute coordinate blow-ups in the chart of one variable.
5. diff_closure / diff_saturation append derived pairs (D_M J, b - |M|).
6. probe_equivalence and search_s_alpha_beta look for a blow-up sequence that is
   permissible for one system and not the other. Finding none proves nothing.
"""

import itertools
import logging
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from . import config
from .algebra import (INFINITY, Field, Monomial, Number, Order, Poly, VarSplit, hasse_derive,
                      multi_indices, order_along, order_at, order_origin, substitute)
from .errors import InputError, PreconditionError, SearchBudgetExceeded

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Pair:
    """An ideal given by generators, with an assigned weight b > 0."""

    field: Field
    split: VarSplit
    generators: Tuple[Poly, ...]
    b: Fraction

    def __post_init__(self):
        b = Fraction(self.b)
        if b <= 0:
            raise InputError(f"Pair weight must be positive, got {b}")
        object.__setattr__(self, "b", b)
        gens = tuple(g for g in self.generators if not g.is_zero())
        for g in gens:
            if g.field != self.field or g.split.names != self.split.names:
                raise InputError("All generators of a pair must share the field and the variable split")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def of(cls, generators: Sequence[Poly], b: Number, field: Optional[Field] = None,
           split: Optional[VarSplit] = None) -> "Pair":
        if field is None or split is None:
            if not generators:
                raise InputError("An empty pair needs an explicit field and split")
            field, split = generators[0].field, generators[0].split
        return cls(field, split, tuple(generators), Fraction(b))

    @classmethod
    def parse(cls, texts: Sequence[str], b: Number, field: Field, split: VarSplit,
              truncation: Optional[int] = None) -> "Pair":
        return cls(field, split, tuple(Poly.parse(t, field, split, truncation) for t in texts), Fraction(b))

    @property
    def is_zero(self) -> bool:
        return not self.generators

    @property
    def truncated(self) -> bool:
        return any(g.truncated for g in self.generators)

    def reindex(self, split: VarSplit) -> "Pair":
        return Pair(self.field, split, tuple(g.reindex(split) for g in self.generators), self.b)

    def rename(self, split: VarSplit) -> "Pair":
        return Pair(self.field, split, tuple(g.rename(split) for g in self.generators), self.b)

    def replace(self, generators: Sequence[Poly]) -> "Pair":
        return Pair(self.field, self.split, tuple(generators), self.b)

    def __str__(self):
        gens = ", ".join(g.to_text() for g in self.generators) or "0"
        return f"(<{gens}>, {self.b})"


@dataclass(frozen=True)
class PairSystem:
    """Intersection E_1 ∩ ... ∩ E_k of pairs over one field and split."""

    components: Tuple[Pair, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise InputError("A pair system needs at least one component")
        first = comps[0]
        for comp in comps[1:]:
            if comp.field != first.field or comp.split.names != first.split.names:
                raise InputError("All components must share the field and the variable split")
        object.__setattr__(self, "components", comps)

    @classmethod
    def of(cls, *pairs: Pair) -> "PairSystem":
        return cls(tuple(pairs))

    @property
    def field(self) -> Field:
        return self.components[0].field

    @property
    def split(self) -> VarSplit:
        return self.components[0].split

    @property
    def truncated(self) -> bool:
        return any(c.truncated for c in self.components)

    def intersect(self, other: "PairSystem") -> "PairSystem":
        return PairSystem(self.components + other.components)

    def reindex(self, split: VarSplit) -> "PairSystem":
        return PairSystem(tuple(c.reindex(split) for c in self.components))

    def __iter__(self) -> Iterator[Pair]:
        return iter(self.components)

    def __len__(self):
        return len(self.components)


def as_system(value: Union[Pair, PairSystem]) -> PairSystem:
    return value if isinstance(value, PairSystem) else PairSystem((value,))


# orders


def ord_ideal(E: Pair) -> Order:
    """ord(J): the minimum order over the generators (infinity for the zero ideal)."""
    return min((order_origin(g) for g in E.generators), default=INFINITY)


def ord_origin_pair(E: Pair) -> Union[Fraction, float]:
    o = ord_ideal(E)
    if o == INFINITY:
        return INFINITY
    return Fraction(o) / E.b if o >= E.b else Fraction(0)


def ord_origin_system(S: PairSystem) -> Union[Fraction, float]:
    return min(ord_origin_pair(E) for E in S)


def in_singular_locus(S: Union[Pair, PairSystem], point: Mapping[str, Number]) -> bool:
    """Whether ord_x(J_i) >= b_i for every component at the given point."""
    for E in as_system(S):
        order = min((order_at(g, point) for g in E.generators), default=INFINITY)
        if order < E.b:
            return False
    return True


def coordinate_points(split: VarSplit) -> List[dict]:
    """The origin and the unit points on each coordinate axis."""
    return [{}] + [{name: 1} for name in split.names]


# pair algebra


def _products(generators: Sequence[Poly], a: int) -> List[Poly]:
    products = []
    for combo in itertools.combinations_with_replacement(generators, a):
        product = combo[0]
        for g in combo[1:]:
            product = product * g
        products.append(product)
    return products


def power_pair(E: Pair, a: int) -> Pair:
    """(J^a, a·b): all a-fold products of the generators."""
    if a < 1:
        raise InputError(f"Power must be a positive integer, got {a}")
    if a == 1 or E.is_zero:
        return Pair(E.field, E.split, E.generators, E.b * a)
    return Pair(E.field, E.split, tuple(_products(E.generators, a)), E.b * a)


def clear_denominator(E: Pair) -> Pair:
    return power_pair(E, E.b.denominator) if E.b.denominator != 1 else E


def merge_pairs(S: PairSystem, m: int) -> Pair:
    """Single pair (J_1^{m/b_1} + ... + J_k^{m/b_k}, m)."""
    generators: List[Poly] = []
    for E in S:
        if E.b.denominator != 1 or m % int(E.b):
            raise InputError(f"Weight {E.b} is not an integer dividing {m}; clear denominators with power_pair first")
        for g in power_pair(E, m // int(E.b)).generators:
            if g not in generators:
                generators.append(g)
    return Pair(S.field, S.split, tuple(generators), Fraction(m))


def common_weight(S: PairSystem) -> int:
    """Least common multiple of the (cleared) component weights."""
    return math.lcm(*(int(clear_denominator(E).b) for E in S))


def merge_system(S: PairSystem) -> Pair:
    """merge_pairs after clearing denominators, at the least common weight."""
    cleared = PairSystem(tuple(clear_denominator(E) for E in S))
    return merge_pairs(cleared, common_weight(cleared))


@dataclass(frozen=True)
class ProductPair:
    pair: Pair
    relation: str  # "equivalent-at-origin" or "inclusion-only"


def product_pair(E1: Pair, E2: Pair) -> ProductPair:
    """(J_1·J_2, b_1 + b_2), flagged by whether Sing(J_i, b_i + 1) is empty at coordinate points."""
    if E1.field != E2.field or E1.split.names != E2.split.names:
        raise InputError("Product pairs need a common field and split")
    generators = [g1 * g2 for g1 in E1.generators for g2 in E2.generators]
    product = Pair(E1.field, E1.split, tuple(generators), E1.b + E2.b)
    hypothesis = all(
        not in_singular_locus(Pair(E.field, E.split, E.generators, E.b + 1), point)
        for E in (E1, E2)
        for point in coordinate_points(E1.split)
    )
    return ProductPair(product, "equivalent-at-origin" if hypothesis else "inclusion-only")


# blow-ups


@dataclass(frozen=True)
class BlowupChart:
    center: Tuple[str, ...]
    chart_var: str

    def __post_init__(self):
        center = tuple(self.center)
        if not center:
            raise InputError("A blow-up center needs at least one variable")
        if len(set(center)) != len(center):
            raise InputError(f"Repeated variable in center {list(center)}")
        if self.chart_var not in center:
            raise InputError(f"Chart variable '{self.chart_var}' is not in the center {list(center)}")
        object.__setattr__(self, "center", center)

    @property
    def divisorial(self) -> bool:
        return len(self.center) == 1


@dataclass(frozen=True)
class AdjoinVariable:
    name: str


@dataclass(frozen=True)
class Blowup:
    chart: BlowupChart


Step = Union[AdjoinVariable, Blowup]


@dataclass(frozen=True)
class LSBScript:
    steps: Tuple[Step, ...] = ()

    def __post_init__(self):
        steps = tuple(self.steps)
        adjoined = [s.name for s in steps if isinstance(s, AdjoinVariable)]
        if len(set(adjoined)) != len(adjoined):
            raise InputError("Adjoined variable names must be fresh")
        object.__setattr__(self, "steps", steps)

    def validate(self, split: VarSplit) -> None:
        names = set(split.names)
        for step in self.steps:
            if isinstance(step, AdjoinVariable):
                if step.name in names:
                    raise InputError(f"Adjoined variable '{step.name}' is not fresh")
                if not step.name.isidentifier():
                    raise InputError(f"Invalid variable name {step.name!r}")
                names.add(step.name)
            elif isinstance(step, Blowup):
                unknown = set(step.chart.center) - names
                if unknown:
                    raise InputError(f"Center uses unknown variables {sorted(unknown)}")
            else:
                raise InputError(f"Malformed script step {step!r}")

    def __add__(self, other: "LSBScript") -> "LSBScript":
        return LSBScript(self.steps + other.steps)

    def __len__(self):
        return len(self.steps)


@dataclass(frozen=True)
class BlowupResult:
    pair: Optional[Pair]
    permissible: bool


def adjoin_variable(E: Pair, name: str) -> Pair:
    return E.reindex(E.split.with_t(name))


def is_permissible(E: Pair, center: Sequence[str]) -> bool:
    """Center V(center) ⊆ Sing(E): min partial degree in the center is at least b."""
    return min((order_along(g, center) for g in E.generators), default=INFINITY) >= E.b


def transform_blowup(E: Pair, chart: BlowupChart) -> BlowupResult:
    """Controlled transform in the chart of ``chart.chart_var``; weights are cleared first."""
    E.split.indices(chart.center)
    E = clear_denominator(E)
    if not is_permissible(E, chart.center):
        return BlowupResult(None, False)
    if E.is_zero:
        return BlowupResult(E, True)
    b = int(E.b)
    pivot = Poly.variable(E.field, E.split, chart.chart_var)
    assignment = {w: pivot * Poly.variable(E.field, E.split, w) for w in chart.center if w != chart.chart_var}
    k = E.split.index(chart.chart_var)
    generators = []
    for g in E.generators:
        image = substitute(g, assignment) if assignment else g
        divided = {}
        for exps, c in image.items():
            if exps[k] < b:
                raise PreconditionError(f"Inexact division by {chart.chart_var}^{b}")
            divided[exps[:k] + (exps[k] - b,) + exps[k + 1:]] = c
        generators.append(Poly._from_elements(E.field, E.split, divided, image.truncation, image.truncated))
    return BlowupResult(E.replace(generators), True)


def transform_system(S: PairSystem, chart: BlowupChart) -> Tuple[Optional[PairSystem], Tuple[bool, ...]]:
    results = [transform_blowup(E, chart) for E in S]
    verdicts = tuple(r.permissible for r in results)
    if not all(verdicts):
        return None, verdicts
    return PairSystem(tuple(r.pair for r in results)), verdicts


@dataclass(frozen=True)
class StepRecord:
    index: int
    step: Step
    verdicts: Tuple[Optional[bool], ...]
    components: Tuple[Optional[Pair], ...]


@dataclass(frozen=True)
class LSBTrace:
    initial: PairSystem
    records: Tuple[StepRecord, ...]
    stopped_at: Optional[int]

    @property
    def completed(self) -> bool:
        return self.stopped_at is None

    @property
    def final(self) -> Tuple[Optional[Pair], ...]:
        return self.records[-1].components if self.records else self.initial.components


def run_lsb(S: Union[Pair, PairSystem], script: LSBScript,
            designated: Optional[Iterable[int]] = None) -> LSBTrace:
    """
    Execute ``script`` componentwise, recording permissibility per step.

    Stops at the first step that is not permissible for a designated component
    (all components by default). Other components that fail are dropped from
    later steps and show ``None``.
    """
    S = as_system(S)
    if not isinstance(script, LSBScript):
        raise InputError("run_lsb needs an LSBScript")
    script.validate(S.split)
    designated = set(range(len(S))) if designated is None else set(designated)
    if not designated <= set(range(len(S))):
        raise InputError(f"Designated components {sorted(designated)} out of range")

    state: List[Optional[Pair]] = list(S.components)
    records = []
    stopped_at = None
    for index, step in enumerate(script.steps):
        if isinstance(step, AdjoinVariable):
            state = [adjoin_variable(E, step.name) if E is not None else None for E in state]
            verdicts = tuple(True if E is not None else None for E in state)
        else:
            results = [transform_blowup(E, step.chart) if E is not None else None for E in state]
            verdicts = tuple(r.permissible if r is not None else None for r in results)
            state = [r.pair if r is not None and r.permissible else None for r in results]
        records.append(StepRecord(index, step, verdicts, tuple(state)))
        if any(verdicts[j] is False for j in designated):
            stopped_at = index
            logger.debug("LSB stopped at step %d: verdicts %s", index, verdicts)
            break
    return LSBTrace(S, tuple(records), stopped_at)


def s_alpha_beta(alpha: int, beta: int, names: Sequence[str], t: str = "t") -> LSBScript:
    """Adjoin t, blow up the origin alpha times in the t-chart, then V(t) beta times."""
    if alpha < 0 or beta < 0:
        raise InputError("alpha and beta must be nonnegative")
    if t in names:
        raise InputError(f"Variable '{t}' is not fresh")
    everything = tuple(names) + (t,)
    steps: List[Step] = [AdjoinVariable(t)]
    steps += [Blowup(BlowupChart(everything, t))] * alpha
    steps += [Blowup(BlowupChart((t,), t))] * beta
    return LSBScript(tuple(steps))


def fresh_name(names: Iterable[str], stem: str = "t") -> str:
    taken = set(names)
    if stem not in taken:
        return stem
    return next(f"{stem}{i}" for i in itertools.count(1) if f"{stem}{i}" not in taken)


def _run_verdict(S: PairSystem, script: LSBScript) -> bool:
    return run_lsb(S, script).completed


def order_gap_script(E1: Pair, E2: Pair) -> LSBScript:
    """S(alpha_0, beta_0) with alpha_0 = b_1·b_2 and beta_0 = (ord(E_1) - 1)·alpha_0."""
    E1, E2 = clear_denominator(E1), clear_denominator(E2)
    o1, o2 = ord_origin_pair(E1), ord_origin_pair(E2)
    if not o1 > o2 or o1 == INFINITY:
        raise PreconditionError(f"Needs ord(E1) > ord(E2) with finite ord(E1), got {o1} and {o2}")
    alpha = int(E1.b * E2.b)
    beta = math.ceil((o1 - 1) * alpha)
    return s_alpha_beta(alpha, beta, E1.split.names, fresh_name(E1.split.names))


@dataclass(frozen=True)
class ProbeResult:
    witness: Optional[LSBScript]
    permissible_for: Optional[str]
    explored: int

    @property
    def found(self) -> bool:
        return self.witness is not None


def search_s_alpha_beta(S1: Union[Pair, PairSystem], S2: Union[Pair, PairSystem],
                        max_alpha: int = 6, max_beta: int = 6) -> ProbeResult:
    """First S(alpha, beta) in (alpha + beta, alpha) order permissible for exactly one side."""
    S1, S2 = as_system(S1), as_system(S2)
    t = fresh_name(S1.split.names)
    pairs = sorted(itertools.product(range(max_alpha + 1), range(max_beta + 1)), key=lambda ab: (sum(ab), ab[0]))
    explored = 0
    for alpha, beta in pairs:
        explored += 1
        script = s_alpha_beta(alpha, beta, S1.split.names, t)
        first, second = _run_verdict(S1, script), _run_verdict(S2, script)
        if first != second:
            logger.debug("S(%d, %d) separates the systems", alpha, beta)
            return ProbeResult(script, "first" if first else "second", explored)
    return ProbeResult(None, None, explored)


def _charts(names: Sequence[str]) -> Iterator[BlowupChart]:
    for size in range(1, len(names) + 1):
        for center in itertools.combinations(names, size):
            for chart_var in center:
                yield BlowupChart(center, chart_var)


def _origin_singular(S: PairSystem) -> bool:
    return all(ord_ideal(E) >= E.b for E in S)


def probe_equivalence(S1: Union[Pair, PairSystem], S2: Union[Pair, PairSystem],
                      depth: int = config.DEFAULT_SEARCH_DEPTH, extensions: int = 1,
                      budget: int = config.PROBE_NODE_BUDGET) -> ProbeResult:
    """
    Breadth-first search for a coordinate blow-up sequence separating two systems.

    ``extensions`` fresh variables are adjoined first; ``depth`` bounds the number
    of blow-ups. A witness is permissible for exactly one side at its last step.
    """
    S1, S2 = as_system(S1), as_system(S2)
    if S1.field != S2.field or S1.split.names != S2.split.names:
        raise InputError("Probed systems must share the field and variable split")
    prefix: List[Step] = []
    names = list(S1.split.names)
    for _ in range(extensions):
        name = fresh_name(names)
        prefix.append(AdjoinVariable(name))
        names.append(name)
        S1 = PairSystem(tuple(adjoin_variable(E, name) for E in S1))
        S2 = PairSystem(tuple(adjoin_variable(E, name) for E in S2))

    queue = deque([(tuple(prefix), S1, S2, 0)])
    explored = 0
    while queue:
        steps, left, right, level = queue.popleft()
        if level >= depth:
            continue
        for chart in _charts(left.split.names):
            explored += 1
            if explored > budget:
                raise SearchBudgetExceeded(f"probe_equivalence explored more than {budget} charts")
            ok_left = all(is_permissible(clear_denominator(E), chart.center) for E in left)
            ok_right = all(is_permissible(clear_denominator(E), chart.center) for E in right)
            if ok_left != ok_right:
                script = LSBScript(steps + (Blowup(chart),))
                return ProbeResult(script, "first" if ok_left else "second", explored)
            if not ok_left:
                continue
            next_left, _ = transform_system(left, chart)
            next_right, _ = transform_system(right, chart)
            if not _origin_singular(next_left) and not _origin_singular(next_right):
                continue
            queue.append((steps + (Blowup(chart),), next_left, next_right, level + 1))
    return ProbeResult(None, None, explored)


# Diff closures


def derived_pair(E: Pair, M: Monomial) -> Optional[Pair]:
    """(<D_M f : f in J>, b - |M|), or None when every derivative vanishes."""
    m = sum(M)
    if m >= E.b:
        return None
    generators = [d for d in (hasse_derive(M, f) for f in E.generators) if not d.is_zero()]
    if not generators:
        return None
    return Pair(E.field, E.split, tuple(generators), E.b - m)


def diff_closure(S: Union[Pair, PairSystem], m: int) -> PairSystem:
    """Append (D_M J, b - m) for every component with m < b and every |M| = m."""
    S = as_system(S)
    if m < 1:
        raise InputError("diff_closure needs m >= 1")
    n = len(S.split.names)
    components = list(S.components)
    for E in S:
        if m >= E.b:
            continue
        for M in multi_indices(n, m):
            derived = derived_pair(E, M)
            if derived is not None:
                components.append(derived)
    return PairSystem(tuple(components))


def _pair_key(E: Pair):
    return frozenset(g.monic() for g in E.generators), E.b


def diff_saturation(S: Union[Pair, PairSystem],
                    max_components: int = config.SATURATION_MAX_COMPONENTS) -> PairSystem:
    """Iterate diff_closure over 1 <= m < b until no new component appears."""
    S = as_system(S)
    n = len(S.split.names)
    seen = {_pair_key(E) for E in S}
    components = list(S.components)
    frontier = list(S.components)
    while frontier:
        fresh = []
        for E in frontier:
            for m in range(1, math.ceil(E.b)):
                for M in multi_indices(n, m):
                    derived = derived_pair(E, M)
                    if derived is None or _pair_key(derived) in seen:
                        continue
                    seen.add(_pair_key(derived))
                    fresh.append(derived)
                    if len(components) + len(fresh) > max_components:
                        raise SearchBudgetExceeded(f"Diff-saturation exceeded {max_components} components")
        components.extend(fresh)
        frontier = fresh
    return PairSystem(tuple(components))
