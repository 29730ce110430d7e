"""
Preparation of pair polyhedra by coordinate translations.

A vertex v of the pair polyhedron is solvable when a translation
y_j -> y_j + c_j u^v removes v without enlarging the polyhedron. ``prepare``
keeps solving vertices until none is left; the minimal coordinate sum of
the result is the delta invariant.
"""

import enum
import itertools
import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from . import config
from .algebra import Number, Poly, VarSplit, substitute
from .cone import LinearSpan, directrix, tangent_cone
from .errors import InputError, PreconditionError, SearchBudgetExceeded
from .pairs import Pair, PairSystem, as_system, clear_denominator
from .polyhedra import OrthantPolyhedron, Point, fraction_json, pair_polyhedron

logger = logging.getLogger(__name__)


class Status(str, enum.Enum):
    PREPARED = "prepared"
    HYPOTHESIS_WARNING = "hypothesis-warning"
    TRUNCATED = "truncated-at-degree-bound"


class Unsolvable(str, enum.Enum):
    NON_INTEGRAL = "non-integral"
    AT_ORIGIN = "moves-the-origin"
    NO_CANDIDATE = "no-candidate"
    BUDGET = "budget-exhausted"


@dataclass(frozen=True)
class TranslationStep:
    """y -> y + c·u^v on the base block."""

    y: str
    c: Fraction
    v: Tuple[int, ...]

    def to_json(self) -> dict:
        return {"y": self.y, "c": fraction_json(self.c), "v": list(self.v)}


@dataclass(frozen=True)
class TranslationTrial:
    accepted: bool
    system: PairSystem
    polyhedron: OrthantPolyhedron


@dataclass(frozen=True)
class VertexSolution:
    vertex: Point
    steps: Tuple[TranslationStep, ...]
    system: PairSystem
    polyhedron: OrthantPolyhedron


@dataclass(frozen=True)
class NotSolvable:
    vertex: Point
    reason: Unsolvable
    message: str


SolveVerdict = Union[VertexSolution, NotSolvable]


def _resplit(S: Union[Pair, PairSystem], split: Optional[VarSplit]) -> PairSystem:
    S = as_system(S)
    if split is not None and split != S.split:
        S = S.reindex(split)
    return PairSystem(tuple(clear_denominator(E) for E in S))


def _base_monomial(split: VarSplit, v: Sequence[int]) -> Tuple[int, ...]:
    base = split.base_names
    if len(v) != len(base):
        raise InputError(f"Exponent {tuple(v)} does not match the base variables {list(base)}")
    return split.exponent(dict(zip(base, v)))


def translate(S: Union[Pair, PairSystem], coefficients: Mapping[str, Number], v: Sequence[int],
              split: Optional[VarSplit] = None) -> PairSystem:
    """Apply y_j -> y_j + c_j·u^v to every generator."""
    S = _resplit(S, split)
    split = S.split
    unknown = set(coefficients) - set(split.y_names)
    if unknown:
        raise InputError(f"Translations act on the y-block only, got {sorted(unknown)}")
    shift = Poly.monomial(S.field, split, _base_monomial(split, v))
    assignment = {y: Poly.variable(S.field, split, y) + shift.scale(Fraction(c))
                  for y, c in coefficients.items() if c}
    if not assignment:
        return S
    return PairSystem(tuple(E.replace([substitute(g, assignment) for g in E.generators]) for E in S))


def try_translation(S: Union[Pair, PairSystem], coefficients: Mapping[str, Number], v: Sequence[int],
                    split: Optional[VarSplit] = None) -> TranslationTrial:
    """Accepted iff the new polyhedron lies inside the old one and misses v."""
    S = _resplit(S, split)
    before = pair_polyhedron(S)
    after_system = translate(S, coefficients, v)
    after = pair_polyhedron(after_system)
    accepted = after.issubset(before) and not after.contains(v)
    return TranslationTrial(accepted, after_system, after)


def _rational_candidates(S: PairSystem, v: Tuple[int, ...]) -> List[Dict[str, Fraction]]:
    """c_j = -K/(B_j·L): L the coefficient of a pure y^B with |B| = b, K that of u^v y^(B - e_j)."""
    split = S.split
    y_idx = split.indices(split.y_names)
    base_idx = split.indices(split.base_names)
    found: Dict[str, Fraction] = {}
    for E in S:
        b = int(E.b)
        for g in E.generators:
            for exps, L in sorted(g.terms().items(), reverse=True):
                if any(exps[i] for i in base_idx) or sum(exps[i] for i in y_idx) != b:
                    continue
                for j, i in enumerate(y_idx):
                    y = split.y_names[j]
                    if not exps[i] or y in found:
                        continue
                    target = list(exps)
                    target[i] -= 1
                    for k, a in zip(base_idx, v):
                        target[k] = a
                    K = g.coefficient(tuple(target))
                    if K:
                        found[y] = -K / (exps[i] * L)
    candidates = []
    if found:
        candidates.append(dict(found))
    for y, c in found.items():
        single = {y: c}
        if single not in candidates:
            candidates.append(single)
    return candidates


def solve_vertex(S: Union[Pair, PairSystem], v: Sequence, split: Optional[VarSplit] = None,
                 budget: int = config.VERTEX_SEARCH_BUDGET) -> SolveVerdict:
    """Find a translation removing the vertex v, or say why there is none."""
    S = _resplit(S, split)
    P = pair_polyhedron(S)
    vertex = tuple(Fraction(x) for x in v)
    if vertex not in P.vertices:
        raise InputError(f"{tuple(str(x) for x in vertex)} is not a vertex of the pair polyhedron")
    if any(x.denominator != 1 for x in vertex):
        return NotSolvable(vertex, Unsolvable.NON_INTEGRAL, "a vertex with a non-integral coordinate is never solvable")
    if not any(vertex):
        return NotSolvable(vertex, Unsolvable.AT_ORIGIN, "y -> y + c does not fix the origin")
    exps = tuple(int(x) for x in vertex)
    names = S.split.y_names
    if S.field.p == 0:
        candidates = _rational_candidates(S, exps)
    else:
        values = range(S.field.p)
        candidates = ({y: Fraction(c) for y, c in zip(names, combo) if c}
                      for combo in itertools.product(values, repeat=len(names)) if any(combo))
    for tried, coefficients in enumerate(candidates):
        if tried >= budget:
            return NotSolvable(vertex, Unsolvable.BUDGET, f"stopped after {budget} candidate translations")
        trial = try_translation(S, coefficients, exps)
        if trial.accepted:
            steps = tuple(TranslationStep(y, Fraction(c), exps) for y, c in coefficients.items())
            logger.debug("Solved vertex %s with %s", exps, coefficients)
            return VertexSolution(vertex, steps, trial.system, trial.polyhedron)
    return NotSolvable(vertex, Unsolvable.NO_CANDIDATE, "no translation removes the vertex")


def directrix_hypothesis(S: Union[Pair, PairSystem], split: Optional[VarSplit] = None) -> Tuple[bool, str]:
    """Whether the y-block spans the directrix of the tangent cone."""
    S = _resplit(S, split)
    try:
        span = directrix(tangent_cone(S))
    except PreconditionError as exc:
        return False, exc.message
    except SearchBudgetExceeded:
        return False, "the directrix is undetermined within the search budget"
    graded = S.split.graded()
    if span == LinearSpan.of_variables(S.field, graded, graded.y_names):
        return True, ""
    shown = ", ".join(span.to_text()) or "0"
    return False, f"the directrix <{shown}> is not spanned by the y-block"


@dataclass(frozen=True)
class PreparationReport:
    initial: PairSystem
    system: PairSystem
    steps: Tuple[TranslationStep, ...]
    polyhedron: OrthantPolyhedron
    status: Status
    hypothesis_ok: bool
    note: str = ""
    delta_history: Tuple[Union[Fraction, float], ...] = dc_field(default_factory=tuple)
    unsolvable: Tuple[NotSolvable, ...] = ()

    @property
    def delta(self) -> Union[Fraction, float]:
        return self.polyhedron.delta()

    @property
    def truncated(self) -> bool:
        return self.status == Status.TRUNCATED


def _by_size(p: Point):
    return sum(p), p


def prepare(S: Union[Pair, PairSystem], split: Optional[VarSplit] = None,
            degree_bound: int = config.DEFAULT_DEGREE_BOUND,
            vertex_key: Callable[[Point], object] = _by_size) -> PreparationReport:
    """
    Solve vertices in order of (coordinate sum, lexicographic) until none is solvable.
    ``vertex_key`` replaces that order.

    Stops with a truncated status when the next candidate vertex needs a
    monomial above ``degree_bound``.
    """
    initial = _resplit(S, split)
    hypothesis_ok, note = directrix_hypothesis(initial)
    if not hypothesis_ok:
        logger.warning("Preparation without the directrix hypothesis: %s", note)

    current = initial
    steps: List[TranslationStep] = []
    history = [pair_polyhedron(current).delta()]
    truncated = False
    max_rounds = degree_bound * max(1, current.split.r) + 1
    unsolvable: List[NotSolvable] = []
    for _ in range(max_rounds):
        P = pair_polyhedron(current)
        unsolvable = []
        progress = False
        for vertex in sorted(P.vertices, key=vertex_key):
            integral = all(x.denominator == 1 for x in vertex)
            if integral and sum(vertex) > degree_bound:
                truncated = True
                break
            verdict = solve_vertex(current, vertex)
            if isinstance(verdict, VertexSolution):
                current = verdict.system
                steps.extend(verdict.steps)
                history.append(verdict.polyhedron.delta())
                progress = True
                break
            unsolvable.append(verdict)
        if not progress:
            break
    else:
        truncated = True
    truncated = truncated or current.truncated

    if truncated:
        status = Status.TRUNCATED
    elif not hypothesis_ok:
        status = Status.HYPOTHESIS_WARNING
    else:
        status = Status.PREPARED
    return PreparationReport(initial, current, tuple(steps), pair_polyhedron(current), status,
                             hypothesis_ok, note, tuple(history), tuple(unsolvable))


def replay(S: Union[Pair, PairSystem], steps: Sequence[TranslationStep],
           split: Optional[VarSplit] = None) -> PairSystem:
    """Apply recorded translations one by one."""
    current = _resplit(S, split)
    for step in steps:
        current = translate(current, {step.y: step.c}, step.v)
    return current


@dataclass(frozen=True)
class DeltaReport:
    value: Union[Fraction, float]
    status: Status
    report: PreparationReport


def delta_invariant(S: Union[Pair, PairSystem], split: Optional[VarSplit] = None,
                    degree_bound: int = config.DEFAULT_DEGREE_BOUND) -> DeltaReport:
    report = prepare(S, split, degree_bound)
    if report.polyhedron.is_empty:
        logger.info("Empty prepared polyhedron: delta is infinite")
    return DeltaReport(report.delta, report.status, report)
