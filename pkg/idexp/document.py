"""
Problem documents: the JSON input of the CLI and the HTTP backend.

Example:

    {
      "field": "Q",
      "variables": {"u": ["u1", "u2"], "y": ["y"]},
      "pairs": [{"generators": ["y^2 + u1^7*u2^3"], "b": "2"}],
      "options": {"degree_bound": 64}
    }
"""

from fractions import Fraction
from typing import List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field as PydanticField, field_validator, model_validator

from . import config
from .algebra import Field, VarSplit
from .errors import InputError
from .pairs import AdjoinVariable, Blowup, BlowupChart, LSBScript, Pair, PairSystem
from .polyhedra import NuWeights


def _fraction(value: Union[str, int]) -> Fraction:
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"'{value}' is not a rational number") from None


def fraction_text(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


class PrimeFieldSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    Fp: int

    @field_validator("Fp")
    @classmethod
    def must_be_prime(cls, v):
        Field.prime(v)
        return v


FieldSpec = Union[Literal["Q"], PrimeFieldSpec]


class VariablesSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    u: List[str] = []
    y: List[str] = []

    @model_validator(mode="after")
    def check_names(self):
        VarSplit(tuple(self.u), tuple(self.y))
        return self


class PairSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    generators: List[str]
    b: Union[str, int]

    @field_validator("b")
    @classmethod
    def positive_weight(cls, v):
        if _fraction(v) <= 0:
            raise ValueError(f"Weight must be positive, got {v}")
        return fraction_text(_fraction(v))


class WeightsSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    alpha: List[Union[str, int]]
    beta: List[Union[str, int]]

    @field_validator("alpha", "beta")
    @classmethod
    def positive_entries(cls, v):
        values = [_fraction(x) for x in v]
        if any(x <= 0 for x in values):
            raise ValueError("Valuation weights must be strictly positive")
        return [fraction_text(x) for x in values]


class StepSpec(BaseModel):
    """Either {"adjoin": name} or {"center": [names], "chart": name}."""

    model_config = ConfigDict(extra="forbid")

    adjoin: Optional[str] = None
    center: Optional[List[str]] = None
    chart: Optional[str] = None

    @model_validator(mode="after")
    def one_kind(self):
        if self.adjoin is not None:
            if self.center is not None or self.chart is not None:
                raise ValueError("A step is either an adjoin or a blow-up, not both")
        elif self.center is None or self.chart is None:
            raise ValueError("A blow-up step needs both 'center' and 'chart'")
        return self

    def to_step(self):
        if self.adjoin is not None:
            return AdjoinVariable(self.adjoin)
        return Blowup(BlowupChart(tuple(self.center), self.chart))


class OptionsSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    degree_bound: Optional[int] = PydanticField(default=None, ge=1)
    search_depth: Optional[int] = PydanticField(default=None, ge=0)
    choice: int = PydanticField(default=0, ge=0)


class ProblemDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    field: FieldSpec = "Q"
    variables: VariablesSpec
    pairs: List[PairSpec] = PydanticField(min_length=1)
    compare: Optional[List[PairSpec]] = None
    weights: Optional[WeightsSpec] = None
    script: Optional[List[StepSpec]] = None
    options: OptionsSpec = OptionsSpec()

    @model_validator(mode="after")
    def generators_parse(self):
        self.system()
        if self.compare is not None:
            self.compare_system()
        if self.script is not None:
            self.lsb_script().validate(self.split())
        return self

    def field_object(self) -> Field:
        return Field.rationals() if self.field == "Q" else Field.prime(self.field.Fp)

    def split(self) -> VarSplit:
        return VarSplit(tuple(self.variables.u), tuple(self.variables.y))

    def _system(self, specs: List[PairSpec]) -> PairSystem:
        if not specs:
            raise InputError("A pair list needs at least one pair")
        field, split = self.field_object(), self.split()
        return PairSystem(tuple(Pair.parse(p.generators, _fraction(p.b), field, split) for p in specs))

    def system(self) -> PairSystem:
        return self._system(self.pairs)

    def compare_system(self) -> PairSystem:
        if self.compare is None:
            raise InputError("This command needs a 'compare' pair list")
        return self._system(self.compare)

    def nu_weights(self) -> NuWeights:
        if self.weights is None:
            raise InputError("This command needs 'weights'")
        return NuWeights(tuple(_fraction(a) for a in self.weights.alpha),
                         tuple(_fraction(b) for b in self.weights.beta))

    def lsb_script(self) -> LSBScript:
        if self.script is None:
            raise InputError("This command needs a 'script'")
        return LSBScript(tuple(step.to_step() for step in self.script))

    def effective_options(self, degree_bound: Optional[int] = None,
                          search_depth: Optional[int] = None) -> OptionsSpec:
        """Flags override document options, which override the configured defaults."""
        return OptionsSpec(
            degree_bound=degree_bound or self.options.degree_bound or config.DEFAULT_DEGREE_BOUND,
            search_depth=search_depth if search_depth is not None else (
                self.options.search_depth if self.options.search_depth is not None else config.DEFAULT_SEARCH_DEPTH),
            choice=self.options.choice,
        )

    def normalized(self, options: OptionsSpec) -> dict:
        return self.model_copy(update={"options": options}).model_dump(mode="json", exclude_none=True)
