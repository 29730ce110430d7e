"""idexp: invariants of pairs (J, b) over exact fields."""

from .algebra import Field, Poly, VarSplit
from .errors import IdexpError, InputError, PreconditionError, SearchBudgetExceeded, UnsupportedCharacteristicError
from .pairs import Pair, PairSystem

__all__ = [
    "Field",
    "IdexpError",
    "InputError",
    "Pair",
    "PairSystem",
    "Poly",
    "PreconditionError",
    "SearchBudgetExceeded",
    "UnsupportedCharacteristicError",
    "VarSplit",
]
