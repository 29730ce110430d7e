"""Exception hierarchy shared by the library, the CLI and the HTTP backend.

Every error carries a machine-readable ``reason`` that ends up in JSON reports.
"""


class IdexpError(Exception):
    """Base class for all errors raised by idexp."""

    reason = "error"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class InputError(IdexpError, ValueError):
    """Malformed input: bad polynomial text, unknown variables, bad weights."""

    reason = "input-error"


class PreconditionError(InputError):
    """An operation was called outside the domain where it is defined."""

    reason = "precondition"


class UnsupportedCharacteristicError(IdexpError):
    """The requested construction needs char 0 or a characteristic above the weights."""

    reason = "unsupported-characteristic"


class SearchBudgetExceeded(IdexpError):
    """A bounded search ran out of budget before reaching a verdict."""

    reason = "search-budget"


class UndeterminedError(IdexpError):
    """An invariant could not be determined, typically after a search budget ran out."""

    reason = "undetermined"


# reasons that count as honest failures rather than bad input
HONEST_FAILURES = frozenset({
    UnsupportedCharacteristicError.reason,
    SearchBudgetExceeded.reason,
    UndeterminedError.reason,
})
