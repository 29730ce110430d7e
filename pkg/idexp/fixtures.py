"""Built-in problem documents for the worked examples."""

import copy
from typing import Dict, List

from .document import ProblemDocument
from .errors import InputError


def _two_presentations(d: int) -> dict:
    head = f"z^{d} - x^{d - 1}*y^{d - 1}"
    return {
        "field": "Q",
        "variables": {"u": ["x", "y"], "y": ["t", "z"]},
        "pairs": [
            {"generators": [head], "b": str(d)},
            {"generators": ["t"], "b": "1"},
        ],
        "compare": [
            {"generators": [head], "b": str(d)},
            {"generators": [f"t^{d - 1} - x^{d - 2}*y^{d - 1}"], "b": str(d - 1)},
        ],
    }


FIXTURES: Dict[str, dict] = {
    "delta-five": {
        "field": "Q",
        "variables": {"u": ["u1", "u2"], "y": ["y"]},
        "pairs": [{"generators": ["y^2 + u1^7*u2^3"], "b": "2"}],
    },
    "delta-five-z": {
        "field": "Q",
        "variables": {"u": ["u1", "u2"], "y": ["z"]},
        "pairs": [{"generators": ["z^2 + 2*z*u1^2 + u1^4 + u1^7*u2^3"], "b": "2"}],
    },
    "delta-five-z-f5": {
        "field": {"Fp": 5},
        "variables": {"u": ["u1", "u2"], "y": ["z"]},
        "pairs": [{"generators": ["z^2 + 2*z*u1^2 + u1^4 + u1^7*u2^3"], "b": "2"}],
    },
    "char3-pair-vs-ideal": {
        "field": {"Fp": 3},
        "variables": {"u": ["u1", "u2"], "y": ["z1", "z2"]},
        "pairs": [{"generators": ["z1^2 + u1^3", "z2^3 + z2^2*u2^2 + u2^9"], "b": "2"}],
    },
    "hidden-directrix-y": {
        "field": {"Fp": 3},
        "variables": {"u": ["u1", "u2", "u3"], "y": ["y1", "y2"]},
        "pairs": [{"generators": ["y1^2 + u1^5", "u3*y2 + (y2 + u2^2)^3"], "b": "2"}],
    },
    "hidden-directrix-z": {
        "field": {"Fp": 3},
        "variables": {"u": ["u1", "u2", "u3"], "y": ["z1", "z2"]},
        "pairs": [{"generators": ["z1^2 + u1^5", "u3*z2 - u2^2*u3 + z2^3"], "b": "2"}],
    },
    "delta-one": {
        "field": "Q",
        "variables": {"u": ["u1", "u2", "u3"], "y": ["y"]},
        "pairs": [{"generators": ["y^2 + u3*y + u1^3"], "b": "2"}],
    },
    "cusps": {
        "field": "Q",
        "variables": {"u": ["x"], "y": ["y"]},
        "pairs": [{"generators": ["y^2 + x^3"], "b": "2"}],
        "compare": [{"generators": ["x^2 + y^3"], "b": "2"}],
    },
    "different-orders": {
        "field": "Q",
        "variables": {"u": [], "y": ["y"]},
        "pairs": [{"generators": ["y^3"], "b": "2"}],
        "compare": [{"generators": ["y^3"], "b": "3"}],
    },
    "max-contact-choices": {
        "field": "Q",
        "variables": {"u": ["u1", "u2"], "y": ["y"]},
        "pairs": [{"generators": ["(y + u1^2)^2", "(y + u1^2 + u2^3)^2 + u1^5*u2^5"], "b": "2"}],
    },
}
FIXTURES.update({f"two-presentations-d{d}": _two_presentations(d) for d in range(2, 6)})


def fixture_names() -> List[str]:
    return sorted(FIXTURES)


def fixture_data(name: str) -> dict:
    if name not in FIXTURES:
        raise InputError(f"Unknown fixture '{name}'; known fixtures: {', '.join(fixture_names())}")
    return copy.deepcopy(FIXTURES[name])


def load_fixture(name: str) -> ProblemDocument:
    return ProblemDocument.model_validate(fixture_data(name))
