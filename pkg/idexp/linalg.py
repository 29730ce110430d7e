"""Exact row reduction over QQ and GF(p) on top of sympy's DomainMatrix."""

from typing import List, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

from .algebra import Field

Row = List[object]


class Echelon:
    """Reduced row echelon basis of a row space, with its pivot columns."""

    __slots__ = ("field", "width", "rows", "pivots")

    def __init__(self, field: Field, width: int, rows: Sequence[Row] = ()):
        self.field = field
        self.width = width
        self.rows: List[Row] = []
        self.pivots: Tuple[int, ...] = ()
        nonzero = [list(row) for row in rows if any(row)]
        if nonzero and width:
            matrix = DomainMatrix(nonzero, (len(nonzero), width), field.domain)
            reduced, pivots = matrix.rref()
            self.rows = reduced.to_list()[:len(pivots)]
            self.pivots = tuple(pivots)

    @property
    def dimension(self) -> int:
        return len(self.rows)

    def reduce(self, vector: Sequence[object]) -> Row:
        """Remainder of ``vector`` modulo the row space."""
        vector = list(vector)
        for row, pivot in zip(self.rows, self.pivots):
            factor = vector[pivot]
            if factor:
                vector = [a - factor * b for a, b in zip(vector, row)]
        return vector

    def contains(self, vector: Sequence[object]) -> bool:
        return not any(self.reduce(vector))

    def extended(self, rows: Sequence[Row]) -> "Echelon":
        return Echelon(self.field, self.width, self.rows + [list(row) for row in rows])

    def __eq__(self, other):
        if not isinstance(other, Echelon):
            return NotImplemented
        return self.width == other.width and self.pivots == other.pivots and self.rows == other.rows

    def canonical(self) -> List[List[object]]:
        to_fraction = self.field.to_fraction
        return [[to_fraction(x) for x in row] for row in self.rows]


def zero_row(field: Field, width: int) -> Row:
    return [field.domain.zero] * width


def intersect(a: Echelon, b: Echelon) -> Echelon:
    """Basis of the intersection of two row spaces (Zassenhaus)."""
    width = a.width
    if not a.rows or not b.rows:
        return Echelon(a.field, width)
    zero = zero_row(a.field, width)
    stacked = [row + row for row in a.rows] + [row + zero for row in b.rows]
    joint = Echelon(a.field, 2 * width, stacked)
    meet = [row[width:] for row, pivot in zip(joint.rows, joint.pivots) if pivot >= width]
    return Echelon(a.field, width, meet)
