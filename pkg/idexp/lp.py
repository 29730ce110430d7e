"""
Exact feasibility of {x >= 0 : A x = b} over the rationals.

Phase one of the tableau simplex: one artificial column per row, minimise
their sum. Pivots follow Bland's rule (smallest entering index, ties in the
ratio test broken by the smallest basic index), so degenerate systems cannot
cycle. All arithmetic is on ``Fraction``.
"""

import logging
from fractions import Fraction
from typing import List, Sequence

from .errors import InputError

logger = logging.getLogger(__name__)

Row = List[Fraction]


class Tableau:
    """Rows [A | I | b] with a reduced-cost row for the sum of the artificials."""

    def __init__(self, A: Sequence[Sequence], b: Sequence):
        m = len(A)
        n = len(A[0]) if m else 0
        if len(b) != m or any(len(row) != n for row in A):
            raise InputError("Constraint matrix and right-hand side do not match")
        self.m, self.n = m, n
        self.rows: List[Row] = []
        for i, (row, rhs) in enumerate(zip(A, b)):
            row = [Fraction(x) for x in row]
            rhs = Fraction(rhs)
            if rhs < 0:
                row, rhs = [-x for x in row], -rhs
            unit = [Fraction(int(k == i)) for k in range(m)]
            self.rows.append(row + unit + [rhs])
        self.basis = [n + i for i in range(m)]
        width = n + m + 1
        self.cost = [Fraction(0)] * width
        for row in self.rows:
            for j in range(width):
                if j < n or j == width - 1:
                    self.cost[j] -= row[j]
        self.pivots = 0

    @property
    def infeasibility(self) -> Fraction:
        return -self.cost[-1]

    def _entering(self):
        for j in range(self.n + self.m):
            if self.cost[j] < 0:
                return j
        return None

    def _leaving(self, j: int):
        best = None
        for i, row in enumerate(self.rows):
            if row[j] > 0:
                key = (row[-1] / row[j], self.basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        return None if best is None else best[1]

    def pivot(self, i: int, j: int) -> None:
        pivot_row = self.rows[i]
        scale = pivot_row[j]
        pivot_row[:] = [x / scale for x in pivot_row]
        for r, row in enumerate(self.rows):
            if r != i and row[j]:
                factor = row[j]
                row[:] = [x - factor * y for x, y in zip(row, pivot_row)]
        if self.cost[j]:
            factor = self.cost[j]
            self.cost = [x - factor * y for x, y in zip(self.cost, pivot_row)]
        self.basis[i] = j
        self.pivots += 1

    def solve(self) -> Fraction:
        """Run phase one to optimality; returns the minimal sum of the artificials."""
        while True:
            j = self._entering()
            if j is None:
                return self.infeasibility
            i = self._leaving(j)
            # the phase-one objective is bounded below by zero
            assert i is not None
            self.pivot(i, j)


def is_feasible(A: Sequence[Sequence], b: Sequence) -> bool:
    """Whether A x = b has a solution with x >= 0."""
    if not len(A):
        return True
    tableau = Tableau(A, b)
    feasible = tableau.solve() == 0
    logger.debug("phase one: %d pivots, feasible=%s", tableau.pivots, feasible)
    return feasible


def combination_below(points: Sequence[Sequence[Fraction]], target: Sequence[Fraction]) -> bool:
    """Is there a convex combination of ``points`` dominated coordinatewise by ``target``?"""
    if not points:
        return False
    dimension = len(target)
    # columns: one weight per point, then one slack per coordinate
    A = [[p[d] for p in points] + [Fraction(int(k == d)) for k in range(dimension)] for d in range(dimension)]
    A.append([Fraction(1)] * len(points) + [Fraction(0)] * dimension)
    return is_feasible(A, list(target) + [Fraction(1)])
