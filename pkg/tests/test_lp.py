from fractions import Fraction as F

import pytest

from idexp.errors import InputError
from idexp.lp import Tableau, combination_below, is_feasible


def test_no_combination_below_a_point_off_the_hull():
    assert not combination_below([(0, 1, 0), (0, 0, 1)], (1, 0, 0))
    assert combination_below([(0, 1, 0), (0, 0, 1)], (0, F(1, 2), F(1, 2)))
    assert not combination_below([], (1, 1))


def test_feasibility_of_small_systems():
    assert is_feasible([[1, 1]], [1])
    assert not is_feasible([[1, 1]], [-1])
    assert is_feasible([[1, -1]], [-2])
    assert not is_feasible([[1, 0], [1, 0]], [1, 2])
    assert is_feasible([], [])


def test_degenerate_system_terminates():
    # every basic solution is degenerate: the right-hand side is zero
    A = [[1, -1, 0, 1], [0, 1, -1, 1], [-1, 0, 1, 1]]
    tableau = Tableau(A, [0, 0, 0])
    assert tableau.solve() == 0
    assert tableau.pivots < 50


def test_shape_mismatch():
    with pytest.raises(InputError):
        is_feasible([[1, 2], [1]], [1, 1])
