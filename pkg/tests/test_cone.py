import random
from fractions import Fraction

import pytest

from idexp.algebra import Field, Poly
from idexp.cone import (AdditivePoly, HomogIdeal, LinearSpan, dir_rid_pairs, directrix, enumerate_subspaces,
                        is_generated_in, itc_pair, maximal_contact_directions, ridge, sing_chain_holds, tangent_cone)
from idexp.errors import InputError, PreconditionError, SearchBudgetExceeded, UnsupportedCharacteristicError
from idexp.pairs import Pair, PairSystem, power_pair

from .conftest import pair, random_poly, random_singular_pair, random_split, split_of

Q = Field.rationals()
F2 = Field.prime(2)
F3 = Field.prime(3)
UY = split_of(["u1", "u2"], ["y"])
GRADED = split_of(["X", "Y", "Z"], [])


def ideal(texts, field=Q, split=GRADED):
    return HomogIdeal(field, split, tuple(Poly.parse(t, field, split) for t in texts))


def span(field, split, texts):
    n = len(split.names)
    units = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    rows = []
    for t in texts:
        form = Poly.parse(t, field, split)
        rows.append([field.convert(form.coefficient(unit)) for unit in units])
    return LinearSpan.from_rows(field, split, rows)


def test_tangent_cone_of_the_delta_five_example():
    I = tangent_cone(pair(["y^2 + u1^7*u2^3"], 2, UY))
    assert I.variables == ("U1", "U2", "Y")
    assert I.to_text() == ["Y^2"]


def test_tangent_cone_with_non_integral_weight():
    assert tangent_cone(pair(["y^3"], Fraction(3, 2), UY)).is_zero


def test_tangent_cone_of_an_intersection(fixture_system):
    I = tangent_cone(fixture_system("two-presentations-d2"))
    expected = HomogIdeal(Q, I.split, tuple(Poly.parse(t, Q, I.split) for t in ["Z^2 - X*Y", "T"]))
    assert I.same_ideal(expected)


def test_tangent_cone_needs_a_singular_origin():
    with pytest.raises(PreconditionError):
        tangent_cone(pair(["y + u1^2"], 2, UY))


def test_itc_pair_keeps_weights():
    itc = itc_pair(PairSystem.of(pair(["y^2 + u1^7*u2^3"], 2, UY), pair(["y^3"], Fraction(3, 2), UY)))
    assert [E.b for E in itc] == [2, Fraction(3, 2)]
    assert [g.to_text() for g in itc.components[0].generators] == ["Y^2"]
    assert itc.components[1].is_zero


def test_homog_ideal_membership():
    I = ideal(["X^2 + Y^2", "X*Z"])
    assert I.contains(Poly.parse("X^3 + X*Y^2 + X*Z^2", Q, GRADED))
    assert not I.contains(Poly.parse("Y^2", Q, GRADED))
    with pytest.raises(InputError):
        ideal(["X^2 + Y"])


def test_is_generated_in():
    I = ideal(["X^2 + Y^2"])
    X, Y, Z = (Poly.parse(n, Q, GRADED) for n in "XYZ")
    assert is_generated_in(I, [X, Y])
    assert not is_generated_in(I, [X])
    assert is_generated_in(ideal(["X^2"], F2), [Poly.parse("X^2", F2, GRADED)])


def test_enumerate_subspaces_counts():
    assert len(list(enumerate_subspaces(F2, 3, 1))) == 7
    assert len(list(enumerate_subspaces(F3, 3, 2))) == 13
    assert list(enumerate_subspaces(F2, 2, 0)) == [[]]
    with pytest.raises(UnsupportedCharacteristicError):
        list(enumerate_subspaces(Q, 2, 1))


def test_directrix_examples():
    XY = split_of(["X"], ["Y"])
    assert directrix(ideal(["Y^2"], Q, XY)) == LinearSpan.of_variables(Q, XY, ["Y"])
    assert directrix(ideal(["Z^2 - X*Y"])).dimension == 3
    assert directrix(ideal(["X^2 + Y^2"], F2)) == span(F2, GRADED, ["X + Y"])
    assert directrix(HomogIdeal(Q, GRADED, ())).dimension == 0


def test_ridge_examples():
    assert ridge(ideal(["X^2 + Y^2"], F2)) == (AdditivePoly(2, (Fraction(1), Fraction(1), Fraction(0))),)
    assert ridge(ideal(["Y^3"], F3)) == (AdditivePoly(3, (Fraction(0), Fraction(1), Fraction(0))),)
    in_char_zero = ridge(ideal(["Y^2"]))
    assert all(phi.q == 1 for phi in in_char_zero)
    assert len(in_char_zero) == 1


def test_ridge_budget():
    with pytest.raises(SearchBudgetExceeded):
        ridge(ideal(["X^2*Y + Y^2*Z"], F2), budget=1)


def test_dir_rid_pairs():
    XY = split_of(["x"], ["y"])
    plain = dir_rid_pairs(pair(["y^2"], 2, XY))
    assert [g.to_text() for g in plain.dir_pair.generators] == ["Y"]
    assert plain.dir_pair.b == 1
    assert [(g.to_text(), E.b) for E in plain.rid_system for g in E.generators] == [("Y", 1)]

    result = dir_rid_pairs(Pair.parse(["x^2 + y^2"], 2, F2, XY))
    assert [g.to_text() for g in result.dir_pair.generators] == ["X + Y"]
    assert [(g.to_text(), E.b) for E in result.rid_system for g in E.generators] == [("X^2 + Y^2", 2)]
    assert result.frobenius_check


def test_dir_rid_of_the_zero_cone():
    result = dir_rid_pairs(pair(["y^3"], Fraction(3, 2), UY))
    assert result.dir_pair.is_zero
    assert result.rid_system.components[0].is_zero


@pytest.mark.parametrize("name", ["delta-five", "char3-pair-vs-ideal", "hidden-directrix-y", "two-presentations-d3"])
def test_frobenius_check_on_fixtures(name, fixture_system):
    assert dir_rid_pairs(fixture_system(name)).frobenius_check


def test_sing_chain():
    E = Pair.parse(["x^2 + y^2"], 2, F2, split_of(["x"], ["y"]))
    for point in ({}, {"X": 1}, {"Y": 1}, {"X": 1, "Y": 1}):
        assert sing_chain_holds(E, point), point


def test_maximal_contact_directions():
    single = maximal_contact_directions(pair(["y^2"], 2, split_of(["u"], ["y"])))
    (witness,) = single.witnesses
    assert witness.variable == "Y"
    assert witness.multi_index == (0, 1)
    assert witness.form.to_text() == "Y"

    both = maximal_contact_directions(pair(["y1*y2"], 2, split_of([], ["y1", "y2"])))
    assert [(w.variable, w.multi_index) for w in both.witnesses] == [("Y1", (0, 1)), ("Y2", (1, 0))]


def test_maximal_contact_directions_need_small_weights():
    with pytest.raises(UnsupportedCharacteristicError):
        maximal_contact_directions(Pair.parse(["y^2"], 2, F2, UY))
    with pytest.raises(PreconditionError):
        maximal_contact_directions(pair(["y^3"], 2, UY))


# random suites


def test_tangent_cone_of_a_power():
    rng = random.Random(11)
    for _ in range(50):
        field = rng.choice([Q, F2, F3])
        split = random_split(rng)
        E = random_singular_pair(rng, field, split)
        a = rng.randint(2, 3)
        assert tangent_cone(power_pair(E, a)).same_ideal(tangent_cone(E).power(a)), (field, str(E), a)


def _brute_force_directrix(I):
    n = len(I.variables)
    for k in range(n + 1):
        for rows in enumerate_subspaces(I.field, n, k):
            forms = [Poly.from_terms(I.field, I.split, {tuple(1 if j == i else 0 for j in range(n)): I.field.to_fraction(c)
                                                        for i, c in enumerate(row) if c}) for row in rows]
            if is_generated_in(I, forms):
                return LinearSpan.from_rows(I.field, I.split, rows)
    raise AssertionError("the full space always works")


@pytest.mark.parametrize("field", [F2, F3])
def test_directrix_against_brute_force(field):
    rng = random.Random(field.p)
    for _ in range(12):
        n = rng.randint(2, 3)
        split = split_of(["X", "Y", "Z"][:n], [])
        generators = []
        for _ in range(rng.randint(1, 2)):
            d = rng.randint(1, 3)
            generators.append(random_poly(rng, field, split, max_terms=3, max_degree=d, min_degree=d))
        I = HomogIdeal(field, split, tuple(generators))
        assert directrix(I) == _brute_force_directrix(I), [g.to_text() for g in generators]


def test_tangent_cone_lies_in_the_ridge_algebra():
    rng = random.Random(17)
    for _ in range(50):
        field = rng.choice([Q, F2, F3])
        n = 2 if field.p == 3 else rng.randint(2, 3)
        split = split_of(["X", "Y", "Z"][:n], [])
        generators = []
        for _ in range(rng.randint(1, 2)):
            d = rng.randint(1, 3)
            generators.append(random_poly(rng, field, split, max_terms=3, max_degree=d, min_degree=d))
        I = HomogIdeal(field, split, tuple(generators))
        forms = [phi.to_poly(field, split) for phi in ridge(I)]
        assert is_generated_in(I, forms), (field, [g.to_text() for g in generators])
