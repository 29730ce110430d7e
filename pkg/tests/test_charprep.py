import random
from fractions import Fraction as F

import pytest

from idexp.algebra import Field, Poly, substitute
from idexp.charprep import (NotSolvable, Status, TranslationStep, Unsolvable, VertexSolution, delta_invariant,
                            directrix_hypothesis, prepare, replay, solve_vertex, translate, try_translation)
from idexp.errors import InputError
from idexp.pairs import Pair, PairSystem
from idexp.polyhedra import pair_polyhedron

from .conftest import pair, split_of

Q = Field.rationals()
UY = split_of(["u1", "u2"], ["y"])
DELTA_FIVE = pair(["y^2 + u1^7*u2^3"], 2, UY)


def test_translate():
    moved = translate(DELTA_FIVE, {"y": 1}, (2, 0))
    assert moved.components[0].generators == (Poly.parse("(y + u1^2)^2 + u1^7*u2^3", Q, UY),)
    assert translate(DELTA_FIVE, {"y": 0}, (2, 0)).components[0] == DELTA_FIVE
    with pytest.raises(InputError):
        translate(DELTA_FIVE, {"u1": 1}, (2, 0))
    with pytest.raises(InputError):
        translate(DELTA_FIVE, {"y": 1}, (2, 0, 1))


def test_solve_vertex_completes_the_square(fixture_system):
    verdict = solve_vertex(fixture_system("delta-five-z"), (2, 0))
    assert isinstance(verdict, VertexSolution)
    assert verdict.steps == (TranslationStep("z", F(-1), (2, 0)),)
    z_split = split_of(["u1", "u2"], ["z"])
    assert verdict.system.components[0].generators == (Poly.parse("z^2 + u1^7*u2^3", Q, z_split),)
    assert verdict.polyhedron.vertices == ((F(7, 2), F(3, 2)),)


def test_solve_vertex_in_characteristic_five(fixture_system):
    verdict = solve_vertex(fixture_system("delta-five-z-f5"), (2, 0))
    assert isinstance(verdict, VertexSolution)
    assert verdict.steps == (TranslationStep("z", F(4), (2, 0)),)
    assert verdict.polyhedron.vertices == ((F(7, 2), F(3, 2)),)


def test_non_integral_vertices_are_not_solvable(fixture_system):
    verdict = solve_vertex(DELTA_FIVE, (F(7, 2), F(3, 2)))
    assert isinstance(verdict, NotSolvable)
    assert verdict.reason == Unsolvable.NON_INTEGRAL
    char3 = solve_vertex(fixture_system("char3-pair-vs-ideal"), (F(3, 2), 0))
    assert char3.reason == Unsolvable.NON_INTEGRAL


def test_solve_vertex_needs_a_vertex(fixture_system):
    with pytest.raises(InputError):
        solve_vertex(fixture_system("delta-five-z"), (7, 7))


def test_translation_that_enlarges_the_polyhedron_is_rejected(fixture_system):
    S = fixture_system("char3-pair-vs-ideal")
    trial = try_translation(S, {"z2": 1}, (0, 3))
    assert not trial.accepted
    assert trial.polyhedron.contains((0, 4))
    assert not pair_polyhedron(S).contains((0, 4))


def test_prepare_from_the_z_presentation(fixture_system):
    report = prepare(fixture_system("delta-five-z"))
    assert report.status == Status.PREPARED
    assert report.hypothesis_ok
    assert [step.to_json() for step in report.steps] == [{"y": "z", "c": [-1, 1], "v": [2, 0]}]
    assert report.polyhedron.vertices == ((F(7, 2), F(3, 2)),)
    assert report.delta == 5
    assert report.delta_history == (2, 5)


def test_prepare_leaves_a_prepared_pair_alone():
    report = prepare(DELTA_FIVE)
    assert report.status == Status.PREPARED
    assert report.steps == ()
    assert report.system.components[0] == DELTA_FIVE
    assert report.unsolvable[0].reason == Unsolvable.NON_INTEGRAL


def test_replay_reproduces_the_preparation(fixture_system):
    S = fixture_system("delta-five-z")
    report = prepare(S)
    assert replay(S, report.steps) == report.system


def test_delta_history_never_decreases(fixture_system, fixture_compare):
    systems = [fixture_system(name) for name in ("delta-five-z", "delta-five-z-f5", "delta-one")]
    systems.append(fixture_compare("two-presentations-d2"))
    for S in systems:
        history = prepare(S).delta_history
        assert list(history) == sorted(history), [str(E) for E in S]


def test_prepare_stops_at_the_degree_bound(fixture_system):
    report = prepare(fixture_system("delta-five-z"), degree_bound=1)
    assert report.status == Status.TRUNCATED
    assert report.truncated
    assert report.steps == ()


@pytest.mark.parametrize("image", [
    "3*y",
    "y + u1*y + y^2",
    "y + u1^2",
    "y + u1*u2 + u2^3",
])
def test_delta_does_not_depend_on_the_presentation(image):
    f = DELTA_FIVE.generators[0]
    moved = substitute(f, {"y": Poly.parse(image, Q, UY)})
    result = delta_invariant(Pair(Q, UY, (moved,), 2))
    assert result.value == 5, moved.to_text()
    assert result.status == Status.PREPARED
    assert result.report.polyhedron.vertices == ((F(7, 2), F(3, 2)),)


def test_delta_is_one_when_the_directrix_leaves_the_y_block(fixture_system):
    S = fixture_system("delta-one")
    report = prepare(S)
    assert report.delta == 1
    assert report.status == Status.HYPOTHESIS_WARNING
    assert not report.hypothesis_ok
    assert (0, 0, 1) in report.polyhedron.vertices

    rng = random.Random(5)
    split = S.split
    f = S.components[0].generators[0]
    for _ in range(10):
        v = (rng.randint(0, 2), rng.randint(0, 2), rng.randint(1, 2))
        c = F(rng.randint(-4, 4) or 1, rng.randint(1, 3))
        shift = Poly.monomial(Q, split, split.exponent(dict(zip(split.u_names, v)))).scale(c)
        moved = substitute(f, {"y": Poly.variable(Q, split, "y") + shift})
        assert delta_invariant(Pair(Q, split, (moved,), 2)).value == 1, moved.to_text()


def test_presentations_give_different_polyhedra_without_the_hypothesis(fixture_system):
    Y = fixture_system("hidden-directrix-y")
    Z = fixture_system("hidden-directrix-z")
    PY, PZ = pair_polyhedron(Y), pair_polyhedron(Z)
    assert set(PY.vertices) == {(F(5, 2), 0, 0), (0, 0, 1), (0, 3, 0)}
    assert PY.contains((0, 3, 0)) and not PZ.contains((0, 3, 0))
    assert PZ.contains((0, 1, F(1, 2))) and not PY.contains((0, 1, F(1, 2)))
    ok, note = directrix_hypothesis(Y)
    assert not ok
    assert "U3" in note
    report = prepare(Y)
    assert report.status == Status.HYPOTHESIS_WARNING
    assert report.delta == 1


@pytest.mark.parametrize("d", [3, 4, 5])
def test_equivalent_pairs_are_already_prepared(d, fixture_system, fixture_compare):
    for S in (fixture_system(f"two-presentations-d{d}"), fixture_compare(f"two-presentations-d{d}")):
        report = prepare(S)
        assert report.steps == ()
        assert report.status == Status.PREPARED
        assert report.polyhedron == pair_polyhedron(S)
    assert delta_invariant(fixture_system(f"two-presentations-d{d}")).value == F(2 * (d - 1), d)
    assert delta_invariant(fixture_compare(f"two-presentations-d{d}")).value == F(2 * (d - 1), d)


def test_smallest_two_presentations_case_translates_t_by_y(fixture_system, fixture_compare):
    E1 = fixture_system("two-presentations-d2")
    E2 = fixture_compare("two-presentations-d2")
    first, second = prepare(E1), prepare(E2)
    assert first.steps == ()
    assert [step.to_json() for step in second.steps] == [{"y": "t", "c": [1, 1], "v": [0, 1]}]
    assert second.polyhedron == first.polyhedron
    assert first.delta == second.delta == 1
    assert first.status == second.status == Status.HYPOTHESIS_WARNING


def test_delta_of_an_empty_polyhedron():
    result = delta_invariant(PairSystem.of(pair(["y^3"], 2, UY)))
    assert result.value == float("inf")
    assert result.report.polyhedron.is_empty


def test_origin_vertex_is_never_translated():
    E = pair(["y^2 + 2*y + 1"], 2, split_of(["u"], ["y"]))
    verdict = solve_vertex(E, (0,))
    assert isinstance(verdict, NotSolvable)
    assert verdict.reason == Unsolvable.AT_ORIGIN
    report = prepare(E)
    assert report.steps == ()
    assert report.delta == 0
    assert report.delta_history == (0,)


def test_delta_five_z_starts_at_two(fixture_system):
    assert pair_polyhedron(fixture_system("delta-five-z")).delta() == 2
    assert prepare(fixture_system("delta-five-z")).delta == 5


def test_hidden_directrix_z_presentation_warns(fixture_system):
    report = prepare(fixture_system("hidden-directrix-z"))
    assert report.status == Status.HYPOTHESIS_WARNING
    assert report.status.value == "hypothesis-warning"
    assert not report.hypothesis_ok
    assert report.note


def _largest_first(p):
    return -sum(p), tuple(-x for x in p)


@pytest.mark.parametrize("name", [
    "delta-five", "delta-five-z", "delta-five-z-f5", "char3-pair-vs-ideal", "hidden-directrix-y",
    "hidden-directrix-z", "delta-one", "cusps", "max-contact-choices",
    "two-presentations-d2", "two-presentations-d3",
])
def test_prepared_polyhedron_does_not_depend_on_vertex_order(name, fixture_system, fixture_compare):
    systems = [fixture_system(name)]
    if name.startswith("two-presentations"):
        systems.append(fixture_compare(name))
    for S in systems:
        usual = prepare(S)
        reversed_order = prepare(S, vertex_key=_largest_first)
        assert reversed_order.polyhedron == usual.polyhedron
        assert reversed_order.delta == usual.delta
