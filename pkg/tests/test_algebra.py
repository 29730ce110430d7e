import math
import random
from fractions import Fraction

import pytest

from idexp.algebra import (INFINITY, Field, Poly, VarSplit, hasse_derive, hasse_derive_log, initial_form,
                           multi_indices, order_along, order_at, order_modulo_base, order_origin, substitute)
from idexp.errors import InputError, PreconditionError

from .conftest import FIELDS, SUITE_SIZE, random_poly, random_split, split_of

Q = Field.rationals()
F2 = Field.prime(2)
UY = split_of(["u1", "u2"], ["y"])
ONE_U = split_of(["u"], ["y"])


def poly(text, split=UY, field=Q):
    return Poly.parse(text, field, split)


@pytest.mark.parametrize("text, expected", [
    ("y^2 + u1^3", 2),
    ("1 + u1", 0),
    ("u1^7*u2^3 + y^2", 2),
])
def test_order_origin(text, expected):
    assert order_origin(poly(text)) == expected


def test_order_of_zero_is_infinite():
    assert order_origin(Poly.zero(Q, UY)) == INFINITY
    assert order_along(Poly.zero(Q, UY), ["y"]) == INFINITY


def test_order_along():
    assert order_along(poly("u1^2*y + u1^3"), ["u1"]) == 2
    assert order_along(poly("y^2 + u1^3"), ["y"]) == 0
    with pytest.raises(InputError):
        order_along(poly("y"), [])


def test_order_modulo_base():
    assert order_modulo_base(poly("y^3 + y^2*u2^2 + u2^9")) == 3
    assert order_modulo_base(poly("u1*y + u2")) == INFINITY


def test_order_at_point():
    f = poly("y^2 + u1^3")
    assert order_at(f, {}) == 2
    assert order_at(f, {"u1": 1}) == 0
    assert order_at(poly("(u1 - 1)^2 + y^2"), {"u1": 1}) == 2


def test_initial_form():
    assert initial_form(poly("y^2 + u1^7*u2^3"), 2) == poly("y^2")
    assert initial_form(poly("y^2 + u1^3"), Fraction(3, 2)).is_zero()
    assert initial_form(poly("y^3"), 2).is_zero()
    with pytest.raises(PreconditionError):
        initial_form(poly("y + u1^2"), 2)


def test_hasse_derivative_uses_binomials():
    f = poly("y^4", ONE_U)
    assert hasse_derive((0, 2), f) == poly("6*y^2", ONE_U)
    assert hasse_derive((0, 2), Poly.parse("y^4", F2, ONE_U)).is_zero()
    assert hasse_derive((0, 0), f) == f
    assert hasse_derive({"y": 1}, poly("y^2 + 2*y*u1^2 + u1^4")) == poly("2*y + 2*u1^2")


def test_hasse_derivative_composition_rule():
    # D_a D_b = binom(a + b, a) D_(a + b) for a single variable
    f = poly("y^5 + u1*y^3 + y", split_of(["u1"], ["y"]))
    twice = hasse_derive((0, 1), hasse_derive((0, 2), f))
    assert twice == hasse_derive((0, 3), f).scale(3)


def test_log_derivative_keeps_support():
    f = poly("y^2", ONE_U)
    assert hasse_derive_log((0, 1), f) == poly("2*y^2", ONE_U)
    assert hasse_derive_log((0, 1), Poly.parse("y^2", F2, ONE_U)).is_zero()
    g = poly("y^3 + u*y + u^2", ONE_U)
    assert hasse_derive_log((1, 1), g).support() <= g.support()
    assert hasse_derive_log((0, 0), g) == g


def test_multi_indices():
    assert list(multi_indices(2, 2)) == [(2, 0), (1, 1), (0, 2)]
    assert list(multi_indices(0, 0)) == [()]
    assert len(list(multi_indices(3, 2))) == 6


def test_substitute_into_new_coordinates():
    zsplit = split_of(["u1", "u2"], ["z"])
    f = poly("y^2 + u1^7*u2^3")
    image = Poly.parse("z + u1^2", Q, zsplit)
    result = substitute(f, {"y": image}, zsplit)
    assert result == Poly.parse("z^2 + 2*z*u1^2 + u1^4 + u1^7*u2^3", Q, zsplit)


def test_substitute_identity_and_kill():
    f = poly("y*u + u^2", ONE_U)
    assert substitute(f, {}) == f
    assert substitute(f, {"y": Poly.zero(Q, ONE_U)}) == poly("u^2", ONE_U)
    with pytest.raises(InputError):
        substitute(f, {"w": Poly.zero(Q, ONE_U)})


def test_truncation_is_recorded():
    f = Poly.parse("y + y^5", Q, UY, truncation=3)
    assert f.truncated
    assert f == poly("y")
    assert not poly("y + y^5").truncated
    g = substitute(poly("y^2"), {"y": Poly.parse("y + u1^2", Q, UY, truncation=3)})
    assert g.truncated
    assert g == poly("y^2 + 2*y*u1^2")


def test_arithmetic_in_prime_field():
    F3 = Field.prime(3)
    f = Poly.parse("(y + u2^2)^3", F3, UY)
    assert f == Poly.parse("y^3 + u2^6", F3, UY)
    assert Poly.parse("2*y", F3, UY) + Poly.parse("y", F3, UY) == Poly.zero(F3, UY)


def test_rational_coefficients_and_text():
    f = poly("1/2*y^2 - u1")
    assert f.coefficient((0, 0, 2)) == Fraction(1, 2)
    assert poly("y^2 + u1^7*u2^3").to_text() == "u1^7*u2^3 + y^2"
    assert poly(f.to_text()) == f


@pytest.mark.parametrize("text", ["y^2 +", "w + y", "y^-1", "y; 1", "", "y**(1/2)"])
def test_parse_rejects_malformed_text(text):
    with pytest.raises(InputError):
        poly(text)


def test_split_validation():
    with pytest.raises(InputError):
        VarSplit(("x",), ("x",))
    with pytest.raises(InputError):
        VarSplit((), ())
    with pytest.raises(InputError):
        VarSplit(("1x",), ())
    assert UY.with_t("t").base_names == ("u1", "u2", "t")
    assert UY.graded().names == ("U1", "U2", "Y")


def test_prime_field_rejects_composites():
    with pytest.raises(InputError):
        Field.prime(4)
    assert Field.prime(5).convert(Fraction(1, 2)) * 2 == Field.prime(5).convert(1)


# random suites


def test_order_is_additive_on_products():
    rng = random.Random(11)
    for _ in range(SUITE_SIZE):
        field = rng.choice(FIELDS)
        split = random_split(rng)
        f, g = random_poly(rng, field, split), random_poly(rng, field, split)
        assert order_origin(f * g) == order_origin(f) + order_origin(g), (field, f.to_text(), g.to_text())


def test_substitute_is_a_ring_homomorphism():
    rng = random.Random(12)
    for _ in range(SUITE_SIZE):
        field = rng.choice(FIELDS)
        split = random_split(rng)
        f = random_poly(rng, field, split, max_degree=4)
        g = random_poly(rng, field, split, max_degree=4)
        images = {y: random_poly(rng, field, split, max_terms=2, max_degree=3) for y in split.y_names}

        def image_of(h):
            return substitute(h, images)

        assert image_of(f * g) == image_of(f) * image_of(g), (field, f.to_text(), g.to_text())
        assert image_of(f + g) == image_of(f) + image_of(g), (field, f.to_text(), g.to_text())


def test_hasse_composition_in_several_variables():
    rng = random.Random(13)
    for _ in range(SUITE_SIZE):
        field = rng.choice(FIELDS)
        split = random_split(rng)
        n = len(split.names)
        f = random_poly(rng, field, split, max_terms=4, max_degree=7)
        A = tuple(rng.randint(0, 2) for _ in range(n))
        B = tuple(rng.randint(0, 2) for _ in range(n))
        weight = 1
        for a, b in zip(A, B):
            weight *= math.comb(a + b, a)
        combined = tuple(a + b for a, b in zip(A, B))
        assert hasse_derive(A, hasse_derive(B, f)) == hasse_derive(combined, f).scale(weight), \
            (field, f.to_text(), A, B)
