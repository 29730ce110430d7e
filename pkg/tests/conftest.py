"""Shared builders and seeded random suites."""

import math
import random
from fractions import Fraction

import pytest

from idexp.algebra import Field, Poly, VarSplit
from idexp.fixtures import load_fixture
from idexp.pairs import Pair, PairSystem

FIELDS = [Field.rationals(), Field.prime(2), Field.prime(3)]
WEIGHTS = [Fraction(1), Fraction(2), Fraction(3), Fraction(3, 2)]
SUITE_SIZE = 100


def split_of(u, y, t=()):
    return VarSplit(tuple(u), tuple(y), tuple(t))


def pair(texts, b, split, field=Field.rationals()):
    return Pair.parse(texts, b, field, split)


def random_poly(rng: random.Random, field: Field, split: VarSplit, max_terms: int = 3,
                max_degree: int = 6, min_degree: int = 0) -> Poly:
    n = len(split.names)
    terms = {}
    available = sum(math.comb(d + n - 1, n - 1) for d in range(min_degree, max_degree + 1))
    target = min(rng.randint(1, max_terms), available)
    while len(terms) < target:
        degree = rng.randint(min_degree, max_degree)
        exps = [0] * n
        for _ in range(degree):
            exps[rng.randrange(n)] += 1
        if field.p:
            terms[tuple(exps)] = rng.randint(1, field.p - 1)
        else:
            terms[tuple(exps)] = rng.choice([-3, -2, -1, 1, 2, 3])
    return Poly.from_terms(field, split, terms)


def random_split(rng: random.Random) -> VarSplit:
    e = rng.randint(1, 3)
    r = rng.randint(1, 3)
    return split_of([f"u{i}" for i in range(1, e + 1)], [f"y{i}" for i in range(1, r + 1)])


def random_pair(rng: random.Random, field: Field, split: VarSplit) -> Pair:
    generators = [random_poly(rng, field, split) for _ in range(rng.randint(1, 2))]
    return Pair(field, split, tuple(generators), rng.choice(WEIGHTS))


def random_suite(seed: int, size: int = SUITE_SIZE, components: int = 2):
    """Deterministic list of (field, PairSystem) cases with at most three variables per block."""
    rng = random.Random(seed)
    cases = []
    for _ in range(size):
        field = rng.choice(FIELDS)
        split = random_split(rng)
        pairs = [random_pair(rng, field, split) for _ in range(rng.randint(1, components))]
        cases.append((field, PairSystem(tuple(pairs))))
    return cases


def random_singular_pair(rng: random.Random, field: Field, split: VarSplit) -> Pair:
    """A pair with the origin in its singular locus: generators of order >= b."""
    b = rng.randint(1, 3)
    generators = []
    for _ in range(rng.randint(1, 2)):
        head = random_poly(rng, field, split, max_terms=2, max_degree=b, min_degree=b)
        tail = random_poly(rng, field, split, max_terms=2, max_degree=b + 3, min_degree=b + 1)
        generators.append(head + tail)
    return Pair(field, split, tuple(generators), b)


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def fixture_system():
    def load(name):
        return load_fixture(name).system()
    return load


@pytest.fixture
def fixture_compare():
    def load(name):
        return load_fixture(name).compare_system()
    return load
