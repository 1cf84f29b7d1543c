from __future__ import annotations

import itertools
import random

from hypothesis import given, settings, strategies as st

from fzsplit.generators import nielsen_basis, random_word
from fzsplit.stallings import (
    basis_coordinates,
    build_core,
    conjugacy_equal,
    conjugator_into,
    contains,
    double_coset_contains,
    express_in_basis,
    fill,
    intersection,
    is_basis,
    is_free_factor,
    parse_core_graph,
    relative_complement,
    subgroup_contains,
    subgroup_equal,
    subgroup_rank,
)
from fzsplit.words import apply_map, conjugate, inverse, multiply, parse_word, parse_words

seeds = st.integers(min_value=0, max_value=10**6)


def test_example_membership():
    gens = parse_words("a,b", 4)
    assert subgroup_contains(gens, parse_word("abAB", 4), 4)
    assert not subgroup_contains(gens, parse_word("ac", 4), 4)


def test_core_graph_format():
    core = build_core(parse_words("a,bb", 2), 2)
    text = core.serialize()
    assert text.splitlines()[:3] == ["v 0", "v 1", "bp 0"]
    assert parse_core_graph(text, 2).serialize() == text
    assert subgroup_rank(parse_words("a,bb,abba", 2), 2) == 2


def test_canonical_core_ignores_generating_set():
    h1 = parse_words("ab,b", 2)
    h2 = parse_words("a,b", 2)
    assert build_core(h1, 2) == build_core(h2, 2)


def test_fill_examples():
    assert subgroup_equal(fill(parse_word("abAB", 4), 4), parse_words("a,b", 4), 4)
    assert subgroup_equal(fill(parse_word("ac", 4), 4), parse_words("ac", 4), 4)


def test_relative_complement():
    comp = relative_complement(parse_words("ab", 3), parse_words("a,b,c", 3), 3)
    assert comp is not None and is_basis(parse_words("ab", 3) + comp, 3)
    assert is_free_factor(parse_words("a,bc", 3), 3)
    assert not is_free_factor(parse_words("aa", 3), 3)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_contains_every_product(seed):
    rng = random.Random(seed)
    n = rng.choice([2, 3])
    gens = [random_word(rng, list(range(1, n + 1)), rng.randint(1, 4)) for _ in range(rng.randint(1, 3))]
    core = build_core(gens, n)
    pool = gens + [inverse(g) for g in gens]
    for combo in itertools.islice(itertools.product(pool, repeat=3), 40):
        assert contains(core, multiply(*combo))


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_basis_coordinates_invert_the_basis(seed):
    rng = random.Random(seed)
    n = rng.choice([2, 3, 4])
    basis = nielsen_basis(rng, n, rng.randint(0, 8))
    assert is_basis(basis, n)
    coords = basis_coordinates(basis, n)
    phi = {i + 1: b for i, b in enumerate(basis)}
    for x in range(1, n + 1):
        assert apply_map(phi, coords[x]) == (x,)
    w = random_word(rng, list(range(1, n + 1)), 6)
    assert apply_map(phi, express_in_basis(w, basis, n)) == w


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_conjugation_tools(seed):
    rng = random.Random(seed)
    n = 3
    gens = [random_word(rng, [1, 2, 3], rng.randint(1, 3)) for _ in range(2)]
    g = random_word(rng, [1, 2, 3], rng.randint(0, 3))
    moved = [conjugate(h, g) for h in gens]
    assert conjugacy_equal(gens, moved, n)
    w = conjugate(gens[0], random_word(rng, [1, 2, 3], 2))
    c = conjugator_into(build_core(gens, n), w)
    assert c is not None and subgroup_contains(gens, multiply(c, w, inverse(c)), n)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_double_cosets(seed):
    rng = random.Random(seed)
    h = [random_word(rng, [1, 2], 2)]
    k = [random_word(rng, [2, 3], 2)]
    t = random_word(rng, [1, 2, 3], 3)
    x = multiply(h[0], t, inverse(k[0]), k[0], k[0])
    assert double_coset_contains(h, t, k, x, 3)
    assert double_coset_contains(h, t, k, t, 3)


def test_intersection_of_factors():
    inter = intersection(parse_words("a,b", 3), parse_words("b,c", 3), 3)
    assert subgroup_equal(inter, parse_words("b", 3), 3)
