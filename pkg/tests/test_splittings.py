from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from fzsplit.generators import fold_pair, random_free_one_edge, random_free_two_edge, random_word
from fzsplit.splittings import (
    Edge,
    Splitting,
    SplittingError,
    collapse,
    common_refinement,
    cyclic_loop,
    cyclic_segment,
    edge_fold,
    equivalent,
    loop,
    refinement_from,
    segment,
    unfold,
    verify_fold_relation,
)
from fzsplit.words import multiply, parse_word, parse_words

seeds = st.integers(min_value=0, max_value=10**6)


def example_x():
    return segment(parse_words("a,b", 4), parse_words("c,d", 4), 4)


def test_example_fold():
    n = 4
    w = parse_word("abAB", n)
    t = edge_fold(example_x(), w)
    assert equivalent(t, cyclic_segment(parse_words("a,b", n), parse_words("c,d,abAB", n), w, n))
    assert verify_fold_relation(example_x(), t, w)
    assert not t.is_free and t.is_valid()


def test_fold_word_must_be_in_vertex_group():
    with pytest.raises(SplittingError):
        edge_fold(example_x(), parse_word("ac", 4))


def test_invalid_splittings_are_rejected():
    # vertex groups do not generate F_2
    bad = Splitting(2, ((parse_word("a", 2),), (parse_word("bb", 2),)), (Edge(0, 1),))
    assert not bad.is_valid()
    with pytest.raises(SplittingError):
        bad.validate()


def test_loop_fold_on_either_side():
    x = loop(parse_words("a", 2), parse_word("b", 2), 2)
    for side in (0, 1):
        t = edge_fold(x, parse_word("a", 2), side)
        assert t.is_valid() and verify_fold_relation(x, t, parse_word("a", 2), side)
    # the far end b^-1 a b has to lie in the vertex group
    assert cyclic_loop(parse_words("a,Bab", 2), parse_word("b", 2), parse_word("a", 2), 2).is_valid()
    assert not cyclic_loop(parse_words("a", 2), parse_word("b", 2), parse_word("a", 2), 2).is_valid()


def test_common_refinement_of_disjoint_factors():
    n = 3
    x = segment(parse_words("a", n), parse_words("b,c", n), n)
    y = segment(parse_words("c", n), parse_words("a,b", n), n)
    ref = common_refinement(x, y)
    assert ref is not None and ref.verify(x, y)
    assert refinement_from(ref.tree, x, y) is not None


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_equivalence_ignores_lifts_and_generators(seed):
    rng = random.Random(seed)
    n = rng.choice([2, 3, 4])
    x = random_free_one_edge(rng, n)
    shifts = {v: random_word(rng, list(range(1, n + 1)), rng.randint(0, 3)) for v in range(len(x.vertices))}
    assert equivalent(x, x.translated(shifts))
    g = random_word(rng, list(range(1, n + 1)), 3)
    assert equivalent(x, x.translated({v: g for v in range(len(x.vertices))}))
    # a Nielsen move inside one vertex group
    gens = list(x.vertices[0])
    if len(gens) >= 2:
        gens[0] = multiply(gens[0], gens[1])
        moved = Splitting(n, (tuple(gens),) + x.vertices[1:], x.edges)
        assert equivalent(x, moved)
    assert equivalent(x, x.normalized())


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_fold_then_unfold(seed):
    rng = random.Random(seed)
    pair = fold_pair(rng, rng.choice([2, 3, 4]))
    assert verify_fold_relation(pair.x, pair.t, pair.w, pair.side)
    u = unfold(pair.t)
    assert u is not None
    assert u.free.is_free and u.free.is_valid()
    assert equivalent(edge_fold(u.free, u.w, u.side), pair.t)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_collapse_certificates(seed):
    rng = random.Random(seed)
    t2 = random_free_two_edge(rng, rng.choice([3, 4]))
    for k in (0, 1):
        s, cert = collapse(t2, k)
        assert s.num_edges == 1 and s.is_valid() and s.is_free
        assert cert.verify()
    x, _ = collapse(t2, 0)
    y, _ = collapse(t2, 1)
    ref = refinement_from(t2, x, y)
    assert ref is not None and ref.verify(x, y)


def test_shapes():
    assert example_x().shape == "segment"
    assert loop(parse_words("a", 2), parse_word("b", 2), 2).shape == "loop"
