from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from fzsplit.words import (
    WordError,
    apply_map,
    commutator,
    compose_maps,
    conjugate,
    cyclic_conjugates,
    cyclically_reduce,
    format_word,
    inverse,
    multiply,
    parse_word,
    parse_words,
    power,
    reduce_word,
    words_up_to,
)

N = 3
raw_words = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=12).map(tuple)
words = raw_words.map(reduce_word)


def is_reduced(w):
    return all(w[i] != -w[i + 1] for i in range(len(w) - 1))


def test_letters_and_empty_word():
    assert parse_word("abAB", 4) == (1, 2, -1, -2)
    assert parse_word("1") == ()
    assert format_word((), 2) == "1"
    assert format_word(parse_word("abAB", 4), 4) == "abAB"


def test_conjugation_and_commutator_conventions():
    a, b = (1,), (2,)
    assert commutator(a, b) == (1, 2, -1, -2)
    assert conjugate(a, b) == (-2, 1, 2)


def test_parse_reports_position():
    with pytest.raises(WordError) as info:
        parse_word("abx", 2)
    assert info.value.position == 2
    with pytest.raises(WordError):
        parse_word("e", 4)


def test_parse_words_list():
    assert parse_words("a,bb,1", 2) == [(1,), (2, 2), ()]


def test_words_up_to_counts():
    # 1 + 4 + 4*3 reduced words of length <= 2 in F_2
    assert len(list(words_up_to(2, 2))) == 17


@given(raw_words)
def test_reduce_is_idempotent_and_reduced(w):
    r = reduce_word(w)
    assert is_reduced(r)
    assert reduce_word(r) == r


@given(words, words, words)
def test_multiply_associative(u, v, w):
    assert multiply(multiply(u, v), w) == multiply(u, multiply(v, w))


@given(words)
def test_inverse(w):
    assert inverse(inverse(w)) == w
    assert multiply(w, inverse(w)) == ()


@given(words)
def test_cyclic_reduction(w):
    core, g = cyclically_reduce(w)
    assert conjugate(core, g) == w
    assert not core or core[0] != -core[-1]
    assert all(len(c) == len(core) for c in cyclic_conjugates(core))


@given(words, st.integers(min_value=-3, max_value=3))
def test_power(w, k):
    expected = ()
    base = w if k >= 0 else inverse(w)
    for _ in range(abs(k)):
        expected = multiply(expected, base)
    assert power(w, k) == expected


@given(words)
def test_format_parse_round_trip(w):
    text = format_word(w, N)
    assert parse_word(text, N) == w
    assert format_word(parse_word(text, N), N) == text


@given(words, words)
def test_maps_are_homomorphisms(u, v):
    phi = {1: (1, 2), 2: (2,), 3: (3, 1)}
    assert apply_map(phi, multiply(u, v)) == multiply(apply_map(phi, u), apply_map(phi, v))
    psi = {1: (2,), 2: (1,), 3: (-3,)}
    both = compose_maps(phi, psi, N)
    assert apply_map(both, u) == apply_map(phi, apply_map(psi, u))


SHORT_CONJUGATORS = list(words_up_to(3, N))


@settings(max_examples=60, deadline=None)
@given(raw_words.map(lambda w: reduce_word(w[:8])))
def test_cyclic_core_is_shortest_conjugate(w):
    core, _ = cyclically_reduce(w)
    # brute force over all conjugators of length <= 3, plus the inverted
    # half-prefix of w, which covers the longest peel an 8-letter word allows
    assert len(core) == min(len(conjugate(w, g)) for g in SHORT_CONJUGATORS + [inverse(w[: (len(w) + 1) // 2])])


def test_cyclic_examples():
    assert cyclically_reduce(parse_word("Bab", 2)) == ((1,), (2,))
    assert cyclically_reduce(parse_word("abAB", 2)) == ((1, 2, -1, -2), ())
    assert cyclically_reduce(parse_word("Aba", 2)) == ((2,), (1,))
