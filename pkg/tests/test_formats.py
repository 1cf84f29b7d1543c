from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from fzsplit.complexes import distance_upper, fz_adjacent, theorem5_path
from fzsplit.formats import (
    FormatError,
    iter_splittings,
    parse_certificate,
    parse_splitting,
    serialize_certificate,
    serialize_splitting,
)
from fzsplit.generators import fold_pair, random_free_one_edge, random_free_two_edge
from fzsplit.splittings import equivalent, segment
from fzsplit.words import parse_word, parse_words

seeds = st.integers(min_value=0, max_value=10**6)

EXAMPLE_X = """splitting rank=4 shape=segment
vgroup 0 a,b
vgroup 1 c,d
edge 0 1 group=1
"""
EXAMPLE_T = """splitting rank=4 shape=segment
vgroup 0 a,b
vgroup 1 c,d,abAB
edge 0 1 group=abAB attach=abAB,abAB
"""
LOOP = """splitting rank=2 shape=loop
vgroup 0 a,Bab
edge 0 0 group=a attach=a,Bab
stable b
"""


@pytest.mark.parametrize("text", [EXAMPLE_X, EXAMPLE_T, LOOP])
def test_fixed_files_round_trip(text):
    assert serialize_splitting(parse_splitting(text)) == text


def test_parsed_example_is_the_example():
    x = parse_splitting(EXAMPLE_X)
    assert equivalent(x, segment(parse_words("a,b", 4), parse_words("c,d", 4), 4))


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_generated_splittings_round_trip(seed):
    rng = random.Random(seed)
    n = rng.choice([2, 3, 4])
    pick = rng.randrange(3)
    if pick == 0:
        s = random_free_one_edge(rng, n)
    elif pick == 1:
        s = fold_pair(rng, n).t
    else:
        s = random_free_two_edge(rng, max(n, 3))
    text = serialize_splitting(s)
    assert parse_splitting(text) == s
    assert serialize_splitting(parse_splitting(text)) == text


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("splitting rank=4\nvgroup 0 a,b\nvgroup 1 c,dq\nedge 0 1 group=1\n", 3, 13),
        ("splitting rank=2\nvgroup 0 a\nedge 0 0 group=1 bogus\n", 3, 18),
        ("splitting\n", 1, None),
        ("splitting rank=2 shape=segment\nvgroup 0 a\nvgroup 0 b\n", 3, None),
    ],
)
def test_diagnostics(text, line, column):
    with pytest.raises(FormatError) as info:
        parse_splitting(text)
    assert info.value.line == line
    assert info.value.column == column


def test_shape_mismatch_is_an_error():
    with pytest.raises(FormatError, match="shape"):
        parse_splitting(EXAMPLE_X.replace("shape=segment", "shape=loop"))


def test_several_blocks():
    assert len(list(iter_splittings(EXAMPLE_X + EXAMPLE_T))) == 2


def example_pair():
    n = 4
    x = parse_splitting(EXAMPLE_X)
    y = segment(parse_words("a,b", n), parse_words("abABc,d", n), n)
    return x, y, parse_word("abAB", n)


def test_certificates_round_trip_and_verify():
    x, y, w = example_pair()
    certs = [fz_adjacent(x, y, w), distance_upper(x, y, "FZbar")[1], theorem5_path(x, y, w)]
    for cert in certs:
        text = serialize_certificate(cert)
        parsed = parse_certificate(text)
        assert parsed.verify()
        assert serialize_certificate(parsed.value) == text


def test_tampered_certificate_is_rejected():
    x, y, w = example_pair()
    text = serialize_certificate(fz_adjacent(x, y, w))
    assert not parse_certificate(text.replace("abABc,d", "abABcc,d", 1)).verify()
    with pytest.raises(FormatError):
        parse_certificate(text.replace("endstep", "stop"))
