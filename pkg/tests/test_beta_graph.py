from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from fzsplit.beta_graph import (
    BetaGraph,
    FoldError,
    WordPriority,
    available_folds,
    build_beta_graph,
    first_found,
    fold_certificate,
    fold_to_rose,
    is_foldable,
    last_found,
    make_foldable,
    maximal_fold,
    parse_beta_graph,
    parse_fold_sequence,
    random_scheduler,
    stallings_fold,
    standard_rose,
)
from fzsplit.generators import nielsen_basis
from fzsplit.words import parse_word

seeds = st.integers(min_value=0, max_value=10**6)


def foldable_marked(seed: int) -> BetaGraph:
    rng = random.Random(seed)
    n = rng.choice([2, 3])
    g = build_beta_graph(n, nielsen_basis(rng, n, rng.randint(1, 6), max_len=6))
    return g if is_foldable(g).foldable else make_foldable(g)


@st.composite
def beta_files(draw):
    n = draw(st.integers(min_value=1, max_value=4))
    k = draw(st.integers(min_value=1, max_value=6))
    ids = sorted(draw(st.lists(st.integers(min_value=1, max_value=40), unique=True, max_size=10)))
    lines = [f"beta {n}"] + [f"v {v}" for v in range(k)]
    for i in ids:
        u = draw(st.integers(0, k - 1))
        v = draw(st.integers(0, k - 1))
        x = draw(st.integers(1, n))
        lines.append(f"e {i} {u} {v} {'abcd'[x - 1]}")
    return "\n".join(lines) + "\n"


def test_standard_rose_needs_no_folds():
    r = standard_rose(2)
    assert r.is_standard_rose() and r.is_marking()
    assert fold_to_rose(r).steps == []
    assert fold_to_rose(r).serialize() == ""


def test_one_fold_example():
    g = build_beta_graph(2, [parse_word("a", 2), parse_word("ab", 2)])
    seq = fold_to_rose(g)
    assert len(seq.steps) == 1
    assert seq.end.is_standard_rose()


def test_non_basis_rejected():
    with pytest.raises(Exception):
        build_beta_graph(2, [parse_word("a", 2), parse_word("bb", 2)])


def test_stallings_fold_rejects_bad_pairs():
    g = build_beta_graph(2, [parse_word("a", 2), parse_word("ab", 2)])
    e1, e2 = g.outgoing(g.base)[:2]
    if g.label(e1) != g.label(e2):
        with pytest.raises(FoldError):
            stallings_fold(g, e1, e2)
    with pytest.raises(FoldError):
        stallings_fold(g, e1, e1)


def test_parse_diagnostics():
    with pytest.raises(ValueError, match="line 3"):
        parse_beta_graph("beta 2\nv 0\ne 1 0 0 z\n")
    with pytest.raises(ValueError, match="header"):
        parse_beta_graph("v 0\n")


@settings(max_examples=500, deadline=None)
@given(beta_files())
def test_beta_file_round_trip(text):
    g = parse_beta_graph(text)
    assert g.serialize() == text
    assert parse_beta_graph(g.serialize()) == g


@settings(max_examples=100, deadline=None)
@given(beta_files(), st.randoms(use_true_random=False))
def test_any_line_order_reaches_the_canonical_form(text, rnd):
    head, *rest = text.splitlines()
    rnd.shuffle(rest)
    g = parse_beta_graph("\n".join([head] + rest))
    assert g.serialize() == text


def test_inverse_letters_are_canonicalised():
    g = parse_beta_graph("beta 2\nv 0\nv 1\ne 1 0 1 B\n")
    assert g.serialize() == "beta 2\nv 0\nv 1\ne 1 1 0 b\n"


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_single_fold_preserves_invariants(seed):
    g = foldable_marked(seed)
    rng = random.Random(seed)
    cands = available_folds(g)
    if not cands:
        assert g.is_standard_rose()
        return
    v, e1, e2 = rng.choice(cands)
    after, step = maximal_fold(g, v, (e1, e2))
    assert after.euler_characteristic() == g.euler_characteristic()
    assert after.is_marking()
    assert is_foldable(after).foldable
    assert len(after.edges) < len(g.edges)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_end_point_independent_of_scheduler(seed):
    g = foldable_marked(seed)
    ends = set()
    for sch in (first_found, last_found, random_scheduler(seed)):
        seq = fold_to_rose(g, sch)
        assert len(seq.steps) <= len(g.edges)
        ends.add(seq.end.serialize())
    assert len(ends) == 1
    assert parse_beta_graph(ends.pop()).is_standard_rose()


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_fold_sequences_replay_and_certify(seed):
    g = foldable_marked(seed)
    seq = fold_to_rose(g, random_scheduler(seed))
    again = parse_fold_sequence(seq.serialize(), g)
    assert again.end == seq.end
    for before, step in zip(seq.graphs, seq.steps):
        cert = fold_certificate(before, step)
        assert cert.verify()
        assert 1 <= cert.length <= 2


def test_word_priority_scheduler_records_history():
    x = build_beta_graph(4, [parse_word(w, 4) for w in ("a", "b", "abABc", "d")])
    prio = WordPriority(parse_word("abAB", 4))
    seq = fold_to_rose(x, prio)
    assert seq.end.is_standard_rose()
    assert len(seq.steps) == 4
