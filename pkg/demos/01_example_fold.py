"""Fold the segment <a,b> * <c,d> over the commutator and unfold it again.

Run: python demos/01_example_fold.py
"""
from __future__ import annotations

from fzsplit import edge_fold, equivalent, parse_word, parse_words, segment, serialize_splitting, unfold
from fzsplit.splittings import cyclic_segment, verify_fold_relation

n = 4
x = segment(parse_words("a,b", n), parse_words("c,d", n), n)
w = parse_word("abAB", n)

print("free splitting X:")
print(serialize_splitting(x))

t = edge_fold(x, w)
print("after folding the edge over w = abAB:")
print(serialize_splitting(t))

expected = cyclic_segment(parse_words("a,b", n), parse_words("c,d,abAB", n), w, n)
print("matches <a,b> *_<w> <c,d,w>:", equivalent(t, expected))

u = unfold(t)
print("unfold found a free splitting, fold word", u.w, "side", u.side)
print("folding it back gives T again:", verify_fold_relation(u.free, t, u.w, u.side))
