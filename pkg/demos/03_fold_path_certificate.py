"""Follow every graph of a fold path and certify that it stays close to X.

X and Y are one-edge free splittings that become equal after one edge fold
each.  The fold path runs from a rose adapted to Y to the rose adapted to X;
for each graph on the way we print the shortest certified distance in FZ.
"""
from __future__ import annotations

from fzsplit import parse_word, parse_words, segment, serialize_certificate, theorem5_path
from fzsplit.complexes import fz_adjacent

n = 4
x = segment(parse_words("a,b", n), parse_words("c,d", n), n)
y = segment(parse_words("a,b", n), parse_words("abABc,d", n), n)
w = parse_word("abAB", n)

print("edge between X and Y:", fz_adjacent(x, y, w).kind)

result = theorem5_path(x, y, w)
print("folds:", len(result.sequence.steps))
for rec in result.steps:
    best = rec.best
    print(f"  graph {rec.index}: {len(rec.images)} images, best path length {best.length} ({rec.case})")
print("largest distance:", result.max_length)
print("certificate verifies:", result.verify())

text = serialize_certificate(result)
print(f"\nthe certificate file has {len(text.splitlines())} lines; first ten:")
print("\n".join(text.splitlines()[:10]))
