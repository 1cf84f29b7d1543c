"""Distances between the same pair of splittings in four complexes.

FS allows only common refinements, FZ adds common edge folds, FZbar adds
single folds into cyclic splittings, and C adds refinements that mix edge
types.  Upper bounds come from a bounded breadth-first search.
"""
from __future__ import annotations

import time

from fzsplit import distance_upper, parse_words, segment

n = 4
pairs = {
    "disjoint factors": (
        segment(parse_words("a", 3), parse_words("b,c", 3), 3),
        segment(parse_words("c", 3), parse_words("a,b", 3), 3),
    ),
    "commutator pair": (
        segment(parse_words("a,b", n), parse_words("c,d", n), n),
        segment(parse_words("a,b", n), parse_words("abABc,d", n), n),
    ),
}

for label, (x, y) in pairs.items():
    print(label)
    for name in ("FS", "FZ", "FZbar", "C"):
        start = time.perf_counter()
        d, path = distance_upper(x, y, name)
        kinds = [s.kind for s in path.steps] if path else []
        shown = "unknown" if d is None else f"<= {d}"
        print(f"  {name:>5}: {shown:8} steps {kinds}  ({time.perf_counter() - start:.2f}s)")
