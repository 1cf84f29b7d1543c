"""Unfold a two-edge cyclic splitting and join its two collapses by a short path.

The chain A * B * C is folded over s in A and t in C.  Collapsing either edge
gives a one-edge cyclic splitting; unfold_chain connects the two through free
splittings in at most three steps.
"""
from __future__ import annotations

import random

from fzsplit import serialize_splitting, unfold_chain
from fzsplit.generators import doubly_folded
from fzsplit.words import format_word

rng = random.Random(8)
free, cyc, s, t = doubly_folded(rng)
n = cyc.n
print(f"folded over s = {format_word(s, n)} and t = {format_word(t, n)}:")
print(serialize_splitting(cyc))

r = unfold_chain(cyc)
print("unfolded free splitting:")
print(serialize_splitting(r.free))
print("path:", " -> ".join(step.kind for step in r.path.steps), f"(length {r.path.length})")
print("verified:", r.verify())
