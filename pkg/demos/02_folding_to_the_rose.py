"""Fold a beta-graph down to the standard rose and check a distance bound per fold.

Each maximal fold moves the associated free splittings a distance of at most
two; the certificate recomputes both quotient graphs and compares them.
"""
from __future__ import annotations

import random

from fzsplit import build_beta_graph, fold_certificate, fold_to_rose, is_foldable, make_foldable
from fzsplit.beta_graph import first_found, last_found, random_scheduler
from fzsplit.generators import nielsen_basis
from fzsplit.words import format_words

rng = random.Random(3)
n = 3
basis = nielsen_basis(rng, n, 5, max_len=6)
print("basis:", format_words(basis, n))

g = build_beta_graph(n, basis)
if not is_foldable(g).foldable:
    g = make_foldable(g)
print(g.serialize())

for name, sch in (("first", first_found), ("last", last_found), ("random", random_scheduler(1))):
    seq = fold_to_rose(g, sch)
    lengths = [fold_certificate(a, s).length for a, s in zip(seq.graphs, seq.steps)]
    print(f"{name:>6}: {len(seq.steps)} folds, certified distances {lengths}")

print("\nfold sequence (first scheduler):")
print(fold_to_rose(g).serialize())
