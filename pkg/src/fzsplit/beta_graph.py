"""Beta-graphs and the maximal-fold engine.

Every edge carries a single letter; natural-edge words are derived on demand.
Oriented edges are signed edge ids: ``+e`` runs from ``tail`` to ``head``
with the stored letter, ``-e`` runs backwards with the inverse letter.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .splittings import (
    MarkedGraph,
    Splitting,
    graph_splitting_data,
    translations_match,
)
from .stallings import build_core, is_basis
from .words import (
    Word,
    conjugate,
    inverse,
    multiply,
    format_letter,
    format_word,
    letter_key,
    parse_word,
    words_up_to,
)


class FoldError(ValueError):
    pass


@dataclass(frozen=True)
class BetaGraph:
    n: int
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int, int, int], ...]  # (id, tail, head, letter)
    base: int = 0
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    # ------------------------------------------------------------ access

    def edge(self, eid: int) -> tuple[int, int, int]:
        table = self._cache.get("edge")
        if table is None:
            table = {i: (u, v, x) for i, u, v, x in self.edges}
            self._cache["edge"] = table
        return table[eid]

    def tail(self, oe: int) -> int:
        u, v, _ = self.edge(abs(oe))
        return u if oe > 0 else v

    def head(self, oe: int) -> int:
        u, v, _ = self.edge(abs(oe))
        return v if oe > 0 else u

    def label(self, oe: int) -> int:
        x = self.edge(abs(oe))[2]
        return x if oe > 0 else -x

    def outgoing(self, v: int) -> list[int]:
        table = self._cache.get("out")
        if table is None:
            table = {u: [] for u in self.vertices}
            for i, a, b, _ in self.edges:
                table[a].append(i)
                table[b].append(-i)
            for u in table:
                table[u].sort(key=lambda oe: (letter_key(self.label(oe)), abs(oe), oe < 0))
            self._cache["out"] = table
        return table[v]

    def valence(self, v: int) -> int:
        return len(self.outgoing(v))

    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges)

    def is_connected(self) -> bool:
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            v = stack.pop()
            for oe in self.outgoing(v):
                h = self.head(oe)
                if h not in seen:
                    seen.add(h)
                    stack.append(h)
        return len(seen) == len(self.vertices)

    def is_standard_rose(self) -> bool:
        return (
            len(self.vertices) == 1
            and len(self.edges) == self.n
            and sorted(abs(x) for *_, x in self.edges) == list(range(1, self.n + 1))
        )

    def marked_graph(self) -> MarkedGraph:
        index = {v: i for i, v in enumerate(self.vertices)}
        return MarkedGraph(
            self.n,
            len(self.vertices),
            tuple((index[u], (x,), index[v]) for _, u, v, x in self.edges),
            index[self.base],
        )

    def is_marking(self) -> bool:
        """The labeling induces a homotopy equivalence onto the rose."""
        if not self.is_connected() or self.euler_characteristic() != 1 - self.n:
            return False
        from .splittings import graph_splitting

        s = graph_splitting(self.marked_graph(), ())
        return is_basis(list(s.vertices[0]), self.n) if self.n else True

    def validate(self) -> "BetaGraph":
        if not self.is_connected():
            raise FoldError("beta-graph is disconnected")
        if self.euler_characteristic() != 1 - self.n:
            raise FoldError(f"Euler characteristic {self.euler_characteristic()} != {1 - self.n}")
        if not self.is_marking():
            raise FoldError("labeling is not a marking")
        return self

    # ------------------------------------------------------------ natural structure

    def natural_vertices(self) -> list[int]:
        return [v for v in self.vertices if self.valence(v) >= 3]

    def natural_edge(self, oe: int) -> list[int]:
        """Oriented unit edges of the natural edge starting with ``oe``."""
        path = [oe]
        seen = {abs(oe)}
        while True:
            h = self.head(path[-1])
            if self.valence(h) != 2:
                return path
            a, b = self.outgoing(h)
            nxt = a if a != -path[-1] else b
            if abs(nxt) in seen:
                return path
            seen.add(abs(nxt))
            path.append(nxt)

    def natural_edges(self) -> list[list[int]]:
        """Each natural edge once, oriented from its smaller end, in a fixed order."""
        out = []
        seen: set[int] = set()
        starts = self.natural_vertices() or [self.vertices[0]]
        for v in starts:
            for oe in self.outgoing(v):
                if abs(oe) in seen:
                    continue
                path = self.natural_edge(oe)
                seen.update(abs(e) for e in path)
                out.append(path)
        return out

    def word_of(self, path: Sequence[int]) -> Word:
        return tuple(self.label(oe) for oe in path)

    def natural_graph(self) -> tuple[MarkedGraph, list[list[int]]]:
        """Natural vertices and natural edges as a word-labeled graph."""
        nat = self.natural_vertices() or [self.vertices[0]]
        index = {v: i for i, v in enumerate(nat)}
        paths = self.natural_edges()
        edges = tuple(
            (index[self.tail(p[0])], self.word_of(p), index[self.head(p[-1])]) for p in paths
        )
        base = self.base if self.base in index else nat[0]
        return MarkedGraph(self.n, len(nat), edges, index[base]), paths

    # ------------------------------------------------------------ text

    def serialize(self) -> str:
        lines = [f"beta {self.n}"]
        lines += [f"v {v}" for v in self.vertices]
        lines += [f"e {i} {u} {v} {format_letter(x, self.n)}" for i, u, v, x in self.edges]
        return "\n".join(lines) + "\n"


def parse_beta_graph(text: str) -> BetaGraph:
    n = None
    verts: list[int] = []
    edges = []
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split()
        if not parts or parts[0].startswith("#"):
            continue
        try:
            if parts[0] == "beta" and len(parts) == 2:
                n = int(parts[1])
            elif parts[0] == "v" and len(parts) == 2:
                verts.append(int(parts[1]))
            elif parts[0] == "e" and len(parts) == 5 and n is not None:
                word = parse_word(parts[4], n)
                if len(word) != 1:
                    raise ValueError("edge label must be a single letter")
                x = word[0]
                i, u, v = int(parts[1]), int(parts[2]), int(parts[3])
                if x < 0:
                    u, v, x = v, u, -x
                edges.append((i, u, v, x))
            else:
                raise ValueError(f"unrecognized line {line!r}")
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if n is None:
        raise ValueError("missing 'beta <n>' header")
    if not verts:
        raise ValueError("no vertices")
    vs = set(verts)
    for i, u, v, _ in edges:
        if u not in vs or v not in vs:
            raise ValueError(f"edge {i} uses an undeclared vertex")
    if len({e[0] for e in edges}) != len(edges):
        raise ValueError("duplicate edge id")
    return BetaGraph(n, tuple(sorted(vs)), tuple(sorted(edges)), min(vs))


def build_beta_graph(n: int, loop_words: Sequence[Sequence[int]]) -> BetaGraph:
    """Rose with one loop per word, subdivided into single-letter edges."""
    words = [tuple(w) for w in loop_words]
    core = build_core(words, n)
    if not is_basis(words, n):
        raise FoldError(f"loop words are not a basis (rank {core.rank}, {len(words)} words)")
    verts = [0]
    edges = []
    eid = 1
    for w in words:
        prev = 0
        for i, x in enumerate(w):
            if i == len(w) - 1:
                nxt = 0
            else:
                nxt = len(verts)
                verts.append(nxt)
            u, v, y = (prev, nxt, x) if x > 0 else (nxt, prev, -x)
            edges.append((eid, u, v, y))
            eid += 1
            prev = nxt
    return BetaGraph(n, tuple(verts), tuple(edges), 0)


def standard_rose(n: int) -> BetaGraph:
    return build_beta_graph(n, [(i,) for i in range(1, n + 1)])


# ------------------------------------------------------------ foldability


@dataclass
class FoldabilityReport:
    foldable: bool
    violations: list[tuple[int, str]]


def is_foldable(g: BetaGraph) -> FoldabilityReport:
    bad = []
    for v in g.vertices:
        labels = [g.label(oe) for oe in g.outgoing(v)]
        if len(labels) == 2 and labels[0] == labels[1]:
            bad.append((v, "valence-2 vertex with equal outgoing labels"))
        elif len(labels) >= 3 and len(set(labels)) < 3:
            bad.append((v, "natural vertex with fewer than three distinct labels"))
        elif len(labels) < 2:
            bad.append((v, f"vertex of valence {len(labels)}"))
    return FoldabilityReport(not bad, bad)


def make_foldable(g: BetaGraph, search_bound: int = 4) -> BetaGraph:
    """Conjugate the loop labels of a rose until it becomes foldable.

    Conjugating every loop word by one element ``c`` moves the basepoint and
    keeps the marked graph; the first ``c`` in shortlex order that works wins.
    """
    if is_foldable(g).foldable:
        return g
    if len(g.natural_vertices()) > 1:
        raise FoldError("only roses can be repaired by conjugation")
    words = loop_words(g)
    for c in words_up_to(g.n, search_bound, min_len=1):
        conj = [conjugate(w, c) for w in words]
        if any(not w for w in conj):
            continue
        h = build_beta_graph(g.n, conj)
        if is_foldable(h).foldable:
            return h
    raise FoldError("loop labels cannot be made foldable by conjugation within the bound")


# ------------------------------------------------------------ folds


def stallings_fold(g: BetaGraph, e1: int, e2: int) -> BetaGraph:
    """Identify oriented edges ``e1`` and ``e2`` (same tail, same label)."""
    if abs(e1) == abs(e2):
        raise FoldError("cannot fold an edge with itself")
    if g.tail(e1) != g.tail(e2) or g.label(e1) != g.label(e2):
        raise FoldError("fold needs a common initial vertex and label")
    h1, h2 = g.head(e1), g.head(e2)
    if h1 == h2:
        raise FoldError("edges with a common terminal vertex; folding would drop rank")
    keep, drop = min(h1, h2), max(h1, h2)
    if drop == g.base:
        keep, drop = drop, keep

    def ren(v: int) -> int:
        return keep if v == drop else v

    edges = tuple(
        (i, ren(u), ren(v), x) for i, u, v, x in g.edges if i != abs(e2)
    )
    verts = tuple(v for v in g.vertices if v != drop)
    return BetaGraph(g.n, verts, edges, g.base)


@dataclass(frozen=True)
class MaximalFoldStep:
    vertex: int
    e1: int
    e2: int
    word: Word

    def serialize(self, n: int | None = None) -> str:
        return f"fold {self.vertex} {self.e1} {self.e2} {format_word(self.word, n)}"


def maximal_segments(g: BetaGraph, e1: int, e2: int) -> tuple[list[int], list[int]]:
    p1, p2 = g.natural_edge(e1), g.natural_edge(e2)
    k = 0
    used: set[int] = set()
    while k < min(len(p1), len(p2)):
        a, b = p1[k], p2[k]
        if g.label(a) != g.label(b) or abs(a) in used or abs(b) in used or abs(a) == abs(b):
            break
        used.update((abs(a), abs(b)))
        k += 1
    return p1[:k], p2[:k]


def maximal_fold(g: BetaGraph, at: int, pair: tuple[int, int]) -> tuple[BetaGraph, MaximalFoldStep]:
    """Identify the maximal common initial segments of two natural edges at ``at``."""
    e1, e2 = pair
    if g.tail(e1) != at or g.tail(e2) != at:
        raise FoldError("edges do not start at the given vertex")
    s1, s2 = maximal_segments(g, e1, e2)
    if not s1:
        raise FoldError("no common initial segment")
    step = MaximalFoldStep(at, e1, e2, g.word_of(s1))
    for a, b in zip(s1, s2):
        g = stallings_fold(g, a, b)
    return g, step


@dataclass
class FoldSequence:
    start: BetaGraph
    steps: list[MaximalFoldStep]
    graphs: list[BetaGraph]

    @property
    def end(self) -> BetaGraph:
        return self.graphs[-1]

    def serialize(self) -> str:
        return "".join(s.serialize(self.start.n) + "\n" for s in self.steps)

    def replay(self) -> bool:
        g = self.start
        for step, nxt in zip(self.steps, self.graphs[1:]):
            try:
                g, again = maximal_fold(g, step.vertex, (step.e1, step.e2))
            except FoldError:
                return False
            if again != step or g != nxt:
                return False
        return g == self.end


def parse_fold_sequence(text: str, start: BetaGraph) -> FoldSequence:
    steps = []
    graphs = [start]
    g = start
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split()
        if not parts:
            continue
        if parts[0] != "fold" or len(parts) != 5:
            raise ValueError(f"line {lineno}: expected 'fold <vertex> <edge1> <edge2> <word>'")
        v, a, b = int(parts[1]), int(parts[2]), int(parts[3])
        g, step = maximal_fold(g, v, (a, b))
        if step.word != parse_word(parts[4], start.n):
            raise ValueError(f"line {lineno}: recorded word disagrees with the fold")
        steps.append(step)
        graphs.append(g)
    return FoldSequence(start, steps, graphs)


@dataclass
class FoldCertificate:
    """Witness that a maximal fold moves at most distance 2 in FS'.

    Collapsing the two folded segments in the source and the identified
    segment in the target gives the same marked graph; ``shifts`` is the
    explicit isomorphism.  ``length`` counts the sides on which a whole
    natural edge is collapsed.
    """

    before: BetaGraph
    step: MaximalFoldStep
    after: BetaGraph
    common_before: Splitting
    common_after: Splitting
    edge_map: dict[int, int]
    shifts: dict[int, Word]
    length: int

    def verify(self) -> bool:
        try:
            again = fold_certificate(self.before, self.step)
        except FoldError:
            return False
        return (
            again.after == self.after
            and again.common_before == self.common_before
            and again.common_after == self.common_after
            and self.common_before.num_edges >= 1
            and translations_match(
                self.common_before, self.common_after, self.edge_map, self.shifts
            )
            and again.length == self.length <= 2
        )


def _collapse_units(g: BetaGraph, removed: set[int]):
    kept_ids = [i for i, *_ in g.edges if i not in removed]
    keep = [k for k, (i, *_) in enumerate(g.edges) if i not in removed]
    s, comp, pos = graph_splitting_data(g.marked_graph(), keep)
    index = {v: k for k, v in enumerate(g.vertices)}
    return s, kept_ids, {v: comp[index[v]] for v in g.vertices}, {v: pos[index[v]] for v in g.vertices}


def _covers_natural_edge(g: BetaGraph, ids: set[int]) -> bool:
    return any({abs(e) for e in p} <= ids for p in g.natural_edges())


def _fold_with_vertex_map(g: BetaGraph, step: MaximalFoldStep):
    s1, s2 = maximal_segments(g, step.e1, step.e2)
    if not s1 or g.word_of(s1) != step.word:
        raise FoldError("recorded fold step does not match the graph")
    image = {v: v for v in g.vertices}
    h = g
    for a, b in zip(s1, s2):
        before = set(h.vertices)
        h = stallings_fold(h, a, b)
        (gone,) = before - set(h.vertices)
        kept = h.head(a)
        for v, w in image.items():
            if w == gone:
                image[v] = kept
    return h, s1, s2, image


def fold_certificate(g: BetaGraph, step: MaximalFoldStep) -> FoldCertificate:
    after, s1, s2, image = _fold_with_vertex_map(g, step)
    ids1 = {abs(e) for e in s1}
    both = ids1 | {abs(e) for e in s2}
    q1, k1, comp1, pos1 = _collapse_units(g, both)
    q2, k2, comp2, pos2 = _collapse_units(after, ids1)
    if k1 != k2:
        raise FoldError("collapsed graphs have different edge sets")
    edge_map = {k: k for k in range(len(k1))}
    # a lift of the component of x in the source maps to a translate of the
    # component of its image; undo that translate
    shifts: dict[int, Word] = {}
    for x in g.vertices:
        c = comp1[x]
        if c not in shifts:
            shifts[c] = multiply(pos2[image[x]], inverse(pos1[x]))
    if not translations_match(q1, q2, edge_map, shifts):
        raise FoldError("collapsed graphs are not isomorphic")
    length = int(_covers_natural_edge(g, both)) + int(_covers_natural_edge(after, ids1))
    return FoldCertificate(g, step, after, q1, q2, edge_map, shifts, length)


Candidate = tuple[int, int, int]  # (vertex, e1, e2)
Scheduler = Callable[[BetaGraph, list[Candidate]], Candidate]


def available_folds(g: BetaGraph) -> list[Candidate]:
    """Pairs of oriented edges with a common tail and label, in tie-break order."""
    out = []
    for v in sorted(g.vertices):
        outs = g.outgoing(v)
        for i, a in enumerate(outs):
            for b in outs[i + 1:]:
                if g.label(a) == g.label(b) and abs(a) != abs(b) and g.head(a) != g.head(b):
                    out.append((v, a, b))
    out.sort(key=lambda c: (c[0], letter_key(g.label(c[1])), abs(c[1]), abs(c[2])))
    return out


def first_found(g: BetaGraph, cands: list[Candidate]) -> Candidate:
    return cands[0]


def last_found(g: BetaGraph, cands: list[Candidate]) -> Candidate:
    return cands[-1]


def random_scheduler(seed: int) -> Scheduler:
    rng = random.Random(seed)

    def choose(g: BetaGraph, cands: list[Candidate]) -> Candidate:
        return rng.choice(cands)

    return choose


class WordPriority:
    """Fold a distinguished word completely before any other kind of fold.

    A fold of the first kind folds a natural edge over a one-edge loop whose
    letter occurs in ``w``; once one starts, the same natural edge keeps
    priority until no such fold remains for it.
    """

    def __init__(self, w: Sequence[int]):
        self.letters = {abs(x) for x in w}
        self.active: int | None = None
        self.history: list[str] = []

    def _kind1(self, g: BetaGraph, c: Candidate) -> int | None:
        v, a, b = c
        for loop_e, other in ((a, b), (b, a)):
            if g.tail(loop_e) == g.head(loop_e) and abs(g.label(loop_e)) in self.letters:
                if len(g.natural_edge(other)) > 1 or g.head(other) != v:
                    return abs(g.natural_edge(other)[-1])
        return None

    def __call__(self, g: BetaGraph, cands: list[Candidate]) -> Candidate:
        kinds = [(c, self._kind1(g, c)) for c in cands]
        if self.active is not None:
            for c, tag in kinds:
                if tag == self.active:
                    self.history.append("w")
                    return c
        for c, tag in kinds:
            if tag is not None:
                self.active = tag
                self.history.append("w")
                return c
        self.active = None
        self.history.append("other")
        return cands[0]


def fold_to_rose(g: BetaGraph, scheduler: Scheduler = first_found, check: bool = True) -> FoldSequence:
    """Maximal folds until the standard rose is reached."""
    if check and not is_foldable(g).foldable:
        raise FoldError(f"input is not foldable: {is_foldable(g).violations}")
    start = g
    steps: list[MaximalFoldStep] = []
    graphs = [g]
    budget = len(g.edges)
    while True:
        cands = available_folds(g)
        if not cands:
            break
        v, a, b = scheduler(g, cands)
        g, step = maximal_fold(g, v, (a, b))
        steps.append(step)
        graphs.append(g)
        if len(steps) > budget:
            raise FoldError("fold sequence exceeded the initial edge count")
    if not g.is_standard_rose():
        raise FoldError("folding stopped before reaching the standard rose")
    return FoldSequence(start, steps, graphs)


def loop_words(g: BetaGraph) -> list[Word]:
    """Words spelled by the loops of a graph with a single natural vertex."""
    mg, _ = g.natural_graph()
    return [w for _, w, _ in mg.edges]
