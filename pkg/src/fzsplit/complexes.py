"""Splitting complexes: the coarse map f, FZ adjacency and distance witnesses.

Every distance statement here is an upper bound backed by a certificate that
re-checks itself with the splitting and subgroup primitives only.  Complexes
are named ``FS``, ``FZ``, ``FZbar`` and ``C``.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .beta_graph import (
    BetaGraph,
    FoldError,
    FoldSequence,
    WordPriority,
    build_beta_graph,
    fold_to_rose,
    is_foldable,
)
from .splittings import (
    CollapseCertificate,
    Edge,
    MarkedGraph,
    Refinement,
    Splitting,
    SplittingError,
    collapse,
    common_refinement,
    edge_fold,
    equivalent,
    graph_splitting,
    refinement_from,
    segment,
    unfold,
    verify_fold_relation,
)
from .stallings import (
    basis_coordinates,
    build_core,
    conjugator_into,
    contains,
    fill,
    relative_complement,
    subgroup_contains,
    subgroup_equal,
)
from .words import (
    EMPTY,
    Word,
    apply_map,
    conjugate,
    cyclic_conjugates,
    cyclically_reduce,
    inverse,
    multiply,
    reduce_word,
    words_up_to,
)

COMPLEXES = ("FS", "FZ", "FZbar", "C")


class Unresolved(RuntimeError):
    """A bounded search gave up; nothing is claimed either way."""


class CertificateFailure(RuntimeError):
    """A step that should have a short certificate has none."""


# ------------------------------------------------------------ helpers


def map_splitting(s: Splitting, images: dict[int, Word]) -> Splitting:
    """Push a splitting forward along the endomorphism ``letter -> images``."""

    def f(w: Sequence[int]) -> Word:
        return apply_map(images, w)

    verts = tuple(tuple(f(g) for g in gens) for gens in s.vertices)
    edges = tuple(
        Edge(e.u, e.v, f(e.stable), None if e.attach is None else (f(e.attach[0]), f(e.attach[1])))
        for e in s.edges
    )
    return Splitting(s.n, verts, edges)


def canonical(s: Splitting) -> Splitting:
    """Representative with trivial tree stables (equivalence is unaffected)."""
    return s.normalized()


def _dedupe(splittings: Iterable[Splitting]) -> list[Splitting]:
    out: list[Splitting] = []
    keys = set()
    for s in splittings:
        k = s.key()
        if k not in keys:
            keys.add(k)
            out.append(s)
    return out


# ------------------------------------------------------------ the map f


def f_images(g: Splitting | BetaGraph) -> list[Splitting]:
    """One one-edge splitting per (natural) edge, in edge order."""
    if isinstance(g, BetaGraph):
        mg, _ = g.natural_graph()
        return [graph_splitting(mg, [i]) for i in range(len(mg.edges))]
    if g.num_edges == 1:
        return [g]
    return [collapse(g, i)[0] for i in range(g.num_edges)]


def f_map(g: Splitting | BetaGraph) -> list[Splitting]:
    """The coarse map to one-edge splittings, up to equivalence."""
    return _dedupe(f_images(g))


# ------------------------------------------------------------ certificates


@dataclass(frozen=True)
class GeneralRefinement:
    """A two-edge splitting (free or cyclic edges) collapsing onto x and y."""

    tree: Splitting
    to_x: CollapseCertificate
    to_y: CollapseCertificate

    def verify(self, x: Splitting, y: Splitting) -> bool:
        return (
            self.tree.num_edges == 2
            and self.tree.is_valid()
            and self.to_x.source == self.tree == self.to_y.source
            and self.to_x.verify()
            and self.to_y.verify()
            and equivalent(self.to_x.target, x)
            and equivalent(self.to_y.target, y)
        )


def general_refinement_from(tree: Splitting, x: Splitting, y: Splitting) -> GeneralRefinement | None:
    if tree.num_edges != 2 or not tree.is_valid():
        return None
    (c0, k0), (c1, k1) = collapse(tree, 0), collapse(tree, 1)
    for (cx, kx), (cy, ky) in (((c0, k0), (c1, k1)), ((c1, k1), (c0, k0))):
        if equivalent(cx, x) and equivalent(cy, y):
            return GeneralRefinement(tree, kx, ky)
    return None


@dataclass(frozen=True)
class FoldWitness:
    """``free`` folds over ``word`` (given side) to ``target``."""

    free: Splitting
    word: Word
    side: int
    target: Splitting

    def verify(self) -> bool:
        return verify_fold_relation(self.free, self.target, self.word, self.side)


@dataclass(frozen=True)
class AdjacencyCertificate:
    """Why two vertices are at distance at most one.

    ``EQUAL``: equivalent splittings.  ``TYPE1``: a two-edge free common
    refinement.  ``TYPE2``: both free splittings fold to one cyclic splitting.
    ``FOLD``: ``y`` is an edge fold of ``x`` or vice versa.  ``REFINE``: a
    two-edge common refinement with cyclic edges allowed.
    """

    kind: str
    x: Splitting
    y: Splitting
    refinement: Refinement | GeneralRefinement | None = None
    folds: tuple[FoldWitness, ...] = ()

    def verify(self) -> bool:
        try:
            x, y = self.x, self.y
            if self.kind == "EQUAL":
                return equivalent(x, y)
            if self.kind == "TYPE1":
                return (
                    isinstance(self.refinement, Refinement)
                    and x.is_free
                    and y.is_free
                    and self.refinement.verify(x, y)
                )
            if self.kind == "REFINE":
                return self.refinement is not None and self.refinement.verify(x, y)
            if self.kind == "TYPE2":
                if len(self.folds) != 2:
                    return False
                fx, fy = self.folds
                return (
                    x.is_free
                    and y.is_free
                    and equivalent(fx.free, x)
                    and equivalent(fy.free, y)
                    and fx.verify()
                    and fy.verify()
                    and equivalent(fx.target, fy.target)
                    and not fx.target.is_free
                )
            if self.kind == "FOLD":
                if len(self.folds) != 1:
                    return False
                (f,) = self.folds
                return f.verify() and (
                    (equivalent(f.free, x) and equivalent(f.target, y))
                    or (equivalent(f.free, y) and equivalent(f.target, x))
                )
        except SplittingError:
            return False
        return False

    def allowed_in(self, complex_name: str) -> bool:
        if self.kind == "EQUAL":
            return True
        return self.kind in {
            "FS": {"TYPE1"},
            "FZ": {"TYPE1", "TYPE2"},
            "FZbar": {"TYPE1", "FOLD"},
            "C": {"TYPE1", "REFINE"},
        }[complex_name]

    def reversed(self) -> "AdjacencyCertificate":
        ref = self.refinement
        if isinstance(ref, Refinement) and not ref.identical:
            ref = Refinement(ref.tree, ref.to_y, ref.to_x)
        elif isinstance(ref, GeneralRefinement):
            ref = GeneralRefinement(ref.tree, ref.to_y, ref.to_x)
        folds = tuple(reversed(self.folds)) if self.kind == "TYPE2" else self.folds
        return AdjacencyCertificate(self.kind, self.y, self.x, ref, folds)


@dataclass
class PathCertificate:
    complex: str
    vertices: list[Splitting]
    steps: list[AdjacencyCertificate]
    note: str = ""

    @property
    def length(self) -> int:
        return sum(1 for s in self.steps if s.kind != "EQUAL")

    def verify(self) -> bool:
        if len(self.steps) != len(self.vertices) - 1 or not self.vertices:
            return False
        for i, step in enumerate(self.steps):
            if not step.allowed_in(self.complex):
                return False
            if not (equivalent(step.x, self.vertices[i]) and equivalent(step.y, self.vertices[i + 1])):
                return False
            if not step.verify():
                return False
        return True

    def then(self, step: AdjacencyCertificate) -> "PathCertificate":
        return PathCertificate(self.complex, self.vertices + [step.y], self.steps + [step], self.note)


def trivial_path(x: Splitting, complex_name: str = "FZ") -> PathCertificate:
    return PathCertificate(complex_name, [x], [])


def _path_from_steps(complex_name: str, steps: list[AdjacencyCertificate]) -> PathCertificate:
    return PathCertificate(complex_name, [steps[0].x] + [s.y for s in steps], steps)


def map_certificate(cert: AdjacencyCertificate, images: dict[int, Word]) -> AdjacencyCertificate:
    """Transport a certificate along an automorphism."""

    def m(s: Splitting | None) -> Splitting | None:
        return None if s is None else map_splitting(s, images)

    def mc(c: CollapseCertificate | None) -> CollapseCertificate | None:
        return None if c is None else CollapseCertificate(m(c.source), m(c.target), c.collapsed)

    ref = cert.refinement
    if isinstance(ref, Refinement):
        ref = Refinement(m(ref.tree), mc(ref.to_x), mc(ref.to_y), ref.identical)
    elif isinstance(ref, GeneralRefinement):
        ref = GeneralRefinement(m(ref.tree), mc(ref.to_x), mc(ref.to_y))
    folds = tuple(
        FoldWitness(m(f.free), apply_map(images, f.word), f.side, m(f.target)) for f in cert.folds
    )
    return AdjacencyCertificate(cert.kind, m(cert.x), m(cert.y), ref, folds)


def map_path(path: PathCertificate, images: dict[int, Word]) -> PathCertificate:
    return PathCertificate(
        path.complex,
        [map_splitting(v, images) for v in path.vertices],
        [map_certificate(s, images) for s in path.steps],
        path.note,
    )


# ------------------------------------------------------------ adjacency in FZ


def _fold_options(x: Splitting, w: Sequence[int]) -> list[FoldWitness]:
    """Edge folds of ``x`` over a conjugate of ``w`` lying in a vertex group."""
    s = x.normalized()
    (e,) = s.edges
    out = []
    sides = (0,) if e.is_loop else (0, 1)
    w = reduce_word(w, s.n)
    for side in sides:
        core = build_core(s.vertices[side], s.n)
        # the fold depends on the element, not only on its conjugacy class,
        # so w itself goes first when it lies in the vertex group
        choices = [w] if contains(core, w) else []
        g = conjugator_into(core, w)
        if g is not None and multiply(g, w, inverse(g)) not in choices:
            choices.append(multiply(g, w, inverse(g)))
        for inside in choices:
            for fold_side in ((0, 1) if e.is_loop else (side,)):
                try:
                    t = edge_fold(s, inside, fold_side)
                    if t.is_valid():
                        out.append(FoldWitness(s, inside, fold_side, t))
                except SplittingError:
                    continue
    return out


def type2_certificate(x: Splitting, y: Splitting, w: Sequence[int]) -> AdjacencyCertificate | None:
    if not (x.is_free and y.is_free):
        return None
    fy = _fold_options(y, w)
    if not fy:
        return None
    for a in _fold_options(x, w):
        for b in fy:
            if a.target.key() == b.target.key():
                return AdjacencyCertificate("TYPE2", x, y, None, (a, b))
    return None


def type1_certificate(x: Splitting, y: Splitting, bound: int = 3) -> AdjacencyCertificate | None:
    if not (x.is_free and y.is_free):
        return None
    ref = common_refinement(x, y, bound)
    if ref is None:
        return None
    if ref.identical:
        return AdjacencyCertificate("EQUAL", x, y)
    return AdjacencyCertificate("TYPE1", x, y, ref)


def conjugacy_representatives(n: int, bound: int) -> list[Word]:
    """Cyclically reduced words up to ``bound`` modulo cyclic rotation and inversion."""
    out = []
    seen = set()
    for w in words_up_to(n, bound, min_len=1):
        if cyclically_reduce(w)[0] != w:
            continue
        cls = set(cyclic_conjugates(w)) | set(cyclic_conjugates(inverse(w)))
        if seen & cls:
            continue
        seen |= cls
        out.append(w)
    return out


def fz_adjacent(
    x: Splitting,
    y: Splitting,
    w_hint: Sequence[int] | None = None,
    bound: int = 3,
    word_bound: int | None = None,
) -> AdjacencyCertificate | None:
    """Look for an FZ edge between one-edge free splittings; None is inconclusive.

    ``bound`` limits the refinement search.  Fold words are ``w_hint`` alone
    when given without ``word_bound``; otherwise the hint first and then all
    conjugacy classes up to ``word_bound`` (default ``bound``).
    """
    if x.n != y.n:
        raise ValueError("splittings of different ranks")
    if equivalent(x, y):
        return AdjacencyCertificate("EQUAL", x, y)
    cert = type1_certificate(x, y, bound)
    if cert is not None:
        return cert
    words = [reduce_word(w_hint, x.n)] if w_hint is not None else []
    if w_hint is None or word_bound is not None:
        words += conjugacy_representatives(x.n, word_bound or bound)
    for w in words:
        cert = type2_certificate(x, y, w)
        if cert is not None:
            return cert
    return None


def case_criterion(x: Splitting, y: Splitting, w: Sequence[int]) -> bool | None:
    """Subgroup test deciding whether normalized x and y fold to a common T.

    Segments ``A * B`` and ``A * B'`` need ``<B, w> = <B', w>``; loops with
    vertex groups ``A * B`` and ``A * B'`` and stable letter ``t`` need
    ``<A, B, w^t> = <A, B', w^t>``.  None when the shapes do not apply.
    """
    try:
        dx, dy = decompose(x, w), decompose(y, w)
    except (Unresolved, ValueError):
        return None
    if dx.case != dy.case:
        return None
    n = x.n
    if dx.case == "segment":
        return subgroup_equal(list(dx.b) + [dx.w], list(dy.b) + [dy.w], n)
    if dx.t != dy.t:
        return None
    wt = conjugate(dx.w, dx.t)
    return subgroup_equal(list(dx.a) + list(dx.b) + [wt], list(dy.a) + list(dy.b) + [wt], n)


# ------------------------------------------------------------ normalization


@dataclass(frozen=True)
class Decomposition:
    """A one-edge free splitting written as ``A * B`` or ``(A * B)`` with loop ``t``."""

    case: str
    a: tuple[Word, ...]
    b: tuple[Word, ...]
    t: Word
    w: Word
    splitting: Splitting


def _fill(w: Sequence[int], n: int) -> list[Word]:
    a = fill(w, n)
    if a is None:
        raise Unresolved("could not determine the free factor filled by the word")
    return a


def _aligned(x: Splitting, w: Word) -> tuple[Splitting, int]:
    """Globally conjugate ``x`` so that ``w`` lies literally in a vertex group."""
    s = x.normalized()
    for v, group in enumerate(s.vertices):
        core = build_core(group, s.n)
        if contains(core, w):
            return s, v
    for v, group in enumerate(s.vertices):
        g = conjugator_into(build_core(group, s.n), w)
        if g is not None:
            shift = inverse(g)
            moved = s.translated({u: shift for u in range(len(s.vertices))})
            return moved.normalized() if moved.edges[0].stable and not moved.edges[0].is_loop else moved, v
    raise ValueError("the word is not elliptic in the splitting")


def decompose(x: Splitting, w: Sequence[int]) -> Decomposition:
    """Read off ``A = fill(w)`` and its complement ``B`` in a normalized splitting."""
    n = x.n
    w = reduce_word(w, n)
    s, v = _aligned(x, w)
    a = _fill(w, n)
    (e,) = s.edges
    if e.is_loop:
        b = relative_complement(a, s.vertices[0], n)
        if b is None:
            raise ValueError("fill(w) is not a free factor of the vertex group")
        return Decomposition("loop", tuple(a), tuple(b), e.stable, w, s)
    if not subgroup_equal(a, s.vertices[v], n):
        raise ValueError("splitting is not normalized: the vertex containing w is not fill(w)")
    b = build_core(s.vertices[1 - v], n).basis()
    return Decomposition("segment", tuple(a), tuple(b), EMPTY, w, s)


def lemma1_normalize(
    x: Splitting, y: Splitting, w: Sequence[int]
) -> tuple[Splitting, Splitting, PathCertificate, PathCertificate]:
    """Replace segment splittings by neighbours whose ``w``-vertex is ``fill(w)``."""
    return (*_normalize_pair(x, y, w),)


def _normalize_one(x: Splitting, a: list[Word], w: Word) -> tuple[Splitting, PathCertificate]:
    n = x.n
    s, v = _aligned(x, w)
    if s.edges[0].is_loop:
        raise ValueError("normalization applies to segment splittings")
    p, q = s.vertices[v], s.vertices[1 - v]
    if subgroup_equal(a, p, n):
        return x, trivial_path(x)
    if not all(subgroup_contains(p, g, n) for g in a):
        raise Unresolved("fill(w) is not inside the vertex group containing w")
    c = relative_complement(a, p, n)
    if not c:
        raise Unresolved("no complement of fill(w) in the vertex group")
    target = segment(a, list(c) + list(q), n)
    tree = Splitting(n, (tuple(a), tuple(c), tuple(q)), (Edge(0, 1), Edge(1, 2)))
    ref = refinement_from(tree, x, target)
    if ref is None:
        raise CertificateFailure("normalizing refinement does not collapse as expected")
    step = AdjacencyCertificate("TYPE1", x, target, ref)
    return target, _path_from_steps("FZ", [step])


def _normalize_pair(x, y, w):
    n = x.n
    w = reduce_word(w, n)
    a = _fill(w, n)
    x2, px = _normalize_one(x, a, w)
    y2, py = _normalize_one(y, a, w)
    return x2, y2, px, py


# ------------------------------------------------------------ fold paths near an FZ edge


@dataclass
class StepRecord:
    index: int
    images: list[Splitting]
    paths: list[PathCertificate | None]
    case: str

    @property
    def best(self) -> PathCertificate | None:
        found = [p for p in self.paths if p is not None]
        return min(found, key=lambda p: p.length) if found else None


@dataclass
class Theorem5Result:
    x: Splitting
    y: Splitting
    w: Word
    case: str
    beta: list[Word]
    sequence: FoldSequence
    steps: list[StepRecord]

    @property
    def max_length(self) -> int:
        return max((s.best.length for s in self.steps if s.best is not None), default=0)

    def verify(self) -> bool:
        images = {i + 1: b for i, b in enumerate(self.beta)}
        if not self.sequence.replay() or not self.sequence.end.is_standard_rose():
            return False
        if len(self.steps) != len(self.sequence.graphs):
            return False
        for rec, g in zip(self.steps, self.sequence.graphs):
            expect = [map_splitting(s, images) for s in f_images(g)]
            if len(expect) != len(rec.images) or not all(
                equivalent(a, b) for a, b in zip(expect, rec.images)
            ):
                return False
            for img, path in zip(rec.images, rec.paths):
                if path is None:
                    continue
                if not path.verify() or path.length > 3:
                    return False
                if not equivalent(path.vertices[0], img) or not equivalent(path.vertices[-1], self.x):
                    return False
            if rec.best is None:
                return False
        return True


def _beta_setup(x: Splitting, y: Splitting, w: Word):
    dx, dy = decompose(x, w), decompose(y, w)
    if dx.case != dy.case:
        raise ValueError("the two splittings have different shapes")
    n = x.n
    if dx.case == "segment":
        beta = list(dx.a) + list(dx.b)
        beta2 = list(dy.a) + list(dy.b)
    else:
        beta = list(dx.a) + [dx.t] + list(dx.b)
        beta2 = list(dy.a) + [dy.t] + list(dy.b)
    if len(beta) != n or len(beta2) != n:
        raise ValueError("vertex groups do not give bases")
    return dx, dy, beta, beta2


def _foldable_rose(n: int, words: list[Word], fixed: int, a_letters: int) -> BetaGraph:
    """Rose on ``words``; conjugate the unfixed ones by a common element of A if needed."""
    g = build_beta_graph(n, words)
    if is_foldable(g).foldable:
        return g
    for c in words_up_to(a_letters, 6, min_len=1):
        conj = words[:fixed] + [conjugate(u, c) for u in words[fixed:]]
        h = build_beta_graph(n, conj)
        if is_foldable(h).foldable:
            return h
    raise FoldError("could not make the rose foldable by conjugating with A")


def _blow_up(mg: MarkedGraph, loops: Iterable[int]) -> tuple[MarkedGraph, int] | None:
    """Pull the given loops at one vertex onto a new vertex joined by an empty edge."""
    loops = list(loops)
    if not loops:
        return None
    v = mg.edges[loops[0]][0]
    if any(mg.edges[i][0] != v or mg.edges[i][2] != v for i in loops):
        return None
    new = mg.num_vertices
    edges = [(new, w, new) if i in loops else (a, w, b) for i, (a, w, b) in enumerate(mg.edges)]
    edges.append((new, EMPTY, v))
    degree_left = sum((a == v) + (b == v) for a, _, b in edges)
    if degree_left < 3:
        return None
    return MarkedGraph(mg.n, new + 1, tuple(edges), mg.base), len(edges) - 1


class _StepSearch:
    """Breadth-first search for short paths from the images of one graph to X."""

    def __init__(self, g: BetaGraph, target: Splitting, words: list[Word], a_letters: list[int], refine_bound: int):
        self.g = g
        self.target = target
        self.words = words
        self.a_letters = set(a_letters)
        self.refine_bound = refine_bound
        self.mg, _ = g.natural_graph()
        self.images = [graph_splitting(self.mg, [i]) for i in range(len(self.mg.edges))]
        self._adj_cache: dict = {}
        self.blowups = self._blowups()

    def _blowups(self) -> list[tuple[MarkedGraph, int, Splitting]]:
        out = []
        by_vertex: dict[int, list[int]] = {}
        for i, (a, w, b) in enumerate(self.mg.edges):
            if a == b and len(w) == 1 and abs(w[0]) in self.a_letters:
                by_vertex.setdefault(a, []).append(i)
        for v, loops in by_vertex.items():
            got = _blow_up(self.mg, loops)
            if got is None:
                continue
            big, new = got
            s = graph_splitting(big, [new])
            if s.is_valid():
                out.append((big, new, s))
        return out

    def neighbours(self, idx: int) -> list[AdjacencyCertificate]:
        """TYPE1 steps from image ``idx`` to the other images and the blow-ups."""
        out = []
        s = self.images[idx]
        for j, other in enumerate(self.images):
            if j == idx or other.key() == s.key():
                continue
            tree = graph_splitting(self.mg, sorted([idx, j]))
            ref = refinement_from(tree, s, other)
            if ref is not None:
                out.append(AdjacencyCertificate("TYPE1", s, other, ref))
        for big, new, b in self.blowups:
            if b.key() == s.key():
                continue
            tree = graph_splitting(big, sorted([idx, new]))
            ref = refinement_from(tree, s, b)
            if ref is not None:
                out.append(AdjacencyCertificate("TYPE1", s, b, ref))
        return out

    def peel(self, s: Splitting) -> list[AdjacencyCertificate]:
        """TYPE2 steps that strip a subword of w off one generator."""
        out = []
        if s.edges[0].is_loop:
            return out
        norm = s.normalized()
        n = s.n
        for wi in self.words:
            for side in (0, 1):
                group = list(norm.vertices[1 - side])
                if not subgroup_contains(norm.vertices[side], wi, n):
                    continue
                for k, gen in enumerate(group):
                    for new in (multiply(wi, gen), multiply(inverse(wi), gen), multiply(gen, wi), multiply(gen, inverse(wi))):
                        if len(new) >= len(gen):
                            continue
                        verts = list(norm.vertices)
                        verts[1 - side] = tuple(group[:k] + [new] + group[k + 1:])
                        cand = Splitting(n, tuple(verts), norm.edges)
                        if not cand.is_valid():
                            continue
                        cert = type2_certificate(s, cand, wi)
                        if cert is not None:
                            out.append(cert)
        return out

    def to_target(self, s: Splitting) -> AdjacencyCertificate | None:
        k = s.key()
        if k in self._adj_cache:
            return self._adj_cache[k]
        x = self.target
        cert = None
        if equivalent(s, x):
            cert = AdjacencyCertificate("EQUAL", s, x)
        if cert is None:
            for wi in self.words:
                cert = type2_certificate(s, x, wi)
                if cert is not None:
                    break
        if cert is None:
            cert = type1_certificate(s, x, self.refine_bound)
        self._adj_cache[k] = cert
        return cert

    def search(self, idx: int, radius: int = 3) -> PathCertificate | None:
        start = self.images[idx]
        hit = self.to_target(start)
        if hit is not None:
            steps = [] if hit.kind == "EQUAL" else [hit]
            return PathCertificate("FZ", [start] + ([hit.y] if steps else []), steps)
        # layer 1: other images and blow-ups (all from this graph)
        first = self.neighbours(idx)
        for c in first:
            hit = self.to_target(c.y)
            if hit is not None and hit.kind != "EQUAL":
                return _path_from_steps("FZ", [c, hit])
            if hit is not None:
                return _path_from_steps("FZ", [c])
        if radius < 3:
            return None
        # layer 2: peel moves, then the images' mutual neighbours
        for c in first:
            for d in self.peel(c.y):
                hit = self.to_target(d.y)
                if hit is not None and hit.kind != "EQUAL":
                    return _path_from_steps("FZ", [c, d, hit])
        for d in self.peel(start):
            hit = self.to_target(d.y)
            if hit is not None and hit.kind != "EQUAL":
                return _path_from_steps("FZ", [d, hit])
            for e in self.peel(d.y):
                hit = self.to_target(e.y)
                if hit is not None and hit.kind != "EQUAL":
                    return _path_from_steps("FZ", [d, e, hit])
        return None


def _candidate_words(w: Word, case: str, t: Word) -> list[Word]:
    """w, then its proper cyclic subwords (shortest last), deduplicated."""
    out: list[Word] = []
    rot = cyclic_conjugates(w)
    subs = [w] + sorted(
        {r[:k] for r in rot for k in range(1, len(w))}, key=lambda u: (-len(u), u)
    )
    for u in subs:
        u = reduce_word(u)
        if u and u not in out and inverse(u) not in out:
            out.append(u)
    return out


def theorem5_path(
    x: Splitting,
    y: Splitting,
    w: Sequence[int],
    case: str | None = None,
    refine_bound: int = 3,
    all_images: bool = True,
) -> Theorem5Result:
    """Fold from the rose of Y's basis to the rose of X's basis and certify each step.

    Every graph on the way has an image under f within distance 3 of X; a step
    without such a certificate raises :class:`CertificateFailure`.
    """
    n = x.n
    w = reduce_word(w, n)
    dx, dy, beta, beta2 = _beta_setup(x, y, w)
    if case is not None and case != dx.case:
        raise ValueError(f"splittings have shape {dx.case}, not {case}")
    if type2_certificate(x, y, w) is None and not equivalent(x, y):
        raise ValueError("X and Y do not fold to a common cyclic splitting over w")
    coords = basis_coordinates(beta, n)
    images = {i + 1: b for i, b in enumerate(beta)}
    k = len(dx.a)
    fixed = k + (1 if dx.case == "loop" and dy.t == dx.t else 0)
    words2 = [apply_map(coords, b) for b in beta2]
    start = _foldable_rose(n, words2, fixed, k)
    w_beta = apply_map(coords, w)
    priority = w_beta if dx.case == "segment" else conjugate(w_beta, apply_map(coords, dx.t))
    seq = fold_to_rose(start, WordPriority(priority))
    x_beta = map_splitting(dx.splitting, coords)
    words = _candidate_words(w_beta, dx.case, EMPTY)
    records = []
    for i, g in enumerate(seq.graphs):
        search = _StepSearch(g, x_beta, words, list(range(1, k + 1)), refine_bound)
        idxs = range(len(search.images)) if all_images else [0]
        paths = []
        for j in idxs:
            p = search.search(j)
            paths.append(None if p is None else map_path(p, images))
        imgs = [map_splitting(s, images) for s in search.images]
        if not all_images:
            paths += [None] * (len(imgs) - 1)
        rec = StepRecord(i, imgs, paths, _classify(paths))
        if rec.best is None:
            raise CertificateFailure(f"no path of length <= 3 from f(Gamma_{i}) to X")
        records.append(rec)
    return Theorem5Result(x, y, w, dx.case, beta, seq, records)


def _classify(paths: list[PathCertificate | None]) -> str:
    lengths = [p.length for p in paths if p is not None]
    if not lengths:
        return "uncertified"
    best = min(lengths)
    return {0: "equal", 1: "adjacent"}.get(best, f"distance<={best}")


# ------------------------------------------------------------ half-way folds and unfolding chains


@dataclass
class HalfwayResult:
    tree: Splitting
    to_free: CollapseCertificate
    to_cyclic: CollapseCertificate

    def verify(self, x: Splitting, t: Splitting) -> bool:
        return GeneralRefinement(self.tree, self.to_free, self.to_cyclic).verify(x, t)


def halfway_refinement(x: Splitting, t: Splitting, w: Sequence[int]) -> HalfwayResult:
    """Fold the edge group only half-way: a free edge and a cyclic edge in a row."""
    n = x.n
    w = reduce_word(w, n)
    side = next((s for s in (0, 1) if verify_fold_relation(x, t, w, s)), None)
    if side is None:
        raise ValueError("t is not an edge fold of x over w")
    s = x.normalized()
    (e,) = s.edges
    z = (w,)
    if e.is_loop:
        v, st = s.vertices[0], e.stable
        if side == 0:
            cands = [
                Splitting(n, (v, z), (Edge(0, 1, EMPTY, (w, w)), Edge(1, 0, st))),
                Splitting(n, (v, z), (Edge(0, 1, st, (conjugate(w, inverse(st)), w)), Edge(1, 0, EMPTY))),
            ]
        else:
            back = multiply(st, w, inverse(st))
            cands = [
                Splitting(n, (v, z), (Edge(0, 1, EMPTY, (w, w)), Edge(0, 1, st))),
                Splitting(n, (v, z), (Edge(0, 1, inverse(st), (back, w)), Edge(0, 1, EMPTY))),
            ]
    else:
        a, b = s.vertices[side], s.vertices[1 - side]
        cands = [Splitting(n, (a, z, b), (Edge(0, 1, EMPTY, (w, w)), Edge(1, 2)))]
    for tree in cands:
        ref = general_refinement_from(tree, x, t)
        if ref is not None:
            return HalfwayResult(tree, ref.to_x, ref.to_y)
    raise CertificateFailure("half-way refinement does not collapse onto both splittings")


@dataclass
class UnfoldChainResult:
    cyclic: Splitting
    free: Splitting
    x: Splitting
    y: Splitting
    path: PathCertificate

    def verify(self) -> bool:
        return (
            self.free.is_free
            and self.free.is_valid()
            and self.path.verify()
            and self.path.length <= 3
            and equivalent(self.path.vertices[0], self.x)
            and equivalent(self.path.vertices[-1], self.y)
        )


def _drop_from_vertex(group: Sequence[Word], drop: list[Word], keep: list[Word], n: int) -> list[Word] | None:
    """A free factor ``G'`` of ``group`` with ``group = <drop> * G'`` and ``keep`` in ``G'``."""
    if not drop:
        return list(group)
    comp = relative_complement(drop + keep, group, n) if keep else relative_complement(drop, group, n)
    if comp is None:
        return None
    return comp + keep if keep else comp


def unfold_chain(t2: Splitting, search_bound: int = 3) -> UnfoldChainResult | None:
    """Unfold both edges of a two-edge splitting and connect its collapses in three steps.

    Returns None (UNRESOLVED) when no unfolding is found within the bounds.
    """
    s = t2.normalized()
    if s.num_edges != 2:
        raise ValueError("expected a two-edge splitting")
    x, _ = collapse(s, 0)
    y, _ = collapse(s, 1)
    cyclic = [i for i, e in enumerate(s.edges) if e.cyclic]
    if not cyclic:
        raise ValueError("both edges are already free")
    free = _unfold_two_edge(s, search_bound)
    if free is None:
        return None
    fx, _ = collapse(free, 0)
    fy, _ = collapse(free, 1)
    ref = refinement_from(free, fx, fy)
    if ref is None:
        return None
    wx = _fold_back(fx, x, s.edges[0])
    wy = _fold_back(fy, y, s.edges[1])
    if wx is None or wy is None:
        return None
    first = AdjacencyCertificate("FOLD", x, fx, None, (wx,)) if wx.word else AdjacencyCertificate("EQUAL", x, fx)
    last = AdjacencyCertificate("FOLD", fy, y, None, (wy,)) if wy.word else AdjacencyCertificate("EQUAL", fy, y)
    steps = [first, AdjacencyCertificate("TYPE1", fx, fy, ref), last]
    path = _path_from_steps("FZbar", steps)
    return UnfoldChainResult(t2, free, x, y, path)


def _fold_back(free1: Splitting, cyc: Splitting, edge: Edge) -> FoldWitness | None:
    if not edge.cyclic:
        return FoldWitness(free1, EMPTY, 0, cyc) if equivalent(free1, cyc) else None
    u = unfold(cyc)
    cands = []
    if u is not None and equivalent(u.free, free1):
        cands.append(FoldWitness(free1, u.w, u.side, cyc))
    norm = free1.normalized()
    for word in edge.attach:
        for v, group in enumerate(norm.vertices):
            g = conjugator_into(build_core(group, norm.n), word)
            if g is None:
                continue
            inside = multiply(g, word, inverse(g))
            for side in (0, 1):
                cands.append(FoldWitness(norm, inside, side, cyc))
    for c in cands:
        if c.verify():
            return c
    return None


def _unfold_two_edge(s: Splitting, search_bound: int) -> Splitting | None:
    """Replace each cyclic edge by a free one, shrinking a vertex group at one end."""
    n = s.n
    ends_of = [
        (i, k, e.u if k == 0 else e.v) for i, e in enumerate(s.edges) if e.cyclic for k in (0, 1)
    ]
    cyclic = [i for i, e in enumerate(s.edges) if e.cyclic]
    for choice in itertools.product((0, 1), repeat=len(cyclic)):
        dropped = set(zip(cyclic, choice))
        verts = list(s.vertices)
        ok = True
        for v in range(len(verts)):
            drop = [s.edges[i].attach[k] for i, k, u in ends_of if u == v and (i, k) in dropped]
            keep = [s.edges[i].attach[k] for i, k, u in ends_of if u == v and (i, k) not in dropped]
            if not drop:
                continue
            new = _drop_from_vertex(verts[v], drop, keep, n)
            if new is None:
                ok = False
                break
            verts[v] = tuple(new)
        if not ok:
            continue
        cand = Splitting(n, tuple(verts), tuple(Edge(e.u, e.v, e.stable) for e in s.edges))
        if cand.is_valid():
            return cand
    return None


# ------------------------------------------------------------ bounded distance


@dataclass(frozen=True)
class Budget:
    word: int = 6
    radius: int = 3


def _free_neighbours(x: Splitting, y: Splitting, budget: Budget) -> Iterable[AdjacencyCertificate]:
    """TYPE1 neighbours of ``x`` built from factorizations guided by ``y``."""
    from .splittings import _candidate_trees

    for tree in _candidate_trees(x, y, budget.word):
        if not tree.is_valid():
            continue
        for keep in (0, 1):
            other, _ = collapse(tree, keep)
            if other.key() == x.key():
                continue
            ref = refinement_from(tree, x, other)
            if ref is not None:
                yield AdjacencyCertificate("TYPE1", x, other, ref)


def _fold_neighbours(x: Splitting, y: Splitting, budget: Budget) -> Iterable[AdjacencyCertificate]:
    """FOLD neighbours: fold ``x`` over short elliptic words, or unfold it."""
    if x.is_free:
        probes: list[Word] = []
        for gen in (g for v in y.vertices for g in v):
            c = cyclically_reduce(gen)[0]
            if c and len(c) <= budget.word:
                probes.append(c)
        for e in y.edges:
            if e.attach is not None:
                probes.append(cyclically_reduce(e.attach[0])[0])
        for w in probes:
            for f in _fold_options(x, w):
                yield AdjacencyCertificate("FOLD", x, f.target, None, (f,))
    else:
        u = unfold(x)
        if u is not None:
            yield AdjacencyCertificate("FOLD", x, u.free, None, (FoldWitness(u.free, u.w, u.side, x),))


def _direct(x: Splitting, y: Splitting, complex_name: str, budget: Budget) -> AdjacencyCertificate | None:
    if equivalent(x, y):
        return AdjacencyCertificate("EQUAL", x, y)
    if x.is_free and y.is_free:
        cert = type1_certificate(x, y, budget.radius)
        if cert is not None:
            return cert
        if complex_name == "FZ":
            for w in conjugacy_representatives(x.n, min(budget.word, 4)):
                cert = type2_certificate(x, y, w)
                if cert is not None:
                    return cert
    if complex_name == "FZbar":
        for a, b, flip in ((x, y, False), (y, x, True)):
            if a.is_free and not b.is_free:
                for word in b.edges[0].attach:
                    for f in _fold_options(a, word):
                        if equivalent(f.target, b):
                            c = AdjacencyCertificate("FOLD", a, b, None, (f,))
                            return c.reversed() if flip else c
    if complex_name == "C" and (not x.is_free or not y.is_free):
        for a, b, flip in ((x, y, False), (y, x, True)):
            if a.is_free and not b.is_free:
                for word in b.edges[0].attach:
                    try:
                        h = halfway_refinement(a, b, word)
                    except (ValueError, CertificateFailure):
                        continue
                    ref = GeneralRefinement(h.tree, h.to_free, h.to_cyclic)
                    c = AdjacencyCertificate("REFINE", a, b, ref)
                    return c.reversed() if flip else c
    return None


def distance_upper(
    x: Splitting, y: Splitting, complex_name: str = "FZ", budget: Budget = Budget()
) -> tuple[int | None, PathCertificate | None]:
    """Shortest path found by bounded breadth-first search; (None, None) is UNKNOWN.

    Only upper bounds are ever claimed.
    """
    if complex_name not in COMPLEXES:
        raise ValueError(f"unknown complex {complex_name!r}")
    frontier: deque[tuple[Splitting, list[AdjacencyCertificate]]] = deque([(x, [])])
    seen = {x.key()}
    while frontier:
        node, steps = frontier.popleft()
        hit = _direct(node, y, complex_name, budget)
        if hit is not None:
            full = steps + ([] if hit.kind == "EQUAL" else [hit])
            path = _path_from_steps(complex_name, full) if full else trivial_path(x, complex_name)
            if path.verify():
                return path.length, path
        if len(steps) + 1 >= budget.radius:
            continue
        moves: list[AdjacencyCertificate] = []
        if node.is_free:
            moves += list(_free_neighbours(node, y, budget))
        if complex_name in ("FZbar", "C"):
            moves += list(_fold_neighbours(node, y, budget))
        for m in moves:
            if complex_name == "C" and m.kind == "FOLD":
                free, cyc = (m.x, m.y) if m.x.is_free else (m.y, m.x)
                try:
                    h = halfway_refinement(free, cyc, m.folds[0].word)
                except (ValueError, CertificateFailure):
                    continue
                ref = GeneralRefinement(h.tree, h.to_free, h.to_cyclic)
                m = AdjacencyCertificate("REFINE", free, cyc, ref)
                if not equivalent(m.x, node):
                    m = m.reversed()
            k = m.y.key()
            if k in seen:
                continue
            seen.add(k)
            frontier.append((m.y, steps + [m]))
    return None, None
