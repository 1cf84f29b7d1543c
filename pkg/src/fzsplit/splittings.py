"""Graph-of-groups splittings of F_n with trivial or cyclic edge groups.

Vertex groups are concrete subgroups of F_n given by generator words.  Each
edge ``e = (u, v)`` carries a stable word ``t_e`` (empty on tree edges after
:meth:`Splitting.normalized`): in the Bass-Serre tree the chosen lift of ``e``
runs from the lift of ``u`` to ``t_e`` times the lift of ``v``.  A cyclic
edge stores attaching words ``(alpha, omega)`` with ``alpha`` in ``G_u``,
``omega`` in ``G_v`` and ``omega = t_e^-1 alpha t_e``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Sequence

from .stallings import (
    build_core,
    conjugacy_core,
    conjugator_into,
    double_coset_contains,
    intersection,
    relative_complement,
    subgroup_contains,
    subgroup_equal,
)
from .words import EMPTY, Word, conjugate, inverse, multiply, reduce_word


class SplittingError(ValueError):
    """A splitting violates its graph-of-groups invariants."""


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    stable: Word = EMPTY
    attach: tuple[Word, Word] | None = None

    @property
    def is_loop(self) -> bool:
        return self.u == self.v

    @property
    def cyclic(self) -> bool:
        return self.attach is not None


def _clean(gens: Iterable[Sequence[int]]) -> tuple[Word, ...]:
    out: list[Word] = []
    for g in gens:
        g = reduce_word(g)
        if g and g not in out and inverse(g) not in out:
            out.append(g)
    return tuple(out)


@dataclass(frozen=True)
class Splitting:
    n: int
    vertices: tuple[tuple[Word, ...], ...]
    edges: tuple[Edge, ...]
    _key: tuple = field(default=None, compare=False, hash=False, repr=False)

    @property
    def is_free(self) -> bool:
        return all(not e.cyclic for e in self.edges)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def shape(self) -> str:
        if len(self.edges) == 1:
            return "loop" if self.edges[0].is_loop else "segment"
        return "graph"

    def vertex_rank(self, v: int) -> int:
        return build_core(self.vertices[v], self.n).rank

    def degree(self, v: int) -> int:
        return sum((e.u == v) + (e.v == v) for e in self.edges)

    # ------------------------------------------------------------ moves

    def translated(self, shifts: dict[int, Word]) -> "Splitting":
        """Move the lift of vertex ``v`` by ``shifts[v]`` (conjugating its group)."""
        g = {v: shifts.get(v, EMPTY) for v in range(len(self.vertices))}
        verts = tuple(
            _clean(multiply(g[v], x, inverse(g[v])) for x in gens)
            for v, gens in enumerate(self.vertices)
        )
        edges = []
        for e in self.edges:
            stable = multiply(g[e.u], e.stable, inverse(g[e.v]))
            attach = None
            if e.attach is not None:
                a, o = e.attach
                attach = (
                    multiply(g[e.u], a, inverse(g[e.u])),
                    multiply(g[e.v], o, inverse(g[e.v])),
                )
            edges.append(Edge(e.u, e.v, stable, attach))
        return Splitting(self.n, verts, tuple(edges))

    def normalized(self) -> "Splitting":
        """Equivalent splitting whose BFS spanning-tree edges have empty stable words."""
        shifts: dict[int, Word] = {0: EMPTY}
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for e in self.edges:
                if e.u == x and e.v not in shifts:
                    shifts[e.v] = multiply(shifts[x], e.stable)
                    queue.append(e.v)
                elif e.v == x and e.u not in shifts:
                    shifts[e.u] = multiply(shifts[x], inverse(e.stable))
                    queue.append(e.u)
        if len(shifts) != len(self.vertices):
            raise SplittingError("underlying graph is disconnected")
        return self.translated(shifts)

    def tree_edges(self) -> set[int]:
        seen = {0}
        tree: set[int] = set()
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for i, e in enumerate(self.edges):
                for a, b in ((e.u, e.v), (e.v, e.u)):
                    if a == x and b not in seen:
                        seen.add(b)
                        tree.add(i)
                        queue.append(b)
        return tree

    def generators(self) -> list[Word]:
        """Images in F_n of the vertex groups and the non-tree stable letters."""
        norm = self.normalized()
        tree = norm.tree_edges()
        gens = [g for vs in norm.vertices for g in vs]
        gens += [e.stable for i, e in enumerate(norm.edges) if i not in tree]
        return [g for g in gens if g]

    def validate(self) -> "Splitting":
        """Check the graph-of-groups invariants; return ``self`` for chaining."""
        n = self.n
        if not self.edges:
            raise SplittingError("a splitting needs at least one edge")
        norm = self.normalized()
        for i, e in enumerate(norm.edges):
            if e.attach is None:
                continue
            a, o = e.attach
            if not a or not subgroup_contains(norm.vertices[e.u], a, n):
                raise SplittingError(f"edge {i}: attaching word not in vertex {e.u}")
            if not subgroup_contains(norm.vertices[e.v], o, n):
                raise SplittingError(f"edge {i}: attaching word not in vertex {e.v}")
            if conjugate(a, e.stable) != o:
                raise SplittingError(f"edge {i}: attaching words not related by the stable letter")
        for v in range(len(norm.vertices)):
            if norm.vertex_rank(v) == 0 and norm.degree(v) < 3:
                raise SplittingError(f"vertex {v} has trivial group and valence < 3")
        if not build_core(self.generators(), n).is_full_rose():
            raise SplittingError("vertex groups and stable letters do not generate F_n")
        betti = len(norm.edges) - len(norm.vertices) + 1
        ranks = [norm.vertex_rank(v) for v in range(len(norm.vertices))]
        if self.is_free:
            if sum(ranks) + betti != n:
                raise SplittingError(f"ranks {ranks} with {betti} loops do not add up to {n}")
        else:
            chi = sum(1 - r for r in ranks) - sum(0 if e.cyclic else 1 for e in norm.edges)
            if chi != 1 - n:
                raise SplittingError(f"Euler characteristic {chi} differs from {1 - n}")
        return self

    def is_valid(self) -> bool:
        try:
            self.validate()
        except SplittingError:
            return False
        return True

    def key(self) -> tuple:
        """Equivalence invariant of a one-edge splitting (hashable)."""
        if self._key is None:
            object.__setattr__(self, "_key", _equivalence_key(self))
        return self._key


def _cc(gens: Sequence[Word], n: int):
    return conjugacy_core(build_core(gens, n))


def _equivalence_key(s: Splitting) -> tuple:
    if len(s.edges) != 1:
        raise SplittingError("equivalence is defined for one-edge splittings")
    (e,) = s.edges
    edge_class = None if e.attach is None else _cc([e.attach[0]], s.n)
    if e.is_loop:
        return ("loop", edge_class, _cc(s.vertices[0], s.n))
    a, b = _cc(s.vertices[0], s.n), _cc(s.vertices[1], s.n)
    if e.attach is None:
        return ("segment", None, frozenset([a, b]), (a, b) if a == b else None)
    # the vertex groups of a cyclic segment play different roles
    return ("segment", edge_class, frozenset([a, b]), None)


# ------------------------------------------------------------ builders


def segment(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], n: int) -> Splitting:
    return Splitting(n, (_clean(a), _clean(b)), (Edge(0, 1),))


def loop(v: Sequence[Sequence[int]], t: Sequence[int], n: int) -> Splitting:
    return Splitting(n, (_clean(v),), (Edge(0, 0, reduce_word(t)),))


def cyclic_segment(a, b, w: Sequence[int], n: int) -> Splitting:
    w = reduce_word(w)
    return Splitting(n, (_clean(a), _clean(b)), (Edge(0, 1, EMPTY, (w, w)),))


def cyclic_loop(v, t: Sequence[int], w: Sequence[int], n: int) -> Splitting:
    t, w = reduce_word(t), reduce_word(w)
    return Splitting(n, (_clean(v),), (Edge(0, 0, t, (w, conjugate(w, t))),))


def normal_form(s: Splitting) -> Splitting:
    """Normalized, with redundant generator lists replaced by Schreier bases."""
    s = s.normalized()
    verts = []
    for gens in s.vertices:
        core = build_core(gens, s.n)
        verts.append(gens if len(gens) == core.rank else tuple(core.basis()))
    return replace(s, vertices=tuple(verts), _key=None)


def equivalent(x: Splitting, y: Splitting) -> bool:
    if x.n != y.n:
        raise SplittingError("rank mismatch")
    return x.key() == y.key()


# ------------------------------------------------------------ collapse


@dataclass(frozen=True)
class CollapseCertificate:
    source: Splitting
    target: Splitting
    collapsed: tuple[int, ...]

    def verify(self) -> bool:
        try:
            self.source.validate()
            got = collapse_edges(self.source, self.collapsed)
            return got.num_edges == self.target.num_edges and (
                got.num_edges != 1 or equivalent(got, self.target)
            )
        except SplittingError:
            return False


def collapse_edges(s: Splitting, collapsed: Iterable[int]) -> Splitting:
    """Collapse the listed edges, amalgamating vertex groups along them."""
    todo = sorted(set(collapsed))
    verts = [list(v) for v in s.vertices]
    edges: list[Edge | None] = list(s.edges)
    alive = set(range(len(verts)))
    for i in todo:
        e = edges[i]
        assert e is not None
        if e.is_loop:
            verts[e.u].append(e.stable)
            edges[i] = None
            continue
        u, v, t = e.u, e.v, e.stable
        # move the lift of v by t so the collapsed edge has empty stable word
        tmp = Splitting(
            s.n,
            tuple(tuple(x) for x in verts),
            tuple(f if f is not None else Edge(0, 0) for f in edges),
        ).translated({v: t})
        verts = [list(x) for x in tmp.vertices]
        edges = [None if edges[j] is None else tmp.edges[j] for j in range(len(edges))]
        verts[u].extend(verts[v])
        verts[v] = []
        alive.discard(v)
        edges[i] = None
        for j, f in enumerate(edges):
            if f is None:
                continue
            edges[j] = Edge(u if f.u == v else f.u, u if f.v == v else f.v, f.stable, f.attach)
    order = sorted(alive)
    index = {v: k for k, v in enumerate(order)}
    out_edges = tuple(
        Edge(index[f.u], index[f.v], f.stable, f.attach) for f in edges if f is not None
    )
    return Splitting(s.n, tuple(_clean(verts[v]) for v in order), out_edges)


def collapse(t: Splitting, keep: int) -> tuple[Splitting, CollapseCertificate]:
    """Collapse every edge except ``keep``."""
    if not 0 <= keep < t.num_edges:
        raise SplittingError(f"edge {keep} not in splitting")
    others = tuple(i for i in range(t.num_edges) if i != keep)
    out = collapse_edges(t, others)
    return out, CollapseCertificate(t, out, others)


def translations_match(
    s1: Splitting, s2: Splitting, edge_map: dict[int, int], shifts: dict[int, Word]
) -> bool:
    """Check that shifting ``s1`` by ``shifts`` reproduces ``s2`` edge for edge.

    Free edges need only agree up to the double coset ``G_u t G_v``; cyclic
    edges must agree exactly.
    """
    moved = s1.translated(shifts)
    vmap: dict[int, int] = {}
    for i, j in edge_map.items():
        a, b = moved.edges[i], s2.edges[j]
        if (a.attach is None) != (b.attach is None):
            return False
        if a.stable != b.stable and (
            a.attach is not None
            or not double_coset_contains(
                moved.vertices[a.u], a.stable, moved.vertices[a.v], b.stable, s1.n
            )
        ):
            return False
        for x, y in ((a.u, b.u), (a.v, b.v)):
            if vmap.setdefault(x, y) != y:
                return False
        if a.attach is not None:
            ok_u = subgroup_equal([a.attach[0]], [b.attach[0]], s1.n)
            ok_v = subgroup_equal([a.attach[1]], [b.attach[1]], s1.n)
            if not (ok_u and ok_v):
                return False
    if len(vmap) != len(s1.vertices) or len(set(vmap.values())) != len(s2.vertices):
        return False
    return all(
        subgroup_equal(moved.vertices[x], s2.vertices[y], s1.n) for x, y in vmap.items()
    )


# ------------------------------------------------------------ marked graphs


@dataclass(frozen=True)
class MarkedGraph:
    """Graph whose edges carry words of F_n (empty words allowed)."""

    n: int
    num_vertices: int
    edges: tuple[tuple[int, Word, int], ...]
    base: int = 0


def graph_splitting(g: MarkedGraph, keep: Iterable[int]) -> Splitting:
    """Splitting obtained by collapsing all edges of ``g`` outside ``keep``.

    Each component of the collapsed subgraph becomes a vertex group, read off
    through tree paths from the base vertex.
    """
    return graph_splitting_data(g, keep)[0]


def graph_splitting_data(
    g: MarkedGraph, keep: Iterable[int]
) -> tuple[Splitting, dict[int, int], dict[int, Word]]:
    """:func:`graph_splitting` plus the component and tree-path word of each graph vertex."""
    keep = set(keep)
    adj: dict[int, list[tuple[int, int, int]]] = {v: [] for v in range(g.num_vertices)}
    for i, (u, _, v) in enumerate(g.edges):
        adj[u].append((i, u, v))
        adj[v].append((i, v, u))
    label = {i: w for i, (_, w, _) in enumerate(g.edges)}

    def step(i: int, a: int) -> Word:
        return label[i] if g.edges[i][0] == a else inverse(label[i])

    # components of the collapsed subgraph with in-component tree paths
    comp: dict[int, int] = {}
    local: dict[int, Word] = {}
    tree: set[int] = set()
    roots: list[int] = []
    for r in [g.base] + list(range(g.num_vertices)):
        if r in comp:
            continue
        comp[r] = len(roots)
        local[r] = EMPTY
        roots.append(r)
        queue = deque([r])
        while queue:
            x = queue.popleft()
            for i, a, b in adj[x]:
                if i in keep or b in comp:
                    continue
                comp[b] = comp[r]
                local[b] = multiply(local[x], step(i, a))
                tree.add(i)
                queue.append(b)
    # offsets of the component roots through the kept edges
    offset: dict[int, Word] = {comp[g.base]: EMPTY}
    queue = deque([comp[g.base]])
    kept_tree: set[int] = set()
    while queue:
        c = queue.popleft()
        for x in [v for v in range(g.num_vertices) if comp[v] == c]:
            for i, a, b in adj[x]:
                if i not in keep or comp[b] in offset:
                    continue
                # root(c) -> x -> (edge) -> b -> root(comp b)
                offset[comp[b]] = multiply(
                    offset[c], local[x], step(i, a), inverse(local[b])
                )
                kept_tree.add(i)
                queue.append(comp[b])

    def pos(v: int) -> Word:
        return multiply(offset[comp[v]], local[v])

    # the lift of component c sits at offset[c]; every edge reads as a loop word
    verts: list[list[Word]] = [[] for _ in roots]
    edges: list[Edge] = []
    for i, (u, w, v) in enumerate(g.edges):
        word = multiply(pos(u), w, inverse(pos(v)))
        if i in keep:
            edges.append(Edge(comp[u], comp[v], word))
        elif i not in tree:
            verts[comp[u]].append(word)
    positions = {v: pos(v) for v in range(g.num_vertices)}
    return Splitting(g.n, tuple(_clean(vs) for vs in verts), tuple(edges)), comp, positions


# ------------------------------------------------------------ edge folds


def edge_fold(x: Splitting, w: Sequence[int], side: int = 0) -> Splitting:
    """Fold the edge of a one-edge free splitting over ``<w>``.

    Segment ``A * B`` with ``w`` in the ``side`` vertex group gives
    ``A *_<w> <B, w>``.  Loop ``V *`` with stable letter ``t`` gives vertex
    group ``<V, w^t>`` (``side`` 0) or ``<V, t w t^-1>`` (``side`` 1).
    """
    w = reduce_word(w, x.n)
    if x.num_edges != 1 or not x.is_free:
        raise SplittingError("edge folds start from a one-edge free splitting")
    if not w:
        raise SplittingError("cannot fold over the trivial element")
    s = x.normalized()
    (e,) = s.edges
    if e.is_loop:
        v = s.vertices[0]
        if not subgroup_contains(v, w, s.n):
            raise SplittingError("fold element not in the vertex group")
        t = e.stable
        if side == 0:
            return cyclic_loop(list(v) + [conjugate(w, t)], t, w, s.n)
        back = multiply(t, w, inverse(t))
        return Splitting(s.n, (_clean(list(v) + [back]),), (Edge(0, 0, t, (back, w)),))
    if side not in (0, 1):
        raise SplittingError(f"bad side {side}")
    if not subgroup_contains(s.vertices[side], w, s.n):
        raise SplittingError("fold element not in the chosen vertex group")
    other = 1 - side
    verts = list(s.vertices)
    verts[other] = _clean(list(verts[other]) + [w])
    return Splitting(s.n, tuple(verts), (Edge(0, 1, EMPTY, (w, w)),))


def verify_fold_relation(x: Splitting, t: Splitting, w: Sequence[int], side: int = 0) -> bool:
    try:
        folded = edge_fold(x, w, side)
        t.validate()
        return equivalent(folded, t)
    except SplittingError:
        return False


def _complement_of_attach(
    group: Sequence[Word], u: Word, n: int
) -> list[Word] | None:
    """Complement of ``<u>`` in ``<group>``, preferring the listed generators."""
    gens = _clean(group)
    core = build_core(gens, n)
    if len(gens) == core.rank:
        for i, g in enumerate(gens):
            if g == u or g == inverse(u):
                return [h for j, h in enumerate(gens) if j != i]
    return relative_complement([u], gens, n)


@dataclass(frozen=True)
class Unfolding:
    free: Splitting
    w: Word
    side: int


def unfold(t: Splitting, search_bound: int = 3) -> Unfolding | None:
    """A free splitting and fold data recovering ``t``, or None if unresolved."""
    if t.num_edges != 1 or t.is_free:
        raise SplittingError("unfold needs a one-edge cyclic splitting")
    s = t.normalized()
    n = s.n
    (e,) = s.edges
    alpha, omega = e.attach  # type: ignore[misc]
    if not e.is_loop:
        for big in (1, 0):
            comp = _complement_of_attach(s.vertices[big], alpha, n)
            if comp is None:
                continue
            small = 1 - big
            verts = [None, None]
            verts[small] = s.vertices[small]
            verts[big] = _clean(comp)
            x = Splitting(n, tuple(verts), (Edge(0, 1),))  # type: ignore[arg-type]
            if x.is_valid() and verify_fold_relation(x, t, alpha, small):
                return Unfolding(x, alpha, small)
        return None
    v = s.vertices[0]
    stable = e.stable
    # side 0: V' = C * <omega> with alpha in C; side 1: V' = C * <alpha> with omega in C
    for side, free_part, inside in ((0, omega, alpha), (1, alpha, omega)):
        comp = _complement_of_attach(v, free_part, n)
        if comp is None:
            continue
        if subgroup_contains(comp, inside, n):
            options = [(comp, stable)]
        else:
            g = conjugator_into(build_core(comp, n), inside)
            if g is None or not subgroup_contains(v, g, n):
                continue
            shifted = [multiply(inverse(g), c, g) for c in comp]
            options = [(shifted, multiply(stable, g) if side == 0 else multiply(inverse(g), stable))]
        for c, tt in options:
            x = loop(c, tt, n)
            if x.is_valid() and verify_fold_relation(x, t, inside, side):
                return Unfolding(x, inside, side)
    return None


# ------------------------------------------------------------ refinements


@dataclass(frozen=True)
class Refinement:
    """A two-edge free splitting with collapse certificates onto X and Y."""

    tree: Splitting | None
    to_x: CollapseCertificate | None
    to_y: CollapseCertificate | None
    identical: bool = False

    def verify(self, x: Splitting, y: Splitting) -> bool:
        if self.identical:
            return equivalent(x, y)
        assert self.tree is not None and self.to_x is not None and self.to_y is not None
        return (
            self.tree.num_edges == 2
            and self.tree.is_free
            and self.to_x.source == self.tree == self.to_y.source
            and self.to_x.verify()
            and self.to_y.verify()
            and equivalent(self.to_x.target, x)
            and equivalent(self.to_y.target, y)
        )


def refinement_from(tree: Splitting, x: Splitting, y: Splitting) -> Refinement | None:
    """Check both one-edge collapses of ``tree`` against ``x`` and ``y``."""
    if tree.num_edges != 2 or not tree.is_valid():
        return None
    c0, cert0 = collapse(tree, 0)
    c1, cert1 = collapse(tree, 1)
    for cx, cy in ((cert0, cert1), (cert1, cert0)):
        if cx.target.key() == x.key() and cy.target.key() == y.key():
            return Refinement(tree, cx, cy)
    return None


def _factorizations(group: Sequence[Word], probes: Sequence[Sequence[Word]], n: int, bound: int):
    """Pairs ``(K, C)`` with ``group = K * C`` and ``K`` an intersection with a probe."""
    seen = set()
    for probe in probes:
        for k in conjugate_intersections(group, probe, n, bound):
            key = build_core(k, n)
            if key in seen:
                continue
            seen.add(key)
            comp = relative_complement(k, group, n)
            if comp is not None and comp:
                yield list(k), comp


def conjugate_intersections(
    g1: Sequence[Word], g2: Sequence[Word], n: int, bound: int = 6
) -> list[list[Word]]:
    """Non-trivial subgroups of ``G1`` of the form ``G1 cap h G2 h^-1``.

    One candidate per pair of core-graph vertices whose tree paths have length
    at most ``bound``; results are subgroups of ``G1`` given by bases.
    """
    c1, c2 = build_core(g1, n), build_core(g2, n)
    p1, p2 = c1.spanning_tree()[0], c2.spanning_tree()[0]
    out = []
    seen = set()
    for p in range(c1.num_vertices):
        g = p1[p]
        if len(g) > bound:
            continue
        a = [multiply(inverse(g), x, g) for x in g1]
        for q in range(c2.num_vertices):
            h = p2[q]
            if len(h) > bound:
                continue
            b = [multiply(inverse(h), x, h) for x in g2]
            k = intersection(a, b, n)
            if not k:
                continue
            k = [multiply(g, x, inverse(g)) for x in k]
            key = build_core(k, n)
            if key not in seen:
                seen.add(key)
                out.append(k)
    return out


def _one_edge_groups(s: Splitting) -> list[tuple[Word, ...]]:
    return list(s.normalized().vertices)


def _candidate_trees(x: Splitting, y: Splitting, bound: int) -> Iterator[Splitting]:
    """Two-edge free splittings that collapse onto ``x`` by construction."""
    n = x.n
    xs = x.normalized()
    probes = _one_edge_groups(y)
    (e,) = xs.edges
    if not e.is_loop:
        for i in (0, 1):
            p, q = xs.vertices[i], xs.vertices[1 - i]
            rq = build_core(q, n).rank
            if rq == 1:
                (s,) = build_core(q, n).basis()
                # P - {1} with a loop s at the trivial vertex
                yield Splitting(n, (p, ()), (Edge(0, 1), Edge(1, 1, s)))
            for k, c in _factorizations(q, probes, n, bound):
                yield Splitting(n, (p, tuple(k), tuple(c)), (Edge(0, 1), Edge(1, 2)))
                yield Splitting(n, (p, tuple(c), tuple(k)), (Edge(0, 1), Edge(1, 2)))
                if len(c) == 1:
                    yield Splitting(n, (p, tuple(k)), (Edge(0, 1), Edge(1, 1, c[0])))
                if len(k) == 1:
                    yield Splitting(n, (p, tuple(c)), (Edge(0, 1), Edge(1, 1, k[0])))
    else:
        v, t = xs.vertices[0], e.stable
        rv = build_core(v, n).rank
        if rv == 1:
            (s,) = build_core(v, n).basis()
            yield Splitting(n, ((),), (Edge(0, 0, t), Edge(0, 0, s)))
        for k, c in _factorizations(v, probes, n, bound):
            for a, b in ((k, c), (c, k)):
                # segment-plus-loop: V = A * B, loop t at B
                yield Splitting(n, (tuple(a), tuple(b)), (Edge(0, 1), Edge(1, 1, t)))
                # theta: collapsing the tree edge returns X
                yield Splitting(n, (tuple(a), tuple(b)), (Edge(0, 1), Edge(0, 1, t)))
                if len(b) == 1:
                    yield Splitting(n, (tuple(a),), (Edge(0, 0, t), Edge(0, 0, b[0])))


def common_refinement(x: Splitting, y: Splitting, bound: int = 3) -> Refinement | None:
    """Search for a two-edge common refinement of one-edge free splittings.

    Candidates factor a vertex group of one splitting along its intersections
    with conjugates of the other's vertex groups.  ``bound`` caps the length of
    the conjugators placing those intersections.  None means the search was
    exhausted, not that the splittings are non-adjacent.
    """
    if equivalent(x, y):
        return Refinement(None, None, None, identical=True)
    for a, b, swap in ((x, y, False), (y, x, True)):
        for tree in _candidate_trees(a, b, bound):
            ref = refinement_from(tree, x, y)
            if ref is not None:
                return ref
    return None
