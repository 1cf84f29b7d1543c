"""Stallings core graphs of finitely generated subgroups of F_n.

Also houses the Whitehead machinery (minimization of words and subgroups,
free-factor complements and the smallest free factor containing an element)
since all of it is phrased in terms of folded graphs.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import networkx as nx

from .words import (
    EMPTY,
    Word,
    apply_map,
    cyclic_length,
    cyclically_reduce,
    format_letter,
    inverse,
    letter_key,
    letters,
    multiply,
    parse_word,
    reduce_word,
    words_up_to,
)


def _fold(num_vertices: int, edges: Iterable[tuple[int, int, int]]):
    """Fold a labeled graph given as ``(u, letter, v)`` edges.

    Returns ``(find, out)`` where ``out[r]`` is the folded adjacency of each
    surviving vertex ``r`` (signed letter -> vertex, possibly stale ids that
    ``find`` resolves).
    """
    parent = list(range(num_vertices))
    out: list[dict[int, int]] = [{} for _ in range(num_vertices)]

    def find(v: int) -> int:
        root = v
        while parent[root] != root:
            root = parent[root]
        while parent[v] != root:
            parent[v], v = root, parent[v]
        return root

    stack = [(u, x, v) if x > 0 else (v, -x, u) for u, x, v in edges]
    while stack:
        u, x, v = stack.pop()
        u, v = find(u), find(v)
        a = out[u].get(x)
        b = out[v].get(-x)
        a = None if a is None else find(a)
        b = None if b is None else find(b)
        if a is not None and a != v:
            p, q = a, v
        elif b is not None and b != u:
            p, q = b, u
        else:
            out[u][x] = v
            out[v][-x] = u
            continue
        # merge p and q, then retry the edge
        if len(out[p]) > len(out[q]):
            p, q = q, p
        parent[p] = q
        moved = out[p]
        out[p] = {}
        for y, z in moved.items():
            stack.append((q, y, z) if y > 0 else (z, -y, q))
        stack.append((u, x, v))
    return find, out


def _trim(adj: dict[int, dict[int, int]], keep: int | None) -> None:
    """Remove degree-one vertices (other than ``keep``) in place."""
    queue = deque(v for v, nbrs in adj.items() if len(nbrs) <= 1 and v != keep)
    while queue:
        v = queue.popleft()
        if v not in adj or v == keep:
            continue
        nbrs = adj.pop(v)
        for x, u in nbrs.items():
            if u in adj:
                adj[u].pop(-x, None)
                if len(adj[u]) <= 1 and u != keep:
                    queue.append(u)


def _bfs_order(adj: dict[int, dict[int, int]], start: int) -> list[int]:
    order = [start]
    seen = {start}
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        for x in sorted(adj[v], key=letter_key):
            u = adj[v][x]
            if u not in seen:
                seen.add(u)
                order.append(u)
    return order


def _relabel(adj: dict[int, dict[int, int]], order: list[int]) -> tuple[tuple[int, int, int], ...]:
    idx = {v: i for i, v in enumerate(order)}
    edges = {(idx[v], x, idx[u]) for v in order for x, u in adj[v].items() if x > 0}
    return tuple(sorted(edges))


@dataclass(frozen=True)
class CoreGraph:
    """Folded based graph; vertex 0 is the basepoint, edges carry positive letters.

    Vertices are numbered breadth-first from the basepoint with neighbors visited
    in letter order a, A, b, B, ..., so two core graphs are equal exactly when
    they represent the same subgroup.
    """

    n: int
    num_vertices: int
    edges: tuple[tuple[int, int, int], ...]
    _adj: tuple = field(default=None, compare=False, hash=False, repr=False)

    @property
    def basepoint(self) -> int:
        return 0

    @property
    def adjacency(self) -> list[dict[int, int]]:
        if self._adj is None:
            adj: list[dict[int, int]] = [{} for _ in range(self.num_vertices)]
            for u, x, v in self.edges:
                adj[u][x] = v
                adj[v][-x] = u
            object.__setattr__(self, "_adj", tuple(adj))
        return self._adj  # type: ignore[return-value]

    def read(self, w: Sequence[int], start: int = 0) -> int | None:
        """End vertex of the path labeled ``w`` from ``start``, or None."""
        adj = self.adjacency
        v = start
        for x in w:
            nxt = adj[v].get(x)
            if nxt is None:
                return None
            v = nxt
        return v

    def contains(self, w: Sequence[int]) -> bool:
        return self.read(w) == 0

    @property
    def rank(self) -> int:
        return len(self.edges) - self.num_vertices + 1

    def is_full_rose(self) -> bool:
        return self.num_vertices == 1 and len(self.edges) == self.n

    def spanning_tree(self) -> tuple[list[Word], set[tuple[int, int, int]]]:
        """Tree path labels from the basepoint and the set of tree edges."""
        cached = self.__dict__.get("_tree")
        if cached is not None:
            return cached
        adj = self.adjacency
        paths: list[Word | None] = [None] * self.num_vertices
        paths[0] = EMPTY
        tree: set[tuple[int, int, int]] = set()
        for v in _bfs_order(dict(enumerate(adj)), 0):
            for x in sorted(adj[v], key=letter_key):
                u = adj[v][x]
                if paths[u] is None:
                    paths[u] = paths[v] + (x,)
                    tree.add((v, x, u) if x > 0 else (u, -x, v))
        object.__setattr__(self, "_tree", (paths, tree))
        return paths, tree  # type: ignore[return-value]

    def basis(self) -> list[Word]:
        """Schreier basis: one generator per edge outside the BFS tree."""
        paths, tree = self.spanning_tree()
        return [
            multiply(paths[u], (x,), inverse(paths[v]))
            for (u, x, v) in self.edges
            if (u, x, v) not in tree
        ]

    def coordinates(self, w: Sequence[int]) -> Word | None:
        """Express ``w`` in the Schreier basis (letter i = i-th basis element)."""
        _, tree = self.spanning_tree()
        index = {e: i + 1 for i, e in enumerate(e for e in self.edges if e not in tree)}
        adj = self.adjacency
        v = 0
        out: list[int] = []
        for x in w:
            u = adj[v].get(x)
            if u is None:
                return None
            e = (v, x, u) if x > 0 else (u, -x, v)
            if e in index:
                out.append(index[e] if x > 0 else -index[e])
            v = u
        if v != 0:
            return None
        return reduce_word(out)

    def path_to(self, v: int) -> Word:
        return self.spanning_tree()[0][v]

    def serialize(self) -> str:
        lines = [f"v {i}" for i in range(self.num_vertices)]
        lines.append("bp 0")
        lines += [f"e {u} {v} {format_letter(x, self.n)}" for u, x, v in self.edges]
        return "\n".join(lines) + "\n"


def _from_adjacency(n: int, adj: dict[int, dict[int, int]], base: int) -> CoreGraph:
    order = _bfs_order(adj, base)
    return CoreGraph(n, len(order), _relabel(adj, order))


@lru_cache(maxsize=65536)
def _build_core_cached(gens: tuple[Word, ...], n: int) -> CoreGraph:
    edges: list[tuple[int, int, int]] = []
    count = 1
    for w in gens:
        if not w:
            continue
        prev = 0
        for i, x in enumerate(w):
            nxt = 0 if i == len(w) - 1 else count
            if nxt:
                count += 1
            edges.append((prev, x, nxt))
            prev = nxt
    find, out = _fold(count, edges)
    base = find(0)
    adj: dict[int, dict[int, int]] = {}
    for v in range(count):
        if find(v) == v:
            adj[v] = {x: find(u) for x, u in out[v].items()}
    _trim(adj, base)
    return _from_adjacency(n, adj, base)


def double_coset_contains(
    h: Iterable[Sequence[int]], t: Sequence[int], k: Iterable[Sequence[int]], w: Sequence[int], n: int
) -> bool:
    """Whether ``w`` lies in the double coset ``H t K``."""
    t = reduce_word(t, n)
    edges: list[tuple[int, int, int]] = []
    count = 1

    def add_path(start: int, word: Word, end: int) -> None:
        nonlocal count
        prev = start
        for i, x in enumerate(word):
            if i == len(word) - 1:
                nxt = end
            else:
                nxt = count
                count += 1
            edges.append((prev, x, nxt))
            prev = nxt

    target = 0
    if t:
        target = count
        count += 1
        add_path(0, t, target)
    for g in h:
        g = reduce_word(g, n)
        if g:
            add_path(0, g, 0)
    for g in k:
        g = reduce_word(g, n)
        if g:
            add_path(target, g, target)
    find, out = _fold(count, edges)
    v = find(0)
    for x in reduce_word(w, n):
        nxt = out[v].get(x)
        if nxt is None:
            return False
        v = find(nxt)
    return v == find(target)


def build_core(generators: Iterable[Sequence[int]], n: int) -> CoreGraph:
    """Folded core graph of the subgroup generated by ``generators``."""
    gens = tuple(reduce_word(g, n) for g in generators)
    return _build_core_cached(gens, n)


def parse_core_graph(text: str, n: int) -> CoreGraph:
    """Parse the ``v``/``bp``/``e`` line format and re-fold it canonically."""
    verts: list[int] = []
    bp = None
    raw: list[tuple[int, int, int]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split()
        if not parts or parts[0].startswith("#"):
            continue
        try:
            if parts[0] == "v" and len(parts) == 2:
                verts.append(int(parts[1]))
            elif parts[0] == "bp" and len(parts) == 2:
                bp = int(parts[1])
            elif parts[0] == "e" and len(parts) == 4:
                (x,) = parse_word(parts[3], n)
                raw.append((int(parts[1]), x, int(parts[2])))
            else:
                raise ValueError("unrecognized line")
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if bp is None:
        raise ValueError("missing basepoint line")
    ids = {v: i for i, v in enumerate(sorted(set(verts) | {bp}))}
    find, out = _fold(len(ids), [(ids[u], x, ids[v]) for u, x, v in raw])
    base = find(ids[bp])
    adj = {v: {x: find(u) for x, u in out[v].items()} for v in range(len(ids)) if find(v) == v}
    comp = set(_bfs_order(adj, base))
    adj = {v: nb for v, nb in adj.items() if v in comp}
    _trim(adj, base)
    return _from_adjacency(n, adj, base)


def basis_coordinates(basis: Sequence[Sequence[int]], n: int) -> dict[int, Word]:
    """Images of the letters under the inverse of ``i -> basis[i-1]``.

    Folds the rose of ``basis`` while every edge remembers the word in the
    basis symbols it spells; merging two vertices re-gauges the edges at the
    absorbed vertex so that path labels are preserved.
    """
    words = [reduce_word(b, n) for b in basis]
    if len(words) != n or not is_basis(words, n):
        raise ValueError("coordinates need a basis of F_n")
    # edges: id -> [tail, letter > 0, head, symbol word]
    edges: dict[int, list] = {}
    count = 1
    for k, w in enumerate(words, 1):
        prev = 0
        for i, x in enumerate(w):
            nxt = 0 if i == len(w) - 1 else count
            if nxt:
                count += 1
            sym: Word = (k,) if i == 0 else EMPTY
            if x > 0:
                edges[len(edges)] = [prev, x, nxt, sym]
            else:
                edges[len(edges)] = [nxt, -x, prev, inverse(sym)]
            prev = nxt

    def outgoing(v: int):
        for i, (a, x, b, s) in edges.items():
            if a == v:
                yield x, i, b, s
            if b == v:
                yield -x, i, a, inverse(s)

    while True:
        found = None
        for v in {e[0] for e in edges.values()} | {e[2] for e in edges.values()}:
            seen: dict[int, tuple[int, int, Word]] = {}
            for x, i, head, s in outgoing(v):
                if x in seen and seen[x][0] != i:
                    found = (seen[x], (i, head, s))
                    break
                seen[x] = (i, head, s)
            if found:
                break
        if not found:
            break
        (i1, h1, s1), (i2, h2, s2) = found
        if h2 == 0:
            (i1, h1, s1), (i2, h2, s2) = (i2, h2, s2), (i1, h1, s1)
        del edges[i2]
        if h1 != h2:
            # paths entering h2 through edge i2 now enter h1 through i1
            fix = multiply(inverse(s1), s2)
            for e in edges.values():
                if e[0] == h2:
                    e[0], e[3] = h1, multiply(fix, e[3])
                if e[2] == h2:
                    e[2], e[3] = h1, multiply(e[3], inverse(fix))
    # hanging trees carry no loops
    while True:
        degree: dict[int, int] = {}
        for a, _, b, _ in edges.values():
            degree[a] = degree.get(a, 0) + 1
            degree[b] = degree.get(b, 0) + 1
        leaves = [
            i
            for i, (a, _, b, _) in edges.items()
            if (degree[a] == 1 and a != 0) or (degree[b] == 1 and b != 0)
        ]
        if not leaves:
            break
        for i in leaves:
            del edges[i]
    out: dict[int, Word] = {}
    for a, x, b, s in edges.values():
        if a != 0 or b != 0:
            raise AssertionError("basis did not fold to the rose")
        out[x] = reduce_word(s)
    return out


def express_in_basis(w: Sequence[int], basis: Sequence[Sequence[int]], n: int) -> Word:
    """Word in the symbols ``1..n`` (symbol i standing for ``basis[i-1]``) equal to ``w``."""
    return apply_map(basis_coordinates(basis, n), w)


def contains(core: CoreGraph, w: Sequence[int]) -> bool:
    return core.contains(w)


def subgroup_contains(gens: Sequence[Sequence[int]], w: Sequence[int], n: int) -> bool:
    return build_core(gens, n).contains(reduce_word(w))


def subgroup_equal(g1: Sequence[Sequence[int]], g2: Sequence[Sequence[int]], n: int) -> bool:
    return build_core(g1, n) == build_core(g2, n)


def rank_and_basis(core: CoreGraph) -> tuple[int, bool]:
    return core.rank, core.rank == core.n and core.is_full_rose()


def subgroup_rank(gens: Sequence[Sequence[int]], n: int) -> int:
    return build_core(gens, n).rank


def is_basis(words: Sequence[Sequence[int]], n: int) -> bool:
    """True when ``words`` is a free basis of F_n."""
    return len(words) == n and build_core(words, n).is_full_rose()


# ------------------------------------------------------ conjugacy classes


@dataclass(frozen=True)
class ConjugacyCore:
    n: int
    num_vertices: int
    edges: tuple[tuple[int, int, int], ...]


@lru_cache(maxsize=65536)
def _conjugacy_core_cached(core: CoreGraph) -> ConjugacyCore:
    adj = {v: dict(nb) for v, nb in enumerate(core.adjacency)}
    _trim(adj, None)
    if not adj:
        return ConjugacyCore(core.n, 1, ())
    best = None
    for v in adj:
        form = _relabel(adj, _bfs_order(adj, v))
        if best is None or form < best:
            best = form
    return ConjugacyCore(core.n, len(adj), best)


def conjugacy_core(core: CoreGraph) -> ConjugacyCore:
    """Basepoint-free core: the canonical invariant of the conjugacy class."""
    return _conjugacy_core_cached(core)


def conjugacy_equal(g1: Sequence[Sequence[int]], g2: Sequence[Sequence[int]], n: int) -> bool:
    return conjugacy_core(build_core(g1, n)) == conjugacy_core(build_core(g2, n))


def cyclic_core_vertex(core: CoreGraph) -> int:
    """A vertex of the basepoint-free core nearest the basepoint."""
    adj = {v: dict(nb) for v, nb in enumerate(core.adjacency)}
    _trim(adj, None)
    if not adj:
        return 0
    for v in _bfs_order(dict(enumerate(core.adjacency)), 0):
        if v in adj:
            return v
    raise AssertionError("unreachable")


def conjugator_into(core: CoreGraph, w: Sequence[int]) -> Word | None:
    """Some ``g`` with ``g w g^-1`` in the subgroup, or None if no conjugate is."""
    w = reduce_word(w)
    c, k = cyclically_reduce(w)  # w = k^-1 c k
    for v in range(core.num_vertices):
        if core.read(c, v) == v:
            p = core.path_to(v)  # p c p^-1 in H
            return multiply(p, k)
    return None


def intersection(g1: Sequence[Sequence[int]], g2: Sequence[Sequence[int]], n: int) -> list[Word]:
    """Basis of the intersection of two subgroups (product of core graphs)."""
    c1, c2 = build_core(g1, n), build_core(g2, n)
    a1, a2 = c1.adjacency, c2.adjacency
    index = {(0, 0): 0}
    queue = deque([(0, 0)])
    adj: dict[int, dict[int, int]] = {0: {}}
    while queue:
        p, q = queue.popleft()
        i = index[(p, q)]
        for x, p2 in a1[p].items():
            q2 = a2[q].get(x)
            if q2 is None:
                continue
            key = (p2, q2)
            if key not in index:
                index[key] = len(index)
                adj[index[key]] = {}
                queue.append(key)
            adj[i][x] = index[key]
    _trim(adj, 0)
    return _from_adjacency(n, adj, 0).basis()


# ------------------------------------------------------------ Whitehead


@dataclass(frozen=True)
class WhiteheadAutomorphism:
    """Fixes the letter ``x``; generator y goes to y, y x, x^-1 y or x^-1 y x.

    ``moves`` pairs each other generator with 0..3 for those four images.
    """

    x: int
    moves: tuple[tuple[int, int], ...]

    def images(self) -> dict[int, Word]:
        x = self.x
        out: dict[int, Word] = {}
        for y, m in self.moves:
            if m == 1:
                out[y] = (y, x)
            elif m == 2:
                out[y] = (-x, y)
            elif m == 3:
                out[y] = (-x, y, x)
        return out

    def __call__(self, w: Sequence[int]) -> Word:
        return apply_map(self.images(), w)

    def inverse(self) -> "WhiteheadAutomorphism":
        return WhiteheadAutomorphism(-self.x, self.moves)


@lru_cache(maxsize=None)
def whitehead_automorphisms(n: int) -> tuple[WhiteheadAutomorphism, ...]:
    """All Whitehead automorphisms of the second kind on F_n (identity excluded)."""
    out = []
    for x in letters(n):
        others = [y for y in range(1, n + 1) if y != abs(x)]
        for choice in itertools.product(range(4), repeat=len(others)):
            if any(choice):
                out.append(WhiteheadAutomorphism(x, tuple(zip(others, choice))))
    return tuple(out)


def _greedy(state, cost, step, n: int, max_steps: int = 10_000):
    trail: list[WhiteheadAutomorphism] = []
    current = cost(state)
    for _ in range(max_steps):
        best = None
        for phi in whitehead_automorphisms(n):
            cand = step(phi, state)
            c = cost(cand)
            if c < current and (best is None or c < best[0]):
                best = (c, phi, cand)
        if best is None:
            break
        current, phi, state = best
        trail.append(phi)
    return state, trail


def whitehead_minimize(w: Sequence[int], n: int) -> tuple[Word, list[WhiteheadAutomorphism]]:
    """Greedy Whitehead descent on the cyclic word ``w``.

    Returns the cyclically reduced minimal representative and the applied
    automorphisms in order (first applied first).
    """
    start = cyclically_reduce(reduce_word(w, n))[0]
    final, trail = _greedy(
        start,
        len,
        lambda phi, u: cyclically_reduce(phi(u))[0],
        n,
    )
    return final, trail


def whitehead_minimize_tuple(ws: Sequence[Sequence[int]], n: int):
    """Minimize the total cyclic length of a tuple of cyclic words."""
    start = tuple(cyclically_reduce(reduce_word(w, n))[0] for w in ws)
    return _greedy(
        start,
        lambda t: sum(map(len, t)),
        lambda phi, t: tuple(cyclically_reduce(phi(u))[0] for u in t),
        n,
    )


def _compose_inverse(trail: Sequence[WhiteheadAutomorphism], n: int) -> dict[int, Word]:
    """Images of the inverse of ``trail[-1] o ... o trail[0]``."""
    images = {i: (i,) for i in range(1, n + 1)}
    for phi in trail:
        inv = phi.inverse().images()
        # new = old o phi^-1
        images = {i: apply_map(images, inv.get(i, (i,))) for i in range(1, n + 1)}
    return images


def _compose_forward(trail: Sequence[WhiteheadAutomorphism], n: int) -> dict[int, Word]:
    images = {i: (i,) for i in range(1, n + 1)}
    for phi in trail:
        images = {i: phi(images[i]) for i in range(1, n + 1)}
    return images


def whitehead_graph(w: Sequence[int]) -> nx.MultiGraph:
    """Whitehead graph of a cyclic word: for each cyclic subword xy join x and y^-1."""
    g = nx.MultiGraph()
    for a in {abs(x) for x in w}:
        g.add_nodes_from([a, -a])
    for i, x in enumerate(w):
        y = w[(i + 1) % len(w)]
        g.add_edge(x, -y)
    return g


def fills_own_letters(w: Sequence[int]) -> bool:
    """Connected Whitehead graph without cut vertex on the letters used by ``w``."""
    if len({abs(x) for x in w}) <= 1:
        return True
    g = nx.Graph(whitehead_graph(w))
    return nx.is_connected(g) and not any(True for _ in nx.articulation_points(g))


def _subgroup_size(gens: Sequence[Word], n: int) -> int:
    return len(conjugacy_core(build_core(gens, n)).edges)


def minimize_subgroup(gens: Sequence[Sequence[int]], n: int):
    """Greedy Whitehead descent on the size of the conjugacy core of a subgroup."""
    start = tuple(build_core(gens, n).basis())
    return _greedy(
        start,
        lambda t: _subgroup_size(t, n),
        lambda phi, t: tuple(phi(u) for u in t),
        n,
    )


def free_factor_complement(gens: Sequence[Sequence[int]], n: int) -> list[Word] | None:
    """Words ``C`` with ``F_n = <gens> * <C>``, or None if none was found.

    Greedy Whitehead descent brings the subgroup to a conjugate of a
    letter-generated factor; the complement is pulled back from the unused
    letters.
    """
    core = build_core(gens, n)
    r = core.rank
    if r == 0:
        return [(i,) for i in range(1, n + 1)]
    final, trail = minimize_subgroup(gens, n)
    fcore = build_core(final, n)
    cc = conjugacy_core(fcore)
    if cc.num_vertices != 1 or len(cc.edges) != r:
        return None
    v = cyclic_core_vertex(fcore)
    used = {x for _, x, _ in cc.edges}
    p = fcore.path_to(v)
    back = _compose_inverse(trail, n)
    comp = [
        apply_map(back, multiply(p, (y,), inverse(p)))
        for y in range(1, n + 1)
        if y not in used
    ]
    if not is_basis(list(core.basis()) + comp, n):
        return None
    return comp


def relative_complement(sub: Sequence[Sequence[int]], ambient: Sequence[Sequence[int]], n: int) -> list[Word] | None:
    """Complement of the free factor ``<sub>`` inside the subgroup ``<ambient>``."""
    amb = build_core(ambient, n)
    basis = amb.basis()
    k = len(basis)
    coords = []
    for g in sub:
        c = amb.coordinates(reduce_word(g))
        if c is None:
            return None
        coords.append(c)
    comp = free_factor_complement(coords, k)
    if comp is None:
        return None
    sub_map = {i + 1: b for i, b in enumerate(basis)}
    return [apply_map(sub_map, c) for c in comp]


def is_free_factor(gens: Sequence[Sequence[int]], n: int) -> bool:
    return free_factor_complement(gens, n) is not None


def fill(w: Sequence[int], n: int, search_bound: int = 2) -> list[Word] | None:
    """Basis of the smallest free factor of F_n containing ``w``.

    Returns None (unresolved) when neither the Whitehead-graph test nor the
    bounded search over factors with basis words of length at most
    ``search_bound`` settles the question.
    """
    w = reduce_word(w, n)
    if not w:
        raise ValueError("fill of the trivial element is undefined")
    w_min, trail = whitehead_minimize(w, n)
    used = sorted({abs(x) for x in w_min})
    if fills_own_letters(w_min):
        back = _compose_inverse(trail, n)
        factor = [apply_map(back, (y,)) for y in used]
        g = conjugator_into(build_core(factor, n), w)
        if g is None:
            raise AssertionError("pulled-back factor misses w")
        return [multiply(inverse(g), a, g) for a in factor]
    return _bounded_fill(w, n, search_bound)


def _bounded_fill(w: Word, n: int, bound: int) -> list[Word] | None:
    pool = [u for u in words_up_to(n, bound, 1)]
    for k in range(1, n + 1):
        for combo in itertools.combinations(pool, k):
            if build_core(combo, n).rank != k or not subgroup_contains(combo, w, n):
                continue
            if k == n or is_free_factor(combo, n):
                return list(combo)
    return None


def fill_or_none(w: Sequence[int], n: int, search_bound: int = 2) -> list[Word] | None:
    try:
        return fill(w, n, search_bound)
    except ValueError:
        return None


def enumerate_subgroup_elements(gens: Sequence[Sequence[int]], max_factors: int) -> Iterator[Word]:
    """All reduced products of at most ``max_factors`` generators or inverses."""
    alphabet = [tuple(g) for g in gens if g] + [inverse(g) for g in gens if g]
    seen = {EMPTY}
    yield EMPTY
    frontier = [EMPTY]
    for _ in range(max_factors):
        nxt = []
        for u in frontier:
            for g in alphabet:
                v = multiply(u, g)
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
                    yield v
        frontier = nxt


def cyclic_length_sum(ws: Sequence[Sequence[int]]) -> int:
    return sum(cyclic_length(w) for w in ws)
