"""Random instances for experiments and tests (seeded, reproducible)."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .splittings import Splitting, loop, segment
from .stallings import fill, subgroup_equal
from .words import Word, apply_map, conjugate, cyclically_reduce, inverse, multiply


def random_word(rng: random.Random, alphabet: list[int], length: int) -> Word:
    out: list[int] = []
    while len(out) < length:
        x = rng.choice(alphabet) * rng.choice((1, -1))
        if out and out[-1] == -x:
            continue
        out.append(x)
    return tuple(out)


def nielsen_basis(rng: random.Random, n: int, moves: int, max_len: int | None = None) -> list[Word]:
    """A basis of F_n obtained from the letters by random Nielsen moves."""
    while True:
        basis = [(i,) for i in range(1, n + 1)]
        for _ in range(moves):
            i, j = rng.sample(range(n), 2)
            y = basis[j] if rng.random() < 0.5 else inverse(basis[j])
            basis[i] = multiply(basis[i], y) if rng.random() < 0.5 else multiply(y, basis[i])
        if max_len is None or max(len(b) for b in basis) <= max_len:
            return basis


def random_automorphism(rng: random.Random, n: int, moves: int) -> dict[int, Word]:
    return {i + 1: b for i, b in enumerate(nielsen_basis(rng, n, moves, max_len=3))}


def filling_word(rng: random.Random, k: int, max_len: int) -> Word:
    """A cyclically reduced word in the first ``k`` letters that fills them."""
    letters = list(range(1, k + 1))
    if k == 1:
        return (1,)
    # every letter of a filling word occurs at least twice
    if max_len < 2 * k:
        raise ValueError(f"no word of length <= {max_len} fills {k} letters")
    while True:
        length = rng.randint(max(2, k), max_len)
        w = random_word(rng, letters, length)
        if cyclically_reduce(w)[0] != w or len({abs(x) for x in w}) < k:
            continue
        a = fill(w, k)
        if a is not None and subgroup_equal(a, [(i,) for i in letters], k):
            return w


@dataclass
class Type2Instance:
    x: Splitting
    y: Splitting
    w: Word
    case: str


def _perturb(rng: random.Random, gens: list[Word], moves: list[Word], count: int) -> list[Word]:
    gens = list(gens)
    for _ in range(count):
        j = rng.randrange(len(gens))
        u = rng.choice(moves)
        u = u if rng.random() < 0.5 else inverse(u)
        gens[j] = multiply(u, gens[j]) if rng.random() < 0.5 else multiply(gens[j], u)
    return gens


def type2_instance(
    rng: random.Random, n: int, case: str, max_w: int = 6, twist: bool = False
) -> Type2Instance:
    """X and Y adjacent through a common edge fold over ``w``.

    Segment: ``X = A * B``, ``Y = A * B'`` with ``<B', w> = <B, w>``.  Loop:
    vertex groups ``A * B`` and ``A * B'`` with the same stable letter ``t``
    and ``<A, B', w^t> = <A, B, w^t>``.  ``twist`` moves everything by a
    random automorphism so that nothing is written in letters of A or B.
    """
    spare = 1 if case == "segment" else 2
    if n < spare + 1:
        raise ValueError("rank too small")
    k = rng.randint(1, max(1, min(n - spare, 3, max_w // 2)))
    w = filling_word(rng, k, max_w)
    a = [(i,) for i in range(1, k + 1)]
    if case == "segment":
        b = [(i,) for i in range(k + 1, n + 1)]
        while True:
            b2 = _perturb(rng, b, [w], rng.randint(1, 2))
            if not subgroup_equal(b, b2, n):
                break
        x, y = segment(a, b, n), segment(a, b2, n)
    else:
        t = (k + 1,)
        b = [(i,) for i in range(k + 2, n + 1)]
        moves = [conjugate(w, t)] + a
        while True:
            b2 = _perturb(rng, b, moves, rng.randint(1, 2))
            if not subgroup_equal(a + b, a + b2, n):
                break
        x, y = loop(a + b, t, n), loop(a + b2, t, n)
    if twist:
        from .complexes import map_splitting

        # resample the automorphism until the image of w stays short
        for _ in range(50):
            phi = random_automorphism(rng, n, rng.randint(1, 3))
            # keep the literal image: folds see elements, not conjugacy classes
            w2 = apply_map(phi, w)
            if len(w2) <= max_w:
                break
        else:
            return Type2Instance(x, y, w, case)
        x, y, w = map_splitting(x, phi), map_splitting(y, phi), w2
    return Type2Instance(x, y, w, case)


def random_free_two_edge(rng: random.Random, n: int) -> Splitting:
    """A two-edge free splitting read off a rose on a random basis."""
    from .splittings import Edge

    while True:
        basis = nielsen_basis(rng, n, rng.randint(0, 4), max_len=4)
        shape = rng.choice(["chain", "segment_loop", "two_loops", "theta"])
        if shape == "chain" and n >= 3:
            i, j = sorted(rng.sample(range(1, n), 2))
            s = Splitting(n, (tuple(basis[:i]), tuple(basis[i:j]), tuple(basis[j:])), (Edge(0, 1), Edge(1, 2)))
        elif shape == "segment_loop" and n >= 3:
            i = rng.randint(1, n - 2)
            s = Splitting(n, (tuple(basis[:i]), tuple(basis[i:-1])), (Edge(0, 1), Edge(1, 1, basis[-1])))
        elif shape == "two_loops" and n >= 3:
            s = Splitting(n, (tuple(basis[:-2]),), (Edge(0, 0, basis[-2]), Edge(0, 0, basis[-1])))
        elif shape == "theta" and n >= 3:
            i = rng.randint(1, n - 2)
            s = Splitting(n, (tuple(basis[:i]), tuple(basis[i:-1])), (Edge(0, 1), Edge(0, 1, basis[-1])))
        else:
            continue
        if s.is_valid():
            return s


def doubly_folded(rng: random.Random, sizes: tuple[int, int, int] = (2, 2, 2), max_w: int = 4):
    """Chain ``A * B * C`` folded over ``s`` in A and ``t`` in C."""
    from .splittings import Edge

    a_n, b_n, c_n = sizes
    n = a_n + b_n + c_n
    a = [(i,) for i in range(1, a_n + 1)]
    b = [(i,) for i in range(a_n + 1, a_n + b_n + 1)]
    c = [(i,) for i in range(a_n + b_n + 1, n + 1)]
    s = random_word(rng, [x[0] for x in a], rng.randint(1, max_w))
    s = cyclically_reduce(s)[0] or (1,)
    t = random_word(rng, [x[0] for x in c], rng.randint(1, max_w))
    t = cyclically_reduce(t)[0] or (c[0][0],)
    free = Splitting(n, (tuple(a), tuple(b), tuple(c)), (Edge(0, 1), Edge(1, 2)))
    cyc = Splitting(
        n,
        (tuple(a), tuple(b) + (s, t), tuple(c)),
        (Edge(0, 1, (), (s, s)), Edge(1, 2, (), (t, t))),
    )
    return free, cyc, s, t


@dataclass
class FoldPair:
    x: Splitting
    t: Splitting
    w: Word
    side: int


def random_free_one_edge(rng: random.Random, n: int, moves: int = 3) -> Splitting:
    """A segment or loop read off a random basis."""
    basis = nielsen_basis(rng, n, rng.randint(0, moves), max_len=4)
    if n >= 2 and rng.random() < 0.5:
        i = rng.randint(1, n - 1)
        return segment(basis[:i], basis[i:], n)
    return loop(basis[:-1], basis[-1], n)


def fold_pair(rng: random.Random, n: int, max_w: int = 6) -> FoldPair:
    """A one-edge free splitting ``x`` and its edge fold over a random ``w``."""
    from .splittings import SplittingError, edge_fold

    while True:
        x = random_free_one_edge(rng, n)
        side = rng.randrange(2)
        gens = x.vertices[0 if x.edges[0].is_loop else side]
        if not gens:
            continue
        k = rng.randint(1, 3)
        w = ()
        for _ in range(k):
            g = rng.choice(gens)
            w = multiply(w, g if rng.random() < 0.5 else inverse(g))
        w = cyclically_reduce(w)[0]
        if not w or len(w) > max_w:
            continue
        try:
            t = edge_fold(x, w, side)
        except SplittingError:
            continue
        if t.is_valid():
            return FoldPair(x, t, w, side)
