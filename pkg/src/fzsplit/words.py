"""Free-group words over a fixed basis.

A word is a tuple of nonzero ints: ``i`` stands for the i-th generator and
``-i`` for its inverse.  Text uses lowercase for generators and uppercase for
inverses (``"abAB"`` is a b a^-1 b^-1); ranks above 26 use ``x27`` / ``X27``.
The identity serializes as ``"1"``.

Conventions used everywhere in the package:

* conjugation ``w^t = t^-1 w t``;
* commutator ``[a, b] = a b a^-1 b^-1``.
"""
from __future__ import annotations

import re
from typing import Iterable, Sequence, Tuple

Word = Tuple[int, ...]

EMPTY: Word = ()

_INDEXED = re.compile(r"([xX])(\d+)")


class WordError(ValueError):
    """Malformed word text or a letter outside the ambient rank."""

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message if position is None else f"{message} (at position {position})")
        self.position = position


def reduce_word(raw: Iterable[int], n: int | None = None) -> Word:
    """Freely reduce ``raw``; with ``n`` given, reject letters beyond rank ``n``."""
    out: list[int] = []
    for pos, x in enumerate(raw):
        if x == 0 or (n is not None and abs(x) > n):
            raise WordError(f"letter {x} outside rank {n}", pos)
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def multiply(*words: Sequence[int]) -> Word:
    out: list[int] = []
    for w in words:
        for x in w:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return tuple(out)


def power(w: Sequence[int], k: int) -> Word:
    if k < 0:
        return power(inverse(w), -k)
    return multiply(*([w] * k))


def conjugate(w: Sequence[int], g: Sequence[int]) -> Word:
    """Return ``g^-1 w g``."""
    return multiply(inverse(g), w, g)


def commutator(a: Sequence[int], b: Sequence[int]) -> Word:
    return multiply(a, b, inverse(a), inverse(b))


def is_cyclically_reduced(w: Sequence[int]) -> bool:
    return len(w) < 2 or w[0] != -w[-1]


def cyclically_reduce(w: Sequence[int]) -> tuple[Word, Word]:
    """Split reduced ``w`` as ``conjugate(core, conjugator)``.

    >>> cyclically_reduce((-2, 1, 2))
    ((1,), (2,))
    """
    w = tuple(w)
    i = 0
    while i < len(w) - 1 - i and w[i] == -w[-1 - i]:
        i += 1
    core = w[i:len(w) - i]
    return core, inverse(w[:i])


def cyclic_conjugates(w: Sequence[int]) -> list[Word]:
    w = tuple(w)
    return [w[i:] + w[:i] for i in range(len(w))] or [EMPTY]


def cyclic_length(w: Sequence[int]) -> int:
    return len(cyclically_reduce(reduce_word(w))[0])


def rank_of(*words: Sequence[int]) -> int:
    """Smallest rank whose basis covers every letter used."""
    return max((abs(x) for w in words for x in w), default=0)


def letters(n: int) -> list[int]:
    """All letters of rank ``n`` in the canonical order a, A, b, B, ..."""
    return [s * i for i in range(1, n + 1) for s in (1, -1)]


def letter_key(x: int) -> tuple[int, int]:
    return (abs(x), 0 if x > 0 else 1)


def words_up_to(n: int, max_len: int, min_len: int = 0) -> Iterable[Word]:
    """Enumerate reduced words by length, then shortlex."""
    alphabet = letters(n)
    level: list[Word] = [EMPTY]
    for length in range(max_len + 1):
        if length >= min_len:
            yield from level
        level = [w + (x,) for w in level for x in alphabet if not w or w[-1] != -x]


# ---------------------------------------------------------------- text


def format_letter(x: int, n: int | None = None) -> str:
    if (n or abs(x)) <= 26 and abs(x) <= 26:
        c = chr(ord("a") + abs(x) - 1)
        return c if x > 0 else c.upper()
    return f"x{x}" if x > 0 else f"X{-x}"


def format_word(w: Sequence[int], n: int | None = None) -> str:
    if not w:
        return "1"
    return "".join(format_letter(x, n) for x in w)


def parse_word(text: str, n: int | None = None) -> Word:
    """Parse word text and freely reduce it.

    Accepts ``"1"`` or ``""`` for the identity and whitespace between letters.
    """
    s = text.strip()
    if s in ("", "1"):
        return EMPTY
    raw: list[int] = []
    i = 0
    while i < len(s):
        ch = s[i]
        if ch.isspace():
            i += 1
            continue
        m = _INDEXED.match(s, i)
        if m:
            k = int(m.group(2))
            if k == 0:
                raise WordError(f"bad generator index in {text!r}", i)
            raw.append(k if m.group(1) == "x" else -k)
            i = m.end()
            continue
        if "a" <= ch <= "z":
            raw.append(ord(ch) - ord("a") + 1)
        elif "A" <= ch <= "Z":
            raw.append(-(ord(ch) - ord("A") + 1))
        else:
            raise WordError(f"unexpected character {ch!r} in {text!r}", i)
        if n is not None and abs(raw[-1]) > n:
            raise WordError(f"letter {ch!r} outside rank {n}", i)
        i += 1
    return reduce_word(raw, n)


def parse_words(text: str, n: int | None = None) -> list[Word]:
    """Comma-separated list of words; ``"1"`` alone means the empty list."""
    s = text.strip()
    if s in ("", "1"):
        return []
    return [parse_word(part, n) for part in s.split(",")]


def format_words(ws: Sequence[Sequence[int]], n: int | None = None) -> str:
    return ",".join(format_word(w, n) for w in ws) if ws else "1"


# ------------------------------------------------- automorphisms as maps


def apply_map(images: dict[int, Word], w: Sequence[int]) -> Word:
    """Apply the endomorphism sending generator ``i`` to ``images[i]``.

    Generators missing from ``images`` are fixed.
    """
    out: list[Word] = []
    for x in w:
        img = images.get(abs(x), (abs(x),))
        out.append(img if x > 0 else inverse(img))
    return multiply(*out)


def compose_maps(outer: dict[int, Word], inner: dict[int, Word], n: int) -> dict[int, Word]:
    """Images of ``outer o inner`` (apply ``inner`` first)."""
    return {i: apply_map(outer, inner.get(i, (i,))) for i in range(1, n + 1)}
