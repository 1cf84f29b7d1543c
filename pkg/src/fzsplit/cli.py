"""Command-line entry point.

Exit status: 0 success or verified, 1 not found or unresolved, 2 parse error
or invariant violation.  Search bounds default to word length 6 and radius 3;
``FZSPLIT_BOUNDS="word=8,radius=2"`` changes the defaults.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .beta_graph import (
    FoldError,
    WordPriority,
    first_found,
    fold_certificate,
    fold_to_rose,
    last_found,
    parse_beta_graph,
    random_scheduler,
)
from .complexes import (
    Budget,
    CertificateFailure,
    distance_upper,
    fz_adjacent,
    theorem5_path,
    type1_certificate,
)
from .formats import FormatError, parse_certificate, parse_splitting, serialize_certificate, serialize_splitting
from .splittings import SplittingError, unfold
from .stallings import build_core, subgroup_contains
from .words import WordError, format_word, parse_word, parse_words

OK, NOT_FOUND, INVALID = 0, 1, 2


class CliError(Exception):
    """Reported as ``error: ...`` with exit status 2."""


def default_bounds() -> Budget:
    word, radius = 6, 3
    raw = os.environ.get("FZSPLIT_BOUNDS", "")
    for item in filter(None, (p.strip() for p in raw.split(","))):
        key, _, value = item.partition("=")
        try:
            number = int(value)
        except ValueError:
            raise CliError(f"FZSPLIT_BOUNDS: bad value in {item!r}") from None
        if key == "word":
            word = number
        elif key == "radius":
            radius = number
        else:
            raise CliError(f"FZSPLIT_BOUNDS: unknown key {key!r}")
    return Budget(word, radius)


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("bounds must be positive")
    return value


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}") from None


def _splitting(path: str):
    try:
        return parse_splitting(_read(path))
    except FormatError as exc:
        raise CliError(f"{path}: {exc}") from None


def _emit(args, text: str) -> None:
    if getattr(args, "output", None):
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _word_arg(text: str, n: int, flag: str):
    try:
        return parse_word(text, n)
    except WordError as exc:
        col = (exc.position or 0) + 1
        raise CliError(f"{flag}: column {col}: {exc}") from None


def _scheduler(spec: str, n: int):
    if spec == "first":
        return first_found
    if spec == "last":
        return last_found
    kind, _, arg = spec.partition(":")
    if kind == "random" and arg.isdigit():
        return random_scheduler(int(arg))
    if kind == "word" and arg:
        return WordPriority(_word_arg(arg, n, "--scheduler"))
    raise CliError(f"unknown scheduler {spec!r}")


# ------------------------------------------------------------ verbs


def cmd_fold(args) -> int:
    try:
        g = parse_beta_graph(_read(args.graph))
    except ValueError as exc:
        raise CliError(f"{args.graph}: {exc}") from None
    seq = fold_to_rose(g, _scheduler(args.scheduler, g.n))
    if args.certify:
        worst = 0
        for i, step in enumerate(seq.steps):
            cert = fold_certificate(seq.graphs[i], step)
            if not cert.verify():
                print(f"error: fold {i} has no valid certificate", file=sys.stderr)
                return INVALID
            worst = max(worst, cert.length)
        print(f"certified {len(seq.steps)} folds, max distance {worst}", file=sys.stderr)
    _emit(args, seq.serialize())
    return OK


def cmd_core(args) -> int:
    gens = _words_arg(args.subgroup, args.n, "--subgroup")
    _emit(args, build_core(gens, args.n).serialize())
    return OK


def _words_arg(text: str, n: int, flag: str):
    try:
        return parse_words(text, n)
    except WordError as exc:
        raise CliError(f"{flag}: {exc}") from None


def cmd_member(args) -> int:
    gens = _words_arg(args.subgroup, args.n, "--subgroup")
    w = _word_arg(args.word, args.n, "--word")
    print("true" if subgroup_contains(gens, w, args.n) else "false")
    return OK


def cmd_adjacent(args) -> int:
    x, y = _splitting(args.x), _splitting(args.y)
    hint = _word_arg(args.w, x.n, "--w") if args.w else None
    cert = fz_adjacent(x, y, hint, bound=args.radius, word_bound=args.word)
    if cert is None:
        print("NOT_FOUND")
        return NOT_FOUND
    _emit(args, serialize_certificate(cert))
    return OK


def _budget(args) -> Budget:
    return Budget(word=args.word, radius=args.radius)


def cmd_path(args) -> int:
    x, y = _splitting(args.x), _splitting(args.y)
    d, path = distance_upper(x, y, args.complex, _budget(args))
    if path is None:
        print("UNRESOLVED")
        return NOT_FOUND
    _emit(args, serialize_certificate(path))
    return OK


def cmd_distance(args) -> int:
    x, y = _splitting(args.x), _splitting(args.y)
    d, _ = distance_upper(x, y, args.complex, _budget(args))
    print("UNKNOWN" if d is None else f"<={d}")
    return OK if d is not None else NOT_FOUND


def cmd_theorem5(args) -> int:
    x, y = _splitting(args.x), _splitting(args.y)
    w = _word_arg(args.w, x.n, "--w")
    try:
        result = theorem5_path(x, y, w, refine_bound=args.radius)
    except CertificateFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INVALID
    _emit(args, serialize_certificate(result))
    print(f"{len(result.steps)} graphs, max distance {result.max_length}", file=sys.stderr)
    return OK if result.max_length <= 3 else INVALID


def cmd_refine(args) -> int:
    x, y = _splitting(args.x), _splitting(args.y)
    cert = type1_certificate(x, y, bound=args.radius)
    if cert is None:
        print("NOT_FOUND")
        return NOT_FOUND
    _emit(args, serialize_certificate(cert))
    return OK


def cmd_unfold(args) -> int:
    t = _splitting(args.t)
    result = unfold(t, search_bound=args.radius)
    if result is None:
        print("UNRESOLVED")
        return NOT_FOUND
    text = serialize_splitting(result.free)
    text += f"# fold word={format_word(result.w, t.n)} side={result.side}\n"
    _emit(args, text)
    return OK


def cmd_verify(args) -> int:
    try:
        cert = parse_certificate(_read(args.certificate))
    except FormatError as exc:
        raise CliError(f"{args.certificate}: {exc}") from None
    if cert.verify():
        print(f"verified {cert.kind}")
        return OK
    print(f"FAILED {cert.kind}")
    return INVALID


def build_parser(bounds: Budget) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fzsplit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", required=True)

    def add(name, func, help_text, out=True, search=False):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(func=func)
        if out:
            sp.add_argument("-o", "--output", help="write the result here instead of stdout")
        if search:
            sp.add_argument("--word", type=_positive, default=bounds.word, help="word length bound")
            sp.add_argument("--radius", type=_positive, default=bounds.radius, help="search radius")
        return sp

    sp = add("fold", cmd_fold, "fold a beta-graph to the standard rose")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--scheduler", default="first", help="first, last, random:<seed> or word:<w>")
    sp.add_argument("--certify", action="store_true", help="check a distance certificate per fold")

    for name, func, help_text in (
        ("core", cmd_core, "print the Stallings core graph of a subgroup"),
        ("member", cmd_member, "decide membership of a word in a subgroup"),
    ):
        sp = add(name, func, help_text, out=name == "core")
        sp.add_argument("--subgroup", required=True, help="comma-separated generators")
        sp.add_argument("-n", type=_positive, required=True, help="rank of the free group")
        if name == "member":
            sp.add_argument("--word", required=True)

    sp = add("adjacent", cmd_adjacent, "certify adjacency of two one-edge free splittings", search=True)
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)
    sp.add_argument("--w", help="fold word to try first")

    for name, func, help_text in (
        ("path", cmd_path, "find and certify a short path"),
        ("distance", cmd_distance, "upper bound on the distance"),
    ):
        sp = add(name, func, help_text, out=name == "path", search=True)
        sp.add_argument("--x", required=True)
        sp.add_argument("--y", required=True)
        sp.add_argument("--complex", default="FZ", choices=["FS", "FZ", "FZbar", "C"])

    sp = add("theorem5", cmd_theorem5, "certify every fold between two TYPE2-adjacent splittings", search=True)
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)
    sp.add_argument("--w", required=True)

    sp = add("refine", cmd_refine, "find a common two-edge refinement", search=True)
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)

    sp = add("unfold", cmd_unfold, "unfold a one-edge cyclic splitting", search=True)
    sp.add_argument("--t", required=True)

    sp = add("verify", cmd_verify, "replay a certificate file", out=False)
    sp.add_argument("--certificate", required=True)
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        parser = build_parser(default_bounds())
        args = parser.parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INVALID
    except (FoldError, SplittingError, WordError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INVALID
    except SystemExit as exc:
        return INVALID if exc.code not in (0, None) else OK


if __name__ == "__main__":
    sys.exit(main())
