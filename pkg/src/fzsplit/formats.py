"""Line-oriented text formats for splittings and certificates.

Splitting::

    splitting rank=4 shape=segment
    vgroup 0 a,b
    vgroup 1 c,d,abAB
    edge 0 1 group=abAB attach=abAB,abAB

Free edges carry ``group=1`` and no ``attach``; a non-empty stable word is
written as ``stable=<word>`` on the edge line, except for a one-edge loop
where it gets its own ``stable <word>`` line.  Certificates nest splitting
blocks between keyword lines; see :func:`serialize_certificate`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .beta_graph import parse_beta_graph, parse_fold_sequence
from .complexes import (
    AdjacencyCertificate,
    FoldWitness,
    GeneralRefinement,
    PathCertificate,
    StepRecord,
    Theorem5Result,
    f_images,
    map_splitting,
)
from .splittings import CollapseCertificate, Edge, Refinement, Splitting, collapse_edges
from .words import Word, WordError, format_word, format_words, parse_word, parse_words


class FormatError(ValueError):
    """Malformed input, with a 1-based line number and optional column."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.column = column


# ------------------------------------------------------------ splittings


def serialize_splitting(s: Splitting) -> str:
    n = s.n
    lines = [f"splitting rank={n} shape={s.shape}"]
    for v, gens in enumerate(s.vertices):
        lines.append(f"vgroup {v} {format_words(gens, n)}")
    lone_loop = s.num_edges == 1 and s.edges[0].is_loop
    for e in s.edges:
        parts = [f"edge {e.u} {e.v}"]
        if e.attach is None:
            parts.append("group=1")
        else:
            parts.append(f"group={format_word(e.attach[0], n)}")
            parts.append(f"attach={format_word(e.attach[0], n)},{format_word(e.attach[1], n)}")
        if e.stable and not lone_loop:
            parts.append(f"stable={format_word(e.stable, n)}")
        lines.append(" ".join(parts))
    if lone_loop:
        lines.append(f"stable {format_word(s.edges[0].stable, n)}")
    return "\n".join(lines) + "\n"


class _Lines:
    """Cursor over numbered, non-blank, non-comment lines."""

    def __init__(self, text: str, offset: int = 0):
        self.items = [
            (i + 1 + offset, line.strip())
            for i, line in enumerate(text.splitlines())
            if line.strip() and not line.lstrip().startswith("#")
        ]
        self.pos = 0

    def peek(self) -> tuple[int, str] | None:
        return self.items[self.pos] if self.pos < len(self.items) else None

    def next(self, what: str = "line") -> tuple[int, str]:
        item = self.peek()
        if item is None:
            last = self.items[-1][0] if self.items else 0
            raise FormatError(f"unexpected end of input, expected {what}", last + 1)
        self.pos += 1
        return item

    def expect(self, keyword: str) -> tuple[int, list[str]]:
        lineno, line = self.next(keyword)
        parts = line.split()
        if parts[0] != keyword:
            raise FormatError(f"expected '{keyword}', found '{parts[0]}'", lineno, 1)
        return lineno, parts[1:]


def _kv(tokens: list[str], lineno: int, line: str) -> dict[str, str]:
    out = {}
    for tok in tokens:
        if "=" not in tok:
            raise FormatError(f"expected key=value, found {tok!r}", lineno, line.find(tok) + 1)
        k, v = tok.split("=", 1)
        out[k] = v
    return out


def _word(text: str, n: int, lineno: int, line: str) -> Word:
    try:
        return parse_word(text, n)
    except WordError as exc:
        col = line.find(text) + 1 + (exc.position or 0)
        raise FormatError(str(exc), lineno, col) from None


def _words(text: str, n: int, lineno: int, line: str) -> list[Word]:
    try:
        return parse_words(text, n)
    except WordError as exc:
        col = line.find(text) + 1
        for piece in text.split(","):
            try:
                parse_word(piece, n)
            except WordError as inner:
                raise FormatError(str(inner), lineno, col + (inner.position or 0)) from None
            col += len(piece) + 1
        raise FormatError(str(exc), lineno, line.find(text) + 1) from None


def _read_splitting(cur: _Lines) -> Splitting:
    lineno, line = cur.next("splitting header")
    parts = line.split()
    if parts[0] != "splitting":
        raise FormatError(f"expected 'splitting', found '{parts[0]}'", lineno, 1)
    head = _kv(parts[1:], lineno, line)
    try:
        n = int(head["rank"])
    except (KeyError, ValueError):
        raise FormatError("header needs rank=<n>", lineno) from None
    shape = head.get("shape")
    vgroups: dict[int, list[Word]] = {}
    edges: list[Edge] = []
    lone_stable: Word | None = None
    while True:
        item = cur.peek()
        if item is None or item[1].split()[0] not in ("vgroup", "edge", "stable"):
            break
        lineno, line = cur.next()
        parts = line.split()
        if parts[0] == "vgroup":
            if len(parts) != 3:
                raise FormatError("expected 'vgroup <vertex> <words>'", lineno)
            v = _int(parts[1], lineno, line)
            if v in vgroups:
                raise FormatError(f"vertex {v} declared twice", lineno)
            vgroups[v] = _words(parts[2], n, lineno, line)
        elif parts[0] == "edge":
            if len(parts) < 4:
                raise FormatError("expected 'edge <v1> <v2> group=<g> ...'", lineno)
            u, v = _int(parts[1], lineno, line), _int(parts[2], lineno, line)
            opts = _kv(parts[3:], lineno, line)
            group = _word(opts.get("group", "1"), n, lineno, line)
            stable = _word(opts["stable"], n, lineno, line) if "stable" in opts else ()
            attach = None
            if "attach" in opts:
                pair = opts["attach"].split(",")
                if len(pair) != 2:
                    raise FormatError("attach needs two words", lineno, line.find("attach=") + 1)
                attach = (_word(pair[0], n, lineno, line), _word(pair[1], n, lineno, line))
                if group and attach[0] != group:
                    raise FormatError("group differs from first attaching word", lineno)
            elif group:
                raise FormatError("cyclic edge without attach=", lineno)
            edges.append(Edge(u, v, stable, attach))
        else:
            if len(parts) != 2:
                raise FormatError("expected 'stable <word>'", lineno)
            lone_stable = _word(parts[1], n, lineno, line)
    if sorted(vgroups) != list(range(len(vgroups))):
        raise FormatError("vertices must be numbered 0..k-1", lineno)
    for e in edges:
        if e.u not in vgroups or e.v not in vgroups:
            raise FormatError("edge uses an undeclared vertex", lineno)
    if lone_stable is not None:
        if len(edges) != 1 or not edges[0].is_loop:
            raise FormatError("a 'stable' line only belongs to a one-edge loop", lineno)
        e = edges[0]
        edges = [Edge(e.u, e.v, lone_stable, e.attach)]
    s = Splitting(n, tuple(tuple(vgroups[v]) for v in range(len(vgroups))), tuple(edges))
    if shape is not None and shape != s.shape:
        raise FormatError(f"declared shape {shape} but found {s.shape}", lineno)
    return s


def _int(text: str, lineno: int, line: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise FormatError(f"expected an integer, found {text!r}", lineno, line.find(text) + 1) from None


def parse_splitting(text: str) -> Splitting:
    cur = _Lines(text)
    s = _read_splitting(cur)
    extra = cur.peek()
    if extra is not None:
        raise FormatError(f"unexpected content {extra[1]!r}", extra[0], 1)
    return s


# ------------------------------------------------------------ certificates


def _ints(xs) -> str:
    return ",".join(str(x) for x in xs) if xs else "-"


def _parse_ints(text: str, lineno: int) -> tuple[int, ...]:
    if text == "-":
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise FormatError(f"expected comma-separated integers, found {text!r}", lineno) from None


def _serialize_step(c: AdjacencyCertificate) -> str:
    n = c.x.n
    out = [f"step {c.kind}", "x", serialize_splitting(c.x).rstrip(), "y", serialize_splitting(c.y).rstrip()]
    ref = c.refinement
    if isinstance(ref, Refinement) and not ref.identical:
        out += ["tree free", serialize_splitting(ref.tree).rstrip()]
        out += [f"collapse x {_ints(ref.to_x.collapsed)}", f"collapse y {_ints(ref.to_y.collapsed)}"]
    elif isinstance(ref, GeneralRefinement):
        out += ["tree mixed", serialize_splitting(ref.tree).rstrip()]
        out += [f"collapse x {_ints(ref.to_x.collapsed)}", f"collapse y {_ints(ref.to_y.collapsed)}"]
    for f in c.folds:
        out.append(f"fold word={format_word(f.word, n)} side={f.side}")
        out += ["free", serialize_splitting(f.free).rstrip(), "target", serialize_splitting(f.target).rstrip()]
    out.append("endstep")
    return "\n".join(out)


def _read_step(cur: _Lines) -> AdjacencyCertificate:
    lineno, rest = cur.expect("step")
    if len(rest) != 1:
        raise FormatError("expected 'step <kind>'", lineno)
    kind = rest[0]
    cur.expect("x")
    x = _read_splitting(cur)
    cur.expect("y")
    y = _read_splitting(cur)
    ref = None
    folds = []
    while True:
        lineno, line = cur.next("endstep")
        parts = line.split()
        if parts[0] == "endstep":
            break
        if parts[0] == "tree":
            tree = _read_splitting(cur)
            lx, px = cur.expect("collapse")
            ly, py = cur.expect("collapse")
            if px[:1] != ["x"] or py[:1] != ["y"] or len(px) != 2 or len(py) != 2:
                raise FormatError("expected 'collapse x ...' then 'collapse y ...'", lx)
            cx, cy = _parse_ints(px[1], lx), _parse_ints(py[1], ly)
            to_x = CollapseCertificate(tree, _safe_collapse(tree, cx, lx), cx)
            to_y = CollapseCertificate(tree, _safe_collapse(tree, cy, ly), cy)
            ref = Refinement(tree, to_x, to_y) if parts[1:] == ["free"] else GeneralRefinement(tree, to_x, to_y)
        elif parts[0] == "fold":
            opts = _kv(parts[1:], lineno, line)
            word = _word(opts.get("word", ""), x.n, lineno, line)
            side = _int(opts.get("side", "0"), lineno, line)
            cur.expect("free")
            free = _read_splitting(cur)
            cur.expect("target")
            target = _read_splitting(cur)
            folds.append(FoldWitness(free, word, side, target))
        else:
            raise FormatError(f"unexpected {parts[0]!r} inside step", lineno, 1)
    if kind == "EQUAL" or kind == "TYPE1" and ref is None:
        ref = Refinement(None, None, None, identical=True) if kind == "TYPE1" else None
    return AdjacencyCertificate(kind, x, y, ref, tuple(folds))


def _safe_collapse(tree: Splitting, edges: tuple[int, ...], lineno: int) -> Splitting:
    if any(not 0 <= i < tree.num_edges for i in edges):
        raise FormatError("collapse refers to a missing edge", lineno)
    return collapse_edges(tree, edges)


def serialize_path(p: PathCertificate) -> str:
    out = [f"path complex={p.complex} length={p.length}"]
    for v in p.vertices:
        out += ["vertex", serialize_splitting(v).rstrip()]
    out += [_serialize_step(s) for s in p.steps]
    out.append("endpath")
    return "\n".join(out) + "\n"


def _read_path(cur: _Lines) -> PathCertificate:
    lineno, rest = cur.expect("path")
    opts = _kv(rest, lineno, " ".join(rest))
    complex_name = opts.get("complex", "FZ")
    vertices = []
    steps = []
    while True:
        item = cur.peek()
        if item is None:
            raise FormatError("path without 'endpath'", lineno)
        word = item[1].split()[0]
        if word == "vertex":
            cur.next()
            vertices.append(_read_splitting(cur))
        elif word == "step":
            steps.append(_read_step(cur))
        elif word == "endpath":
            cur.next()
            break
        else:
            raise FormatError(f"unexpected {word!r} in path", item[0], 1)
    p = PathCertificate(complex_name, vertices, steps)
    if "length" in opts and str(p.length) != opts["length"]:
        raise FormatError("declared length disagrees with the steps", lineno)
    return p


def serialize_theorem5(r: Theorem5Result) -> str:
    n = r.x.n
    out = [f"theorem5 rank={n} case={r.case} w={format_word(r.w, n)} steps={len(r.steps)} max={r.max_length}"]
    out += ["x", serialize_splitting(r.x).rstrip(), "y", serialize_splitting(r.y).rstrip()]
    out.append(f"basis {format_words(r.beta, n)}")
    out += ["start", r.sequence.start.serialize().rstrip(), "folds"]
    out += [s.serialize(n) for s in r.sequence.steps]
    out.append("endfolds")
    for rec in r.steps:
        best = rec.best
        j = rec.paths.index(best)
        out.append(f"graph {rec.index} image={j} images={len(rec.images)} case={rec.case}")
        out.append(serialize_path(best).rstrip())
    out.append("end")
    return "\n".join(out) + "\n"


def _read_theorem5(cur: _Lines) -> Theorem5Result:
    lineno, rest = cur.expect("theorem5")
    opts = _kv(rest, lineno, " ".join(rest))
    n = _int(opts.get("rank", ""), lineno, "")
    w = _word(opts.get("w", ""), n, lineno, "")
    cur.expect("x")
    x = _read_splitting(cur)
    cur.expect("y")
    y = _read_splitting(cur)
    bl, bparts = cur.expect("basis")
    beta = _words(bparts[0], n, bl, bparts[0]) if bparts else []
    cur.expect("start")
    lines = []
    while cur.peek() is not None and cur.peek()[1].split()[0] in ("beta", "v", "e"):
        lines.append(cur.next()[1])
    start = parse_beta_graph("\n".join(lines) + "\n")
    cur.expect("folds")
    folds = []
    while cur.peek() is not None and cur.peek()[1].startswith("fold "):
        folds.append(cur.next()[1])
    cur.expect("endfolds")
    try:
        seq = parse_fold_sequence("\n".join(folds), start)
    except ValueError as exc:
        raise FormatError(f"fold sequence does not replay: {exc}", lineno) from None
    images = {i + 1: b for i, b in enumerate(beta)}
    records = []
    for g in seq.graphs:
        gl, gparts = cur.expect("graph")
        gopts = _kv(gparts[1:], gl, " ".join(gparts))
        path = _read_path(cur)
        imgs = [map_splitting(s, images) for s in f_images(g)]
        j = _int(gopts.get("image", "0"), gl, "")
        if not 0 <= j < len(imgs):
            raise FormatError("image index out of range", gl)
        paths: list[PathCertificate | None] = [None] * len(imgs)
        paths[j] = path
        records.append(StepRecord(_int(gparts[0], gl, ""), imgs, paths, gopts.get("case", "")))
    cur.expect("end")
    return Theorem5Result(x, y, w, opts.get("case", ""), beta, seq, records)


@dataclass
class CertificateFile:
    kind: str
    value: object

    def verify(self) -> bool:
        v = self.value
        if isinstance(v, AdjacencyCertificate):
            return v.verify()
        if isinstance(v, PathCertificate):
            return v.verify()
        if isinstance(v, Theorem5Result):
            return v.verify() and v.max_length <= 3
        return False


def serialize_certificate(value) -> str:
    if isinstance(value, AdjacencyCertificate):
        return "certificate adjacency\n" + _serialize_step(value) + "\n"
    if isinstance(value, PathCertificate):
        return "certificate path\n" + serialize_path(value)
    if isinstance(value, Theorem5Result):
        return "certificate theorem5\n" + serialize_theorem5(value)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def parse_certificate(text: str) -> CertificateFile:
    cur = _Lines(text)
    lineno, rest = cur.expect("certificate")
    if len(rest) != 1:
        raise FormatError("expected 'certificate <kind>'", lineno)
    kind = rest[0]
    if kind == "adjacency":
        value = _read_step(cur)
    elif kind == "path":
        value = _read_path(cur)
    elif kind == "theorem5":
        value = _read_theorem5(cur)
    else:
        raise FormatError(f"unknown certificate kind {kind!r}", lineno)
    extra = cur.peek()
    if extra is not None:
        raise FormatError(f"unexpected content {extra[1]!r}", extra[0], 1)
    return CertificateFile(kind, value)


def iter_splittings(text: str) -> Iterator[Splitting]:
    """All splitting blocks in a file, in order."""
    cur = _Lines(text)
    while cur.peek() is not None:
        yield _read_splitting(cur)
