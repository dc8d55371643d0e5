"""Untyped feature structures with reentrancy.

A :class:`FeatureStructure` is stored in canonical form: a tuple of nodes
numbered in depth-first pre-order from the root (node 0), visiting features
in lexicographic order.  A node is either an atom (``str``) or a sorted tuple
of ``(feature, child)`` arcs; the empty tuple is the unconstrained node (top).

Because the numbering is canonical, two structures are isomorphic exactly
when their node tuples are equal, so ``==`` and ``hash`` are isomorphism
tests and structures can be used as dict keys.

All operations are non-destructive.  Unification works on a scratch
union-find graph (:class:`Graph`) and extracts a fresh canonical structure.

Text form::

    [agr:#1 [num:sg], subj:[agr:#1]]

Reentrancy tags ``#n`` are written with the value at the first occurrence;
a bare ``#n`` refers back to it (or stands for top on first use).
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Tuple, Union

Arcs = Tuple[Tuple[str, int], ...]
Node = Union[str, Arcs]
Path = Tuple[str, ...]

ATOM_RE = re.compile(r"[A-Za-z0-9_]+\Z")


class FSError(ValueError):
    """Malformed feature structure (syntax error, clash in a literal, cycle)."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"{message} (line {line}, column {col})"
        super().__init__(message)


class CycleError(FSError):
    pass


class FeatureStructure:
    """Immutable rooted acyclic feature graph in canonical form."""

    __slots__ = ("nodes", "_hash")

    def __init__(self, nodes: Sequence[Node]):
        self.nodes: tuple[Node, ...] = tuple(nodes)
        self._hash = hash(self.nodes)

    root = 0

    def __eq__(self, other):
        if not isinstance(other, FeatureStructure):
            return NotImplemented
        return self._hash == other._hash and self.nodes == other.nodes

    def __hash__(self):
        return self._hash

    def __len__(self):
        return len(self.nodes)

    def __repr__(self):
        return f"FeatureStructure({render(self)!r})"

    def __str__(self):
        return render(self)

    @property
    def is_top(self) -> bool:
        return self.nodes[0] == ()

    def is_atom(self, node: int = 0) -> bool:
        return type(self.nodes[node]) is str

    def arcs(self, node: int = 0) -> dict[str, int]:
        n = self.nodes[node]
        return {} if type(n) is str else dict(n)

    def follow(self, path: Iterable[str], node: int = 0) -> int | None:
        """Node reached from ``node`` along ``path``, or None."""
        for feat in path:
            n = self.nodes[node]
            if type(n) is str:
                return None
            for f, child in n:
                if f == feat:
                    node = child
                    break
            else:
                return None
        return node

    def value(self, path: Iterable[str], node: int = 0) -> str | None:
        """Atomic value at ``path``; None when missing, top or complex."""
        target = self.follow(path, node)
        if target is None:
            return None
        n = self.nodes[target]
        return n if type(n) is str else None

    def sub(self, node: int) -> FeatureStructure:
        """The substructure rooted at ``node``."""
        if node == 0:
            return self
        g = Graph()
        base = g.load(self)
        return g.extract(base + node)

    def paths(self) -> Iterator[tuple[Path, int]]:
        """Every path from the root with the node it reaches (root included)."""
        stack: list[tuple[Path, int]] = [((), 0)]
        while stack:
            path, node = stack.pop()
            yield path, node
            n = self.nodes[node]
            if type(n) is not str:
                for f, child in reversed(n):
                    stack.append((path + (f,), child))

    def features(self) -> set[str]:
        out = set()
        for n in self.nodes:
            if type(n) is not str:
                out.update(f for f, _ in n)
        return out


TOP = FeatureStructure(((),))


def atom(value: str) -> FeatureStructure:
    return FeatureStructure((value,))


class Graph:
    """Scratch union-find graph used to build and unify structures.

    Structures are copied in with :meth:`load`, nodes are merged with
    :meth:`unify`, and a canonical result is read back with :meth:`extract`.
    """

    __slots__ = ("parent", "content")

    def __init__(self):
        self.parent: list[int] = []
        self.content: list[str | dict[str, int]] = []

    def load(self, fs: FeatureStructure) -> int:
        parent, content = self.parent, self.content
        base = len(parent)
        for i, n in enumerate(fs.nodes):
            parent.append(base + i)
            if type(n) is str:
                content.append(n)
            else:
                content.append({f: c + base for f, c in n})
        return base

    def new(self, value: str | dict[str, int] | None = None) -> int:
        i = len(self.parent)
        self.parent.append(i)
        self.content.append({} if value is None else value)
        return i

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def unify(self, x: int, y: int) -> bool:
        """Merge nodes x and y.  Returns False on clash (graph is then spoiled)."""
        find, parent, content = self.find, self.parent, self.content
        pending = [(x, y)]
        while pending:
            a, b = pending.pop()
            a = find(a)
            b = find(b)
            if a == b:
                continue
            ca = content[a]
            cb = content[b]
            if type(ca) is str:
                if type(cb) is str:
                    if ca != cb:
                        return False
                elif cb:
                    return False
                parent[b] = a
            elif type(cb) is str:
                if ca:
                    return False
                parent[a] = b
            else:
                if len(ca) < len(cb):
                    a, b, ca, cb = b, a, cb, ca
                parent[b] = a
                for f, t in cb.items():
                    s = ca.get(f)
                    if s is None:
                        ca[f] = t
                    else:
                        pending.append((s, t))
        return True

    def extract(self, root: int) -> FeatureStructure:
        """Canonical structure reachable from ``root``; CycleError if cyclic."""
        find, content = self.find, self.content
        ids: dict[int, int] = {}
        out: list[Node] = []
        open_: set[int] = set()

        def visit(x: int) -> int:
            x = find(x)
            i = ids.get(x)
            if i is not None:
                if x in open_:
                    raise CycleError("cyclic feature structure")
                return i
            i = len(out)
            ids[x] = i
            c = content[x]
            if type(c) is str:
                out.append(c)
                return i
            out.append(())
            open_.add(x)
            out[i] = tuple((f, visit(c[f])) for f in sorted(c))
            open_.discard(x)
            return i

        visit(root)
        return FeatureStructure(out)


# -- unification, subsumption, generalization --------------------------------


def unify(a: FeatureStructure, b: FeatureStructure) -> FeatureStructure | None:
    """Most general structure subsumed by both, or None on clash."""
    if a is b or a == b:
        return a
    g = Graph()
    ra = g.load(a)
    rb = g.load(b)
    if not g.unify(ra, rb):
        return None
    try:
        return g.extract(ra)
    except CycleError:
        return None


def unify_at(host: FeatureStructure, node: int, other: FeatureStructure) -> FeatureStructure | None:
    """Unify ``other`` into node ``node`` of ``host``; returns the whole host."""
    g = Graph()
    g.load(host)
    ro = g.load(other)
    if not g.unify(node, ro):
        return None
    try:
        return g.extract(0)
    except CycleError:
        return None


def subsumes(a: FeatureStructure, b: FeatureStructure) -> bool:
    """True iff every constraint and reentrancy of ``a`` also holds in ``b``."""
    mapping: dict[int, int] = {}
    stack = [(0, 0)]
    an, bn = a.nodes, b.nodes
    while stack:
        x, y = stack.pop()
        seen = mapping.get(x)
        if seen is not None:
            if seen != y:
                return False
            continue
        mapping[x] = y
        nx, ny = an[x], bn[y]
        if type(nx) is str:
            if nx != ny:
                return False
        elif nx:
            if type(ny) is str:
                return False
            arcs = dict(ny)
            for f, cx in nx:
                cy = arcs.get(f)
                if cy is None:
                    return False
                stack.append((cx, cy))
    return True


def equivalent(a: FeatureStructure, b: FeatureStructure) -> bool:
    return subsumes(a, b) and subsumes(b, a)


def generalize(a: FeatureStructure, b: FeatureStructure) -> FeatureStructure:
    """Anti-unification: the least general structure subsuming both.

    A feature present in both inputs is kept even when its values clash; the
    clashing node becomes top.  Reentrancy survives only where both inputs
    share it.
    """
    an, bn = a.nodes, b.nodes
    g = Graph()
    pairs: dict[tuple[int, int], int] = {}

    def visit(x: int, y: int) -> int:
        key = (x, y)
        i = pairs.get(key)
        if i is not None:
            return i
        nx, ny = an[x], bn[y]
        if type(nx) is str or type(ny) is str:
            i = g.new(nx if nx == ny else None)
            pairs[key] = i
            return i
        i = g.new()
        pairs[key] = i
        other = dict(ny)
        g.content[i] = {f: visit(cx, other[f]) for f, cx in nx if f in other}
        return i

    return g.extract(visit(0, 0))


# -- restriction ---------------------------------------------------------------


def parse_path(text: str) -> Path:
    text = text.strip()
    if not text:
        return ()
    parts = tuple(text.split("|"))
    for p in parts:
        if not ATOM_RE.match(p):
            raise FSError(f"bad feature name {p!r} in path {text!r}")
    return parts


def format_path(path: Path) -> str:
    return "|".join(path)


@dataclass(frozen=True)
class RetentionSpec:
    """Which paths keep their co-indexing, and which also keep atomic values."""

    coindex_paths: frozenset
    value_paths: frozenset

    def __post_init__(self):
        if not self.coindex_paths or not self.value_paths:
            raise ValueError("retention spec needs at least one coindex path and one value path")
        stray = self.value_paths - self.coindex_paths
        if stray:
            raise ValueError(
                "value paths must also be coindex paths: "
                + ", ".join(sorted(format_path(p) for p in stray))
            )

    @classmethod
    def of(cls, coindex: Iterable[str | Path], values: Iterable[str | Path]) -> RetentionSpec:
        def norm(p):
            return parse_path(p) if isinstance(p, str) else tuple(p)

        return cls(frozenset(map(norm, coindex)), frozenset(map(norm, values)))

    def under(self, prefixes: Iterable[str]) -> RetentionSpec:
        """The same spec applied below each of the given top-level features."""
        prefixes = list(prefixes)
        return RetentionSpec(
            frozenset((p,) + path for p in prefixes for path in self.coindex_paths),
            frozenset((p,) + path for p in prefixes for path in self.value_paths),
        )

    def render(self) -> str:
        lines = [f"coindex {format_path(p)}" for p in sorted(self.coindex_paths)]
        lines += [f"value {format_path(p)}" for p in sorted(self.value_paths)]
        return "\n".join(lines) + "\n"

    def fingerprint(self) -> str:
        return hashlib.sha256(self.render().encode("utf-8")).hexdigest()[:16]


def load_retention(text: str) -> RetentionSpec:
    """Read ``coindex <path>`` / ``value <path>`` lines (``#`` comments)."""
    coindex, values = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        kind, _, rest = line.partition(" ")
        try:
            path = parse_path(rest)
        except FSError as exc:
            raise FSError(str(exc), lineno, 1) from None
        if kind == "coindex":
            coindex.append(path)
        elif kind == "value":
            values.append(path)
        else:
            raise FSError(f"unknown retention directive {kind!r}", lineno, 1)
    return RetentionSpec(frozenset(coindex), frozenset(values))


def restrict(fs: FeatureStructure, spec: RetentionSpec) -> FeatureStructure:
    """Prune ``fs`` to the retained paths.

    An arc survives if it lies on a prefix of some coindex path (reached along
    any route, so shared nodes pool what their paths allow).  Surviving nodes
    keep their identity, hence their reentrancies.  Atomic values survive only
    on nodes reached at a value path.
    """
    if not spec.coindex_paths:
        raise ValueError("empty retention spec")
    # trie over coindex paths; each trie state: (children, is_value_path)
    trie: dict = {}
    for path in spec.coindex_paths:
        t = trie
        for f in path:
            t = t.setdefault(f, {})
    value_states = set()
    for path in spec.value_paths:
        t = trie
        for f in path:
            t = t[f]
        value_states.add(id(t))

    nodes = fs.nodes
    keep_arcs: dict[int, set[str]] = {}
    keep_value: set[int] = set()
    seen: set[tuple[int, int]] = set()
    stack = [(0, trie)]
    while stack:
        node, state = stack.pop()
        key = (node, id(state))
        if key in seen:
            continue
        seen.add(key)
        kept = keep_arcs.setdefault(node, set())
        if id(state) in value_states:
            keep_value.add(node)
        n = nodes[node]
        if type(n) is str or not state:
            continue
        for f, child in n:
            nxt = state.get(f)
            if nxt is not None:
                kept.add(f)
                stack.append((child, nxt))

    g = Graph()
    for i, n in enumerate(nodes):
        if i not in keep_arcs:
            g.new()
        elif type(n) is str:
            g.new(n if i in keep_value else None)
        else:
            allowed = keep_arcs[i]
            g.new({f: c for f, c in n if f in allowed})
    return g.extract(0)


# -- text form -------------------------------------------------------------------


def render(fs: FeatureStructure) -> str:
    nodes = fs.nodes
    refs = [0] * len(nodes)
    for n in nodes:
        if type(n) is not str:
            for _, c in n:
                refs[c] += 1
    tags: dict[int, int] = {}
    for i, r in enumerate(refs):
        if r > 1:
            tags[i] = len(tags) + 1
    done: set[int] = set()
    out: list[str] = []

    def emit(i: int):
        tag = tags.get(i)
        if tag is not None:
            out.append(f"#{tag}")
            if i in done:
                return
            done.add(i)
            if nodes[i] == ():
                return
            out.append(" ")
        n = nodes[i]
        if type(n) is str:
            out.append(n)
            return
        out.append("[")
        for k, (f, c) in enumerate(n):
            if k:
                out.append(", ")
            out.append(f)
            out.append(":")
            emit(c)
        out.append("]")

    emit(0)
    return "".join(out)


_TOKEN_RE = re.compile(r"\s*(?:(#\d+)|([A-Za-z0-9_]+)|(:=|[\[\],:])|(\S))")


class AvmReader:
    """Tokenizing reader for AVM text; several values may share one tag scope."""

    def __init__(self, text: str, graph: Graph | None = None, line: int = 1, col_offset: int = 0):
        self.text = text
        self.graph = graph if graph is not None else Graph()
        self.tags: dict[str, int] = {}
        self.tag_pos: dict[str, tuple[int, int]] = {}
        self.line = line
        self.col_offset = col_offset
        self.tokens = self._tokenize()
        self.i = 0

    def _where(self, pos: int) -> tuple[int, int]:
        line = self.line + self.text.count("\n", 0, pos)
        start = self.text.rfind("\n", 0, pos) + 1
        col = pos - start + 1
        if line == self.line:
            col += self.col_offset
        return line, col

    def error(self, message: str, pos: int | None = None) -> FSError:
        if pos is None:
            pos = self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)
        return FSError(message, *self._where(pos))

    def _tokenize(self):
        tokens = []
        pos = 0
        text = self.text
        while True:
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                break
            tag, word, punct, junk = m.groups()
            start = m.start(m.lastindex)
            if junk is not None:
                raise FSError(f"unexpected character {junk!r}", *self._where(start))
            if tag is not None:
                tokens.append(("tag", tag, start))
            elif word is not None:
                tokens.append(("atom", word, start))
            else:
                tokens.append((punct, punct, start))
            pos = m.end()
        return tokens

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def take(self, kind: str):
        if self.peek() != kind:
            got = self.tokens[self.i][1] if self.i < len(self.tokens) else "end of input"
            raise self.error(f"expected {kind!r}, got {got!r}")
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def at_end(self) -> bool:
        return self.i >= len(self.tokens)

    def value(self) -> int:
        g = self.graph
        kind = self.peek()
        if kind == "tag":
            _, tag, pos = self.take("tag")
            body = None
            if self.peek() in ("atom", "["):
                body = self._body()
            node = self.tags.get(tag)
            if node is None:
                node = body if body is not None else g.new()
                self.tags[tag] = node
                self.tag_pos[tag] = self._where(pos)
            elif body is not None and not g.unify(node, body):
                raise self.error(f"conflicting values for {tag}", pos)
            return node
        return self._body()

    def _body(self) -> int:
        g = self.graph
        kind = self.peek()
        if kind == "atom":
            return g.new(self.take("atom")[1])
        if kind != "[":
            raise self.error("expected a value")
        self.take("[")
        arcs: dict[str, int] = {}
        if self.peek() != "]":
            while True:
                _, feat, pos = self.take("atom")
                self.take(":")
                if feat in arcs:
                    raise self.error(f"duplicate feature {feat!r}", pos)
                arcs[feat] = self.value()
                if self.peek() == ",":
                    self.take(",")
                    continue
                break
        self.take("]")
        return g.new(arcs)

    def extract(self, root: int) -> FeatureStructure:
        try:
            return self.graph.extract(root)
        except CycleError:
            # report the first tag whose node lies on a cycle
            for tag, node in self.tags.items():
                try:
                    self.graph.extract(node)
                except CycleError:
                    line, col = self.tag_pos[tag]
                    raise CycleError(f"cyclic reference through {tag}", line, col) from None
            raise


def parse_fs(text: str, line: int = 1, col_offset: int = 0) -> FeatureStructure:
    """Parse AVM text into a canonical structure."""
    reader = AvmReader(text, line=line, col_offset=col_offset)
    if reader.at_end():
        raise reader.error("empty feature structure")
    root = reader.value()
    if not reader.at_end():
        raise reader.error("trailing input")
    return reader.extract(root)


def fs_from_dict(d) -> FeatureStructure:
    """Build a tree-shaped structure from nested dicts and strings (no reentrancy).

    ``None`` stands for top.
    """
    g = Graph()

    def build(v) -> int:
        if v is None:
            return g.new()
        if isinstance(v, str):
            return g.new(v)
        return g.new({f: build(x) for f, x in v.items()})

    return g.extract(build(d))
