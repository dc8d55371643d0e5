"""Bottom-up unification chart parser over unary and binary rules.

Grammar file::

    start [lev:3]
    rule np_det -> [lev:2, head:#1] := [head:[cat:det]] [lev:1, head:#1 [cat:n]]

Tags such as ``#1`` are shared between the mother and the daughters of one
rule.  Each complete parse is also assembled into a single *tree structure*
``[mother:<category>, w0:<leaf 0>, w1:<leaf 1>, ...]`` in which every
co-indexing introduced by the rules of the derivation survives; this is the
structure the trainer compiles into a macro-rule.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .fs import AvmReader, CycleError, FeatureStructure, FSError, Graph, TOP, parse_fs, unify
from .tagset import LoadError, Lexicon, TagSet

MOTHER = "mother"


def slot_feature(i: int) -> str:
    return f"w{i}"


@dataclass(frozen=True)
class Rule:
    name: str
    fs: FeatureStructure  # [mother:..., d1:..., d2:...]
    mother_node: int
    daughter_nodes: tuple

    @property
    def arity(self) -> int:
        return len(self.daughter_nodes)

    @property
    def mother(self) -> FeatureStructure:
        return self.fs.sub(self.mother_node)

    @property
    def daughters(self) -> list[FeatureStructure]:
        return [self.fs.sub(n) for n in self.daughter_nodes]


@dataclass
class Grammar:
    rules: list
    start: FeatureStructure = TOP

    def __post_init__(self):
        self.by_name = {r.name: r for r in self.rules}
        self.unary = [r for r in self.rules if r.arity == 1]
        self.binary = [r for r in self.rules if r.arity == 2]


_RULE_RE = re.compile(r"rule\s+([A-Za-z0-9_]+)\s*->\s*(.*)\Z")


def load_grammar(text: str, source: str = "<grammar>") -> Grammar:
    rules: list[Rule] = []
    start = None
    problems: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            if stripped.startswith("start "):
                if start is not None:
                    problems.append(f"line {lineno}: duplicate start constraint")
                body = stripped[len("start "):]
                start = parse_fs(body, line=lineno, col_offset=raw.index(body))
                continue
            m = _RULE_RE.match(stripped)
            if m is None:
                problems.append(f"line {lineno}: expected 'start <AVM>' or 'rule <name> -> <AVM> := <AVM> [<AVM>]'")
                continue
            name, body = m.groups()
            if any(r.name == name for r in rules):
                problems.append(f"line {lineno}: duplicate rule {name!r}")
                continue
            rules.append(_parse_rule(name, body, lineno, raw.index(body)))
        except FSError as exc:
            problems.append(str(exc))
    if not rules:
        problems.append("no rules declared")
    if problems:
        raise LoadError(source, problems)
    return Grammar(rules, start if start is not None else TOP)


def _parse_rule(name: str, body: str, lineno: int, col: int) -> Rule:
    reader = AvmReader(body, line=lineno, col_offset=col)
    mother = reader.value()
    reader.take(":=")
    daughters = [reader.value()]
    if not reader.at_end():
        daughters.append(reader.value())
    if not reader.at_end():
        raise reader.error(f"rule {name!r} has more than two daughters")
    g = reader.graph
    arcs = {MOTHER: mother}
    for i, d in enumerate(daughters, 1):
        arcs[f"d{i}"] = d
    fs = reader.extract(g.new(arcs))
    return Rule(
        name,
        fs,
        fs.follow((MOTHER,)),
        tuple(fs.follow((f"d{i}",)) for i in range(1, len(daughters) + 1)),
    )


def apply_rule(rule: Rule, daughters: Sequence[FeatureStructure]) -> FeatureStructure | None:
    """Mother category licensed by ``rule`` over ``daughters``, or None."""
    g = Graph()
    base = g.load(rule.fs)
    for node, fs in zip(rule.daughter_nodes, daughters):
        if not g.unify(base + node, g.load(fs)):
            return None
    try:
        return g.extract(base + rule.mother_node)
    except CycleError:
        return None


@dataclass(frozen=True)
class Derivation:
    """Node of a derivation tree; ``rule`` is None at a leaf."""

    rule: str | None
    start: int
    end: int
    children: tuple = ()
    choice: int = 0  # which lexical alternative a leaf used

    def skeleton(self):
        if self.rule is None:
            return self.start
        return (self.rule, tuple(c.skeleton() for c in self.children))

    def leaves(self):
        if self.rule is None:
            yield self
        for c in self.children:
            yield from c.leaves()


@dataclass(frozen=True)
class ParseTree:
    category: FeatureStructure  # top rule application, after the start constraint
    root_fs: FeatureStructure  # [mother:..., w0:..., ...]
    derivation: Derivation
    leaves: tuple

    @property
    def choices(self) -> tuple:
        return tuple(leaf.choice for leaf in self.derivation.leaves())

    def slot_node(self, i: int) -> int:
        return self.root_fs.follow((slot_feature(i),))


class ReplayError(RuntimeError):
    pass


def tree_structure(grammar: Grammar, derivation: Derivation, leaves: Sequence[FeatureStructure]) -> FeatureStructure:
    """Replay ``derivation`` over ``leaves`` into one structure (see module doc)."""
    g = Graph()
    leaf_nodes = [g.load(fs) for fs in leaves]

    def build(d: Derivation) -> int:
        if d.rule is None:
            return leaf_nodes[d.start]
        rule = grammar.by_name[d.rule]
        base = g.load(rule.fs)
        for node, child in zip(rule.daughter_nodes, d.children):
            if not g.unify(base + node, build(child)):
                raise ReplayError(f"rule {d.rule} fails on replay at {d.start}-{d.end}")
        return base + rule.mother_node

    top = build(derivation)
    if not g.unify(top, g.load(grammar.start)):
        raise ReplayError("start constraint fails on replay")
    arcs = {MOTHER: top}
    for i, n in enumerate(leaf_nodes):
        arcs[slot_feature(i)] = n
    try:
        return g.extract(g.new(arcs))
    except CycleError:
        raise ReplayError("replay produced a cycle") from None


def parse(grammar: Grammar, leaves: Sequence[FeatureStructure]) -> list[ParseTree]:
    """All complete parses of ``leaves`` (one structure per position)."""
    return parse_lattice(grammar, [[fs] for fs in leaves])


def parse_lattice(grammar: Grammar, alternatives: Sequence[Sequence[FeatureStructure]]) -> list[ParseTree]:
    """All complete parses where position i may use any of ``alternatives[i]``."""
    n = len(alternatives)
    if n == 0:
        raise ValueError("nothing to parse")
    chart: dict[tuple[int, int], list] = {}
    max_unary = len(grammar.unary)

    for length in range(1, n + 1):
        for i in range(0, n - length + 1):
            j = i + length
            cell: list = []
            if length == 1:
                for k, fs in enumerate(alternatives[i]):
                    cell.append((fs, Derivation(None, i, j, choice=k), 0))
            else:
                for k in range(i + 1, j):
                    left, right = chart[(i, k)], chart[(k, j)]
                    if not left or not right:
                        continue
                    for lfs, ld, _ in left:
                        for rfs, rd, _ in right:
                            for rule in grammar.binary:
                                m = apply_rule(rule, (lfs, rfs))
                                if m is not None:
                                    cell.append((m, Derivation(rule.name, i, j, (ld, rd)), 0))
            # unary closure, breadth first in rule order
            q = 0
            while q < len(cell):
                fs, d, depth = cell[q]
                q += 1
                if depth >= max_unary:
                    continue
                for rule in grammar.unary:
                    m = apply_rule(rule, (fs,))
                    if m is not None:
                        cell.append((m, Derivation(rule.name, i, j, (d,)), depth + 1))
            chart[(i, j)] = cell

    trees = []
    for fs, d, _ in chart[(0, n)]:
        if d.rule is None:
            continue
        cat = unify(fs, grammar.start)
        if cat is None:
            continue
        leaves = tuple(alternatives[leaf.start][leaf.choice] for leaf in d.leaves())
        trees.append(ParseTree(cat, tree_structure(grammar, d, leaves), d, leaves))
    return trees


def parse_tags(grammar: Grammar, tagset: TagSet, lexicon: Lexicon, seq: Sequence[str]) -> list[ParseTree]:
    """Parse a tag sequence with tag-word entries as the leaves."""
    seq = tagset.check_sequence(seq)
    return parse(grammar, [lexicon.tagword(t) for t in seq])
