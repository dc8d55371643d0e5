"""Explanation-based training: corpus ranking, macro-rule extraction, the index.

Training parses each selected tag sequence with tag-word leaves, prunes
every tree structure to the retention spec (applied below the mother and
below each lexical slot), and files the result under the generalized key.

Index file layout (UTF-8)::

    eblindex-version 1
    tagset-fp <hex>
    retention-fp <hex>
    counts <trained> <parsed> <keys> <parses>
    key <tag ...>
    parse slots=<tag ...> anchors=<n ...> fs=<AVM>
"""

from __future__ import annotations

import logging
import re
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

from .chart import MOTHER, Grammar, ParseTree, parse_tags, slot_feature
from .config import Config
from .fs import FeatureStructure, FSError, RetentionSpec, parse_fs, render, restrict
from .segment import Segmenter, Tagger
from .tagset import Lexicon, TagSequence, TagSet

log = logging.getLogger(__name__)

FORMAT_VERSION = 1


class TrainingError(RuntimeError):
    pass


class CorpusError(ValueError):
    pass


class IndexFormatError(ValueError):
    pass


@dataclass(frozen=True)
class GeneralizedParse:
    key: tuple
    slot_tags: tuple
    root_fs: FeatureStructure
    slot_anchors: tuple
    # the unrestricted chart parse this was compiled from; not serialized
    source: ParseTree | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if len(self.slot_tags) != len(self.key) or len(self.slot_anchors) != len(self.key):
            raise ValueError("key, slot tags and anchors differ in length")


@dataclass
class IndexMeta:
    tagset_fp: str = ""
    retention_fp: str = ""
    trained: int = 0
    parsed: int = 0
    keys: int = 0
    parses: int = 0


@dataclass
class EblIndex:
    entries: dict = field(default_factory=dict)  # key -> [GeneralizedParse]
    meta: IndexMeta = field(default_factory=IndexMeta)
    # (sequence, reason) for training sequences that yielded nothing
    uncovered: list = field(default_factory=list, compare=False)

    def get(self, key: Sequence[str]) -> list[GeneralizedParse]:
        return self.entries.get(tuple(key), [])

    def parses(self) -> Iterable[GeneralizedParse]:
        for plist in self.entries.values():
            yield from plist

    def __len__(self):
        return len(self.entries)


# -- corpus --------------------------------------------------------------------


def extract_sequences(lines: Iterable, segmenter: Segmenter, tagger: Tagger) -> list[tuple[TagSequence, int]]:
    """Tag sequences of every segment, most frequent first.

    Ties keep first-occurrence order.  ``lines`` may yield str or bytes.
    """
    counts: Counter = Counter()
    for lineno, line in enumerate(lines, 1):
        if isinstance(line, bytes):
            try:
                line = line.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise CorpusError(f"line {lineno}: not valid UTF-8 ({exc.reason})") from None
        for seg in segmenter.segment(line):
            counts[tagger.tag(seg)] += 1
    # sorted() is stable and Counter iterates in first-insertion order
    return sorted(counts.items(), key=lambda kv: -kv[1])


def select_training(ranked: Sequence[tuple[TagSequence, int]], n: int) -> list[TagSequence]:
    if n < 0:
        raise ValueError("n must be non-negative")
    return [seq for seq, _ in ranked[:n]]


# -- compilation -----------------------------------------------------------------


def slot_retention(spec: RetentionSpec, length: int) -> RetentionSpec:
    """The category-level spec applied under the mother and every slot."""
    return spec.under([MOTHER] + [slot_feature(i) for i in range(length)])


def generalize_parse(tree: ParseTree, ts: TagSet, spec: RetentionSpec, seq: Sequence[str]) -> GeneralizedParse:
    seq = tuple(seq)
    if len(tree.leaves) != len(seq):
        raise ValueError("tree does not match the tag sequence")
    root = restrict(tree.root_fs, slot_retention(spec, len(seq)))
    anchors = []
    for i in range(len(seq)):
        node = root.follow((slot_feature(i),))
        if node is None:
            raise TrainingError(f"retention spec prunes the anchor of slot {i}")
        anchors.append(node)
    return GeneralizedParse(ts.generalize_key(seq), seq, root, tuple(anchors), tree)


def max_parses_per_key(key: Sequence[str], ts: TagSet, cfg: Config = Config()) -> int:
    g = sum(1 for t in key if ts.is_generalizable(t))
    return cfg.train_cap_base + cfg.train_cap_per_generalizable * g


def _parse_job(args):
    grammar, ts, lex, seq = args
    return parse_tags(grammar, ts, lex, seq)


def build_index(
    training: Sequence[TagSequence],
    grammar: Grammar,
    ts: TagSet,
    lex: Lexicon,
    spec: RetentionSpec,
    cfg: Config = Config(),
    workers: int = 1,
) -> EblIndex:
    training = [ts.check_sequence(s) for s in training]
    if workers > 1 and len(training) > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_parse_job, [(grammar, ts, lex, s) for s in training]))
    else:
        results = [parse_tags(grammar, ts, lex, s) for s in training]

    entries: dict[tuple, list[GeneralizedParse]] = {}
    uncovered = []
    parsed = 0
    for seq, trees in zip(training, results):
        if not trees:
            uncovered.append((seq, "no parse"))
            continue
        parsed += 1
        key = ts.generalize_key(seq)
        bucket = entries.setdefault(key, [])
        cap = max_parses_per_key(key, ts, cfg)
        for tree in trees:
            if len(bucket) >= cap:
                break
            gp = generalize_parse(tree, ts, spec, seq)
            if any(p.root_fs == gp.root_fs for p in bucket):
                continue
            bucket.append(gp)
    for seq, reason in uncovered:
        log.info("uncovered %s: %s", " ".join(seq), reason)
    meta = IndexMeta(
        ts.fingerprint(),
        spec.fingerprint(),
        len(training),
        parsed,
        len(entries),
        sum(len(v) for v in entries.values()),
    )
    return EblIndex(entries, meta, uncovered)


@dataclass(frozen=True)
class IndexStats:
    keys: int
    parses: int
    avg_parses_per_key: float
    key_reduction_ratio: float
    trained: int = 0
    parsed: int = 0


def index_stats(idx: EblIndex) -> IndexStats:
    m = idx.meta
    avg = m.parses / m.keys if m.keys else 0.0
    reduction = 1 - m.keys / m.parsed if m.parsed else 0.0
    return IndexStats(m.keys, m.parses, avg, reduction, m.trained, m.parsed)


# -- persistence -------------------------------------------------------------------


def _key_text(key) -> str:
    return " ".join(key)


def dump_index(idx: EblIndex) -> str:
    m = idx.meta
    lines = [
        f"eblindex-version {FORMAT_VERSION}",
        f"tagset-fp {m.tagset_fp}",
        f"retention-fp {m.retention_fp}",
        f"counts {m.trained} {m.parsed} {m.keys} {m.parses}",
    ]
    for key in sorted(idx.entries, key=_key_text):
        lines.append(f"key {_key_text(key)}")
        for gp in idx.entries[key]:
            anchors = " ".join(map(str, gp.slot_anchors))
            lines.append(f"parse slots={_key_text(gp.slot_tags)} anchors={anchors} fs={render(gp.root_fs)}")
    return "\n".join(lines) + "\n"


def save_index(idx: EblIndex, sink: TextIO) -> None:
    sink.write(dump_index(idx))


_PARSE_RE = re.compile(r"parse slots=(.+?) anchors=([\d ]+?) fs=(.+)\Z")


def load_index(
    source: TextIO | str,
    tagset: TagSet | None = None,
    retention: RetentionSpec | None = None,
) -> EblIndex:
    """Read an index, checking fingerprints against the given tagset/spec."""
    text = source if isinstance(source, str) else source.read()
    lines = text.split("\n")
    truncated = not text.endswith("\n")
    if lines and lines[-1] == "":
        lines.pop()

    def fail(msg):
        raise IndexFormatError(msg)

    if len(lines) < 4:
        fail("unexpected end of index")
    header = [ln.split(" ", 1) for ln in lines[:4]]
    names = [h[0] for h in header]
    if names != ["eblindex-version", "tagset-fp", "retention-fp", "counts"] or any(len(h) != 2 for h in header):
        fail("malformed index header")
    if header[0][1].strip() != str(FORMAT_VERSION):
        fail(f"unsupported index version {header[0][1].strip()!r} (expected {FORMAT_VERSION})")
    try:
        trained, parsed, nkeys, nparses = map(int, header[3][1].split())
    except ValueError:
        fail("malformed counts line")
    meta = IndexMeta(header[1][1].strip(), header[2][1].strip(), trained, parsed, nkeys, nparses)
    if tagset is not None and tagset.fingerprint() != meta.tagset_fp:
        fail(f"tagset fingerprint mismatch: index has {meta.tagset_fp}, tagset is {tagset.fingerprint()}")
    if retention is not None and retention.fingerprint() != meta.retention_fp:
        fail(f"retention fingerprint mismatch: index has {meta.retention_fp}, spec is {retention.fingerprint()}")

    entries: dict[tuple, list[GeneralizedParse]] = {}
    key = None
    for lineno, line in enumerate(lines[4:], 5):
        if line.startswith("key "):
            key = tuple(line[4:].split())
            if key in entries:
                fail(f"line {lineno}: duplicate key")
            entries[key] = []
        elif line.startswith("parse "):
            m = _PARSE_RE.match(line)
            at_cut = truncated and lineno == len(lines)
            if key is None or m is None:
                fail("unexpected end of index" if at_cut else f"line {lineno}: malformed parse line")
            slots = tuple(m.group(1).split())
            anchors = tuple(int(a) for a in m.group(2).split())
            try:
                fs = parse_fs(m.group(3), line=lineno, col_offset=m.start(3))
            except FSError as exc:
                if at_cut:
                    fail("unexpected end of index")
                fail(f"line {lineno}: {exc}")
            if tagset is not None and tagset.generalize_key(slots) != key:
                fail(f"line {lineno}: slot tags do not generalize to key")
            entries[key].append(GeneralizedParse(key, slots, fs, anchors))
        else:
            fail(f"line {lineno}: unexpected line {line[:40]!r}")
    if truncated or len(entries) != nkeys or sum(map(len, entries.values())) != nparses:
        fail("unexpected end of index")
    return EblIndex(entries, meta)
