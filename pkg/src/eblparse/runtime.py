"""Run-time EBL parsing: key lookup, lexical instantiation, deletion fallback."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Sequence

from .config import Config
from .fs import CycleError, FeatureStructure, Graph
from .segment import Segment, UnigramTagger
from .tagset import LexicalEntry, Lexicon, TagSequence, TagSet
from .train import EblIndex, GeneralizedParse

INSTANTIATED = "instantiated"
LOOKUP_MISS = "lookup_miss"
UNIFY_FAIL = "unify_fail"


class SlotClash(Exception):
    """A lexical entry did not unify into its slot."""

    def __init__(self, position: int):
        super().__init__(f"unification failed at slot {position}")
        self.position = position


@dataclass(frozen=True)
class ParseResult:
    status: str
    fs: FeatureStructure | None = None
    used_deletions: tuple = ()
    attempts: int = 0
    tags: tuple = ()
    parse: GeneralizedParse | None = None
    entries: tuple = ()  # the lexical entries that instantiated, by surviving position

    def __post_init__(self):
        if (self.fs is not None) != (self.status == INSTANTIATED):
            raise ValueError("fs must be present exactly when instantiated")


def compatible(ts: TagSet, stored: str, tag: str) -> bool:
    if stored == tag:
        return True
    sup = ts.tags[tag].superclass
    return sup is not None and sup == ts.tags[stored].superclass


def lookup(idx: EblIndex, ts: TagSet, seq: Sequence[str]) -> list[GeneralizedParse]:
    """Stored parses usable for ``seq``; parses with identical slot tags come first."""
    seq = tuple(seq)
    found = [
        gp for gp in idx.get(ts.generalize_key(seq))
        if all(compatible(ts, s, t) for s, t in zip(gp.slot_tags, seq))
    ]
    exact = [gp for gp in found if gp.slot_tags == seq]
    return exact + [gp for gp in found if gp.slot_tags != seq]


def instantiate(gp: GeneralizedParse, entries: Sequence[LexicalEntry | FeatureStructure]) -> FeatureStructure:
    """Unify each entry into its slot, left to right; raises SlotClash on failure."""
    if len(entries) != len(gp.slot_anchors):
        raise ValueError(f"{len(entries)} entries for {len(gp.slot_anchors)} slots")
    g = Graph()
    g.load(gp.root_fs)
    for pos, (anchor, entry) in enumerate(zip(gp.slot_anchors, entries)):
        fs = entry.fs if isinstance(entry, LexicalEntry) else entry
        if not g.unify(anchor, g.load(fs)):
            raise SlotClash(pos)
    try:
        return g.extract(0)
    except CycleError:
        raise SlotClash(len(entries) - 1) from None


def deletion_candidates(ts: TagSet, seq: Sequence[str], max_deletions: int) -> list[tuple[TagSequence, tuple]]:
    """Reduced sequences from deleting 1..max_deletions deletable positions.

    Fewer deletions come first, then leftmost deletions.  Deleting every
    position is never offered.
    """
    seq = tuple(seq)
    positions = [i for i, t in enumerate(seq) if ts.is_deletable(t)]
    out = []
    for k in range(1, min(max_deletions, len(positions)) + 1):
        for drop in itertools.combinations(positions, k):
            if len(drop) == len(seq):
                continue
            dropped = set(drop)
            out.append((tuple(t for i, t in enumerate(seq) if i not in dropped), drop))
    return out


class EblParser:
    """Parses segments against a loaded index; holds no per-call state."""

    def __init__(self, idx: EblIndex, ts: TagSet, lex: Lexicon, cfg: Config = Config(), tagger=None):
        self.idx = idx
        self.ts = ts
        self.lex = lex
        self.cfg = cfg
        self.tagger = tagger or UnigramTagger(ts, lex, cfg.tagger_default_tag)

    def parse_segment(self, seg: Segment, max_deletions: int | None = None) -> ParseResult:
        if max_deletions is None:
            max_deletions = self.cfg.runtime_max_deletions
        budget = self.cfg.runtime_time_budget_ms
        deadline = time.perf_counter() + budget / 1000 if budget and budget > 0 else None

        tags = self.tagger.tag(seg)
        options = [self.tagger.entries(w, t) for w, t in zip(seg.words, tags)]
        attempts = 0
        saw_candidates = False

        variants = [(tags, ())]
        candidates = lookup(self.idx, self.ts, tags)
        if not candidates:
            variants += deletion_candidates(self.ts, tags, max_deletions)

        for vi, (seq, dropped) in enumerate(variants):
            if vi:
                candidates = lookup(self.idx, self.ts, seq)
            if not candidates:
                continue
            saw_candidates = True
            kept = [opts for i, opts in enumerate(options) if i not in dropped]
            for gp in candidates:
                for combo in itertools.product(*kept):
                    if deadline is not None and time.perf_counter() > deadline:
                        return ParseResult(LOOKUP_MISS, attempts=attempts, tags=tags)
                    attempts += 1
                    try:
                        fs = instantiate(gp, combo)
                    except SlotClash:
                        continue
                    return ParseResult(INSTANTIATED, fs, tuple(dropped), attempts, tags, gp, combo)
            if not dropped:
                # deletion is only a remedy for lookup misses
                break
        status = UNIFY_FAIL if saw_candidates else LOOKUP_MISS
        return ParseResult(status, attempts=attempts, tags=tags)


def parse_segment(idx: EblIndex, ts: TagSet, lex: Lexicon, seg: Segment, cfg: Config = Config()) -> ParseResult:
    return EblParser(idx, ts, lex, cfg).parse_segment(seg)
