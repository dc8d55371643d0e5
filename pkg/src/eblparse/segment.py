"""Rule-based segmenter and dictionary tagger.

Segments end at ``.``, ``!`` and ``?``; a discourse marker (``OH``,
``OKAY`` ...) always forms a segment of its own.  Commas and other
punctuation are dropped without splitting, so a vocative stays attached
(``COME ON, CYNTHIA!`` is one segment).  Clitics are split off their host:
``HE'S`` becomes ``HE 'S`` and ``ISN'T`` becomes ``IS N'T``.

The tagger gives each word the tag with the highest unigram count among its
lexicon entries (ties go to lexicon order); unknown words get the default
tag.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Protocol

from .tagset import LexicalEntry, Lexicon, TagSequence, TagSet

_TOKEN_RE = re.compile(r"[A-Za-z0-9]+(?:'[A-Za-z]+)?|'[A-Za-z]+|[.!?]")
_FINAL = frozenset(".!?")


@dataclass(frozen=True)
class Segment:
    words: tuple
    source_span: tuple = (0, 0)

    def __post_init__(self):
        if not self.words:
            raise ValueError("empty segment")

    def __len__(self):
        return len(self.words)

    @property
    def text(self) -> str:
        return " ".join(self.words)


def split_clitic(token: str) -> list[str]:
    if "'" not in token or token.startswith("'"):
        return [token]
    if token.upper().endswith("N'T") and len(token) > 3:
        return [token[:-3], token[-3:]]
    host, _, rest = token.partition("'")
    return [host, "'" + rest]


class Segmenter(Protocol):
    def segment(self, line: str) -> list[Segment]: ...


class Tagger(Protocol):
    def tag(self, seg: Segment) -> TagSequence: ...


class RuleSegmenter:
    def __init__(self, markers: Iterable[str] = ()):
        self.markers = frozenset(m.upper() for m in markers)

    def segment(self, line: str) -> list[Segment]:
        segments: list[Segment] = []
        words: list[str] = []
        span = [0, 0]

        def close():
            if words:
                segments.append(Segment(tuple(words), tuple(span)))
                words.clear()

        for m in _TOKEN_RE.finditer(line):
            tok = m.group()
            if tok in _FINAL:
                close()
                continue
            if tok.upper() in self.markers:
                close()
                segments.append(Segment((tok,), (m.start(), m.end())))
                continue
            if not words:
                span[0] = m.start()
            span[1] = m.end()
            words.extend(split_clitic(tok))
        close()
        return segments


class UnigramTagger:
    def __init__(self, tagset: TagSet, lexicon: Lexicon, default_tag: str = "noun"):
        if default_tag not in tagset:
            raise ValueError(f"default tag {default_tag!r} is not declared")
        self.tagset = tagset
        self.lexicon = lexicon
        self.default_tag = default_tag

    def tag_word(self, word: str) -> str:
        entries = self.lexicon.lookup(word)
        if not entries:
            return self.default_tag
        tags = list(dict.fromkeys(e.tag for e in entries))
        freq = self.lexicon.freq
        key = word.upper()
        # max() keeps the first of equal counts, i.e. lexicon order
        return max(tags, key=lambda t: freq.get((key, t), 0))

    def tag(self, seg: Segment) -> TagSequence:
        return tuple(self.tag_word(w) for w in seg.words)

    def entries(self, word: str, tag: str) -> list[LexicalEntry]:
        """Entries for ``word`` under ``tag``; the tag-word entry for unknown words."""
        found = [e for e in self.lexicon.lookup(word) if e.tag == tag]
        return found or [LexicalEntry(word, tag, self.lexicon.tagword(tag))]


def segment(line: str, markers: Iterable[str] = ()) -> list[Segment]:
    return RuleSegmenter(markers).segment(line)


def tag(ts: TagSet, lex: Lexicon, seg: Segment, default_tag: str = "noun") -> TagSequence:
    return UnigramTagger(ts, lex, default_tag).tag(seg)
