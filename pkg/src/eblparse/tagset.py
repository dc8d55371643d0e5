"""Tag inventory, tag macros, the word lexicon and tag-word entries.

Tagset file (``#`` starts a comment)::

    features head cat num ...
    class preposition
    tag case_prep super=preposition
    tag adjective deletable
    macro case_prep [lev:0, head:[cat:p], ...]

Lexicon file::

    word THE tag=determiner
    word THESE tag=determiner fs=[head:[num:pl]]
    freq 'S aux_have 40
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

from .fs import FeatureStructure, FSError, generalize, parse_fs, render, subsumes, unify

TagSequence = tuple  # tuple[str, ...]


class LoadError(ValueError):
    """A data file failed validation; ``problems`` lists every violation."""

    def __init__(self, source: str, problems: Sequence[str]):
        self.source = source
        self.problems = list(problems)
        super().__init__(f"{source}: " + "; ".join(self.problems))


@dataclass(frozen=True)
class Tag:
    name: str
    superclass: str | None = None
    deletable: bool = False


@dataclass(frozen=True)
class LexicalEntry:
    form: str
    tag: str
    fs: FeatureStructure


@dataclass
class TagSet:
    tags: dict  # name -> Tag, declaration order
    macros: dict  # name -> FeatureStructure
    feature_vocabulary: frozenset
    classes: tuple = ()

    def __post_init__(self):
        self._subclasses: dict[str, list[str]] = {}
        for t in self.tags.values():
            if t.superclass:
                self._subclasses.setdefault(t.superclass, []).append(t.name)

    def __contains__(self, tag: str) -> bool:
        return tag in self.tags

    def generalize_tag(self, tag: str) -> str:
        """Superclass of ``tag``; key classes map to themselves."""
        t = self.tags.get(tag)
        if t is None:
            if tag in self.classes:
                return tag
            raise KeyError(f"undeclared tag {tag!r}")
        return t.superclass or tag

    def generalize_key(self, seq: Iterable[str]) -> TagSequence:
        return tuple(self.generalize_tag(t) for t in seq)

    def is_generalizable(self, key_tag: str) -> bool:
        """True for key classes that have declared subclasses."""
        return key_tag in self._subclasses

    def subclasses(self, key_tag: str) -> list[str]:
        return list(self._subclasses.get(key_tag, ()))

    def is_deletable(self, tag: str) -> bool:
        return self.tags[tag].deletable

    def macro(self, tag: str) -> FeatureStructure:
        return self.macros[tag]

    def check_sequence(self, seq: Sequence[str]) -> TagSequence:
        if not seq:
            raise ValueError("empty tag sequence")
        unknown = [t for t in seq if t not in self.tags]
        if unknown:
            raise ValueError(f"undeclared tags: {', '.join(unknown)}")
        return tuple(seq)

    def render(self) -> str:
        lines = ["features " + " ".join(sorted(self.feature_vocabulary))]
        lines += [f"class {c}" for c in self.classes]
        for t in self.tags.values():
            line = f"tag {t.name}"
            if t.superclass:
                line += f" super={t.superclass}"
            if t.deletable:
                line += " deletable"
            lines.append(line)
        lines += [f"macro {name} {render(fs)}" for name, fs in self.macros.items()]
        return "\n".join(lines) + "\n"

    def fingerprint(self) -> str:
        return hashlib.sha256(self.render().encode("utf-8")).hexdigest()[:16]


def _strip_comment(raw: str) -> str:
    # '#' followed by a digit is a reentrancy tag; any other '#' starts a comment
    for i, ch in enumerate(raw):
        if ch == "#" and (i + 1 == len(raw) or not raw[i + 1].isdigit()):
            return raw[:i].rstrip()
    return raw.rstrip()


def load_tagset(text: str, source: str = "<tagset>") -> TagSet:
    tags: dict[str, Tag] = {}
    macros: dict[str, FeatureStructure] = {}
    classes: list[str] = []
    vocab: set[str] | None = None
    problems: list[str] = []
    supers: list[tuple[int, str, str]] = []

    for lineno, line in _iter_directives(text):
        kind, _, rest = line.strip().partition(" ")
        rest = rest.strip()
        where = f"line {lineno}"
        if kind == "features":
            vocab = (vocab or set()) | set(rest.split())
        elif kind == "class":
            for name in rest.split():
                if name in classes:
                    problems.append(f"{where}: duplicate class {name!r}")
                classes.append(name)
        elif kind == "tag":
            parts = rest.split()
            if not parts:
                problems.append(f"{where}: tag without a name")
                continue
            name, superclass, deletable = parts[0], None, False
            for opt in parts[1:]:
                if opt.startswith("super="):
                    superclass = opt[len("super="):]
                elif opt == "deletable":
                    deletable = True
                else:
                    problems.append(f"{where}: unknown tag option {opt!r}")
            if name in tags:
                problems.append(f"{where}: duplicate tag {name!r}")
                continue
            tags[name] = Tag(name, superclass, deletable)
            if superclass:
                supers.append((lineno, name, superclass))
        elif kind == "macro":
            name, _, avm = rest.partition(" ")
            if name in macros:
                problems.append(f"{where}: duplicate macro {name!r}")
                continue
            try:
                col = line.index(avm) if avm else 0
                macros[name] = parse_fs(avm, line=lineno, col_offset=col)
            except FSError as exc:
                problems.append(f"macro {name!r}: {exc}")
        else:
            problems.append(f"{where}: unknown directive {kind!r}")

    if not tags:
        raise LoadError(source, ["no tags declared"])
    for lineno, name, sup in supers:
        if sup not in classes:
            problems.append(f"line {lineno}: tag {name!r} has unknown superclass {sup!r}")
        elif sup in tags:
            problems.append(f"line {lineno}: superclass {sup!r} of {name!r} is itself a tag")
    for name in tags:
        if name not in macros:
            problems.append(f"tag {name!r} has no macro")
    for name in macros:
        if name not in tags:
            problems.append(f"macro for undeclared tag {name!r}")
    used = set()
    for fs in macros.values():
        used |= fs.features()
    if vocab is None:
        vocab = used
    else:
        for name, fs in macros.items():
            extra = fs.features() - vocab
            if extra:
                problems.append(f"macro {name!r} uses undeclared features: {', '.join(sorted(extra))}")
    if problems:
        raise LoadError(source, problems)
    return TagSet(tags, macros, frozenset(vocab), tuple(classes))


def _iter_directives(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if line.strip():
            yield lineno, line


class Lexicon:
    """Word entries (case-insensitive lookup) plus unigram tag counts."""

    def __init__(self, tagset: TagSet, entries: Sequence[LexicalEntry], freq: dict | None = None):
        self.tagset = tagset
        self.entries = tuple(entries)
        self.freq: dict[tuple[str, str], int] = dict(freq or {})
        self._by_form: dict[str, list[LexicalEntry]] = {}
        self._by_tag: dict[str, list[LexicalEntry]] = {}
        for e in self.entries:
            self._by_form.setdefault(e.form.upper(), []).append(e)
            self._by_tag.setdefault(e.tag, []).append(e)
        self._tagwords: dict[str, FeatureStructure] = {}

    def __len__(self):
        return len(self.entries)

    def lookup(self, form: str) -> list[LexicalEntry]:
        return list(self._by_form.get(form.upper(), ()))

    def forms(self) -> list[str]:
        return list(self._by_form)

    def entries_for_tag(self, tag: str) -> list[LexicalEntry]:
        return list(self._by_tag.get(tag, ()))

    def tagword(self, tag: str) -> FeatureStructure:
        """Most general instance of every word that can take ``tag``."""
        fs = self._tagwords.get(tag)
        if fs is None:
            entries = self._by_tag.get(tag)
            if entries:
                fs = reduce(generalize, (e.fs for e in entries))
            else:
                fs = self.tagset.macro(tag)
            self._tagwords[tag] = fs
        return fs

    def tagword_entry(self, tag: str) -> LexicalEntry:
        return LexicalEntry(tag, tag, self.tagword(tag))


def tagword_entry(ts: TagSet, lex: Lexicon, tag: str) -> FeatureStructure:
    if tag not in ts:
        raise KeyError(f"undeclared tag {tag!r}")
    return lex.tagword(tag)


def load_lexicon(text: str, tagset: TagSet, source: str = "<lexicon>") -> Lexicon:
    entries: list[LexicalEntry] = []
    freq: dict[tuple[str, str], int] = {}
    problems: list[str] = []
    for lineno, line in _iter_directives(text):
        where = f"line {lineno}"
        kind, _, rest = line.strip().partition(" ")
        if kind == "word":
            head, sep, avm = rest.partition(" fs=")
            parts = head.split()
            if len(parts) != 2 or not parts[1].startswith("tag="):
                problems.append(f"{where}: expected 'word <form> tag=<tag> [fs=<AVM>]'")
                continue
            form, tag = parts[0], parts[1][len("tag="):]
            if tag not in tagset:
                problems.append(f"{where}: word {form!r} has undeclared tag {tag!r}")
                continue
            fs = tagset.macro(tag)
            if sep:
                try:
                    override = parse_fs(avm, line=lineno, col_offset=line.index(avm))
                except FSError as exc:
                    problems.append(f"word {form!r}: {exc}")
                    continue
                extra = override.features() - tagset.feature_vocabulary
                if extra:
                    problems.append(f"{where}: word {form!r} uses undeclared features: {', '.join(sorted(extra))}")
                    continue
                fs = unify(fs, override)
                if fs is None:
                    problems.append(f"{where}: entry for {form!r} clashes with macro {tag!r}")
                    continue
            assert subsumes(tagset.macro(tag), fs)
            entries.append(LexicalEntry(form, tag, fs))
        elif kind == "freq":
            parts = rest.split()
            if len(parts) != 3 or not parts[2].isdigit():
                problems.append(f"{where}: expected 'freq <word> <tag> <count>'")
                continue
            if parts[1] not in tagset:
                problems.append(f"{where}: freq line has undeclared tag {parts[1]!r}")
                continue
            freq[(parts[0].upper(), parts[1])] = int(parts[2])
        else:
            problems.append(f"{where}: unknown directive {kind!r}")
    if problems:
        raise LoadError(source, problems)
    return Lexicon(tagset, entries, freq)
