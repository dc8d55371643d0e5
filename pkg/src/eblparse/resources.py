"""Loading the grammar bundle (tagset, lexicon, grammar, retention, config)."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .chart import Grammar, load_grammar
from .config import Config, load_config
from .fs import RetentionSpec, load_retention
from .segment import RuleSegmenter, UnigramTagger
from .tagset import Lexicon, TagSet, load_lexicon, load_tagset

FIXTURE_FILES = {
    "tagset": "tagset.txt",
    "lexicon": "lexicon.txt",
    "grammar": "grammar.txt",
    "retention": "retention.txt",
    "config": "config.txt",
}


def fixture_path(name: str) -> Path:
    """Path of a file shipped in ``eblparse/data``."""
    return Path(str(resources.files("eblparse") / "data" / name))


@dataclass
class Bundle:
    tagset: TagSet
    lexicon: Lexicon
    grammar: Grammar
    retention: RetentionSpec
    config: Config

    @property
    def segmenter(self) -> RuleSegmenter:
        return RuleSegmenter(self.config.segmenter_markers)

    @property
    def tagger(self) -> UnigramTagger:
        return UnigramTagger(self.tagset, self.lexicon, self.config.tagger_default_tag)


def _read(path) -> str:
    return Path(path).read_text(encoding="utf-8")


def load_bundle(tagset=None, lexicon=None, grammar=None, retention=None, config=None) -> Bundle:
    """Load each file, falling back to the shipped fixture for any left as None."""
    paths = {
        "tagset": tagset, "lexicon": lexicon, "grammar": grammar,
        "retention": retention, "config": config,
    }
    paths = {k: Path(v) if v is not None else fixture_path(FIXTURE_FILES[k]) for k, v in paths.items()}
    ts = load_tagset(_read(paths["tagset"]), str(paths["tagset"]))
    lex = load_lexicon(_read(paths["lexicon"]), ts, str(paths["lexicon"]))
    gram = load_grammar(_read(paths["grammar"]), str(paths["grammar"]))
    spec = load_retention(_read(paths["retention"]))
    unknown = {f for p in spec.coindex_paths for f in p} - ts.feature_vocabulary
    if unknown:
        raise ValueError(f"retention spec uses undeclared features: {', '.join(sorted(unknown))}")
    cfg = load_config(_read(paths["config"]))
    return Bundle(ts, lex, gram, spec, cfg)


_FIXTURE: Bundle | None = None


def fixture() -> Bundle:
    """The shipped fixture bundle (cached)."""
    global _FIXTURE
    if _FIXTURE is None:
        _FIXTURE = load_bundle()
    return _FIXTURE
