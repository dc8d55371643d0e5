"""Grammar specialization by explanation-based learning.

A chart parser over a small unification grammar parses frequent tag
sequences once; each parse is pruned and stored under its (generalized) tag
sequence, and at run time a segment is parsed by looking up its tags and
unifying the real lexical entries into the stored structure.
"""

from .chart import Grammar, ParseTree, load_grammar, parse, parse_lattice, parse_tags
from .config import Config, load_config
from .fs import (
    TOP,
    FeatureStructure,
    RetentionSpec,
    generalize,
    load_retention,
    parse_fs,
    render,
    restrict,
    subsumes,
    unify,
)
from .reports import CoverageReport, TimingReport
from .resources import Bundle, fixture, load_bundle
from .runtime import EblParser, ParseResult, deletion_candidates, instantiate, lookup, parse_segment
from .segment import RuleSegmenter, Segment, UnigramTagger
from .tagset import LexicalEntry, Lexicon, TagSet, load_lexicon, load_tagset
from .train import (
    EblIndex,
    GeneralizedParse,
    build_index,
    extract_sequences,
    index_stats,
    load_index,
    save_index,
    select_training,
)

__version__ = "0.1.0"
