import pytest

from eblparse.chart import (
    Derivation,
    apply_rule,
    load_grammar,
    parse,
    parse_lattice,
    parse_tags,
    tree_structure,
)
from eblparse.fs import parse_fs, subsumes, unify
from eblparse.tagset import LoadError


def tags(bundle, *seq):
    return parse_tags(bundle.grammar, bundle.tagset, bundle.lexicon, list(seq))


def replay_category(grammar, d: Derivation, leaves):
    """Re-run the recorded rule applications bottom-up with plain apply_rule."""
    if d.rule is None:
        return leaves[d.start]
    kids = [replay_category(grammar, c, leaves) for c in d.children]
    return apply_rule(grammar.by_name[d.rule], kids)


def test_fixture_size(bundle):
    assert len(bundle.grammar.rules) <= 15
    assert len(bundle.lexicon.forms()) <= 60


def test_det_noun(bundle):
    (tree,) = tags(bundle, "determiner", "noun")
    assert tree.derivation.skeleton() == ("frag_np", (("np_det", (0, ("nbar_n", (1,)))),))
    assert tree.category.value(("lev",)) == "3"


def test_interjection_unary(bundle):
    (tree,) = tags(bundle, "interjection")
    assert tree.derivation.skeleton() == ("frag_interj", (0,))


def test_two_determiners(bundle):
    assert tags(bundle, "determiner", "determiner") == []


def test_long_sequence_completes(bundle):
    seq = ["determiner"] + ["adjective"] * 19 + ["noun"]
    assert len(seq) == 21
    trees = tags(bundle, *seq)
    assert len(trees) == 1
    assert len(trees[0].leaves) == 21


def test_pp_attachment_ambiguity(bundle):
    # the PP can attach to the object noun or to the verb phrase
    trees = tags(bundle, "pronoun", "verb_trans", "determiner", "noun", "noun_mod_prep", "determiner", "noun")
    assert len(trees) == 1
    trees = tags(bundle, "pronoun", "verb_trans", "determiner", "noun", "passive_prep", "determiner", "noun")
    assert len(trees) == 1
    # an unrestricted preposition is ambiguous
    lex = bundle.lexicon
    gen = [lex.tagword(t) for t in ("pronoun", "verb_trans", "determiner", "noun")]
    free_p = parse_fs("[lev:0, head:[cat:p, pform:[]], comp:[lev:2, head:[cat:n], comp:none], mod:[], gap:none, filler:none]")
    trees = parse(bundle.grammar, gen + [free_p] + [lex.tagword("determiner"), lex.tagword("noun")])
    assert len(trees) == 2


def test_empty_input(bundle):
    with pytest.raises(ValueError):
        parse(bundle.grammar, [])


def test_deterministic(bundle):
    seq = ("pronoun", "verb_trans", "determiner", "noun", "verb_mod_prep", "determiner", "noun")
    a, b = tags(bundle, *seq), tags(bundle, *seq)
    assert [t.root_fs for t in a] == [t.root_fs for t in b]
    assert [t.derivation for t in a] == [t.derivation for t in b]


def test_leaf_count_and_replay(bundle, ranked):
    g = bundle.grammar
    for seq, _ in ranked:
        for tree in tags(bundle, *seq):
            assert len(tree.leaves) == len(seq)
            assert sorted(leaf.start for leaf in tree.derivation.leaves()) == list(range(len(seq)))
            assert tree_structure(g, tree.derivation, tree.leaves) == tree.root_fs
            cat = replay_category(g, tree.derivation, tree.leaves)
            assert unify(cat, g.start) == tree.category
            # the tree structure's mother is the category
            assert tree.root_fs.sub(tree.root_fs.follow(("mother",))) == tree.category


def test_monotone_in_lexical_specificity(bundle, corpus_lines):
    """Real words never license a derivation the tag-words do not."""
    tagger = bundle.tagger
    seen = set()
    for line in corpus_lines:
        for seg in bundle.segmenter.segment(line):
            if seg.words in seen:
                continue
            seen.add(seg.words)
            seq = tagger.tag(seg)
            specific = parse_lattice(
                bundle.grammar, [[e.fs for e in tagger.entries(w, t)] for w, t in zip(seg.words, seq)]
            )
            general = tags(bundle, *seq)
            for e_list, t in zip([tagger.entries(w, t) for w, t in zip(seg.words, seq)], seq):
                assert all(subsumes(bundle.lexicon.tagword(t), e.fs) for e in e_list)
            assert {t.derivation.skeleton() for t in specific} <= {t.derivation.skeleton() for t in general}
        if len(seen) > 150:
            break


def test_lattice_choice_recorded(bundle):
    lex = bundle.lexicon
    runs = [e.fs for e in lex.lookup("RUN")]
    trees = parse_lattice(bundle.grammar, [runs, [lex.lookup("AWAY")[0].fs]])
    assert len(trees) == 1
    assert trees[0].choices == (1, 0)


class TestGrammarFile:
    def test_rule_parts(self, bundle):
        r = bundle.grammar.by_name["np_det"]
        assert r.arity == 2
        assert r.mother.value(("lev",)) == "2"
        # head is shared between the mother and the second daughter
        assert r.fs.follow(("mother", "head")) == r.fs.follow(("d2", "head"))

    def test_errors_listed(self):
        text = "start [lev:3]\nrule a -> [x:1] := [y:1]\nrule a -> [x:1] := [y:1]\nbogus\nrule c -> [x:1] := [a:1] [b:1] [c:1]\n"
        with pytest.raises(LoadError) as exc:
            load_grammar(text, "g.txt")
        msg = str(exc.value)
        assert "g.txt" in msg and "duplicate rule" in msg and "line 4" in msg and "more than two" in msg

    def test_no_rules(self):
        with pytest.raises(LoadError, match="no rules"):
            load_grammar("start [lev:3]\n")

    def test_default_start_is_top(self):
        g = load_grammar("rule u -> [lev:1] := [lev:0]\n")
        assert len(parse(g, [parse_fs("[lev:0]")])) == 1
