from hypothesis import given
from hypothesis import strategies as st

from eblparse.segment import RuleSegmenter, Segment, UnigramTagger, segment, split_clitic, tag


def test_two_sentences(bundle):
    segs = bundle.segmenter.segment("GOOD GIRL. HE'S GOT THE HEAD.")
    assert [s.words for s in segs] == [("GOOD", "GIRL"), ("HE", "'S", "GOT", "THE", "HEAD")]


def test_single_word(bundle):
    assert [s.words for s in bundle.segmenter.segment("OKAY.")] == [("OKAY",)]


def test_comma_keeps_vocative(bundle):
    segs = bundle.segmenter.segment("COME ON, CYNTHIA!")
    assert [s.words for s in segs] == [("COME", "ON", "CYNTHIA")]


def test_marker_splits(bundle):
    segs = bundle.segmenter.segment("OH, YOU'VE GOT A BOY!")
    assert [s.words for s in segs] == [("OH",), ("YOU", "'VE", "GOT", "A", "BOY")]


def test_marker_mid_segment(bundle):
    segs = bundle.segmenter.segment("SHOULD NOTIFY THE COUNTY, HUH? THANKS.")
    assert [s.text for s in segs] == ["SHOULD NOTIFY THE COUNTY", "HUH", "THANKS"]


def test_blank_line():
    assert segment("   ") == [] and segment("") == []


def test_spans_point_into_line():
    line = "GOOD GIRL. HE'S GOT THE HEAD."
    a, b = segment(line)
    assert line[a.source_span[0]:a.source_span[1]] == "GOOD GIRL"
    assert line[b.source_span[0]:b.source_span[1]] == "HE'S GOT THE HEAD"


def test_clitics():
    assert split_clitic("HE'S") == ["HE", "'S"]
    assert split_clitic("ISN'T") == ["IS", "N'T"]
    assert split_clitic("DOG") == ["DOG"]


@given(st.lists(st.sampled_from(["THE", "DOG", "OH", "RAN", ",", ".", "!", "HE'S", "?"]), max_size=20))
def test_segmentation_covers_all_words(tokens):
    line = " ".join(tokens)
    words = [w for t in tokens if t not in {",", ".", "!", "?"} for w in split_clitic(t)]
    segs = RuleSegmenter(["OH"]).segment(line)
    assert [w for s in segs for w in s.words] == words
    assert segs == RuleSegmenter(["OH"]).segment(line)


class TestTagger:
    def test_the_dog(self, bundle):
        assert bundle.tagger.tag(Segment(("the", "dog"))) == ("determiner", "noun")

    def test_unambiguous(self, bundle):
        assert bundle.tagger.tag(Segment(("QUICKLY",))) == ("adverb",)

    def test_unknown_gets_default(self, bundle):
        assert bundle.tagger.tag(Segment(("THE", "zzyx"))) == ("determiner", "noun")
        assert tag(bundle.tagset, bundle.lexicon, Segment(("zzyx",)), default_tag="adverb") == ("adverb",)

    def test_frequency_decides(self, bundle):
        from eblparse.tagset import load_lexicon

        text = "word SAW tag=noun\nword SAW tag=verb_trans\nfreq SAW verb_trans 5\nfreq SAW noun 2\n"
        lex = load_lexicon(text, bundle.tagset)
        assert UnigramTagger(bundle.tagset, lex).tag_word("saw") == "verb_trans"
        tie = load_lexicon("word SAW tag=noun\nword SAW tag=verb_trans\n", bundle.tagset)
        assert UnigramTagger(bundle.tagset, tie).tag_word("saw") == "noun"

    def test_one_tag_per_word(self, bundle, corpus_lines):
        for line in corpus_lines[:100]:
            for s in bundle.segmenter.segment(line):
                assert len(bundle.tagger.tag(s)) == len(s)

    def test_unknown_word_entries_are_tagwords(self, bundle):
        (e,) = bundle.tagger.entries("zzyx", "noun")
        assert e.fs == bundle.lexicon.tagword("noun")

    def test_homograph_entries_in_lexicon_order(self, bundle):
        entries = bundle.tagger.entries("RUN", "verb_part")
        assert [e.fs.value(("cform",)) for e in entries] == ["out", "away"]
