import json

import pytest

from eblparse.reports import CoverageReport, ParserTiming, TimingReport, measure_coverage, run_bench
from eblparse.resources import fixture_path
from eblparse.segment import Segment


def coverage_segments(bundle):
    text = fixture_path("coverage.txt").read_text(encoding="utf-8")
    return [s for line in text.splitlines() for s in bundle.segmenter.segment(line)]


class TestCoverage:
    def test_fixture_counts(self, bundle, parser):
        report, records = measure_coverage(parser, coverage_segments(bundle))
        assert report.total_multiword_segments == 10
        assert (report.pos_sequence_found, report.parse_found_given_sequence) == (8, 7)
        assert report.sequence_ratio == pytest.approx(0.8)
        assert report.parse_ratio == pytest.approx(0.875)
        assert report.third_stage_ratio is None and report.overall_third_stage is None
        assert report.recovered_by_deletion == 1
        assert (report.single_word_segments, report.single_word_parsed) == (3, 3)
        assert len(records) == 13

    def test_fixture_hand_enumeration(self, bundle, parser):
        _, records = measure_coverage(parser, coverage_segments(bundle))
        by_text = {r["segment"]: r for r in records}
        assert by_text["THESE DOG"]["status"] == "unify_fail" and by_text["THESE DOG"]["index_hit"]
        assert by_text["THE BIG DOG"]["used_deletions"] == [1] and not by_text["THE BIG DOG"]["index_hit"]
        assert by_text["DOG THE SEES"]["status"] == "lookup_miss"

    def test_empty(self, parser):
        report, records = measure_coverage(parser, [])
        assert records == []
        assert [r[2] for r in report.rows()] == ["n/a", "n/a", "n/a"]
        assert "overall third stage: n/a" in report.render()

    def test_table_shape(self, bundle, parser):
        report, _ = measure_coverage(parser, coverage_segments(bundle))
        labels = [r[0] for r in report.rows()]
        assert labels == [
            "POS sequence found (overall)",
            "Parse found (when sequence already found)",
            "Third stage found (when parse already found)",
        ]
        text = report.render()
        assert "80.0%" in text and "87.5%" in text and "8/10" in text and "7/8" in text

    def test_third_stage_predicate(self, bundle, parser):
        report, _ = measure_coverage(parser, coverage_segments(bundle), lambda seg, res: len(seg) <= 3)
        # parsed multi-word segments of at most three words: THE DOG SLEEPS, WITH A DOG
        assert report.third_stage_given_parse == 2
        assert report.overall_third_stage == pytest.approx(2 / 10)

    def test_product_identity(self):
        r = CoverageReport.from_ratios(0.786, 0.879, 0.899)
        assert abs(r.overall_third_stage - 0.621) <= 0.001

    def test_counts_identity(self):
        r = CoverageReport.from_counts(1000, 786, 691, 621)
        assert r.overall_third_stage == pytest.approx(0.621)

    def test_invariants(self):
        with pytest.raises(ValueError):
            CoverageReport.from_counts(10, 11, 0)
        with pytest.raises(ValueError):
            CoverageReport.from_ratios(1.2, 0.5)

    def test_json_and_text_from_one_value(self, bundle, parser):
        report, _ = measure_coverage(parser, coverage_segments(bundle))
        d = json.loads(json.dumps(report.to_dict()))
        assert d["pos_sequence_found"] == 8 and d["parse_ratio"] == report.parse_ratio

    def test_pool_same_records(self, bundle, parser):
        from concurrent.futures import ThreadPoolExecutor

        segs = coverage_segments(bundle)
        with ThreadPoolExecutor(4) as pool:
            assert measure_coverage(parser, segs, pool=pool) == measure_coverage(parser, segs)


class TestTiming:
    def test_stats(self):
        t = ParserTiming.of([1.0, 2.0, 3.0, 4.0, 100.0])
        assert t.mean_ms == pytest.approx(22.0)
        assert t.median_ms == 3.0
        assert t.p95_ms == 100.0

    def test_speedup(self):
        r = TimingReport(2, ParserTiming(10.0, 10.0, 10.0), ParserTiming(0.5, 0.5, 0.5))
        assert r.speedup_ratio == pytest.approx(20.0)
        assert "speedup: 20.0x" in r.render()

    def test_fake_clock(self, bundle, parser):
        ticks = iter(range(0, 10_000))

        def clock():
            return next(ticks) / 1000

        segs = [Segment(("THE", "DOG")), Segment(("OKAY",))]
        report, raw = run_bench(bundle.grammar, parser, segs, warmup=0, iterations=1, clock=clock)
        assert report.segments == 2 and len(raw) == 2
        assert report.ebl_instantiated == 2 and report.chart_parsed == 2
        assert all(r["chart_ms"] == pytest.approx(1.0) for r in raw)

    def test_bad_arguments(self, bundle, parser):
        segs = [Segment(("THE", "DOG"))]
        with pytest.raises(ValueError):
            run_bench(bundle.grammar, parser, segs, iterations=0)
        with pytest.raises(ValueError):
            run_bench(bundle.grammar, parser, segs, warmup=-1)
        with pytest.raises(ValueError):
            run_bench(bundle.grammar, parser, [])
