"""Coverage and timing reports, plus the harnesses that fill them in.

Each report is a single value; the text table and the JSON record are both
rendered from it, so the two outputs cannot drift apart.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import asdict, dataclass
from typing import Callable, Iterable, Sequence

from .chart import Grammar, parse_lattice
from .fs import render
from .runtime import INSTANTIATED, EblParser, ParseResult, lookup
from .segment import Segment

ThirdStage = Callable[[Segment, ParseResult], bool]


def _ratio(num: int | None, den: int | None) -> float | None:
    if num is None or not den:
        return None
    return num / den


def _pct(r: float | None) -> str:
    return "n/a" if r is None else f"{100 * r:.1f}%"


@dataclass(frozen=True)
class CoverageReport:
    """Three-level coverage over multi-word segments.

    Ratios are conditional: the parse ratio is over segments whose sequence
    was found, the third-stage ratio over segments that parsed.  The overall
    third-stage ratio is the product of the three.
    """

    total_multiword_segments: int = 0
    pos_sequence_found: int | None = 0
    parse_found_given_sequence: int | None = 0
    third_stage_given_parse: int | None = None
    sequence_ratio: float | None = None
    parse_ratio: float | None = None
    third_stage_ratio: float | None = None
    recovered_by_deletion: int = 0
    single_word_segments: int = 0
    single_word_parsed: int = 0

    def __post_init__(self):
        for r in (self.sequence_ratio, self.parse_ratio, self.third_stage_ratio):
            if r is not None and not 0 <= r <= 1:
                raise ValueError(f"ratio {r} outside [0, 1]")
        chain = [self.total_multiword_segments, self.pos_sequence_found,
                 self.parse_found_given_sequence, self.third_stage_given_parse]
        for outer, inner in zip(chain, chain[1:]):
            if outer is not None and inner is not None and inner > outer:
                raise ValueError("conditional count exceeds its conditioning count")

    @classmethod
    def from_counts(
        cls,
        total: int,
        found: int,
        parsed: int,
        third: int | None = None,
        recovered_by_deletion: int = 0,
        single_word_segments: int = 0,
        single_word_parsed: int = 0,
    ) -> CoverageReport:
        return cls(
            total, found, parsed, third,
            _ratio(found, total), _ratio(parsed, found), _ratio(third, parsed),
            recovered_by_deletion, single_word_segments, single_word_parsed,
        )

    @classmethod
    def from_ratios(cls, sequence: float, parse: float, third: float | None = None) -> CoverageReport:
        """A report known only by its conditionals (no underlying counts)."""
        return cls(0, None, None, None, sequence, parse, third)

    @property
    def overall_third_stage(self) -> float | None:
        if None in (self.sequence_ratio, self.parse_ratio, self.third_stage_ratio):
            return None
        return self.sequence_ratio * self.parse_ratio * self.third_stage_ratio

    def rows(self) -> list[tuple[str, str, str]]:
        def count(n, d):
            return "" if n is None or d is None else f"{n}/{d}"

        return [
            ("POS sequence found (overall)",
             count(self.pos_sequence_found, self.total_multiword_segments), _pct(self.sequence_ratio)),
            ("Parse found (when sequence already found)",
             count(self.parse_found_given_sequence, self.pos_sequence_found), _pct(self.parse_ratio)),
            ("Third stage found (when parse already found)",
             count(self.third_stage_given_parse, self.parse_found_given_sequence), _pct(self.third_stage_ratio)),
        ]

    def render(self) -> str:
        width = max(len(r[0]) for r in self.rows())
        out = [f"multi-word segments: {self.total_multiword_segments}"]
        for label, cnt, pct in self.rows():
            out.append(f"{label:<{width}}  {cnt:>9}  {pct:>6}")
        out.append(f"overall third stage: {_pct(self.overall_third_stage)}")
        out.append(f"recovered by deletion after a lookup miss: {self.recovered_by_deletion}")
        out.append(f"single-word segments: {self.single_word_segments} (parsed {self.single_word_parsed})")
        return "\n".join(out) + "\n"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["overall_third_stage"] = self.overall_third_stage
        return d


def segment_record(seg: Segment, result: ParseResult) -> dict:
    return {
        "segment": seg.text,
        "tags": list(result.tags),
        "status": result.status,
        "used_deletions": list(result.used_deletions),
        "attempts": result.attempts,
        "fs": render(result.fs) if result.fs is not None else None,
    }


def measure_coverage(
    parser: EblParser,
    segments: Iterable[Segment],
    third_stage: ThirdStage | None = None,
    pool=None,
) -> tuple[CoverageReport, list[dict]]:
    """Run every segment through ``parser``; returns the report and per-segment records.

    Level-one and level-two counts use no deletions.  A multi-word lookup
    miss is retried with the configured deletions and counted apart.
    ``pool`` may be an executor whose ``map`` preserves order.
    """
    segments = list(segments)
    mapper = pool.map if pool is not None else map
    outcomes = list(mapper(lambda s: _classify(parser, s, third_stage), segments))

    total = found = parsed = recovered = single = single_parsed = 0
    third = 0 if third_stage is not None else None
    records = []
    for seg, (hit, strict, relaxed, passed) in zip(segments, outcomes):
        rec = segment_record(seg, relaxed)
        rec["index_hit"] = hit
        records.append(rec)
        if len(seg) == 1:
            single += 1
            single_parsed += relaxed.status == INSTANTIATED
            continue
        total += 1
        if hit:
            found += 1
            if strict.status == INSTANTIATED:
                parsed += 1
                if third is not None and passed:
                    third += 1
        elif relaxed.status == INSTANTIATED:
            recovered += 1
    report = CoverageReport.from_counts(total, found, parsed, third, recovered, single, single_parsed)
    return report, records


def _classify(parser: EblParser, seg: Segment, third_stage):
    tags = parser.tagger.tag(seg)
    hit = bool(lookup(parser.idx, parser.ts, tags))
    strict = parser.parse_segment(seg, max_deletions=0)
    relaxed = strict if hit else parser.parse_segment(seg)
    passed = bool(third_stage(seg, strict)) if third_stage and strict.status == INSTANTIATED else False
    return hit, strict, relaxed, passed


# -- timing ------------------------------------------------------------------------


@dataclass(frozen=True)
class ParserTiming:
    mean_ms: float
    median_ms: float
    p95_ms: float

    @classmethod
    def of(cls, samples_ms: Sequence[float]) -> ParserTiming:
        if not samples_ms:
            raise ValueError("no timings")
        ordered = sorted(samples_ms)
        # nearest-rank percentile
        rank = max(1, -(-95 * len(ordered) // 100))
        return cls(statistics.fmean(ordered), statistics.median(ordered), ordered[rank - 1])


@dataclass(frozen=True)
class TimingReport:
    segments: int
    chart: ParserTiming
    ebl: ParserTiming
    ebl_instantiated: int = 0
    chart_parsed: int = 0

    @property
    def speedup_ratio(self) -> float:
        return self.chart.mean_ms / self.ebl.mean_ms if self.ebl.mean_ms else float("inf")

    def render(self) -> str:
        out = [f"segments: {self.segments}", f"{'parser':<8} {'mean ms':>10} {'median ms':>10} {'p95 ms':>10}"]
        for name, t in (("chart", self.chart), ("ebl", self.ebl)):
            out.append(f"{name:<8} {t.mean_ms:>10.4f} {t.median_ms:>10.4f} {t.p95_ms:>10.4f}")
        out.append(f"speedup: {self.speedup_ratio:.1f}x")
        out.append(f"ebl instantiated: {self.ebl_instantiated}/{self.segments}; "
                   f"chart parsed: {self.chart_parsed}/{self.segments}")
        return "\n".join(out) + "\n"

    def to_dict(self) -> dict:
        return {
            "segments": self.segments,
            "chart": asdict(self.chart),
            "ebl": asdict(self.ebl),
            "speedup_ratio": self.speedup_ratio,
            "ebl_instantiated": self.ebl_instantiated,
            "chart_parsed": self.chart_parsed,
        }


def chart_parse_segment(grammar: Grammar, parser: EblParser, seg: Segment):
    """Full chart parse of a segment over the tagger's lexical entries."""
    tags = parser.tagger.tag(seg)
    return parse_lattice(grammar, [[e.fs for e in parser.tagger.entries(w, t)] for w, t in zip(seg.words, tags)])


def run_bench(
    grammar: Grammar,
    parser: EblParser,
    segments: Sequence[Segment],
    warmup: int = 1,
    iterations: int = 3,
    clock: Callable[[], float] = time.perf_counter,
) -> tuple[TimingReport, list[dict]]:
    """Time both parsers on the same segments.

    Each sample is the per-segment mean over ``iterations`` calls after
    ``warmup`` untimed calls.  Tagging is inside the timed region on both sides.
    """
    if iterations < 1:
        raise ValueError("iterations must be at least 1")
    if warmup < 0:
        raise ValueError("warmup must be non-negative")
    if not segments:
        raise ValueError("no segments to time")

    def timed(fn, seg):
        for _ in range(warmup):
            fn(seg)
        t0 = clock()
        for _ in range(iterations):
            out = fn(seg)
        return (clock() - t0) * 1000 / iterations, out

    raw = []
    chart_ms, ebl_ms = [], []
    n_ebl = n_chart = 0
    for seg in segments:
        c_ms, trees = timed(lambda s: chart_parse_segment(grammar, parser, s), seg)
        e_ms, result = timed(parser.parse_segment, seg)
        chart_ms.append(c_ms)
        ebl_ms.append(e_ms)
        n_chart += bool(trees)
        n_ebl += result.status == INSTANTIATED
        raw.append({
            "segment": seg.text,
            "chart_ms": c_ms,
            "chart_parses": len(trees),
            "ebl_ms": e_ms,
            "ebl_status": result.status,
        })
    report = TimingReport(len(segments), ParserTiming.of(chart_ms), ParserTiming.of(ebl_ms), n_ebl, n_chart)
    return report, raw
