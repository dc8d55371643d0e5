"""``eblparse`` command line: train, parse, coverage, bench, stats.

Exit codes: 0 success, 1 coverage/bench finished with misses, 2 usage or
configuration fault, 3 data fault (corrupt index, undecodable corpus).
"""

from __future__ import annotations

import argparse
import importlib
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .config import ConfigError
from .fs import FSError
from .reports import CoverageReport, measure_coverage, run_bench, segment_record
from .resources import Bundle, load_bundle
from .runtime import EblParser
from .tagset import LoadError
from .train import (
    CorpusError,
    EblIndex,
    IndexFormatError,
    IndexMeta,
    build_index,
    dump_index,
    extract_sequences,
    index_stats,
    load_index,
    select_training,
)

EXIT_OK, EXIT_MISSES, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 3

log = logging.getLogger("eblparse")


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


# -- helpers ---------------------------------------------------------------------


def _existing(path: str | None, what: str) -> Path | None:
    if path is None:
        return None
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"{what} file not found: {p}")
    return p


def _bundle(args) -> Bundle:
    paths = {
        name: _existing(getattr(args, name), name)
        for name in ("tagset", "lexicon", "grammar", "retention", "config")
    }
    try:
        return load_bundle(**paths)
    except (LoadError, ConfigError, FSError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _read_text(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    p = _existing(path, "input")
    try:
        return p.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise DataError(f"{p}: not valid UTF-8 ({exc.reason})") from None


def _load_index(args, bundle: Bundle) -> EblIndex:
    p = _existing(args.index, "index")
    if p is None:
        raise UsageError("--index is required")
    try:
        return load_index(p.read_text(encoding="utf-8"), bundle.tagset, bundle.retention)
    except (IndexFormatError, FSError, UnicodeDecodeError) as exc:
        raise DataError(f"{p}: {exc}") from None


def _segments(bundle: Bundle, text: str):
    return [seg for line in text.splitlines() for seg in bundle.segmenter.segment(line)]


def _parser(args, bundle: Bundle, idx: EblIndex) -> EblParser:
    cfg = bundle.config
    if getattr(args, "max_deletions", None) is not None:
        cfg = cfg.with_overrides(runtime_max_deletions=args.max_deletions)
    return EblParser(idx, bundle.tagset, bundle.lexicon, cfg, bundle.tagger)


class _Out:
    """Writes to --out or stdout."""

    def __init__(self, path: str | None):
        self.path = path
        self.chunks: list[str] = []

    def write(self, text: str):
        self.chunks.append(text)

    def jsonl(self, record: dict):
        self.chunks.append(json.dumps(record, sort_keys=True) + "\n")

    def close(self):
        text = "".join(self.chunks)
        if self.path:
            Path(self.path).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)


def _third_stage(spec: str | None):
    if not spec:
        return None
    module, sep, name = spec.partition(":")
    if not sep:
        raise UsageError("--third-stage must look like module:function")
    try:
        return getattr(importlib.import_module(module), name)
    except (ImportError, AttributeError) as exc:
        raise UsageError(f"cannot load third-stage predicate {spec!r}: {exc}") from None


# -- subcommands ---------------------------------------------------------------------


def cmd_train(args) -> int:
    if not args.out:
        raise UsageError("train needs --out (the index file to write)")
    bundle = _bundle(args)
    corpus = _existing(args.corpus, "corpus")
    top = args.top if args.top is not None else bundle.config.train_top
    if top < 0:
        raise UsageError("--top must be non-negative")
    if top == 0:
        log.warning("--top 0: writing an empty index")
    try:
        with corpus.open("rb") as fh:
            ranked = extract_sequences(fh, bundle.segmenter, bundle.tagger)
    except CorpusError as exc:
        raise DataError(f"{corpus}: {exc}") from None
    training = select_training(ranked, top)
    idx = build_index(
        training, bundle.grammar, bundle.tagset, bundle.lexicon, bundle.retention, bundle.config,
        workers=args.workers,
    )
    Path(args.out).write_text(dump_index(idx), encoding="utf-8")
    sidecar = Path(f"{args.out}.uncovered")
    sidecar.write_text("".join(f"{' '.join(seq)}\t{reason}\n" for seq, reason in idx.uncovered), encoding="utf-8")

    stats = index_stats(idx)
    out = _Out(None)
    if args.emit == "jsonl":
        out.jsonl({
            "record": "train",
            "index": str(args.out),
            "trained": stats.trained,
            "parsed": stats.parsed,
            "keys": stats.keys,
            "parses": stats.parses,
            "uncovered": [{"sequence": list(s), "reason": r} for s, r in idx.uncovered],
        })
    else:
        out.write(f"wrote {args.out} (uncovered sequences in {sidecar})\n")
        out.write(f"trained {stats.trained}  parsed {stats.parsed}  keys {stats.keys}  parses {stats.parses}\n")
        for seq, reason in idx.uncovered:
            out.write(f"uncovered: {' '.join(seq)} ({reason})\n")
    out.close()
    return EXIT_OK


def cmd_parse(args) -> int:
    bundle = _bundle(args)
    idx = _load_index(args, bundle)
    parser = _parser(args, bundle, idx)
    out = _Out(args.out)
    for seg in _segments(bundle, _read_text(args.input)):
        result = parser.parse_segment(seg)
        rec = segment_record(seg, result)
        if args.emit == "jsonl":
            out.jsonl(rec)
        else:
            dels = ",".join(map(str, result.used_deletions)) or "-"
            out.write(f"{seg.text}\t{' '.join(result.tags)}\t{result.status}\tdeleted={dels}\n")
            if rec["fs"] is not None:
                out.write(f"  {rec['fs']}\n")
    out.close()
    return EXIT_OK


def cmd_coverage(args) -> int:
    bundle = _bundle(args)
    idx = _load_index(args, bundle)
    parser = _parser(args, bundle, idx)
    segments = _segments(bundle, _read_text(args.input))
    third = _third_stage(args.third_stage)
    if args.workers > 1:
        with ThreadPoolExecutor(args.workers) as pool:
            report, records = measure_coverage(parser, segments, third, pool)
    else:
        report, records = measure_coverage(parser, segments, third)
    out = _Out(args.out)
    if args.emit == "jsonl":
        for rec in records:
            out.jsonl(rec)
        out.jsonl({"record": "coverage", **report.to_dict()})
    else:
        out.write(report.render())
    out.close()
    return EXIT_MISSES if _has_misses(report) else EXIT_OK


def _has_misses(report: CoverageReport) -> bool:
    return (report.pos_sequence_found != report.total_multiword_segments
            or report.parse_found_given_sequence != report.pos_sequence_found
            or report.single_word_parsed != report.single_word_segments)


def cmd_bench(args) -> int:
    if args.iterations < 1:
        raise UsageError("--iterations must be at least 1")
    if args.warmup < 0:
        raise UsageError("--warmup must be non-negative")
    bundle = _bundle(args)
    idx = _load_index(args, bundle)
    parser = _parser(args, bundle, idx)
    segments = _segments(bundle, _read_text(args.input))
    if not segments:
        raise UsageError("no segments to benchmark")
    report, raw = run_bench(bundle.grammar, parser, segments, args.warmup, args.iterations)
    out = _Out(args.out)
    if args.emit == "jsonl":
        for rec in raw:
            out.jsonl(rec)
        out.jsonl({"record": "timing", **report.to_dict()})
    else:
        out.write(report.render())
    out.close()
    return EXIT_MISSES if report.ebl_instantiated < report.segments else EXIT_OK


def cmd_stats(args) -> int:
    synthetic = [args.trained, args.parsed, args.keys, args.parses]
    if any(v is not None for v in synthetic):
        if args.index:
            raise UsageError("give either --index or synthetic counts, not both")
        if None in (args.parsed, args.keys, args.parses):
            raise UsageError("synthetic counts need --parsed, --keys and --parses")
        idx = EblIndex(meta=IndexMeta(trained=args.trained or 0, parsed=args.parsed, keys=args.keys, parses=args.parses))
    else:
        idx = _load_index(args, _bundle(args))
    s = index_stats(idx)
    out = _Out(args.out)
    if args.emit == "jsonl":
        out.jsonl({"record": "stats", "trained": s.trained, "parsed": s.parsed, "keys": s.keys,
                   "parses": s.parses, "avg_parses_per_key": round(s.avg_parses_per_key, 2),
                   "key_reduction_ratio": round(s.key_reduction_ratio, 4)})
    else:
        out.write(
            f"trained sequences: {s.trained}\n"
            f"parsed sequences:  {s.parsed}\n"
            f"keys:              {s.keys}\n"
            f"stored parses:     {s.parses}\n"
            f"avg parses/key:    {s.avg_parses_per_key:.2f}\n"
            f"key reduction:     {100 * s.key_reduction_ratio:.2f}%\n"
        )
    out.close()
    return EXIT_OK


# -- argument parsing -------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("grammar bundle (defaults to the shipped fixture)")
    for name in ("tagset", "lexicon", "grammar", "retention", "config"):
        g.add_argument(f"--{name}", metavar="PATH")
    common.add_argument("--emit", choices=("text", "jsonl"), default="text")
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = _Parser(prog="eblparse", description="EBL-specialized unification parser toolkit")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("train", parents=[common], help="build an index from a corpus")
    p.add_argument("--corpus", required=True, metavar="PATH")
    p.add_argument("--top", type=int, help="number of most frequent tag sequences (default from config)")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_train)

    for name, func, hlp in (
        ("parse", cmd_parse, "parse segments with an index"),
        ("coverage", cmd_coverage, "three-level coverage report"),
        ("bench", cmd_bench, "time chart parsing against EBL parsing"),
    ):
        p = sub.add_parser(name, parents=[common], help=hlp)
        p.add_argument("input", nargs="?", default="-", help="text file, or - for stdin")
        p.add_argument("--index", metavar="PATH")
        p.add_argument("--max-deletions", type=int)
        p.set_defaults(func=func)
        if name == "coverage":
            p.add_argument("--third-stage", metavar="MODULE:FUNC",
                           help="predicate(segment, result) -> bool for the third coverage level")
            p.add_argument("--workers", type=int, default=1)
        if name == "bench":
            p.add_argument("--warmup", type=int, default=1)
            p.add_argument("--iterations", type=int, default=3)

    p = sub.add_parser("stats", parents=[common], help="index statistics")
    p.add_argument("--index", metavar="PATH")
    for flag in ("trained", "parsed", "keys", "parses"):
        p.add_argument(f"--{flag}", type=int, help="synthetic count instead of an index file")
    p.set_defaults(func=cmd_stats)
    return ap


def main(argv=None) -> int:
    logging.basicConfig(format="eblparse: %(levelname)s: %(message)s", level=logging.WARNING)
    try:
        args = build_parser().parse_args(argv)
        if args.verbose:
            logging.getLogger().setLevel(logging.INFO)
        return args.func(args)
    except UsageError as exc:
        print(f"eblparse: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"eblparse: data error: {exc}", file=sys.stderr)
        return EXIT_DATA

