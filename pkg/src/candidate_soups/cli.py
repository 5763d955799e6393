"""Batch command-line interface over line-delimited JSON.

Commands: fuse | npd | synth | bleu | compare | ngram-train.  Input records
are processed one line at a time (no whole-file buffering) and output order
matches input order.  Per-line failures are reported to stderr as JSON
lines ``{"line": N, "error": "..."}``; the process exits 0 on success, 1
when any line failed, 2 on usage errors.  The environment variable
``CDS_SCORE_FLOOR`` overrides the default score floor.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from collections.abc import Iterator, Sequence
from contextlib import contextmanager
from dataclasses import replace
from typing import IO

from .bleu import BleuAccumulator, bleu_with_smoothing, corpus_bleu
from .candidates import (
    DEFAULT_SCORE_FLOOR,
    CandidateSet,
    ScoredCandidate,
    remove_adjacent_duplicates,
    validate,
)
from .errors import CdsError, EmptyReference
from .fusion import FusionResult, candidate_soups
from .lattice_oracle import build_lattice, oracle_best
from .scoring import (
    NGramScorer,
    Scorer,
    SelfScorer,
    load_ngram,
    npd_select,
    rescore_set,
    save_ngram,
    train_ngram,
)
from .synth import NoiseConfig, generate_candidates


def _score_floor() -> float:
    raw = os.environ.get("CDS_SCORE_FLOOR")
    return float(raw) if raw else DEFAULT_SCORE_FLOOR


def _make_scorer(selector: str, score_floor: float) -> Scorer:
    if selector == "self":
        return SelfScorer()
    if selector.startswith("ngram:"):
        return NGramScorer(load_ngram(selector[len("ngram:") :]), score_floor)
    raise ValueError(f"unknown scorer {selector!r}; expected 'self' or 'ngram:<model-path>'")


def parse_candidate_record(obj: dict, score_floor: float) -> CandidateSet:
    """Turn one wire-format record into a validated CandidateSet."""
    if not isinstance(obj, dict):
        raise ValueError("record must be a JSON object")
    try:
        ident = obj["id"]
        raw_candidates = obj["candidates"]
    except KeyError as exc:
        raise ValueError(f"record is missing key {exc}") from None
    if not isinstance(ident, str):
        raise ValueError("'id' must be a string")
    source_text = obj.get("source")
    source = tuple(source_text.split()) if isinstance(source_text, str) else None
    candidates = []
    for cand in raw_candidates:
        candidates.append(ScoredCandidate(tuple(cand["tokens"]), tuple(cand["scores"])))
    return validate(CandidateSet(ident, tuple(candidates), source), score_floor)


def candidate_record(cset: CandidateSet) -> dict:
    record: dict = {"id": cset.id}
    if cset.source is not None:
        record["source"] = " ".join(cset.source)
    record["candidates"] = [
        {"tokens": list(c.tokens), "scores": list(c.scores)} for c in cset.candidates
    ]
    return record


def fusion_record(ident: str, result: FusionResult, method: str, with_trace: bool) -> dict:
    record: dict = {"id": ident, "output": list(result.tokens), "method": method}
    if with_trace:
        record["trace"] = [
            {
                "region": choice.region_index,
                "chosen": choice.chosen,
                "scores": list(choice.segment_scores),
            }
            for choice in result.trace
        ]
    return record


def _dump(obj: dict, out: IO[str]) -> None:
    out.write(json.dumps(obj, ensure_ascii=False))
    out.write("\n")


def _diagnostic(err: IO[str], line_no: int, message: str) -> None:
    _dump({"line": line_no, "error": message}, err)


@contextmanager
def _open_input(path: str, stdin: IO[str]):
    if path == "-":
        yield stdin
    else:
        with open(path, "r", encoding="utf-8") as fp:
            yield fp


def _truncated(cset: CandidateSet, max_candidates: int | None) -> CandidateSet:
    if max_candidates is None or len(cset.candidates) <= max_candidates:
        return cset
    return CandidateSet(cset.id, cset.candidates[:max_candidates], cset.source)


def _iter_records(
    stream: IO[str], err: IO[str], score_floor: float
) -> Iterator[tuple[int, CandidateSet | None]]:
    """Yield (line number, parsed set) pairs; parse failures yield None."""
    for line_no, line in enumerate(stream, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            cset = parse_candidate_record(json.loads(line), score_floor)
        except (CdsError, ValueError, KeyError, TypeError) as exc:
            _diagnostic(err, line_no, str(exc))
            yield line_no, None
            continue
        yield line_no, cset


def cmd_fuse(args: argparse.Namespace, stdin: IO[str], stdout: IO[str], stderr: IO[str]) -> int:
    floor = _score_floor()
    scorer = _make_scorer(args.scorer, floor)
    failed = False
    with _open_input(args.input, stdin) as stream:
        for line_no, cset in _iter_records(stream, stderr, floor):
            if cset is None:
                failed = True
                continue
            cset = _truncated(cset, args.max_candidates)
            try:
                result = candidate_soups(cset, scorer, floor, dedup=not args.no_dedup)
                if args.oracle_check:
                    prepared = rescore_set(cset, scorer, dedup=not args.no_dedup)
                    best = oracle_best(build_lattice(prepared))
                    if best != result.tokens:
                        raise CdsError(
                            f"oracle mismatch: fusion {' '.join(result.tokens)!r} "
                            f"vs best path {' '.join(best)!r}"
                        )
            except CdsError as exc:
                _diagnostic(stderr, line_no, str(exc))
                failed = True
                continue
            _dump(fusion_record(cset.id, result, "cds", args.trace), stdout)
    return 1 if failed else 0


def cmd_npd(args: argparse.Namespace, stdin: IO[str], stdout: IO[str], stderr: IO[str]) -> int:
    floor = _score_floor()
    scorer = _make_scorer(args.scorer, floor)
    failed = False
    with _open_input(args.input, stdin) as stream:
        for line_no, cset in _iter_records(stream, stderr, floor):
            if cset is None:
                failed = True
                continue
            cset = _truncated(cset, args.max_candidates)
            try:
                _, winner = npd_select(cset, scorer)
            except CdsError as exc:
                _diagnostic(stderr, line_no, str(exc))
                failed = True
                continue
            _dump({"id": cset.id, "output": list(winner.tokens), "method": "npd"}, stdout)
    return 1 if failed else 0


def _load_noise_config(args: argparse.Namespace) -> NoiseConfig:
    values: dict = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fp:
            for raw in fp:
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                key, _, value = line.partition("=")
                key = key.strip()
                if key not in NoiseConfig.field_names():
                    raise ValueError(f"unknown config key {key!r}")
                values[key] = int(value) if key == "rng_seed" else float(value)
    for name in NoiseConfig.field_names():
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
    return replace(NoiseConfig(), **values)


def cmd_synth(args: argparse.Namespace, stdin: IO[str], stdout: IO[str], stderr: IO[str]) -> int:
    floor = _score_floor()
    config = _load_noise_config(args)
    # first pass collects the corruption vocabulary, second pass streams output
    vocab_seen: dict[str, None] = {}
    with open(args.refs, "r", encoding="utf-8") as fp:
        for line in fp:
            for tok in line.split():
                vocab_seen.setdefault(tok)
    vocab = tuple(vocab_seen)
    failed = False
    index = 0
    with open(args.refs, "r", encoding="utf-8") as fp:
        for line_no, line in enumerate(fp, start=1):
            reference = tuple(line.split())
            try:
                cset = generate_candidates(
                    reference, args.k, config, vocab, ident=str(index), score_floor=floor
                )
            except EmptyReference:
                _diagnostic(stderr, line_no, "reference sentence is empty")
                failed = True
                index += 1
                continue
            _dump(candidate_record(cset), stdout)
            index += 1
    return 1 if failed else 0


def _read_token_lines(path: str) -> list[tuple[str, ...]]:
    with open(path, "r", encoding="utf-8") as fp:
        return [tuple(line.split()) for line in fp]


def _read_jsonl_outputs(path: str) -> list[tuple[str, ...]]:
    out = []
    with open(path, "r", encoding="utf-8") as fp:
        for line in fp:
            line = line.strip()
            if line:
                out.append(tuple(json.loads(line)["output"]))
    return out


def cmd_bleu(args: argparse.Namespace, stdin: IO[str], stdout: IO[str], stderr: IO[str]) -> int:
    hyps = _read_jsonl_outputs(args.hyp) if args.hyp_jsonl else _read_token_lines(args.hyp)
    refs = _read_token_lines(args.ref)
    if args.smooth is not None:
        report = bleu_with_smoothing(hyps, refs, max_n=args.max_n, epsilon=args.smooth)
    else:
        report = corpus_bleu(hyps, refs, max_n=args.max_n)
    _dump(report.to_json(), stdout)
    return 0


def _parse_sweep(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition("..")
    start, stop = int(lo), int(hi)
    if start < 1 or stop < start:
        raise ValueError(f"bad sweep range {text!r}")
    return start, stop


def cmd_compare(args: argparse.Namespace, stdin: IO[str], stdout: IO[str], stderr: IO[str]) -> int:
    floor = _score_floor()
    scorer = _make_scorer(args.scorer, floor)
    sweep = _parse_sweep(args.sweep_k) if args.sweep_k else None

    accumulators = {name: BleuAccumulator() for name in ("single", "npd", "cds")}
    sweep_acc: dict[int, dict[str, BleuAccumulator]] = {}
    if sweep:
        for k in range(sweep[0], sweep[1] + 1):
            sweep_acc[k] = {"cds": BleuAccumulator(), "npd": BleuAccumulator()}

    fusion_seconds = 0.0
    sentences = 0
    seen_ids: set[str] = set()
    with open(args.refs, "r", encoding="utf-8") as ref_fp, _open_input(args.input, stdin) as stream:
        records = _iter_records(stream, stderr, floor)
        for line_no, cset in records:
            if cset is None:
                return 1  # diagnostic already emitted
            if cset.id in seen_ids:
                return _compare_fail(stderr, line_no, f"duplicate record id {cset.id!r}")
            seen_ids.add(cset.id)
            ref_line = ref_fp.readline()
            if not ref_line:
                return _compare_fail(stderr, line_no, "more records than references")
            reference = tuple(ref_line.split())
            sentences += 1

            single = remove_adjacent_duplicates(cset.candidates[0])
            accumulators["single"].add(single.tokens, reference)
            _, npd_winner = npd_select(cset, scorer)
            accumulators["npd"].add(npd_winner.tokens, reference)
            started = time.perf_counter()
            fused = candidate_soups(cset, scorer, floor)
            fusion_seconds += time.perf_counter() - started
            accumulators["cds"].add(fused.tokens, reference)

            for k, accs in sweep_acc.items():
                subset = _truncated(cset, k)
                accs["cds"].add(candidate_soups(subset, scorer, floor).tokens, reference)
                accs["npd"].add(npd_select(subset, scorer)[1].tokens, reference)
        if ref_fp.readline():
            return _compare_fail(stderr, 0, "more references than records")

    if sentences == 0:
        return _compare_fail(stderr, 0, "no records to compare")

    summary = {
        "sentences": sentences,
        "methods": {name: acc.report().bleu for name, acc in accumulators.items()},
        "mean_fusion_ms": 1000.0 * fusion_seconds / sentences,
        "sweep": [
            {"k": k, "cds": accs["cds"].report().bleu, "npd": accs["npd"].report().bleu}
            for k, accs in sorted(sweep_acc.items())
        ],
    }
    if args.json:
        _dump(summary, stdout)
    else:
        stdout.write(f"sentences\t{sentences}\n")
        for name in ("single", "npd", "cds"):
            stdout.write(f"{name}\t{summary['methods'][name]:.2f}\n")
        stdout.write(f"mean_fusion_ms\t{summary['mean_fusion_ms']:.4f}\n")
        if sweep_acc:
            stdout.write("k\tcds\tnpd\n")
            for row in summary["sweep"]:
                stdout.write(f"{row['k']}\t{row['cds']:.2f}\t{row['npd']:.2f}\n")
    return 0


def _compare_fail(stderr: IO[str], line_no: int, message: str) -> int:
    _diagnostic(stderr, line_no, message)
    return 1


def cmd_ngram_train(
    args: argparse.Namespace, stdin: IO[str], stdout: IO[str], stderr: IO[str]
) -> int:
    with _open_input(args.corpus, stdin) as stream:
        corpus = [line.split() for line in stream if line.strip()]
    model = train_ngram(corpus, n=args.order, alpha=args.alpha)
    save_ngram(model, args.output)
    stdout.write(
        f"trained order-{model.order} model on {len(corpus)} sentences "
        f"({len(model.vocabulary)} vocabulary entries) -> {args.output}\n"
    )
    return 0


def _add_scorer_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--scorer",
        default="self",
        help="'self' (keep stored scores) or 'ngram:<model-path>'",
    )
    parser.add_argument(
        "--max-candidates",
        type=int,
        default=None,
        metavar="N",
        help="truncate each record to its first N candidates",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cds",
        description="Fuse scored candidate token sequences (and baselines) over JSON lines.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fuse = sub.add_parser("fuse", help="fuse each candidate record into one sequence")
    fuse.add_argument("input", nargs="?", default="-", help="JSONL records ('-' for stdin)")
    _add_scorer_flags(fuse)
    fuse.add_argument("--trace", action="store_true", help="emit per-region decisions")
    fuse.add_argument(
        "--oracle-check",
        action="store_true",
        help="verify each fusion against exhaustive lattice search",
    )
    fuse.add_argument(
        "--no-dedup", action="store_true", help="skip adjacent-duplicate removal (diagnostic)"
    )
    fuse.set_defaults(handler=cmd_fuse)

    npd = sub.add_parser("npd", help="keep the best whole candidate per record")
    npd.add_argument("input", nargs="?", default="-")
    _add_scorer_flags(npd)
    npd.set_defaults(handler=cmd_npd)

    synth = sub.add_parser("synth", help="generate candidate records from reference sentences")
    synth.add_argument("refs", help="one whitespace-tokenized sentence per line")
    synth.add_argument("--k", type=int, default=5, help="candidates per sentence")
    synth.add_argument("--seed", dest="rng_seed", type=int, default=None)
    for rate in ("substitution-rate", "insertion-rate", "deletion-rate", "duplication-rate"):
        synth.add_argument(f"--{rate}", type=float, default=None)
    for stat in (
        "correct-score-mean",
        "correct-score-std",
        "error-score-mean",
        "error-score-std",
    ):
        synth.add_argument(f"--{stat}", type=float, default=None)
    synth.add_argument("--config", default=None, help="key=value noise settings file")
    synth.set_defaults(handler=cmd_synth)

    bleu = sub.add_parser("bleu", help="corpus BLEU of a hypothesis file against references")
    bleu.add_argument("hyp", help="hypotheses: tokenized text, or JSONL with --hyp-jsonl")
    bleu.add_argument("ref", help="references: one tokenized sentence per line")
    bleu.add_argument(
        "--hyp-jsonl",
        action="store_true",
        help="read hypotheses from fusion records' 'output' fields",
    )
    bleu.add_argument("--smooth", type=float, default=None, metavar="EPS")
    bleu.add_argument("--max-n", type=int, default=4)
    bleu.set_defaults(handler=cmd_bleu)

    compare = sub.add_parser(
        "compare", help="per-method corpus BLEU (single / npd / cds) plus fusion timing"
    )
    compare.add_argument("input", nargs="?", default="-")
    compare.add_argument("--refs", required=True, help="reference sentences aligned with records")
    compare.add_argument("--scorer", default="self")
    compare.add_argument(
        "--sweep-k", default=None, metavar="A..B", help="also report one row per candidate count"
    )
    compare.add_argument("--json", action="store_true", help="emit the summary as one JSON object")
    compare.set_defaults(handler=cmd_compare)

    train = sub.add_parser("ngram-train", help="train and persist an n-gram scorer model")
    train.add_argument("corpus", help="tokenized text, one sentence per line ('-' for stdin)")
    train.add_argument("-o", "--output", required=True)
    train.add_argument("--order", type=int, default=3)
    train.add_argument("--alpha", type=float, default=0.1)
    train.set_defaults(handler=cmd_ngram_train)

    return parser


class _JsonLineLogHandler(logging.Handler):
    """Keeps stderr machine-readable: log records become diagnostic lines."""

    def __init__(self, stream: IO[str]):
        super().__init__(level=logging.WARNING)
        self.stream = stream

    def emit(self, record: logging.LogRecord) -> None:
        _diagnostic(self.stream, 0, f"{record.levelname.lower()}: {record.getMessage()}")


def main(
    argv: Sequence[str] | None = None,
    stdin: IO[str] | None = None,
    stdout: IO[str] | None = None,
    stderr: IO[str] | None = None,
) -> int:
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    logger = logging.getLogger("candidate_soups")
    handler = _JsonLineLogHandler(stderr)
    logger.addHandler(handler)
    try:
        return args.handler(args, stdin, stdout, stderr)
    except (CdsError, OSError, ValueError) as exc:
        _diagnostic(stderr, 0, str(exc))
        return 1
    finally:
        logger.removeHandler(handler)


if __name__ == "__main__":
    sys.exit(main())
