"""Scorers: the re-scoring contract, built-ins, and the NPD baseline.

Two scorers ship with the package.  ``SelfScorer`` keeps the per-token
log-probabilities the candidates arrived with.  ``NGramScorer`` wraps an
add-alpha-smoothed n-gram language model trained on a reference corpus and
stands in for a heavier sequence model; it scores target tokens only and
ignores the source side (the interface carries the source so a conditional
scorer can be plugged in later).

``npd_select`` is the single-candidate baseline: it keeps the one candidate
with the highest mean log-probability and discards the rest.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .candidates import (
    DEFAULT_SCORE_FLOOR,
    CandidateSet,
    ScoredCandidate,
    remove_adjacent_duplicates,
)
from .errors import EmptyCorpus, ScorerFailure

# Sentence-boundary symbols.  Corpus tokens that collide with these literals
# are treated as boundaries; callers control tokenization.
START_SYMBOL = "<s>"
END_SYMBOL = "</s>"


class Scorer:
    """Assigns per-token log-probabilities (each <= 0) to a token sequence.

    Implementations must be deterministic and safe for concurrent read-only
    use after construction.
    """

    def score(self, source: Sequence[str] | None, tokens: Sequence[str]) -> list[float]:
        """Return one log-probability per input token."""
        raise NotImplementedError

    def rescore(self, source: Sequence[str] | None, candidate: ScoredCandidate) -> Sequence[float]:
        """Scores for a whole candidate; defaults to re-scoring its tokens."""
        return self.score(source, candidate.tokens)


class SelfScorer(Scorer):
    """Passes each candidate's stored scores through unchanged."""

    def rescore(self, source: Sequence[str] | None, candidate: ScoredCandidate) -> Sequence[float]:
        return candidate.scores


def self_scorer() -> Scorer:
    return SelfScorer()


@dataclass(frozen=True)
class NGramModel:
    """Add-alpha-smoothed n-gram counts; immutable once trained.

    ``vocabulary`` contains every observed target, including the end symbol.
    Probabilities normalize over the vocabulary plus one unknown class, so
    for every context the probabilities of all events sum to one.
    """

    order: int
    alpha: float
    counts: dict[tuple[str, ...], dict[str, int]] = field(repr=False)
    context_totals: dict[tuple[str, ...], int] = field(repr=False)
    vocabulary: frozenset[str] = field(repr=False)

    def probability(self, context: tuple[str, ...], token: str) -> float:
        """p(token | context) under add-alpha smoothing.

        Unknown tokens (and tokens in unseen contexts) fall into a single
        unknown class sharing the same smoothed mass.
        """
        count = self.counts.get(context, {}).get(token, 0)
        total = self.context_totals.get(context, 0)
        event_count = len(self.vocabulary) + 1  # one extra unknown class
        return (count + self.alpha) / (total + self.alpha * event_count)


def train_ngram(corpus: Iterable[Sequence[str]], n: int = 3, alpha: float = 0.1) -> NGramModel:
    """Count n-grams over a corpus with start padding and one end symbol.

    Each sentence is padded with ``n - 1`` start symbols and closed with one
    end symbol, so the end symbol is a predictable event while the start
    symbols appear only in contexts.

    Raises EmptyCorpus when the corpus has no sentences.
    """
    if n < 1:
        raise ValueError(f"n-gram order must be >= 1, got {n}")
    if alpha <= 0:
        raise ValueError(f"smoothing constant must be > 0, got {alpha}")

    counts: dict[tuple[str, ...], dict[str, int]] = {}
    totals: dict[tuple[str, ...], int] = {}
    vocab: set[str] = set()
    seen_any = False
    for sentence in corpus:
        seen_any = True
        padded = [START_SYMBOL] * (n - 1) + list(sentence) + [END_SYMBOL]
        vocab.update(sentence)
        for i in range(len(sentence) + 1):
            context = tuple(padded[i : i + n - 1])
            target = padded[i + n - 1]
            counts.setdefault(context, {})
            counts[context][target] = counts[context].get(target, 0) + 1
            totals[context] = totals.get(context, 0) + 1
    if not seen_any:
        raise EmptyCorpus("n-gram training corpus has no sentences")
    vocab.add(END_SYMBOL)
    return NGramModel(n, alpha, counts, totals, frozenset(vocab))


def ngram_score(
    model: NGramModel,
    tokens: Sequence[str],
    score_floor: float = DEFAULT_SCORE_FLOOR,
) -> list[float]:
    """Per-token log p(token | previous n-1 tokens), clamped to the floor."""
    n = model.order
    padded = [START_SYMBOL] * (n - 1) + list(tokens)
    out: list[float] = []
    for i, tok in enumerate(tokens):
        context = tuple(padded[i : i + n - 1])
        logp = math.log(model.probability(context, tok))
        out.append(max(score_floor, logp))
    return out


class NGramScorer(Scorer):
    """Scorer backed by a trained ``NGramModel``; target-side only."""

    def __init__(self, model: NGramModel, score_floor: float = DEFAULT_SCORE_FLOOR):
        self.model = model
        self.score_floor = score_floor

    def score(self, source: Sequence[str] | None, tokens: Sequence[str]) -> list[float]:
        return ngram_score(self.model, tokens, self.score_floor)


def save_ngram(model: NGramModel, path: str) -> None:
    """Write a model as ``ngram <n> <alpha>`` plus one count line per n-gram.

    Lines are ``<context tokens>\\t<token>\\t<count>`` in sorted order, so
    save -> load -> save is byte-identical.
    """
    with open(path, "w", encoding="utf-8") as fp:
        fp.write(f"ngram {model.order} {model.alpha!r}\n")
        for context in sorted(model.counts):
            by_token = model.counts[context]
            for token in sorted(by_token):
                fp.write(f"{' '.join(context)}\t{token}\t{by_token[token]}\n")


def load_ngram(path: str) -> NGramModel:
    """Load a model written by ``save_ngram``.

    Context totals and the vocabulary are reconstructed from the count
    lines: every context occurrence has exactly one continuation, and every
    trained token occurs as some n-gram's target.
    """
    counts: dict[tuple[str, ...], dict[str, int]] = {}
    totals: dict[tuple[str, ...], int] = {}
    vocab: set[str] = set()
    with open(path, "r", encoding="utf-8") as fp:
        header = fp.readline().split()
        if len(header) != 3 or header[0] != "ngram":
            raise ValueError(f"{path}: not an n-gram model file")
        order, alpha = int(header[1]), float(header[2])
        for line in fp:
            line = line.rstrip("\n")
            if not line:
                continue
            context_part, token, count = line.split("\t")
            context = tuple(context_part.split(" ")) if context_part else ()
            counts.setdefault(context, {})[token] = int(count)
            totals[context] = totals.get(context, 0) + int(count)
            vocab.add(token)
    return NGramModel(order, alpha, counts, totals, frozenset(vocab))


def rescore_set(
    cset: CandidateSet,
    scorer: Scorer,
    dedup: bool = True,
) -> CandidateSet:
    """Dedup every candidate, then replace its scores with the scorer's.

    Deduplication happens first so the new scores stay aligned with the
    traversed tokens.  Raises ScorerFailure when a scorer returns a score
    sequence whose length differs from the token count.
    """
    out: list[ScoredCandidate] = []
    for idx, cand in enumerate(cset.candidates):
        if dedup:
            cand = remove_adjacent_duplicates(cand)
        scores = scorer.rescore(cset.source, cand)
        if len(scores) != len(cand.tokens):
            raise ScorerFailure(
                f"set {cset.id!r} candidate {idx}: scorer returned {len(scores)} "
                f"scores for {len(cand.tokens)} tokens"
            )
        out.append(ScoredCandidate(cand.tokens, tuple(scores)))
    return CandidateSet(cset.id, tuple(out), cset.source)


def npd_select(
    cset: CandidateSet,
    scorer: Scorer | None = None,
) -> tuple[int, ScoredCandidate]:
    """Keep the single candidate with the highest mean log-probability.

    Candidates are deduped before scoring (the same preprocessing fusion
    applies, so the two are comparable).  Ties go to the lowest index.
    Returns the winning index and the deduped candidate with its stored
    scores; the scorer influences selection only.
    """
    scorer = scorer if scorer is not None else SelfScorer()
    prepared = rescore_set(cset, scorer)
    best_idx = 0
    best_mean = -math.inf
    for idx, cand in enumerate(prepared.candidates):
        mean = cand.mean_score()
        if mean > best_mean:
            best_idx, best_mean = idx, mean
    return best_idx, remove_adjacent_duplicates(cset.candidates[best_idx])
