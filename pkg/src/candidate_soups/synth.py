"""Synthetic candidate sets from reference sentences under a noisy channel.

Each candidate independently corrupts the reference token by token:
substitution, deletion, duplication of the emitted token, and insertion of
random vocabulary tokens.  Correct tokens get scores drawn near the
correct-score mean and corrupted tokens near the (much lower) error-score
mean, encoding a model that is less confident where it errs.  Generation is
fully deterministic: candidate i of sentence s uses an RNG stream derived
from (seed, s, i), so regenerating with a different candidate count leaves
the shared prefix of candidates unchanged.
"""

from __future__ import annotations

import random
from collections.abc import Sequence
from dataclasses import dataclass, fields

from .candidates import DEFAULT_SCORE_FLOOR, CandidateSet, ScoredCandidate
from .errors import EmptyReference


@dataclass(frozen=True)
class NoiseConfig:
    substitution_rate: float = 0.15
    insertion_rate: float = 0.03
    deletion_rate: float = 0.03
    duplication_rate: float = 0.05
    correct_score_mean: float = -0.15
    correct_score_std: float = 0.05
    error_score_mean: float = -2.0
    error_score_std: float = 0.5
    rng_seed: int = 0

    def __post_init__(self) -> None:
        for name in ("substitution_rate", "insertion_rate", "deletion_rate", "duplication_rate"):
            rate = getattr(self, name)
            if not 0.0 <= rate <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {rate}")
        for name in ("correct_score_mean", "error_score_mean"):
            if getattr(self, name) > 0:
                raise ValueError(f"{name} must be <= 0")
        for name in ("correct_score_std", "error_score_std"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in fields(cls)]


def _clamp(score: float, floor: float) -> float:
    return min(0.0, max(floor, score))


def _corrupt(
    reference: Sequence[str],
    rng: random.Random,
    config: NoiseConfig,
    vocab: tuple[str, ...],
    vocab_index: dict[str, int],
    floor: float,
) -> ScoredCandidate:
    def correct() -> float:
        return _clamp(rng.gauss(config.correct_score_mean, config.correct_score_std), floor)

    def error() -> float:
        return _clamp(rng.gauss(config.error_score_mean, config.error_score_std), floor)

    tokens: list[str] = []
    scores: list[float] = []
    for tok in reference:
        if rng.random() < config.insertion_rate:
            tokens.append(vocab[rng.randrange(len(vocab))])
            scores.append(error())
        if rng.random() < config.deletion_rate:
            continue
        substituted = rng.random() < config.substitution_rate
        if substituted:
            # draw from the vocabulary excluding the reference token itself
            pos = vocab_index.get(tok, -1)
            if pos >= 0 and len(vocab) > 1:
                idx = rng.randrange(len(vocab) - 1)
                if idx >= pos:
                    idx += 1
            else:
                idx = rng.randrange(len(vocab))
            emitted = vocab[idx]
            substituted = emitted != tok
        else:
            emitted = tok
        tokens.append(emitted)
        scores.append(error() if substituted else correct())
        if rng.random() < config.duplication_rate:
            # a length artifact, not a content error: same score class
            tokens.append(emitted)
            scores.append(error() if substituted else correct())
    if not tokens:
        tokens.append(vocab[rng.randrange(len(vocab))])
        scores.append(error())
    return ScoredCandidate(tuple(tokens), tuple(scores))


def generate_candidates(
    reference: Sequence[str],
    k: int,
    config: NoiseConfig,
    vocab: Sequence[str],
    ident: str = "0",
    score_floor: float = DEFAULT_SCORE_FLOOR,
) -> CandidateSet:
    """Generate k independent corruptions of one reference sentence.

    Raises EmptyReference when the reference has no tokens.
    """
    if not reference:
        raise EmptyReference(f"reference {ident!r} is empty")
    if k < 1:
        raise ValueError(f"candidate count must be >= 1, got {k}")
    if not vocab:
        raise ValueError("vocabulary is empty")
    vocab_tuple = tuple(dict.fromkeys(vocab))
    vocab_index = {tok: i for i, tok in enumerate(vocab_tuple)}
    candidates = tuple(
        _corrupt(
            reference,
            random.Random(f"{config.rng_seed}:{ident}:{i}"),
            config,
            vocab_tuple,
            vocab_index,
            score_floor,
        )
        for i in range(k)
    )
    return CandidateSet(ident, candidates)


def generate_corpus(
    references: Sequence[Sequence[str]],
    k: int,
    config: NoiseConfig,
    vocab: Sequence[str] | None = None,
    score_floor: float = DEFAULT_SCORE_FLOOR,
) -> list[CandidateSet]:
    """Generate one candidate set per reference; ids are the 0-based indices.

    When no vocabulary is given, the union of all reference tokens is used
    (in first-appearance order, so generation stays deterministic).
    """
    if vocab is None:
        seen: dict[str, None] = {}
        for ref in references:
            for tok in ref:
                seen.setdefault(tok)
        vocab = tuple(seen)
    return [
        generate_candidates(ref, k, config, vocab, ident=str(i), score_floor=score_floor)
        for i, ref in enumerate(references)
    ]
