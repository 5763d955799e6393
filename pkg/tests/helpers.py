"""Shared fixtures: worked examples, random set generators, and oracles."""

from __future__ import annotations

import random

from candidate_soups import CandidateSet, ScoredCandidate

# --- two candidates whose errors sit in opposite halves -------------------
# Candidate 0 garbles "required"; candidate 1 garbles "costs".  Error tokens
# score lower, and candidate 1's error is milder so whole-sequence selection
# keeps it (error and all) while region-wise fusion repairs both.

CROSS_ERROR_TOKENS = [
    "It often costs over a hundred dollars to obtain the require identity card .".split(),
    "It often cost over a hundred dollars to obtain the required identity card .".split(),
]
CROSS_ERROR_SCORES = [
    [-0.1] * 10 + [-2.5] + [-0.1] * 3,
    [-0.1] * 2 + [-2.0] + [-0.1] * 11,
]
CROSS_ERROR_FUSED = "It often costs over a hundred dollars to obtain the required identity card .".split()


def cross_error_set() -> CandidateSet:
    return CandidateSet(
        "cross",
        tuple(
            ScoredCandidate(tuple(t), tuple(s))
            for t, s in zip(CROSS_ERROR_TOKENS, CROSS_ERROR_SCORES)
        ),
    )


# --- three candidates with two divergence regions -------------------------
# On-path tokens score -0.1, discarded tokens -2.5; region one belongs to
# candidate 1 and region two to candidate 2.

THREE_WAY_TOKENS = [
    "The Republican authorities were quick extend to other States .".split(),
    "The Republican authorities were quick to extend this practice States .".split(),
    "The Republican and the authority extend this practice to other States .".split(),
]
THREE_WAY_FUSED = "The Republican authorities were quick to extend this practice to other States .".split()
THREE_WAY_ANCHORS = ["The", "Republican", "extend", "States", "."]

_THREE_WAY_OFF_PATH = [
    {2, 3, 4, 6, 7},  # authorities were quick / to other
    {7, 8},  # this practice
    {2, 3, 4},  # and the authority
]


def three_way_set() -> CandidateSet:
    cands = []
    for tokens, off in zip(THREE_WAY_TOKENS, _THREE_WAY_OFF_PATH):
        scores = [-2.5 if i in off else -0.1 for i in range(len(tokens))]
        cands.append(ScoredCandidate(tuple(tokens), tuple(scores)))
    return CandidateSet("threeway", tuple(cands))


# --- random candidate sets -------------------------------------------------

DEFAULT_VOCAB = tuple("abcdefgh")


def random_candidate(
    rng: random.Random,
    vocab: tuple[str, ...] = DEFAULT_VOCAB,
    max_len: int = 12,
    low: float = -5.0,
    high: float = 0.0,
) -> ScoredCandidate:
    length = rng.randint(1, max_len)
    tokens = tuple(rng.choice(vocab) for _ in range(length))
    scores = tuple(rng.uniform(low, high) for _ in range(length))
    return ScoredCandidate(tokens, scores)


def random_candidate_set(
    rng: random.Random,
    max_k: int = 4,
    vocab: tuple[str, ...] = DEFAULT_VOCAB,
    max_len: int = 12,
    ident: str = "r",
) -> CandidateSet:
    k = rng.randint(1, max_k)
    return CandidateSet(
        ident, tuple(random_candidate(rng, vocab, max_len) for _ in range(k))
    )


def random_references(
    rng: random.Random, count: int, vocab: tuple[str, ...], min_len: int = 8, max_len: int = 20
) -> list[tuple[str, ...]]:
    return [
        tuple(rng.choice(vocab) for _ in range(rng.randint(min_len, max_len)))
        for _ in range(count)
    ]


def word_vocab(size: int) -> tuple[str, ...]:
    return tuple(f"w{i:03d}" for i in range(size))


# --- independent oracles ----------------------------------------------------


def is_subsequence(needle: tuple[str, ...], haystack: tuple[str, ...]) -> bool:
    it = iter(haystack)
    return all(tok in it for tok in needle)


def lcs_length(a: tuple[str, ...], b: tuple[str, ...]) -> int:
    """Classic dynamic-programming longest-common-subsequence length."""
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, start=1):
            cur.append(prev[j - 1] + 1 if x == y else max(cur[j - 1], prev[j]))
        prev = cur
    return prev[-1]


def dedup_by_runs(tokens, scores):
    """Run-length scanning reference for adjacent-duplicate removal."""
    out_tokens, out_scores = [], []
    i = 0
    while i < len(tokens):
        j = i
        while j + 1 < len(tokens) and tokens[j + 1] == tokens[i]:
            j += 1
        out_tokens.append(tokens[i])
        out_scores.append(scores[j])  # last occurrence of the run
        i = j + 1
    return out_tokens, out_scores
