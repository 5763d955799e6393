"""Candidate fusion: assemble one output from the best parts of k candidates.

The pipeline dedups each candidate, re-scores it, partitions the set into
anchors and divergence regions, and then keeps, per region, the segment
whose score window has the highest mean.  A score window spans the segment
plus one bounding anchor token on each side (clamped at the sequence
edges), so segment quality is judged in context.  Regions are scored
independently of one another.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

from .alignment import Anchor, DivergenceRegion, partition
from .candidates import DEFAULT_SCORE_FLOOR, CandidateSet, validate
from .scoring import Scorer, SelfScorer, rescore_set


@dataclass(frozen=True)
class RegionChoice:
    """The decision made for one divergence region."""

    region_index: int
    chosen: int
    segment_scores: tuple[float, ...]
    chosen_tokens: tuple[str, ...]


@dataclass(frozen=True)
class FusionResult:
    """Fused token sequence plus the per-region decision trace."""

    tokens: tuple[str, ...]
    trace: tuple[RegionChoice, ...]
    anchors_used: int


def region_score(
    cand_index: int,
    region: DivergenceRegion,
    scores: Sequence[Sequence[float]],
) -> float:
    """Mean log-probability of candidate ``cand_index`` over the region window.

    The window is the half-open index range
    ``[max(0, start - 1), min(len, end + 1))``: the segment plus one
    bounding anchor token on each side, clamped at the sequence boundaries.
    It is never empty (it always contains at least one anchor or one token).
    """
    j = cand_index
    cand_scores = scores[j]
    lo = max(0, region.start[j] - 1)
    hi = min(len(cand_scores), region.end[j] + 1)
    window = cand_scores[lo:hi]
    return math.fsum(window) / len(window)


def select_segment(
    region: DivergenceRegion,
    scores: Sequence[Sequence[float]],
    region_index: int = 0,
) -> RegionChoice:
    """Pick the candidate whose window mean is highest; ties go to the lowest index."""
    segment_scores = tuple(region_score(j, region, scores) for j in range(len(region.segments)))
    chosen = max(range(len(segment_scores)), key=lambda j: (segment_scores[j], -j))
    return RegionChoice(region_index, chosen, segment_scores, region.segments[chosen])


def candidate_soups(
    cset: CandidateSet,
    scorer: Scorer | None = None,
    score_floor: float = DEFAULT_SCORE_FLOOR,
    dedup: bool = True,
) -> FusionResult:
    """Fuse a candidate set into a single token sequence.

    Validates the set, dedups and re-scores each candidate, partitions, and
    interleaves anchor tokens with the winning segment of every divergence
    region.  Deterministic given the set and scorer.  ``dedup=False`` skips
    duplicate removal (diagnostic only).
    """
    scorer = scorer if scorer is not None else SelfScorer()
    cset = validate(cset, score_floor)
    prepared = rescore_set(cset, scorer, dedup=dedup)
    part = partition(prepared)
    scores = [c.scores for c in prepared.candidates]

    tokens: list[str] = []
    trace: list[RegionChoice] = []
    anchors = 0
    for element in part.elements:
        if isinstance(element, Anchor):
            tokens.append(element.token)
            anchors += 1
        else:
            choice = select_segment(element, scores, region_index=len(trace))
            trace.append(choice)
            tokens.extend(choice.chosen_tokens)
    return FusionResult(tuple(tokens), tuple(trace), anchors)
