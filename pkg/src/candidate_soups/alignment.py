"""Common-subsequence anchoring of candidate sets.

Candidates are traversed with one pointer each.  Tokens on which every
candidate agrees (in order) become anchors; the stretches between anchors
become divergence regions holding one segment per candidate.  The anchor
search is greedy: all frontiers advance in lockstep, one position per round,
until some token has been seen in every candidate's window.  This keeps the
regions small, which preserves as many anchors as possible.

The search is deliberately greedy, not an optimal longest-common-subsequence
computation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from .candidates import CandidateSet

PointerVector = tuple[int, ...]


@dataclass(frozen=True)
class Anchor:
    """A token every candidate predicts, with its position in each candidate."""

    token: str
    positions: PointerVector


@dataclass(frozen=True)
class DivergenceRegion:
    """A span between anchors on which candidates disagree.

    ``segments[j]`` holds candidate j's tokens over the half-open window
    ``[start[j], end[j])``; it may be empty.
    """

    start: PointerVector
    end: PointerVector
    segments: tuple[tuple[str, ...], ...]


PartitionElement = Union[Anchor, DivergenceRegion]


@dataclass(frozen=True)
class AlignedPartition:
    """Ordered alternation of anchors and divergence regions.

    Consecutive anchors may occur; consecutive regions never do.  For every
    candidate, concatenating anchor tokens and that candidate's segments in
    element order reproduces the candidate exactly.
    """

    elements: tuple[PartitionElement, ...]

    def anchors(self) -> Iterator[Anchor]:
        return (el for el in self.elements if isinstance(el, Anchor))

    def regions(self) -> Iterator[DivergenceRegion]:
        return (el for el in self.elements if isinstance(el, DivergenceRegion))


def find_next_anchor(cset: CandidateSet, start: PointerVector) -> Anchor | None:
    """Find the next token common to every candidate at or after ``start``.

    Expands all candidate frontiers in lockstep, one position per round.
    After each round, any token present in every candidate's window so far
    qualifies; a token's position within a window is its earliest occurrence
    there.  When several tokens qualify in the same round the one with the
    smallest total pointer advance wins, then the one occurring earliest in
    candidate 0.  Frontiers that reach the end of their candidate stop
    growing but their windows remain live.

    Returns None when every frontier is exhausted without a common token.
    """
    seqs = [c.tokens for c in cset.candidates]
    k = len(seqs)
    lens = [len(s) for s in seqs]
    # first_seen[j] maps token -> earliest absolute index in candidate j's window
    first_seen: list[dict[str, int]] = [{} for _ in range(k)]
    window_count: dict[str, int] = {}
    frontier = list(start)

    grew = True
    while grew:
        grew = False
        qualified: list[str] = []
        for j in range(k):
            if frontier[j] >= lens[j]:
                continue
            tok = seqs[j][frontier[j]]
            seen = first_seen[j]
            if tok not in seen:
                seen[tok] = frontier[j]
                count = window_count.get(tok, 0) + 1
                window_count[tok] = count
                if count == k:
                    qualified.append(tok)
            frontier[j] += 1
            grew = True
        if qualified:
            best = min(
                qualified,
                key=lambda t: (
                    sum(first_seen[j][t] - start[j] for j in range(k)),
                    first_seen[0][t],
                ),
            )
            return Anchor(best, tuple(first_seen[j][best] for j in range(k)))
    return None


def partition(cset: CandidateSet) -> AlignedPartition:
    """Split a (deduped) candidate set into anchors and divergence regions.

    While all pointers sit on the same token, anchors are emitted and every
    pointer advances by one.  Otherwise the region up to the next common
    token (or to the candidate ends when none exists) is emitted and the
    pointers jump there.  Terminates after at most the total token count of
    all candidates.
    """
    seqs = [c.tokens for c in cset.candidates]
    k = len(seqs)
    lens = [len(s) for s in seqs]
    pointers = [0] * k
    elements: list[PartitionElement] = []

    while any(pointers[j] < lens[j] for j in range(k)):
        in_bounds = all(pointers[j] < lens[j] for j in range(k))
        if in_bounds:
            head = seqs[0][pointers[0]]
            if all(seqs[j][pointers[j]] == head for j in range(1, k)):
                elements.append(Anchor(head, tuple(pointers)))
                pointers = [p + 1 for p in pointers]
                continue
        nxt = find_next_anchor(cset, tuple(pointers))
        end = nxt.positions if nxt is not None else tuple(lens)
        segments = tuple(tuple(seqs[j][pointers[j] : end[j]]) for j in range(k))
        elements.append(DivergenceRegion(tuple(pointers), end, segments))
        pointers = list(end)

    return AlignedPartition(tuple(elements))
