"""Simplified lattice construction and brute-force best-path search.

The lattice is the exhaustive view of the same search space the greedy
fusion walks: anchor nodes joined by groups of per-candidate segment
branches.  ``oracle_best`` enumerates whole paths and maximizes the sum of
the chosen branches' window means, providing an independent check that the
greedy per-region choice is globally optimal.  Window means are computed
here from scratch rather than shared with the fusion module, so a slicing
bug on either side shows up as a mismatch.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .alignment import Anchor, partition
from .candidates import CandidateSet
from .errors import PathExplosion

DEFAULT_PATH_CAP = 10**6


@dataclass(frozen=True)
class AnchorNode:
    token: str


@dataclass(frozen=True)
class LatticeBranch:
    """One candidate's segment through a region, with its window-mean score."""

    candidate: int
    tokens: tuple[str, ...]
    score: float


@dataclass(frozen=True)
class RegionGroup:
    """All candidate branches spanning one divergence region."""

    branches: tuple[LatticeBranch, ...]


LatticeElement = Union[AnchorNode, RegionGroup]


@dataclass(frozen=True)
class SimplifiedLattice:
    """Anchor nodes alternating with region groups; every path is a fusion."""

    elements: tuple[LatticeElement, ...]

    def region_groups(self) -> list[RegionGroup]:
        return [el for el in self.elements if isinstance(el, RegionGroup)]


def _window_mean(scores: tuple[float, ...], start: int, end: int) -> float:
    # fsum keeps the mean bit-identical to the fusion side for equal windows,
    # so exact ties break the same way in both searches.
    lo = start - 1 if start > 0 else 0
    hi = end + 1 if end + 1 < len(scores) else len(scores)
    return math.fsum(scores[lo:hi]) / (hi - lo)


def build_lattice(cset: CandidateSet) -> SimplifiedLattice:
    """Build the node-fused lattice of a validated, deduped candidate set.

    Elements mirror the partition one-to-one; branch j of each region group
    carries candidate j's segment and its window-mean score under the set's
    stored scores.
    """
    part = partition(cset)
    scores = [c.scores for c in cset.candidates]
    elements: list[LatticeElement] = []
    for element in part.elements:
        if isinstance(element, Anchor):
            elements.append(AnchorNode(element.token))
        else:
            branches = tuple(
                LatticeBranch(
                    j,
                    element.segments[j],
                    _window_mean(scores[j], element.start[j], element.end[j]),
                )
                for j in range(len(element.segments))
            )
            elements.append(RegionGroup(branches))
    return SimplifiedLattice(tuple(elements))


def _distinct_branches(group: RegionGroup) -> list[LatticeBranch]:
    """Collapse branches with identical tokens, keeping the best-scoring copy.

    Score ties within a token group go to the lowest candidate index.  The
    result is ordered by the kept copy's candidate index, which makes a
    lexicographic scan over branch combinations reproduce the greedy
    fusion's lowest-index tie rule.
    """
    best: dict[tuple[str, ...], LatticeBranch] = {}
    for branch in group.branches:
        kept = best.get(branch.tokens)
        if kept is None or branch.score > kept.score:
            best[branch.tokens] = branch
    return sorted(best.values(), key=lambda b: b.candidate)


def path_count(lattice: SimplifiedLattice) -> int:
    """Number of distinct paths: the product of per-region distinct branch counts."""
    return math.prod(
        len({b.tokens for b in group.branches}) for group in lattice.region_groups()
    )


def _assemble(lattice: SimplifiedLattice, segments: tuple[tuple[str, ...], ...]) -> tuple[str, ...]:
    out: list[str] = []
    region = 0
    for element in lattice.elements:
        if isinstance(element, AnchorNode):
            out.append(element.token)
        else:
            out.extend(segments[region])
            region += 1
    return tuple(out)


def enumerate_paths(
    lattice: SimplifiedLattice, cap: int = DEFAULT_PATH_CAP
) -> list[tuple[str, ...]]:
    """All token sequences obtainable by picking one distinct branch per region.

    Branches with identical tokens within a region are emitted once.
    Raises PathExplosion when the path count exceeds ``cap``.
    """
    count = path_count(lattice)
    if count > cap:
        raise PathExplosion(f"lattice has {count} paths, cap is {cap}")
    groups = [_distinct_branches(g) for g in lattice.region_groups()]
    return [
        _assemble(lattice, tuple(b.tokens for b in combo))
        for combo in itertools.product(*groups)
    ]


def oracle_best(lattice: SimplifiedLattice, cap: int = DEFAULT_PATH_CAP) -> tuple[str, ...]:
    """Exhaustively search for the path maximizing the sum of branch scores.

    Scans every branch combination and keeps the first one (in candidate-
    index order) whose score total strictly exceeds the best so far, which
    resolves ties exactly like the greedy fusion: lowest candidate index
    per region.  Totals are accumulated in exact rational arithmetic: a
    float sum could absorb a sub-ulp gap between two branch means and turn
    a strict per-region preference into a spurious tie.  Raises
    PathExplosion when the path count exceeds ``cap``.
    """
    count = path_count(lattice)
    if count > cap:
        raise PathExplosion(f"lattice has {count} paths, cap is {cap}")
    groups = [_distinct_branches(g) for g in lattice.region_groups()]
    best_combo: tuple[LatticeBranch, ...] | None = None
    best_total: Fraction | None = None
    for combo in itertools.product(*groups):
        total = sum((Fraction(b.score) for b in combo), Fraction(0))
        if best_total is None or total > best_total:
            best_total = total
            best_combo = combo
    assert best_combo is not None
    return _assemble(lattice, tuple(b.tokens for b in best_combo))
