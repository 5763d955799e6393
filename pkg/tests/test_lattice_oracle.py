import itertools
import random

import pytest

from candidate_soups import (
    AnchorNode,
    CandidateSet,
    PathExplosion,
    RegionGroup,
    ScoredCandidate,
    SelfScorer,
    build_lattice,
    candidate_soups,
    enumerate_paths,
    oracle_best,
    partition,
    path_count,
    rescore_set,
    validate,
)
from helpers import random_candidate_set


def prepared(cset):
    return rescore_set(validate(cset), SelfScorer())


def flat_set(*token_lists, score=-0.5):
    return CandidateSet(
        "lat",
        tuple(
            ScoredCandidate(tuple(toks), tuple(score for _ in toks))
            for toks in token_lists
        ),
    )


class TestBuildLattice:
    def test_mirrors_partition_structure(self):
        cset = flat_set(
            ["A", "x1", "B", "C", "y1", "D"],
            ["A", "x2", "B", "C", "y2", "D"],
            ["A", "x3", "B", "C", "y3", "D"],
        )
        lattice = build_lattice(cset)
        anchors = [el for el in lattice.elements if isinstance(el, AnchorNode)]
        groups = [el for el in lattice.elements if isinstance(el, RegionGroup)]
        assert [a.token for a in anchors] == ["A", "B", "C", "D"]
        assert len(groups) == 2
        part = partition(cset)
        assert len(lattice.elements) == len(part.elements)
        for group, region in zip(groups, part.regions()):
            assert tuple(b.tokens for b in group.branches) == region.segments
            assert tuple(b.candidate for b in group.branches) == (0, 1, 2)

    def test_single_candidate_single_path(self):
        lattice = build_lattice(flat_set(["a", "b", "c"]))
        assert path_count(lattice) == 1
        assert enumerate_paths(lattice) == [("a", "b", "c")]

    def test_identical_candidates_single_path(self):
        cset = prepared(
            CandidateSet(
                "same",
                tuple(ScoredCandidate(("a", "a", "b"), (-0.1, -0.1, -0.1)) for _ in range(3)),
            )
        )
        lattice = build_lattice(cset)
        assert enumerate_paths(lattice) == [("a", "b")]


class TestEnumeratePaths:
    def test_product_of_distinct_branches(self):
        lattice = build_lattice(
            flat_set(["A", "x", "B", "p", "C"], ["A", "y", "B", "q", "C"])
        )
        paths = enumerate_paths(lattice)
        assert len(paths) == 4
        assert set(paths) == {
            ("A", "x", "B", "p", "C"),
            ("A", "x", "B", "q", "C"),
            ("A", "y", "B", "p", "C"),
            ("A", "y", "B", "q", "C"),
        }

    def test_no_regions_single_path(self):
        lattice = build_lattice(flat_set(["a", "b"], ["a", "b"]))
        assert enumerate_paths(lattice) == [("a", "b")]

    def test_identical_branches_emitted_once(self):
        lattice = build_lattice(
            flat_set(["A", "x", "B"], ["A", "x", "B"], ["A", "y", "B"])
        )
        assert path_count(lattice) == 2
        assert sorted(enumerate_paths(lattice)) == [("A", "x", "B"), ("A", "y", "B")]

    def test_cap_overflow_raises(self):
        cset = flat_set(
            ["A", "x1", "B", "y1", "C", "z1", "D"],
            ["A", "x2", "B", "y2", "C", "z2", "D"],
        )
        lattice = build_lattice(cset)
        assert path_count(lattice) == 8
        with pytest.raises(PathExplosion):
            enumerate_paths(lattice, cap=7)

    def test_count_matches_brute_force_combinations(self):
        rng = random.Random(31)
        for _ in range(200):
            cset = prepared(random_candidate_set(rng, max_len=8))
            lattice = build_lattice(cset)
            part = partition(cset)
            k = len(cset.candidates)
            regions = list(part.regions())
            combos = {
                tuple(region.segments[j] for region, j in zip(regions, pick))
                for pick in itertools.product(range(k), repeat=len(regions))
            }
            paths = enumerate_paths(lattice)
            assert len(paths) == len(combos) == path_count(lattice)


class TestOracleBest:
    def test_single_region_picks_best_window(self):
        cset = CandidateSet(
            "single-region",
            (
                ScoredCandidate(("A", "x", "B"), (-0.1, -2.0, -0.1)),
                ScoredCandidate(("A", "y", "B"), (-0.1, -0.2, -0.1)),
            ),
        )
        assert oracle_best(build_lattice(cset)) == ("A", "y", "B")

    def test_equal_branch_scores_pick_candidate_zero(self):
        # same-length segments with identical scores: exact window tie
        cset = flat_set(["A", "x", "B"], ["A", "y", "B"], score=-0.7)
        assert oracle_best(build_lattice(cset)) == ("A", "x", "B")

    def test_constant_scores_with_unequal_window_lengths(self):
        # all scores equal: window means differ only in their last ulp
        # across window lengths.  A float total over regions would absorb
        # that gap and pick a shorter path; the exact total must not.
        cset = CandidateSet(
            "ulp",
            (
                ScoredCandidate(("b", "d", "c"), (-0.7,) * 3),
                ScoredCandidate(("d", "a", "b", "a"), (-0.7,) * 4),
                ScoredCandidate(
                    ("d", "c", "c", "d", "b", "b", "a", "b", "b", "b"), (-0.7,) * 10
                ),
            ),
        )
        fused = candidate_soups(cset)
        lattice = build_lattice(prepared(cset))
        assert oracle_best(lattice) == fused.tokens

    def test_matches_greedy_fusion_on_random_sets(self):
        rng = random.Random(32)
        for _ in range(300):
            cset = random_candidate_set(rng)
            fused = candidate_soups(cset)
            lattice = build_lattice(prepared(cset))
            assert oracle_best(lattice) == fused.tokens
            assert fused.tokens in enumerate_paths(lattice)

    def test_every_deduped_candidate_is_a_path(self):
        rng = random.Random(33)
        for _ in range(100):
            cset = prepared(random_candidate_set(rng, max_len=8))
            paths = set(enumerate_paths(build_lattice(cset)))
            for cand in cset.candidates:
                assert cand.tokens in paths
