"""Graph-based rank aggregation and candidate-set extraction.

Strict per-criterion rankings turn into pairwise outranking counts (the
competition graph); each node is scored by its ratio of out- to in-degree
there, and the consensus ranking orders nodes by that ratio. The candidate
set for removal is a top prefix of the consensus ranking whose size is set
by the redundancy coefficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .centrality import Ranking, ScoreTable, rank_from_scores, ranking_for
from .graph import Graph, NodeSet


@dataclass(frozen=True)
class CompetitionGraph:
    """Directed outranking counts: matrix[s, t] = number of criteria ranking
    s above t. Off-diagonal entries of matrix + matrix.T all equal m."""

    matrix: np.ndarray
    m: int

    def __post_init__(self):
        a = self.matrix
        n = a.shape[0]
        if a.shape != (n, n):
            raise ValueError("competition matrix must be square")
        if np.any(np.diagonal(a) != 0):
            raise ValueError("competition matrix diagonal must be zero")
        total = a + a.T
        off = ~np.eye(n, dtype=bool)
        if n > 1 and np.any(total[off] != self.m):
            raise ValueError("a_st + a_ts must equal m for all s != t")


@dataclass(frozen=True)
class RoidTable:
    """Out-degree, in-degree and their smoothed ratio per node."""

    out_degree: np.ndarray
    in_degree: np.ndarray
    ratio: np.ndarray


def transition_matrix(r: Ranking) -> np.ndarray:
    """0/1 outranking matrix for one criterion: entry (s, t) is 1 iff s is
    ranked above t."""
    ranks = r.ranks
    return (ranks[:, None] < ranks[None, :]).astype(np.int32)


def competition_graph(rankings: list[Ranking]) -> CompetitionGraph:
    """Elementwise sum of the per-criterion transition matrices."""
    if not rankings:
        raise ValueError("need at least one ranking")
    n = len(rankings[0])
    acc = np.zeros((n, n), dtype=np.int32)
    for r in rankings:
        if len(r) != n:
            raise ValueError("rankings must cover the same node set")
        acc += transition_matrix(r)
    return CompetitionGraph(acc, len(rankings))


def roid_scores(cg: CompetitionGraph) -> RoidTable:
    """Ratio of out-in degrees, add-one smoothed: (d_out+1)/(d_in+1)."""
    out_deg = cg.matrix.sum(axis=1, dtype=np.int64)
    in_deg = cg.matrix.sum(axis=0, dtype=np.int64)
    ratio = (out_deg + 1.0) / (in_deg + 1.0)
    return RoidTable(out_deg, in_deg, ratio)


def _roid_ratio_direct(rankings: list[Ranking]) -> np.ndarray:
    # For strict rankings the competition out-degree of node j is
    # sum_i (N - r_ij), so the N x N matrix never needs materializing.
    n = len(rankings[0])
    out_deg = np.zeros(n, dtype=np.int64)
    for r in rankings:
        if len(r) != n:
            raise ValueError("rankings must cover the same node set")
        out_deg += n - r.ranks
    in_deg = len(rankings) * (n - 1) - out_deg
    return (out_deg + 1.0) / (in_deg + 1.0)


def aggregate_rankings(rankings: list[Ranking]) -> Ranking:
    """Consensus ranking: nodes ordered by descending out/in-degree ratio,
    ties toward the lower id."""
    if not rankings:
        raise ValueError("need at least one ranking")
    ratio = _roid_ratio_direct(rankings)
    return rank_from_scores(ScoreTable("RA", ratio))


def candidate_size(n_total: int, n_remove: int, alpha: float) -> int:
    """Candidate-set size: n + (N-n)*alpha, rounded half-up, clamped to
    [n, N]."""
    if not 1 <= n_remove <= n_total:
        raise ValueError("need 1 <= n <= N")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    size = int(math.floor(n_remove + (n_total - n_remove) * alpha + 0.5))
    return max(n_remove, min(n_total, size))


def candidate_set(ranking: Ranking, n_remove: int, alpha: float) -> NodeSet:
    """Top-ranked candidate nodes for removal (sorted ids)."""
    size = candidate_size(len(ranking), n_remove, alpha)
    return tuple(sorted(ranking.top(size)))


@dataclass(frozen=True)
class OverlapReport:
    """Candidate sets per criteria combination plus their intersections.

    ``sets[i]`` is the candidate set of ``combos[i]``; pairwise intersection
    cardinalities are keyed by combo positions so repeated combos stay
    distinguishable.
    """

    size: int
    combos: tuple
    sets: tuple
    pairwise: dict
    overall: int

    def set_for(self, combo: str) -> frozenset:
        return self.sets[self.combos.index(combo)]

    def to_json_dict(self, g: Graph) -> dict:
        return {
            "candidate_size": self.size,
            "combos": [
                {"criteria": c, "candidates": [g.labels[v] for v in sorted(s)]}
                for c, s in zip(self.combos, self.sets)
            ],
            "pairwise_overlap": [
                {"a": self.combos[i], "b": self.combos[j], "overlap": c}
                for (i, j), c in sorted(self.pairwise.items())
            ],
            "overall_overlap": self.overall,
        }


def overlap_analysis(g: Graph, criteria_combos, size: int) -> OverlapReport:
    """Candidate sets for several criteria combinations and how they overlap.

    Each combo is a string of criterion tags, e.g. "DBE" or "C". Reports the
    top-``size`` consensus nodes per combo, every pairwise intersection
    cardinality and the overall intersection cardinality.
    """
    combos = tuple(str(c) for c in criteria_combos)
    if not combos or any(len(c) == 0 for c in combos):
        raise ValueError("each combo must name at least one criterion")
    ranking_cache: dict[str, Ranking] = {}

    def tag_ranking(tag):
        if tag not in ranking_cache:
            ranking_cache[tag] = ranking_for(g, tag)
        return ranking_cache[tag]

    sets = []
    for combo in combos:
        rankings = [tag_ranking(tag) for tag in combo]
        agg = aggregate_rankings(rankings)
        sets.append(frozenset(agg.top(size)))
    pairwise = {}
    for i in range(len(combos)):
        for j in range(i + 1, len(combos)):
            pairwise[(i, j)] = len(sets[i] & sets[j])
    overall = len(frozenset.intersection(*sets))
    return OverlapReport(size, combos, tuple(sets), pairwise, overall)
