"""Attack strategies: targeted enumeration over a rank-aggregated candidate
set, plus the baselines it is judged against (top-k centrality, collective
influence, tabu search, random removal).
"""

from __future__ import annotations

import itertools
import math
import time
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .aggregation import aggregate_rankings, candidate_set
from .centrality import ranking_for
from .connectivity import (
    BaselineEstimate,
    DegenerateBaselineError,
    GammaEvaluator,
    phi_from_values,
    random_baseline,
)
from .graph import Graph, NodeSet, as_node_set

PHI_TIE_TOL = 1e-12


@dataclass(frozen=True)
class TabuParams:
    """Knobs for the tabu search baseline."""

    tabu_length: int = 5
    candidates: int = 5
    stall_limit: int = 2000
    seed: int = 0

    def __post_init__(self):
        if min(self.tabu_length, self.candidates, self.stall_limit) < 1:
            raise ValueError("tabu parameters must be positive")


@dataclass(frozen=True)
class DisintegrationResult:
    """One strategy's outcome on one graph at one removal size."""

    strategy: str
    removed: NodeSet
    phi: float
    gamma_initial: float
    gamma_removed: float
    gamma_random: float
    evaluations: int
    wall_time_s: float
    seed: int | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        den = self.gamma_initial - self.gamma_random
        phi_check = (self.gamma_initial - self.gamma_removed) / den
        if abs(phi_check - self.phi) > 1e-9:
            raise ValueError("phi inconsistent with stored objective values")

    def to_json_dict(self, g: Graph) -> dict:
        return {
            "strategy": self.strategy,
            "removed": [g.labels[v] for v in self.removed],
            "phi": self.phi,
            "gamma_initial": self.gamma_initial,
            "gamma_removed": self.gamma_removed,
            "gamma_random": self.gamma_random,
            "evaluations": self.evaluations,
            "wall_time_s": self.wall_time_s,
            "seed": self.seed,
            "params": dict(self.params),
        }


def enumerate_combinations(nodes, n: int):
    """All size-n subsets of a node set, in lexicographic order of sorted ids."""
    ids = tuple(sorted(int(v) for v in nodes))
    if n > len(ids):
        raise ValueError(f"cannot choose {n} nodes from a set of {len(ids)}")
    return itertools.combinations(ids, n)


class _BestTracker:
    # Keeps the running maximum plus every candidate within the tie window,
    # so the final winner (lexicographically first among near-ties) does not
    # depend on chunking.
    def __init__(self):
        self.best_phi = -math.inf
        self.pool: list[tuple[float, tuple]] = []

    def offer(self, values, sets):
        m = float(np.max(values))
        if m > self.best_phi:
            self.best_phi = m
            self.pool = [(p, s) for p, s in self.pool if p >= m - PHI_TIE_TOL]
        thr = self.best_phi - PHI_TIE_TOL
        for p, s in zip(values, sets):
            if p >= thr:
                self.pool.append((float(p), s))

    def winner(self) -> tuple:
        thr = self.best_phi - PHI_TIE_TOL
        for p, s in self.pool:
            if p >= thr:
                return s
        raise RuntimeError("no candidate evaluated")


def _aggregated_ranking(g: Graph, criteria: str):
    if not criteria:
        raise ValueError("need at least one criterion")
    return aggregate_rankings([ranking_for(g, tag) for tag in criteria])


def _ensure_baseline(g, n, baseline, method, trials, seed):
    if baseline is None:
        return random_baseline(g, n, trials=trials, seed=seed, method=method)
    if baseline.n_removed != n:
        raise ValueError("baseline was computed for a different removal size")
    return baseline


def targeted_enumeration(g: Graph, n: int, alpha: float, criteria: str = "DBE",
                         method: str = "auto",
                         baseline: BaselineEstimate | None = None,
                         baseline_trials: int = 100, baseline_seed: int = 0,
                         threads: int = 1,
                         chunk_size: int = 65536) -> DisintegrationResult:
    """Enumerate removal sets inside the rank-aggregated candidate set and
    return the one with the largest disintegration effect.

    alpha controls the candidate-set size (alpha=1 is exhaustive search);
    near-ties in the effect (within 1e-12) resolve to the lexicographically
    smallest id tuple so results are reproducible under any evaluation
    schedule.
    """
    if not 1 <= n < g.n:
        raise ValueError("need 1 <= n < N")
    start = time.perf_counter()
    agg = _aggregated_ranking(g, criteria)
    cand = candidate_set(agg, n, alpha)
    ev = GammaEvaluator(g, method, threads=threads)
    gamma_g = ev.full()
    baseline = _ensure_baseline(g, n, baseline, method, baseline_trials,
                                baseline_seed)
    den = gamma_g - baseline.mean
    if abs(den) < 1e-12:
        raise DegenerateBaselineError(
            "random baseline is indistinguishable from the intact value")
    tracker = _BestTracker()
    combos = enumerate_combinations(cand, n)
    evaluated = 0
    while True:
        chunk = list(itertools.islice(combos, chunk_size))
        if not chunk:
            break
        values = (gamma_g - ev.batch(chunk)) / den
        tracker.offer(values, chunk)
        evaluated += len(chunk)
    expected = math.comb(len(cand), n)
    if evaluated != expected:
        raise RuntimeError("enumeration count must equal C(|candidates|, n)")
    winner = tracker.winner()
    gamma_hat = ev.without(winner)
    phi = phi_from_values(gamma_g, gamma_hat, baseline)
    return DisintegrationResult(
        strategy="te", removed=as_node_set(winner, g.n), phi=phi,
        gamma_initial=gamma_g, gamma_removed=gamma_hat,
        gamma_random=baseline.mean, evaluations=evaluated,
        wall_time_s=time.perf_counter() - start,
        params={"alpha": alpha, "criteria": criteria,
                "candidate_size": len(cand), "method": ev.method})


def centrality_attack(g: Graph, criterion: str, n: int) -> NodeSet:
    """Top-n nodes of one static centrality ranking (computed once on G)."""
    if n >= g.n:
        raise ValueError("need n < N")
    return tuple(sorted(ranking_for(g, criterion).top(n)))


def collective_influence(g: Graph, radius: int, n: int) -> NodeSet:
    """Adaptive collective-influence attack.

    Repeats n times on the shrinking residual graph: score each node by
    (degree-1) times the summed (degree-1) over nodes at geodesic distance
    exactly ``radius``, then remove the highest scorer (ties toward the
    lower id).
    """
    if radius < 1:
        raise ValueError("radius must be >= 1")
    if n >= g.n:
        raise ValueError("need n < N")
    indptr, indices = g.indptr, g.indices
    alive = np.ones(g.n, dtype=bool)
    deg = g.degrees.astype(np.int64).copy()
    removed = []
    dist = np.full(g.n, -1, dtype=np.int64)
    queue = np.empty(g.n, dtype=np.int64)
    for _ in range(n):
        best_score, best_node = -1, -1
        for s in range(g.n):
            if not alive[s]:
                continue
            boundary = 0
            dist[s] = 0
            queue[0] = s
            head, tail = 0, 1
            while head < tail:
                v = queue[head]
                head += 1
                dv = dist[v]
                if dv == radius:
                    break  # BFS is level-ordered; nothing shallower remains
                for w in indices[indptr[v]:indptr[v + 1]]:
                    if alive[w] and dist[w] < 0:
                        dist[w] = dv + 1
                        queue[tail] = w
                        tail += 1
                        if dv + 1 == radius:
                            boundary += deg[w] - 1
            score = (deg[s] - 1) * boundary
            dist[queue[:tail]] = -1
            if score > best_score:
                best_score, best_node = score, s
        alive[best_node] = False
        for w in indices[indptr[best_node]:indptr[best_node + 1]]:
            deg[w] -= 1
        removed.append(best_node)
    return tuple(sorted(removed))


def tabu_search(g: Graph, n: int, params: TabuParams = TabuParams(),
                method: str = "auto",
                baseline: BaselineEstimate | None = None,
                criteria: str = "DBE", baseline_trials: int = 100,
                baseline_seed: int = 0, threads: int = 1) -> DisintegrationResult:
    """Swap-neighborhood tabu search over size-n removal sets.

    Starts from the top-n of the aggregated ranking. Each iteration draws
    ``params.candidates`` single-swap neighbors (uniform in-node, uniform
    out-node); a neighbor whose entering node is tabu is skipped unless it
    beats the best effect found so far. The best admissible neighbor is
    adopted and its entering node pushed onto the FIFO tabu list. Stops
    after ``params.stall_limit`` iterations without improving the incumbent.
    """
    if not 1 <= n < g.n:
        raise ValueError("need 1 <= n < N")
    start = time.perf_counter()
    rng = np.random.default_rng(params.seed)
    ev = GammaEvaluator(g, method, threads=threads)
    gamma_g = ev.full()
    baseline = _ensure_baseline(g, n, baseline, method, baseline_trials,
                                baseline_seed)
    den = gamma_g - baseline.mean
    if abs(den) < 1e-12:
        raise DegenerateBaselineError(
            "random baseline is indistinguishable from the intact value")
    evals_before = ev.evaluations
    cache: dict[tuple, float] = {}

    def gamma_of(sets):
        missing = [s for s in sets if s not in cache]
        if missing:
            for s, value in zip(missing, ev.batch(missing)):
                cache[s] = float(value)
        return [cache[s] for s in sets]

    current = tuple(sorted(_aggregated_ranking(g, criteria).top(n)))
    best_set = current
    best_phi = (gamma_g - gamma_of([current])[0]) / den
    tabu: deque[int] = deque(maxlen=params.tabu_length)
    in_current = np.zeros(g.n, dtype=bool)
    stall = 0
    while stall < params.stall_limit:
        in_current[:] = False
        in_current[list(current)] = True
        out_nodes = np.nonzero(~in_current)[0]
        moves = []
        for _ in range(params.candidates):
            leaving = current[rng.integers(n)]
            entering = int(out_nodes[rng.integers(len(out_nodes))])
            moves.append((leaving, entering))
        neighbor_sets = [tuple(sorted(set(current) - {lv} | {en}))
                         for lv, en in moves]
        phis = [(gamma_g - gam) / den for gam in gamma_of(neighbor_sets)]
        chosen = None
        chosen_phi = -math.inf
        for (leaving, entering), s, p in zip(moves, neighbor_sets, phis):
            if entering in tabu and p <= best_phi:
                continue
            if p > chosen_phi:
                chosen, chosen_phi = (s, entering), p
        if chosen is None:
            stall += 1
            continue
        current = chosen[0]
        tabu.append(chosen[1])
        if chosen_phi > best_phi:
            best_phi, best_set = chosen_phi, current
            stall = 0
        else:
            stall += 1
    gamma_hat = cache[best_set]
    return DisintegrationResult(
        strategy="tabu", removed=as_node_set(best_set, g.n),
        phi=phi_from_values(gamma_g, gamma_hat, baseline),
        gamma_initial=gamma_g, gamma_removed=gamma_hat,
        gamma_random=baseline.mean, evaluations=ev.evaluations - evals_before,
        wall_time_s=time.perf_counter() - start, seed=params.seed,
        params={"tabu_length": params.tabu_length,
                "candidates": params.candidates,
                "stall_limit": params.stall_limit, "criteria": criteria,
                "method": ev.method})


def random_attack(g: Graph, n: int, seed: int) -> NodeSet:
    """Uniform random n-subset, reproducible per seed."""
    if n > g.n:
        raise ValueError("need n <= N")
    rng = np.random.default_rng(seed)
    return tuple(sorted(int(v) for v in rng.choice(g.n, size=n, replace=False)))


def evaluate_removal(g: Graph, strategy: str, removed, baseline: BaselineEstimate,
                     method: str = "auto", wall_time_s: float = 0.0,
                     seed: int | None = None,
                     params: dict | None = None) -> DisintegrationResult:
    """Wrap a set-valued strategy's output in a full result record."""
    s = as_node_set(removed, g.n)
    ev = GammaEvaluator(g, method)
    gamma_g = ev.full()
    gamma_hat = ev.without(s)
    return DisintegrationResult(
        strategy=strategy, removed=s,
        phi=phi_from_values(gamma_g, gamma_hat, baseline),
        gamma_initial=gamma_g, gamma_removed=gamma_hat,
        gamma_random=baseline.mean, evaluations=1,
        wall_time_s=wall_time_s, seed=seed, params=params or {})
