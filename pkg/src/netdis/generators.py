"""Seeded synthetic-network generators and closed-form fixtures.

All constructions are pure functions of their parameters and seed: the same
spec always yields the identical edge set.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .graph import Graph

FAMILIES = ("NW", "SF", "complete", "star", "path", "ring")


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters for one synthetic network.

    family: NW (small-world), SF (static-model scale-free) or a fixture.
    k is the even per-node lattice neighbor count (NW/ring), p the shortcut
    probability (NW), gamma the degree exponent (SF).
    """

    family: str
    n: int
    k: int = 6
    p: float = 0.0
    gamma: float = 3.0
    mean_degree: float = 6.0
    seed: int = 0

    def validate(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.family == "NW":
            if self.k % 2 != 0 or not 0 < self.k < self.n:
                raise ValueError("NW requires even k with 0 < k < n")
            if not 0.0 <= self.p <= 1.0:
                raise ValueError("p must lie in [0, 1]")
        if self.family == "SF":
            if self.gamma <= 2.0:
                raise ValueError("SF requires gamma > 2")
            if self.n < 10:
                raise ValueError("SF requires n >= 10")
        if self.family == "ring" and (self.k % 2 != 0 or not 0 < self.k < self.n):
            raise ValueError("ring requires even k with 0 < k < n")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "GeneratorSpec":
        spec = cls(**d)
        spec.validate()
        return spec


def build(spec: GeneratorSpec) -> Graph:
    spec.validate()
    if spec.family == "NW":
        return newman_watts(spec.n, spec.k, spec.p, spec.seed)
    if spec.family == "SF":
        return scale_free(spec.n, spec.gamma, spec.seed, mean_degree=spec.mean_degree)
    if spec.family == "ring":
        return ring(spec.n, spec.k // 2)
    return fixture(spec.family, spec.n)


def _lattice_edges(n: int, k: int) -> list[tuple[int, int]]:
    edges = []
    for i in range(n):
        for d in range(1, k // 2 + 1):
            j = (i + d) % n
            edges.append((min(i, j), max(i, j)))
    return sorted(set(edges))


def newman_watts(n: int, k: int, p: float, seed: int) -> Graph:
    """Small-world graph: ring lattice (k/2 neighbors each side) plus, per
    lattice link and with probability p, one shortcut between a uniformly
    chosen currently-unconnected node pair."""
    GeneratorSpec("NW", n, k=k, p=p).validate()
    rng = np.random.default_rng(seed)
    edges = _lattice_edges(n, k)
    present = set(edges)
    max_links = n * (n - 1) // 2
    for _ in range(len(edges)):
        if rng.random() >= p:
            continue
        if len(present) >= max_links:
            continue  # lattice is complete, nothing left to connect
        while True:
            u, v = rng.integers(0, n, size=2)
            if u == v:
                continue
            key = (min(u, v), max(u, v))
            if key not in present:
                present.add(key)
                edges.append(key)
                break
    return Graph(n, edges)


def scale_free(n: int, gamma: float, seed: int, mean_degree: float = 6.0) -> Graph:
    """Static-model scale-free graph with degree exponent gamma.

    Node i carries weight (i+1)^(-1/(gamma-1)); endpoints are sampled
    proportionally to weight and links placed (rejecting loops and
    duplicates) until mean_degree*n/2 links exist.
    """
    GeneratorSpec("SF", n, gamma=gamma, mean_degree=mean_degree).validate()
    rng = np.random.default_rng(seed)
    target = int(round(mean_degree * n / 2.0))
    if target > n * (n - 1) // 2:
        raise ValueError("mean_degree infeasible for this n")
    weights = (np.arange(1, n + 1, dtype=np.float64)) ** (-1.0 / (gamma - 1.0))
    cum = np.cumsum(weights)
    cum /= cum[-1]
    present: set[tuple[int, int]] = set()
    edges: list[tuple[int, int]] = []
    attempts = 0
    cap = 200 * target
    while len(edges) < target:
        batch = max(256, 2 * (target - len(edges)))
        us = np.searchsorted(cum, rng.random(batch))
        vs = np.searchsorted(cum, rng.random(batch))
        for u, v in zip(us, vs):
            attempts += 1
            if attempts > cap:
                raise RuntimeError(
                    f"failed to place {target} links after {cap} attempts")
            if u == v:
                continue
            key = (min(u, v), max(u, v))
            if key in present:
                continue
            present.add(key)
            edges.append(key)
            if len(edges) == target:
                break
    return Graph(n, edges)


def complete(n: int) -> Graph:
    if n < 1:
        raise ValueError("complete graph needs n >= 1")
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star(n: int) -> Graph:
    """Hub-and-leaves star; node 0 is the center."""
    if n < 2:
        raise ValueError("star graph needs n >= 2")
    return Graph(n, [(0, i) for i in range(1, n)])


def path(n: int) -> Graph:
    if n < 2:
        raise ValueError("path graph needs n >= 2")
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def ring(n: int, half_width: int = 1) -> Graph:
    """Circulant ring where each node links to half_width neighbors per side."""
    if n < 2 * half_width + 1:
        raise ValueError("ring graph needs n >= 2*half_width + 1")
    return Graph(n, _lattice_edges(n, 2 * half_width))


def fixture(family: str, n: int) -> Graph:
    builders = {"complete": complete, "star": star, "path": path, "ring": ring}
    if family not in builders:
        raise ValueError(f"unknown fixture family {family!r}")
    return builders[family](n)
