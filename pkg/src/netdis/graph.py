"""Simple undirected graph over dense node ids, plus edge-list ingestion.

A :class:`Graph` is immutable once built: adjacency lives in CSR arrays,
labels map external names to dense ids 0..N-1. Ingestion symmetrizes
directed inputs, drops self loops and collapses duplicate links, counting
what it dropped.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

NodeSet = tuple[int, ...]


class GraphFormatError(ValueError):
    """Malformed edge-list input; carries the 1-based line number."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


@dataclass(frozen=True)
class IngestStats:
    """Counters for silently repaired input (loops dropped, links collapsed)."""

    loops_dropped: int = 0
    duplicates_dropped: int = 0


class Graph:
    """Immutable simple undirected unweighted graph.

    Parameters
    ----------
    n : number of nodes (ids 0..n-1)
    edges : (m, 2) array-like of node id pairs; duplicates, reversed copies
        and self loops are tolerated and collapsed.
    labels : optional sequence of external labels, one per id.
    """

    __slots__ = ("n", "indptr", "indices", "labels", "_label_to_id",
                 "ingest_stats", "source_ids", "_degrees")

    def __init__(self, n, edges, labels=None, ingest_stats=None, source_ids=None):
        if n < 0:
            raise ValueError("node count must be nonnegative")
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if len(edges):
            if edges.min() < 0 or edges.max() >= n:
                raise ValueError("edge endpoint out of range")
            u = np.minimum(edges[:, 0], edges[:, 1])
            v = np.maximum(edges[:, 0], edges[:, 1])
            ok = u != v
            pairs = np.unique(np.stack([u[ok], v[ok]], axis=1), axis=0)
        else:
            pairs = np.empty((0, 2), dtype=np.int64)
        both = np.concatenate([pairs, pairs[:, ::-1]], axis=0)
        order = np.lexsort((both[:, 1], both[:, 0]))
        both = both[order]
        self.n = int(n)
        counts = np.bincount(both[:, 0], minlength=n) if n else np.zeros(0, dtype=np.int64)
        self.indptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int32)
        self.indices = both[:, 1].astype(np.int32)
        self.indptr.flags.writeable = False
        self.indices.flags.writeable = False
        if labels is None:
            labels = tuple(str(i) for i in range(n))
        else:
            labels = tuple(str(x) for x in labels)
            if len(labels) != n:
                raise ValueError("labels length must equal node count")
        self.labels = labels
        self._label_to_id = {lab: i for i, lab in enumerate(labels)}
        self.ingest_stats = ingest_stats
        self.source_ids = source_ids
        self._degrees = None

    @property
    def node_count(self) -> int:
        return self.n

    @property
    def link_count(self) -> int:
        return len(self.indices) // 2

    @property
    def degrees(self) -> np.ndarray:
        if self._degrees is None:
            d = np.diff(self.indptr).astype(np.int64)
            d.flags.writeable = False
            self._degrees = d
        return self._degrees

    def degree(self, v: int) -> int:
        self._check_node(v)
        return int(self.indptr[v + 1] - self.indptr[v])

    def neighbors(self, v: int) -> np.ndarray:
        self._check_node(v)
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.neighbors(u)
        i = np.searchsorted(nbrs, v)
        return bool(i < len(nbrs) and nbrs[i] == v)

    def edges(self) -> np.ndarray:
        """(W, 2) array of links with u < v, sorted ascending."""
        src = np.repeat(np.arange(self.n, dtype=np.int32), np.diff(self.indptr))
        mask = src < self.indices
        return np.stack([src[mask], self.indices[mask]], axis=1)

    def adjacency(self) -> np.ndarray:
        """Dense symmetric 0/1 adjacency matrix (float64)."""
        a = np.zeros((self.n, self.n))
        e = self.edges()
        a[e[:, 0], e[:, 1]] = 1.0
        a[e[:, 1], e[:, 0]] = 1.0
        return a

    def id_of(self, label: str) -> int:
        return self._label_to_id[str(label)]

    def _check_node(self, v):
        if not 0 <= v < self.n:
            raise ValueError(f"node id {v} out of range 0..{self.n - 1}")

    def __repr__(self):
        return f"Graph(N={self.n}, W={self.link_count})"


def parse_edge_list(text) -> Graph:
    """Parse an edge list (one link per line) into a normalized Graph.

    Node tokens may be arbitrary strings and are mapped to dense ids in
    first-appearance order. Lines starting with '#' or '%' are comments;
    tokens are separated by whitespace or commas. Directed duplicates are
    symmetrized, self loops dropped, parallel links collapsed; the returned
    graph's ``ingest_stats`` counts both repairs.
    """
    if hasattr(text, "read"):
        text = text.read()
    label_to_id: dict[str, int] = {}
    edges = []
    seen = set()
    loops = 0
    dupes = 0
    any_line = False
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] in "#%":
            continue
        any_line = True
        tokens = line.replace(",", " ").split()
        if len(tokens) != 2:
            raise GraphFormatError(
                f"expected 2 node tokens, found {len(tokens)}", line_no)
        ids = []
        for tok in tokens:
            if tok not in label_to_id:
                label_to_id[tok] = len(label_to_id)
            ids.append(label_to_id[tok])
        u, v = ids
        if u == v:
            loops += 1
            continue
        key = (u, v) if u < v else (v, u)
        if key in seen:
            dupes += 1
            continue
        seen.add(key)
        edges.append(key)
    if not any_line:
        raise GraphFormatError("empty edge list")
    labels = [None] * len(label_to_id)
    for lab, i in label_to_id.items():
        labels[i] = lab
    return Graph(len(labels), edges, labels=labels,
                 ingest_stats=IngestStats(loops, dupes))


def to_edge_list(g: Graph) -> str:
    """Serialize as '# N=<n> W=<w>' header plus one 'u v' label pair per line,
    ascending ids."""
    lines = [f"# N={g.n} W={g.link_count}"]
    for u, v in g.edges():
        lines.append(f"{g.labels[u]} {g.labels[v]}")
    return "\n".join(lines) + "\n"


def as_node_set(nodes, n: int) -> NodeSet:
    """Validate and canonicalize a collection of node ids into a sorted tuple."""
    out = tuple(sorted(int(v) for v in nodes))
    for i, v in enumerate(out):
        if not 0 <= v < n:
            raise ValueError(f"node id {v} out of range 0..{n - 1}")
        if i and out[i - 1] == v:
            raise ValueError(f"duplicate node id {v}")
    return out


def indicator_from_nodes(nodes, n: int) -> np.ndarray:
    """Bit-indicator vector of length n for a node set (popcount == len)."""
    x = np.zeros(n, dtype=bool)
    x[list(as_node_set(nodes, n))] = True
    return x


def nodes_from_indicator(x) -> NodeSet:
    return tuple(int(v) for v in np.nonzero(np.asarray(x))[0])


def remove_nodes(g: Graph, nodes) -> Graph:
    """Induced subgraph after deleting ``nodes`` and all incident links.

    Remaining nodes are renumbered densely; the new graph's ``source_ids``
    records, per new id, the id it had in ``g``.
    """
    s = as_node_set(nodes, g.n)
    keep = np.ones(g.n, dtype=bool)
    keep[list(s)] = False
    old_ids = np.nonzero(keep)[0]
    new_id = -np.ones(g.n, dtype=np.int64)
    new_id[old_ids] = np.arange(len(old_ids))
    e = g.edges()
    mask = keep[e[:, 0]] & keep[e[:, 1]]
    mapped = new_id[e[mask]]
    return Graph(len(old_ids), mapped,
                 labels=[g.labels[i] for i in old_ids],
                 source_ids=tuple(int(i) for i in old_ids))


def degree(g: Graph, v: int) -> int:
    """Number of neighbors of ``v``."""
    return g.degree(v)
