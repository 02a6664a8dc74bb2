"""Immutable graph snapshots, snapshot sequences, and window aggregation.

A dynamic network is represented as a :class:`GraphSequence`: an ordered list
of simple undirected :class:`Graph` snapshots over one fixed node set.  Nodes
are dense integers ``0..n-1``; mapping external labels to indices is the job
of :mod:`netscale.seqio`.

Unordered node pairs are also addressed by a flat "pair index": position of
``(u, v)``, ``u < v``, in the lexicographic enumeration ``(0,1), (0,2), ...,
(n-2,n-1)``.  The numeric kernels in :mod:`netscale.predictors` and
:mod:`netscale.evaluate` work in this index space.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Iterator

import numpy as np

Pair = tuple[int, int]


class InvalidWindowError(ValueError):
    """Window size outside ``1..sequence length``."""


class NodeCountMismatchError(ValueError):
    """Operation combined graphs that do not share a node set."""


def normalize_pair(u: int, v: int) -> Pair:
    """Return the canonical ``(min, max)`` form of an unordered pair."""
    if u == v:
        raise ValueError(f"self-loop ({u}, {v}) is not a valid pair")
    return (u, v) if u < v else (v, u)


def pair_count(node_count: int) -> int:
    """Number of unordered node pairs: n*(n-1)/2."""
    return node_count * (node_count - 1) // 2


def pair_index(node_count: int, u: int, v: int) -> int:
    """Flat index of pair ``{u, v}`` in lexicographic (min, max) order."""
    u, v = normalize_pair(u, v)
    return u * (2 * node_count - u - 1) // 2 + (v - u - 1)


@lru_cache(maxsize=8)
def pair_table(node_count: int) -> tuple[np.ndarray, np.ndarray]:
    """Arrays ``(us, vs)`` listing every pair in pair-index order.

    Memoized; the returned arrays are read-only and shared.
    """
    us, vs = np.triu_indices(node_count, k=1)
    us.setflags(write=False)
    vs.setflags(write=False)
    return us, vs


def pairs_to_indices(node_count: int, us: np.ndarray, vs: np.ndarray) -> np.ndarray:
    """Vectorized :func:`pair_index` for already-normalized pair arrays."""
    return us * (2 * node_count - us - 1) // 2 + (vs - us - 1)


@dataclass(frozen=True)
class Graph:
    """One snapshot: a simple undirected graph on nodes ``0..node_count-1``.

    Edges are stored as a frozenset of ``(min, max)`` tuples; any iterable of
    pairs is accepted and normalized at construction.  Instances are immutable
    (and hence safe to share across worker threads/processes); derived views
    such as the adjacency matrix are cached on first use.
    """

    node_count: int
    edges: frozenset[Pair] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if not isinstance(self.node_count, int) or self.node_count < 1:
            raise ValueError(f"node_count must be a positive integer, got {self.node_count!r}")
        normalized = frozenset(normalize_pair(u, v) for u, v in self.edges)
        for u, v in normalized:
            if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                raise ValueError(
                    f"edge ({u}, {v}) has an endpoint outside 0..{self.node_count - 1}"
                )
        object.__setattr__(self, "edges", normalized)

    @classmethod
    def from_pair_indices(cls, node_count: int, indices: np.ndarray) -> "Graph":
        """Build a graph from flat pair indices (see :func:`pair_index`)."""
        idx = np.unique(np.asarray(indices, dtype=np.int64))
        if idx.size and (idx[0] < 0 or idx[-1] >= pair_count(node_count)):
            raise ValueError("pair index outside the pair universe")
        us, vs = pair_table(node_count)
        g = cls(node_count, frozenset(zip(us[idx].tolist(), vs[idx].tolist())))
        idx.setflags(write=False)
        g.__dict__["pair_indices"] = idx  # pre-seed the cached view
        return g

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return normalize_pair(u, v) in self.edges

    @cached_property
    def pair_indices(self) -> np.ndarray:
        """Sorted flat pair indices of the edge set (int64, read-only)."""
        if not self.edges:
            idx = np.empty(0, dtype=np.int64)
        else:
            arr = np.array(sorted(self.edges), dtype=np.int64)
            idx = pairs_to_indices(self.node_count, arr[:, 0], arr[:, 1])
        idx.setflags(write=False)
        return idx

    @cached_property
    def adjacency(self) -> np.ndarray:
        """Dense symmetric 0/1 adjacency matrix (float64, read-only)."""
        a = np.zeros((self.node_count, self.node_count))
        idx = self.pair_indices
        if idx.size:
            us, vs = pair_table(self.node_count)
            a[us[idx], vs[idx]] = 1.0
            a[vs[idx], us[idx]] = 1.0
        a.setflags(write=False)
        return a

    @cached_property
    def degrees(self) -> np.ndarray:
        """Degree of every node (int64, read-only)."""
        idx = self.pair_indices
        us, vs = pair_table(self.node_count)
        d = np.bincount(us[idx], minlength=self.node_count) + np.bincount(
            vs[idx], minlength=self.node_count
        )
        d = d.astype(np.int64)
        d.setflags(write=False)
        return d

    @cached_property
    def neighbor_sets(self) -> tuple[frozenset[int], ...]:
        """Neighborhood of every node as frozensets."""
        nbrs: list[set[int]] = [set() for _ in range(self.node_count)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return tuple(frozenset(s) for s in nbrs)

    def neighbors(self, u: int) -> frozenset[int]:
        return self.neighbor_sets[u]


@dataclass(frozen=True)
class GraphSequence:
    """An ordered, immutable list of snapshots sharing one node set."""

    snapshots: tuple[Graph, ...]

    def __post_init__(self) -> None:
        snaps = tuple(self.snapshots)
        if not snaps:
            raise ValueError("a sequence needs at least one snapshot")
        n = snaps[0].node_count
        for i, g in enumerate(snaps):
            if g.node_count != n:
                raise NodeCountMismatchError(
                    f"snapshot {i} has node_count {g.node_count}, expected {n}"
                )
        object.__setattr__(self, "snapshots", snaps)

    @property
    def node_count(self) -> int:
        return self.snapshots[0].node_count

    def __len__(self) -> int:
        return len(self.snapshots)

    def __iter__(self) -> Iterator[Graph]:
        return iter(self.snapshots)

    def __getitem__(self, i: int) -> Graph:
        return self.snapshots[i]

    @classmethod
    def from_edge_lists(cls, node_count: int, edge_lists: Iterable[Iterable[Pair]]) -> "GraphSequence":
        return cls(tuple(Graph(node_count, frozenset(e)) for e in edge_lists))


def aggregate(seq: GraphSequence, w: int) -> GraphSequence:
    """Merge every ``w`` consecutive snapshots into one by edge-set union.

    Output snapshot ``j`` is the union of input snapshots ``j*w .. (j+1)*w-1``;
    the output has exactly ``len(seq) // w`` snapshots, so a trailing partial
    window is dropped rather than emitted short.
    """
    length = len(seq)
    if not isinstance(w, int) or w < 1 or w > length:
        raise InvalidWindowError(f"window size {w!r} not in 1..{length}")
    out_len = length // w
    merged = []
    for j in range(out_len):
        edges: set[Pair] = set()
        for g in seq.snapshots[j * w : (j + 1) * w]:
            edges |= g.edges
        merged.append(Graph(seq.node_count, frozenset(edges)))
    return GraphSequence(tuple(merged))


def new_links(g_prev: Graph, g_next: Graph) -> set[Pair]:
    """Edges present in ``g_next`` but not in ``g_prev``."""
    if g_prev.node_count != g_next.node_count:
        raise NodeCountMismatchError(
            f"node counts differ: {g_prev.node_count} vs {g_next.node_count}"
        )
    return set(g_next.edges - g_prev.edges)


def non_edges(g: Graph) -> set[Pair]:
    """All unordered node pairs that are not edges of ``g``."""
    n = g.node_count
    return {
        (u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in g.edges
    }
