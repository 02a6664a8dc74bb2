"""Structural similarity scores over node pairs and top-k link prediction.

Four scores are provided, each usable pairwise (readable reference form) or
in batch over all pairs at once (vectorized form used by the sweep machinery):

* ``adamic_adar``       - sum of 1/ln(degree) over common neighbors
* ``katz``              - beta-discounted count of walks of every length
* ``graph_distance``    - negated shortest-path hop count (BFS)
* ``rooted_pagerank``   - symmetrized stationary mass of a restarting walk

Scores are symmetric in ``(x, y)``.  Batch and pairwise forms agree to
floating-point accumulation order (tested at 1e-9 or tighter); Katz and
rooted PageRank additionally ship independent dense linear-solve reference
implementations used to cross-check the iterative production paths.
"""

from __future__ import annotations

import math
import warnings
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Sequence

import numpy as np

from .graphs import Graph, Pair, normalize_pair, pair_table

DEFAULT_KATZ_BETA = 0.005
DEFAULT_PAGERANK_ALPHA = 0.15
DEFAULT_KATZ_TOLERANCE = 1e-9
DEFAULT_PAGERANK_TOLERANCE = 1e-10
DEFAULT_MAX_ITERATIONS = 10_000

UNREACHABLE = float("-inf")


class DivergenceError(ValueError):
    """Katz series cannot converge: beta * spectral_radius >= 1."""


class IterationLimitError(RuntimeError):
    """An iterative solver did not reach its tolerance within max_iterations."""


class PredictionTruncationWarning(RuntimeWarning):
    """Asked for more predictions than there are candidates."""


class ScoreKind(Enum):
    ADAMIC_ADAR = "adamic-adar"
    KATZ = "katz"
    GRAPH_DISTANCE = "graph-distance"
    ROOTED_PAGERANK = "rooted-pagerank"


@dataclass(frozen=True)
class PredictorConfig:
    """Which similarity score to use, plus its numeric parameters.

    ``beta`` is consulted only for Katz, ``alpha`` only for rooted PageRank.
    ``katz_tolerance`` bounds the truncated-series tail, ``pagerank_tolerance``
    is an L1 stopping threshold for power iteration.
    """

    kind: ScoreKind
    beta: float = DEFAULT_KATZ_BETA
    alpha: float = DEFAULT_PAGERANK_ALPHA
    katz_tolerance: float = DEFAULT_KATZ_TOLERANCE
    pagerank_tolerance: float = DEFAULT_PAGERANK_TOLERANCE
    max_iterations: int = DEFAULT_MAX_ITERATIONS

    def __post_init__(self) -> None:
        if not isinstance(self.kind, ScoreKind):
            raise ValueError(f"kind must be a ScoreKind, got {self.kind!r}")
        if self.beta <= 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.katz_tolerance <= 0 or self.pagerank_tolerance <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


class ScoredPair(NamedTuple):
    pair: Pair
    score: float


def _check_pair(g: Graph, x: int, y: int) -> None:
    if x == y:
        raise ValueError(f"scores are defined for distinct nodes, got x == y == {x}")
    n = g.node_count
    if not (0 <= x < n and 0 <= y < n):
        raise ValueError(f"nodes ({x}, {y}) outside 0..{n - 1}")


def spectral_radius(g: Graph) -> float:
    """Largest absolute eigenvalue of the adjacency matrix."""
    if not g.edges:
        return 0.0
    return float(np.abs(np.linalg.eigvalsh(g.adjacency)).max())


# -- Adamic-Adar -------------------------------------------------------------

def adamic_adar(g: Graph, x: int, y: int) -> float:
    """Sum of 1/ln|Gamma(z)| over common neighbors z of x and y.

    Natural logarithm.  A common neighbor always has degree >= 2 (it is
    adjacent to both x and y), so every term is finite and positive.
    """
    _check_pair(g, x, y)
    total = 0.0
    for z in sorted(g.neighbors(x) & g.neighbors(y)):
        dz = len(g.neighbors(z))
        assert dz >= 2, "common neighbor must touch both endpoints"
        total += 1.0 / math.log(dz)
    return total


def _adamic_adar_matrix(g: Graph) -> np.ndarray:
    deg = g.degrees.astype(float)
    # degree-1 nodes can never be common neighbors; zero weight avoids 1/log(1)
    weights = np.where(deg >= 2, 1.0 / np.log(np.maximum(deg, 2.0)), 0.0)
    a = g.adjacency
    return (a * weights) @ a


# -- Katz --------------------------------------------------------------------

def _katz_decay(g: Graph, beta: float) -> float:
    decay = beta * spectral_radius(g)
    if decay >= 1.0:
        raise DivergenceError(
            f"beta={beta} times spectral radius {decay / beta:.6g} is >= 1; "
            "the walk series diverges"
        )
    return decay


def katz(
    g: Graph,
    x: int,
    y: int,
    beta: float = DEFAULT_KATZ_BETA,
    *,
    tolerance: float = DEFAULT_KATZ_TOLERANCE,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> float:
    """Sum over path lengths l >= 1 of beta**l times the number of
    length-l walks from x to y.

    Computed by truncated series summation; iteration stops once the
    remaining tail, bounded through the spectral radius, drops below
    ``tolerance``.  See :func:`katz_via_solve` for the independent
    linear-solve form.
    """
    _check_pair(g, x, y)
    decay = _katz_decay(g, beta)
    a = g.adjacency
    walk = np.zeros(g.node_count)
    walk[x] = 1.0
    total = 0.0
    tail = decay / (1.0 - decay) if decay > 0 else 0.0
    for _ in range(max_iterations):
        walk = beta * (a @ walk)
        total += float(walk[y])
        tail *= decay
        if tail < tolerance:
            return total
    raise IterationLimitError(
        f"katz series still above tolerance after {max_iterations} terms"
    )


def katz_via_solve(g: Graph, x: int, y: int, beta: float = DEFAULT_KATZ_BETA) -> float:
    """Katz score through the closed form (I - beta*A)^-1 - I.

    Dense reference path, independent of the truncated series; intended for
    cross-checks and small graphs.
    """
    _check_pair(g, x, y)
    _katz_decay(g, beta)
    return float(_katz_matrix_via_solve(g, beta)[x, y])


def _katz_matrix_via_solve(g: Graph, beta: float) -> np.ndarray:
    n = g.node_count
    a = g.adjacency
    return np.linalg.solve(np.eye(n) - beta * a, beta * a)


def _katz_matrix(
    g: Graph, beta: float, tolerance: float, max_iterations: int
) -> np.ndarray:
    decay = _katz_decay(g, beta)
    n = g.node_count
    a = g.adjacency
    term = np.eye(n)
    total = np.zeros((n, n))
    tail = decay / (1.0 - decay) if decay > 0 else 0.0
    for _ in range(max_iterations):
        term = beta * (a @ term)
        total += term
        tail *= decay
        if tail < tolerance:
            return total
    raise IterationLimitError(
        f"katz series still above tolerance after {max_iterations} terms"
    )


# -- Graph distance ----------------------------------------------------------

def bfs_distances(g: Graph, root: int) -> np.ndarray:
    """Hop counts from ``root`` to every node; -1 where unreachable."""
    dist = np.full(g.node_count, -1, dtype=np.int64)
    dist[root] = 0
    queue = deque([root])
    nbrs = g.neighbor_sets
    while queue:
        u = queue.popleft()
        du = dist[u]
        for v in nbrs[u]:
            if dist[v] < 0:
                dist[v] = du + 1
                queue.append(v)
    return dist


def graph_distance(g: Graph, x: int, y: int) -> float:
    """Negated shortest-path distance; -inf when x and y are disconnected."""
    _check_pair(g, x, y)
    d = bfs_distances(g, x)[y]
    return UNREACHABLE if d < 0 else -float(d)


def _graph_distance_matrix(g: Graph) -> np.ndarray:
    n = g.node_count
    scores = np.empty((n, n))
    for root in range(n):
        d = bfs_distances(g, root)
        row = -d.astype(float)
        row[d < 0] = UNREACHABLE
        scores[root] = row
    return scores


# -- Rooted PageRank ---------------------------------------------------------

def pagerank_vector(
    g: Graph,
    root: int,
    alpha: float = DEFAULT_PAGERANK_ALPHA,
    *,
    tolerance: float = DEFAULT_PAGERANK_TOLERANCE,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> np.ndarray:
    """Stationary distribution of the restarting walk rooted at ``root``.

    The walk teleports to ``root`` with probability ``alpha`` and otherwise
    steps to a uniformly random neighbor; at a degree-0 node the step becomes
    a jump to the root, keeping the chain stochastic.  Power iteration from
    ``e_root``, stopping when the L1 change drops below ``tolerance``.
    """
    n = g.node_count
    if not (0 <= root < n):
        raise ValueError(f"root {root} outside 0..{n - 1}")
    a = g.adjacency
    deg = g.degrees.astype(float)
    nonzero = deg > 0
    inv_deg = np.where(nonzero, 1.0 / np.where(nonzero, deg, 1.0), 0.0)
    dangling = ~nonzero
    pi = np.zeros(n)
    pi[root] = 1.0
    for _ in range(max_iterations):
        nxt = (1.0 - alpha) * (a @ (pi * inv_deg))
        nxt[root] += alpha + (1.0 - alpha) * float(pi[dangling].sum())
        if float(np.abs(nxt - pi).sum()) < tolerance:
            return nxt
        pi = nxt
    raise IterationLimitError(
        f"pagerank power iteration did not converge in {max_iterations} steps"
    )


def rooted_pagerank(
    g: Graph,
    x: int,
    y: int,
    alpha: float = DEFAULT_PAGERANK_ALPHA,
    *,
    tolerance: float = DEFAULT_PAGERANK_TOLERANCE,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> float:
    """Stationary probability of y under the walk rooted at x, plus the
    stationary probability of x under the walk rooted at y."""
    _check_pair(g, x, y)
    kwargs = {"tolerance": tolerance, "max_iterations": max_iterations}
    pi_x = pagerank_vector(g, x, alpha, **kwargs)
    pi_y = pagerank_vector(g, y, alpha, **kwargs)
    return float(pi_x[y] + pi_y[x])


def pagerank_vector_via_solve(g: Graph, root: int, alpha: float = DEFAULT_PAGERANK_ALPHA) -> np.ndarray:
    """Dense linear-solve reference for :func:`pagerank_vector`."""
    n = g.node_count
    a = g.adjacency
    deg = g.degrees.astype(float)
    nonzero = deg > 0
    move = np.where(nonzero, 1.0 / np.where(nonzero, deg, 1.0), 0.0) * a  # move[j,i]: i -> j
    move[root, ~nonzero] = 1.0
    rhs = np.zeros(n)
    rhs[root] = alpha
    return np.linalg.solve(np.eye(n) - (1.0 - alpha) * move, rhs)


def rooted_pagerank_via_solve(g: Graph, x: int, y: int, alpha: float = DEFAULT_PAGERANK_ALPHA) -> float:
    """Dense linear-solve reference for :func:`rooted_pagerank`."""
    _check_pair(g, x, y)
    return float(
        pagerank_vector_via_solve(g, x, alpha)[y]
        + pagerank_vector_via_solve(g, y, alpha)[x]
    )


def _pagerank_matrix(
    g: Graph, alpha: float, tolerance: float, max_iterations: int
) -> np.ndarray:
    """Column u holds the stationary distribution rooted at u."""
    n = g.node_count
    a = g.adjacency
    deg = g.degrees.astype(float)
    nonzero = deg > 0
    inv_deg = np.where(nonzero, 1.0 / np.where(nonzero, deg, 1.0), 0.0)
    dangling = ~nonzero
    diag = np.arange(n)
    x = np.eye(n)
    for _ in range(max_iterations):
        nxt = (1.0 - alpha) * (a @ (x * inv_deg[:, None]))
        nxt[diag, diag] += alpha + (1.0 - alpha) * x[dangling].sum(axis=0)
        if float(np.abs(nxt - x).sum(axis=0).max()) < tolerance:
            return nxt
        x = nxt
    raise IterationLimitError(
        f"pagerank power iteration did not converge in {max_iterations} steps"
    )


# -- Batch scoring and prediction --------------------------------------------

def score_matrix(g: Graph, cfg: PredictorConfig) -> np.ndarray:
    """Symmetric matrix of similarity scores for every node pair.

    The diagonal is not meaningful; callers read off-diagonal entries only.
    """
    if cfg.kind is ScoreKind.ADAMIC_ADAR:
        return _adamic_adar_matrix(g)
    if cfg.kind is ScoreKind.KATZ:
        return _katz_matrix(g, cfg.beta, cfg.katz_tolerance, cfg.max_iterations)
    if cfg.kind is ScoreKind.GRAPH_DISTANCE:
        return _graph_distance_matrix(g)
    if cfg.kind is ScoreKind.ROOTED_PAGERANK:
        x = _pagerank_matrix(g, cfg.alpha, cfg.pagerank_tolerance, cfg.max_iterations)
        return x + x.T
    raise ValueError(f"unknown score kind {cfg.kind!r}")


def score_pairwise(g: Graph, x: int, y: int, cfg: PredictorConfig) -> float:
    """Single-pair form of :func:`score_matrix` (reference path)."""
    if cfg.kind is ScoreKind.ADAMIC_ADAR:
        return adamic_adar(g, x, y)
    if cfg.kind is ScoreKind.KATZ:
        return katz(g, x, y, cfg.beta, tolerance=cfg.katz_tolerance,
                    max_iterations=cfg.max_iterations)
    if cfg.kind is ScoreKind.GRAPH_DISTANCE:
        return graph_distance(g, x, y)
    if cfg.kind is ScoreKind.ROOTED_PAGERANK:
        return rooted_pagerank(g, x, y, cfg.alpha, tolerance=cfg.pagerank_tolerance,
                               max_iterations=cfg.max_iterations)
    raise ValueError(f"unknown score kind {cfg.kind!r}")


def score_all_non_edges(g: Graph, cfg: PredictorConfig) -> list[ScoredPair]:
    """Score every non-edge of ``g``, in lexicographic pair order."""
    us, vs = pair_table(g.node_count)
    scores = score_matrix(g, cfg)[us, vs]
    mask = np.ones(us.shape[0], dtype=bool)
    mask[g.pair_indices] = False
    return [
        ScoredPair((int(u), int(v)), float(s))
        for u, v, s in zip(us[mask], vs[mask], scores[mask])
    ]


def top_k_indices(scores: np.ndarray, k: int) -> np.ndarray:
    """Positions of the k largest scores; ties resolved to lower positions.

    Vectorized twin of :func:`predict_top_k` over a score vector whose
    positions follow lexicographic pair order.  Returns sorted positions.
    """
    m = int(scores.shape[0])
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    if k == 0:
        return np.empty(0, dtype=np.int64)
    if k >= m:
        return np.arange(m, dtype=np.int64)
    selected = np.argpartition(-scores, k - 1)[:k]
    threshold = scores[selected].min()
    greater = np.flatnonzero(scores > threshold)
    ties = np.flatnonzero(scores == threshold)[: k - greater.size]
    return np.sort(np.concatenate([greater, ties]))


def predict_top_k(scored: Sequence[ScoredPair], k: int) -> set[Pair]:
    """The k highest-scored pairs, as a set.

    Ties are broken deterministically: among equal scores, pairs are taken in
    ascending lexicographic order of their normalized ``(min, max)`` form.
    Asking for more pairs than were scored returns everything and emits a
    :class:`PredictionTruncationWarning` (usually a sign of inconsistent
    inputs upstream).
    """
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    if k > len(scored):
        warnings.warn(
            f"requested top {k} of {len(scored)} scored pairs; returning all",
            PredictionTruncationWarning,
            stacklevel=2,
        )
        k = len(scored)
    ranked = sorted(scored, key=lambda sp: (-sp.score, sp.pair))
    return {normalize_pair(*sp.pair) for sp in ranked[:k]}
