"""Independent oracles used to cross-check production code paths."""

from __future__ import annotations

import math

import numpy as np
import scipy.sparse as sp
import scipy.sparse.csgraph as csgraph

from netscale import (
    Graph,
    PredictorConfig,
    new_links,
    non_edges,
    predict_top_k,
    score_all_non_edges,
)
from netscale.evaluate import ConfusionCounts, mcc


def brute_adamic_adar(g: Graph, x: int, y: int) -> float:
    """Common-neighbor enumeration straight off the adjacency matrix."""
    a = g.adjacency
    total = 0.0
    for z in range(g.node_count):
        if a[x, z] and a[y, z]:
            total += 1.0 / math.log(a[z].sum())
    return total


def bfs_distance_oracle(g: Graph) -> np.ndarray:
    """All-pairs hop counts via scipy's csgraph (inf where unreachable)."""
    if not g.edges:
        d = np.full((g.node_count, g.node_count), np.inf)
        np.fill_diagonal(d, 0.0)
        return d
    return csgraph.shortest_path(sp.csr_matrix(g.adjacency), method="D", unweighted=True)


def pearson_mcc(counts: ConfusionCounts) -> float:
    """Pearson correlation of the actual/predicted indicator vectors.

    Built from the raw 0/1 vectors with fsum accumulation; zero variance in
    either vector maps to 0.0 (the same convention the MCC uses).
    """
    tp, fp, fn, tn = counts
    actual = [1.0] * (tp + fn) + [0.0] * (fp + tn)
    predicted = [1.0] * tp + [0.0] * fn + [1.0] * fp + [0.0] * tn
    size = len(actual)
    if size == 0:
        return 0.0
    mean_a = math.fsum(actual) / size
    mean_p = math.fsum(predicted) / size
    cov = math.fsum((a - mean_a) * (p - mean_p) for a, p in zip(actual, predicted))
    var_a = math.fsum((a - mean_a) ** 2 for a in actual)
    var_p = math.fsum((p - mean_p) ** 2 for p in predicted)
    if var_a == 0.0 or var_p == 0.0:
        return 0.0
    return cov / math.sqrt(var_a * var_p)


def naive_score_pair(g_prev: Graph, g_next: Graph, cfg: PredictorConfig) -> float:
    """score_pair recomposed from the public pieces, one call at a time."""
    candidates = non_edges(g_prev)
    actual = new_links(g_prev, g_next) & candidates
    k = len(actual)
    predicted = predict_top_k(score_all_non_edges(g_prev, cfg), k)
    tp = len(predicted & actual)
    fp = len(predicted - actual)
    fn = len(actual - predicted)
    tn = len(candidates) - tp - fp - fn
    return mcc(ConfusionCounts(tp, fp, fn, tn))
