"""Window-size quality scoring for oversampled dynamic networks.

The central routine is :func:`sweep`: for every window size ``w`` from 1 up
to a third of the sequence length, aggregate the sequence at ``w``, run
top-k link prediction on every consecutive snapshot pair (or a seeded random
subsample of the pairs for long sequences), and record the mean Matthews
correlation coefficient.  A window size that scores well aggregates the
sequence at something close to its natural temporal scale.

Prediction quality for a single consecutive pair is a binary classification
over the non-edges of the earlier snapshot: positives are the pairs that
actually become edges in the later snapshot, and the predictor marks the k
highest-scored candidates, where k is the number of actual new links.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .graphs import (
    Graph,
    GraphSequence,
    NodeCountMismatchError,
    Pair,
    normalize_pair,
    pair_count,
    pair_table,
)
from .predictors import PredictorConfig, ScoreKind, score_matrix, top_k_indices

DEFAULT_SUBSAMPLE_FRACTION = 0.10
DEFAULT_SUBSAMPLE_THRESHOLD = 30


class SequenceTooShortError(ValueError):
    """Sweeping needs at least 3 snapshots."""


class ConfigError(ValueError):
    """A predictor configuration required by the operation is missing."""


class ConfusionCounts(NamedTuple):
    """Binary-classification counts over the candidate pair universe."""

    tp: int
    fp: int
    fn: int
    tn: int


def mcc(counts: ConfusionCounts) -> float:
    """Matthews correlation coefficient in [-1, 1].

    ``(tp*tn - fp*fn) / sqrt((tp+fp)(tp+fn)(tn+fp)(tn+fn))``, with the
    standard convention that a zero factor in the denominator yields 0.
    Products are taken over exact integers before the final square root.
    """
    tp, fp, fn, tn = (int(v) for v in counts)
    if min(tp, fp, fn, tn) < 0:
        raise ValueError(f"confusion counts must be nonnegative, got {counts}")
    denom_sq = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn)
    if denom_sq == 0:
        return 0.0
    return (tp * tn - fp * fn) / math.sqrt(denom_sq)


def _predicted_pair_indices(g_prev: Graph, k: int, cfg: PredictorConfig) -> np.ndarray:
    """Flat pair indices of the k top-scored non-edges of ``g_prev``."""
    us, vs = pair_table(g_prev.node_count)
    candidate_mask = np.ones(us.shape[0], dtype=bool)
    candidate_mask[g_prev.pair_indices] = False
    candidate_ids = np.flatnonzero(candidate_mask)
    scores = score_matrix(g_prev, cfg)[us, vs]
    return candidate_ids[top_k_indices(scores[candidate_ids], k)]


def pair_confusion(g_prev: Graph, g_next: Graph, cfg: PredictorConfig) -> ConfusionCounts:
    """Confusion counts of top-k prediction from ``g_prev`` to ``g_next``.

    The candidate universe is the non-edges of ``g_prev``; positives are the
    links that appear in ``g_next``; exactly that many candidates are
    predicted (k equals the number of actual new links).
    """
    if g_prev.node_count != g_next.node_count:
        raise NodeCountMismatchError(
            f"node counts differ: {g_prev.node_count} vs {g_next.node_count}"
        )
    universe = pair_count(g_prev.node_count) - g_prev.edge_count
    actual = np.setdiff1d(g_next.pair_indices, g_prev.pair_indices, assume_unique=True)
    k = int(actual.size)
    if k == 0:
        return ConfusionCounts(0, 0, 0, universe)
    predicted = _predicted_pair_indices(g_prev, k, cfg)
    tp = int(np.intersect1d(predicted, actual, assume_unique=True).size)
    fp = k - tp
    fn = k - tp
    return ConfusionCounts(tp, fp, fn, universe - tp - fp - fn)


def score_pair(g_prev: Graph, g_next: Graph, cfg: PredictorConfig) -> float:
    """MCC of predicting ``g_next``'s new links from ``g_prev``."""
    return mcc(pair_confusion(g_prev, g_next, cfg))


@dataclass(frozen=True)
class SweepEntry:
    w: int
    mean_mcc: float
    pairs_evaluated: int
    pairs_total: int


@dataclass(frozen=True)
class WindowSweepResult:
    """Mean link-prediction MCC for every tested window size."""

    entries: tuple[SweepEntry, ...]

    def __iter__(self) -> Iterator[SweepEntry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def entry_for(self, w: int) -> SweepEntry:
        for e in self.entries:
            if e.w == w:
                return e
        raise KeyError(f"no entry for window size {w}")

    def best_entry(self) -> SweepEntry:
        """Entry with the highest mean MCC; ties go to the smallest w."""
        if not self.entries:
            raise ValueError("empty sweep result")
        return max(self.entries, key=lambda e: (e.mean_mcc, -e.w))


def _window_union(snap_indices: Sequence[np.ndarray], w: int, j: int) -> np.ndarray:
    chunk = snap_indices[j * w : (j + 1) * w]
    if w == 1:
        return chunk[0]
    return np.unique(np.concatenate(chunk))


def _chosen_pairs(
    pairs_total: int,
    subsample_fraction: float,
    subsample_threshold: int,
    rng_seed: int,
    w: int,
) -> np.ndarray:
    if pairs_total <= subsample_threshold or subsample_fraction >= 1.0:
        return np.arange(pairs_total)
    size = math.ceil(subsample_fraction * pairs_total)
    rng = np.random.default_rng(np.random.SeedSequence([rng_seed, w]))
    return np.sort(rng.choice(pairs_total, size=size, replace=False))


def _sweep_one_window(
    node_count: int,
    snap_indices: Sequence[np.ndarray],
    w: int,
    cfg: PredictorConfig,
    subsample_fraction: float,
    subsample_threshold: int,
    rng_seed: int,
) -> SweepEntry:
    pairs_total = len(snap_indices) // w - 1
    chosen = _chosen_pairs(pairs_total, subsample_fraction, subsample_threshold, rng_seed, w)
    needed = sorted({j for i in chosen for j in (int(i), int(i) + 1)})
    snapshots = {
        j: Graph.from_pair_indices(node_count, _window_union(snap_indices, w, j))
        for j in needed
    }
    total = 0.0
    for i in chosen:
        total += score_pair(snapshots[int(i)], snapshots[int(i) + 1], cfg)
    return SweepEntry(w, total / len(chosen), len(chosen), pairs_total)


_WORKER_STATE: dict = {}


def _worker_init(node_count, snap_indices, cfg, fraction, threshold, rng_seed):
    _WORKER_STATE.update(
        node_count=node_count,
        snap_indices=snap_indices,
        cfg=cfg,
        fraction=fraction,
        threshold=threshold,
        rng_seed=rng_seed,
    )


def _worker_run(w: int) -> SweepEntry:
    s = _WORKER_STATE
    return _sweep_one_window(
        s["node_count"], s["snap_indices"], w, s["cfg"], s["fraction"],
        s["threshold"], s["rng_seed"],
    )


def sweep(
    seq: GraphSequence,
    cfg: PredictorConfig,
    subsample_fraction: float = DEFAULT_SUBSAMPLE_FRACTION,
    subsample_threshold: int = DEFAULT_SUBSAMPLE_THRESHOLD,
    rng_seed: int = 0,
    workers: int = 1,
) -> WindowSweepResult:
    """Score every window size from 1 to len(seq) // 3.

    For each ``w`` the sequence is aggregated at ``w`` and consecutive
    snapshot pairs are scored with :func:`score_pair`; the entry records the
    arithmetic mean.  When a window size yields more than
    ``subsample_threshold`` consecutive pairs, only a uniformly random
    ``ceil(subsample_fraction * pairs)`` of them are scored (drawn without
    replacement from a generator seeded by ``(rng_seed, w)``, so results are
    reproducible and independent of evaluation order).  ``workers > 1``
    distributes window sizes over processes; results are identical to the
    sequential path.
    """
    length = len(seq)
    if length < 3:
        raise SequenceTooShortError(f"need at least 3 snapshots, got {length}")
    if not 0.0 < subsample_fraction <= 1.0:
        raise ValueError(f"subsample_fraction must be in (0, 1], got {subsample_fraction}")
    if subsample_threshold < 1:
        raise ValueError(f"subsample_threshold must be positive, got {subsample_threshold}")
    if rng_seed < 0:
        raise ValueError(f"rng_seed must be nonnegative, got {rng_seed}")
    snap_indices = [g.pair_indices for g in seq]
    window_sizes = range(1, length // 3 + 1)
    args = (seq.node_count, snap_indices, cfg, subsample_fraction,
            subsample_threshold, rng_seed)
    if workers <= 1:
        entries = [_sweep_one_window(*args[:2], w, *args[2:]) for w in window_sizes]
    else:
        with ProcessPoolExecutor(max_workers=workers, initializer=_worker_init,
                                 initargs=args) as pool:
            entries = list(pool.map(_worker_run, window_sizes, chunksize=8))
    return WindowSweepResult(tuple(entries))


def resemblance(predicted: set[Pair], actual: set[Pair]) -> float:
    """Jaccard overlap |predicted & actual| / |predicted | actual|.

    Two empty sets resemble each other perfectly (1.0).
    """
    pred = {normalize_pair(*p) for p in predicted}
    act = {normalize_pair(*p) for p in actual}
    union = pred | act
    if not union:
        return 1.0
    return len(pred & act) / len(union)


def resemblance_report(
    seq: GraphSequence,
    cfgs: Sequence[PredictorConfig],
    w: int,
) -> list[float]:
    """Mean prediction resemblance per predictor at window size ``w``,
    shifted so the Adamic-Adar predictor sits at 0.0.

    For every consecutive pair of the aggregated sequence, each predictor's
    top-k set is compared with the actual new links by :func:`resemblance`;
    per-predictor means are then reduced by the mean of the first Adamic-Adar
    entry in ``cfgs``.  Returned floats align with ``cfgs``.
    """
    from .graphs import aggregate  # local import to avoid cycles in doc tooling

    baseline = next((i for i, c in enumerate(cfgs) if c.kind is ScoreKind.ADAMIC_ADAR), None)
    if baseline is None:
        raise ConfigError("resemblance_report requires an Adamic-Adar predictor as baseline")
    agg = aggregate(seq, w)
    if len(agg) < 2:
        raise SequenceTooShortError(
            f"window size {w} leaves {len(agg)} snapshot(s); need at least one pair"
        )
    us, vs = pair_table(seq.node_count)
    sums = [0.0] * len(cfgs)
    n_pairs = len(agg) - 1
    for i in range(n_pairs):
        g_prev, g_next = agg[i], agg[i + 1]
        actual_idx = np.setdiff1d(g_next.pair_indices, g_prev.pair_indices,
                                  assume_unique=True)
        actual = set(zip(us[actual_idx].tolist(), vs[actual_idx].tolist()))
        k = len(actual)
        for c, cfg in enumerate(cfgs):
            pred_idx = _predicted_pair_indices(g_prev, k, cfg)
            predicted = set(zip(us[pred_idx].tolist(), vs[pred_idx].tolist()))
            sums[c] += resemblance(predicted, actual)
    means = [s / n_pairs for s in sums]
    base = means[baseline]
    return [m - base for m in means]
