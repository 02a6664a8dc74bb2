"""Gaussian oversampling noise for dynamic networks.

Observing a system much faster than it actually changes smears each edge
occurrence out in time.  This module models that: every edge occurrence in
source snapshot ``i`` is re-timed to output step ``round(N(mu * i, sigma^2))``
(half away from zero, clamped into range), producing a sequence roughly
``mu`` times longer whose per-step edge counts form Gaussian bursts around
the original step times.  ``sigma = 0`` degenerates to exact placement at
``mu * i``, so aggregating the output back at window ``mu`` recovers the
source sequence exactly.

Each occurrence is drawn independently, including repeat occurrences of a
persistent edge in later snapshots.  Draws for source snapshot ``i`` come
from an independent substream seeded by ``(rng_seed, i)``, so output is
reproducible regardless of assembly order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import Graph, GraphSequence


class ProvenanceUnavailableError(ValueError):
    """Mixing diagnostics need the placement record, which was not kept."""


@dataclass(frozen=True)
class NoiseParams:
    """Oversampling rate ``mu``, temporal spread ``sigma``, and seed.

    ``output_length`` defaults to ``mu * len(source)`` when left ``None``.
    """

    mu: int
    sigma: float
    rng_seed: int = 0
    output_length: int | None = None

    def __post_init__(self) -> None:
        if self.mu < 1:
            raise ValueError(f"mu must be a positive integer, got {self.mu}")
        if self.sigma < 0:
            raise ValueError(f"sigma must be nonnegative, got {self.sigma}")
        if self.rng_seed < 0:
            raise ValueError(f"rng_seed must be nonnegative, got {self.rng_seed}")
        if self.output_length is not None and self.output_length < 1:
            raise ValueError(f"output_length must be positive, got {self.output_length}")

    def resolved_output_length(self, source_length: int) -> int:
        return self.output_length if self.output_length is not None else self.mu * source_length


@dataclass(frozen=True)
class Placements:
    """Provenance record: where every edge occurrence landed.

    Parallel arrays over occurrences: ``source_steps[i]`` is the snapshot the
    occurrence came from, ``pair_indices[i]`` identifies the edge (flat pair
    index), ``output_steps[i]`` is its clamped rounded landing step.
    """

    node_count: int
    mu: int
    sigma: float
    output_length: int
    source_steps: np.ndarray
    pair_indices: np.ndarray
    output_steps: np.ndarray

    def __len__(self) -> int:
        return int(self.source_steps.size)


def _round_half_away_from_zero(x: np.ndarray) -> np.ndarray:
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def draw_placements(seq: GraphSequence, params: NoiseParams) -> Placements:
    """Draw the noisy landing step of every edge occurrence in ``seq``."""
    out_len = params.resolved_output_length(len(seq))
    sources, pairs, outputs = [], [], []
    for i, g in enumerate(seq):
        idx = g.pair_indices
        if idx.size == 0:
            continue
        rng = np.random.default_rng(np.random.SeedSequence([params.rng_seed, i]))
        draws = rng.normal(float(params.mu * i), params.sigma, size=idx.size)
        landed = np.clip(_round_half_away_from_zero(draws), 0, out_len - 1)
        sources.append(np.full(idx.size, i, dtype=np.int64))
        pairs.append(idx)
        outputs.append(landed.astype(np.int64))
    if sources:
        source_steps = np.concatenate(sources)
        pair_indices = np.concatenate(pairs)
        output_steps = np.concatenate(outputs)
    else:
        source_steps = np.empty(0, dtype=np.int64)
        pair_indices = np.empty(0, dtype=np.int64)
        output_steps = np.empty(0, dtype=np.int64)
    return Placements(
        node_count=seq.node_count,
        mu=params.mu,
        sigma=params.sigma,
        output_length=out_len,
        source_steps=source_steps,
        pair_indices=pair_indices,
        output_steps=output_steps,
    )


def assemble_sequence(placements: Placements) -> GraphSequence:
    """Build the noisy sequence from a placement record.

    Repeat landings of one edge in one output step collapse to a single edge.
    """
    n = placements.node_count
    length = placements.output_length
    order = np.lexsort((placements.pair_indices, placements.output_steps))
    out = placements.output_steps[order]
    pairs = placements.pair_indices[order]
    bounds = np.searchsorted(out, np.arange(length + 1))
    snapshots = [
        Graph.from_pair_indices(n, pairs[bounds[j] : bounds[j + 1]])
        for j in range(length)
    ]
    return GraphSequence(tuple(snapshots))


def apply_noise_traced(seq: GraphSequence, params: NoiseParams) -> tuple[GraphSequence, Placements]:
    """Like :func:`apply_noise` but also return the placement record."""
    placements = draw_placements(seq, params)
    return assemble_sequence(placements), placements


def apply_noise(seq: GraphSequence, params: NoiseParams) -> GraphSequence:
    """Spread every edge occurrence of ``seq`` around its oversampled time."""
    return assemble_sequence(draw_placements(seq, params))


def mixing_fraction(placements: Placements | None, mu: int | None = None) -> float:
    """Fraction of occurrences that landed outside their home window.

    The home window of an occurrence from source step ``i`` is
    ``[mu*i - mu/2, mu*i + mu/2)``.  Requires the placement record from
    :func:`apply_noise_traced` / :func:`draw_placements`; with zero spread
    this is exactly 0, and it grows toward 1 as spread overwhelms ``mu``.
    An empty record (no edge occurrences) mixes nothing and yields 0.
    """
    if placements is None:
        raise ProvenanceUnavailableError(
            "mixing_fraction needs the Placements record; "
            "use apply_noise_traced to keep it"
        )
    if mu is None:
        mu = placements.mu
    if len(placements) == 0:
        return 0.0
    centers = placements.source_steps.astype(float) * mu
    offsets = placements.output_steps.astype(float) - centers
    half = mu / 2.0
    outside = (offsets < -half) | (offsets >= half)
    return float(outside.mean())
