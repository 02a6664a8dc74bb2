"""Ground-truth dynamic-network generator.

A sequence starts from a random seed graph (Erdos-Renyi or preferential
attachment) and evolves deterministically: each step scores all non-edges
with a chosen similarity score and adds the ``delta`` best of them, with the
same tie-breaking as prediction.  Because additions are literally the
predictor's own top picks, a noiseless sequence is perfectly predictable by
a matching predictor; that self-consistency is what makes these sequences
useful as recovery ground truth.  Optionally the ``delta`` worst-scored
existing edges are deleted each step, keeping the edge count constant.

Randomness enters only through the seed graph.  Streams are split by stage:
stage 0 of ``rng_seed`` drives seed-graph sampling, stage 1 is reserved for
(future) stochastic evolution rules, and the oversampling noise model in
:mod:`netscale.noise` manages its own seed.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .graphs import Graph, GraphSequence, pair_count, pair_table
from .predictors import (
    PredictorConfig,
    ScoreKind,
    score_matrix,
    top_k_indices,
)


class GenerationSaturationWarning(RuntimeWarning):
    """A step asked for more additions (or deletions) than available."""


@dataclass(frozen=True)
class ErdosRenyi:
    """G(n, p): each pair is an edge independently with probability p."""

    node_count: int
    edge_probability: float

    def __post_init__(self) -> None:
        if self.node_count < 1:
            raise ValueError(f"node_count must be positive, got {self.node_count}")
        if not 0.0 <= self.edge_probability <= 1.0:
            raise ValueError(f"edge_probability must be in [0, 1], got {self.edge_probability}")


@dataclass(frozen=True)
class BarabasiAlbert:
    """BA(n, m): grow from an m-clique, attaching each new node to m
    distinct existing nodes chosen proportionally to current degree."""

    node_count: int
    attach_count: int

    def __post_init__(self) -> None:
        if self.node_count < 1:
            raise ValueError(f"node_count must be positive, got {self.node_count}")
        if not 1 <= self.attach_count < self.node_count:
            raise ValueError(
                f"attach_count must satisfy 1 <= m < n, got m={self.attach_count}, "
                f"n={self.node_count}"
            )


SeedModel = ErdosRenyi | BarabasiAlbert


@dataclass(frozen=True)
class GenParams:
    """Full parameterization of a generated sequence."""

    seed_model: SeedModel
    evolve_score: PredictorConfig = field(
        default_factory=lambda: PredictorConfig(ScoreKind.ADAMIC_ADAR)
    )
    delta: int = 50
    steps: int = 20
    delete_low: bool = False
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.delta < 0:
            raise ValueError(f"delta must be nonnegative, got {self.delta}")
        if self.steps < 1:
            raise ValueError(f"steps must be positive, got {self.steps}")
        if self.rng_seed < 0:
            raise ValueError(f"rng_seed must be nonnegative, got {self.rng_seed}")


def seed_graph(model: SeedModel, rng: np.random.Generator) -> Graph:
    """Sample the initial snapshot from the given random-graph model."""
    if isinstance(model, ErdosRenyi):
        mask = rng.random(pair_count(model.node_count)) < model.edge_probability
        return Graph.from_pair_indices(model.node_count, np.flatnonzero(mask))
    if isinstance(model, BarabasiAlbert):
        return _barabasi_albert(model.node_count, model.attach_count, rng)
    raise TypeError(f"unknown seed model {model!r}")


def _barabasi_albert(n: int, m: int, rng: np.random.Generator) -> Graph:
    edges: list[tuple[int, int]] = [(u, v) for u in range(m) for v in range(u + 1, m)]
    # one entry per degree unit; sampling from it is degree-proportional
    degree_pool: list[int] = [endpoint for edge in edges for endpoint in edge]
    for new_node in range(m, n):
        targets: set[int] = set()
        while len(targets) < m:
            if degree_pool:
                candidate = degree_pool[int(rng.integers(len(degree_pool)))]
            else:
                # m = 1 start: no edges yet, fall back to a uniform choice
                candidate = int(rng.integers(new_node))
            targets.add(candidate)
        for t in sorted(targets):
            edges.append((t, new_node))
            degree_pool.append(t)
            degree_pool.append(new_node)
    return Graph(n, frozenset(edges))


def evolve_step(
    g: Graph, params: GenParams, rng: np.random.Generator | None = None
) -> Graph:
    """One evolution step: add the delta best-scored non-edges (and, with
    ``delete_low``, drop the delta worst-scored existing edges).

    Deletion candidates are scored on the same pre-step graph as additions,
    and both changes apply simultaneously.  The rule is deterministic; ``rng``
    is accepted for interface symmetry with stochastic variants and is not
    consumed.
    """
    if params.seed_model.node_count != g.node_count:
        raise ValueError(
            f"graph has {g.node_count} nodes but params expect "
            f"{params.seed_model.node_count}"
        )
    if params.delta == 0 and not params.delete_low:
        return g
    us, vs = pair_table(g.node_count)
    scores = score_matrix(g, params.evolve_score)[us, vs]
    edge_ids = g.pair_indices
    candidate_mask = np.ones(us.shape[0], dtype=bool)
    candidate_mask[edge_ids] = False
    candidate_ids = np.flatnonzero(candidate_mask)

    add_count = min(params.delta, candidate_ids.size)
    if add_count < params.delta:
        warnings.warn(
            f"only {candidate_ids.size} non-edges remain; adding all of them",
            GenerationSaturationWarning,
            stacklevel=2,
        )
    added = candidate_ids[top_k_indices(scores[candidate_ids], add_count)]

    kept = edge_ids
    if params.delete_low:
        drop_count = min(params.delta, edge_ids.size)
        if drop_count < params.delta:
            warnings.warn(
                f"only {edge_ids.size} edges exist; deleting all of them",
                GenerationSaturationWarning,
                stacklevel=2,
            )
        # lowest scores first; equal scores resolve to lexicographically
        # smaller pairs, mirroring the addition rule
        dropped = edge_ids[top_k_indices(-scores[edge_ids], drop_count)]
        kept = np.setdiff1d(edge_ids, dropped, assume_unique=True)
    return Graph.from_pair_indices(g.node_count, np.union1d(kept, added))


def generate_sequence(params: GenParams) -> GraphSequence:
    """Seed graph followed by ``steps - 1`` evolution steps.

    Fully deterministic for a given ``params`` (including ``rng_seed``).
    """
    seed_rng = np.random.default_rng(np.random.SeedSequence([params.rng_seed, 0]))
    evolve_rng = np.random.default_rng(np.random.SeedSequence([params.rng_seed, 1]))
    g = seed_graph(params.seed_model, seed_rng)
    snapshots = [g]
    for _ in range(params.steps - 1):
        g = evolve_step(g, params, evolve_rng)
        snapshots.append(g)
    return GraphSequence(tuple(snapshots))
