from __future__ import annotations

import numpy as np
import pytest
from hypothesis import strategies as st

from netscale import Graph, GraphSequence


def all_pairs(n: int) -> list[tuple[int, int]]:
    return [(u, v) for u in range(n) for v in range(u + 1, n)]


@st.composite
def graphs(draw, min_nodes: int = 1, max_nodes: int = 10) -> Graph:
    n = draw(st.integers(min_nodes, max_nodes))
    pairs = all_pairs(n)
    edges = draw(st.sets(st.sampled_from(pairs)) if pairs else st.just(set()))
    return Graph(n, frozenset(edges))


@st.composite
def sequences(draw, min_nodes: int = 2, max_nodes: int = 8,
              min_length: int = 1, max_length: int = 8) -> GraphSequence:
    n = draw(st.integers(min_nodes, max_nodes))
    length = draw(st.integers(min_length, max_length))
    pairs = all_pairs(n)
    snaps = [
        Graph(n, frozenset(draw(st.sets(st.sampled_from(pairs)))))
        for _ in range(length)
    ]
    return GraphSequence(tuple(snaps))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)
