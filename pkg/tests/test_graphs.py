import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netscale import (
    Graph,
    GraphSequence,
    InvalidWindowError,
    NodeCountMismatchError,
    aggregate,
    new_links,
    non_edges,
)
from netscale.graphs import pair_count, pair_index, pair_table, pairs_to_indices

from conftest import all_pairs, graphs, sequences


class TestGraph:
    def test_normalizes_and_deduplicates_edges(self):
        g = Graph(4, frozenset({(2, 0), (0, 2), (1, 3)}))
        assert g.edges == frozenset({(0, 2), (1, 3)})
        assert g.edge_count == 2

    def test_rejects_self_loops(self):
        with pytest.raises(ValueError, match="self-loop"):
            Graph(3, frozenset({(1, 1)}))

    def test_rejects_out_of_range_endpoints(self):
        with pytest.raises(ValueError, match="outside"):
            Graph(3, frozenset({(0, 3)}))

    def test_rejects_nonpositive_node_count(self):
        with pytest.raises(ValueError, match="positive"):
            Graph(0)

    def test_immutable(self):
        g = Graph(3, frozenset({(0, 1)}))
        with pytest.raises(AttributeError):
            g.node_count = 5
        assert not g.adjacency.flags.writeable
        assert not g.degrees.flags.writeable

    def test_adjacency_and_degrees(self):
        g = Graph(4, frozenset({(0, 1), (1, 2)}))
        expected = np.zeros((4, 4))
        expected[0, 1] = expected[1, 0] = 1
        expected[1, 2] = expected[2, 1] = 1
        assert np.array_equal(g.adjacency, expected)
        assert g.degrees.tolist() == [1, 2, 1, 0]
        assert g.neighbors(1) == frozenset({0, 2})

    @given(graphs())
    def test_pair_index_round_trip(self, g: Graph):
        us, vs = pair_table(g.node_count)
        idx = g.pair_indices
        rebuilt = set(zip(us[idx].tolist(), vs[idx].tolist()))
        assert rebuilt == set(g.edges)
        assert Graph.from_pair_indices(g.node_count, idx) == g

    @given(st.integers(2, 12))
    def test_pair_index_is_lexicographic_position(self, n: int):
        pairs = all_pairs(n)
        assert [pair_index(n, u, v) for u, v in pairs] == list(range(len(pairs)))
        us = np.array([p[0] for p in pairs])
        vs = np.array([p[1] for p in pairs])
        assert pairs_to_indices(n, us, vs).tolist() == list(range(pair_count(n)))


class TestGraphSequence:
    def test_requires_shared_node_count(self):
        with pytest.raises(NodeCountMismatchError):
            GraphSequence((Graph(3), Graph(4)))

    def test_requires_at_least_one_snapshot(self):
        with pytest.raises(ValueError):
            GraphSequence(())

    def test_basic_access(self):
        seq = GraphSequence.from_edge_lists(3, [{(0, 1)}, set()])
        assert len(seq) == 2
        assert seq.node_count == 3
        assert seq[0].edges == frozenset({(0, 1)})
        assert [g.edge_count for g in seq] == [1, 0]


class TestAggregate:
    @given(sequences())
    def test_window_one_is_identity(self, seq: GraphSequence):
        assert aggregate(seq, 1) == seq

    def test_pairwise_union(self):
        seq = GraphSequence.from_edge_lists(
            4, [{(0, 1)}, {(1, 2)}, {(2, 3)}, {(0, 3)}]
        )
        agg = aggregate(seq, 2)
        assert len(agg) == 2
        assert agg[0].edges == frozenset({(0, 1), (1, 2)})
        assert agg[1].edges == frozenset({(2, 3), (0, 3)})

    def test_length_seven_window_three_drops_trailing(self):
        # oracle: edge e belongs to output j iff e occurs at any input index
        # in [3j, 3j+3); the 7th snapshot (index 6) falls past 2*3-1 = 5
        per_snapshot = [
            {(0, 1)}, {(1, 2)}, {(2, 3)},
            {(0, 3)}, {(1, 3)}, {(0, 2)},
            {(4, 5)},
        ]
        seq = GraphSequence.from_edge_lists(6, per_snapshot)
        agg = aggregate(seq, 3)
        assert len(agg) == 2
        assert agg[0].edges == frozenset({(0, 1), (1, 2), (2, 3)})
        assert agg[1].edges == frozenset({(0, 3), (1, 3), (0, 2)})
        assert (4, 5) not in agg[0].edges | agg[1].edges

    @given(sequences(), st.integers(1, 10))
    def test_output_length_is_floor_division(self, seq, w):
        if w > len(seq):
            with pytest.raises(InvalidWindowError):
                aggregate(seq, w)
        else:
            assert len(aggregate(seq, w)) == len(seq) // w

    @given(sequences(), st.integers(1, 8))
    def test_union_conservation(self, seq, w):
        # edges across the aggregate equal edges across the first (L//w)*w
        # input snapshots: nothing invented, only the trailing remainder lost
        if w > len(seq):
            return
        agg = aggregate(seq, w)
        covered = (len(seq) // w) * w
        expected = set().union(*(g.edges for g in seq.snapshots[:covered]))
        merged = set().union(*(g.edges for g in agg))
        assert merged == expected

    @given(sequences(max_length=8), st.integers(1, 4), st.integers(1, 4))
    @settings(max_examples=60)
    def test_nested_windows_compose(self, seq, a, b):
        if a * b > len(seq) or len(seq) % (a * b) != 0:
            return
        assert aggregate(aggregate(seq, a), b) == aggregate(seq, a * b)

    def test_invalid_windows(self):
        seq = GraphSequence.from_edge_lists(2, [{(0, 1)}, set()])
        for w in (0, -1, 3):
            with pytest.raises(InvalidWindowError):
                aggregate(seq, w)


class TestNewLinks:
    def test_no_change_is_empty(self):
        g = Graph(3, frozenset({(0, 1)}))
        assert new_links(g, g) == set()

    def test_from_empty_graph(self):
        empty = Graph(3)
        g = Graph(3, frozenset({(0, 1)}))
        assert new_links(empty, g) == {(0, 1)}

    def test_set_difference(self):
        g_prev = Graph(4, frozenset({(0, 1), (1, 2)}))
        g_next = Graph(4, frozenset({(1, 2), (2, 3)}))
        assert new_links(g_prev, g_next) == {(2, 3)}

    def test_node_count_mismatch(self):
        with pytest.raises(NodeCountMismatchError):
            new_links(Graph(3), Graph(4))

    @given(graphs())
    def test_identity_and_empty_base(self, g: Graph):
        assert new_links(g, g) == set()
        assert new_links(Graph(g.node_count), g) == set(g.edges)


class TestNonEdges:
    def test_complete_graph_has_none(self):
        g = Graph(3, frozenset({(0, 1), (0, 2), (1, 2)}))
        assert non_edges(g) == set()

    def test_empty_graph_has_all(self):
        assert non_edges(Graph(3)) == {(0, 1), (0, 2), (1, 2)}

    def test_four_nodes_one_edge(self):
        g = Graph(4, frozenset({(0, 1)}))
        missing = non_edges(g)
        assert len(missing) == pair_count(4) - 1 == 5
        assert missing == {(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)}

    @given(graphs())
    def test_partition_of_pair_universe(self, g: Graph):
        missing = non_edges(g)
        assert len(missing) + g.edge_count == pair_count(g.node_count)
        assert not (missing & g.edges)
