import networkx as nx
import pytest
from networkx.generators.atlas import graph_atlas_g

from rpqaoa.enumeration import (
    canonical_code,
    code_from_graph,
    enumerate_connected_graphs,
    graph_from_code,
)
from rpqaoa.errors import CapacityError
from rpqaoa.graph6 import encode_graph6, parse_graph6
from rpqaoa.problems import Graph, is_connected

# Connected simple graphs up to isomorphism, OEIS A001349.
CONNECTED_COUNTS = {1: 1, 2: 1, 3: 2, 4: 6, 5: 21, 6: 112, 7: 853}


class TestCounts:
    @pytest.mark.parametrize("n,expected", sorted(CONNECTED_COUNTS.items()))
    def test_class_counts(self, n, expected):
        assert len(enumerate_connected_graphs(n)) == expected

    def test_three_vertices_path_and_triangle(self):
        graphs = sorted(enumerate_connected_graphs(3), key=lambda g: len(g.edges))
        assert [len(g.edges) for g in graphs] == [2, 3]

    def test_capacity_error_mentions_graph6(self):
        with pytest.raises(CapacityError, match="graph6"):
            enumerate_connected_graphs(8)


class TestProperties:
    @pytest.mark.parametrize("n", [4, 5, 6])
    def test_all_connected(self, n):
        assert all(is_connected(g) for g in enumerate_connected_graphs(n))

    @pytest.mark.parametrize("n", [4, 5])
    def test_no_isomorphic_duplicates(self, n):
        graphs = enumerate_connected_graphs(n)
        for a in range(len(graphs)):
            for b in range(a + 1, len(graphs)):
                ga = nx.Graph(list(graphs[a].edges))
                gb = nx.Graph(list(graphs[b].edges))
                ga.add_nodes_from(range(n))
                gb.add_nodes_from(range(n))
                assert not nx.is_isomorphic(ga, gb)

    @pytest.mark.parametrize("n", [4, 5, 6])
    def test_matches_atlas_partition(self, n):
        # the published graph atlas carries every graph with up to 7 nodes
        atlas = [
            g for g in graph_atlas_g()
            if g.number_of_nodes() == n and nx.is_connected(g)
        ]
        assert len(atlas) == CONNECTED_COUNTS[n]
        atlas_codes = set()
        for nxg in atlas:
            relabelled = nx.convert_node_labels_to_integers(nxg)
            g = Graph(n=n, edges=tuple(relabelled.edges()))
            atlas_codes.add(canonical_code(code_from_graph(g), n))
        ours = {canonical_code(code_from_graph(g), n) for g in enumerate_connected_graphs(n)}
        assert ours == atlas_codes


class TestCanonicalCode:
    @pytest.mark.parametrize("seed", range(6))
    def test_invariant_under_relabelling(self, seed):
        import numpy as np

        from rpqaoa.problems import random_connected_graph

        g = random_connected_graph(6, seed=seed)
        perm = np.random.default_rng(seed).permutation(6)
        relabelled = Graph(
            n=6,
            edges=tuple((int(min(perm[i], perm[j])), int(max(perm[i], perm[j]))) for i, j in g.edges),
        )
        assert canonical_code(code_from_graph(g), 6) == canonical_code(
            code_from_graph(relabelled), 6
        )

    def test_code_round_trip(self):
        g = Graph(n=4, edges=((0, 1), (2, 3)))
        assert graph_from_code(code_from_graph(g), 4) == g


class TestGraph6Inverse:
    @pytest.mark.parametrize("n", range(1, 8))
    def test_parse_is_left_inverse_of_encode(self, n):
        for g in enumerate_connected_graphs(n):
            assert parse_graph6(encode_graph6(g)) == g
