import networkx as nx
import numpy as np
import pytest

from rpqaoa.errors import FormatError, InvalidInputError
from rpqaoa.graph6 import encode_graph6, parse_graph6, read_graph6, write_graph6
from rpqaoa.problems import Graph, random_connected_graph


def to_networkx(g: Graph) -> nx.Graph:
    out = nx.Graph()
    out.add_nodes_from(range(g.n))
    out.add_edges_from(g.edges)
    return out


class TestParse:
    def test_complete_four(self):
        g = parse_graph6("C~")
        assert g.n == 4
        assert g.edges == ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))

    def test_single_vertex(self):
        g = parse_graph6("@")
        assert g.n == 1
        assert g.edges == ()

    def test_triangle(self):
        assert parse_graph6("Bw").edges == ((0, 1), (0, 2), (1, 2))

    def test_header_accepted(self):
        assert parse_graph6(">>graph6<<C~").n == 4

    def test_bytes_accepted(self):
        assert parse_graph6(b"C~\n").n == 4

    def test_trailing_garbage_rejected(self):
        with pytest.raises(FormatError):
            parse_graph6("C~x")

    def test_truncated_payload_rejected(self):
        with pytest.raises(FormatError):
            parse_graph6("E~")  # n=6 needs 3 payload bytes

    def test_byte_out_of_range_rejected(self):
        with pytest.raises(FormatError):
            parse_graph6("C" + chr(20))
        with pytest.raises(FormatError):
            parse_graph6("C" + chr(127))

    def test_extended_header_rejected(self):
        with pytest.raises(FormatError):
            parse_graph6("~??~" + "?" * 30)

    def test_empty_record_rejected(self):
        with pytest.raises(FormatError):
            parse_graph6("   ")


class TestEncode:
    def test_round_trip_random_graphs(self):
        for seed in range(10):
            g = random_connected_graph(int(3 + seed % 8), seed=seed)
            assert parse_graph6(encode_graph6(g)) == g

    def test_matches_reference_codec(self):
        # networkx is the independent reference for the byte-level format
        for seed in range(10):
            g = random_connected_graph(7, seed=seed)
            ours = encode_graph6(g)
            theirs = nx.to_graph6_bytes(to_networkx(g), header=False).decode().strip()
            assert ours == theirs

    def test_reference_codec_parses_ours(self):
        g = random_connected_graph(6, seed=42)
        back = nx.from_graph6_bytes(encode_graph6(g).encode())
        assert set(back.edges()) == set(g.edges)

    def test_weighted_graph_rejected(self):
        g = Graph(n=2, edges=((0, 1),), weights=(2,))
        with pytest.raises(InvalidInputError):
            encode_graph6(g)


class TestFiles:
    def test_write_then_read(self, tmp_path):
        graphs = [random_connected_graph(5, seed=s) for s in range(8)]
        path = tmp_path / "corpus.g6"
        assert write_graph6(path, graphs) == 8
        assert read_graph6(path) == graphs

    def test_blank_lines_skipped(self, tmp_path):
        path = tmp_path / "corpus.g6"
        path.write_text("C~\n\nBw\n", encoding="ascii")
        graphs = read_graph6(path)
        assert [g.n for g in graphs] == [4, 3]

    def test_missing_file_raises_oserror(self, tmp_path):
        with pytest.raises(OSError):
            read_graph6(tmp_path / "absent.g6")
