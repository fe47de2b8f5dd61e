"""graph6 codec: the compact ASCII encoding used by standard graph corpora.

Only the short form (n <= 62, first byte n + 63) is supported; corpus files
at the sizes this package simulates never need the extended headers.  The
adjacency payload packs the upper triangle column-major -- (0,1), (0,2),
(1,2), (0,3), ... -- six bits per byte, most significant bit first, each
byte offset by 63.
"""

from __future__ import annotations

import os
from typing import Iterable, Union

from .errors import FormatError, InvalidInputError
from .problems import Graph, iter_pairs

HEADER = ">>graph6<<"


def parse_graph6(line: Union[str, bytes]) -> Graph:
    """Decode one graph6 record, optionally prefixed by the ``>>graph6<<`` header."""
    if isinstance(line, bytes):
        line = line.decode("ascii", errors="replace")
    text = line.strip()
    if text.startswith(HEADER):
        text = text[len(HEADER):]
    if not text:
        raise FormatError("empty graph6 record")
    data = text.encode("ascii", errors="replace")
    for byte in data:
        if not 63 <= byte <= 126:
            raise FormatError(f"byte {byte} outside the graph6 range [63, 126]")
    if data[0] == 126:
        raise FormatError("extended graph6 size headers (n > 62) are not supported")
    n = data[0] - 63
    if n == 0:
        raise FormatError("graph6 record encodes zero vertices")
    m = n * (n - 1) // 2
    need = (m + 5) // 6
    payload = data[1:]
    if len(payload) < need:
        raise FormatError(f"truncated graph6 payload: need {need} bytes, got {len(payload)}")
    if len(payload) > need:
        raise FormatError(f"trailing bytes after graph6 payload: {text!r}")
    edges = []
    for k, (i, j) in enumerate(iter_pairs(n)):
        byte = payload[k // 6] - 63
        if (byte >> (5 - k % 6)) & 1:
            edges.append((i, j))
    return Graph(n=n, edges=tuple(edges))


def encode_graph6(g: Graph) -> str:
    """Encode an unweighted graph as one graph6 record (no header)."""
    if g.weights is not None:
        raise InvalidInputError("graph6 encodes unweighted graphs only")
    if g.n > 62:
        raise InvalidInputError("graph6 short form is limited to 62 vertices")
    edge_set = set(g.edges)
    m = g.n * (g.n - 1) // 2
    out = [g.n + 63]
    acc, filled = 0, 0
    for pair in iter_pairs(g.n):
        acc = (acc << 1) | (1 if pair in edge_set else 0)
        filled += 1
        if filled == 6:
            out.append(acc + 63)
            acc, filled = 0, 0
    if filled:
        out.append((acc << (6 - filled)) + 63)
    assert len(out) == 1 + (m + 5) // 6
    return bytes(out).decode("ascii")


def read_graph6(path: Union[str, os.PathLike]) -> list[Graph]:
    """Read a graph6 file: one record per line, blank lines skipped."""
    graphs = []
    with open(path, "r", encoding="ascii") as fh:
        for line in fh:
            if line.strip():
                graphs.append(parse_graph6(line))
    return graphs


def write_graph6(path: Union[str, os.PathLike], graphs: Iterable[Graph]) -> int:
    """Write graphs one record per line; returns the number written."""
    count = 0
    with open(path, "w", encoding="ascii") as fh:
        for g in graphs:
            fh.write(encode_graph6(g) + "\n")
            count += 1
    return count
