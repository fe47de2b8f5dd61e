"""Exhaustive enumeration of connected graphs up to isomorphism (n <= 7).

A labelled graph on n vertices is packed into an integer code: bit
``j*(j-1)/2 + i`` holds the pair (i, j), i < j, in the same column-major
order as the graph6 payload.  The canonical form of a graph is the minimum
of its code over all vertex permutations, so two graphs are isomorphic
exactly when their canonical codes match.

Classes are generated level by level: every graph on k vertices arises from
a graph on k-1 vertices by attaching a new vertex to some neighbourhood
subset, so extending each canonical (k-1)-graph by all 2**(k-1) subsets and
re-canonicalising covers every class on k vertices.  Intermediate levels
keep disconnected graphs (deleting a vertex can disconnect a connected
graph); connectivity is filtered only on the requested output.

Larger corpora (n = 8, 9) are ingested from graph6 files instead; the cost
of the min-over-permutations canonical form grows as n! and is the reason
for the built-in cap.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .errors import CapacityError, InvalidInputError
from .problems import Graph, is_connected, iter_pairs

ENUMERATION_MAX_N = 7


def edge_position(i: int, j: int) -> int:
    """Bit position of pair (i, j), i < j, in the column-major pair order."""
    return j * (j - 1) // 2 + i


def code_from_graph(g: Graph) -> int:
    code = 0
    for i, j in g.edges:
        code |= 1 << edge_position(i, j)
    return code


def graph_from_code(code: int, n: int) -> Graph:
    edges = tuple(pair for k, pair in enumerate(iter_pairs(n)) if (code >> k) & 1)
    return Graph(n=n, edges=edges)


@lru_cache(maxsize=None)
def _perm_edge_maps(n: int) -> np.ndarray:
    """(n!, n(n-1)/2) table: edge bit position -> position under each permutation."""
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    m = n * (n - 1) // 2
    maps = np.empty((len(perms), m), dtype=np.int64)
    for k, (i, j) in enumerate(iter_pairs(n)):
        a = perms[:, i]
        b = perms[:, j]
        lo = np.minimum(a, b)
        hi = np.maximum(a, b)
        maps[:, k] = hi * (hi - 1) // 2 + lo
    return maps


def canonical_code(code: int, n: int) -> int:
    """Minimum edge code over all vertex permutations of one graph."""
    if n == 1:
        return 0
    maps = _perm_edge_maps(n)
    permuted = np.zeros(maps.shape[0], dtype=np.int64)
    k = 0
    while code >> k:
        if (code >> k) & 1:
            permuted |= np.int64(1) << maps[:, k]
        k += 1
    return int(permuted.min())


def _canonical_codes_batch(codes: np.ndarray, n: int) -> np.ndarray:
    """Canonical form of many codes at once; loops permutations, vectorises graphs."""
    maps = _perm_edge_maps(n)
    m = n * (n - 1) // 2
    bits = ((codes[:, None] >> np.arange(m)[None, :]) & 1).astype(np.int64)
    best = codes.copy()
    for p in range(maps.shape[0]):
        np.minimum(best, (bits << maps[p][None, :]).sum(axis=1), out=best)
    return best


@lru_cache(maxsize=None)
def _all_graph_codes(n: int) -> tuple[int, ...]:
    """Canonical codes of all graphs (connected or not) on n vertices, sorted."""
    if n == 1:
        return (0,)
    base = (n - 1) * (n - 2) // 2
    cands = {
        code | (subset << base)
        for code in _all_graph_codes(n - 1)
        for subset in range(2 ** (n - 1))
    }
    arr = np.fromiter(cands, dtype=np.int64, count=len(cands))
    canon = _canonical_codes_batch(arr, n)
    return tuple(sorted(set(int(c) for c in canon)))


def enumerate_connected_graphs(n: int) -> list[Graph]:
    """One representative per isomorphism class of connected graphs on n vertices.

    Built-in enumeration stops at n = 7; pass larger corpora in as graph6
    files (see `rpqaoa.graph6.read_graph6`).
    """
    if n < 1:
        raise InvalidInputError(f"need n >= 1, got {n}")
    if n > ENUMERATION_MAX_N:
        raise CapacityError(
            f"built-in enumeration is capped at n={ENUMERATION_MAX_N}; "
            f"ingest a graph6 corpus file for n={n}"
        )
    graphs = [graph_from_code(code, n) for code in _all_graph_codes(n)]
    return [g for g in graphs if is_connected(g)]
