"""Optimisation instances: Max-Cut and random QUBO cost functions over spins.

Conventions shared by every module in this package:

* a bitstring is an integer index in ``0 .. 2**n - 1`` whose bit ``i`` is
  binary variable ``x_i`` (variable 0 is the least significant bit);
* spins are ``z_i = 2*x_i - 1``, so ``x_i = 1`` maps to ``z_i = +1``;
* the cost of a bitstring is ``sum_{i<j} s_ij z_i z_j + sum_i s_ii z_i``
  with integer coefficients;
* lower cost is better: the lowest level of a spectrum is the ground level.

Instances, cost tables and spectra are immutable after construction and can
be shared freely across parallel workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import CapacityError, InvalidInputError
from .seeding import generator

DEFAULT_MAX_QUBITS = 24

MAXCUT_UNWEIGHTED = "maxcut_unweighted"
MAXCUT_WEIGHTED = "maxcut_weighted"
QUBO_UNWEIGHTED = "qubo_unweighted"
QUBO_WEIGHTED = "qubo_weighted"
CUSTOM = "custom"
KINDS = (MAXCUT_UNWEIGHTED, MAXCUT_WEIGHTED, QUBO_UNWEIGHTED, QUBO_WEIGHTED, CUSTOM)

# Nonzero coefficient pool for weighted random QUBO draws.  Zero is excluded
# on purpose: a zero draw would silently lower the realised density below the
# sampled density parameter.
WEIGHTED_COEFFICIENTS = (-3, -2, -1, 1, 2, 3)


def iter_pairs(n: int) -> Iterator[tuple[int, int]]:
    """Unordered pairs (i, j), i < j, in column-major order: (0,1), (0,2), (1,2), ..."""
    for j in range(1, n):
        for i in range(j):
            yield i, j


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with optional integer edge weights.

    ``edges`` holds (i, j) pairs with i < j; construction normalises order,
    rejects self-loops, duplicates and out-of-range endpoints.  ``weights``
    (when present) is aligned with the normalised edge order.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    weights: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInputError(f"graph needs at least one vertex, got n={self.n}")
        normalised = []
        for e in self.edges:
            i, j = int(e[0]), int(e[1])
            if i == j:
                raise InvalidInputError(f"self-loop on vertex {i}")
            if i > j:
                i, j = j, i
            if not 0 <= i < j < self.n:
                raise InvalidInputError(f"edge ({i},{j}) out of range for n={self.n}")
            normalised.append((i, j))
        order = sorted(range(len(normalised)), key=lambda k: normalised[k])
        edges = tuple(normalised[k] for k in order)
        if len(set(edges)) != len(edges):
            raise InvalidInputError("duplicate edge")
        object.__setattr__(self, "edges", edges)
        if self.weights is not None:
            if len(self.weights) != len(edges):
                raise InvalidInputError("weights length does not match edge count")
            w = tuple(int(self.weights[k]) for k in order)
            object.__setattr__(self, "weights", w)

    def edge_weight(self, k: int) -> int:
        return 1 if self.weights is None else self.weights[k]


@dataclass(frozen=True)
class QuboInstance:
    """Quadratic cost over spins: couplings s_ij (i < j) plus linear terms s_ii.

    All coefficients are integers; this keeps every cost value an integer,
    which the closed-form angle average requires.  ``kind`` tags the problem
    family and is validated against the coefficients.
    """

    n: int
    couplings: tuple[tuple[int, int, int], ...]
    linears: tuple[tuple[int, int], ...]
    kind: str = CUSTOM

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInputError(f"instance needs at least one variable, got n={self.n}")
        if self.kind not in KINDS:
            raise InvalidInputError(f"unknown kind {self.kind!r}")
        seen = set()
        couplings = []
        for i, j, s in self.couplings:
            i, j, s = int(i), int(j), int(s)
            if i > j:
                i, j = j, i
            if not 0 <= i < j < self.n:
                raise InvalidInputError(f"coupling ({i},{j}) out of range for n={self.n}")
            if (i, j) in seen:
                raise InvalidInputError(f"duplicate coupling ({i},{j})")
            seen.add((i, j))
            if s != 0:
                couplings.append((i, j, s))
        object.__setattr__(self, "couplings", tuple(sorted(couplings)))
        linears = []
        seen_lin = set()
        for i, s in self.linears:
            i, s = int(i), int(s)
            if not 0 <= i < self.n:
                raise InvalidInputError(f"linear term on variable {i} out of range")
            if i in seen_lin:
                raise InvalidInputError(f"duplicate linear term on variable {i}")
            seen_lin.add(i)
            if s != 0:
                linears.append((i, s))
        object.__setattr__(self, "linears", tuple(sorted(linears)))
        if self.kind in (MAXCUT_UNWEIGHTED, MAXCUT_WEIGHTED) and self.linears:
            raise InvalidInputError("Max-Cut instances carry no linear terms")
        if self.kind in (MAXCUT_UNWEIGHTED, QUBO_UNWEIGHTED):
            bad = [s for _, _, s in self.couplings if s != 1]
            bad += [s for _, s in self.linears if s != 1]
            if bad:
                raise InvalidInputError("unweighted instances require all coefficients equal 1")

    @classmethod
    def from_dicts(cls, n, couplings, linears=None, kind=CUSTOM) -> "QuboInstance":
        cpl = tuple((i, j, s) for (i, j), s in couplings.items())
        lin = tuple((linears or {}).items())
        return cls(n=n, couplings=cpl, linears=lin, kind=kind)

    def couplings_dict(self) -> dict[tuple[int, int], int]:
        return {(i, j): s for i, j, s in self.couplings}

    def linears_dict(self) -> dict[int, int]:
        return dict(self.linears)


@dataclass(frozen=True)
class CostTable:
    """Exhaustive table of the cost of every bitstring, indexed 0 .. 2**n - 1."""

    n: int
    costs: np.ndarray

    def __post_init__(self):
        costs = np.asarray(self.costs)
        if costs.shape != (2**self.n,):
            raise InvalidInputError(f"cost table must have length 2**{self.n}")
        costs = costs.copy()
        costs.flags.writeable = False
        object.__setattr__(self, "costs", costs)

    @property
    def is_integer_valued(self) -> bool:
        if np.issubdtype(self.costs.dtype, np.integer):
            return True
        return bool(np.all(self.costs == np.round(self.costs)))


@dataclass(frozen=True)
class LevelSpectrum:
    """Unique cost values (strictly ascending) with multiplicities.

    ``level_of`` maps each bitstring index to its level index, so
    ``values[level_of[x]] == costs[x]`` and ``weights.sum() == 2**n``.
    """

    n: int
    values: np.ndarray
    weights: np.ndarray
    level_of: np.ndarray

    def __post_init__(self):
        for name in ("values", "weights", "level_of"):
            arr = np.asarray(getattr(self, name)).copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if len(self.values) != len(self.weights):
            raise InvalidInputError("values and weights length mismatch")
        if len(self.level_of) != 2**self.n:
            raise InvalidInputError("level_of must cover all bitstrings")
        if int(self.weights.sum()) != 2**self.n:
            raise InvalidInputError("level weights must sum to 2**n")
        if len(self.values) > 1 and not np.all(np.diff(self.values) > 0):
            raise InvalidInputError("level values must be strictly ascending")

    @property
    def num_levels(self) -> int:
        return len(self.values)

    @property
    def c_min(self):
        return self.values[0]

    @property
    def c_max(self):
        return self.values[-1]


def cost_eval(inst: QuboInstance, x: int) -> int:
    """Cost of one bitstring: sum s_ij z_i z_j + sum s_ii z_i with z = 2x - 1."""
    x = int(x)
    if not 0 <= x < 2**inst.n:
        raise InvalidInputError(f"bitstring {x} does not fit {inst.n} bits")
    z = [2 * ((x >> i) & 1) - 1 for i in range(inst.n)]
    total = 0
    for i, j, s in inst.couplings:
        total += s * z[i] * z[j]
    for i, s in inst.linears:
        total += s * z[i]
    return total


def _spin_column(n: int, i: int) -> np.ndarray:
    x = np.arange(2**n, dtype=np.int64)
    return ((x >> i) & 1) * 2 - 1


def build_cost_table(inst: QuboInstance, max_n: int = DEFAULT_MAX_QUBITS) -> CostTable:
    """Tabulate the cost of all 2**n bitstrings.

    Raises CapacityError when n exceeds ``max_n`` (the table grows as 2**n).
    """
    if inst.n > max_n:
        raise CapacityError(f"n={inst.n} exceeds the table capacity of {max_n} variables")
    costs = np.zeros(2**inst.n, dtype=np.int64)
    for i, j, s in inst.couplings:
        costs += s * (_spin_column(inst.n, i) * _spin_column(inst.n, j))
    for i, s in inst.linears:
        costs += s * _spin_column(inst.n, i)
    return CostTable(n=inst.n, costs=costs)


def level_decomposition(table: CostTable) -> LevelSpectrum:
    """Group bitstrings by cost value into a sorted level spectrum."""
    values, inverse, counts = np.unique(table.costs, return_inverse=True, return_counts=True)
    return LevelSpectrum(n=table.n, values=values, weights=counts, level_of=inverse)


def maxcut_from_graph(g: Graph) -> QuboInstance:
    """Max-Cut instance of a graph: s_ij = edge weight, no linear terms."""
    couplings = tuple((i, j, g.edge_weight(k)) for k, (i, j) in enumerate(g.edges))
    kind = MAXCUT_UNWEIGHTED if g.weights is None else MAXCUT_WEIGHTED
    return QuboInstance(n=g.n, couplings=couplings, linears=(), kind=kind)


def is_connected(g: Graph) -> bool:
    """True iff the graph has a single connected component."""
    adj = [0] * g.n
    for i, j in g.edges:
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    seen, stack = 1, [0]
    while stack:
        v = stack.pop()
        rest = adj[v] & ~seen
        while rest:
            low = rest & -rest
            rest ^= low
            seen |= low
            stack.append(low.bit_length() - 1)
    return seen == (1 << g.n) - 1


def _random_connected_graph(n: int, rng: np.random.Generator) -> Graph:
    pairs = list(iter_pairs(n))
    while True:
        mask = rng.random(len(pairs)) < 0.5
        edges = tuple(p for p, m in zip(pairs, mask) if m)
        g = Graph(n=n, edges=edges)
        if is_connected(g):
            return g


def random_connected_graph(n: int, seed: int) -> Graph:
    """Uniform random graph with edge probability 1/2, resampled until connected."""
    if n < 2:
        raise InvalidInputError("connected random graphs need n >= 2")
    return _random_connected_graph(n, generator(seed))


def _random_qubo(n: int, weighted: bool, rng: np.random.Generator) -> QuboInstance:
    # Draw order is part of the reproducibility contract: density, then the
    # pair mask in column-major order, then the diagonal mask, then values.
    density = rng.uniform(0.1, 0.9)
    pairs = list(iter_pairs(n))
    pair_mask = rng.random(len(pairs)) < density
    diag_mask = rng.random(n) < density
    pool = np.array(WEIGHTED_COEFFICIENTS)
    if weighted:
        pair_vals = rng.choice(pool, size=int(pair_mask.sum()))
        diag_vals = rng.choice(pool, size=int(diag_mask.sum()))
    else:
        pair_vals = np.ones(int(pair_mask.sum()), dtype=np.int64)
        diag_vals = np.ones(int(diag_mask.sum()), dtype=np.int64)
    couplings = tuple(
        (i, j, int(s)) for (i, j), s in zip((p for p, m in zip(pairs, pair_mask) if m), pair_vals)
    )
    linears = tuple(
        (i, int(s)) for i, s in zip((i for i in range(n) if diag_mask[i]), diag_vals)
    )
    kind = QUBO_WEIGHTED if weighted else QUBO_UNWEIGHTED
    return QuboInstance(n=n, couplings=couplings, linears=linears, kind=kind)


def random_qubo(n: int, weighted: bool, seed: int) -> QuboInstance:
    """Random QUBO with density ~ U[0.1, 0.9] and coefficients 1 or in {-3..3}\\{0}."""
    if n < 2:
        raise InvalidInputError("random QUBO needs n >= 2")
    return _random_qubo(n, weighted, generator(seed))


def instance_to_record(inst: QuboInstance, instance_id: str, seed: Optional[int]) -> dict:
    """Instance JSON record: {id, kind, n, couplings: [[i,j,s]], linears: [[i,s]], seed}."""
    return {
        "id": instance_id,
        "kind": inst.kind,
        "n": inst.n,
        "couplings": [[i, j, s] for i, j, s in inst.couplings],
        "linears": [[i, s] for i, s in inst.linears],
        "seed": seed,
    }


def instance_from_record(record: dict) -> tuple[str, Optional[int], QuboInstance]:
    inst = QuboInstance(
        n=int(record["n"]),
        couplings=tuple((int(i), int(j), int(s)) for i, j, s in record["couplings"]),
        linears=tuple((int(i), int(s)) for i, s in record["linears"]),
        kind=record["kind"],
    )
    seed = record.get("seed")
    return str(record["id"]), (None if seed is None else int(seed)), inst
