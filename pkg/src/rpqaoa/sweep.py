"""Batch orchestration: corpora sweeps, depth scans, scaling fits, searches.

Reproducibility contract: every random quantity is keyed to the master seed
through `rpqaoa.seeding.derive_seed`.  Instance i of an ensemble uses seed
``derive_seed(master_seed, i)`` (recorded in its JSONL line); Monte Carlo
angle sampling for a corpus instance without a generation seed uses the same
derivation.  Reruns of an identical configuration therefore produce byte
identical JSONL and CSV output, regardless of the worker count: results are
merged in instance-index order, never in completion order.
"""

from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from typing import Iterable, NamedTuple, Optional, Sequence, Union

import numpy as np

from .analytic import rp_avg_distribution
from .enumeration import ENUMERATION_MAX_N, canonical_code, code_from_graph, enumerate_connected_graphs
from .errors import ConfigError, InvalidInputError
from .graph6 import read_graph6
from .metrics import (
    METHOD_ANALYTIC,
    METHOD_MC,
    METHODS,
    MetricsRecord,
    compute_metrics,
    shannon_entropy,
    shots_to_goal,
    fit_exponent,
    t_of_n,
)
from .problems import (
    Graph,
    QuboInstance,
    _random_connected_graph,
    _random_qubo,
    build_cost_table,
    instance_to_record,
    level_decomposition,
    maxcut_from_graph,
)
from .qaoa_sim import mc_average_distribution, uniform_distribution
from .seeding import derive_seed, generator

FAMILY_MAXCUT = "maxcut"
FAMILY_MAXCUT_W12 = "maxcut_w12"
FAMILY_QUBO_UNWEIGHTED = "qubo_unweighted"
FAMILY_QUBO_WEIGHTED = "qubo_weighted"
FAMILIES = (FAMILY_MAXCUT, FAMILY_MAXCUT_W12, FAMILY_QUBO_UNWEIGHTED, FAMILY_QUBO_WEIGHTED)

SOURCE_ENUMERATE = "enumerate"
SOURCE_GRAPH6 = "graph6"
SOURCE_ENSEMBLE = "ensemble"
SOURCES = (SOURCE_ENUMERATE, SOURCE_GRAPH6, SOURCE_ENSEMBLE)

SUMMARY_COLUMNS = [
    "n",
    "count",
    "delta_s_min",
    "delta_s_avg",
    "delta_s_max",
    "qmp_min_min",
    "qmp_min_p01",
    "qmp_min_q1",
    "qmp_min_median",
    "qmp_min_q3",
    "qmp_min_p99",
    "qmp_min_max",
]
_PERCENTILE_SUFFIXES = ["min", "p01", "q1", "median", "q3", "p99", "max"]
_PERCENTILES = [0.0, 1.0, 25.0, 50.0, 75.0, 99.0, 100.0]

DEPTH_SCAN_COLUMNS = ["p", "count"] + [f"qmp_min_{s}" for s in _PERCENTILE_SUFFIXES]


@dataclass(frozen=True)
class SweepConfig:
    """One batch run: an instance source, an evaluation method, and seeds."""

    source: str
    method: str = METHOD_ANALYTIC
    n: Optional[int] = None
    graph6_path: Optional[str] = None
    family: Optional[str] = None
    count: Optional[int] = None
    p: int = 1
    samples: int = 200
    master_seed: int = 0
    jobs: int = 1

    def validate(self) -> "SweepConfig":
        if self.source not in SOURCES:
            raise ConfigError(f"unknown source {self.source!r}")
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}")
        if self.method == METHOD_ANALYTIC and self.p != 1:
            raise ConfigError("the closed-form average is a depth-1 result; use mc_average for p > 1")
        if self.method == METHOD_MC and self.samples < 2:
            raise ConfigError("mc_average needs samples >= 2")
        if self.source == SOURCE_ENUMERATE:
            if self.n is None:
                raise ConfigError("enumerate source needs n")
            if self.n > ENUMERATION_MAX_N:
                raise ConfigError(
                    f"exhaustive sweeps are built in up to n={ENUMERATION_MAX_N}; "
                    f"supply a graph6 corpus for n={self.n}"
                )
        elif self.source == SOURCE_GRAPH6:
            if not self.graph6_path:
                raise ConfigError("graph6 source needs a corpus path")
        else:
            if self.family not in FAMILIES:
                raise ConfigError(f"ensemble source needs a family from {FAMILIES}")
            if self.n is None or self.count is None or self.count < 1:
                raise ConfigError("ensemble source needs n and a positive count")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        if self.master_seed < 0:
            raise ConfigError("master_seed must be non-negative")
        return self

    def to_json_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json_dict(cls, data: dict) -> "SweepConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        return cls(**data)


class SweepTask(NamedTuple):
    index: int
    instance_id: str
    seed: Optional[int]
    instance: QuboInstance


def _instance_from_rng(family: str, n: int, rng: np.random.Generator) -> QuboInstance:
    if family == FAMILY_MAXCUT:
        return maxcut_from_graph(_random_connected_graph(n, rng))
    if family == FAMILY_MAXCUT_W12:
        g = _random_connected_graph(n, rng)
        weights = tuple(int(w) for w in rng.integers(1, 3, len(g.edges)))
        return maxcut_from_graph(Graph(n=g.n, edges=g.edges, weights=weights))
    if family == FAMILY_QUBO_UNWEIGHTED:
        return _random_qubo(n, False, rng)
    if family == FAMILY_QUBO_WEIGHTED:
        return _random_qubo(n, True, rng)
    raise InvalidInputError(f"unknown family {family!r}")


def make_instance(family: str, n: int, seed: int) -> QuboInstance:
    """Deterministic random instance of a named family."""
    return _instance_from_rng(family, n, generator(seed))


def build_tasks(config: SweepConfig) -> list[SweepTask]:
    """Materialise the instance list of a sweep, with per-instance seeds."""
    config.validate()
    tasks = []
    if config.source == SOURCE_ENUMERATE:
        for idx, g in enumerate(enumerate_connected_graphs(config.n)):
            inst = maxcut_from_graph(g)
            tasks.append(SweepTask(idx, f"enum{config.n}-{idx:05d}", None, inst))
    elif config.source == SOURCE_GRAPH6:
        graphs = read_graph6(config.graph6_path)
        for idx, g in enumerate(graphs):
            inst = maxcut_from_graph(g)
            tasks.append(SweepTask(idx, f"g6-{idx:05d}", None, inst))
    else:
        for idx in range(config.count):
            seed = derive_seed(config.master_seed, idx)
            inst = make_instance(config.family, config.n, seed)
            tasks.append(SweepTask(idx, f"{config.family}-n{config.n}-{idx:05d}", seed, inst))
    return tasks


def evaluate_task(task: SweepTask, config: SweepConfig) -> MetricsRecord:
    """Run one instance through the configured method."""
    table = build_cost_table(task.instance)
    spectrum = level_decomposition(table)
    dist_rs = uniform_distribution(spectrum)
    if config.method == METHOD_ANALYTIC:
        dist_q = rp_avg_distribution(table, spectrum)
        record_seed = task.seed
    else:
        mc_seed = task.seed if task.seed is not None else derive_seed(config.master_seed, task.index)
        dist_q = mc_average_distribution(table, spectrum, config.p, config.samples, mc_seed)
        record_seed = mc_seed
    return compute_metrics(
        task.instance,
        spectrum,
        dist_q,
        dist_rs,
        p=(1 if config.method == METHOD_ANALYTIC else config.p),
        method=config.method,
        instance_id=task.instance_id,
        seed=record_seed,
    )


def _worker(args: tuple[SweepTask, SweepConfig]) -> MetricsRecord:
    return evaluate_task(*args)


def run_sweep(config: SweepConfig) -> list[MetricsRecord]:
    """Evaluate every instance of the configured corpus, in instance order."""
    tasks = build_tasks(config)
    if config.jobs == 1:
        return [evaluate_task(task, config) for task in tasks]
    with ProcessPoolExecutor(max_workers=config.jobs) as pool:
        chunk = max(1, len(tasks) // (4 * config.jobs))
        return list(pool.map(_worker, ((t, config) for t in tasks), chunksize=chunk))


def summarize_records(records: Sequence[MetricsRecord]) -> list[dict]:
    """Per-n summary rows: entropy-increase stats plus qmp_min percentiles.

    Aggregation is over record values only, so the result does not depend on
    the input order.
    """
    rows = []
    by_n: dict[int, list[MetricsRecord]] = {}
    for record in records:
        by_n.setdefault(record.n, []).append(record)
    for n in sorted(by_n):
        group = by_n[n]
        delta = np.array([r.delta_s for r in group])
        qmp_min = np.array([r.qmp_min for r in group])
        quantiles = np.percentile(qmp_min, _PERCENTILES)
        row = {
            "n": n,
            "count": len(group),
            "delta_s_min": float(delta.min()),
            "delta_s_avg": float(delta.mean()),
            "delta_s_max": float(delta.max()),
        }
        row.update({f"qmp_min_{s}": float(q) for s, q in zip(_PERCENTILE_SUFFIXES, quantiles)})
        rows.append(row)
    return rows


def write_summary_csv(path: Union[str, os.PathLike], rows: Iterable[dict],
                      columns: Optional[Sequence[str]] = None) -> None:
    columns = list(columns or SUMMARY_COLUMNS)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([row[c] for c in columns])


def depth_scan(
    tasks: Sequence[SweepTask],
    p_list: Sequence[int],
    samples: int,
    master_seed: int,
) -> list[dict]:
    """qmp_min percentile summary per circuit depth, Monte Carlo averaged.

    Each (instance, depth) pair draws its own angle stream, keyed by the
    instance seed and the depth, so depths are independent measurements.
    """
    if not p_list:
        raise ConfigError("depth scan needs a non-empty depth list")
    if samples < 2:
        raise ConfigError("depth scan needs samples >= 2")
    rows = []
    for p in p_list:
        qmp_mins = []
        for task in tasks:
            base = task.seed if task.seed is not None else derive_seed(master_seed, task.index)
            table = build_cost_table(task.instance)
            spectrum = level_decomposition(table)
            dist_rs = uniform_distribution(spectrum)
            dist_q = mc_average_distribution(table, spectrum, p, samples, derive_seed(base, p))
            qmp_mins.append(float(dist_q.probs[0] / dist_rs.probs[0]))
        quantiles = np.percentile(np.array(qmp_mins), _PERCENTILES)
        row = {"p": int(p), "count": len(tasks)}
        row.update({f"qmp_min_{s}": float(q) for s, q in zip(_PERCENTILE_SUFFIXES, quantiles)})
        rows.append(row)
    return rows


def fit_records(records: Sequence[MetricsRecord], goal: float = 0.99) -> dict:
    """Scaling fit of the measurements-to-ground-level against problem size.

    Uses each record's ground-level probability, takes the median T per n,
    and fits log2(median T) linearly in n.  Needs records spanning at least
    three distinct n values.
    """
    if not records:
        raise ConfigError("no records to fit")
    by_n: dict[int, list[MetricsRecord]] = {}
    for record in records:
        by_n.setdefault(record.n, []).append(record)
    if len(by_n) < 3:
        raise ConfigError(f"fit needs records spanning >= 3 values of n, got {sorted(by_n)}")
    instances = []
    per_n = []
    for n in sorted(by_n):
        ts = []
        for record in by_n[n]:
            p_min = float(record.level_p_avg[0])
            t = t_of_n(p_min)
            ts.append(t)
            instances.append(
                {
                    "id": record.instance_id,
                    "n": n,
                    "p_min": p_min,
                    "t": t,
                    "shots_to_goal": shots_to_goal(p_min, goal),
                }
            )
        per_n.append({"n": n, "count": len(ts), "median_t": float(np.median(ts))})
    slope, intercept = fit_exponent([(row["n"], row["median_t"]) for row in per_n])
    return {
        "goal": goal,
        "slope": slope,
        "intercept": intercept,
        "per_n": per_n,
        "instances": instances,
    }


def counterexample_search(
    family: str,
    n_min: int,
    n_max: int,
    budget: int,
    seed: int,
    mc_samples: int = 10_000,
    se_factor: float = 5.0,
) -> dict:
    """Random search for an instance whose angle-averaged entropy drops.

    Trial t draws a size from [n_min, n_max] and an instance of the family,
    both from the generator keyed (seed, t), and evaluates the exact
    closed-form entropy increase.  The first hit with delta_S < 0 is
    re-verified against the Monte Carlo average (per-level agreement within
    ``se_factor`` standard errors and a negative MC entropy increase) before
    it is reported.  Exhausting the budget is a normal, reported outcome.
    """
    if family not in FAMILIES:
        raise InvalidInputError(f"unknown family {family!r}")
    if budget < 1:
        raise InvalidInputError("search budget must be >= 1")
    if not 2 <= n_min <= n_max:
        raise InvalidInputError(f"need 2 <= n_min <= n_max, got [{n_min}, {n_max}]")
    min_delta_seen = np.inf
    for trial in range(budget):
        rng = generator(seed, trial)
        n = int(rng.integers(n_min, n_max + 1))
        inst = _instance_from_rng(family, n, rng)
        table = build_cost_table(inst)
        spectrum = level_decomposition(table)
        dist_rs = uniform_distribution(spectrum)
        dist_q = rp_avg_distribution(table, spectrum)
        delta_s = shannon_entropy(dist_q) - shannon_entropy(dist_rs)
        min_delta_seen = min(min_delta_seen, delta_s)
        if delta_s >= 0:
            continue
        mc_seed = derive_seed(seed, trial, 1)
        dist_mc = mc_average_distribution(table, spectrum, 1, mc_samples, mc_seed)
        gap = np.abs(dist_mc.probs - dist_q.probs)
        tolerance = se_factor * np.maximum(dist_mc.stderr, 1e-300)
        mc_delta_s = shannon_entropy(dist_mc) - shannon_entropy(dist_rs)
        verified = bool(np.all(gap <= tolerance) and mc_delta_s < 0)
        instance_id = f"counterexample-{family}-{trial:06d}"
        record = compute_metrics(
            inst, spectrum, dist_q, dist_rs, 1, METHOD_ANALYTIC, instance_id, seed=None
        )
        return {
            "found": True,
            "verified": verified,
            "trials": trial + 1,
            "family": family,
            "delta_s": float(delta_s),
            "mc_delta_s": float(mc_delta_s),
            "mc_samples": mc_samples,
            "mc_seed": mc_seed,
            "max_gap_in_se": float((gap / np.maximum(dist_mc.stderr, 1e-300)).max()),
            "instance": instance_to_record(inst, instance_id, None),
            "record": record,
        }
    return {
        "found": False,
        "trials": budget,
        "family": family,
        "min_delta_s_seen": float(min_delta_seen),
    }


def generate_instances(family: str, n: int, count: int, master_seed: int) -> list[SweepTask]:
    """Ensemble emission: deterministic instances with their seeds."""
    if family not in FAMILIES:
        raise InvalidInputError(f"unknown family {family!r}")
    tasks = []
    for idx in range(count):
        seed = derive_seed(master_seed, idx)
        inst = make_instance(family, n, seed)
        tasks.append(SweepTask(idx, f"{family}-n{n}-{idx:05d}", seed, inst))
    return tasks


def generate_graph_corpus(
    n: int,
    count: int,
    master_seed: int,
    dedup: bool = True,
    max_attempts: Optional[int] = None,
) -> list[Graph]:
    """Random connected graphs, optionally deduplicated up to isomorphism.

    Draw i uses seed ``derive_seed(master_seed, i)``; with ``dedup`` the
    first representative of each isomorphism class is kept, so the output is
    deterministic and free of repeated classes.
    """
    if count < 1:
        raise InvalidInputError("corpus size must be >= 1")
    max_attempts = max_attempts or 50 * count
    graphs: list[Graph] = []
    seen: set[int] = set()
    for idx in range(max_attempts):
        g = _random_connected_graph(n, generator(derive_seed(master_seed, idx)))
        if dedup:
            code = canonical_code(code_from_graph(g), n)
            if code in seen:
                continue
            seen.add(code)
        graphs.append(g)
        if len(graphs) == count:
            return graphs
    raise InvalidInputError(
        f"could not collect {count} distinct graphs in {max_attempts} attempts"
    )
