"""Entropy, ground-level sampling gain, approximation ratio and scaling fits.

The ground-level gain of a distribution against uniform bitstring sampling
is the per-level ratio Q_c = P_q(c) / P_rs(c); ``qmp_min`` evaluates it at
the lowest cost level.  ``t_of_n`` converts the ground-level probability
into the expected number of measurements up to a constant, whose log2 slope
against n is the empirical complexity exponent.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import DomainError, InvalidInputError
from .problems import LevelSpectrum, QuboInstance
from .qaoa_sim import EnergyDistribution

METHOD_ANALYTIC = "analytic_eq5"
METHOD_MC = "mc_average"
METHODS = (METHOD_ANALYTIC, METHOD_MC)


def shannon_entropy(dist: Union[EnergyDistribution, Sequence[float], np.ndarray]) -> float:
    """Shannon entropy in bits, with 0 * log(0) = 0."""
    probs = np.asarray(getattr(dist, "probs", dist), dtype=np.float64)
    positive = probs[probs > 0]
    return float(-(positive * np.log2(positive)).sum())


def _check_same_spectrum(a: EnergyDistribution, b: EnergyDistribution) -> None:
    if a.spectrum is b.spectrum:
        return
    if a.spectrum.n != b.spectrum.n or not np.array_equal(a.spectrum.values, b.spectrum.values):
        raise InvalidInputError("distributions are defined over different spectra")


def qmp(dist_q: EnergyDistribution, dist_rs: EnergyDistribution) -> np.ndarray:
    """Per-level ratio P_q(c) / P_rs(c); entry 0 is the ground level."""
    _check_same_spectrum(dist_q, dist_rs)
    if np.any(dist_rs.probs <= 0):
        raise InvalidInputError("reference distribution must be strictly positive")
    return dist_q.probs / dist_rs.probs


def approx_ratio(dist: EnergyDistribution) -> float:
    """Normalised expected quality (c_max - E[c]) / (c_max - c_min), in [0, 1].

    Defined in normalised cost form so it is meaningful for every problem
    family, including costs of mixed sign; single-level spectra return 1.
    """
    if dist.spectrum.num_levels < 2:
        return 1.0
    values = dist.spectrum.values.astype(np.float64)
    expected = float(dist.probs @ values)
    return (float(values[-1]) - expected) / (float(values[-1]) - float(values[0]))


def t_of_n(p_min: float) -> float:
    """Expected measurements to hit the ground level, up to a constant: -1/ln(1-p).

    Natural log throughout; any other base rescales every T(n) by the same
    factor and cancels in the log2 slope fit.
    """
    p_min = float(p_min)
    if not 0.0 < p_min < 1.0:
        raise DomainError(f"ground-level probability must lie in (0, 1), got {p_min}")
    return -1.0 / math.log1p(-p_min)


def shots_to_goal(p_min: float, goal: float) -> float:
    """Measurements needed so that the ground level appears with probability >= goal."""
    if not 0.0 < goal < 1.0:
        raise DomainError(f"goal probability must lie in (0, 1), got {goal}")
    p_min = float(p_min)
    if not 0.0 < p_min < 1.0:
        raise DomainError(f"ground-level probability must lie in (0, 1), got {p_min}")
    return math.log1p(-goal) / math.log1p(-p_min)


def fit_exponent(points: Iterable[tuple[float, float]]) -> tuple[float, float]:
    """Least-squares slope and intercept of log2(T) against n."""
    pts = [(float(n), float(t)) for n, t in points]
    if len({n for n, _ in pts}) < 2:
        raise InvalidInputError("fit needs at least two distinct n values")
    if any(t <= 0 for _, t in pts):
        raise InvalidInputError("fit needs positive T values")
    ns = np.array([n for n, _ in pts])
    logt = np.log2([t for _, t in pts])
    slope, intercept = np.polyfit(ns, logt, 1)
    return float(slope), float(intercept)


@dataclass(frozen=True, eq=False)
class MetricsRecord:
    """Per-instance derived quantities plus the per-level data to rebuild them."""

    instance_id: str
    kind: str
    n: int
    p: int
    method: str
    seed: Optional[int]
    c_min: int
    c_max: int
    s_c: float
    s_q: float
    delta_s: float
    qmp_per_level: np.ndarray
    qmp_min: float
    approx_ratio_rs: float
    approx_ratio_q: float
    level_values: np.ndarray
    level_weights: np.ndarray
    level_p_rs: np.ndarray
    level_p_avg: np.ndarray


def compute_metrics(
    instance: QuboInstance,
    spectrum: LevelSpectrum,
    dist_q: EnergyDistribution,
    dist_rs: EnergyDistribution,
    p: int,
    method: str,
    instance_id: str,
    seed: Optional[int] = None,
) -> MetricsRecord:
    """Assemble the full metrics record for one evaluated instance."""
    if method not in METHODS:
        raise InvalidInputError(f"unknown method {method!r}")
    _check_same_spectrum(dist_q, dist_rs)
    if spectrum.n != dist_q.spectrum.n or not np.array_equal(spectrum.values, dist_q.spectrum.values):
        raise InvalidInputError("distributions are not aligned with the spectrum")
    s_c = shannon_entropy(dist_rs)
    s_q = shannon_entropy(dist_q)
    ratios = qmp(dist_q, dist_rs)
    return MetricsRecord(
        instance_id=instance_id,
        kind=instance.kind,
        n=instance.n,
        p=p,
        method=method,
        seed=seed,
        c_min=int(spectrum.values[0]),
        c_max=int(spectrum.values[-1]),
        s_c=s_c,
        s_q=s_q,
        delta_s=s_q - s_c,
        qmp_per_level=ratios,
        qmp_min=float(ratios[0]),
        approx_ratio_rs=approx_ratio(dist_rs),
        approx_ratio_q=approx_ratio(dist_q),
        level_values=spectrum.values.copy(),
        level_weights=spectrum.weights.copy(),
        level_p_rs=dist_rs.probs.copy(),
        level_p_avg=dist_q.probs.copy(),
    )


def record_to_json_dict(record: MetricsRecord) -> dict:
    """Map a record onto the frozen JSONL schema."""
    return {
        "id": record.instance_id,
        "kind": record.kind,
        "n": record.n,
        "p": record.p,
        "method": record.method,
        "seed": record.seed,
        "c_min": record.c_min,
        "c_max": record.c_max,
        "S_c": record.s_c,
        "S_q": record.s_q,
        "delta_S": record.delta_s,
        "qmp_min": record.qmp_min,
        "approx_ratio_rs": record.approx_ratio_rs,
        "approx_ratio_q": record.approx_ratio_q,
        "levels": [
            {"c": int(c), "w": int(w), "p_rs": float(p_rs), "p_avg": float(p_avg)}
            for c, w, p_rs, p_avg in zip(
                record.level_values, record.level_weights, record.level_p_rs, record.level_p_avg
            )
        ],
    }


def record_from_json_dict(data: dict) -> MetricsRecord:
    """Rebuild a record from its JSONL form; per-level ratios are re-derived."""
    levels = data["levels"]
    p_rs = np.array([lv["p_rs"] for lv in levels])
    p_avg = np.array([lv["p_avg"] for lv in levels])
    seed = data.get("seed")
    return MetricsRecord(
        instance_id=str(data["id"]),
        kind=data["kind"],
        n=int(data["n"]),
        p=int(data["p"]),
        method=data["method"],
        seed=None if seed is None else int(seed),
        c_min=int(data["c_min"]),
        c_max=int(data["c_max"]),
        s_c=float(data["S_c"]),
        s_q=float(data["S_q"]),
        delta_s=float(data["delta_S"]),
        qmp_per_level=p_avg / p_rs,
        qmp_min=float(data["qmp_min"]),
        approx_ratio_rs=float(data["approx_ratio_rs"]),
        approx_ratio_q=float(data["approx_ratio_q"]),
        level_values=np.array([lv["c"] for lv in levels], dtype=np.int64),
        level_weights=np.array([lv["w"] for lv in levels], dtype=np.int64),
        level_p_rs=p_rs,
        level_p_avg=p_avg,
    )


def record_json_line(record: MetricsRecord) -> str:
    return json.dumps(record_to_json_dict(record), separators=(",", ":"))


def write_records_jsonl(path: Union[str, os.PathLike], records: Iterable[MetricsRecord]) -> int:
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(record_json_line(record) + "\n")
            count += 1
    return count


def read_records_jsonl(path: Union[str, os.PathLike]) -> list[MetricsRecord]:
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                records.append(record_from_json_dict(json.loads(line)))
    return records
