"""Closed-form evaluators for depth-one circuits and their angle averages.

For integer-valued cost tables, averaging the depth-one output distribution
over beta in [0, pi] and gamma in [0, 2*pi] has a closed form: the gamma
average cancels every pair of bitstrings (y, y') with different costs, and
the beta average of the surviving trigonometric moments is a Wallis
integral.  What remains is the uniform baseline w_f / 2**n plus a sum over
same-cost ordered pairs (y, y') at even Hamming distance, each weighted by

    sign(x, y, y') * coeff[hb],   hb = (h(x,y) + h(x,y')) / 2,

where ``coeff[hb] = C(2n,n) * C(n,hb) / (2**(3n) * C(2n,2hb))`` equals the
beta moment ``(1/pi) * integral cos(beta)**(2n-2hb) sin(beta)**(2hb)`` scaled
by 2**(-n), and the sign is ``(-1)**(h(x,y) + hb)``.

The pair sum is evaluated through per-level Hamming distance histograms:
with ``n_a = |{y in L : h(x,y) = a}|`` the ordered pairs of level L split as
``n_a * n_b - delta_ab * n_a``, which turns the naive ``2**n * sum(w_k**2)``
pair loop into a few small matrix products per level without changing a
single term of the sum.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import CapacityError, DomainError, InvalidInputError
from .problems import DEFAULT_MAX_QUBITS, CostTable, LevelSpectrum
from .qaoa_sim import EnergyDistribution

# Entries of the distance matrix processed at once (memory guard).
_CHUNK_ENTRIES = 1 << 22


@lru_cache(maxsize=None)
def pair_coefficients(n: int) -> np.ndarray:
    """Angle-averaged pair weights coeff[hb], hb = 0..n.

    Computed from exact integer binomials; Python integers cannot overflow,
    and the final int/int division rounds once.  The value agrees with the
    Wallis-integral form ``(1/2**n) * (1/pi) * integral_0^pi
    cos(b)**(2(n-hb)) * sin(b)**(2 hb) db`` to full double precision.
    """
    if n < 1:
        raise InvalidInputError(f"need n >= 1, got {n}")
    coeff = np.array(
        [
            math.comb(2 * n, n) * math.comb(n, hb) / (math.comb(2 * n, 2 * hb) * 8**n)
            for hb in range(n + 1)
        ]
    )
    coeff.flags.writeable = False
    return coeff


@lru_cache(maxsize=None)
def _pair_sign_matrix(n: int) -> np.ndarray:
    """Matrix G[a, b] = (-1)**(a + (a+b)/2) * coeff[(a+b)/2] for even a + b, else 0."""
    a = np.arange(n + 1)
    total = a[:, None] + a[None, :]
    hb = total // 2
    sign = np.where((a[:, None] + hb) % 2 == 0, 1.0, -1.0)
    G = np.where(total % 2 == 0, sign * pair_coefficients(n)[hb], 0.0)
    G.flags.writeable = False
    return G


def _require_integer_costs(table: CostTable) -> np.ndarray:
    if not table.is_integer_valued:
        raise DomainError("closed-form averaging requires an integer-valued cost table")
    return table.costs.astype(np.int64)


def single_depth_prob(table: CostTable, beta1: float, gamma1: float, x: int) -> float:
    """Probability of measuring bitstring x after one phase + mixer layer.

    Evaluated with the tangent powers fused into the cosine prefactor, as
    ``cos(beta)**(n-h) * sin(beta)**h`` amplitude terms, so beta = pi/2 is a
    removable point rather than a singularity.
    """
    costs = _require_integer_costs(table)
    n = table.n
    x = int(x)
    if not 0 <= x < 2**n:
        raise InvalidInputError(f"bitstring {x} does not fit {n} bits")
    h = np.bitwise_count(np.arange(2**n, dtype=np.int64) ^ x).astype(np.int64)
    c, s = math.cos(beta1), math.sin(beta1)
    magnitude = np.power(c, n - h) * np.power(s, h)
    cycle = np.array([1.0, -1.0j, -1.0, 1.0j])  # (-i)**h, h mod 4
    amp = np.sum(cycle[h & 3] * magnitude * np.exp(-1j * gamma1 * costs))
    return float(amp.real**2 + amp.imag**2) / 2**n


def _level_members(spectrum: LevelSpectrum) -> tuple[np.ndarray, np.ndarray]:
    """Bitstrings sorted by level, plus the start offset of each level."""
    order = np.argsort(spectrum.level_of, kind="stable").astype(np.int64)
    starts = np.searchsorted(spectrum.level_of[order], np.arange(spectrum.num_levels))
    return order, starts


def _distance_histograms(all_x: np.ndarray, members: np.ndarray, n: int) -> np.ndarray:
    """C[x, a] = number of level members at Hamming distance a from x."""
    N = len(all_x)
    C = np.zeros((N, n + 1), dtype=np.float64)
    rows = np.arange(N, dtype=np.int64)[:, None] * (n + 1)
    chunk = max(1, _CHUNK_ENTRIES // N)
    for lo in range(0, len(members), chunk):
        block = members[lo:lo + chunk]
        dist = np.bitwise_count(all_x[:, None] ^ block[None, :]).astype(np.int64)
        C += np.bincount((rows + dist).ravel(), minlength=N * (n + 1)).reshape(N, n + 1)
    return C


def rp_avg_distribution(table: CostTable, spectrum: LevelSpectrum) -> EnergyDistribution:
    """Exact angle-averaged level distribution of the depth-one circuit."""
    costs = _require_integer_costs(table)
    if table.n > DEFAULT_MAX_QUBITS:
        raise CapacityError(f"n={table.n} exceeds the capacity of {DEFAULT_MAX_QUBITS}")
    if spectrum.n != table.n or not np.array_equal(spectrum.values[spectrum.level_of], costs):
        raise InvalidInputError("spectrum does not describe this cost table")
    n = table.n
    N = 2**n
    G = _pair_sign_matrix(n)
    diag = pair_coefficients(n)
    order, starts = _level_members(spectrum)
    all_x = np.arange(N, dtype=np.int64)
    pair_term = np.zeros(N)
    for lv in range(spectrum.num_levels):
        lo = starts[lv]
        hi = starts[lv + 1] if lv + 1 < spectrum.num_levels else N
        if hi - lo < 2:
            continue  # a singleton level has no ordered pairs
        C = _distance_histograms(all_x, order[lo:hi], n)
        pair_term += ((C @ G) * C).sum(axis=1) - C @ diag
    level_probs = spectrum.weights / N + np.bincount(
        spectrum.level_of, weights=pair_term, minlength=spectrum.num_levels
    )
    return EnergyDistribution(spectrum=spectrum, probs=level_probs)


def two_level_table(n: int) -> CostTable:
    """Cost table with a unique optimum: F(0) = 0 and F(x) = 1 elsewhere."""
    if n < 1:
        raise InvalidInputError(f"need n >= 1, got {n}")
    costs = np.ones(2**n, dtype=np.int64)
    costs[0] = 0
    return CostTable(n=n, costs=costs)


def two_level_prob(n: int) -> float:
    """Closed-form angle-averaged probability of the unique optimum.

    For the two-level cost function with a non-degenerate ground state the
    pair sum collapses to ``1/2**n - 1/2**(2n-1) + C(2n,n)/2**(3n-1)``.
    Evaluated with exact integer binomials (no overflow at any n).
    """
    if n < 1:
        raise InvalidInputError(f"need n >= 1, got {n}")
    return 1 / 2**n - 1 / 2 ** (2 * n - 1) + math.comb(2 * n, n) / 2 ** (3 * n - 1)


def two_level_qmp_asymptote(n: int) -> float:
    """Large-n limit of the ground-level gain for the two-level family: 1 + 2/sqrt(pi*n)."""
    if n < 1:
        raise InvalidInputError(f"need n >= 1, got {n}")
    return 1.0 + 2.0 / math.sqrt(math.pi * n)
