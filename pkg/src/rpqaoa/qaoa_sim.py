"""Exact statevector simulation of the depth-p QAOA circuit.

The circuit alternates a diagonal phase separator ``exp(-i * gamma_j * F)``
with a transverse-field mixer ``exp(-i * beta_j * sum_k X_k)`` applied to the
uniform superposition.  The mixer factorises exactly into n commuting
single-qubit rotations ``cos(beta) I - i sin(beta) X``, so there is no
Trotter error anywhere in this module.

Angle averaging draws every layer's angles independently, beta from
[0, pi] and gamma from [0, 2*pi]; sample j of a run seeded ``s`` uses the
generator keyed (s, j), so samples can be evaluated in any order or in
parallel without changing the result.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import CapacityError, InvalidInputError
from .problems import DEFAULT_MAX_QUBITS, CostTable, LevelSpectrum
from .seeding import generator

NORM_TOL = 1e-10
NEGATIVE_PROB_TOL = -1e-12

# Amplitude entries processed per batch chunk; bounds simulator memory to
# roughly 64 MB of complex128 regardless of sample count.
_CHUNK_AMPLITUDES = 1 << 22


@dataclass(frozen=True)
class AngleSet:
    """Depth-p circuit angles: beta_j in [0, pi], gamma_j in [0, 2*pi]."""

    beta: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        beta = np.atleast_1d(np.asarray(self.beta, dtype=np.float64)).copy()
        gamma = np.atleast_1d(np.asarray(self.gamma, dtype=np.float64)).copy()
        if beta.shape != gamma.shape or beta.ndim != 1 or len(beta) < 1:
            raise InvalidInputError("beta and gamma must be equal-length vectors, p >= 1")
        if np.any(beta < 0) or np.any(beta > np.pi):
            raise InvalidInputError("beta angles must lie in [0, pi]")
        if np.any(gamma < 0) or np.any(gamma > 2 * np.pi):
            raise InvalidInputError("gamma angles must lie in [0, 2*pi]")
        beta.flags.writeable = False
        gamma.flags.writeable = False
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "gamma", gamma)

    @property
    def p(self) -> int:
        return len(self.beta)

    @classmethod
    def random(cls, p: int, rng: np.random.Generator) -> "AngleSet":
        return cls(beta=rng.uniform(0.0, np.pi, p), gamma=rng.uniform(0.0, 2 * np.pi, p))


@dataclass(frozen=True)
class Statevector:
    """Full 2**n amplitude vector of an n-qubit state."""

    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=np.complex128)
        if amp.shape != (2**self.n,):
            raise InvalidInputError(f"amplitudes must have length 2**{self.n}")
        amp = amp.copy()
        amp.flags.writeable = False
        object.__setattr__(self, "amplitudes", amp)

    def norm(self) -> float:
        return float(np.sqrt((self.amplitudes.real**2 + self.amplitudes.imag**2).sum()))


@dataclass(frozen=True)
class EnergyDistribution:
    """Probability of sampling each cost level of a spectrum.

    ``stderr`` carries per-level standard errors when the distribution is a
    Monte Carlo average; exact distributions leave it None.
    """

    spectrum: LevelSpectrum
    probs: np.ndarray
    stderr: Optional[np.ndarray] = None

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=np.float64)
        if probs.shape != (self.spectrum.num_levels,):
            raise InvalidInputError("probability vector does not match the spectrum")
        if probs.min(initial=0.0) < NEGATIVE_PROB_TOL:
            raise InvalidInputError(f"negative level probability {probs.min()}")
        probs = np.where(probs < 0, 0.0, probs)
        if abs(probs.sum() - 1.0) > 1e-9:
            raise InvalidInputError(f"level probabilities sum to {probs.sum()}, not 1")
        probs.flags.writeable = False
        object.__setattr__(self, "probs", probs)
        if self.stderr is not None:
            err = np.asarray(self.stderr, dtype=np.float64).copy()
            if err.shape != probs.shape:
                raise InvalidInputError("stderr does not match the spectrum")
            err.flags.writeable = False
            object.__setattr__(self, "stderr", err)


def _evolve_batch(costs: np.ndarray, betas: np.ndarray, gammas: np.ndarray) -> np.ndarray:
    """Evolve a batch of circuits; betas/gammas are (S, p), returns (S, 2**n) states."""
    size = len(costs)
    n = size.bit_length() - 1
    S, p = betas.shape
    state = np.full((S, size), 2 ** (-n / 2), dtype=np.complex128)
    cf = costs.astype(np.float64)
    for layer in range(p):
        state *= np.exp(-1j * gammas[:, layer][:, None] * cf[None, :])
        c = np.cos(betas[:, layer])[:, None, None]
        s = np.sin(betas[:, layer])[:, None, None]
        for k in range(n):
            view = state.reshape(S, -1, 2, 2**k)
            a0 = view[:, :, 0, :].copy()
            a1 = view[:, :, 1, :]
            view[:, :, 0, :] = c * a0 - 1j * s * a1
            view[:, :, 1, :] = c * a1 - 1j * s * a0
    return state


def run_qaoa(table: CostTable, angles: AngleSet, max_n: int = DEFAULT_MAX_QUBITS) -> Statevector:
    """Final state of the depth-p circuit for one angle assignment."""
    if table.n > max_n:
        raise CapacityError(f"n={table.n} exceeds the simulator capacity of {max_n} qubits")
    state = _evolve_batch(table.costs, angles.beta[None, :], angles.gamma[None, :])[0]
    return Statevector(n=table.n, amplitudes=state)


def bitstring_probs(state: Statevector) -> np.ndarray:
    """Measurement probability of every bitstring."""
    amp = state.amplitudes
    return amp.real**2 + amp.imag**2


def energy_distribution(probs: np.ndarray, spectrum: LevelSpectrum) -> EnergyDistribution:
    """Bin bitstring probabilities by cost level."""
    probs = np.asarray(probs, dtype=np.float64)
    if probs.shape != (2**spectrum.n,):
        raise InvalidInputError("probability vector must cover all bitstrings")
    level_probs = np.bincount(spectrum.level_of, weights=probs, minlength=spectrum.num_levels)
    return EnergyDistribution(spectrum=spectrum, probs=level_probs)


def uniform_distribution(spectrum: LevelSpectrum) -> EnergyDistribution:
    """Level distribution of uniform bitstring sampling: w_k / 2**n.

    This equals the measurement statistics of the bare uniform superposition,
    i.e. the p = 0 circuit.
    """
    return EnergyDistribution(spectrum=spectrum, probs=spectrum.weights / 2**spectrum.n)


def _sample_angles(seed: int, samples: int, p: int) -> tuple[np.ndarray, np.ndarray]:
    betas = np.empty((samples, p))
    gammas = np.empty((samples, p))
    for j in range(samples):
        rng = generator(seed, j)
        betas[j] = rng.uniform(0.0, np.pi, p)
        gammas[j] = rng.uniform(0.0, 2 * np.pi, p)
    return betas, gammas


def mc_average_distribution(
    table: CostTable,
    spectrum: LevelSpectrum,
    p: int,
    samples: int = 200,
    seed: int = 0,
) -> EnergyDistribution:
    """Average the exact per-angle level distributions over random angles.

    Each sample's per-angle distribution is computed exactly (no shot
    noise); the returned ``stderr`` is the per-level standard error of the
    sample mean.  ``p = 0`` has no angles to draw and reduces to the uniform
    distribution exactly.
    """
    if samples < 2:
        raise InvalidInputError("Monte Carlo averaging needs samples >= 2")
    if p < 0:
        raise InvalidInputError("depth must be non-negative")
    L = spectrum.num_levels
    if p == 0:
        base = uniform_distribution(spectrum)
        return EnergyDistribution(spectrum=spectrum, probs=base.probs, stderr=np.zeros(L))
    order = np.argsort(spectrum.level_of, kind="stable")
    starts = np.searchsorted(spectrum.level_of[order], np.arange(L))
    betas, gammas = _sample_angles(seed, samples, p)
    acc = np.zeros(L)
    acc_sq = np.zeros(L)
    chunk = max(1, _CHUNK_AMPLITUDES // 2**table.n)
    for lo in range(0, samples, chunk):
        states = _evolve_batch(table.costs, betas[lo:lo + chunk], gammas[lo:lo + chunk])
        probs = states.real**2 + states.imag**2
        level_probs = np.add.reduceat(probs[:, order], starts, axis=1)
        acc += level_probs.sum(axis=0)
        acc_sq += (level_probs**2).sum(axis=0)
    mean = acc / samples
    var = np.maximum(acc_sq - samples * mean**2, 0.0) / (samples - 1)
    stderr = np.sqrt(var / samples)
    return EnergyDistribution(spectrum=spectrum, probs=mean, stderr=stderr)
