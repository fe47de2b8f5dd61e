"""Deterministic seed derivation for reproducible ensembles.

All randomness flows from numpy's PCG64 generator.  Child streams are keyed
by an (ancestor seed, index, ...) tuple through ``numpy.random.SeedSequence``,
so vectorised loops and parallel workers reproduce the sequential results
bit for bit:

* instance seed ``i`` of a sweep  = ``derive_seed(master_seed, i)``
* angle sample ``j`` of an MC run = generator from ``SeedSequence((seed, j))``

The derived seed is the first 64-bit word of the child SeedSequence state.
"""

from __future__ import annotations

import numpy as np


def derive_seed(*parts: int) -> int:
    """Derive a 64-bit child seed from non-negative integer key parts."""
    if not parts:
        raise ValueError("derive_seed needs at least one key part")
    ss = np.random.SeedSequence(tuple(int(p) for p in parts))
    return int(ss.generate_state(1, np.uint64)[0])


def generator(*parts: int) -> np.random.Generator:
    """PCG64 generator keyed by the given parts (see `derive_seed`)."""
    ss = np.random.SeedSequence(tuple(int(p) for p in parts))
    return np.random.Generator(np.random.PCG64(ss))
