"""Seeded random streams.

Every Monte Carlo trial draws from its own Philox stream keyed by
``(seed, *key)`` through :class:`numpy.random.SeedSequence` spawn keys, so
trial ``i`` sees the same numbers no matter which other trials run, in what
order, or in which process.
"""

from __future__ import annotations

import numpy as np


def stream(seed: int, *key: int) -> np.random.Generator:
    """Philox generator for trial ``key`` under master ``seed``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return stream(0 if rng is None else int(rng))
