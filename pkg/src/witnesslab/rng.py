"""Seedable counter-based randomness.

Draws come from numpy's Philox generator: the (seed, stream index)
pair fully determines a stream, so round i of a randomized test can be
reproduced, or run concurrently, without sharing generator state.
Draw values are therefore stable for a fixed seed across runs.
"""

from __future__ import annotations

import os

import numpy as np

ENV_SEED = "WITNESSLAB_SEED"


def default_seed() -> int:
    """Seed from the environment, or 0 when unset."""
    raw = os.environ.get(ENV_SEED)
    if raw is None:
        return 0
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"{ENV_SEED} must be an integer, got {raw!r}") from exc
    if value < 0:
        raise ValueError(f"{ENV_SEED} must be >= 0")
    return value


class CounterRng:
    """Family of independent streams keyed by (seed, index)."""

    def __init__(self, seed: int | None = None):
        self.seed = default_seed() if seed is None else int(seed)
        if self.seed < 0:
            raise ValueError("seed must be >= 0")

    def stream(self, index: int) -> np.random.Generator:
        """Generator for stream `index`; same (seed, index) = same draws."""
        return np.random.Generator(np.random.Philox(key=self.seed, counter=index))

    @classmethod
    def coerce(cls, value) -> "CounterRng":
        """Accept None (env/default seed), an int seed, or a CounterRng."""
        if isinstance(value, cls):
            return value
        if value is None or isinstance(value, int):
            return cls(value)
        raise TypeError(f"cannot use {type(value).__name__} as rng")
