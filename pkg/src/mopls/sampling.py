"""Experimental design and seeded random streams.

Streams are keyed by (seed, *key) through numpy's SeedSequence spawn keys,
so the master (key 0) and every worker task get statistically independent,
reproducible generators regardless of execution order.
"""

from __future__ import annotations

import numpy as np


def make_rng(seed: int, *key: int) -> np.random.Generator:
    """Deterministic generator for stream ``key`` under ``seed``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=key)))


def latin_hypercube(n: int, d: int, rng: np.random.Generator) -> np.ndarray:
    """Plain Latin hypercube design of ``n`` points in [0, 1]^d.

    Each dimension gets exactly one sample per stratum [j/n, (j+1)/n),
    placed uniformly within the stratum; stratum permutations are
    independent across dimensions.
    """
    if n < 1 or d < 1:
        raise ValueError("n and d must be positive")
    u = rng.random((n, d))
    strata = np.column_stack([rng.permutation(n) for _ in range(d)])
    return (strata + u) / n
