"""Deterministic derivation of per-purpose random streams from one master seed.

Splitting rule: the master seed plus a path of tokens (strings are hashed
with CRC32, integers are used as-is) feeds ``numpy.random.SeedSequence``.
The same (master, path) always yields the same stream, and distinct paths
yield statistically independent streams, so deployment, channel and epoch
sampling can be reproduced or parallelised independently.
"""

from __future__ import annotations

import zlib

import numpy as np

__all__ = ["derive_seed_sequence", "derive_rng"]


def _token_to_int(token) -> int:
    if isinstance(token, (int, np.integer)):
        return int(token) & 0xFFFFFFFF
    if isinstance(token, str):
        return zlib.crc32(token.encode("utf-8"))
    raise TypeError(f"seed path tokens must be int or str, got {type(token)!r}")


def derive_seed_sequence(master_seed: int, *path) -> np.random.SeedSequence:
    """SeedSequence for the stream identified by ``path`` under ``master_seed``."""
    entropy = [int(master_seed) & 0xFFFFFFFFFFFFFFFF]
    entropy.extend(_token_to_int(t) for t in path)
    return np.random.SeedSequence(entropy)


def derive_rng(master_seed: int, *path) -> np.random.Generator:
    """Generator for the stream identified by ``path`` under ``master_seed``."""
    return np.random.default_rng(derive_seed_sequence(master_seed, *path))
