"""Reproducible random streams, all backed by numpy's PCG64.

PCG64 is a permuted-congruential 64-bit generator whose stream for a
given seed is frozen by numpy's compatibility policy, so shot counts
are bit-reproducible.  Two seed domains are kept apart:

- measurement sampling uses ``Generator(PCG64(seed))`` directly; scans
  derive the per-point seed as ``seed XOR point_index``;
- optimizer restarts route the same user seed through a SeedSequence
  spawn key, so sampling draws and restart draws never share a stream.
"""
from __future__ import annotations

import numpy as np

_OPTIMIZER_DOMAIN = 0x6F7074  # 'opt'


def sampling_generator(seed: int) -> np.random.Generator:
    if seed < 0:
        raise ValueError("seed must be a non-negative integer")
    return np.random.Generator(np.random.PCG64(seed))


def scan_point_seed(seed: int, point_index: int) -> int:
    """Per-scan-point sampling seed: seed XOR point index."""
    return seed ^ point_index


def optimizer_generator(seed: int) -> np.random.Generator:
    if seed < 0:
        raise ValueError("seed must be a non-negative integer")
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(_OPTIMIZER_DOMAIN,))
    return np.random.Generator(np.random.PCG64(ss))
