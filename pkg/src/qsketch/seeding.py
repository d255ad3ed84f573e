"""Counter-based seed derivation.

Every random stream in the package is derived from a 64-bit master seed plus
a tuple of keys (strings or non-negative integers).  String keys are mapped to
integers with CRC-32, so the derivation is stable across Python processes
(unlike ``hash``).  The keys become the ``spawn_key`` of a
:class:`numpy.random.SeedSequence`, which makes streams for distinct key
tuples statistically independent.
"""

import zlib

import numpy as np

MASK64 = (1 << 64) - 1


def _key(k):
    if isinstance(k, str):
        return zlib.crc32(k.encode("utf-8"))
    k = int(k)
    if k < 0:
        raise ValueError(f"seed keys must be non-negative, got {k}")
    return k


def seed_sequence(master_seed, *keys):
    return np.random.SeedSequence(int(master_seed) & MASK64, spawn_key=tuple(_key(k) for k in keys))


def derive_seed(master_seed, *keys):
    """Return a 64-bit integer seed for the stream named by ``keys``."""
    lo, hi = seed_sequence(master_seed, *keys).generate_state(2, dtype=np.uint32)
    return (int(hi) << 32) | int(lo)


def derive_rng(master_seed, *keys):
    """Return a fresh ``numpy.random.Generator`` for the stream named by ``keys``."""
    return np.random.Generator(np.random.PCG64(seed_sequence(master_seed, *keys)))
