"""Deterministic seed derivation.

Every random choice in a run is keyed by ``(master_seed, role_tag, *index)``
so results do not depend on the order in which cells are computed.
"""

import zlib

import numpy as np

_U64 = (1 << 64) - 1


def _entropy(master, tag, index):
    return [int(master) & _U64, zlib.crc32(tag.encode("utf-8"))] + [int(i) & _U64 for i in index]


def derive_seed(master, tag, *index):
    """A 64-bit integer seed for one role/index under ``master``."""
    ss = np.random.SeedSequence(_entropy(master, tag, index))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def derive_rng(master, tag, *index):
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(_entropy(master, tag, index))))
