"""Seeded random streams keyed by stable labels.

A run has one root seed; each sub-task draws from a child stream derived
from its label path, never from execution order, so parallel or reordered
work reproduces bit for bit.
"""
import zlib

import numpy as np


def _label_key(label):
    if isinstance(label, (int, np.integer)):
        return int(label) & 0xFFFFFFFF
    return zlib.crc32(str(label).encode("utf-8"))


def rng_for(seed, *labels):
    """Generator for ``seed`` split along ``labels``."""
    ss = np.random.SeedSequence(int(seed) & (2**64 - 1), spawn_key=tuple(_label_key(x) for x in labels))
    return np.random.Generator(np.random.PCG64(ss))
