"""Deterministic random-stream derivation.

Every source of randomness in this package is a numpy ``Generator`` backed by
the Philox counter-based bit generator.  Stream keys are derived from a user
seed plus a tuple of integer indices with a splitmix64-style mixer, so
parallel trials can use disjoint, reproducible streams without sharing any
mutable RNG state:

    make_generator(seed)              # root stream
    make_generator(seed, trial)       # per-trial stream
    make_generator(seed, trial, g)    # per-(trial, group) stream
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    """splitmix64 finalizer."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def derive_stream(seed: int, *indices: int) -> int:
    """Derive a 64-bit stream key from a seed and a path of indices.

    Mixing is splitmix64-style: advance by the golden-ratio increment, absorb
    one index per step, and finalize.  Distinct index paths give independent
    keys; the empty path gives a mixed version of the seed itself.
    """
    s = _mix(int(seed) & _MASK64)
    for idx in indices:
        s = (s + _GOLDEN) & _MASK64
        s = _mix(s ^ (int(idx) & _MASK64))
    return s


def make_generator(seed: int, *indices: int) -> np.random.Generator:
    """Return a Philox-backed Generator for the derived stream."""
    return np.random.Generator(np.random.Philox(key=derive_stream(seed, *indices)))
