"""Seed derivation helpers.

All randomness in the package flows through numpy Generators built from
SeedSequence keys, so that any (seed, purpose) pair maps to one reproducible
stream and parallel consumers never share state.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def seed_sequence(seed: int, *key: int) -> np.random.SeedSequence:
    """SeedSequence for a master seed plus a structured derivation key."""
    return np.random.SeedSequence([seed & _MASK64, *key])


def substream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for (seed, *key)."""
    return np.random.default_rng(seed_sequence(seed, *key))


def derive_seed(seed: int, *key: int) -> int:
    """Collapse (seed, *key) to a plain 64-bit integer seed."""
    return int(seed_sequence(seed, *key).generate_state(1, np.uint64)[0])
