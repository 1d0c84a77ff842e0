"""
PoisonSnek seed derivation.

Every random draw in the project takes an explicit seed. Child seeds are
derived from a master seed plus integer keys so that runs can be resumed
at any (repetition, trial) without replaying earlier work.
"""

from typing import Optional

import numpy as np


def derive_seed(master: int, *keys: int) -> int:
    """Hash a master seed and integer keys into a 32-bit child seed."""
    entropy = [int(master) & 0xFFFFFFFF] + [int(k) & 0xFFFFFFFF for k in keys]
    return int(np.random.SeedSequence(entropy).generate_state(1)[0])


def make_rng(seed: Optional[int]) -> np.random.Generator:
    """Return a fresh generator; a None seed is rejected."""
    if seed is None:
        raise ValueError("an explicit seed is required")
    return np.random.default_rng(int(seed))
