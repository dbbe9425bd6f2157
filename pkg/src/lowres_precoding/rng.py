"""Named, order-independent random substreams.

Every Monte-Carlo block owns one child stream per purpose, derived from the
master seed and the block index only.  Two blocks never share state, so a
block produces the same draws whether it runs first, last, or in another
process.
"""

from __future__ import annotations

import numpy as np

PURPOSES = ("channel", "noise", "data", "csi", "pilots", "schedule")


def as_generator(seed) -> np.random.Generator:
    """Return a Generator for an int / SeedSequence / Generator / None."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def substream(master_seed: int, block: int, purpose: str) -> np.random.Generator:
    """Generator for ``purpose`` in Monte-Carlo block ``block``."""
    try:
        tag = PURPOSES.index(purpose)
    except ValueError:
        raise ValueError(f"unknown RNG purpose {purpose!r}; expected one of {PURPOSES}") from None
    if block < 0:
        raise ValueError("block index must be nonnegative")
    seq = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(block), tag))
    return np.random.Generator(np.random.PCG64(seq))


def block_streams(master_seed: int, block: int) -> dict[str, np.random.Generator]:
    return {p: substream(master_seed, block, p) for p in PURPOSES}


def complex_normal(rng: np.random.Generator, shape, variance: float = 1.0) -> np.ndarray:
    """Circularly-symmetric complex Gaussian samples with the given variance."""
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
