"""Deterministic counter-based random streams.

Every random draw in the package is keyed by (seed, domain tag, block or
trial index) through a Philox counter-based generator, so results are
independent of evaluation order and thread count.  Sample ``i`` of a stream
always lives in block ``i // BLOCK`` at offset ``i % BLOCK``; because BLOCK
is a fixed constant, row ``i`` depends only on the seed and ``i``, never on
the total sample count.
"""

from __future__ import annotations

import numpy as np

# Samples per stream block.  Fixed: changing it changes every stream.
BLOCK = 4096

# Domain tags keep logically distinct draws on disjoint streams.
DESIGN_STREAM = 0
NOISE_STREAM = 1
TRIAL_DESIGN_STREAM = 2
TRIAL_NOISE_STREAM = 3
TRIAL_CHOICE_STREAM = 4
SAMPLING_STREAM = 5
SPOT_CHECK_STREAM = 6

DESIGNS = ("uniform-cube", "gaussian")


def generator(seed: int, *key: int) -> np.random.Generator:
    """Philox generator for the stream identified by ``(seed, *key)``."""
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence([int(seed), *map(int, key)]))
    )


def design_block(kind: str, d: int, seed: int, tag: int, block: int) -> np.ndarray:
    """One (BLOCK, d) matrix of design points for the given stream block."""
    g = generator(seed, tag, block)
    if kind == "uniform-cube":
        return g.uniform(-1.0, 1.0, (BLOCK, d))
    if kind == "gaussian":
        return g.standard_normal((BLOCK, d))
    raise ValueError(f"unknown design {kind!r}; expected one of {DESIGNS}")


def noise_block(seed: int, tag: int, block: int) -> np.ndarray:
    """One length-BLOCK vector of standard normal noise."""
    return generator(seed, tag, block).standard_normal(BLOCK)
