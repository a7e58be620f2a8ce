"""Counter-based random streams.

All randomness in the package flows through Philox4x64, keyed by the pair
``(seed, stream)``.  Philox is counter-based, so a (seed, stream) pair names
a reproducible stream independent of draw order elsewhere; numpy guarantees
the bit stream across platforms.

Stream ids used by the package:

====================  =======================================================
stream                purpose
====================  =======================================================
0                     family coefficient draws (fields module)
1                     sample-set selection (recovery.sample_uniform)
2                     observation noise (recovery.observe)
3..                   reserved for callers
====================  =======================================================

Trial-level seeds are derived with :func:`split`, which takes one 64-bit draw
from the ``(seed, index)`` stream; the harness uses it as
``split(master_seed, trial_index)``.
"""

from __future__ import annotations

import numpy as np

STREAM_FAMILY = 0
STREAM_SAMPLE = 1
STREAM_NOISE = 2

_MASK64 = (1 << 64) - 1


def make_generator(seed: int, stream: int) -> np.random.Generator:
    """Generator for the Philox stream keyed by (seed, stream)."""
    key = np.array([seed & _MASK64, stream & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def split(seed: int, index: int) -> int:
    """Derive an independent 64-bit child seed for a numbered subtask."""
    g = make_generator(seed, index)
    return int(g.integers(0, 1 << 63, dtype=np.uint64))
