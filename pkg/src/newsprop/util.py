"""Seeding and small shared helpers."""
from __future__ import annotations

import hashlib

import numpy as np


def substream(seed: int, name: str) -> np.random.Generator:
    """Independent generator for a named consumer of a run seed.

    The name is hashed (sha256, platform independent) and folded into the
    seed sequence, so adding a new consumer never shifts the draws seen by
    existing ones.
    """
    tag = int.from_bytes(hashlib.sha256(name.encode("utf-8")).digest()[:8], "big")
    return np.random.default_rng(np.random.SeedSequence([seed, tag]))


def substream_seed(seed: int, name: str) -> int:
    """Derived integer seed for the named substream (for APIs taking ints)."""
    tag = int.from_bytes(hashlib.sha256(name.encode("utf-8")).digest()[:8], "big")
    return int(np.random.SeedSequence([seed, tag]).generate_state(1, np.uint64)[0])
