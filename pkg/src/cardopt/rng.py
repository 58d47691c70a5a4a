"""Deterministic seed derivation.

Every random draw in the package is made from a generator obtained through
``subseed``/``rng_for``, keyed by the master seed plus a path of labels.
Because each unit of work (cluster solve, BF iteration, pool candidate, ...)
gets its own pre-derived stream, results do not depend on execution order,
which is what makes concurrent cluster solves reproducible.
"""

from __future__ import annotations

import zlib

import numpy as np


def _key_part(part: int | str) -> int:
    if isinstance(part, str):
        return zlib.crc32(part.encode("utf-8"))
    return int(part) & 0xFFFFFFFF


def subseed(master: int, *path: int | str) -> np.random.SeedSequence:
    """Derive a child SeedSequence from ``master`` and a label path."""
    return np.random.SeedSequence(master, spawn_key=tuple(_key_part(p) for p in path))


def rng_for(master: int, *path: int | str) -> np.random.Generator:
    """Generator seeded by ``subseed(master, *path)``."""
    return np.random.default_rng(subseed(master, *path))
