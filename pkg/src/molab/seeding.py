"""Deterministic seed derivation.

Every random draw in the package is made from a numpy Generator seeded
with an integer derived here.  Derivation hashes the full label path with
blake2b, so streams for different roles ("train" vs "test", "alpha" vs
"ic") are independent and stable across platforms and interpreter runs.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1


def derive_seed(*parts: int | str) -> int:
    """Hash a label path into a 64-bit seed.

    Parts may be ints or strings; their order matters.  The same path
    always yields the same seed, and any change to any part changes it.
    """
    h = hashlib.blake2b(digest_size=8)
    for part in parts:
        if isinstance(part, bool) or not isinstance(part, (int, str)):
            raise TypeError(f"seed path parts must be int or str, got {type(part).__name__}")
        token = f"i:{part}" if isinstance(part, int) else f"s:{part}"
        h.update(token.encode("utf-8"))
        h.update(b"\x1f")
    return int.from_bytes(h.digest(), "little") & _MASK64


def rng_from(*parts: int | str) -> np.random.Generator:
    """Generator seeded from a derived seed."""
    return np.random.default_rng(derive_seed(*parts))
