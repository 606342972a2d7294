"""Deterministic per-module seed derivation.

A single root seed fans out to labeled child seeds through SHA-256, so
adding or removing one metric never perturbs the randomness any other
metric sees.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK = (1 << 63) - 1


def derive_seed(root: int, *labels: str) -> int:
    """Derive a stable 63-bit seed from a root seed and a label path."""
    payload = str(int(root)) + "/" + "/".join(labels)
    digest = hashlib.sha256(payload.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") & _MASK


def derive_rng(root: int, *labels: str) -> np.random.Generator:
    return np.random.default_rng(derive_seed(root, *labels))
