"""Seedable random number generation.

Every Monte Carlo estimator in this package draws from numpy's PCG64 bit
generator (O'Neill's permuted congruential generator, 128-bit state, 64-bit
output), constructed through :func:`make_rng`. PCG64 is seedable and supports
jump-ahead, so sampling streams are reproducible and can be partitioned into
contiguous sub-budgets for parallel reductions.

Seeds for derived work items (per-tile metric seeds, per-repeat seeds) come
from :func:`derive_seed`, a SHA-256 based mix that is stable across processes
and Python versions, unlike the builtin ``hash``.
"""

from __future__ import annotations

import hashlib

import numpy as np


def make_rng(seed: int) -> np.random.Generator:
    """Return a PCG64-backed generator for the given integer seed."""
    return np.random.Generator(np.random.PCG64(seed))


def derive_seed(*parts) -> int:
    """Mix primitives (ints, floats, strings, dicts, sequences) into a 63-bit seed."""
    text = "\x1f".join(_canonical(p) for p in parts)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def _canonical(part) -> str:
    if isinstance(part, bool):
        return f"b:{int(part)}"
    if isinstance(part, float):
        return f"f:{part!r}"
    if isinstance(part, int):
        return f"i:{part}"
    if isinstance(part, dict):
        inner = ",".join(f"{k}={_canonical(v)}" for k, v in sorted(part.items()))
        return "{" + inner + "}"
    if isinstance(part, (list, tuple)):
        return "[" + ",".join(_canonical(v) for v in part) + "]"
    if isinstance(part, complex):
        return f"c:{part.real!r},{part.imag!r}"
    return f"s:{part}"
