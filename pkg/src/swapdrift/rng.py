"""Deterministic random-stream construction.

All randomness in the package flows through numpy's Philox counter-based
generator (Philox 4x64 with 10 rounds).  A stream is identified by the pair
(seed, stream key) where the stream key packs a small domain tag and two
indices into one 64-bit word.  Streams with distinct keys are independent by
construction, so work can be scheduled across threads in any order without
changing results.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidInputError

# Domain tags keep substreams from ever colliding across pipeline stages.
DOMAIN_SEQUENCE = 0
DOMAIN_MEASURE = 1
DOMAIN_CHAINS = 2
DOMAIN_VALIDATE = 3
DOMAIN_HOM = 4

_MASK64 = (1 << 64) - 1


def stream_key(domain: int, major: int = 0, minor: int = 0) -> int:
    """Pack (domain, major, minor) into the second 64-bit Philox key word."""
    if not 0 <= domain < 256:
        raise InvalidInputError(f"domain must be in [0, 256), got {domain}")
    if not 0 <= major < (1 << 24):
        raise InvalidInputError(f"major stream index out of range: {major}")
    if not 0 <= minor < (1 << 32):
        raise InvalidInputError(f"minor stream index out of range: {minor}")
    return (domain << 56) | (major << 32) | minor


def make_stream(seed: int, domain: int, major: int = 0, minor: int = 0) -> np.random.Generator:
    """Return a Generator on an independent Philox stream for the given indices."""
    if seed < 0:
        raise InvalidInputError("seed must be a non-negative integer")
    key = np.array([seed & _MASK64, stream_key(domain, major, minor)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
