"""Exhaustive enumeration of the span of a few packed binary vectors.

The basis is split in two halves; all XOR combinations of each half are
tabulated as uint64 words and every codeword is ``lo ^ hi``. Weights come from
``np.bitwise_count``, so a 2^24 sweep of length-48 words is a few hundred ms.
"""

from __future__ import annotations

import time
from collections.abc import Sequence

import numpy as np

from .errors import BudgetExceeded

MAX_SPAN_DIM = 32
_LO_BITS = 12
_CHUNK = 256


def to_words(vectors: Sequence[int], n: int) -> np.ndarray:
    W = max(1, (n + 63) // 64)
    out = np.zeros((len(vectors), W), dtype=np.uint64)
    mask = (1 << 64) - 1
    for i, v in enumerate(vectors):
        for w in range(W):
            out[i, w] = (v >> (64 * w)) & mask
    return out


def from_words(words: np.ndarray) -> list[int]:
    out = []
    for row in words.tolist():
        v = 0
        for w, x in enumerate(row):
            v |= int(x) << (64 * w)
        out.append(v)
    return out


def span_table(basis: np.ndarray) -> np.ndarray:
    """All 2^len(basis) XOR combinations; entry index bit i selects basis[i]."""
    table = np.zeros((1, basis.shape[1]), dtype=np.uint64)
    for v in basis:
        table = np.concatenate([table, table ^ v])
    return table


def _weights(words: np.ndarray) -> np.ndarray:
    return np.bitwise_count(words).sum(axis=-1, dtype=np.int64)


def _chunks(basis: Sequence[int], n: int, deadline: float | None):
    k = len(basis)
    if k > MAX_SPAN_DIM:
        raise BudgetExceeded(f"span dimension {k} exceeds exhaustive limit {MAX_SPAN_DIM}")
    words = to_words(basis, n)
    lo = span_table(words[:_LO_BITS])
    hi = span_table(words[_LO_BITS:])
    for start in range(0, hi.shape[0], _CHUNK):
        if deadline is not None and time.monotonic() > deadline:
            raise BudgetExceeded("time budget exhausted during codeword enumeration")
        block = hi[start:start + _CHUNK, None, :] ^ lo[None, :, :]
        yield block.reshape(-1, words.shape[1])


def weight_distribution(basis: Sequence[int], n: int, deadline: float | None = None) -> np.ndarray:
    """Counts A_0..A_n over the whole span (A_0 = 1 for independent rows)."""
    counts = np.zeros(n + 1, dtype=np.int64)
    for block in _chunks(basis, n, deadline):
        counts += np.bincount(_weights(block), minlength=n + 1)
    return counts


def words_up_to_weight(basis: Sequence[int], n: int, max_weight: int,
                       deadline: float | None = None) -> list[int]:
    """Nonzero span elements of weight <= max_weight, unordered."""
    found = []
    for block in _chunks(basis, n, deadline):
        w = _weights(block)
        sel = (w > 0) & (w <= max_weight)
        if sel.any():
            found.extend(from_words(block[sel]))
    return found
