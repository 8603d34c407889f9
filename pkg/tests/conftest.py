"""Shared brute-force oracles. They deliberately avoid the package internals."""

import itertools

import numpy as np
import pytest

from ldpcbench import fixtures


def naive_rank(a) -> int:
    """Plain Gaussian elimination over GF(2) on a dense 0/1 array."""
    a = np.array(a, dtype=np.uint8) % 2
    r = 0
    rows, cols = a.shape
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i, c]), None)
        if piv is None:
            continue
        a[[r, piv]] = a[[piv, r]]
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] ^= a[r]
        r += 1
    return r


def all_codewords(H) -> np.ndarray:
    """Every x in {0,1}^n with H x = 0, by enumeration."""
    Ha = np.asarray(H.to_array(), dtype=np.int64)
    n = Ha.shape[1]
    X = np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.int64)
    ok = ~((X @ Ha.T) % 2).any(axis=1)
    return X[ok]


def brute_stopping_sets(H, max_size=None):
    """All nonempty column subsets without a weight-1 row in the submatrix."""
    Ha = np.asarray(H.to_array(), dtype=np.int64)
    n = Ha.shape[1]
    top = n if max_size is None else max_size
    out = set()
    for size in range(1, top + 1):
        for s in itertools.combinations(range(n), size):
            if not (Ha[:, list(s)].sum(axis=1) == 1).any():
                out.add(frozenset(s))
    return out


def patterns(n):
    for mask in range(1 << n):
        yield mask, np.array([(mask >> j) & 1 for j in range(n)], dtype=bool)


@pytest.fixture(scope="session")
def hamming():
    return fixtures.extended_hamming8()


@pytest.fixture(scope="session")
def xqr():
    return fixtures.xqr48()


@pytest.fixture(scope="session")
def qc():
    return fixtures.qc48()
