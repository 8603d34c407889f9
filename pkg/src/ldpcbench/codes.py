"""Parity-check matrix constructions: Gallager, RU, quasi-cyclic and binary images."""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import gf2
from .errors import DomainError
from .field import GfField, field_mul_companion
from .gf2 import BitMatrix

# Every random construction draws from numpy's PCG64 bit generator seeded with
# the user seed; permutations come from Generator.permutation (Fisher-Yates).
RNG_ALGORITHM = "numpy.PCG64/Generator.permutation"


def make_rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def derived_seed(seed: int, index: int) -> np.random.SeedSequence:
    """Independent stream for candidate/worker ``index`` of a seeded job."""
    return np.random.SeedSequence([int(seed), int(index)])


@dataclass(frozen=True, eq=False)
class LinearCode:
    """Binary linear code given by a parity-check matrix."""

    H: BitMatrix
    name: str = ""
    meta: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.H.ncols

    @property
    def r(self) -> int:
        return self.H.nrows

    @cached_property
    def rank(self) -> int:
        return gf2.rank(self.H)

    @property
    def k(self) -> int:
        return self.n - self.rank

    @property
    def rate(self) -> float:
        return self.k / self.n

    @cached_property
    def tanner(self) -> tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...]]:
        """(per-check variable lists, per-variable check lists)."""
        checks = tuple(tuple(self.H.row_support(i)) for i in range(self.r))
        var: list[list[int]] = [[] for _ in range(self.n)]
        for i, row in enumerate(checks):
            for j in row:
                var[j].append(i)
        return checks, tuple(tuple(v) for v in var)

    @cached_property
    def generator(self) -> BitMatrix:
        """Rows spanning the code (k x n); zero rows are never returned."""
        return gf2.null_space_basis(self.H)

    @cached_property
    def dual_basis(self) -> BitMatrix:
        return gf2.row_basis(self.H)

    def column_weights(self) -> list[int]:
        return self.H.column_weights()

    def row_weights(self) -> list[int]:
        return self.H.row_weights()

    def degree_profile(self) -> tuple[tuple[int, int], tuple[int, int]]:
        """((min, max) column weight, (min, max) row weight)."""
        cw, rw = self.column_weights(), self.row_weights()
        return (min(cw), max(cw)), (min(rw), max(rw)) if rw else (0, 0)

    def is_codeword(self, x: int) -> bool:
        return self.H.mul_vec(x) == 0

    def with_rows(self, extra: Sequence[int], name: str | None = None) -> LinearCode:
        return LinearCode(self.H.vstack(extra), name=self.name if name is None else name,
                          meta=dict(self.meta))


def build_gallager(J: int, K: int, n: int, rng_seed) -> LinearCode:
    """(J, K)-regular code from J column-permuted copies of a base strip."""
    if K < 1 or n % K:
        raise DomainError(f"K={K} must divide n={n}")
    if J < 1:
        raise DomainError(f"J={J} must be positive")
    rng = make_rng(rng_seed)
    M = n // K
    strip = [list(range(j * K, (j + 1) * K)) for j in range(M)]
    supports = list(strip)
    for _ in range(1, J):
        perm = rng.permutation(n)
        supports.extend([int(perm[c]) for c in row] for row in strip)
    H = BitMatrix.from_supports(supports, n)
    return LinearCode(H, name=f"gallager({J},{K},{n})",
                      meta={"family": "gallager", "J": J, "K": K, "seed": rng_seed,
                            "rng": RNG_ALGORITHM})


def ru_sockets(J: int, K: int, n: int, rng) -> np.ndarray:
    """Permuted socket sequence b = pi(1^J, 2^J, ..., n^J), 0-based column labels."""
    if K < 1 or (J * n) % K:
        raise DomainError(f"K={K} must divide J*n={J * n}")
    rng = rng if isinstance(rng, np.random.Generator) else make_rng(rng)
    a = np.repeat(np.arange(n), J)
    return a[rng.permutation(a.size)]


def ru_is_regular(sockets: np.ndarray, K: int) -> bool:
    chunks = np.sort(sockets.reshape(-1, K), axis=1)
    return not bool((np.diff(chunks, axis=1) == 0).any())


def ru_matrix(sockets: np.ndarray, K: int, n: int) -> BitMatrix:
    """Row i is the set of columns in the i-th length-K chunk of ``sockets``."""
    return BitMatrix.from_supports((set(int(c) for c in chunk) for chunk in sockets.reshape(-1, K)), n)


def build_ru(J: int, K: int, n: int, rng_seed) -> tuple[LinearCode, bool]:
    """Richardson-Urbanke socket construction.

    Row i takes the columns of the i-th length-K chunk of the permuted socket
    sequence. A repeated column inside a chunk sets one entry, so such rows
    (and the affected columns) end up lighter; ``regular`` reports whether
    that happened anywhere.
    """
    b = ru_sockets(J, K, n, rng_seed)
    H = ru_matrix(b, K, n)
    regular = ru_is_regular(b, K)
    code = LinearCode(H, name=f"ru({J},{K},{n})",
                      meta={"family": "ru", "J": J, "K": K, "seed": rng_seed,
                            "regular": regular, "rng": RNG_ALGORITHM})
    return code, regular


ZERO = -1


@dataclass(frozen=True)
class QcPolynomialMatrix:
    """Monomial polynomial parity-check matrix; ``ZERO`` (-1) marks a zero entry."""

    entries: tuple[tuple[int, ...], ...]
    M: int

    def __post_init__(self):
        entries = tuple(tuple(int(w) for w in row) for row in self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries or not entries[0]:
            raise DomainError("empty exponent matrix")
        if len({len(row) for row in entries}) != 1:
            raise DomainError("ragged exponent matrix")
        if any(w < ZERO for row in entries for w in row):
            raise DomainError("exponents must be >= 0 or -1 for a zero entry")
        if self.c <= len(entries):
            raise DomainError("need c > b, i.e. more columns than rows")
        if self.M <= self.mu:
            raise DomainError(f"lifting degree M={self.M} must exceed memory mu={self.mu}")

    @property
    def c(self) -> int:
        return len(self.entries[0])

    @property
    def b(self) -> int:
        return self.c - len(self.entries)

    @property
    def mu(self) -> int:
        return max((w for row in self.entries for w in row if w != ZERO), default=0)

    def nonzero_count(self) -> int:
        return sum(w != ZERO for row in self.entries for w in row)


def base_matrix(Q: QcPolynomialMatrix) -> BitMatrix:
    return BitMatrix.from_supports(
        ([j for j, w in enumerate(row) if w != ZERO] for row in Q.entries), Q.c)


def qc_expand_tailbiting(Q: QcPolynomialMatrix) -> LinearCode:
    """Tailbiting binary matrix: block-row t holds H_w in block-column (t + w) mod M."""
    rows_per_block = len(Q.entries)
    supports = []
    for t in range(Q.M):
        for i in range(rows_per_block):
            supports.append([((t + w) % Q.M) * Q.c + j
                             for j, w in enumerate(Q.entries[i]) if w != ZERO])
    H = BitMatrix.from_supports(supports, Q.M * Q.c)
    return LinearCode(H, name=f"qc-tb(M={Q.M})", meta={"family": "qc", "form": "tailbiting"})


def qc_expand_circulant(Q: QcPolynomialMatrix) -> LinearCode:
    """Each D^w becomes P^w, P the identity cyclically shifted right by one."""
    supports = []
    for i, row in enumerate(Q.entries):
        for u in range(Q.M):
            supports.append([j * Q.M + (u + w) % Q.M for j, w in enumerate(row) if w != ZERO])
    H = BitMatrix.from_supports(supports, Q.M * Q.c)
    return LinearCode(H, name=f"qc(M={Q.M})", meta={"family": "qc", "form": "circulant"})


@dataclass(frozen=True)
class NonbinaryLabeledMatrix:
    """Binary base matrix with a nonzero GF(q) label on every one.

    ``labels`` follows the row-major order of the base matrix support.
    """

    base: BitMatrix
    labels: tuple[int, ...]
    field: GfField

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(int(a) for a in self.labels))
        if len(self.labels) != self.base.count_ones():
            raise DomainError("need exactly one label per nonzero base entry")
        if any(not 1 <= a < self.field.q for a in self.labels):
            raise DomainError(f"labels must lie in 1..{self.field.q - 1}")

    def entries(self):
        """Yield (row, col, label) in row-major order."""
        it = iter(self.labels)
        for i in range(self.base.nrows):
            for j in self.base.row_support(i):
                yield i, j, next(it)


def random_labeling(base: BitMatrix, F: GfField, rng_seed) -> NonbinaryLabeledMatrix:
    rng = make_rng(rng_seed)
    labels = rng.integers(1, F.q, size=base.count_ones())
    return NonbinaryLabeledMatrix(base, tuple(int(a) for a in labels), F)


def binary_image(L: NonbinaryLabeledMatrix) -> LinearCode:
    """rm x nm binary matrix: each label a becomes its multiplication matrix."""
    m = L.field.m
    rows = [0] * (L.base.nrows * m)
    for i, j, a in L.entries():
        T = field_mul_companion(L.field, a)
        for u, trow in enumerate(T.row_ints):
            rows[i * m + u] |= trow << (j * m)
    H = BitMatrix(rows, L.base.ncols * m)
    return LinearCode(H, name=f"nb-image(q={L.field.q})",
                      meta={"family": "nonbinary", "m": m, "poly": L.field.primitive_poly})


def search_codes(factory: Callable[[np.random.SeedSequence], LinearCode], count: int,
                 seed: int, **distance_kw) -> tuple[LinearCode, list[tuple[int, int, int]]]:
    """Best of ``count`` candidates by (d_min descending, A_dmin ascending).

    Candidate i is built from ``derived_seed(seed, i)``, so the outcome does
    not depend on how candidates are split between workers. Returns the
    winner and the (index, d_min, A) table.
    """
    from .analysis import min_distance

    table = []
    best = None
    for i in range(count):
        code = factory(derived_seed(seed, i))
        d, a = min_distance(code, **distance_kw)
        table.append((i, d, a))
        key = (-d, a, i)
        if best is None or key < best[0]:
            best = (key, code)
    return best[1], table
