"""Peeling and ML decoding over the BEC; sum-product and exhaustive ML over AWGN.

Single-frame entry points return a :class:`DecodeOutcome`. The ``*_batch``
helpers do the same work on a stack of frames and are what the simulator uses.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass

import numpy as np

from . import gf2, spans
from .codes import LinearCode
from .errors import DomainError
from .gf2 import BitMatrix, rank_and_rref, support

ERASED = 2
MAX_ML_AWGN_K = 26


class Status(enum.Enum):
    SUCCESS = "success"
    FAILURE = "failure"
    AMBIGUOUS = "ambiguous"


@dataclass(frozen=True, eq=False)
class BecFrame:
    transmitted: np.ndarray
    erased: tuple[int, ...]
    received: np.ndarray

    @classmethod
    def make(cls, transmitted, erased) -> BecFrame:
        x = np.asarray(transmitted, dtype=np.uint8) & 1
        erased = tuple(sorted(set(int(j) for j in erased)))
        y = x.astype(np.int8)
        y[list(erased)] = ERASED
        return cls(x, erased, y)


@dataclass(frozen=True, eq=False)
class AwgnFrame:
    transmitted: np.ndarray
    modulated: np.ndarray
    received: np.ndarray
    sigma2: float

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise DomainError("noise variance must be positive")

    @classmethod
    def make(cls, transmitted, sigma2: float, noise=None) -> AwgnFrame:
        x = np.asarray(transmitted, dtype=np.uint8) & 1
        s = bpsk(x)
        y = s if noise is None else s + np.asarray(noise, dtype=float)
        return cls(x, s, y, float(sigma2))

    @property
    def llr(self) -> np.ndarray:
        return 2.0 * self.received / self.sigma2


def bpsk(bits) -> np.ndarray:
    """0 -> +1, 1 -> -1."""
    return 1.0 - 2.0 * np.asarray(bits, dtype=float)


def sigma2_from_ebno(ebno_db: float, rate: float) -> float:
    return 1.0 / (2.0 * rate * 10.0 ** (ebno_db / 10.0))


@dataclass(eq=False)
class DecodeOutcome:
    status: Status
    estimate: np.ndarray
    iterations: int
    residual_erasures: tuple[int, ...] = ()
    posterior_llr: np.ndarray | None = None

    @property
    def ok(self) -> bool:
        return self.status is Status.SUCCESS


def bp_peel_bec(H: BitMatrix, frame: BecFrame, max_rounds: int | None = None,
                order_rng: np.random.Generator | None = None) -> DecodeOutcome:
    """Peeling decoder.

    By default every check with exactly one erased neighbour is solved in
    parallel each round. With ``order_rng`` the checks are instead solved one
    at a time in random order (``iterations`` then counts single solves).
    """
    n = H.ncols
    E = gf2.pack(frame.received == ERASED)
    known_ones = gf2.pack(frame.received == 1)
    rows = H.row_ints
    rounds = 0
    while E and (max_rounds is None or rounds < max_rounds):
        ready = [row for row in rows if (row & E).bit_count() == 1]
        if not ready:
            break
        if order_rng is not None:
            row = ready[int(order_rng.integers(len(ready)))]
            ready = [row]
        solved_E = 0
        solved_ones = 0
        for row in ready:
            j_bit = row & E
            if (row & known_ones).bit_count() & 1:
                solved_ones |= j_bit
            solved_E |= j_bit
        E &= ~solved_E
        known_ones |= solved_ones
        rounds += 1
    est = gf2.unpack(known_ones, n).astype(np.int8)
    residual = tuple(support(E))
    est[list(residual)] = ERASED
    status = Status.FAILURE if residual else Status.SUCCESS
    return DecodeOutcome(status, est, rounds, residual)


def ml_bec(H: BitMatrix, frame: BecFrame) -> DecodeOutcome:
    """Solve H_E x_E = H_K x_K for the erased positions E.

    Unique solution iff the erased columns are independent; otherwise the
    outcome is AMBIGUOUS (a frame error, no guessing).
    """
    erased = list(frame.erased)
    est = frame.received.copy()
    if not erased:
        return DecodeOutcome(Status.SUCCESS, est, 0)
    known_ones = gf2.pack(frame.received == 1)
    e = len(erased)
    rows = []
    for row in H.row_ints:
        v = 0
        for t, j in enumerate(erased):
            if (row >> j) & 1:
                v |= 1 << t
        if (row & known_ones).bit_count() & 1:
            v |= 1 << e
        rows.append(v)
    rank, R, pivots = rank_and_rref(BitMatrix(rows, e + 1))
    if e in pivots:
        return DecodeOutcome(Status.FAILURE, est, 1, tuple(erased))
    if rank < e:
        return DecodeOutcome(Status.AMBIGUOUS, est, 1, tuple(erased))
    for i, p in enumerate(pivots):
        est[erased[p]] = (R.row_ints[i] >> e) & 1
    return DecodeOutcome(Status.SUCCESS, est, 1)


def peel_erasures_batch(H: BitMatrix, erased: np.ndarray) -> np.ndarray:
    """Residual erasure masks after peeling, for a (frames, n) boolean stack."""
    Hf = H.to_array(np.float32)
    E = np.array(erased, dtype=bool, copy=True)
    if Hf.shape[0] == 0:
        return E
    while True:
        counts = E.astype(np.float32) @ Hf.T
        single = counts == 1
        if not single.any():
            return E
        solved = ((single.astype(np.float32) @ Hf) > 0) & E
        if not solved.any():
            return E
        E &= ~solved


def ml_bec_ambiguous_batch(H: BitMatrix, erased: np.ndarray) -> np.ndarray:
    """True where the erased columns of H are linearly dependent."""
    cols = H.column_ints()
    rank = gf2.rank(H)
    out = np.zeros(erased.shape[0], dtype=bool)
    for f, row in enumerate(erased):
        idx = np.flatnonzero(row)
        if len(idx) > rank:
            out[f] = True
        elif len(idx):
            out[f] = gf2.rank_of_ints(cols[j] for j in idx) < len(idx)
    return out


class _TannerEdges:
    """Edge bookkeeping for vectorised message passing."""

    def __init__(self, H: BitMatrix):
        self.n = H.ncols
        self.r = H.nrows
        edge_check, edge_var = [], []
        for i in range(H.nrows):
            for j in H.row_support(i):
                edge_check.append(i)
                edge_var.append(j)
        self.edge_var = np.array(edge_var, dtype=np.intp)
        self.n_edges = len(edge_var)
        dc = max(H.row_weights(), default=0)
        # check-major slots; padding points at a dummy edge holding tanh = 1
        self.slots = np.full((self.r, max(dc, 1)), self.n_edges, dtype=np.intp)
        fill = [0] * self.r
        for e, i in enumerate(edge_check):
            self.slots[i, fill[i]] = e
            fill[i] += 1
        self.var_incidence = np.zeros((self.n_edges, self.n))
        self.var_incidence[np.arange(self.n_edges), self.edge_var] = 1.0
        self.H = H.to_array(np.float64)


@functools.lru_cache(maxsize=32)
def _edges(H: BitMatrix) -> _TannerEdges:
    return _TannerEdges(H)


def sumproduct_batch(H: BitMatrix, llr: np.ndarray, max_iter: int = 50, llr_clip: float = 25.0,
                     early_stop: bool = True):
    """Flooding sum-product on a (frames, n) stack of channel LLRs.

    Returns (hard decisions, success mask, iterations used, posterior LLRs).
    A frame stops as soon as its hard decision satisfies every check unless
    ``early_stop`` is false, in which case all frames run ``max_iter``.
    """
    if max_iter < 1:
        raise DomainError("max_iter must be at least 1")
    llr = np.atleast_2d(np.asarray(llr, dtype=float))
    F = llr.shape[0]
    ed = _edges(H)
    t_max = np.tanh(llr_clip / 2.0)
    hard = np.zeros(llr.shape, dtype=np.uint8)
    post = llr.copy()
    iters = np.zeros(F, dtype=int)
    ok = np.zeros(F, dtype=bool)
    active = np.arange(F)
    v2c = np.clip(llr[:, ed.edge_var], -llr_clip, llr_clip)
    lch = llr
    for it in range(1, max_iter + 1):
        t = np.tanh(v2c / 2.0)
        t = np.concatenate([t, np.ones((t.shape[0], 1))], axis=1)
        slot_t = t[:, ed.slots]  # (F, r, dc)
        ones = np.ones(slot_t.shape[:2] + (1,))
        prefix = np.cumprod(np.concatenate([ones, slot_t[:, :, :-1]], axis=2), axis=2)
        suffix = np.cumprod(np.concatenate([ones, slot_t[:, :, :0:-1]], axis=2), axis=2)[:, :, ::-1]
        excl = np.clip(prefix * suffix, -t_max, t_max)
        c2v = np.empty((t.shape[0], ed.n_edges + 1))
        c2v[:, ed.slots] = 2.0 * np.arctanh(excl)
        c2v = c2v[:, :-1]
        p = lch + c2v @ ed.var_incidence
        v2c = np.clip(p[:, ed.edge_var] - c2v, -llr_clip, llr_clip)
        h = (p < 0).astype(np.uint8)
        valid = ~((h @ ed.H.T) % 2).any(axis=1) if ed.r else np.ones(len(h), bool)
        hard[active] = h
        post[active] = p
        iters[active] = it
        ok[active] = valid
        if early_stop:
            keep = ~valid
            if not keep.any():
                break
            active = active[keep]
            v2c = v2c[keep]
            lch = lch[keep]
    return hard, ok, iters, post


def bp_sumproduct_awgn(H: BitMatrix, frame: AwgnFrame, max_iter: int = 50,
                       llr_clip: float = 25.0, early_stop: bool = True) -> DecodeOutcome:
    hard, ok, iters, post = sumproduct_batch(H, frame.llr[None, :], max_iter, llr_clip, early_stop)
    status = Status.SUCCESS if ok[0] else Status.FAILURE
    return DecodeOutcome(status, hard[0], int(iters[0]), posterior_llr=post[0])


@functools.lru_cache(maxsize=8)
def _codebook(G: BitMatrix):
    k, n = G.shape
    lo_k = k // 2
    words = spans.to_words(G.row_ints, n) if k else np.zeros((0, 1), np.uint64)
    lo = spans.span_table(words[:lo_k])
    hi = spans.span_table(words[lo_k:])

    def bits(table):
        return np.array([gf2.unpack(v, n) for v in spans.from_words(table)], dtype=np.uint8)

    lo_bits, hi_bits = bits(lo), bits(hi)
    return lo_bits, hi_bits, bpsk(lo_bits), bpsk(hi_bits)


def ml_awgn_batch(code: LinearCode, received: np.ndarray) -> np.ndarray:
    """Maximum-correlation codeword for each row of ``received``.

    Codeword = a xor b with a, b from the spans of the two halves of the
    generator; in bipolar form x = x_a * x_b, so all correlations for one
    frame are the matrix product (x_a * y) @ x_b^T.
    """
    if code.k > MAX_ML_AWGN_K:
        raise DomainError(f"exhaustive ML needs k <= {MAX_ML_AWGN_K}, got k={code.k}")
    lo_bits, hi_bits, lo_s, hi_s = _codebook(code.generator)
    received = np.atleast_2d(received)
    out = np.empty(received.shape, dtype=np.uint8)
    for f, y in enumerate(received):
        corr = (lo_s * y) @ hi_s.T
        a, b = np.unravel_index(int(np.argmax(corr)), corr.shape)
        out[f] = lo_bits[a] ^ hi_bits[b]
    return out


def ml_awgn_exhaustive(code: LinearCode, frame: AwgnFrame) -> DecodeOutcome:
    est = ml_awgn_batch(code, frame.received[None, :])[0]
    status = Status.SUCCESS if np.array_equal(est, frame.transmitted) else Status.FAILURE
    return DecodeOutcome(status, est, 1)


def decode_rpc(mode: str, H_ext: BitMatrix, frame, original: BitMatrix | None = None,
               **kw) -> DecodeOutcome:
    """BP on a parity-check matrix extended with redundant dual codewords."""
    if original is not None and not gf2.same_row_space(original, H_ext):
        raise DomainError("extended matrix does not span the original row space")
    mode = mode.upper()
    if mode == "BEC":
        return bp_peel_bec(H_ext, frame, **kw)
    if mode == "AWGN":
        return bp_sumproduct_awgn(H_ext, frame, **kw)
    raise DomainError(f"unknown channel {mode!r}")
