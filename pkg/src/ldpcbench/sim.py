"""Monte Carlo frame-error-rate sweeps over the BEC and the BPSK-AWGN channel.

Randomness is derived, never shared: grid point ``p`` gets the seed
``SeedSequence([base_seed, p])``, and frames are drawn in fixed blocks of
``BLOCK`` frames, block ``b`` from ``SeedSequence([point_seed, b])``. A frame
is therefore a function of (base_seed, point, frame index) alone, so points
can run in any order and two decoders given the same seed see the same frames.
"""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass

import numpy as np

from .analysis import extend_rpc
from .codes import LinearCode
from .decoders import (MAX_ML_AWGN_K, bpsk, ml_awgn_batch, ml_bec_ambiguous_batch,
                       peel_erasures_batch, sigma2_from_ebno, sumproduct_batch)
from .errors import DomainError
from .gf2 import BitMatrix

BLOCK = 1024
CHANNELS = ("BEC", "AWGN")
DECODERS = ("BP", "ML", "RPC")
CSV_COLUMNS = ("channel", "param", "decoder", "rpc_rows", "frames", "frame_errors", "fer",
               "ci95", "seed")


@dataclass(frozen=True)
class SweepSpec:
    channel: str
    grid: tuple[float, ...]
    decoder: str = "BP"
    rpc_rows: int = 0
    max_frames: int = 10_000_000
    target_frame_errors: int = 100
    base_seed: int = 0
    random_codewords: bool = False
    max_iter: int = 50
    llr_clip: float = 25.0
    rpc_weight_budget: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "channel", self.channel.upper())
        object.__setattr__(self, "decoder", self.decoder.upper())
        object.__setattr__(self, "grid", tuple(float(x) for x in self.grid))
        if self.channel not in CHANNELS:
            raise DomainError(f"channel must be one of {CHANNELS}")
        if self.decoder not in DECODERS:
            raise DomainError(f"decoder must be one of {DECODERS}")
        if not self.grid:
            raise DomainError("empty parameter grid")
        for x in self.grid:
            if not math.isfinite(x):
                raise DomainError(f"grid value {x} is not finite")
            if self.channel == "BEC" and not 0.0 <= x <= 1.0:
                raise DomainError(f"erasure probability {x} outside [0, 1]")
        if self.target_frame_errors < 1 or self.max_frames < 1:
            raise DomainError("target_frame_errors and max_frames must be >= 1")
        if self.rpc_rows < 0:
            raise DomainError("rpc_rows must be nonnegative")


@dataclass(frozen=True)
class SimRecord:
    channel: str
    param: float
    decoder: str
    rpc_rows: int
    frames: int
    frame_errors: int
    fer: float
    ci95: float
    seed: int
    wall_time: float = 0.0

    def csv_row(self) -> list[str]:
        return [self.channel, repr(self.param), self.decoder, str(self.rpc_rows), str(self.frames),
                str(self.frame_errors), f"{self.fer:.9g}", f"{self.ci95:.9g}", str(self.seed)]


def point_seed(base_seed: int, index: int) -> int:
    return int(np.random.SeedSequence([int(base_seed), int(index)]).generate_state(1, np.uint64)[0])


def block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, block]))


class _Runner:
    def __init__(self, code: LinearCode, spec: SweepSpec, H_dec: BitMatrix):
        self.code = code
        self.spec = spec
        self.H_dec = H_dec
        self.G = code.generator.to_array(np.uint8) if spec.random_codewords else None

    def _codewords(self, rng, B):
        n = self.code.n
        if self.G is None or self.G.shape[0] == 0:
            return np.zeros((B, n), dtype=np.uint8)
        info = rng.integers(0, 2, size=(B, self.G.shape[0]), dtype=np.uint8)
        return ((info.astype(np.int64) @ self.G) & 1).astype(np.uint8)

    def block_errors(self, param: float, rng: np.random.Generator) -> np.ndarray:
        """Frame-error flags for one block of BLOCK frames."""
        n, spec = self.code.n, self.spec
        if spec.channel == "BEC":
            erased = rng.random((BLOCK, n)) < param
            self._codewords(rng, BLOCK)  # keeps the stream layout identical in both modes
            # erasure decoders never output a wrong bit; only unresolved frames are errors
            if spec.decoder == "ML":
                return ml_bec_ambiguous_batch(self.code.H, erased)
            return peel_erasures_batch(self.H_dec, erased).any(axis=1)
        noise = rng.standard_normal((BLOCK, n))
        x = self._codewords(rng, BLOCK)
        sigma2 = sigma2_from_ebno(param, self.code.rate)
        y = bpsk(x) + math.sqrt(sigma2) * noise
        if spec.decoder == "ML":
            est = ml_awgn_batch(self.code, y)
            return (est != x).any(axis=1)
        hard, ok, _, _ = sumproduct_batch(self.H_dec, 2.0 * y / sigma2, spec.max_iter,
                                          spec.llr_clip)
        return ~ok | (hard != x).any(axis=1)


def decoding_matrix(code: LinearCode, spec: SweepSpec) -> BitMatrix:
    if spec.decoder == "RPC":
        return extend_rpc(code, spec.rpc_rows, spec.rpc_weight_budget).H
    return code.H


def run_sweep(code: LinearCode, spec: SweepSpec, H_dec: BitMatrix | None = None) -> list[SimRecord]:
    """One SimRecord per grid point.

    Frames are simulated until ``target_frame_errors`` errors or
    ``max_frames`` frames, whichever comes first. For RPC the matrix is
    ``code`` extended by ``rpc_rows`` dual codewords unless ``H_dec`` is given.
    """
    if code.k < 1:
        raise DomainError("code has no information bits")
    if spec.channel == "AWGN" and spec.decoder == "ML" and code.k > MAX_ML_AWGN_K:
        raise DomainError(f"ML over AWGN needs k <= {MAX_ML_AWGN_K}, got k={code.k}")
    if H_dec is None:
        H_dec = decoding_matrix(code, spec)
    runner = _Runner(code, spec, H_dec)
    label_rows = spec.rpc_rows if spec.decoder == "RPC" else 0
    records = []
    for p, param in enumerate(spec.grid):
        t0 = time.perf_counter()
        seed = point_seed(spec.base_seed, p)
        frames = errors = 0
        block = 0
        while frames < spec.max_frames and errors < spec.target_frame_errors:
            flags = runner.block_errors(param, block_rng(seed, block))[: spec.max_frames - frames]
            cum = np.cumsum(flags)
            need = spec.target_frame_errors - errors
            hit = np.searchsorted(cum, need)  # first index where cum == need
            if hit < len(flags):
                frames += int(hit) + 1
                errors += need
            else:
                frames += len(flags)
                errors += int(cum[-1]) if len(cum) else 0
            block += 1
        fer = errors / frames
        ci = 1.96 * math.sqrt(fer * (1 - fer) / frames)
        records.append(SimRecord(spec.channel, param, spec.decoder, label_rows, frames, errors,
                                 fer, ci, seed, time.perf_counter() - t0))
    return records


def records_to_csv(records, header: bool = True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if header:
        w.writerow(CSV_COLUMNS)
    for rec in records:
        w.writerow(rec.csv_row())
    return buf.getvalue()


def plot_data(records) -> str:
    """``curve,x,y`` triples, one curve per decoder label."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["curve", "x", "y"])
    for rec in records:
        curve = f"{rec.decoder}{rec.rpc_rows}" if rec.decoder == "RPC" else rec.decoder
        w.writerow([curve, repr(rec.param), f"{rec.fer:.9g}"])
    return buf.getvalue()
