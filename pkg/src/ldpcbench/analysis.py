"""Structural parameters of a parity-check matrix.

Exact searches over column subsets share one depth-first engine: it grows a
set column by column, always branching on a check whose constraint is
currently violated, so only sets that can still satisfy every check are
visited. The same engine finds stopping sets (no check sees exactly one
member) and codeword supports (every check sees an even number).
"""

from __future__ import annotations

import csv
import io
import math
import time
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from . import spans
from .codes import LinearCode
from .errors import BudgetExceeded, CapExceeded, DomainError
from .gf2 import BitMatrix, rank_of_ints, support

DEFAULT_TIME_BUDGET = 60.0
EXHAUSTIVE_DIM = 30


def _deadline(budget: float | None) -> float | None:
    return None if budget is None else time.monotonic() + budget


@dataclass(frozen=True, order=True)
class StoppingSet:
    columns: tuple[int, ...]

    @classmethod
    def from_mask(cls, mask: int) -> StoppingSet:
        return cls(tuple(support(mask)))

    @property
    def mask(self) -> int:
        return sum(1 << j for j in self.columns)

    def __len__(self) -> int:
        return len(self.columns)


def is_stopping_set(H: BitMatrix, cols: Iterable[int]) -> bool:
    s = sum(1 << j for j in set(cols))
    return s != 0 and all((row & s).bit_count() != 1 for row in H.row_ints)


class _SupportSearch:
    def __init__(self, H: BitMatrix, parity: bool, deadline: float | None):
        self.rows = H.row_ints
        self.n = H.ncols
        self.parity = parity
        self.deadline = deadline
        self.var_checks: list[list[int]] = [[] for _ in range(self.n)]
        for i, row in enumerate(self.rows):
            for j in support(row):
                self.var_checks[j].append(i)
        self.counts = [0] * len(self.rows)
        self.viol: set[int] = set()
        self.nodes = 0

    def _bad(self, cnt: int) -> bool:
        return bool(cnt & 1) if self.parity else cnt == 1

    def _add(self, j: int) -> None:
        counts, viol = self.counts, self.viol
        for c in self.var_checks[j]:
            counts[c] += 1
            if self._bad(counts[c]):
                viol.add(c)
            else:
                viol.discard(c)

    def _remove(self, j: int) -> None:
        counts, viol = self.counts, self.viol
        for c in self.var_checks[j]:
            counts[c] -= 1
            if self._bad(counts[c]):
                viol.add(c)
            else:
                viol.discard(c)

    def run(self, max_size: int, supersets: bool, found) -> None:
        """Call ``found(mask)`` once per valid nonempty set of size <= max_size.

        Each set is reached exactly once: its smallest column is the root and
        siblings exclude the candidates tried before them. ``found`` returning
        True aborts the search.
        """
        full = (1 << self.n) - 1
        self.max_size = max_size
        self.supersets = supersets
        self.found = found
        try:
            for v in range(self.n):
                self._add(v)
                stop = self._dfs(1 << v, 1, full & ~((2 << v) - 1))
                self._remove(v)
                if stop:
                    return
        finally:
            self.counts = [0] * len(self.rows)
            self.viol = set()

    def _dfs(self, S: int, size: int, allowed: int) -> bool:
        self.nodes += 1
        if self.deadline is not None and not self.nodes & 1023 and time.monotonic() > self.deadline:
            raise BudgetExceeded("time budget exhausted during subset search")
        if not self.viol:
            if self.found(S):
                return True
            if not self.supersets or size >= self.max_size:
                return False
            cand = allowed
        else:
            if size >= self.max_size:
                return False
            cand = None
            best = None
            rows = self.rows
            for c in self.viol:
                x = rows[c] & allowed
                w = x.bit_count()
                if best is None or w < best:
                    best, cand = w, x
                    if w == 0:
                        return False
        while cand:
            low = cand & -cand
            j = low.bit_length() - 1
            cand ^= low
            allowed &= ~low
            self._add(j)
            stop = self._dfs(S | low, size + 1, allowed)
            self._remove(j)
            if stop:
                return True
        return False


def _smallest_supports(H: BitMatrix, parity: bool, cap: int, deadline) -> tuple[int, list[int]]:
    """Smallest valid size <= cap and all masks of that size, by iterative deepening."""
    search = _SupportSearch(H, parity, deadline)
    for level in range(1, cap + 1):
        hits: list[int] = []
        search.run(level, False, lambda s: hits.append(s) and False)
        if hits:
            return level, hits
    raise CapExceeded(f"nothing of size <= {cap}", lower_bound=cap + 1)


def _all_supports(H: BitMatrix, parity: bool, max_size: int, deadline) -> list[int]:
    hits: list[int] = []
    _SupportSearch(H, parity, deadline).run(max_size, True, lambda s: hits.append(s) and False)
    return hits


def girth(code: LinearCode) -> int | None:
    """Shortest cycle length of the Tanner graph, None when it is a forest."""
    checks, var = code.tanner
    n = code.n
    # node ids: variables 0..n-1, checks n..n+r-1
    adj = [[n + c for c in var[j]] for j in range(n)] + [list(row) for row in checks]
    best = math.inf
    for root in range(n):
        dist = {root: 0}
        parent = {root: -1}
        q = deque([root])
        while q:
            u = q.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    q.append(w)
                elif w != parent[u]:
                    best = min(best, dist[u] + dist[w] + 1)
    return None if best is math.inf else int(best)


def weight_spectrum(code: LinearCode, time_budget: float | None = DEFAULT_TIME_BUDGET) -> list[int]:
    """Exact A_0..A_n by sweeping all 2^k codewords."""
    if code.k > EXHAUSTIVE_DIM:
        raise BudgetExceeded(f"k={code.k} too large for exhaustive enumeration")
    if code.k == 0:
        return [1] + [0] * code.n
    wd = spans.weight_distribution(code.generator.row_ints, code.n, _deadline(time_budget))
    return [int(x) for x in wd]


def _first_nonzero(wd: Sequence[int]) -> tuple[int, int]:
    for w in range(1, len(wd)):
        if wd[w]:
            return w, int(wd[w])
    raise DomainError("no nonzero words")


def min_distance(code: LinearCode, cap: int | None = None,
                 time_budget: float | None = DEFAULT_TIME_BUDGET) -> tuple[int, int]:
    """(d_min, A_dmin).

    Exhaustive over the 2^k codewords when k <= 30. Otherwise the subset
    search looks for codewords of weight <= ``cap`` (default n, so only the
    time budget limits it) and raises CapExceeded with
    ``lower_bound = cap + 1`` if there are none.
    """
    if code.k == 0:
        raise DomainError("code has no nonzero codewords")
    if code.k <= EXHAUSTIVE_DIM:
        return _first_nonzero(weight_spectrum(code, time_budget))
    d, words = _smallest_supports(code.H, True, cap or code.n, _deadline(time_budget))
    return d, len(words)


def dual_min_distance(code: LinearCode, cap: int | None = None,
                      time_budget: float | None = DEFAULT_TIME_BUDGET) -> int:
    """Minimum weight of a nonzero word in the row space of H."""
    if code.rank == 0:
        raise DomainError("parity-check matrix is zero; the dual code is trivial")
    if code.rank <= EXHAUSTIVE_DIM:
        wd = spans.weight_distribution(code.dual_basis.row_ints, code.n, _deadline(time_budget))
        return _first_nonzero(wd)[0]
    # the dual is the code whose parity-check matrix is the generator
    return _smallest_supports(code.generator, True, cap or code.n, _deadline(time_budget))[0]


def stopping_distance(code: LinearCode, cap: int = 12,
                      time_budget: float | None = DEFAULT_TIME_BUDGET) -> tuple[int, StoppingSet]:
    """Size of the smallest nonempty stopping set and the lexicographically first witness."""
    d, hits = _smallest_supports(code.H, False, cap, _deadline(time_budget))
    return d, min(StoppingSet.from_mask(s) for s in hits)


def enumerate_stopping_sets(code: LinearCode, max_size: int,
                            time_budget: float | None = DEFAULT_TIME_BUDGET
                            ) -> dict[int, list[StoppingSet]]:
    """All stopping sets of size 1..max_size, each list sorted."""
    hits = _all_supports(code.H, False, max_size, _deadline(time_budget))
    out: dict[int, list[StoppingSet]] = {i: [] for i in range(1, max_size + 1)}
    for s in hits:
        out[s.bit_count()].append(StoppingSet.from_mask(s))
    for v in out.values():
        v.sort()
    return out


def is_ml_decodable(code: LinearCode, s: Iterable[int]) -> bool:
    """True iff the columns of H indexed by ``s`` are linearly independent."""
    cols = code.H.column_ints()
    s = sorted(set(s))
    return rank_of_ints(cols[j] for j in s) == len(s)


def _ml_decodable_mask(cols: Sequence[int], mask: int) -> bool:
    idx = support(mask)
    return rank_of_ints(cols[j] for j in idx) == len(idx)


@dataclass(frozen=True)
class UEstimate:
    """Sampled count of ML-decodable stopping sets of one size."""

    size: int
    estimate: float
    halfwidth: float
    hits: int
    samples: int


def _random_subsets(n: int, i: int, samples: int, rng: np.random.Generator) -> np.ndarray:
    return np.argsort(rng.random((samples, n)), axis=1)[:, :i]


def _sample_hits(code: LinearCode, i: int, samples: int, rng_seed) -> list[int]:
    rng = np.random.default_rng(rng_seed)
    n = code.n
    cols = code.H.column_ints()
    rows = spans.to_words(code.H.row_ints, n)
    hits = []
    done = 0
    while done < samples:
        m = min(4096, samples - done)
        idx = _random_subsets(n, i, m, rng)
        masks = [sum(1 << int(j) for j in row) for row in idx]
        mw = spans.to_words(masks, n)
        per_row = np.bitwise_count(mw[:, None, :] & rows[None, :, :]).sum(axis=-1)
        stopping = ~(per_row == 1).any(axis=1)
        for t in np.flatnonzero(stopping):
            if _ml_decodable_mask(cols, masks[t]):
                hits.append(masks[t])
        done += m
    return hits


def sample_u(code: LinearCode, i: int, samples: int, rng_seed) -> UEstimate:
    """Estimate u_i = number of ML-decodable stopping sets of size i.

    Draws ``samples`` uniform i-subsets; the estimate is C(n, i) times the hit
    fraction, with a normal-approximation 95% half-width.
    """
    if not 1 <= i <= code.n:
        raise DomainError(f"subset size {i} outside 1..{code.n}")
    if samples < 1:
        raise DomainError("need at least one sample")
    hits = len(_sample_hits(code, i, samples, rng_seed))
    total = math.comb(code.n, i)
    p = hits / samples
    half = 1.96 * total * math.sqrt(p * (1 - p) / samples)
    return UEstimate(i, total * p, half, hits, samples)


def lex_key(v: int, n: int) -> int:
    """Sort key ordering words as bit strings c_0 c_1 ... c_{n-1}."""
    return int(format(v, f"0{n}b")[::-1], 2)


def dual_words_by_weight(code: LinearCode, max_weight: int, limit: int | None = None,
                         time_budget: float | None = DEFAULT_TIME_BUDGET) -> list[int]:
    """Nonzero dual codewords of weight <= max_weight, by (weight, bit-string order).

    With ``limit`` set, the weight threshold is first lowered to the smallest
    one that still yields ``limit`` words, keeping the enumeration small.
    """
    deadline = _deadline(time_budget)
    n = code.n
    if code.rank == 0:
        return []
    if code.rank <= EXHAUSTIVE_DIM:
        basis = code.dual_basis.row_ints
        if limit is not None:
            wd = spans.weight_distribution(basis, n, deadline)
            total = 0
            for w in range(1, max_weight + 1):
                total += int(wd[w])
                if total >= limit:
                    max_weight = w
                    break
        words = spans.words_up_to_weight(basis, n, max_weight, deadline)
    else:
        words = _all_supports(code.generator, True, max_weight, deadline)
    words.sort(key=lambda v: (v.bit_count(), lex_key(v, n)))
    return words


def extend_rpc(code: LinearCode, extra_rows: int, weight_budget: int | None = None,
               time_budget: float | None = DEFAULT_TIME_BUDGET) -> LinearCode:
    """Append ``extra_rows`` dual codewords in increasing weight order.

    Ties go to the earlier word in bit-string order; words already present as
    rows of H are skipped. The row space is unchanged.
    """
    if extra_rows < 0:
        raise DomainError("extra_rows must be nonnegative")
    if extra_rows == 0:
        return code
    budget = code.n if weight_budget is None else weight_budget
    existing = set(code.H.row_ints)
    words = dual_words_by_weight(code, budget, limit=extra_rows + len(existing),
                                 time_budget=time_budget)
    picked = [w for w in words if w not in existing][:extra_rows]
    if len(picked) < extra_rows:
        raise BudgetExceeded(
            f"only {len(picked)} new dual codewords of weight <= {budget}, wanted {extra_rows}")
    ext = code.with_rows(picked, name=f"{code.name}+rpc{extra_rows}" if code.name else "")
    ext.meta["rpc_rows"] = extra_rows
    return ext


def _kill_matrix(cands: Sequence[int], sets: Sequence[int], n: int) -> np.ndarray:
    """kill[a, b]: candidate row a meets set b in exactly one column."""
    cw = spans.to_words(cands, n)
    sw = spans.to_words(sets, n)
    out = np.zeros((len(cands), len(sets)), dtype=bool)
    step = max(1, 4_000_000 // max(1, len(sets) * cw.shape[1]))
    for a in range(0, len(cands), step):
        inter = np.bitwise_count(cw[a:a + step, None, :] & sw[None, :, :]).sum(axis=-1)
        out[a:a + step] = inter == 1
    return out


@dataclass(frozen=True)
class RhoEntry:
    level: int
    rows: int | None
    extra: int | None
    mode: str  # "exact-greedy" or "APPROXIMATE"


def rho_hierarchy(code: LinearCode, levels: Sequence[int], mode: str = "greedy",
                  weight_budget: int | None = None, samples: int = 10_000, rng_seed=0,
                  time_budget: float | None = DEFAULT_TIME_BUDGET) -> dict[int, RhoEntry]:
    """Upper bounds on the l-th stopping redundancy for each requested level.

    ``greedy`` keeps appending the candidate dual codeword that kills the most
    surviving ML-decodable stopping sets (a row kills a set when it meets it
    in exactly one column), handling levels in increasing order so the counts
    are nested. ``estimate`` replaces the census by sampled sizes and reports
    the smallest t with sum_i u_i (1 - p_i)^t < 1, where p_i is the smallest
    sampled fraction of candidates killing a size-i set; those numbers are
    labelled APPROXIMATE.

    Candidates are the dual codewords of weight <= ``weight_budget``
    (default: d_dual + 2).
    """
    levels = sorted(set(levels))
    if not levels or levels[0] < 1:
        raise DomainError("levels must be positive sizes")
    deadline = _deadline(time_budget)
    if weight_budget is None:
        weight_budget = min(code.n, dual_min_distance(code) + 2)
    cands = [w for w in dual_words_by_weight(code, weight_budget, time_budget=time_budget)
             if w not in set(code.H.row_ints)]
    if mode == "greedy":
        return _rho_greedy(code, levels, cands, deadline)
    if mode == "estimate":
        return _rho_estimate(code, levels, cands, samples, rng_seed)
    raise DomainError(f"unknown rho mode {mode!r}")


def _rho_greedy(code, levels, cands, deadline) -> dict[int, RhoEntry]:
    left = None if deadline is None else max(0.0, deadline - time.monotonic())
    census = enumerate_stopping_sets(code, levels[-1], left)
    cols = code.H.column_ints()
    sets = [s.mask for size in sorted(census) for s in census[size] if _ml_decodable_mask(cols, s.mask)]
    sizes = np.array([s.bit_count() for s in sets], dtype=int)
    kill = _kill_matrix(cands, sets, code.n) if sets and cands else np.zeros((len(cands), len(sets)), bool)
    alive = np.ones(len(sets), dtype=bool)
    used = np.zeros(len(cands), dtype=bool)
    extra = 0
    out = {}
    for level in levels:
        while True:
            if deadline is not None and time.monotonic() > deadline:
                raise BudgetExceeded("time budget exhausted in greedy stopping-redundancy search")
            target = alive & (sizes <= level)
            if not target.any():
                break
            scores = kill[:, target].sum(axis=1)
            scores[used] = -1
            best = int(np.argmax(scores)) if len(cands) else -1
            if best < 0 or scores[best] <= 0:
                raise BudgetExceeded(
                    f"candidate rows cannot remove every ML-decodable stopping set of size <= {level}")
            used[best] = True
            alive &= ~kill[best]
            extra += 1
        out[level] = RhoEntry(level, code.r + extra, extra, "exact-greedy")
    return out


def _rho_estimate(code, levels, cands, samples, rng_seed) -> dict[int, RhoEntry]:
    n = code.n
    terms = []  # (size, u_hat, p_worst)
    seeds = np.random.SeedSequence(rng_seed).spawn(levels[-1])
    for i in range(1, min(levels[-1], code.rank) + 1):
        hits = _sample_hits(code, i, samples, seeds[i - 1])
        if not hits:
            continue
        u_hat = math.comb(n, i) * len(hits) / samples
        if cands:
            kill = _kill_matrix(cands, hits, n)
            p = float(kill.sum(axis=0).min()) / len(cands)
        else:
            p = 0.0
        terms.append((i, u_hat, p))
    out = {}
    for level in levels:
        active = [(u, p) for i, u, p in terms if i <= level]
        t = _smallest_t(active)
        out[level] = RhoEntry(level, None if t is None else code.r + t, t, "APPROXIMATE")
    return out


def _smallest_t(terms: Sequence[tuple[float, float]]) -> int | None:
    def total(t: int) -> float:
        acc = 0.0
        for u, p in terms:
            acc += u if t == 0 else (u * (1 - p) ** t if p < 1 else 0.0)
        return acc

    if total(0) < 1:
        return 0
    if any(p <= 0 for _, p in terms):
        return None
    hi = 1
    while total(hi) >= 1:
        hi *= 2
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if total(mid) < 1:
            hi = mid
        else:
            lo = mid
    return hi


CSV_COLUMNS = ("code", "d_min", "A_dmin", "d_stop", "d_dual", "g", "J,K", "rho_levels",
               "rho", "rho_r", "rho_mode", "type")


@dataclass
class AnalysisReport:
    name: str
    n: int
    k: int
    d_min: int | None
    A_dmin: int | None
    d_stop: int | None
    d_dual: int | None
    girth: int | None
    col_weights: tuple[int, int]
    row_weights: tuple[int, int]
    rho: dict[int, RhoEntry] = field(default_factory=dict)
    rho_r: RhoEntry | None = None
    code_type: str = ""
    notes: list[str] = field(default_factory=list)

    @staticmethod
    def _fmt(v) -> str:
        return "NONE" if v is None else str(v)

    @staticmethod
    def _range(lo_hi: tuple[int, int]) -> str:
        lo, hi = lo_hi
        return str(lo) if lo == hi else f"{lo}-{hi}"

    def to_kv(self) -> str:
        """Flat ``key=value`` pairs, Table-1 order, one line."""
        f = self._fmt
        parts = [f"d_min={f(self.d_min)}", f"A={f(self.A_dmin)}", f"d_stop={f(self.d_stop)}",
                 f"d_dual={f(self.d_dual)}", f"g={f(self.girth)}",
                 f"J={self._range(self.col_weights)}", f"K={self._range(self.row_weights)}"]
        for level, e in sorted(self.rho.items()):
            parts.append(f"rho_{level}={f(e.rows)}[{e.mode}]")
        if self.rho_r is not None:
            parts.append(f"rho_r={f(self.rho_r.rows)}[{self.rho_r.mode}]")
        parts += [f"n={self.n}", f"k={self.k}"]
        if self.name:
            parts.append(f"name={self.name}")
        if self.code_type:
            parts.append(f"type={self.code_type}")
        return " ".join(parts)

    def csv_row(self) -> list[str]:
        f = self._fmt
        rho_levels = ";".join(str(lv) for lv in sorted(self.rho))
        rho_vals = ";".join(f(self.rho[lv].rows) for lv in sorted(self.rho))
        modes = {e.mode for e in self.rho.values()} | ({self.rho_r.mode} if self.rho_r else set())
        return [self.name, f(self.d_min), f(self.A_dmin), f(self.d_stop), f(self.d_dual),
                f(self.girth), f"{self._range(self.col_weights)},{self._range(self.row_weights)}",
                rho_levels, rho_vals, f(self.rho_r.rows) if self.rho_r else "",
                ";".join(sorted(modes)), self.code_type]

    def to_csv(self, header: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if header:
            w.writerow(CSV_COLUMNS)
        w.writerow(self.csv_row())
        return buf.getvalue()


def analyze(code: LinearCode, stop_cap: int = 12, distance_cap: int | None = None,
            rho_levels: Sequence[int] = (), rho_mode: str = "greedy",
            rho_weight_budget: int | None = None, rho_r: bool = False, samples: int = 10_000,
            rng_seed=0, code_type: str = "",
            time_budget: float | None = DEFAULT_TIME_BUDGET) -> AnalysisReport:
    """Table-1 style report. Searches that hit their cap are reported as NONE with a note."""
    notes = []

    def attempt(label, fn):
        try:
            return fn()
        except CapExceeded as exc:
            notes.append(f"{label}: {exc} (lower bound {exc.lower_bound})")
            return None

    dm = attempt("d_min", lambda: min_distance(code, cap=distance_cap, time_budget=time_budget))
    d_min, a_min = dm if dm else (None, None)
    ds = attempt("d_stop", lambda: stopping_distance(code, cap=stop_cap, time_budget=time_budget))
    d_dual = attempt("d_dual", lambda: dual_min_distance(code, cap=distance_cap,
                                                          time_budget=time_budget))
    (cmin, cmax), (rmin, rmax) = code.degree_profile()
    report = AnalysisReport(code.name, code.n, code.k, d_min, a_min, ds[0] if ds else None,
                            d_dual, girth(code), (cmin, cmax), (rmin, rmax),
                            code_type=code_type, notes=notes)
    if rho_levels:
        report.rho = rho_hierarchy(code, rho_levels, mode=rho_mode,
                                   weight_budget=rho_weight_budget, samples=samples,
                                   rng_seed=rng_seed, time_budget=time_budget)
    if rho_r:
        report.rho_r = rho_hierarchy(code, [code.rank], mode="estimate",
                                     weight_budget=rho_weight_budget, samples=samples,
                                     rng_seed=rng_seed, time_budget=time_budget)[code.rank]
    return report
