"""Exact ensemble-average weight and stopping-set spectra, and the BEC union bound.

Everything up to the final evaluation at a numeric erasure probability is
done in exact rational arithmetic (``fractions.Fraction``); the binomial
normalisations mix numbers far outside the float range.
"""

from __future__ import annotations

import csv
import io
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .errors import DomainError, ParseError

WEIGHT = "WEIGHT"
STOPPING = "STOPPING"


@dataclass(frozen=True)
class GenPoly:
    """Polynomial in s with exact rational coefficients, lowest degree first."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        c = [Fraction(x) for x in self.coeffs] or [Fraction(0)]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, w: int) -> Fraction:
        return self.coeffs[w] if 0 <= w < len(self.coeffs) else Fraction(0)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: GenPoly) -> GenPoly:
        d = max(len(self), len(other))
        return GenPoly(tuple(self[i] + other[i] for i in range(d)))

    def __mul__(self, other: GenPoly) -> GenPoly:
        return convolve(self, other)


def convolve(a: GenPoly, b: GenPoly, max_deg: int | None = None) -> GenPoly:
    top = a.degree + b.degree if max_deg is None else min(max_deg, a.degree + b.degree)
    out = [Fraction(0)] * (top + 1)
    for i, x in enumerate(a.coeffs):
        if not x or i > top:
            continue
        for j, y in enumerate(b.coeffs[: top - i + 1]):
            out[i + j] += x * y
    return GenPoly(tuple(out))


def _check_q(q: int) -> int:
    if q < 2 or q & (q - 1):
        raise DomainError(f"q={q} is not a power of two")
    return q.bit_length() - 1


def g_poly(K: int, q: int) -> GenPoly:
    """Weight enumerator of the solutions of one q-ary check with K nonzero coefficients.

    ((1 + (q-1)s)^K + (q-1)(1-s)^K) / q
    """
    if K < 2:
        raise DomainError("check degree K must be at least 2")
    _check_q(q)
    return GenPoly(tuple(
        Fraction(math.comb(K, w) * ((q - 1) ** w + (q - 1) * (-1) ** w), q) for w in range(K + 1)))


def g_stop_poly(K: int, q: int) -> GenPoly:
    """Enumerator of length-K q-ary words whose weight is not 1: (1+(q-1)s)^K - K(q-1)s."""
    if K < 2:
        raise DomainError("check degree K must be at least 2")
    _check_q(q)
    return GenPoly(tuple(
        Fraction(0 if w == 1 else math.comb(K, w) * (q - 1) ** w) for w in range(K + 1)))


def phi_poly(m: int) -> GenPoly:
    """Average binary-image weight enumerator of a uniform nonzero GF(2^m) symbol."""
    if m < 1:
        raise DomainError("m must be positive")
    q = 1 << m
    return GenPoly((Fraction(0),) + tuple(Fraction(math.comb(m, w), q - 1) for w in range(1, m + 1)))


def compose(outer: GenPoly, inner: GenPoly, max_deg: int | None = None) -> GenPoly:
    """outer(inner(s)) by Horner's rule; ``inner`` must have a zero constant term."""
    if inner[0] != 0:
        raise DomainError("inner polynomial must vanish at s = 0")
    top = outer.degree * inner.degree if max_deg is None else max_deg
    acc = GenPoly((outer.coeffs[-1],))
    for c in reversed(outer.coeffs[:-1]):
        acc = convolve(acc, inner, top) + GenPoly((c,))
    return acc


def poly_power_coeffs(p: GenPoly, M: int, max_deg: int | None = None) -> GenPoly:
    """Coefficients of p(s)^M up to ``max_deg`` by the power recurrence.

    With c = p^M, differentiating gives p c' = M p' c, i.e.
    c_w = 1/(w p_0) * sum_{j>=1} ((M+1) j - w) p_j c_{w-j},   c_0 = p_0^M,
    which costs O(max_deg * deg p) instead of M convolutions.
    """
    if M < 1:
        raise DomainError("exponent must be at least 1")
    p0 = p[0]
    if p0 == 0:
        raise DomainError("power recurrence needs a nonzero constant term")
    top = M * p.degree if max_deg is None else max_deg
    c = [p0 ** M]
    d = p.degree
    for w in range(1, top + 1):
        acc = Fraction(0)
        for j in range(1, min(w, d) + 1):
            pj = p.coeffs[j]
            if pj:
                acc += ((M + 1) * j - w) * pj * c[w - j]
        c.append(acc / (w * p0))
    return GenPoly(tuple(c))


@dataclass(frozen=True)
class SpectrumTable:
    """S_0..S_{n_bits} for a weight or stopping-set-size spectrum."""

    S: tuple[Fraction, ...]
    kind: str = WEIGHT
    ensemble: dict = field(default_factory=dict, compare=False)

    @property
    def n_bits(self) -> int:
        return len(self.S) - 1

    def first_nonzero(self) -> int | None:
        for w in range(1, len(self.S)):
            if self.S[w]:
                return w
        return None

    def to_csv(self) -> str:
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        out.writerow(["w", "S_w", "S_w_decimal"])
        with mpmath.workdps(30):
            for w, s in enumerate(self.S):
                dec = mpmath.nstr(mpmath.mpf(s.numerator) / s.denominator, 30) if s else "0"
                out.writerow([w, str(s), dec])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, kind: str = WEIGHT) -> SpectrumTable:
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or rows[0][:2] != ["w", "S_w"]:
            raise ParseError("spectrum CSV must start with a 'w,S_w' header")
        vals = []
        for i, row in enumerate(rows[1:]):
            if not row:
                continue
            try:
                w, s = int(row[0]), Fraction(row[1])
            except (ValueError, IndexError, ZeroDivisionError):
                raise ParseError(f"spectrum CSV: bad row {i + 2}") from None
            if w != len(vals) or s < 0:
                raise ParseError(f"spectrum CSV: row {i + 2} out of order or negative")
            vals.append(s)
        if not vals:
            raise ParseError("spectrum CSV has no rows")
        return cls(tuple(vals), kind)


def ensemble_avg_spectrum(J: int, K: int, q: int, n: int, kind: str = WEIGHT) -> SpectrumTable:
    """Average binary spectrum of the Gallager ensemble of (J, K)-regular codes over GF(q).

    One strip of n/K checks has the average binary enumerator
    G(s) = f(phi(s))^(n/K) = sum_w N_w s^w, with f the per-check weight
    (or stopping) enumerator; with J independent strips the average count is
    C(nm, w)^(1-J) N_w^J.
    """
    m = _check_q(q)
    if J < 1:
        raise DomainError("J must be positive")
    if K < 2 or n % K:
        raise DomainError(f"K={K} must be >= 2 and divide n={n}")
    kind = kind.upper()
    if kind == WEIGHT:
        factor = g_poly(K, q)
    elif kind == STOPPING:
        factor = g_stop_poly(K, q)
    else:
        raise DomainError(f"unknown spectrum kind {kind!r}")
    nm = n * m
    per_check = compose(factor, phi_poly(m), max_deg=K * m)
    N = poly_power_coeffs(per_check, n // K, max_deg=nm)
    S = []
    for w in range(nm + 1):
        Nw = N[w]
        S.append(Fraction(0) if Nw == 0 else Fraction(math.comb(nm, w)) ** (1 - J) * Nw ** J)
    return SpectrumTable(tuple(S), kind, {"J": J, "K": K, "q": q, "n": n})


@dataclass(frozen=True)
class BoundPoint:
    eps: float
    bound: float  # clamped to 1
    raw: float


def union_bound_coefficients(S: Sequence, d: int | None = None) -> list[Fraction]:
    """min{C(n,i), sum_{w=d}^{i} S_w C(n-w, i-w)} for i = 0..n (zero below d)."""
    S = [Fraction(x) for x in S]
    n = len(S) - 1
    if any(x < 0 for x in S):
        raise DomainError("spectrum coefficients must be nonnegative")
    if d is None:
        d = next((w for w in range(1, n + 1) if S[w]), n + 1)
    if d < 1:
        raise DomainError("d must be at least 1")
    out = [Fraction(0)] * (n + 1)
    for i in range(d, n + 1):
        inner = sum((S[w] * math.comb(n - w, i - w) for w in range(d, i + 1)), Fraction(0))
        out[i] = min(Fraction(math.comb(n, i)), inner)
    return out


def union_bound_bec(S, eps_grid: Iterable[float], d: int | None = None) -> list[BoundPoint]:
    """Union-type bound on the BEC block error probability for each erasure probability.

    Feed a weight spectrum for ML decoding or a stopping-set spectrum for BP.
    The exact rational coefficients are evaluated against eps^i (1-eps)^(n-i)
    in 50-digit arithmetic, then rounded once to float.
    """
    if isinstance(S, SpectrumTable):
        S = S.S
    coef = union_bound_coefficients(S, d)
    n = len(coef) - 1
    out = []
    with mpmath.workdps(50):
        mc = [mpmath.mpf(c.numerator) / c.denominator for c in coef]
        for eps in eps_grid:
            if not 0.0 <= eps <= 1.0:
                raise DomainError(f"erasure probability {eps} outside [0, 1]")
            e = mpmath.mpf(eps)
            f = 1 - e
            total = mpmath.mpf(0)
            for i in range(n + 1):
                if coef[i]:
                    total += mc[i] * e ** i * f ** (n - i)
            raw = float(total)
            out.append(BoundPoint(float(eps), min(1.0, raw), raw))
    return out


def regular_fraction(J: int, K: int) -> float:
    """Asymptotic share of RU draws that come out exactly (J, K)-regular."""
    return math.exp(-(K - 1) * (J - 1) / 2)
