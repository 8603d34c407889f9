import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import all_codewords, patterns
from ldpcbench import fixtures
from ldpcbench.analysis import is_ml_decodable
from ldpcbench.errors import DomainError, ParseError
from ldpcbench.spectra import (STOPPING, WEIGHT, GenPoly, SpectrumTable, compose, convolve,
                               ensemble_avg_spectrum, g_poly, g_stop_poly, phi_poly,
                               poly_power_coeffs, regular_fraction, union_bound_bec,
                               union_bound_coefficients)

F = Fraction


def P(*c):
    return GenPoly(tuple(F(x) for x in c))


def brute_check_enumerator(K, q, stopping):
    """Count words of GF(q)^K by Hamming weight, satisfying a sum-zero check or weight != 1.

    For a single check with all-nonzero coefficients the solution count only
    depends on the weight, so coefficient 1 everywhere is representative.
    """
    counts = [0] * (K + 1)
    for x in itertools.product(range(q), repeat=K):
        w = sum(v != 0 for v in x)
        if stopping:
            ok = w != 1
        else:
            acc = 0
            for v in x:
                acc ^= v  # addition in GF(2^m) is XOR
            ok = acc == 0
        counts[w] += ok
    while counts[-1] == 0:  # GenPoly drops trailing zeros
        counts.pop()
    return counts


def test_g_hand_values():
    assert g_poly(2, 2).coeffs == (1, 0, 1)
    assert g_poly(3, 2).coeffs == (1, 0, 3)
    assert g_stop_poly(3, 2).coeffs == (1, 0, 3, 1)


@pytest.mark.parametrize("K,q", [(2, 2), (3, 2), (4, 2), (3, 4), (4, 4), (2, 8), (3, 8)])
def test_check_enumerators_match_brute_force(K, q):
    assert list(g_poly(K, q).coeffs) == brute_check_enumerator(K, q, False)
    assert list(g_stop_poly(K, q).coeffs) == brute_check_enumerator(K, q, True)
    assert g_poly(K, q)(1) == q ** (K - 1)
    s = g_stop_poly(K, q)
    assert s[1] == 0 and s[0] == 1


def test_phi():
    assert phi_poly(1).coeffs == (0, 1)
    assert phi_poly(2).coeffs == (0, F(2, 3), F(1, 3))
    for m in range(1, 7):
        assert phi_poly(m)(1) == 1


def test_compose():
    g = P(1, 0, 1)
    assert compose(g, P(0, 1)) == g
    assert compose(g, phi_poly(2)) == P(1, 0, F(4, 9), F(4, 9), F(1, 9))
    for x in (F(0), F(1), F(1, 3)):
        assert compose(g, phi_poly(3))(x) == g(phi_poly(3)(x))
    with pytest.raises(DomainError):
        compose(g, P(1, 1))


def test_convolution_and_power():
    assert convolve(P(1, 0, 1), P(1, 0, 1)) == P(1, 0, 2, 0, 1)
    p = P(1, 3, 0, F(2, 7))
    assert poly_power_coeffs(p, 1) == p
    assert poly_power_coeffs(P(1, 0, 1), 2) == P(1, 0, 2, 0, 1)


polys = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=6), min_size=1,
                 max_size=6).filter(lambda c: c[0] != 0)


@settings(max_examples=150, deadline=None)
@given(polys, st.integers(1, 5))
def test_power_recurrence_equals_convolution(coeffs, M):
    p = GenPoly(tuple(coeffs))
    ref = P(1)
    for _ in range(M):
        ref = convolve(ref, p)
    assert poly_power_coeffs(p, M) == ref


def test_power_truncation():
    p = P(1, 1)
    assert poly_power_coeffs(p, 10, max_deg=3).coeffs == (1, 10, 45, 120)
    with pytest.raises(DomainError):
        poly_power_coeffs(P(0, 1), 3)


def test_hand_spectrum():
    t = ensemble_avg_spectrum(2, 2, 2, 4, WEIGHT)
    assert t.S[2] == F(2, 3)
    assert t.S[0] == 1
    assert t.S == (1, 0, F(2, 3), 0, 1)


def brute_ensemble_average(J, K, n):
    """Exact average spectrum over all J-tuples of strip permutations (strip 1 fixed)."""
    strip = [list(range(j * K, (j + 1) * K)) for j in range(n // K)]
    perms = list(itertools.permutations(range(n)))
    total = [F(0)] * (n + 1)
    count = 0
    for combo in itertools.product(perms, repeat=J - 1):
        rows = list(strip)
        for perm in combo:
            rows += [[perm[c] for c in r] for r in strip]
        for x in range(1 << n):
            if all(sum((x >> c) & 1 for c in r) % 2 == 0 for r in rows):
                total[bin(x).count("1")] += 1
        count += 1
    return [t / count for t in total]


def test_ensemble_average_exact_small():
    # independent strip permutations: the average factorises as in the formula
    assert list(ensemble_avg_spectrum(2, 2, 2, 4).S) == brute_ensemble_average(2, 2, 4)
    assert list(ensemble_avg_spectrum(2, 3, 2, 6).S) == brute_ensemble_average(2, 3, 6)


def test_spectrum_basic_properties():
    for J, K, q, n in [(3, 6, 2, 24), (2, 4, 4, 8), (3, 6, 4, 12)]:
        w = ensemble_avg_spectrum(J, K, q, n, WEIGHT)
        s = ensemble_avg_spectrum(J, K, q, n, STOPPING)
        m = q.bit_length() - 1
        assert w.S[0] == 1 and s.S[0] == 1
        assert w.n_bits == n * m
        assert all(isinstance(v, Fraction) and v >= 0 for v in w.S + s.S)
        assert all(a <= b for a, b in zip(w.S, s.S))
        if q == 2:
            assert s.S[1] == 0
            for i, v in enumerate(w.S):
                assert v / math.comb(n, i) <= 1


def test_spectrum_domain():
    with pytest.raises(DomainError):
        ensemble_avg_spectrum(3, 5, 2, 48)
    with pytest.raises(DomainError):
        ensemble_avg_spectrum(3, 6, 3, 48)
    with pytest.raises(DomainError):
        ensemble_avg_spectrum(3, 6, 2, 48, "OTHER")


def test_spectrum_csv_round_trip():
    t = ensemble_avg_spectrum(3, 6, 2, 24, STOPPING)
    text = t.to_csv()
    assert text.splitlines()[0] == "w,S_w,S_w_decimal"
    assert SpectrumTable.from_csv(text, STOPPING).S == t.S
    with pytest.raises(ParseError):
        SpectrumTable.from_csv("a,b\n1,2\n")
    with pytest.raises(ParseError):
        SpectrumTable.from_csv("w,S_w\n0,1\n2,1\n")


def exact_ml_fer(code, eps):
    return sum(eps ** e.sum() * (1 - eps) ** (code.n - e.sum())
               for _, e in patterns(code.n)
               if e.any() and not is_ml_decodable(code, list(e.nonzero()[0])))


def test_bound_zero_at_eps_zero():
    assert union_bound_bec([1, 0, 0, 3, 2], [0.0])[0].bound == 0.0


def test_repetition_bound_exact():
    n = 8
    S = [0] * n + [1]
    for eps in (0.05, 0.3, 0.5, 0.95):
        pt = union_bound_bec(S, [eps])[0]
        assert pt.raw == eps ** n
        assert pt.raw == exact_ml_fer(fixtures.repetition(n), eps) or \
            abs(pt.raw - exact_ml_fer(fixtures.repetition(n), eps)) < 1e-15


def test_hamming_bound_dominates_exact(hamming):
    words = all_codewords(hamming.H)
    S = [int((words.sum(axis=1) == w).sum()) for w in range(9)]
    S[0] = 0
    grid = [round(0.1 * i, 2) for i in range(1, 10)]
    for pt in union_bound_bec(S, grid):
        assert pt.bound >= exact_ml_fer(hamming, pt.eps) - 1e-12


def test_bound_monotone_and_clamped():
    t = ensemble_avg_spectrum(3, 6, 2, 48, STOPPING)
    grid = [i / 40 for i in range(41)]
    pts = union_bound_bec(t, grid)
    bounds = [p.bound for p in pts]
    assert all(a <= b + 1e-15 for a, b in zip(bounds, bounds[1:]))
    assert all(p.bound == min(1.0, p.raw) for p in pts)
    assert max(p.raw for p in pts) >= 1.0
    with pytest.raises(DomainError):
        union_bound_bec(t, [1.5])


def test_union_coefficients_min():
    coef = union_bound_coefficients([0, 0, 5, 0], d=2)
    assert coef == [0, 0, min(3, 5), min(1, 5)]


def test_regular_fraction():
    assert regular_fraction(1, 6) == 1.0
    assert regular_fraction(3, 6) == pytest.approx(6.7379e-3, rel=1e-4)


def test_random_polys_power_many():
    rnd = random.Random(5)
    for _ in range(30):
        p = GenPoly(tuple(F(rnd.randint(-4, 4), rnd.randint(1, 4)) for _ in range(4)) or (1,))
        if p[0] == 0:
            continue
        ref = P(1)
        for _ in range(4):
            ref = ref * p
        assert poly_power_coeffs(p, 4) == ref
