import numpy as np
import pytest

from conftest import all_codewords, brute_stopping_sets, patterns
from ldpcbench import fixtures
from ldpcbench.analysis import extend_rpc
from ldpcbench.codes import build_gallager
from ldpcbench.decoders import (ERASED, AwgnFrame, BecFrame, Status, bp_peel_bec,
                                bp_sumproduct_awgn, bpsk, decode_rpc, ml_awgn_batch,
                                ml_awgn_exhaustive, ml_bec, ml_bec_ambiguous_batch,
                                peel_erasures_batch, sigma2_from_ebno, sumproduct_batch)
from ldpcbench.errors import DomainError
from ldpcbench.gf2 import BitMatrix


def random_codeword(code, rng):
    G = code.generator.to_array().astype(int)
    return (rng.integers(0, 2, G.shape[0]) @ G % 2).astype(np.uint8)


# BEC peeling

def test_peel_nothing_erased(hamming):
    out = bp_peel_bec(hamming.H, BecFrame.make(np.zeros(8), []))
    assert out.status is Status.SUCCESS and out.iterations == 0


def test_peel_stops_on_stopping_set(hamming):
    s = [1, 2, 3]
    out = bp_peel_bec(hamming.H, BecFrame.make(np.zeros(8), s))
    assert out.status is Status.FAILURE
    assert out.residual_erasures == tuple(s)
    assert (out.estimate[s] == ERASED).all()


def test_peel_fails_iff_stopping_set_inside(hamming):
    stop = brute_stopping_sets(hamming.H)
    rng = np.random.default_rng(0)
    for mask, erased in patterns(8):
        E = set(np.flatnonzero(erased))
        contains = any(s <= E for s in stop)
        x = random_codeword(hamming, rng)
        out = bp_peel_bec(hamming.H, BecFrame.make(x, E))
        assert out.ok == (not contains)
        if out.ok:
            assert (out.estimate == x).all()


def test_peel_is_confluent(qc):
    rng = np.random.default_rng(1)
    for _ in range(60):
        erased = np.flatnonzero(rng.random(48) < 0.35)
        frame = BecFrame.make(np.zeros(48), erased)
        base = bp_peel_bec(qc.H, frame)
        shuffled = bp_peel_bec(qc.H, frame, order_rng=np.random.default_rng(int(rng.integers(1 << 30))))
        assert base.residual_erasures == shuffled.residual_erasures
        assert base.status is shuffled.status


def test_peel_batch_matches_single(qc):
    rng = np.random.default_rng(2)
    erased = rng.random((200, 48)) < 0.4
    residual = peel_erasures_batch(qc.H, erased)
    for f in range(200):
        out = bp_peel_bec(qc.H, BecFrame.make(np.zeros(48), np.flatnonzero(erased[f])))
        assert tuple(np.flatnonzero(residual[f])) == out.residual_erasures


# BEC ML

def test_ml_codeword_support_is_ambiguous(hamming):
    out = ml_bec(hamming.H, BecFrame.make(np.zeros(8), [4, 5, 6, 7]))
    assert out.status is Status.AMBIGUOUS


def test_ml_single_erasure(hamming):
    x = np.array([1, 1, 1, 1, 0, 0, 0, 0], dtype=np.uint8)
    assert not (hamming.H.to_array() @ x % 2).any()
    out = ml_bec(hamming.H, BecFrame.make(x, [2]))
    assert out.ok and out.estimate[2] == 1


def test_ml_matches_codeword_match_oracle(hamming):
    words = all_codewords(hamming.H)
    rng = np.random.default_rng(3)
    for mask, erased in patterns(8):
        x = words[rng.integers(len(words))].astype(np.uint8)
        keep = ~erased
        matches = [w for w in words if (w[keep] == x[keep]).all()]
        out = ml_bec(hamming.H, BecFrame.make(x, np.flatnonzero(erased)))
        assert out.ok == (len(matches) == 1)
        if out.ok:
            assert (out.estimate == x).all()
        else:
            assert out.status is Status.AMBIGUOUS


def test_peel_success_implies_ml_success(qc):
    rng = np.random.default_rng(4)
    erased = rng.random((400, 48)) < 0.45
    bp_fail = peel_erasures_batch(qc.H, erased).any(axis=1)
    ml_fail = ml_bec_ambiguous_batch(qc.H, erased)
    assert not (ml_fail & ~bp_fail).any()
    assert (bp_fail & ~ml_fail).any()  # the converse is false


def test_ml_batch_matches_single(hamming):
    erased = np.array([e for _, e in patterns(8)])
    flags = ml_bec_ambiguous_batch(hamming.H, erased)
    for f, e in enumerate(erased):
        assert flags[f] == (not ml_bec(hamming.H, BecFrame.make(np.zeros(8), np.flatnonzero(e))).ok)


# RPC

def test_rpc_zero_rows_is_bp(hamming):
    for _, erased in patterns(8):
        frame = BecFrame.make(np.zeros(8), np.flatnonzero(erased))
        a = decode_rpc("BEC", extend_rpc(hamming, 0).H, frame, original=hamming.H)
        b = bp_peel_bec(hamming.H, frame)
        assert a.status is b.status and a.residual_erasures == b.residual_erasures


def test_rpc_failures_subset_of_bp(hamming):
    for t in (1, 4, 11):
        H_ext = extend_rpc(hamming, t).H
        for _, erased in patterns(8):
            frame = BecFrame.make(np.zeros(8), np.flatnonzero(erased))
            if not bp_peel_bec(hamming.H, frame).ok:
                continue
            assert decode_rpc("BEC", H_ext, frame).ok


def test_rpc_full_dual_equals_ml(hamming):
    H_ext = extend_rpc(hamming, 11).H
    for _, erased in patterns(8):
        frame = BecFrame.make(np.zeros(8), np.flatnonzero(erased))
        assert decode_rpc("BEC", H_ext, frame, original=hamming.H).ok == ml_bec(hamming.H, frame).ok


def test_rpc_rejects_foreign_rows(hamming):
    bad = BitMatrix(hamming.H.row_ints + (0b1,), 8)
    with pytest.raises(DomainError):
        decode_rpc("BEC", bad, BecFrame.make(np.zeros(8), []), original=hamming.H)
    with pytest.raises(DomainError):
        decode_rpc("QSC", hamming.H, BecFrame.make(np.zeros(8), []))


# AWGN

def test_sigma2_formula():
    assert sigma2_from_ebno(0.0, 0.5) == pytest.approx(1.0)
    assert sigma2_from_ebno(10.0, 0.5) == pytest.approx(0.1)


def test_noiseless_bp_one_iteration(qc):
    x = random_codeword(qc, np.random.default_rng(5))
    out = bp_sumproduct_awgn(qc.H, AwgnFrame.make(x, 0.7))
    assert out.ok and out.iterations == 1
    assert (out.estimate == x).all()


def brute_posteriors(code, llr):
    words = all_codewords(code.H)
    logp = (bpsk(words) * llr).sum(axis=1) / 2.0
    logp -= logp.max()
    p = np.exp(logp)
    out = np.empty(code.n)
    for j in range(code.n):
        out[j] = np.log(p[words[:, j] == 0].sum() / p[words[:, j] == 1].sum())
    return out


def test_tree_posteriors_exact():
    code = fixtures.tree_code()
    rng = np.random.default_rng(6)
    sigma2 = 0.5
    for _ in range(50):
        x = random_codeword(code, rng)
        frame = AwgnFrame.make(x, sigma2, rng.normal(0, np.sqrt(sigma2), code.n))
        _, _, _, post = sumproduct_batch(code.H, frame.llr[None, :], max_iter=10, early_stop=False)
        assert np.allclose(post[0], brute_posteriors(code, frame.llr), atol=1e-6, rtol=0)


def test_clipping_keeps_messages_finite(qc):
    llr = np.full((3, 48), 1e6)
    llr[1, :5] = -1e6
    llr[2] = np.random.default_rng(7).normal(0, 1e4, 48)
    hard, ok, iters, post = sumproduct_batch(qc.H, llr, max_iter=5, early_stop=False)
    assert np.isfinite(post).all()


def test_bp_deterministic_and_batch_consistent(qc):
    rng = np.random.default_rng(8)
    y = bpsk(np.zeros(48)) + rng.normal(0, 0.9, (20, 48))
    llr = 2 * y / 0.81
    a = sumproduct_batch(qc.H, llr)
    b = sumproduct_batch(qc.H, llr)
    for u, v in zip(a, b):
        assert np.array_equal(u, v)
    for f in range(20):
        single = bp_sumproduct_awgn(qc.H, AwgnFrame(np.zeros(48, np.uint8), bpsk(np.zeros(48)),
                                                    y[f], 0.81))
        assert single.ok == a[1][f] and single.iterations == a[2][f]
        assert np.allclose(single.posterior_llr, a[3][f])


def test_bp_fer_falls_with_snr(qc):
    rng = np.random.default_rng(9)
    frames = 10_000
    fer = {}
    for ebno in (2.0, 8.0):
        s2 = sigma2_from_ebno(ebno, qc.rate)
        y = 1.0 + rng.normal(0, np.sqrt(s2), (frames, 48))
        hard, ok, _, _ = sumproduct_batch(qc.H, 2 * y / s2)
        errs = ~ok | hard.any(axis=1)
        fer[ebno] = errs.mean()
    ci = {e: 1.96 * np.sqrt(max(p * (1 - p), 1 / frames) / frames) for e, p in fer.items()}
    assert fer[8.0] + ci[8.0] < fer[2.0] - ci[2.0]


def test_bp_iteration_cap_validation(qc):
    with pytest.raises(DomainError):
        sumproduct_batch(qc.H, np.zeros((1, 48)), max_iter=0)


def test_ml_awgn_zero_noise(hamming):
    x = np.array([0, 1, 0, 1, 0, 1, 0, 1], dtype=np.uint8)
    out = ml_awgn_exhaustive(hamming, AwgnFrame.make(x, 1.0))
    assert out.ok and (out.estimate == x).all()


def test_ml_awgn_matches_enumeration(hamming):
    words = all_codewords(hamming.H)
    rng = np.random.default_rng(10)
    y = bpsk(words[rng.integers(16, size=300)]) + rng.normal(0, 1.0, (300, 8))
    got = ml_awgn_batch(hamming, y)
    best = words[np.argmax(y @ bpsk(words).T, axis=1)]
    assert (got == best).all()


def test_ml_not_worse_than_bp_on_paired_frames(hamming):
    rng = np.random.default_rng(11)
    for ebno in (0.0, 2.0, 4.0):
        s2 = sigma2_from_ebno(ebno, hamming.rate)
        y = 1.0 + rng.normal(0, np.sqrt(s2), (3000, 8))
        ml_err = ml_awgn_batch(hamming, y).any(axis=1).sum()
        hard, ok, _, _ = sumproduct_batch(hamming.H, 2 * y / s2)
        bp_err = (~ok | hard.any(axis=1)).sum()
        assert ml_err <= bp_err


def test_ml_awgn_dimension_cap():
    assert ml_awgn_batch(fixtures.repetition(3), np.ones((1, 3))).tolist() == [[0, 0, 0]]
    with pytest.raises(DomainError):
        ml_awgn_batch(build_gallager(2, 4, 64, 0), np.ones((1, 64)))


def test_frame_validation():
    with pytest.raises(DomainError):
        AwgnFrame.make(np.zeros(4), 0.0)
