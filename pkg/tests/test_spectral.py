import numpy as np
import pytest

from bfp.exceptions import (
    DimensionMismatchError,
    NonFiniteError,
    NotPSDError,
    RankDeficientError,
)
from bfp.spectral import eigh, nuclear_norm, polar, sym_sqrt, trace_sqrt


def random_psd(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n))
    return a @ a.T


def test_eigh_orthonormal_and_reconstructs():
    a = random_psd(6, 0)
    dec = eigh(a)
    q, w = dec.eigenvectors, dec.eigenvalues
    assert np.all(np.diff(w) >= 0)
    np.testing.assert_allclose(q.T @ q, np.eye(6), atol=1e-12)
    np.testing.assert_allclose((q * w) @ q.T, a, atol=1e-10)


def test_eigh_rejects_nonsquare_and_nonfinite():
    with pytest.raises(DimensionMismatchError):
        eigh(np.ones((2, 3)))
    bad = np.eye(3)
    bad[0, 1] = np.nan
    with pytest.raises(NonFiniteError):
        eigh(bad)


def test_sym_sqrt_squares_back():
    for seed in range(10):
        a = random_psd(5, seed)
        s = sym_sqrt(a)
        np.testing.assert_allclose(s, s.T)
        np.testing.assert_allclose(s @ s, a, atol=1e-9 * np.linalg.norm(a))


def test_sym_sqrt_diagonal_exact():
    s = sym_sqrt(np.diag([4.0, 9.0, 25.0]))
    np.testing.assert_allclose(s, np.diag([2.0, 3.0, 5.0]), atol=1e-14)


def test_sym_sqrt_tolerates_roundoff_negatives():
    # rank-deficient PSD: eigenvalues at roundoff scale below zero are fine
    a = np.outer([1.0, 1.0], [1.0, 1.0])
    s = sym_sqrt(a)
    np.testing.assert_allclose(s @ s, a, atol=1e-12)


def test_sym_sqrt_rejects_indefinite():
    with pytest.raises(NotPSDError):
        sym_sqrt(np.diag([1.0, -1.0]))


def test_trace_sqrt_matches_sym_sqrt_trace():
    a = random_psd(7, 3)
    assert trace_sqrt(a) == pytest.approx(np.trace(sym_sqrt(a)), rel=1e-13)


def test_polar_factors():
    rng = np.random.default_rng(5)
    for seed in range(10):
        a = np.random.default_rng(seed).standard_normal((6, 6))
        u, p = polar(a)
        np.testing.assert_allclose(u.T @ u, np.eye(6), atol=1e-12)
        np.testing.assert_allclose(p, p.T)
        assert np.linalg.eigvalsh(p)[0] > -1e-12 * np.linalg.norm(p)
        np.testing.assert_allclose(u @ p, a, atol=1e-12 * np.linalg.norm(a))


def test_polar_identity_for_spd():
    a = random_psd(4, 8) + np.eye(4)
    u, p = polar(a)
    np.testing.assert_allclose(u, np.eye(4), atol=1e-10)
    np.testing.assert_allclose(p, a, atol=1e-10)


def test_polar_rejects_rank_deficient():
    with pytest.raises(RankDeficientError):
        polar(np.outer([1.0, 2.0], [3.0, 4.0]))


def test_nuclear_norm_frozen_oracle():
    # value frozen from a 50-digit singular value computation
    a = np.array(
        [
            [0.08249430428370294, -0.46441841495421887, 0.05051506297463688, 0.6862308196812632],
            [-1.7567905055789348, 1.6844316011395088, -0.4578428392637714, -0.5964200946055478],
            [-1.046967562282426, 0.9317920227947954, 0.6749804835796053, 1.2444412018021018],
            [0.893087422223549, 0.26300494250388173, 0.3285178485491658, 0.9352436940748697],
        ]
    )
    assert nuclear_norm(a) == pytest.approx(5.983716426163678, abs=1e-12)


def test_nuclear_norm_matches_svd_and_polar_supremum():
    for seed in range(20):
        a = np.random.default_rng(seed).standard_normal((5, 5))
        want = np.linalg.svd(a, compute_uv=False).sum()
        assert nuclear_norm(a) == pytest.approx(want, rel=1e-12)
        # the variational form: sup_U Tr(U^T A) is attained at the polar factor
        u, _ = polar(a)
        assert np.trace(u.T @ a) == pytest.approx(want, rel=1e-12)
        rng = np.random.default_rng(seed + 1000)
        q, _ = np.linalg.qr(rng.standard_normal((5, 5)))
        assert np.trace(q.T @ a) <= want + 1e-10


def test_eigh_reconstruction_bulk():
    for k in range(200):
        n = 2 + (k % 15)
        rng = np.random.default_rng(500 + k)
        a = rng.standard_normal((n, n))
        a = 0.5 * (a + a.T)
        dec = eigh(a)
        back = (dec.eigenvectors * dec.eigenvalues) @ dec.eigenvectors.T
        assert np.abs(back - a).max() <= 1e-10 * max(1.0, np.linalg.norm(a))


def test_nuclear_norm_unitary_invariance():
    for seed in range(25):
        rng = np.random.default_rng(700 + seed)
        a = rng.standard_normal((6, 6))
        base = nuclear_norm(a)
        assert nuclear_norm(a.T) == pytest.approx(base, rel=1e-9)
        o1, _ = np.linalg.qr(rng.standard_normal((6, 6)))
        o2, _ = np.linalg.qr(rng.standard_normal((6, 6)))
        assert nuclear_norm(o1 @ a @ o2) == pytest.approx(base, rel=1e-9)


def test_trace_dominated_by_nuclear_norm():
    # Tr(O^T A) <= ||A||_* for any orthogonal O; 100 random rotations
    a = np.random.default_rng(31).standard_normal((7, 7))
    bound = nuclear_norm(a) + 1e-9
    for seed in range(100):
        o, _ = np.linalg.qr(np.random.default_rng(2000 + seed).standard_normal((7, 7)))
        assert np.trace(o.T @ a) <= bound


def test_trace_sqrt_similarity_invariance():
    # AB and BA share nonzero eigenvalues, so the two congruence orderings
    # of the same product give one trace
    from bfp.verify import instance_generator

    for seed in range(20):
        m, v = instance_generator(5, 300 + seed)
        s = np.sqrt(v)
        first = trace_sqrt(m * np.outer(s, s))
        m_half = sym_sqrt(m)
        second = trace_sqrt(m_half @ np.diag(v) @ m_half)
        assert second == pytest.approx(first, rel=1e-9)
