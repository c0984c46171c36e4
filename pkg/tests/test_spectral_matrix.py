import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from conftest import configs, random_configs
from fhtspec.geometry import IntervalConfig, angles
from fhtspec.spectral_matrix import (DegenerateAngles, NotPositiveDefinite, build_closed_diag, build_factored, build_sums,
                                     cholesky, cosecant_det, cosecant_matrix, diag_closed, diag_sum,
                                     upper_cholesky)

CFGS = random_configs(200, n_max=8)


def test_symmetric_values(sym, oracle):
    M = build_sums(sym)
    assert M.block1.shape == (1, 1) and M.block2.size == 0
    assert M.block1[0, 0] == pytest.approx(oracle["M11"], abs=1e-15)
    assert build_factored(sym).block1[0, 0] == pytest.approx(0.5, abs=1e-15)
    Dt, D = diag_closed(sym)
    assert Dt[0] == pytest.approx(oracle["tilde_D1"], abs=1e-15) and D.size == 0
    assert cholesky(M).full[0, 0] == pytest.approx(oracle["C11"], abs=1e-15)


def test_n2_cross_construction():
    c = IntervalConfig(0, 1, (0.25, 0.75))
    np.testing.assert_allclose(build_sums(c).full, build_factored(c).full, atol=1e-12)
    np.testing.assert_allclose(build_sums(c).full, build_closed_diag(c).full, atol=1e-12)


def test_block_sizes():
    for n in range(1, 9):
        c = IntervalConfig(0, 1, tuple(np.linspace(0, 1, n + 2)[1:-1]))
        M = build_sums(c)
        assert M.block1.shape[0] == c.N_tilde and M.block2.shape[0] == c.N


def test_three_routes_200_configs():
    worst = 0.0
    for c in CFGS:
        A, B = build_sums(c), build_factored(c)
        worst = max(worst, np.max(np.abs(A.full - B.full)))
        for blk in A.blocks():
            assert np.max(np.abs(blk - blk.T)) < 1e-14
        for ds, dc in zip(diag_sum(c), diag_closed(c)):
            if dc.size:
                assert np.all(dc > 0)
                worst = max(worst, np.max(np.abs(ds - dc)))
    assert worst < 1e-10


def test_positive_definite_200_configs():
    for c in CFGS:
        M = build_sums(c)
        C = cholesky(M)
        for blk, f in zip((M.block1, M.block2), (C.minus, C.plus)):
            if blk.size:
                assert np.all(np.diag(f) > 0)
                assert np.allclose(f, np.triu(f))
                assert np.max(np.abs(f.T @ f - blk)) <= 1e-12 * np.max(np.abs(blk))
                np.testing.assert_allclose(upper_cholesky(f.T @ f), f, atol=1e-12 * np.max(np.abs(f)))


@given(configs())
@settings(max_examples=60)
def test_cosecant_positive_and_totally_positive_minors(c):
    nu = angles(c).nu
    for sub in (nu[0::2], nu[1::2]):
        if not len(sub):
            continue
        Cm = cosecant_matrix(sub)
        assert np.all(Cm > 0)
        for k in range(1, min(len(sub), 6) + 1):
            assert np.linalg.det(Cm[:k, :k]) > 0


def test_cosecant_det_examples(oracle):
    assert cosecant_det([np.pi / 6, np.pi / 3]) == pytest.approx(oracle["cosecant_det_pi6_pi3"], rel=1e-14)
    assert cosecant_det([np.pi / 4]) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(DegenerateAngles):
        cosecant_det([0.3, 0.3])
    with pytest.raises(ValueError):
        cosecant_det([0.3, 2.0])


angle_lists = st.lists(st.floats(0.05, np.pi / 2 - 0.05), min_size=1, max_size=6, unique=True)


@given(angle_lists)
def test_cosecant_det_product_vs_mpmath(theta):
    mp = pytest.importorskip("mpmath")
    theta = np.sort(theta)
    assume(np.min(np.diff(theta), initial=1.0) >= 1e-3)
    with mp.workdps(50):
        ref = mp.det(mp.matrix([[mp.csc(mp.mpf(a) + mp.mpf(b)) for b in theta] for a in theta]))
    assert abs(cosecant_det(theta) / float(ref) - 1) < 1e-12


@given(angle_lists)
def test_cosecant_det_routes(theta):
    # elimination loses digits as angles cluster; compare on separated sets
    theta = np.sort(theta)
    assume(np.min(np.diff(theta), initial=1.0) >= 0.02)
    p, e = cosecant_det(theta), cosecant_det(theta, "elimination")
    assert p > 0 and e > 0
    assert abs(p / e - 1) < 1e-10


def test_cosecant_det_200_configs():
    for c in CFGS:
        nu = angles(c).nu
        for sub in (nu[0::2], nu[1::2]):
            if 0 < len(sub) <= 6:
                assert abs(cosecant_det(sub) / cosecant_det(sub, "elimination") - 1) < 1e-10


def test_cholesky_identity_and_random_spd(rng):
    np.testing.assert_array_equal(upper_cholesky(np.eye(4)), np.eye(4))
    A = rng.normal(size=(6, 6))
    M = A.T @ A + 0.1 * np.eye(6)
    C = upper_cholesky(M)
    assert np.max(np.abs(C.T @ C - M)) < 1e-13 * np.max(np.abs(M))


def test_cholesky_rejects():
    with pytest.raises(NotPositiveDefinite) as exc:
        upper_cholesky(np.array([[1.0, 2.0], [2.0, 1.0]]))
    assert exc.value.pivot_index == 1 and exc.value.pivot_value < 0
    with pytest.raises(ValueError, match="symmetric"):
        upper_cholesky(np.array([[1.0, 0.5], [0.0, 1.0]]))


def test_relabel_invariance():
    c = IntervalConfig(0, 1, (0.2, 0.5, 0.65))
    np.testing.assert_array_equal(build_sums(c).full, build_sums(c.relabeled()).full)
