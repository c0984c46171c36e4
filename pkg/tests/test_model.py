import numpy as np
import pytest
from hypothesis import given, settings

from conftest import configs, interior_probe, random_configs
from fhtspec.branches import SIGMA3
from fhtspec.geometry import IntervalConfig, angles, chi, nu_of
from fhtspec.gfunction import ExclusionZoneError
from fhtspec.model import (ModelSolution, bn_quarter_boundary, coefficients, exp_tilde_g,
                           local_exp_tilde_g, s_function, tilde_Bn, tilde_g_closed,
                           tilde_g_infinity, tilde_g_integral)

CFGS = random_configs(10, n_max=8)
ids = lambda c: "n%d%s" % (c.n, c.first_band)


def _zs(c, rng, m=50, lo=0.05):
    re = rng.uniform(c.a1 - 0.5 * c.length, c.a2 + 0.5 * c.length, m)
    return re + 1j * rng.choice([-1, 1], m) * rng.uniform(lo, 1.0, m) * c.length


def test_s_function_shores(sym):
    c = IntervalConfig(0, 1, (0.3, 0.7))
    x = np.linspace(0.05, 0.95, 19)
    for b in c.b:
        sp, sm = s_function(c, x, b, 1), s_function(c, x, b, -1)
        np.testing.assert_allclose(sp * sm, (b - x) * c.length, atol=1e-14)
    xo = np.array([-2.0, -0.4])
    np.testing.assert_allclose(s_function(c, xo, 0.3, 1), -s_function(c, xo, 0.3, -1), atol=1e-14)
    nu = angles(c).nu
    for k, b in enumerate(c.b):
        np.testing.assert_allclose(s_function(c, x, b, 1), 1j * c.length * np.sin(nu[k] + nu_of(c, x)),
                                   atol=1e-14)
    # double point from above, symmetric case
    s0p, s0m = s_function(sym, 0.0, 0.0, 1), s_function(sym, 0.0, 0.0, -1)
    assert s0p == pytest.approx(2j, abs=1e-15)
    assert abs(s0p * s0m) < 1e-15


def test_tilde_Bn_examples(sym, oracle):
    assert tilde_Bn(sym, 2.0) == pytest.approx(2 ** -0.5, abs=1e-15)
    c2 = IntervalConfig(-1, 1, (-0.5, 0.5))
    assert tilde_Bn(c2, 2.0) == pytest.approx(oracle["tilde_Bn_n2_z2"], abs=1e-15)
    x = np.array([-0.5])
    assert tilde_Bn(sym, x, 1)[0] == pytest.approx(-tilde_Bn(sym, x, -1)[0], abs=1e-15)
    assert tilde_Bn(sym, np.array([0.5]), 1)[0] == pytest.approx(tilde_Bn(sym, np.array([0.5]), -1)[0])


def test_tilde_g_symmetric_infinity(sym):
    assert tilde_g_infinity(sym) == pytest.approx(1j * np.pi / 4)
    assert tilde_g_closed(sym, np.array([1e9 + 1e9j]))[0] == pytest.approx(1j * np.pi / 4, abs=1e-8)


@pytest.mark.parametrize("c", CFGS[:6], ids=ids)
def test_tilde_g_routes(c, rng):
    base = c if c.first_band == "E" else c.relabeled()
    r = rng.uniform(0.6, 1.4, 20) * c.length
    z = 0.5 * (c.a1 + c.a2) + r * np.exp(1j * rng.uniform(0.05, np.pi - 0.05, 20) * rng.choice([-1, 1], 20))
    assert np.max(np.abs(tilde_g_closed(base, z) - tilde_g_integral(base, z))) < 1e-8
    assert tilde_g_closed(base, np.array([1e9j]))[0] == pytest.approx(tilde_g_infinity(base), abs=1e-7)


@pytest.mark.parametrize("c", CFGS[:6], ids=ids)
def test_shore_product(c):
    base = c if c.first_band == "E" else c.relabeled()
    x = interior_probe(base, 60)
    prod = exp_tilde_g(base, x, 1) * exp_tilde_g(base, x, -1)
    np.testing.assert_allclose(prod, chi(base, x), atol=1e-12)


def test_coefficients_symmetric(sym):
    co = coefficients(sym)
    np.testing.assert_allclose([co.k[0], co.m[0], co.n_coef[0]], [0.5, 0.0, -0.5], atol=1e-15)


@given(configs())
@settings(max_examples=100)
def test_coefficients_positive_and_pythagorean(c):
    co = coefficients(c)
    assert np.all(co.k > 0) and np.all(co.khat > 0)
    np.testing.assert_allclose(co.m ** 2 + co.n_coef ** 2, co.k ** 2, rtol=1e-14, atol=1e-15)


@pytest.mark.parametrize("c", CFGS, ids=ids)
def test_psi_invariants(c, rng):
    ms = ModelSolution(c)
    z = _zs(c, rng)
    P = ms.psi(z)
    assert np.max(np.abs(P - ms.psi_exponential(z))) < 1e-10
    assert np.max(np.abs(np.linalg.det(P) - 1)) < 1e-12
    H, B = ms.psi_hat(z), ms.psi_breve(z)
    assert np.max(np.abs(H + 1j * B - P)) < 1e-12
    np.testing.assert_allclose(ms.psi_hat(np.conj(z)), np.conj(H), atol=1e-12)
    np.testing.assert_allclose(ms.psi_breve(np.conj(z)), np.conj(B), atol=1e-12)
    x = interior_probe(c, 80)
    assert np.max(np.abs(ms.psi(x, 1) - ms.psi(x, -1) @ ms.jump(x))) < 1e-9


@pytest.mark.parametrize("c", CFGS, ids=ids)
def test_residue_at_infinity(c):
    ms = ModelSolution(c)
    Z = 1e6 * c.length
    lhs = Z * (ms.S(np.array([Z]))[0] - np.eye(2))
    np.testing.assert_allclose(lhs, ms.residues().sum(0), atol=1e-5)
    far = ms.psi(np.array([1e8j * c.length]))[0]
    np.testing.assert_allclose(far, np.eye(2), atol=1e-6)


def test_residues_structure(sym):
    R = ModelSolution(sym).residues()
    np.testing.assert_allclose(R.sum(0), [[-0.5j, 0.5j], [-0.5j, 0.5j]], atol=1e-15)


@pytest.mark.parametrize("c", CFGS[:5], ids=ids)
def test_local_blowup_bounded(c):
    ms = ModelSolution(c)
    for b in c.b:
        vals = [np.linalg.norm(ms.psi(np.array([b + e * 1j]))[0], 2) * e ** 0.5
                for e in 10.0 ** -np.arange(2, 9)]
        assert max(vals) < 10 * max(vals[0], 1.0)
        assert abs(vals[-1] / vals[-2] - 1) < 1e-2


@pytest.mark.parametrize("c", CFGS[:6], ids=ids)
def test_local_exp_tilde_g(c):
    base = c if c.first_band == "E" else c.relabeled()
    errs = []
    for eps in (1e-3, 1e-5, 1e-7):
        e = []
        for j in range(1, base.n + 1):
            # the expansion holds on the J side of b_j
            x = np.array([base.b[j - 1] + (eps if j % 2 else -eps) * base.length])
            e.append(abs(exp_tilde_g(base, x, 1)[0] / local_exp_tilde_g(base, j, x)[0] - 1))
        errs.append(max(e))
    assert errs[-1] < 1e-5 and errs[-1] < errs[0]


def test_bn_quarter_symmetric(sym, oracle):
    q = bn_quarter_boundary(sym, np.array([0.5, -0.5]))
    np.testing.assert_allclose(q.phase, [np.pi / 4, -np.pi / 4], atol=1e-15)
    np.testing.assert_allclose(q.modulus, oracle["bn_quarter_modulus_half"], rtol=1e-14)
    with pytest.raises(ExclusionZoneError):
        bn_quarter_boundary(sym, np.array([1e-5]))


@pytest.mark.parametrize("c", CFGS[:6], ids=ids)
def test_bn_quarter_phases(c):
    base = c if c.first_band == "E" else c.relabeled()
    x = interior_probe(base)
    q = bn_quarter_boundary(base, x)
    np.testing.assert_allclose(q.phase, -chi(base, x) * np.pi / 4, atol=1e-12)


def test_relabel_conjugation():
    c = IntervalConfig(0, 1, (0.2, 0.45, 0.7), "J")
    z = np.array([0.3 + 0.2j, 1.4 - 0.5j, -0.2 + 0.01j])
    np.testing.assert_allclose(ModelSolution(c).psi(z),
                               SIGMA3 @ ModelSolution(c.relabeled()).psi(z) @ SIGMA3, atol=1e-15)
    x = np.array([0.1, 0.3])
    ms = ModelSolution(c)
    np.testing.assert_allclose(ms.psi(x, 1), ms.psi(x, -1) @ ms.jump(x), atol=1e-12)
