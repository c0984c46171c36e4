import numpy as np
import pytest
from hypothesis import given, settings

from conftest import configs, interior_probe, random_configs
from fhtspec.branches import BranchPointError
from fhtspec.geometry import IntervalConfig, chi
from fhtspec.gfunction import (BandLayout, ExclusionZoneError, GEvaluator, QuadratureScheme,
                               closed_g, closed_g_im, closed_g_im_prime, radical, solve_omegas)


def test_radical_examples(oracle):
    assert radical(2.0, [-1, 1]) == pytest.approx(oracle["radical_z2"], abs=1e-15)
    assert radical(0.0, [-1, 1], shore=1) == pytest.approx(1j, abs=1e-15)
    assert radical(0.0, [-1, 1], shore=-1) == pytest.approx(-1j, abs=1e-15)
    z = 1e6 * np.exp(0.3j)
    assert abs(radical(z, [-1, 1]) - z) < 1e-5
    with pytest.raises(BranchPointError, match="branch point"):
        radical(1.0, [-1, 1])


def test_radical_genus_two_growth():
    ends = [-3, -2, -1, 1, 2, 3]
    z = 1e4 * np.exp(1.1j)
    assert abs(radical(z, ends) / z ** 3 - 1) < 1e-7
    x = np.array([-2.5, 0.0, 1.5])
    up, dn = radical(x, ends, 1), radical(x, ends, -1)
    # -2.5 and 0 lie in bands, 1.5 in the gap (1, 2)
    np.testing.assert_allclose(up[:2], -dn[:2], atol=1e-14)
    assert up[2] == pytest.approx(dn[2])


def test_symmetric_boundary_values(sym, oracle):
    ev = GEvaluator(sym)
    gp = ev.g_boundary(np.array([0.5]), 1)[0]
    assert gp == pytest.approx(-0.5 + 1j * oracle["g_im_half"], abs=1e-10)
    gm = ev.g_boundary(np.array([0.5]), -1)[0]
    assert gm == pytest.approx(np.conj(gp), abs=1e-15)
    assert ev.g_boundary(np.array([-0.5]), 1)[0].real == pytest.approx(0.5, abs=1e-12)
    d = ev.g_im_prime(np.array([0.5, -0.5]))
    assert d[0] < 0 < d[1]
    assert d[0] == pytest.approx(oracle["g_im_prime_half"], rel=1e-6)


def test_exclusion_zone(sym):
    ev = GEvaluator(sym)
    with pytest.raises(ExclusionZoneError, match="exclusion zone"):
        ev.g_boundary(np.array([1e-4]))
    with pytest.raises(ExclusionZoneError):
        ev.g_im_prime(np.array([1 - 1e-5]))


@pytest.mark.parametrize("c", random_configs(8, n_max=6), ids=lambda c: "n%d%s" % (c.n, c.first_band))
def test_boundary_and_jumps(c):
    ev = GEvaluator(c)
    x = interior_probe(c)
    ch = chi(c, x)
    gp, gm = ev.g_boundary(x, 1), ev.g_boundary(x, -1)
    assert np.max(np.abs(gp.real - 0.5 * ch)) < 1e-8
    assert np.max(np.abs(gp + gm - ch)) < 1e-8
    d = ev.g_im_prime(x)
    assert np.all(np.sign(d) == ch)
    h = 1e-6 * c.length
    fd = (ev.g_im(x + h) - ev.g_im(x - h)) / (2 * h)
    assert np.max(np.abs(fd - d) / np.abs(d)) < 1e-6
    np.testing.assert_allclose(ev.g_im(x), closed_g_im(c, x), atol=1e-10)
    np.testing.assert_allclose(d, closed_g_im_prime(c, x), rtol=1e-8)


@given(configs(n_max=5))
@settings(max_examples=15)
def test_real_part_bounded_off_axis(c):
    rng = np.random.default_rng(c.n)
    z = rng.uniform(-0.5, 1.5, 100) + 1j * rng.choice([-1, 1], 100) * rng.uniform(1e-3, 1.0, 100)
    g = GEvaluator(c).g(z)
    assert np.all(np.abs(g.real) < 0.5)
    np.testing.assert_allclose(g, closed_g(c, z), atol=1e-9)


def test_near_axis_continuity(sym):
    ev = GEvaluator(sym)
    x = np.array([-0.6, -0.2, 0.3, 0.7])
    np.testing.assert_allclose(ev.g(x + 1e-9j), ev.g_boundary(x, 1), atol=1e-7)
    np.testing.assert_allclose(ev.g(x - 1e-9j), ev.g_boundary(x, -1), atol=1e-7)


def test_symmetric_monotone_on_J(sym):
    x = np.linspace(0.01, 0.99, 200)
    gi = GEvaluator(sym).g_im(x)
    assert np.all(np.diff(gi) < 0)
    assert gi[-1] < 0.1 * gi[0]


def test_g_infinity_single_interval(sym):
    assert abs(GEvaluator(sym).g_infinity()) < 1e-12
    c = IntervalConfig(0, 1, (0.3, 0.55, 0.8))
    ev = GEvaluator(c)
    z = np.array([1e5j, -3e5 + 1e5j])
    np.testing.assert_allclose(ev.g(z), ev.g_infinity(), atol=1e-4)


@pytest.mark.parametrize("c", random_configs(3, n_max=4, seed=7), ids=lambda c: "n%d" % c.n)
def test_quadrature_refinement(c):
    x = interior_probe(c, 40)
    a = GEvaluator(c).g_boundary(x)
    b = GEvaluator(c, QuadratureScheme().refined()).g_boundary(x)
    assert np.max(np.abs(a - b)) < 1e-9


def test_omegas_single_interval(sym):
    assert solve_omegas(BandLayout.from_config(sym)).size == 0


def test_omega_gapped_example(oracle):
    lay = BandLayout.from_bands([[-2, -1], [1, 2]], [["E"], ["J"]])
    om, rep = solve_omegas(lay, return_report=True)
    assert om[0] == pytest.approx(oracle["omega_E-2-1_J12"], rel=1e-10)
    assert rep["residual"] < 1e-10
    ev = GEvaluator(lay)
    g_far = ev.g(np.array([1e6 + 1e6j, 1e6j]))
    assert np.all(np.abs(g_far) < 1.0)
    x = np.array([-1.5, 1.5])
    s = ev.g_boundary(x, 1) + ev.g_boundary(x, -1)
    np.testing.assert_allclose(s, [1, -1], atol=1e-8)
    # jump across the gap is i*Omega
    y = np.array([-0.3, 0.4])
    jump = ev.g(y + 1e-10j) - ev.g(y - 1e-10j)
    np.testing.assert_allclose(jump, 1j * om[0], atol=1e-6)


def test_omega_vanishes_for_equal_labels():
    lay = BandLayout.from_bands([[-2, -1], [1, 2]], [["J"], ["J"]])
    assert abs(solve_omegas(lay)[0]) < 1e-12
    ev = GEvaluator(lay)
    np.testing.assert_allclose(ev.g_boundary(np.array([-1.5, 1.5])), -0.5, atol=1e-10)


def test_two_band_genus_one_boundary():
    lay = BandLayout.from_bands([[-2, -1.4, -1], [0.5, 1.2, 2]], [["E", "J"], ["E", "J"]])
    ev = GEvaluator(lay)
    x = np.array([-1.8, -1.2, 0.8, 1.5])
    np.testing.assert_allclose(ev.g_boundary(x).real, [0.5, -0.5, 0.5, -0.5], atol=1e-8)
