import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import configs
from fhtspec.geometry import (ConfigError, IntervalConfig, Region, angles, chi, classify,
                              validate_config)


def test_symmetric_case_valid(sym):
    c = validate_config({"a": [-1, 1], "doubles": [0], "first_band": "E"})
    assert c == sym and c.n == 1


@pytest.mark.parametrize("raw, message", [
    ({"a": [0, 1], "doubles": [0.5, 0.25], "first_band": "E"}, "unordered doubles"),
    ({"a": [0, 1], "doubles": [], "first_band": "E"}, "n ≥ 1 required"),
    ({"a": [0, 1], "doubles": [0.5, 0.5], "first_band": "E"}, "coincident doubles"),
    ({"a": [1, 0], "doubles": [0.5], "first_band": "E"}, "endpoints must satisfy a1 < a2"),
    ({"a": [0, 1], "doubles": [1.5], "first_band": "E"}, "doubles must lie strictly inside (a1, a2)"),
    ({"a": [0, 1], "doubles": [0.5], "first_band": "X"}, "first_band must be 'E' or 'J'"),
    ({"a": [0, float("nan")], "doubles": [0.5]}, "non-finite entries"),
    ({"a": [0, 1], "doubles": ["x"]}, "non-numeric entries"),
])
def test_rejections(raw, message):
    with pytest.raises(ConfigError) as exc:
        validate_config(raw)
    assert message in exc.value.errors


def test_all_violations_listed():
    with pytest.raises(ConfigError) as exc:
        validate_config({"a": [0, 1], "doubles": [0.5, 0.25, 2.0], "first_band": "Q"})
    assert {"unordered doubles", "first_band must be 'E' or 'J'"} <= set(exc.value.errors)


@pytest.mark.parametrize("x, region", [
    (-0.5, Region.INTERIOR_E), (0.5, Region.INTERIOR_J), (0.0, Region.DOUBLE_POINT),
    (-1.0, Region.SIMPLE_ENDPOINT), (2.0, Region.OUTSIDE),
])
def test_classify_symmetric(sym, x, region):
    assert classify(sym, x) is region


def test_angle_examples(sym):
    a = angles(sym)
    assert a.nu[0] == pytest.approx(math.pi / 4, abs=1e-15)
    assert a.alpha == pytest.approx(math.pi / 4, abs=1e-15)
    assert angles(IntervalConfig(0, 1, (0.75,))).nu[0] == pytest.approx(math.pi / 6, abs=1e-15)
    a2 = angles(IntervalConfig(0, 1, (0.25, 0.75)))
    np.testing.assert_allclose(a2.nu, [math.pi / 3, math.pi / 6], atol=1e-15)
    assert a2.alpha == pytest.approx(math.pi / 6, abs=1e-15)


def test_angles_clamped_near_endpoints():
    c = IntervalConfig(0.0, 1.0, (1e-17, 1 - 1e-16))
    assert np.all(np.isfinite(angles(c).nu))


@given(configs())
def test_angle_invariants(c):
    a = angles(c)
    L, b, nu = c.length, c.b, a.nu
    np.testing.assert_allclose(np.sin(nu) ** 2, (c.a2 - b) / L, atol=1e-14)
    assert np.all(np.diff(nu) < 0)
    assert a.alpha == pytest.approx(np.sum((-1.0) ** np.arange(c.n) * nu), abs=1e-15)
    np.testing.assert_allclose(np.sqrt(b - c.a1), np.sqrt(L) * np.cos(nu), atol=1e-12)
    np.testing.assert_allclose(np.sqrt(c.a2 - b), np.sqrt(L) * np.sin(nu), atol=1e-12)
    for j in range(c.n):
        for l in range(j):
            lhs = b[j] - b[l]
            rhs = L * np.sin(nu[l] + nu[j]) * np.sin(nu[l] - nu[j])
            assert abs(lhs - rhs) <= 1e-12 * L


@given(configs(), st.floats(0.0, 1.0))
def test_classify_alternates(c, x):
    r = classify(c, x)
    if r in (Region.INTERIOR_E, Region.INTERIOR_J):
        k = int(np.searchsorted(c.b, x))
        first = Region.INTERIOR_E if c.first_band == "E" else Region.INTERIOR_J
        other = Region.INTERIOR_J if first is Region.INTERIOR_E else Region.INTERIOR_E
        assert r is (first if k % 2 == 0 else other)
        assert chi(c, x) == (1.0 if r is Region.INTERIOR_E else -1.0)


def test_relabel_roundtrip():
    c = IntervalConfig(0, 1, (0.3, 0.6), "J")
    assert c.relabeled().relabeled() == c
    assert c.e_first() == (c.relabeled(), -1)
    assert [s[2] for s in c.segments()] == ["J", "E", "J"]
