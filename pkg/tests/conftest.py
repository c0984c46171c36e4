import json
import os
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from fhtspec.geometry import IntervalConfig, random_config, symmetric_config

settings.register_profile(
    "default", derandomize=True, deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("thorough", deadline=None, max_examples=400)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

SEED = int(os.environ.get("FHTSPEC_SEED", "0"))
DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def oracle():
    return json.loads((DATA / "oracle_values.json").read_text())


@pytest.fixture
def sym():
    return symmetric_config()


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


def random_configs(count, n_max=8, seed=SEED, both_bands=True, min_sep=0.02):
    """Reproducible list of configs on [0, 1], n cycling 1..n_max."""
    g = np.random.default_rng(seed)
    out = []
    for i in range(count):
        fb = "J" if both_bands and i % 2 else "E"
        out.append(random_config(g, 1 + i % n_max, min_sep, first_band=fb))
    return out


@st.composite
def configs(draw, n_max=8, min_sep=0.02, first_band=None):
    """Doubles on [0, 1] with every gap at least ``min_sep``."""
    n = draw(st.integers(1, n_max))
    w = np.array(draw(st.lists(st.floats(1.0, 10.0), min_size=n + 1, max_size=n + 1)))
    free = 1.0 - min_sep * (n + 1)
    gaps = min_sep + free * w / w.sum()
    b = tuple(float(v) for v in np.cumsum(gaps)[:n])
    fb = first_band or draw(st.sampled_from(["E", "J"]))
    return IntervalConfig(0.0, 1.0, b, fb)


def interior_probe(config, m=100, margin=0.01):
    x = np.linspace(config.a1, config.a2, m + 2)[1:-1]
    d = np.min(np.abs(x[:, None] - config.breakpoints()), axis=1)
    return x[d > margin * config.length]


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
