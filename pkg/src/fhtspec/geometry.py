"""Interval configurations, band classification and the angles nu_k, alpha."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np


class Region(str, Enum):
    INTERIOR_E = "interior_E"
    INTERIOR_J = "interior_J"
    SIMPLE_ENDPOINT = "simple_endpoint"
    DOUBLE_POINT = "double_point"
    OUTSIDE = "outside"


class ConfigError(ValueError):
    """Raised when a raw configuration violates one or more invariants.

    ``errors`` holds every violation found, as short machine-readable strings.
    """

    def __init__(self, errors: Sequence[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class IntervalConfig:
    """A single interval [a1, a2] split into E and J bands by n double points.

    ``first_band`` names the band that contains (a1, b1). Membership flips at
    every double point.
    """

    a1: float
    a2: float
    doubles: tuple[float, ...]
    first_band: str = "E"

    def __post_init__(self):
        errs = _violations(self.a1, self.a2, self.doubles, self.first_band)
        if errs:
            raise ConfigError(errs)
        object.__setattr__(self, "doubles", tuple(float(b) for b in self.doubles))

    @property
    def n(self) -> int:
        return len(self.doubles)

    @property
    def length(self) -> float:
        return self.a2 - self.a1

    @property
    def b(self) -> np.ndarray:
        return np.asarray(self.doubles, dtype=float)

    @property
    def N(self) -> int:
        return self.n // 2

    @property
    def N_tilde(self) -> int:
        return self.n - self.n // 2

    def breakpoints(self) -> np.ndarray:
        return np.concatenate(([self.a1], self.b, [self.a2]))

    def segment_labels(self) -> list[str]:
        """Labels of the n+1 segments between consecutive breakpoints."""
        other = "J" if self.first_band == "E" else "E"
        return [self.first_band if k % 2 == 0 else other for k in range(self.n + 1)]

    def segments(self, label: str | None = None) -> list[tuple[float, float, str]]:
        pts = self.breakpoints()
        segs = [(float(pts[k]), float(pts[k + 1]), lab) for k, lab in enumerate(self.segment_labels())]
        if label is None:
            return segs
        return [s for s in segs if s[2] == label]

    def relabeled(self) -> "IntervalConfig":
        """Same geometry with the roles of E and J exchanged."""
        return IntervalConfig(self.a1, self.a2, self.doubles, "J" if self.first_band == "E" else "E")

    def e_first(self) -> tuple["IntervalConfig", int]:
        """Return (E-first config, sign) with sign = -1 when a relabeling was needed."""
        if self.first_band == "E":
            return self, 1
        return self.relabeled(), -1

    def to_record(self) -> dict:
        return {"a": [self.a1, self.a2], "doubles": list(self.doubles), "first_band": self.first_band}


@dataclass(frozen=True)
class AngleSet:
    nu: np.ndarray = field(repr=True)
    alpha: float = 0.0


def _violations(a1, a2, doubles, first_band) -> list[str]:
    errs = []
    vals = [a1, a2, *doubles]
    try:
        finite = all(math.isfinite(float(v)) for v in vals)
    except (TypeError, ValueError):
        return ["non-numeric entries"]
    if not finite:
        errs.append("non-finite entries")
        return errs
    if first_band not in ("E", "J"):
        errs.append("first_band must be 'E' or 'J'")
    if not a1 < a2:
        errs.append("endpoints must satisfy a1 < a2")
    if len(doubles) == 0:
        errs.append("n ≥ 1 required")
    d = [float(v) for v in doubles]
    if any(x == y for x, y in zip(d, d[1:])) or len(set(d)) < len(d):
        errs.append("coincident doubles")
    if any(x > y for x, y in zip(d, d[1:])):
        errs.append("unordered doubles")
    if d and a1 < a2 and (min(d) <= a1 or max(d) >= a2):
        errs.append("doubles must lie strictly inside (a1, a2)")
    return errs


def validate_config(raw) -> IntervalConfig:
    """Build an IntervalConfig from a record ``{"a": [a1, a2], "doubles": [...], "first_band": ...}``.

    Raises ConfigError listing every violated invariant.
    """
    errs = []
    if not isinstance(raw, dict):
        raise ConfigError(["config must be a mapping"])
    a = raw.get("a")
    doubles = raw.get("doubles")
    first = raw.get("first_band", "E")
    if not isinstance(a, (list, tuple)) or len(a) != 2:
        errs.append("field 'a' must be a pair [a1, a2]")
    if not isinstance(doubles, (list, tuple)):
        errs.append("field 'doubles' must be a list")
    if errs:
        raise ConfigError(errs)
    try:
        a1, a2 = float(a[0]), float(a[1])
        dd = tuple(float(v) for v in doubles)
    except (TypeError, ValueError):
        raise ConfigError(["non-numeric entries"]) from None
    errs = _violations(a1, a2, dd, first)
    if errs:
        raise ConfigError(errs)
    return IntervalConfig(a1, a2, dd, first)


def classify(config: IntervalConfig, x: float) -> Region:
    x = float(x)
    if x < config.a1 or x > config.a2:
        return Region.OUTSIDE
    if x == config.a1 or x == config.a2:
        return Region.SIMPLE_ENDPOINT
    b = config.b
    if np.any(b == x):
        return Region.DOUBLE_POINT
    k = int(np.searchsorted(b, x))
    lab = config.segment_labels()[k]
    return Region.INTERIOR_E if lab == "E" else Region.INTERIOR_J


def chi(config: IntervalConfig, x) -> np.ndarray:
    """+1 on E, -1 on J, 0 at double points and outside [a1, a2]."""
    x = np.asarray(x, dtype=float)
    k = np.searchsorted(config.b, x)
    sign0 = 1.0 if config.first_band == "E" else -1.0
    out = sign0 * np.where(k % 2 == 0, 1.0, -1.0)
    bad = (x <= config.a1) | (x >= config.a2) | np.isin(x, config.b)
    return np.where(bad, 0.0, out)


def nu_of(config: IntervalConfig, x) -> np.ndarray:
    """nu(x) = arcsin sqrt((a2 - x)/(a2 - a1)), with the argument clamped to [0, 1]."""
    r = (config.a2 - np.asarray(x, dtype=float)) / config.length
    return np.arcsin(np.sqrt(np.clip(r, 0.0, 1.0)))


def angles(config: IntervalConfig) -> AngleSet:
    nu = nu_of(config, config.b)
    signs = (-1.0) ** np.arange(config.n)
    return AngleSet(nu=nu, alpha=float(np.dot(signs, nu)))


def random_config(rng: np.random.Generator, n: int, min_sep: float = 0.02,
                  a: tuple[float, float] = (0.0, 1.0), first_band: str = "E") -> IntervalConfig:
    """Doubles uniform in (a1, a2) with every gap (endpoints included) at least ``min_sep``."""
    a1, a2 = a
    for _ in range(10_000):
        b = np.sort(rng.uniform(a1, a2, n))
        if np.all(np.diff(np.concatenate(([a1], b, [a2]))) >= min_sep * (a2 - a1)):
            return IntervalConfig(a1, a2, tuple(b), first_band)
    raise RuntimeError("could not place doubles with the requested separation")


def symmetric_config(a: float = 1.0) -> IntervalConfig:
    return IntervalConfig(-a, a, (0.0,), "E")


def as_config(obj) -> IntervalConfig:
    if isinstance(obj, IntervalConfig):
        return obj
    return validate_config(obj)


def interior_distance(config: IntervalConfig, x) -> np.ndarray:
    """Distance from x to the nearest endpoint or double point."""
    pts = config.breakpoints()
    x = np.asarray(x, dtype=float)
    return np.min(np.abs(x[..., None] - pts), axis=-1)


def iter_labels(config: IntervalConfig, xs: Iterable[float]) -> list[Region]:
    return [classify(config, x) for x in xs]
