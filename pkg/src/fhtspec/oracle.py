"""Brute-force checks: a Nystrom discretization of the operator and direct
quadrature of its action on the asymptotic kernels.

The operator acts on L^2(J u E) with the symmetric kernel
K(x, y) = (chi_J(x) chi_E(y) - chi_J(y) chi_E(x)) / (pi (x - y)).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss

from .geometry import IntervalConfig
from .kernels import KernelSet, kappa_of


# -- Nystrom discretization ----------------------------------------------------

def _segment_breaks(lo, hi, grade_lo, grade_hi, delta_h, base_panels=4):
    """Panel edges on [lo, hi]: geometric (ratio 1/2) toward graded ends, stopping delta_h short of them."""
    L = hi - lo
    mid = 0.5 * (lo + hi)
    edges = set(np.linspace(lo + (delta_h if grade_lo else 0.0), hi - (delta_h if grade_hi else 0.0),
                            base_panels + 1))
    for graded, end, sgn in ((grade_lo, lo, 1.0), (grade_hi, hi, -1.0)):
        if not graded:
            continue
        d = delta_h
        while d < L / (2 * base_panels):
            edges.add(end + sgn * d)
            d *= 2.0
    e = np.array(sorted(edges))
    lo_cut = lo + delta_h if grade_lo else lo
    hi_cut = hi - delta_h if grade_hi else hi
    return e[(e >= lo_cut - 1e-15 * L) & (e <= hi_cut + 1e-15 * L)], mid


def _panel_nodes(edges, count):
    """Distribute exactly ``count`` Gauss-Legendre nodes over the panels (orders differ by at most one)."""
    npan = len(edges) - 1
    if count < 2 * npan:
        raise ValueError("too few nodes (%d) for %d panels" % (count, npan))
    q, r = divmod(count, npan)
    X, W = [], []
    # extra nodes go to the widest panels
    widths = np.diff(edges)
    extra = set(np.argsort(-widths, kind="stable")[:r])
    for i, (a, b) in enumerate(zip(edges[:-1], edges[1:])):
        xg, wg = leggauss(q + (1 if i in extra else 0))
        X.append(0.5 * (b - a) * xg + 0.5 * (a + b))
        W.append(0.5 * (b - a) * wg)
    return np.concatenate(X), np.concatenate(W)


@dataclass(frozen=True)
class DiscreteOperator:
    config: IntervalConfig
    x: np.ndarray          # all nodes, J nodes first
    w: np.ndarray
    labels: np.ndarray     # "J" / "E" per node
    block: np.ndarray      # sqrt(w_J) K(x_J, y_E) sqrt(w_E)
    delta_h: float

    @property
    def matrix(self) -> np.ndarray:
        nj = int(np.sum(self.labels == "J"))
        m = len(self.x)
        K = np.zeros((m, m))
        K[:nj, nj:] = self.block
        K[nj:, :nj] = self.block.T
        return K

    def nodes(self, label: str):
        sel = self.labels == label
        return self.x[sel], self.w[sel]


def band_nodes(config: IntervalConfig, label: str, count: int, delta_h: float):
    segs = config.segments(label)
    dbl = set(config.doubles)
    edges = [_segment_breaks(lo, hi, lo in dbl, hi in dbl, delta_h)[0] for lo, hi, _ in segs]
    floor_ = np.array([2 * (len(e) - 1) for e in edges])
    if count < floor_.sum():
        raise ValueError("need at least %d nodes on band %s, got %d" % (floor_.sum(), label, count))
    lengths = np.array([s[1] - s[0] for s in segs])
    share = floor_ + np.floor((count - floor_.sum()) * lengths / lengths.sum()).astype(int)
    share[np.argmax(lengths)] += count - share.sum()
    X, W = [], []
    for e, m in zip(edges, share):
        x, w = _panel_nodes(e, int(m))
        X.append(x)
        W.append(w)
    return np.concatenate(X), np.concatenate(W)


def build_discrete(config: IntervalConfig, nodes_per_band: int = 256, delta_h: float | None = None) -> DiscreteOperator:
    """Nystrom matrix on graded Gauss-Legendre panels, symmetrized with sqrt(w_i w_j)."""
    if nodes_per_band < 16:
        raise ValueError("nodes_per_band must be at least 16")
    if delta_h is None:
        delta_h = 1e-4 * config.length
    xj, wj = band_nodes(config, "J", nodes_per_band, delta_h)
    xe, we = band_nodes(config, "E", nodes_per_band, delta_h)
    if np.min(np.abs(np.concatenate([xj, xe])[:, None] - config.b)) < delta_h * (1 - 1e-9):
        raise ValueError("node inside the exclusion radius of a double point")
    block = np.sqrt(wj)[:, None] * np.sqrt(we)[None, :] / (np.pi * (xj[:, None] - xe[None, :]))
    labels = np.array(["J"] * len(xj) + ["E"] * len(xe))
    return DiscreteOperator(config, np.concatenate([xj, xe]), np.concatenate([wj, we]), labels, block, delta_h)


@dataclass(frozen=True)
class SpectrumReport:
    singular_values: np.ndarray
    signed: np.ndarray          # +-sigma, sorted ascending
    sigma_max: float
    symmetric_eig_max_gap: float  # max |eigvalsh(K_h) - signed| (sorted)
    bins: dict = field(default_factory=dict)  # k -> count of sigma in [2^{-k-1}, 2^{-k})
    nodes: int = 0
    U: np.ndarray | None = None
    Vt: np.ndarray | None = None


def svd_spectrum(op: DiscreteOperator, n_bins: int = 12, vectors: bool = False, eig_check: bool = True) -> SpectrumReport:
    if vectors:
        U, S, Vt = np.linalg.svd(op.block)
    else:
        U = Vt = None
        S = np.linalg.svd(op.block, compute_uv=False)
    m = len(op.x)
    signed = np.concatenate([-S, S, np.zeros(m - 2 * len(S))])
    signed.sort()
    gap = float("nan")
    if eig_check:
        ev = np.linalg.eigvalsh(op.matrix)
        gap = float(np.max(np.abs(ev - signed)))
    bins = {k: int(np.sum((S >= 2.0 ** (-k - 1)) & (S < 2.0 ** (-k)))) for k in range(n_bins)}
    return SpectrumReport(S, signed, float(S[0]), gap, bins, m, U, Vt)


def singular_function(op: DiscreteOperator, rep: SpectrumReport, index: int):
    """Left singular vector (J side) and right (E side) as function samples u/sqrt(w)."""
    if rep.U is None:
        raise ValueError("spectrum was computed without vectors")
    xj, wj = op.nodes("J")
    xe, we = op.nodes("E")
    return (xj, rep.U[:, index] / np.sqrt(wj)), (xe, rep.Vt[index] / np.sqrt(we))


# -- graded rules for the continuous action -------------------------------------------

@dataclass(frozen=True)
class GradedRule:
    """Nodes y, weights w and exact offsets diffs[:, k] = y - b_k over one band."""
    y: np.ndarray
    w: np.ndarray
    diffs: np.ndarray


def graded_rule(config: IntervalConfig, label: str, panels: int = 60, order: int = 40,
                s_max: float = 60.0, end_panels: int = 20) -> GradedRule:
    """Half-segments graded toward their end: y = end +- exp(-s) at double points,
    y = end +- u^4 at simple endpoints."""
    xg, wg = leggauss(order)
    b = config.b
    Y, Wt, D = [], [], []
    for lo, hi, _ in config.segments(label):
        half = 0.5 * (hi - lo)
        for end, sgn in ((lo, 1.0), (hi, -1.0)):
            is_double = np.any(b == end)
            if is_double:
                k = int(np.argmin(np.abs(b - end)))
                e = np.linspace(-np.log(half), s_max, panels + 1)
                s = (0.5 * np.diff(e)[:, None] * xg + 0.5 * (e[:-1] + e[1:])[:, None]).ravel()
                ws = (0.5 * np.diff(e)[:, None] * wg).ravel()
                off = sgn * np.exp(-s)
                d = (end - b)[None, :] + off[:, None]
                d[:, k] = off
                Y.append(end + off)
                Wt.append(ws * np.exp(-s))
                D.append(d)
            else:
                e = np.linspace(0.0, half ** 0.25, end_panels + 1)
                u = (0.5 * np.diff(e)[:, None] * xg + 0.5 * (e[:-1] + e[1:])[:, None]).ravel()
                wu = (0.5 * np.diff(e)[:, None] * wg).ravel()
                # nodes that round onto the endpoint carry O(u^3) < 1e-9 of the mass; drop them
                keep = u ** 4 > 1e-12 * max(1.0, abs(end))
                u, wu = u[keep], wu[keep]
                y = end + sgn * u ** 4
                Y.append(y)
                Wt.append(wu * 4 * u ** 3)
                D.append(y[:, None] - b[None, :])
    return GradedRule(np.concatenate(Y), np.concatenate(Wt), np.concatenate(D))


def _labels(config: IntervalConfig, x):
    k = np.searchsorted(config.b, np.asarray(x, dtype=float))
    first = config.first_band
    other = "J" if first == "E" else "E"
    return np.where(k % 2 == 0, first, other)


def cross_action(config: IntervalConfig, values, rule: GradedRule, source: str, x):
    """(K f)(x) for f supported on band ``source`` and x in the other band.

    E -> J: (1/pi) int_E f(y)/(x - y) dy;  J -> E: (1/pi) int_J f(y)/(y - x) dy.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(_labels(config, x) == source):
        raise ValueError("x must lie in the band opposite to the integration band")
    sgn = 1.0 if source == "E" else -1.0
    vals = np.asarray(values)
    kern = sgn / (np.pi * (x[:, None] - rule.y[None, :]))
    return kern @ (rule.w[:, None] * vals.reshape(len(rule.y), -1)) if vals.ndim > 1 else kern @ (rule.w * vals)


def apply_fht(config: IntervalConfig, f, x, source: str = "E", **rule_kw):
    """Cross-band action of the operator on a callable f(y, diffs) supported on ``source``."""
    rule = graded_rule(config, source, **rule_kw)
    return cross_action(config, f(rule.y, rule.diffs), rule, source, x)


# -- eigenfunction residuals ------------------------------------------------------

@dataclass(frozen=True)
class ResidualReport:
    lam: float
    kappa: float
    residuals: np.ndarray  # per j
    grid: np.ndarray
    control: float | None = None


def eigen_residual(config: IntervalConfig, lam: float, window, grid: int = 41, control_seed: int | None = 0,
                   **rule_kw) -> ResidualReport:
    """r_j = ||K G_j - lambda G_j|| / ||lambda G_j|| over an equispaced grid in the window."""
    lam = float(lam)
    if not (0 < abs(lam) <= 0.05):
        raise ValueError("lambda must satisfy 0 < |lambda| <= 0.05")
    ks_strict = KernelSet(config)
    xs = np.linspace(float(window[0]), float(window[1]), grid)
    ks_strict.g_im(xs)  # raises inside exclusion zones
    labs = set(_labels(config, xs))
    if len(labs) != 1:
        raise ValueError("window must lie inside one band")
    target = labs.pop()
    source = "E" if target == "J" else "J"
    raw = KernelSet(config, delta_excl=0.0)
    rule = graded_rule(config, source, **rule_kw)
    Gy = raw.g_kernels(rule.y, lam, rule.diffs)
    KG = cross_action(config, Gy, rule, source, xs)
    Gx = ks_strict.g_kernels(xs, lam)
    r = np.linalg.norm(KG - lam * Gx, axis=0) / np.linalg.norm(lam * Gx, axis=0)
    ctrl = None
    if control_seed is not None:
        ctrl = random_control_residual(config, lam, xs, rule, source, control_seed)
    return ResidualReport(lam, float(kappa_of(lam)), r, xs, ctrl)


def random_control_residual(config, lam, xs, rule, source, seed=0):
    """Same residual with G_j replaced by a random smooth (low-degree Legendre) function."""
    rng = np.random.default_rng(seed)
    coef = rng.normal(size=6)
    t = lambda x: (2 * x - config.a1 - config.a2) / config.length
    f = lambda x: np.polynomial.legendre.legval(t(x), coef)
    Kf = cross_action(config, f(rule.y), rule, source, xs)
    return float(np.linalg.norm(Kf - lam * f(xs)) / np.linalg.norm(lam * f(xs)))


# -- local wavenumber -----------------------------------------------------------

class TooFewCrossings(ValueError):
    pass


def _crossings(x, y):
    s = np.sign(y)
    idx = np.nonzero(s[:-1] * s[1:] < 0)[0]
    return x[idx] - y[idx] * (x[idx + 1] - x[idx]) / (y[idx + 1] - y[idx])


def local_wavenumber(values, x, x0: float, half_width: float, envelope=None, min_crossings: int = 6,
                     norm_range=None, report: bool = False):
    """Local wavenumber of sampled oscillations near x0.

    With at least ``min_crossings`` zero crossings in [x0 - hw, x0 + hw] this is
    pi / (mean crossing spacing). Otherwise, if an envelope is supplied, the
    samples are divided by it, scaled to unit peak over ``norm_range`` (default:
    the sample range trimmed by 5% at each side), and the phase
    arccos(y) is fitted by a quadratic around x0; the slope magnitude is returned.
    """
    x = np.asarray(x, dtype=float)
    v = np.asarray(values, dtype=float)
    order = np.argsort(x)
    x, v = x[order], v[order]
    win = np.abs(x - x0) <= half_width
    zc = _crossings(x[win], v[win])
    if len(zc) >= min_crossings:
        k = float(np.pi / np.mean(np.diff(zc)))
        return (k, "crossings") if report else k
    if envelope is None:
        raise TooFewCrossings("%d zero crossings in the window (need %d)" % (len(zc), min_crossings))
    y = v / np.asarray(envelope, dtype=float)[order]
    if norm_range is None:
        span = x[-1] - x[0]
        norm_range = (x[0] + 0.05 * span, x[-1] - 0.05 * span)
    nm = (x >= norm_range[0]) & (x <= norm_range[1])
    y = y / np.max(np.abs(y[nm]))
    if np.sum(win) < 5:
        raise TooFewCrossings("too few samples in the window")
    theta = np.arccos(np.clip(y[win], -1.0, 1.0))
    p = np.polyfit(x[win] - x0, theta, 2)
    k = float(abs(p[1]))
    return (k, "phase") if report else k


def singular_vector_wavenumber(config: IntervalConfig, sigma: float, x0: float, half_width: float,
                               nodes_per_band: int = 256, op: DiscreteOperator | None = None,
                               rep: SpectrumReport | None = None):
    """Wavenumber near x0 of the J-side singular function whose sigma is closest to ``sigma``.

    For n = 1 the phase fallback divides by |A_1|; for n > 1 only zero crossings are used.
    """
    if op is None:
        op = build_discrete(config, nodes_per_band)
    if rep is None or rep.U is None:
        rep = svd_spectrum(op, vectors=True, eig_check=False)
    m = int(np.argmin(np.abs(rep.singular_values - sigma)))
    (xj, u), _ = singular_function(op, rep, m)
    env = None
    if config.n == 1:
        env = np.abs(KernelSet(config, delta_excl=0.0).amplitudes(xj)[:, 0])
    k, how = local_wavenumber(u, xj, x0, half_width, envelope=env, report=True)
    return {"k": k, "method": how, "sigma": float(rep.singular_values[m]), "index": m}
