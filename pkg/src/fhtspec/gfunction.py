"""The g-function of a multi-interval with +/-1 jumps.

With chi = +1 on E, -1 on J and R(z) = prod (z - a_j)^{1/2} ~ z^{g+1},

    g(z) = R(z)/(2 pi i) [ int_U chi dz'/((z' - z) R_+(z'))
                           + sum_j i Omega_j int_{gap_j} dz'/((z' - z) R(z')) ].

Quadrature works in the cosine variable of each band or gap [lo, hi]:
z' = c + h cos t turns dz'/sqrt((z'-lo)(hi-z')) into -dt, removing the
inverse square-root endpoint singularity. Principal values on a band use
singularity subtraction with the closed-form log term of
PV int dt/(cos t - cos s). Panels are graded geometrically toward the
breakpoints where chi jumps.

For a single interval the module also carries an independent closed form,
used as a cross-check and as the fast path for kernel evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

from .branches import BranchPointError, pow_shift
from .geometry import IntervalConfig, angles, nu_of


class ExclusionZoneError(ValueError):
    pass


@dataclass(frozen=True)
class QuadratureScheme:
    order: int = 32
    panels_per_band: int = 16
    delta_excl_rel: float = 1e-3
    grade_floor_rel: float = 2.5e-4

    def refined(self) -> "QuadratureScheme":
        return QuadratureScheme(self.order, 2 * self.panels_per_band, self.delta_excl_rel,
                                self.grade_floor_rel / 2)


@dataclass(frozen=True)
class Piece:
    lo: float
    hi: float
    kind: str           # "E", "J" or "gap"
    interval: int       # index of the enclosing band or gap in BandLayout.intervals
    gap_index: int = -1


@dataclass(frozen=True)
class BandLayout:
    """Bands [a_{2k}, a_{2k+1}] cut into E/J pieces; gaps between bands carry Omega_j."""

    endpoints: tuple[float, ...]
    pieces: tuple[Piece, ...]

    @property
    def genus(self) -> int:
        return len(self.endpoints) // 2 - 1

    @cached_property
    def intervals(self) -> list[tuple[float, float, str]]:
        a = self.endpoints
        out = []
        for k in range(len(a) - 1):
            out.append((a[k], a[k + 1], "band" if k % 2 == 0 else "gap"))
        return out

    @cached_property
    def singular_points(self) -> np.ndarray:
        pts = set(self.endpoints)
        for p in self.pieces:
            pts.update((p.lo, p.hi))
        return np.array(sorted(pts))

    @staticmethod
    def from_config(config: IntervalConfig) -> "BandLayout":
        pieces = tuple(Piece(lo, hi, lab, 0) for lo, hi, lab in config.segments())
        return BandLayout((config.a1, config.a2), pieces)

    @staticmethod
    def from_bands(bands: Sequence[Sequence[float]], labels: Sequence[Sequence[str]]) -> "BandLayout":
        """``bands[k]`` lists the breakpoints of band k (endpoints included);
        ``labels[k]`` names each of its pieces."""
        endpoints, pieces = [], []
        for k, (pts, labs) in enumerate(zip(bands, labels)):
            pts = [float(p) for p in pts]
            if len(labs) != len(pts) - 1 or any(x >= y for x, y in zip(pts, pts[1:])):
                raise ValueError("band %d: breakpoints must increase and match labels" % k)
            if endpoints and pts[0] <= endpoints[-1]:
                raise ValueError("bands must be disjoint and ordered")
            endpoints += [pts[0], pts[-1]]
            for lo, hi, lab in zip(pts, pts[1:], labs):
                if lab not in ("E", "J"):
                    raise ValueError("labels must be 'E' or 'J'")
                pieces.append(Piece(lo, hi, lab, 2 * k))
        for j in range(len(bands) - 1):
            pieces.append(Piece(endpoints[2 * j + 1], endpoints[2 * j + 2], "gap", 2 * j + 1, j))
        return BandLayout(tuple(endpoints), tuple(pieces))


def radical(z, endpoints, shore=None):
    """R(z) = prod (z - a_j)^{1/2}, ~ z^{g+1} at infinity.

    Each factor uses the cut (-inf, a_j); the product is single valued off the
    bands. Real z inside a band needs ``shore``; real z at an endpoint raises.
    """
    z = np.asarray(z)
    a = np.asarray(endpoints, dtype=float)
    zr = np.real(z)
    on_axis = np.imag(z) == 0
    if np.any(on_axis & np.isin(zr, a)):
        raise BranchPointError("branch point")
    if shore is None:
        k = np.searchsorted(a, zr)
        if np.any(on_axis & (k % 2 == 1)):
            raise BranchPointError("real z inside a band needs a shore")
    # in gaps and beyond the bands an even number of factors sit on cuts,
    # so the shore choice cancels there
    out = np.ones(np.shape(z), dtype=complex)
    for aj in a:
        out = out * pow_shift(z, aj, 0.5, shore or 1)
    return out


def _rho(zeta, interval, endpoints):
    """R_+(zeta)/sqrt((zeta - lo)(hi - zeta)) on the given band or gap (smooth, nonvanishing)."""
    a = np.asarray(endpoints)
    g = len(a) // 2 - 1
    others = np.delete(a, [interval, interval + 1])
    mag = np.prod(np.sqrt(np.abs(zeta[..., None] - others)), axis=-1) if others.size else np.ones_like(zeta)
    k = interval // 2
    if interval % 2 == 0:
        return 1j * (-1.0) ** (g - k) * mag
    return (-1.0) ** (g - k) * mag + 0j


def _rho_continued(z, interval, endpoints):
    """Analytic continuation of _rho off the axis, valid near the interior of the interval."""
    a = np.asarray(endpoints)
    g = len(a) // 2 - 1
    c = 0.5 * (a[interval] + a[interval + 1])
    others = np.delete(a, [interval, interval + 1])
    mag = np.ones(np.shape(z), dtype=complex)
    for ao in others:
        mag = mag * np.sqrt(np.sign(c - ao) * (z - ao))
    k = interval // 2
    if interval % 2 == 0:
        return 1j * (-1.0) ** (g - k) * mag
    return (-1.0) ** (g - k) * mag


def _log_rho_derivs(x, interval, endpoints):
    """(rho'/rho, sum 1/(x - a_j)^2) over the endpoints not bounding the interval."""
    others = np.delete(np.asarray(endpoints), [interval, interval + 1])
    if others.size == 0:
        z = np.zeros_like(x)
        return z, z
    d = x[..., None] - others
    return 0.5 * np.sum(1.0 / d, axis=-1), np.sum(1.0 / d ** 2, axis=-1)


class _PieceRule:
    """Gauss-Legendre nodes in t for one piece, with density w/rho precomputed."""

    def __init__(self, piece: Piece, layout: BandLayout, scheme: QuadratureScheme, weight: complex):
        lo_i, hi_i = layout.endpoints[piece.interval], layout.endpoints[piece.interval + 1]
        self.piece = piece
        self.c = 0.5 * (lo_i + hi_i)
        self.h = 0.5 * (hi_i - lo_i)
        self.t_hi = self._t(piece.hi)
        self.t_lo = self._t(piece.lo)
        self.weight = weight
        span = layout.endpoints[-1] - layout.endpoints[0]
        floor = scheme.grade_floor_rel * span
        edges = self._panel_edges(scheme.panels_per_band, floor, lo_i, hi_i)
        xg, wg = leggauss(scheme.order)
        a, b = edges[:-1, None], edges[1:, None]
        self.t = (0.5 * (b - a) * xg + 0.5 * (b + a)).ravel()
        self.wt = (0.5 * (b - a) * wg).ravel()
        self.zeta = self.c + self.h * np.cos(self.t)
        self.interval = piece.interval
        self.endpoints = layout.endpoints
        self.dens = weight / _rho(self.zeta, piece.interval, layout.endpoints)

    def _t(self, zeta):
        return float(np.arccos(np.clip((zeta - self.c) / self.h, -1.0, 1.0)))

    def _panel_edges(self, per_band, floor, lo_i, hi_i):
        # uniform panels in t over the whole band, clipped to this piece, plus
        # geometric grading toward piece ends that are interior breakpoints
        base = np.linspace(0.0, np.pi, per_band + 1)
        e = [self.t_hi, self.t_lo]
        e += [t for t in base if self.t_hi < t < self.t_lo]
        for zeta_end, inner in ((self.piece.lo, lo_i), (self.piece.hi, hi_i)):
            if zeta_end == inner:
                continue
            t0 = self._t(zeta_end)
            sgn = 1.0 if zeta_end == self.piece.hi else -1.0  # direction into the piece in t
            dt_floor = floor / (self.h * max(np.sin(t0), 1e-300))
            dt_max = np.pi / per_band
            d = dt_floor
            while d < dt_max:
                tt = t0 + sgn * d
                if self.t_hi < tt < self.t_lo:
                    e.append(tt)
                d *= 2.0
        return np.unique(np.array(e))

    def cauchy(self, z):
        """int dens(t)/(zeta(t) - z) dt for Im z > 0.

        Points close to the piece get the continued density subtracted, with
        the subtracted part integrated exactly, so the rule stays accurate
        as Im z -> 0.
        """
        z = np.asarray(z, dtype=complex)
        out = np.sum(self.wt * self.dens / (self.zeta - z[..., None]), axis=-1)
        lo, hi = self.piece.lo, self.piece.hi
        near = (z.real > lo) & (z.real < hi) & (z.imag < 0.5 * (hi - lo))
        if not np.any(near):
            return out
        zn = z[near]
        S_nodes = self.h * np.sin(self.t)
        S_z = np.sqrt(self.h ** 2 - (zn - self.c) ** 2)
        F_z = self.weight / (_rho_continued(zn, self.interval, self.endpoints) * S_z)
        num = self.dens - F_z[:, None] * S_nodes
        out = out.astype(complex)
        out[near] = (np.sum(self.wt * num / (self.zeta - zn[:, None]), axis=1)
                     + F_z * (np.log(hi - zn) - np.log(lo - zn)))
        return out

    def phi(self, x):
        return self.weight / _rho(np.asarray(x, dtype=float), self.interval, self.endpoints)


def _pv_log_term(s, t_a, t_b):
    """Lambda_hat(s) = PV int_{t_a}^{t_b} dt/(cos t - cos s) and its s-derivative."""
    def L(t):
        return np.log(np.abs(np.sin(0.5 * (t + s)))) - np.log(np.abs(np.sin(0.5 * (t - s))))

    def dL(t):
        return 0.5 / np.tan(0.5 * (t + s)) + 0.5 / np.tan(0.5 * (t - s))

    sn, cs = np.sin(s), np.cos(s)
    bracket = L(t_b) - L(t_a)
    val = bracket / sn
    dval = -cs / sn ** 2 * bracket + (dL(t_b) - dL(t_a)) / sn
    return val, dval


class GEvaluator:
    """Quadrature-backed evaluator for g(z), Im g(x_+) and (Im g)'(x).

    Accepts an IntervalConfig or a BandLayout. ``method="closed"`` switches a
    single-interval config to the closed-form route.
    """

    def __init__(self, config, scheme: QuadratureScheme | None = None, method: str = "quadrature"):
        self.scheme = scheme or QuadratureScheme()
        if isinstance(config, IntervalConfig):
            self.config = config
            self.layout = BandLayout.from_config(config)
        else:
            self.config = None
            self.layout = config
        if method not in ("quadrature", "closed"):
            raise ValueError("method must be 'quadrature' or 'closed'")
        if method == "closed" and self.config is None:
            raise ValueError("closed form needs a single-interval IntervalConfig")
        self.method = method
        span = self.layout.endpoints[-1] - self.layout.endpoints[0]
        self.delta_excl = self.scheme.delta_excl_rel * span
        self.omegas = solve_omegas(self.layout, self.scheme)
        self._rules = [
            _PieceRule(p, self.layout, self.scheme,
                       (1.0 if p.kind == "E" else -1.0) if p.kind != "gap" else 1j * self.omegas[p.gap_index])
            for p in self.layout.pieces
        ]

    # -- helpers -----------------------------------------------------------
    def _check_interior(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        pts = self.layout.singular_points
        if np.any(np.min(np.abs(x[:, None] - pts), axis=1) <= self.delta_excl):
            raise ExclusionZoneError("exclusion zone: point within %.3g of a singular point" % self.delta_excl)
        idx = np.full(x.shape, -1)
        for i, r in enumerate(self._rules):
            if r.piece.kind == "gap":
                continue
            idx[(x > r.piece.lo) & (x < r.piece.hi)] = i
        if np.any(idx < 0):
            raise ValueError("point outside the bands")
        return x, idx

    def _R_plus(self, x):
        return radical(x, self.layout.endpoints, shore=1)

    # -- public API ----------------------------------------------------------
    def g(self, z):
        """g(z) for z off the real axis; the lower half-plane comes from Schwarz symmetry."""
        z = np.asarray(z, dtype=complex)
        if self.method == "closed":
            return closed_g(self.config, z)
        lower = z.imag < 0
        zz = np.where(lower, np.conj(z), z)
        if np.any(zz.imag == 0):
            raise ValueError("g(z) needs Im z != 0; use g_boundary for shore values")
        H = np.zeros(zz.shape, dtype=complex)
        for r in self._rules:
            H += r.cauchy(zz)
        val = radical(zz, self.layout.endpoints, shore=1) * H / (2j * np.pi)
        return np.where(lower, np.conj(val), val)

    def g_infinity(self) -> complex:
        g_ = self.layout.genus
        mu = sum(np.sum(r.wt * r.dens * r.zeta ** g_) for r in self._rules)
        return complex(-mu / (2j * np.pi))

    def _pv_sums(self, x, idx, derivative=False):
        """H(x) without the i*pi residue term, and optionally H'(x)."""
        H = np.zeros(x.shape, dtype=complex)
        dH = np.zeros(x.shape, dtype=complex)
        for i, r in enumerate(self._rules):
            inside = idx == i
            out = ~inside
            if np.any(out):
                xo = x[out]
                diff = r.zeta - xo[:, None]
                H[out] += np.sum(r.wt * r.dens / diff, axis=1)
                if derivative:
                    dH[out] += np.sum(r.wt * r.dens / diff ** 2, axis=1)
            if np.any(inside):
                xi = x[inside]
                val, dval = self._pv_piece(r, xi, derivative)
                H[inside] += val
                dH[inside] += dval
        return H, dH

    def _pv_piece(self, r: _PieceRule, x, derivative):
        s = np.arccos(np.clip((x - r.c) / r.h, -1.0, 1.0))
        lam_hat, dlam_hat = _pv_log_term(s, r.t_hi, r.t_lo)
        Lam = lam_hat / r.h
        phi_x = r.phi(x)
        q1, q2 = _log_rho_derivs(x, r.interval, r.endpoints)
        # phi(zeta)/phi(x) = exp(u), u = -(1/2) sum log1p(delta/(x - a_j))
        delta = r.zeta[None, :] - x[:, None]
        others = np.delete(np.asarray(r.endpoints), [r.interval, r.interval + 1])
        if others.size:
            rr = delta[..., None] / (x[:, None, None] - others)
            u = -0.5 * np.sum(np.log1p(rr), axis=-1)
            u_lin = -0.5 * np.sum(np.log1p(rr) - rr, axis=-1)
        else:
            u = np.zeros_like(delta)
            u_lin = u
        tiny = np.abs(delta) < 1e-12 * r.h
        safe = np.where(tiny, 1.0, delta)
        first = np.where(tiny, -q1[:, None], np.expm1(u) / safe)
        val = phi_x * (np.sum(r.wt * first, axis=1) + Lam)
        if not derivative:
            return val, np.zeros_like(val)
        # phi(zeta) - phi(x) - phi'(x) delta = phi(x) [expm1(u) - u + u_lin]
        half_phi2 = 0.5 * (q1 ** 2 + 0.5 * q2)
        second = np.where(tiny, half_phi2[:, None], (np.expm1(u) - u + u_lin) / safe ** 2)
        dphi = -phi_x * q1
        dLam = dlam_hat * (-1.0 / (r.h * np.sin(s))) / r.h
        dval = phi_x * np.sum(r.wt * second, axis=1) + dphi * Lam + phi_x * dLam
        return val, dval

    def g_boundary(self, x, shore: int = 1):
        """g(x_+) (shore=+1) or g(x_-) (shore=-1) at interior band points."""
        if self.method == "closed":
            self._check_interior(x)
            val = closed_g_boundary(self.config, x)
            return val if shore == 1 else np.conj(val)
        x, idx = self._check_interior(x)
        H, _ = self._pv_sums(x, idx)
        chi = np.array([self._rules[i].weight for i in idx])
        val = (self._R_plus(x) * H + 1j * np.pi * chi) / (2j * np.pi)
        return val if shore == 1 else np.conj(val)

    def g_im(self, x):
        return np.imag(self.g_boundary(x, 1))

    def g_prime_boundary(self, x):
        x, idx = self._check_interior(x)
        H, dH = self._pv_sums(x, idx, derivative=True)
        Rp = self._R_plus(x)
        dR = Rp * 0.5 * np.sum(1.0 / (x[:, None] - np.asarray(self.layout.endpoints)), axis=1)
        return (dR * H + Rp * dH) / (2j * np.pi)

    def g_im_prime(self, x):
        if self.method == "closed":
            self._check_interior(x)
            return closed_g_im_prime(self.config, x)
        return np.imag(self.g_prime_boundary(x))


def _moment_rules(layout: BandLayout, scheme: QuadratureScheme):
    return [_PieceRule(p, layout, scheme, 1.0) for p in layout.pieces]


def solve_omegas(layout: BandLayout, scheme: QuadratureScheme | None = None, return_report: bool = False):
    """Gap constants Omega_j making g analytic (bounded) at infinity.

    The moments m = 0..g-1 of the bracketed density must vanish; all entries
    are purely imaginary, so the system is solved in real arithmetic.
    """
    scheme = scheme or QuadratureScheme()
    g_ = layout.genus
    if g_ == 0:
        return (np.zeros(0), {"residual": 0.0, "cond": 1.0}) if return_report else np.zeros(0)
    rules = _moment_rules(layout, scheme)
    c = 0.5 * (layout.endpoints[0] + layout.endpoints[-1])
    sc = 0.5 * (layout.endpoints[-1] - layout.endpoints[0])
    A = np.zeros((g_, g_))
    rhs = np.zeros(g_)
    for r in rules:
        p = r.piece
        mom = np.array([np.sum(r.wt * r.dens * ((r.zeta - c) / sc) ** m) for m in range(g_)])
        if p.kind == "gap":
            # i*Omega*mom with mom real: imaginary part Omega*mom
            A[:, p.gap_index] += np.real(mom)
        else:
            rhs -= np.imag((1.0 if p.kind == "E" else -1.0) * mom)
    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > 1e14:
        raise np.linalg.LinAlgError("singular moment matrix (cond=%.3g)" % cond)
    om = np.linalg.solve(A, rhs)
    res = float(np.max(np.abs(A @ om - rhs)))
    if return_report:
        return om, {"residual": res, "cond": float(cond)}
    return om


# -- closed forms for a single interval ----------------------------------------
#
# For [a1, b1] in E, g = 1/2 + (2i/pi) g~ with
#   exp(g~) = (a2-a1)^{((-1)^n-1)/4} prod (z-b_j)^{(-1)^j/2} prod s(z,b_k)^{(-1)^{k+1}},
# which gives Im g(x_+) = (2/pi) log|exp(g~(x_+))| on (a1, a2).  Relabeling
# E <-> J flips the sign of g.


def _closed_sign(config: IntervalConfig) -> float:
    return 1.0 if config.first_band == "E" else -1.0


def closed_g_im(config: IntervalConfig, x, diffs=None):
    """Im g(x_+) from the closed form. ``diffs[..., j]`` may supply exact x - b_j."""
    x = np.asarray(x, dtype=float)
    n = config.n
    L = np.log(config.length)
    nu = angles(config).nu
    d = x[..., None] - config.b if diffs is None else np.asarray(diffs, dtype=float)
    j = np.arange(1, n + 1)
    nux = nu_of(config, x)[..., None]
    val = ((-1.0) ** n - 1) / 4 * L
    val = val + np.sum(0.5 * (-1.0) ** j * np.log(np.abs(d)), axis=-1)
    val = val + np.sum((-1.0) ** (j + 1) * (L + np.log(np.sin(nu + nux))), axis=-1)
    return _closed_sign(config) * 2.0 / np.pi * val


def closed_g_im_prime(config: IntervalConfig, x, diffs=None):
    """(Im g)'(x) = -(1/pi) sum eps_k sqrt((b_k-a1)(a2-b_k)) / ((x-b_k) sqrt((x-a1)(a2-x))).

    eps_k = +1 when E lies to the left of b_k.
    """
    x = np.asarray(x, dtype=float)
    b = config.b
    d = x[..., None] - b if diffs is None else np.asarray(diffs, dtype=float)
    eps = _closed_sign(config) * (-1.0) ** np.arange(config.n)
    w = np.sqrt((b - config.a1) * (config.a2 - b))
    root = np.sqrt((x - config.a1) * (config.a2 - x))
    return -np.sum(eps * w / d, axis=-1) / (np.pi * root)


def closed_g_boundary(config: IntervalConfig, x):
    from .geometry import chi
    return 0.5 * chi(config, x) + 1j * closed_g_im(config, x)


def _exp_tilde_g(config: IntervalConfig, z):
    z = np.asarray(z, dtype=complex)
    n = config.n
    a1, a2, b = config.a1, config.a2, config.b
    out = np.full(z.shape, config.length ** (((-1) ** n - 1) / 4), dtype=complex)
    for j in range(n):
        out = out * pow_shift(z, b[j], (-1) ** (j + 1) / 2)
        s = 1j * np.sqrt(a2 - b[j]) * pow_shift(z, a1, 0.5) + np.sqrt(b[j] - a1) * pow_shift(z, a2, 0.5)
        out = out * s ** ((-1) ** j)
    return out


def closed_g(config: IntervalConfig, z):
    """g(z) off the real axis from the closed form."""
    z = np.asarray(z, dtype=complex)
    base = config if config.first_band == "E" else config.relabeled()
    val = 0.5 + 2j / np.pi * np.log(_exp_tilde_g(base, z))
    return _closed_sign(config) * val
