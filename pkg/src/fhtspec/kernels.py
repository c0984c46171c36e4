"""Small-lambda spectral kernels for a single interval with double points.

Points may be passed together with exact offsets ``diffs[..., k] = x - b_k``;
this keeps the |x - b|^{-1/2} behaviour resolved far below eps*|b|.

A config with J first is reduced to its relabeled twin: relabeling E <-> J
negates the operator, so every quantity is the twin's quantity at -lambda.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .geometry import IntervalConfig
from .gfunction import ExclusionZoneError, closed_g_im, closed_g_im_prime
from .model import bn_quarter_boundary
from .spectral_matrix import CholeskyFactor, MMatrix, build_sums, cholesky


class BandMismatch(ValueError):
    pass


class SamplePointError(RuntimeError):
    pass


def kappa_of(lam) -> np.ndarray:
    """kappa = -ln|lambda/2|; requires 0 < |lambda| <= 1 so that kappa >= ln 2."""
    lam = np.asarray(lam, dtype=float)
    if np.any(lam == 0) or np.any(np.abs(lam) > 1):
        raise ValueError("lambda must satisfy 0 < |lambda| <= 1")
    return -np.log(np.abs(lam) / 2.0)


@dataclass(frozen=True)
class PhiPair:
    x: np.ndarray
    kappa: float
    phi_plus: np.ndarray
    phi_minus: np.ndarray
    tphi_plus: np.ndarray
    tphi_minus: np.ndarray


@dataclass(frozen=True)
class SpectralVectors:
    f: np.ndarray  # (..., n), odd-indexed doubles first
    h: np.ndarray


class KernelSet:
    """phi, f/h vectors, quadratic-form kernels, amplitudes A_j and kernels G_j.

    ``delta_excl`` is the refusal radius around endpoints and double points
    (default 1e-3 (a2 - a1)); internal callers that need the raw blow-up pass 0.
    """

    def __init__(self, config: IntervalConfig, delta_excl: float | None = None):
        self.config = config
        self.base = config if config.first_band == "E" else config.relabeled()
        self.lam_sign = 1.0 if config.first_band == "E" else -1.0
        self.n = config.n
        self.n_tilde = config.N_tilde
        self.delta_excl = 1e-3 * config.length if delta_excl is None else float(delta_excl)
        self.M: MMatrix = build_sums(self.base)
        self.chol: CholeskyFactor = cholesky(self.M)
        self.s = np.where(np.arange(1, self.n + 1) <= self.n_tilde, -1.0, 1.0)

    # -- points ----------------------------------------------------------------
    def _prep(self, x, diffs):
        x = np.asarray(x, dtype=float)
        d = x[..., None] - self.base.b if diffs is None else np.asarray(diffs, dtype=float)
        c = self.base
        dist = np.minimum(np.min(np.abs(d), axis=-1), np.minimum(x - c.a1, c.a2 - x))
        if np.any(dist <= self.delta_excl) or np.any(np.min(np.abs(d), axis=-1) == 0):
            raise ExclusionZoneError("exclusion zone: point within %.3g of a singular point" % self.delta_excl)
        return x, d

    def band_of(self, x, diffs=None) -> np.ndarray:
        """+1 for E, -1 for J in the base (E-first) labeling."""
        x, d = self._prep(x, diffs)
        k = np.sum(d > 0, axis=-1)
        return np.where(k % 2 == 0, 1.0, -1.0)

    def g_im(self, x, diffs=None):
        x, d = self._prep(x, diffs)
        return closed_g_im(self.base, x, d)

    def g_im_prime(self, x, diffs=None):
        x, d = self._prep(x, diffs)
        return closed_g_im_prime(self.base, x, d)

    def bn_modulus(self, x, diffs=None):
        """|B_n^{1/4}(x_+)| and the phase of B_n^{1/4}(x_+)."""
        x, d = self._prep(x, diffs)
        q = bn_quarter_boundary(self.base, x, diffs=d)
        return q.modulus, q.phase

    # -- phi and vectors ---------------------------------------------------------
    def phi_values(self, x, kappa: float, diffs=None) -> PhiPair:
        if not kappa >= np.log(2.0):
            raise ValueError("kappa must be at least ln 2")
        x, d = self._prep(x, diffs)
        gi = closed_g_im(self.base, x, d)
        q = bn_quarter_boundary(self.base, x, diffs=d)
        Bp = q.modulus * np.exp(1j * q.phase)
        Bm = 1.0 / Bp
        e = np.exp(1j * kappa * gi)
        return PhiPair(x, kappa, np.real(e * Bp), np.real(e * Bm),
                       np.real(np.conj(e) * Bp), -np.real(np.conj(e) * Bm))

    def pole_vectors(self, x, diffs=None):
        x, d = self._prep(x, diffs)
        inv = 1.0 / d
        return inv[..., 0::2], inv[..., 1::2]

    def spectral_vectors(self, x, kappa: float, diffs=None) -> SpectralVectors:
        p = self.phi_values(x, kappa, diffs)
        vm, vp = self.pole_vectors(x, diffs)
        f = np.concatenate([p.phi_minus[..., None] * vm, p.phi_plus[..., None] * vp], axis=-1)
        h = np.concatenate([p.tphi_minus[..., None] * vm, p.tphi_plus[..., None] * vp], axis=-1)
        return SpectralVectors(f, h)

    # -- quadratic forms ---------------------------------------------------------
    def quadratic_kernels(self, x, y, lam, diffs_x=None, diffs_y=None, kind: str | None = None):
        """Real value q with R~(x, y; lambda) = q/(i pi), dispatched on the bands of x and y.

        q = 4 sgn(lambda) v(y)^T M v(x) for same-band pairs and 4 v(y)^T M v(x)
        for cross-band pairs, with v = h on E points and v = f on J points.
        Returns (q, kinds) with kinds in {"EE", "EJ", "JE", "JJ"} (band of x first,
        in the labels of the actual config). Passing ``kind`` enforces the bands.
        """
        lam = float(lam)
        lb = lam * self.lam_sign
        kap = float(kappa_of(lb))
        bx, by = self.band_of(x, diffs_x), self.band_of(y, diffs_y)
        vx = self._band_vector(x, kap, bx, diffs_x)
        vy = self._band_vector(y, kap, by, diffs_y)
        Mf = self.M.full
        core = np.einsum("...i,ij,...j->...", vy, Mf, vx)
        same = bx == by
        q = 4.0 * np.where(same, np.sign(lb), 1.0) * core
        q = self.lam_sign * q
        lab = {1.0: "E", -1.0: "J"} if self.lam_sign > 0 else {1.0: "J", -1.0: "E"}
        kinds = np.vectorize(lambda a, b: lab[a] + lab[b])(bx, by)
        if kind is not None and np.any(kinds != kind):
            raise BandMismatch("points do not match the requested kernel %s" % kind)
        return q, kinds

    def _band_vector(self, x, kap, band, diffs):
        sv = self.spectral_vectors(x, kap, diffs)
        return np.where(np.asarray(band)[..., None] > 0, sv.h, sv.f)

    def approx_Eprime_quadratic(self, x, y, lam, diffs_x=None, diffs_y=None):
        """|lambda| E'_ac(x, y) assembled from the quadratic forms: sgn(lambda) q/(2 pi^2)."""
        q, _ = self.quadratic_kernels(x, y, lam, diffs_x, diffs_y)
        return np.sign(lam) * q / (2 * np.pi ** 2)

    # -- amplitudes and G_j ------------------------------------------------------
    def amplitudes(self, x, diffs=None):
        """A_j(x), shape (..., n)."""
        x, d = self._prep(x, diffs)
        q = bn_quarter_boundary(self.base, x, diffs=d)
        vm, vp = 1.0 / d[..., 0::2], 1.0 / d[..., 1::2]
        Am = (q.modulus ** -1)[..., None] * np.einsum("ij,...j->...i", self.chol.minus, vm)
        Ap = q.modulus[..., None] * np.einsum("ij,...j->...i", self.chol.plus, vp)
        return np.sqrt(2.0) / np.pi * np.concatenate([Am, Ap], axis=-1)

    def g_kernels(self, x, lam, diffs=None):
        """G_j(x; lambda), shape (..., n)."""
        lb = float(lam) * self.lam_sign
        kap = float(kappa_of(lb))
        x, d = self._prep(x, diffs)
        A = self.amplitudes(x, d)
        gi = closed_g_im(self.base, x, d)
        cosv = np.cos(kap * gi[..., None] + self.s * np.pi / 4)
        on_E = (np.sum(d > 0, axis=-1) % 2 == 0)[..., None]
        fac = np.where(on_E, self.s, np.sign(lb))
        return A * cosv * fac

    def approx_Eprime(self, x, y, lam, diffs_x=None, diffs_y=None):
        """sum_j G_j(x) G_j(y), the leading term of |lambda| E'_ac(x, y; lambda)."""
        return np.sum(self.g_kernels(x, lam, diffs_x) * self.g_kernels(y, lam, diffs_y), axis=-1)

    def gram(self, points, lam):
        G = self.g_kernels(np.asarray(points, dtype=float), lam)
        return G @ G.T

    # -- sample points and ill-posedness -------------------------------------------
    def select_sample_points(self, lam, window, count: int | None = None, c0: float | None = None,
                             seeds=None, delta: float = 1e-10):
        """Points x_k in the window with kappa g_im(x_k) = c0 mod 2 pi near seeds.

        Returns a dict with points, seeds, c0, N_k, displacement bound and the
        Gram determinant. Raises SamplePointError when no admissible set exists.
        """
        lo, hi = map(float, window)
        count = self.n if count is None else int(count)
        lb = float(lam) * self.lam_sign
        kap = float(kappa_of(lb))
        self._prep(np.array([lo, hi]), None)
        probe = np.linspace(lo, hi, 9)
        if len(set(self.band_of(probe))) != 1:
            raise SamplePointError("window must lie inside a single band")
        if seeds is None:
            seeds = lo + (hi - lo) * (np.arange(1, count + 1) / (count + 1))
        seeds = np.asarray(seeds, dtype=float)
        gfun = lambda t: float(closed_g_im(self.base, np.array(t)))
        gp_min = float(np.min(np.abs(closed_g_im_prime(self.base, np.linspace(lo, hi, 401)))))
        bound = 2 * np.pi / (kap * gp_min)
        cj = self.s * np.pi / 4
        if c0 is None:
            grid = np.deg2rad(np.arange(360.0))
            score = np.array([np.min(np.abs(np.cos(c + cj))) for c in grid])
            # best score first; lower-scoring values are fallbacks when a root leaves the window
            order = np.argsort(-np.round(score, 12), kind="stable")
            candidates = grid[order]
        else:
            candidates = np.array([float(c0)])
        failures = []
        for c in candidates:
            Nk = np.rint((kap * np.array([gfun(s) for s in seeds]) - c) / (2 * np.pi))
            targets = (c + 2 * np.pi * Nk) / kap
            pts = []
            ok = True
            for s_, t in zip(seeds, targets):
                a_, b_ = max(lo, s_ - bound), min(hi, s_ + bound)
                fa, fb = gfun(a_) - t, gfun(b_) - t
                if fa * fb > 0:
                    ok = False
                    break
                pts.append(brentq(lambda u: gfun(u) - t, a_, b_, xtol=1e-15, rtol=1e-15))
            if not ok:
                failures.append("c0=%.4f: no root in window" % c)
                continue
            pts = np.array(pts)
            det = float(np.linalg.det(self.gram(pts, lam)))
            if abs(det) <= delta:
                failures.append("c0=%.4f: degenerate Gram determinant" % c)
                continue
            resid = np.abs(np.array([gfun(p) for p in pts]) - targets)
            return {"points": pts, "seeds": seeds, "c0": float(c), "N": Nk.astype(int),
                    "targets": targets, "bound": bound, "displacement": np.abs(pts - seeds),
                    "gram_det": det, "root_residual": resid, "kappa": kap}
        head = sorted(set(f.split(": ", 1)[1].split(" %")[0] for f in failures))
        raise SamplePointError("no admissible c0 among %d candidates (%s); lambda may be too large for this window"
                               % (len(candidates), ", ".join(h.split(" -")[0] for h in head)))

    def illposedness_index(self, x0, lam, diffs=None):
        kap = kappa_of(lam)
        return np.exp(kap / np.abs(self.g_im_prime(x0, diffs)))


def symmetric_example_values():
    """Hand-checkable values for the reference case a = [-1, 1], b = [0]."""
    from .geometry import symmetric_config
    ks = KernelSet(symmetric_config())
    x = np.array([0.5])
    return {
        "g_im": float(ks.g_im(x)[0]),
        "g_im_prime": float(ks.g_im_prime(x)[0]),
        "A1": float(ks.amplitudes(x)[0, 0]),
        "index_0.02": float(ks.illposedness_index(x, 0.02)[0]),
    }


__all__ = ["KernelSet", "PhiPair", "SpectralVectors", "kappa_of", "BandMismatch", "SamplePointError",
           "symmetric_example_values"]
