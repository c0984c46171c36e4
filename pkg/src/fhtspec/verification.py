"""Named invariant checks, run by ``fhtspec verify``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .geometry import IntervalConfig, angles
from .gfunction import GEvaluator, closed_g_im
from .kernels import KernelSet
from .model import ModelSolution, exp_tilde_g, local_exp_tilde_g, tilde_g_closed, tilde_g_integral
from .parametrix4 import SymmetricModel, sigma1_identity_gap
from .spectral_matrix import build_closed_diag, build_factored, build_sums, cholesky, cosecant_det, diag_closed, diag_sum


@dataclass(frozen=True)
class CheckResult:
    id: str
    passed: bool
    value: float
    tol: float

    def line(self) -> str:
        return "%s %s value=%.3e tol=%.3g" % ("PASS" if self.passed else "FAIL", self.id, self.value, self.tol)


def _probe(config: IntervalConfig, m: int, margin_rel: float = 0.01) -> np.ndarray:
    x = np.linspace(config.a1, config.a2, m + 2)[1:-1]
    pts = config.breakpoints()
    return x[np.min(np.abs(x[:, None] - pts), axis=1) > margin_rel * config.length]


def check_geometry(config):
    ang = angles(config)
    nu, b, L = ang.nu, config.b, config.length
    err = 0.0
    for j in range(config.n):
        for l in range(j):
            err = max(err, abs(b[j] - b[l] - L * np.sin(nu[l] + nu[j]) * np.sin(nu[l] - nu[j])) / L)
    err = max(err, np.max(np.abs(np.sqrt(b - config.a1) - np.sqrt(L) * np.cos(nu))) / np.sqrt(L))
    return [CheckResult("geometry.angle_identities", err < 1e-12, err, 1e-12)]


def check_gfunction(config):
    ev = GEvaluator(config)
    x = _probe(config, 100)
    gp, gm = ev.g_boundary(x, 1), ev.g_boundary(x, -1)
    ch = _chi(config, x)
    re_err = float(np.max(np.abs(gp.real - 0.5 * ch)))
    jump_err = float(np.max(np.abs(gp + gm - ch)))
    h = 1e-6 * config.length
    fd = (ev.g_im(x + h) - ev.g_im(x - h)) / (2 * h)
    d = ev.g_im_prime(x)
    fd_err = float(np.max(np.abs(fd - d) / np.maximum(np.abs(d), 1e-300)))
    sign_ok = bool(np.all(np.sign(d) == ch))
    closed = float(np.max(np.abs(ev.g_im(x) - closed_g_im(config, x))))
    return [
        CheckResult("gfunction.re_boundary", re_err < 1e-8, re_err, 1e-8),
        CheckResult("gfunction.jump", jump_err < 1e-8, jump_err, 1e-8),
        CheckResult("gfunction.prime_vs_fd", fd_err < 1e-6, fd_err, 1e-6),
        CheckResult("gfunction.prime_sign", sign_ok, 0.0 if sign_ok else 1.0, 0.0),
        CheckResult("gfunction.quadrature_vs_closed", closed < 1e-10, closed, 1e-10),
    ]


def _chi(config, x):
    from .geometry import chi
    return chi(config, x)


def check_model(config, rng):
    ms = ModelSolution(config)
    base = ms.base
    z = rng.uniform(base.a1 - 0.5 * base.length, base.a2 + 0.5 * base.length, 50) \
        + 1j * rng.choice([-1, 1], 50) * rng.uniform(0.05, 1.0, 50) * base.length
    P = ms.psi(z)
    route = float(np.max(np.abs(P - ms.psi_exponential(z))))
    det = float(np.max(np.abs(np.linalg.det(P) - 1)))
    x = _probe(config, 60)
    jump = float(np.max(np.abs(ms.psi(x, 1) - ms.psi(x, -1) @ ms.jump(x))))
    tg = float(np.max(np.abs(tilde_g_closed(base, z) - tilde_g_integral(base, z))))
    split = float(np.max(np.abs(ms.psi_hat(z) + 1j * ms.psi_breve(z) - P)))
    Z = 1e6 * base.length
    res = float(np.max(np.abs(Z * (ms.S(np.array([Z]))[0] - np.eye(2)) - ms.residues().sum(0))))
    loc = 0.0
    for j in range(1, base.n + 1):
        eps = 1e-7 * base.length
        xx = np.array([base.b[j - 1] + (eps if j % 2 else -eps)])
        loc = max(loc, float(np.abs(exp_tilde_g(base, xx, 1) / local_exp_tilde_g(base, j, xx) - 1)[0]))
    return [
        CheckResult("model.two_routes", route < 1e-10, route, 1e-10),
        CheckResult("model.det", det < 1e-12, det, 1e-12),
        CheckResult("model.jumps", jump < 1e-9, jump, 1e-9),
        CheckResult("model.tilde_g_closed_vs_integral", tg < 1e-8, tg, 1e-8),
        CheckResult("model.schwarz_split", split < 1e-12, split, 1e-12),
        CheckResult("model.residue_at_infinity", res < 1e-4, res, 1e-4),
        CheckResult("model.local_exp_tilde_g", loc < 1e-5, loc, 1e-5),
    ]


def check_spectral(config):
    A, B, Cd = build_sums(config), build_factored(config), build_closed_diag(config)
    three = max(float(np.max(np.abs(A.full - B.full))), float(np.max(np.abs(A.full - Cd.full))))
    ds, dc = diag_sum(config), diag_closed(config)
    three = max(three, *(float(np.max(np.abs(x - y))) for x, y in zip(ds, dc) if x.size))
    pos = all(np.all(d > 0) for d in dc if d.size)
    C = cholesky(A).full
    rt = float(np.max(np.abs(C.T @ C - A.full)) / np.max(np.abs(A.full)))
    nu = angles(config).nu
    cd = 0.0
    for sub in (nu[0::2], nu[1::2]):
        if len(sub):
            p, e = cosecant_det(sub), cosecant_det(sub, "elimination")
            cd = max(cd, abs(p / e - 1))
    return [
        CheckResult("spectral.three_routes", three < 1e-10, three, 1e-10),
        CheckResult("spectral.diag_positive", pos, 0.0 if pos else 1.0, 0.0),
        CheckResult("spectral.cholesky_roundtrip", rt < 1e-12, rt, 1e-12),
        CheckResult("spectral.cosecant_det", cd < 1e-10, cd, 1e-10),
    ]


def check_kernels(config, rng):
    ks = KernelSet(config)
    x = _probe(config, 40, 0.02)
    xs, ys = rng.choice(x, 60), rng.choice(x, 60)
    err = 0.0
    par = 0.0
    for lam in (1e-2, -1e-3, 1e-5):
        a = ks.approx_Eprime(xs, ys, lam)
        b = ks.approx_Eprime_quadratic(xs, ys, lam)
        err = max(err, float(np.max(np.abs(a - b) / (1 + np.abs(a)))))
        q1, kinds = ks.quadratic_kernels(xs, ys, lam)
        q2, _ = ks.quadratic_kernels(xs, ys, -lam)
        same = np.array([k[0] == k[1] for k in kinds])
        par = max(par, float(np.max(np.abs(np.where(same, q1 + q2, q1 - q2)))))
    sv = np.linalg.svd(ks.gram(x, 1e-3), compute_uv=False)
    gap = float(sv[config.n] / sv[0]) if len(sv) > config.n else 0.0
    return [
        CheckResult("kernels.cholesky_vs_quadratic", err < 1e-12, err, 1e-12),
        CheckResult("kernels.lambda_parity", par < 1e-12, par, 1e-12),
        CheckResult("kernels.gram_rank", gap < 1e-10, gap, 1e-10),
    ]


def check_parametrix4(rng):
    out = []
    for br in ("upper", "lower"):
        m = SymmetricModel(1.0, br)
        r = 0.5 * np.exp(2j * np.pi * rng.uniform(size=20)) * rng.uniform(0.6, 1.6, 20)
        out.append(float(np.max(np.abs(m.psi4(r) - m.phi4(r)))))
    gap = max(sigma1_identity_gap(*(rng.normal(size=3) + 1j * rng.normal(size=3))) for _ in range(20))
    return [
        CheckResult("parametrix4.coincidence", max(out) < 1e-10, max(out), 1e-10),
        CheckResult("parametrix4.sigma1_identity", gap < 1e-12, gap, 1e-12),
    ]


def check_symmetric_model(config):
    if config.to_record() != {"a": [-1.0, 1.0], "doubles": [0.0], "first_band": "E"}:
        return []
    m = SymmetricModel(1.0, "upper")
    z = np.array([0.3 + 0.4j, -0.7 + 0.2j, 1.5 - 0.3j, -0.1 - 0.9j, 2.0 + 2.0j])
    d = float(np.max(np.abs(ModelSolution(config).psi(z) - m.psi4(z))))
    return [CheckResult("model.matches_psi4", d < 1e-10, d, 1e-10)]


def check_oracle(config, nodes_per_band=None):
    from .oracle import build_discrete, svd_spectrum
    if nodes_per_band is None:
        nodes_per_band = max(128, 32 * (config.n + 1))
    rep = svd_spectrum(build_discrete(config, nodes_per_band))
    out = [CheckResult("oracle.signed_symmetry", rep.symmetric_eig_max_gap < 1e-12,
                       rep.symmetric_eig_max_gap, 1e-12)]
    if config.n <= 3:
        out.append(CheckResult("oracle.sigma_max", rep.sigma_max <= 1.05, rep.sigma_max, 1.05))
    return out


def run_all(config: IntervalConfig, seed: int = 0, tol_scale: float = 1.0, include_oracle: bool = True):
    rng = np.random.default_rng(seed)
    suites: list[Callable[[], list[CheckResult]]] = [
        lambda: check_geometry(config),
        lambda: check_gfunction(config),
        lambda: check_model(config, rng),
        lambda: check_symmetric_model(config),
        lambda: check_spectral(config),
        lambda: check_kernels(config, rng),
        lambda: check_parametrix4(rng),
    ]
    if include_oracle:
        suites.append(lambda: check_oracle(config))
    results = []
    for s in suites:
        for r in s():
            if tol_scale != 1.0 and r.tol > 0:
                r = CheckResult(r.id, r.value < r.tol * tol_scale, r.value, r.tol * tol_scale)
            results.append(r)
    return results

