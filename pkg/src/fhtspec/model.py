"""Outer model solution for a single interval with n double points.

All formulas assume (a1, b1) lies in E and Im kappa >= 0. A config with J
first is handled through the relabeled config: the model problem with
exchanged jumps is solved by sigma3 Psi sigma3.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .branches import IDENTITY, SIGMA1, SIGMA3, pow_shift, sigma1_power
from .geometry import IntervalConfig, angles, nu_of


def _base(config: IntervalConfig) -> IntervalConfig:
    return config if config.first_band == "E" else config.relabeled()


def s_function(config: IntervalConfig, z, b: float, shore=None):
    """s(z, b) = i sqrt((z-a1)(a2-b)) + sqrt((z-a2)(b-a1)), arg(z - a_j) = 0 on (a_j, inf)."""
    a1, a2 = config.a1, config.a2
    return (1j * np.sqrt(a2 - b) * pow_shift(z, a1, 0.5, shore)
            + np.sqrt(b - a1) * pow_shift(z, a2, 0.5, shore))


def tilde_Bn(config: IntervalConfig, z, shore=None, diffs=None):
    """prod_j (z - b_j)^{(-1)^j/2}, each root cut on (-inf, b_j)."""
    z = np.asarray(z)
    out = np.ones(z.shape, dtype=complex)
    for j, bj in enumerate(config.b, start=1):
        d = None if diffs is None else diffs[..., j - 1]
        out = out * pow_shift(z, bj, (-1) ** j / 2, shore, d)
    return out


def exp_tilde_g(config: IntervalConfig, z, shore=None):
    """exp(g~(z)) = (a2-a1)^{((-1)^n-1)/4} B~_n(z) prod s(z, b_k)^{(-1)^{k+1}}."""
    c = _base(config)
    z = np.asarray(z)
    out = c.length ** (((-1) ** c.n - 1) / 4) * tilde_Bn(c, z, shore)
    for k, bk in enumerate(c.b, start=1):
        out = out * s_function(c, z, bk, shore) ** ((-1) ** (k + 1))
    return out


def tilde_g_closed(config: IntervalConfig, z, shore=None):
    """Closed form of g~ (principal log of the elementary product)."""
    return np.log(exp_tilde_g(config, z, shore))


def tilde_g_integral(config: IntervalConfig, z, scheme=None):
    """g~(z) = R(z)/(2 pi i) int_J (i pi) dz'/((z' - z) R_+(z')), for z off the real axis.

    The weight +i*pi on J is the sign under which the integral agrees with
    the closed form and with g~(inf) = i*alpha.
    """
    from .gfunction import BandLayout, GEvaluator, QuadratureScheme

    c = _base(config)
    z = np.asarray(z, dtype=complex)
    # reuse the g-function machinery: g = 1/2 + (2i/pi) g~  <=>  g~ = (pi/2i)(g - 1/2)
    ev = GEvaluator(BandLayout.from_config(c), scheme or QuadratureScheme())
    return (np.pi / 2j) * (ev.g(z) - 0.5)


def tilde_g_infinity(config: IntervalConfig) -> complex:
    return 1j * angles(_base(config)).alpha


@dataclass(frozen=True)
class ModelCoefficients:
    k: np.ndarray
    m: np.ndarray
    n_coef: np.ndarray
    khat: np.ndarray
    shat: np.ndarray


def coefficients(config: IntervalConfig) -> ModelCoefficients:
    c = _base(config)
    ang = angles(c)
    nu, alpha, n, L = ang.nu, ang.alpha, c.n, c.length
    b = c.b
    k = np.empty(n)
    for jj in range(n):
        j = jj + 1
        others = [l for l in range(n) if l != jj]
        if j % 2:
            pr = np.prod([np.sin(abs(nu[l] - nu[jj])) ** ((-1) ** (l + 1)) for l in others])
            k[jj] = 0.5 * L * np.cos(nu[jj]) * np.sin(nu[jj]) ** ((1 - (-1) ** n) / 2) * pr
        else:
            pr = np.prod([np.sin(abs(nu[l] - nu[jj])) ** ((-1) ** (l + 2)) for l in others])
            k[jj] = 0.5 * L * np.sin(nu[jj]) ** ((1 + (-1) ** n) / 2) * pr
    odd = (np.arange(1, n + 1) % 2) == 1
    m = np.where(odd, -k * np.sin(nu - alpha), k * np.cos(nu + alpha))
    nc = np.where(odd, -k * np.cos(nu - alpha), k * np.sin(nu + alpha))
    s_idx = np.arange(1, n + 1)
    khat = np.array([np.prod([abs(b[j] - b[s]) ** ((-1) ** (s + 1) / 2) for s in range(n) if s != j])
                     for j in range(n)])
    shat = np.array([np.prod(np.sin(nu[j] + nu) ** ((-1.0) ** (s_idx + 1))) for j in range(n)])
    return ModelCoefficients(k, m, nc, khat, shat)


def local_exp_tilde_g(config: IntervalConfig, j: int, x):
    """Leading behaviour of exp(g~(x_+)) near b_j (1-based j)."""
    c = _base(config)
    co = coefficients(c)
    n = c.n
    return (1j * c.length ** ((1 - (-1) ** n) / 4) * co.shat[j - 1] * co.khat[j - 1]
            * np.abs(np.asarray(x) - c.b[j - 1]) ** ((-1) ** j / 2))


def gamma_factor(config: IntervalConfig, z, shore=None, diffs=None, sign=1):
    """((z-a1)/(z-a2)^{(-1)^n})^{sign/4} B~_n(z)^{sign}, with the paper-style cuts."""
    c = _base(config)
    n = c.n
    val = pow_shift(z, c.a1, 0.25, shore) * pow_shift(z, c.a2, -((-1) ** n) / 4, shore) * tilde_Bn(c, z, shore, diffs)
    return val if sign == 1 else 1.0 / val


@dataclass(frozen=True)
class QuarterPower:
    """B_n^{1/4}(x_+) as modulus and phase; B_n^{-1/4} is its reciprocal."""
    modulus: np.ndarray
    phase: np.ndarray


def bn_quarter_boundary(config: IntervalConfig, x, diffs=None, delta: float | None = None) -> QuarterPower:
    """Upper-shore value of B_n^{1/4} = ((z-a1)/(z-a2)^{(-1)^n})^{1/4} B~_n(z) at interior x."""
    c = _base(config)
    x = np.asarray(x, dtype=float)
    if delta is None:
        delta = 1e-3 * c.length
    if diffs is None:
        from .geometry import interior_distance
        if np.any(interior_distance(c, x) <= delta) or np.any((x <= c.a1) | (x >= c.a2)):
            from .gfunction import ExclusionZoneError
            raise ExclusionZoneError("exclusion zone")
    v = gamma_factor(c, x, shore=1, diffs=diffs)
    return QuarterPower(np.abs(v), np.angle(v))


class ModelSolution:
    """Psi(z) = S(z) ((z-a1)/(z-a2)^{(-1)^n})^{sigma1/4} B~_n(z)^{sigma1}.

    S(z) = 1 + sum_j (m_j + i n_j sigma3)(1 + (-1)^j sigma1)/(z - b_j).
    """

    def __init__(self, config: IntervalConfig):
        self.config = config
        self.base = _base(config)
        self.flip = config.first_band != "E"
        self.angles = angles(self.base)
        self.coef = coefficients(self.base)

    def _conj(self, M):
        return SIGMA3 @ M @ SIGMA3 if self.flip else M

    def residues(self, part: str = "full") -> np.ndarray:
        """B_j = (M_j + i N_j)(1 + (-1)^j sigma1), shape (n, 2, 2)."""
        out = []
        for j in range(1, self.base.n + 1):
            mj, nj = self.coef.m[j - 1], self.coef.n_coef[j - 1]
            if part == "hat":
                A = mj * IDENTITY
            elif part == "breve":
                A = nj * SIGMA3
            else:
                A = mj * IDENTITY + 1j * nj * SIGMA3
            out.append(A @ (IDENTITY + (-1) ** j * SIGMA1))
        return np.array(out)

    def S(self, z, part: str = "full"):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape + (2, 2), dtype=complex)
        if part != "breve":
            out[...] = IDENTITY
        for Bj, bj in zip(self.residues(part), self.base.b):
            out = out + Bj / (z - bj)[..., None, None]
        return out

    def _psi_part(self, z, shore, part):
        P = sigma1_power(gamma_factor(self.base, z, shore))
        return self._conj(self.S(z, part) @ P)

    def psi(self, z, shore=None):
        return self._psi_part(z, shore, "full")

    def psi_hat(self, z, shore=None):
        return self._psi_part(z, shore, "hat")

    def psi_breve(self, z, shore=None):
        return self._psi_part(z, shore, "breve")

    def psi_exponential(self, z, shore=None):
        """exp(g~(inf) sigma3) ((z-a1)/(z-a2))^{sigma1/4} exp(-g~(z) sigma3)."""
        c = self.base
        z = np.asarray(z)
        beta = pow_shift(z, c.a1, 0.25, shore) * pow_shift(z, c.a2, -0.25, shore)
        E = exp_tilde_g(c, z, shore)
        left = np.diag([np.exp(1j * self.angles.alpha), np.exp(-1j * self.angles.alpha)])
        right = np.zeros(np.shape(z) + (2, 2), dtype=complex)
        right[..., 0, 0] = 1.0 / E
        right[..., 1, 1] = E
        return self._conj(left @ sigma1_power(beta) @ right)

    def jump(self, x):
        """Expected jump matrix J with Psi_+ = Psi_- J at interior x."""
        from .geometry import chi
        ch = chi(self.config, x)
        return np.where(ch[..., None, None] > 0, -1j * SIGMA1, 1j * SIGMA1)


def nu_x(config: IntervalConfig, x):
    return nu_of(config, x)
