"""Symmetric model with E = [-a, 0], J = [0, a] and no gap.

This is deliberately independent of the generic model module so that each can
serve as a check on the other.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import warnings

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .branches import IDENTITY, SIGMA1, SIGMA2, SIGMA3, BranchPointError, pow_shift, sigma1_power

B_MATRIX = SIGMA3 - 1j * SIGMA2


class Branch(str, Enum):
    UPPER = "upper"  # Im kappa >= 0
    LOWER = "lower"  # Im kappa <= 0


@dataclass(frozen=True)
class SymmetricModel:
    a: float = 1.0
    branch: Branch = Branch.UPPER

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("half-width must be positive")
        object.__setattr__(self, "branch", Branch(self.branch))

    @property
    def sign(self) -> int:
        return 1 if self.branch == Branch.UPPER else -1

    def R2(self, z, shore=None):
        """sqrt(z^2 - a^2) ~ z at infinity, cut on [-a, a]."""
        return pow_shift(z, self.a, 0.5, shore) * pow_shift(z, -self.a, 0.5, shore)

    def g4(self, z, shore=None):
        z = np.asarray(z, dtype=complex)
        if np.any(z == 0):
            raise BranchPointError("z = 0 is the double point")
        w = (self.a + 1j * self.R2(z, shore)) / z
        L = np.log(w)
        if shore is not None:
            # on (-a, 0) the ratio is negative and approached from above on both shores
            on = (z.imag == 0) & (z.real < 0) & (z.real > -self.a)
            L = np.where(on, np.log(np.abs(w)) + 1j * np.pi, L)
        return L / (1j * np.pi) - 0.5

    def tilde_g4(self, z, epsabs: float = 1e-14):
        """R2(z)/(2 pi i) int_0^a (i pi s) dzeta / ((zeta - z) R2_+(zeta)), with s = +-1 by branch.

        With zeta = a sin(theta), R2_+ = i a cos(theta), the integral becomes
        int_0^{pi/2} dtheta / (i (a sin(theta) - z)); evaluated with adaptive quadrature.
        """
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        if np.any(z.imag == 0):
            raise BranchPointError("tilde_g4 needs Im z != 0")
        out = np.empty(z.shape, dtype=complex)
        for i, zi in np.ndenumerate(z):
            def f(th, part):
                v = 1.0 / (1j * (self.a * np.sin(th) - zi))
                return v.real if part == 0 else v.imag
            pts = None
            if 0 < zi.real < self.a:
                pts = [float(np.arcsin(zi.real / self.a))]
            with warnings.catch_warnings():
                # roundoff notices near the cut; accuracy is checked against psi4 instead
                warnings.simplefilter("ignore", IntegrationWarning)
                re = quad(f, 0, np.pi / 2, args=(0,), epsabs=epsabs, epsrel=1e-13, limit=400, points=pts)[0]
                im = quad(f, 0, np.pi / 2, args=(1,), epsabs=epsabs, epsrel=1e-13, limit=400, points=pts)[0]
            out[i] = self.R2(zi) / (2j * np.pi) * (1j * np.pi * self.sign) * (re + 1j * im)
        return out

    def tilde_g4_infinity(self) -> complex:
        return 1j * np.pi / 4 * self.sign

    def _quarter(self, z, shore=None):
        """((z - a)(z + a)/z^2)^{1/4}, tending to 1 at infinity, cut on [-a, a]."""
        return (pow_shift(z, self.a, 0.25, shore) * pow_shift(z, -self.a, 0.25, shore)
                * pow_shift(z, 0.0, -0.5, shore))

    def psi4(self, z, shore=None):
        z = np.asarray(z, dtype=complex)
        if np.any(z == 0):
            raise BranchPointError("z = 0 is the double point")
        left = IDENTITY + (1j * self.a / 2) * B_MATRIX / z[..., None, None]
        out = left @ sigma1_power(self._quarter(z, shore))
        if self.branch == Branch.UPPER:
            out = SIGMA1 @ out @ SIGMA1
        return out

    def phi4(self, z, tilde=None):
        """exp(g4~(inf) s3) ((z + a)/(z - a))^{s1/4} exp(-g4~(z) s3)."""
        z = np.asarray(z, dtype=complex)
        tg = self.tilde_g4(z) if tilde is None else tilde
        beta = pow_shift(z, -self.a, 0.25) * pow_shift(z, self.a, -0.25)
        ginf = self.tilde_g4_infinity()
        left = np.diag([np.exp(ginf), np.exp(-ginf)])
        right = np.zeros(z.shape + (2, 2), dtype=complex)
        right[..., 0, 0] = np.exp(-tg)
        right[..., 1, 1] = np.exp(tg)
        return left @ sigma1_power(beta) @ right

    def residue_at_infinity(self) -> np.ndarray:
        res = (1j * self.a / 2) * B_MATRIX
        return SIGMA1 @ res @ SIGMA1 if self.branch == Branch.UPPER else res


def sigma1_identity_gap(M: complex, N: complex, a: complex) -> float:
    """Max entry difference between the two sides of
    M^{s1} e^{a s3} N^{s1} = (MN)^{s1} cosh a + s3 (N/M)^{s1} sinh a."""
    lhs = sigma1_power(M) @ np.diag([np.exp(a), np.exp(-a)]) @ sigma1_power(N)
    rhs = sigma1_power(M * N) * np.cosh(a) + SIGMA3 @ sigma1_power(N / M) * np.sinh(a)
    return float(np.max(np.abs(lhs - rhs)))
