"""The block matrix M = diag(M1, M2) and its upper Cholesky factor.

M1 collects the odd-indexed double points b_1, b_3, ... and M2 the even ones.
Three constructions are provided (defining sums, factored form, closed-form
diagonal) so they can be checked against each other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import IntervalConfig, angles
from .model import ModelCoefficients, coefficients


class NotPositiveDefinite(np.linalg.LinAlgError):
    def __init__(self, pivot_index: int, pivot_value: float):
        self.pivot_index = pivot_index
        self.pivot_value = pivot_value
        super().__init__(f"not positive definite: pivot {pivot_index} = {pivot_value:.3e}")


@dataclass(frozen=True)
class MMatrix:
    block1: np.ndarray  # N~ x N~, odd-indexed doubles
    block2: np.ndarray  # N x N, even-indexed doubles

    @property
    def full(self) -> np.ndarray:
        n1, n2 = self.block1.shape[0], self.block2.shape[0]
        out = np.zeros((n1 + n2, n1 + n2))
        out[:n1, :n1] = self.block1
        out[n1:, n1:] = self.block2
        return out

    def blocks(self):
        return [b for b in (self.block1, self.block2) if b.size]


def _split(n: int):
    return np.arange(0, n, 2), np.arange(1, n, 2)


def _setup(config: IntervalConfig, coef: ModelCoefficients | None):
    c = config if config.first_band == "E" else config.relabeled()
    ang = angles(c)
    return c, ang.nu, ang.alpha, (coef or coefficients(c)).k


def build_sums(config: IntervalConfig, coef: ModelCoefficients | None = None) -> MMatrix:
    c, nu, alpha, k = _setup(config, coef)
    b = c.b

    def block(idx, first):
        m = len(idx)
        M = np.zeros((m, m))
        for p, l in enumerate(idx):
            base = k[l] * np.cos(nu[l] - alpha) if first else k[l] * np.sin(nu[l] + alpha)
            M[p, p] = base - 2 * k[l] * sum(k[j] * np.sin(nu[l] - nu[j]) / (b[j] - b[l])
                                            for j in idx if j != l)
            for q, j in enumerate(idx):
                if q != p:
                    M[q, p] = 2 * k[j] * k[l] * np.sin(nu[j] - nu[l]) / (b[l] - b[j])
        return M

    odd, even = _split(c.n)
    return MMatrix(block(odd, True), block(even, False))


def cosecant_matrix(theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    return 1.0 / np.sin(theta[:, None] + theta[None, :])


def _factored_parts(config, coef):
    c, nu, alpha, k = _setup(config, coef)
    L = c.length
    odd, even = _split(c.n)
    parts = []
    for idx, first in ((odd, True), (even, False)):
        kk = k[idx]
        C = cosecant_matrix(nu[idx])
        trig = np.cos(alpha - nu[idx]) if first else np.sin(alpha + nu[idx])
        D = trig - (2.0 / L) * (C @ kk)
        parts.append((kk, C, D))
    return parts, L


def build_factored(config: IntervalConfig, coef: ModelCoefficients | None = None) -> MMatrix:
    """M1 = K~ D~ + 2 K~ C~ K~/(a2 - a1), and likewise M2 = K D + 2 K C K/(a2 - a1)."""
    parts, L = _factored_parts(config, coef)
    blocks = [np.diag(kk * D) + 2.0 * np.outer(kk, kk) * C / L for kk, C, D in parts]
    return MMatrix(*blocks)


def build_closed_diag(config: IntervalConfig, coef: ModelCoefficients | None = None) -> MMatrix:
    """Factored assembly with the product formulas substituted for D~ and D."""
    parts, L = _factored_parts(config, coef)
    blocks = [np.diag(kk * D) + 2.0 * np.outer(kk, kk) * C / L
              for (kk, C, _), D in zip(parts, diag_closed(config))]
    return MMatrix(*blocks)


def diag_sum(config: IntervalConfig, coef: ModelCoefficients | None = None):
    """D~ and D from their defining sums."""
    parts, _ = _factored_parts(config, coef)
    return parts[0][2], parts[1][2]


def diag_closed(config: IntervalConfig):
    """Product formulas for D~_m and D_m."""
    c = config if config.first_band == "E" else config.relabeled()
    nu = angles(c).nu
    n = c.n
    odd, even = _split(n)
    nuo, nue = nu[odd], nu[even]
    Dt = np.array([np.cos(v) * np.sin(v) ** ((1 - (-1) ** n) / 2)
                   * np.prod(np.sin(v + nue)) / np.prod(np.sin(v + nuo)) for v in nuo])
    D = np.array([np.sin(v) ** ((1 + (-1) ** n) / 2)
                  * np.prod(np.sin(v + nuo)) / np.prod(np.sin(v + nue)) for v in nue])
    return Dt, D


class DegenerateAngles(ValueError):
    pass


def cosecant_det(theta, method: str = "product") -> float:
    """det[csc(theta_i + theta_j)] by elimination or by the Cauchy-type product."""
    theta = np.asarray(theta, dtype=float)
    if np.any((theta <= 0) | (theta >= np.pi / 2)):
        raise ValueError("angles must lie in (0, pi/2)")
    if len(np.unique(theta)) < len(theta):
        raise DegenerateAngles("coincident angles: determinant vanishes")
    if method == "elimination":
        A = cosecant_matrix(theta)
        det = 1.0
        A = A.copy()
        for i in range(len(theta)):
            det *= A[i, i]
            A[i + 1:, i:] -= np.outer(A[i + 1:, i] / A[i, i], A[i, i:])
        return float(det)
    if method != "product":
        raise ValueError("method must be 'product' or 'elimination'")
    xi = np.exp(2j * theta)
    iu = np.triu_indices(len(theta), 1)
    num = np.prod(np.abs(xi[iu[0]] - xi[iu[1]]) ** 2)
    den = np.prod(np.sin(2 * theta)) * np.prod(np.abs(np.conj(xi[iu[0]]) - xi[iu[1]]) ** 2)
    return float(num / den)


def upper_cholesky(M) -> np.ndarray:
    """Upper triangular C with positive diagonal and C^T C = M, without pivoting."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("square matrix required")
    if not np.allclose(M, M.T, rtol=1e-12, atol=1e-14 * max(1.0, np.abs(M).max(initial=0.0))):
        raise ValueError("matrix is not symmetric")
    m = M.shape[0]
    C = np.zeros_like(M)
    for i in range(m):
        piv = M[i, i] - C[:i, i] @ C[:i, i]
        if not piv > 0:
            raise NotPositiveDefinite(i, float(piv))
        C[i, i] = np.sqrt(piv)
        C[i, i + 1:] = (M[i, i + 1:] - C[:i, i] @ C[:i, i + 1:]) / C[i, i]
    return C


@dataclass(frozen=True)
class CholeskyFactor:
    minus: np.ndarray  # factor of M1 (odd doubles)
    plus: np.ndarray   # factor of M2 (even doubles)

    @property
    def full(self) -> np.ndarray:
        return MMatrix(self.minus, self.plus).full


def cholesky(M: MMatrix) -> CholeskyFactor:
    return CholeskyFactor(*(upper_cholesky(b) if b.size else np.zeros((0, 0))
                            for b in (M.block1, M.block2)))


def m_matrix(config: IntervalConfig) -> MMatrix:
    return build_sums(config)
