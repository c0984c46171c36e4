"""Shore-aware powers and logarithms with explicitly placed cuts.

Every multivalued factor used in the package has the form (z - c)**p with the
cut along (-inf, c) and arg(z - c) = 0 on (c, inf). Real arguments sitting on
a cut need an explicit shore (+1 upper, -1 lower); nothing here relies on
signed zeros.
"""

from __future__ import annotations

import numpy as np


class BranchPointError(ValueError):
    pass


def log_shift(z, c, shore=None, diff=None):
    """log(z - c) with the cut on (-inf, c), elementwise.

    Entries with nonzero imaginary part use the principal logarithm. Real
    entries left of c need ``shore``. ``diff`` may carry an exactly known
    real z - c, which keeps offsets far below eps*|c| meaningful.
    """
    if shore not in (None, 1, -1):
        raise ValueError("shore must be +1, -1 or None")
    z = np.asarray(z)
    d = (z - c).astype(complex) if diff is None else np.asarray(diff, dtype=complex)
    on_axis = d.imag == 0
    if np.any(on_axis & (d.real == 0)):
        raise BranchPointError("branch point")
    cut = on_axis & (d.real < 0)
    if np.any(cut) and shore is None:
        raise BranchPointError("argument on a cut needs a shore")
    out = np.log(np.where(cut, 1.0, d))
    if np.any(cut):
        out = np.where(cut, np.log(np.abs(d.real)) + 1j * np.pi * shore, out)
    return out


def pow_shift(z, c, p, shore=None, diff=None):
    """(z - c)**p with the cut on (-inf, c)."""
    return np.exp(p * log_shift(z, c, shore, diff))


def sigma1_power(beta):
    """beta**sigma1 = cosh(log beta) 1 + sinh(log beta) sigma1, for scalar or array beta.

    Returns an array of shape beta.shape + (2, 2). Any branch of log beta gives
    the same result.
    """
    L = np.log(np.asarray(beta, dtype=complex))
    ch, sh = np.cosh(L), np.sinh(L)
    out = np.empty(L.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = ch
    out[..., 1, 1] = ch
    out[..., 0, 1] = sh
    out[..., 1, 0] = sh
    return out


SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)


def sigma3_exp(a):
    """exp(a sigma3) for scalar or array a."""
    a = np.asarray(a, dtype=complex)
    out = np.zeros(a.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = np.exp(a)
    out[..., 1, 1] = np.exp(-a)
    return out
