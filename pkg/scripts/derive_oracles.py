"""Recompute the frozen reference values in tests/data/oracle_values.json.

Everything here is evaluated with mpmath at 40 digits from elementary closed
forms or one-dimensional quadrature, without importing fhtspec, so the frozen
numbers are independent of the package under test.

    python3 scripts/derive_oracles.py [--check]
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import mpmath as mp

mp.mp.dps = 40
OUT = Path(__file__).resolve().parents[1] / "tests" / "data" / "oracle_values.json"


def symmetric_case():
    x = mp.mpf("0.5")
    lam = mp.mpf("0.02")
    # Im g(x+) = (1/pi) arccosh(1/x) on (0, 1), i.e. ln(2 + sqrt 3)/pi at x = 1/2
    g_im = mp.acosh(1 / x) / mp.pi
    g_im_prime = mp.diff(lambda t: mp.acosh(1 / t) / mp.pi, x)
    kappa = mp.log(2 / lam)
    # B_1 = (z + 1)(z - 1)/z^2; A_1 = (sqrt2/pi) |B_1|^{-1/4} C v with C = 1/sqrt2, v = 1/x
    B = abs((x + 1) * (x - 1) / x ** 2)
    A1 = mp.sqrt(2) / mp.pi * B ** mp.mpf("-0.25") / mp.sqrt(2) / x
    G1 = A1 * mp.cos(kappa * g_im - mp.pi / 4)
    index = mp.exp(kappa / abs(g_im_prime))
    return {
        "g_im_half": g_im,
        "g_im_prime_half": g_im_prime,
        "bn_quarter_modulus_half": B ** mp.mpf("0.25"),
        "A1_half": A1,
        "kappa_0.02": kappa,
        "G1_half_0.02": G1,
        "illposedness_half_0.02": index,
        "wavenumber_half_0.02": kappa * abs(g_im_prime),
        "M11": mp.mpf(1) / 2,
        "C11": 1 / mp.sqrt(2),
        "tilde_D1": mp.cos(mp.pi / 4) * mp.sin(mp.pi / 4) / mp.sin(mp.pi / 2),
        "fht_one_on_E_at_half": (mp.log(mp.mpf(3) / 2) - mp.log(mp.mpf(1) / 2)) / mp.pi,
        "phi_plus_zero_kappa": (mp.pi / 4) / g_im,
    }


def gapped_omega():
    """E = [-2, -1], J = [1, 2]: vanishing zeroth moment gives Omega = 2 I_band / I_gap."""
    band = mp.quad(lambda t: 1 / mp.sqrt((4 - t ** 2) * (t ** 2 - 1)), [1, 2])
    gap = mp.quad(lambda t: 1 / mp.sqrt((4 - t ** 2) * (1 - t ** 2)), [-1, 1])
    return {"omega_E-2-1_J12": 2 * band / gap}


def small_cases():
    return {
        "nu_a01_b075": mp.asin(mp.sqrt(mp.mpf(1) / 4)),
        "nu_a01_b025": mp.asin(mp.sqrt(mp.mpf(3) / 4)),
        "cosecant_det_pi6_pi3": mp.csc(mp.pi / 3) ** 2 - mp.csc(mp.pi / 2) ** 2,
        "tilde_Bn_n2_z2": mp.mpf("2.5") ** mp.mpf("-0.5") * mp.mpf("1.5") ** mp.mpf("0.5"),
        "radical_z2": mp.sqrt(3),
    }


def derive():
    vals = {}
    for part in (symmetric_case(), gapped_omega(), small_cases()):
        vals.update({k: float(v) for k, v in part.items()})
    return vals


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--check", action="store_true", help="compare against the frozen file instead of writing")
    args = p.parse_args(argv)
    vals = derive()
    if args.check:
        frozen = json.loads(OUT.read_text())
        bad = [k for k in vals if k not in frozen or abs(frozen[k] - vals[k]) > 1e-15 * max(1, abs(vals[k]))]
        print("mismatch: %s" % bad if bad else "frozen values reproduced")
        return 1 if bad else 0
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(vals, indent=2, sort_keys=True) + "\n")
    for k, v in sorted(vals.items()):
        print("%-28s %.17g" % (k, v))
    return 0


if __name__ == "__main__":
    sys.exit(main())
