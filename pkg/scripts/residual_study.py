"""Eigenfunction residual of the leading-order kernels as lambda shrinks.

    python3 scripts/residual_study.py [--config FILE] [--window 0.3,0.7]

For each lambda prints r_j, kappa, r_j * kappa and the successive ratio
r(lambda/10)/r(lambda) next to kappa/(kappa + ln 10). An O(1/kappa) residual
shows up as a flat r * kappa column; the first rows are pre-asymptotic.
"""

import argparse
import json

import numpy as np

from fhtspec import symmetric_config, validate_config
from fhtspec.cli import default_window
from fhtspec.oracle import eigen_residual


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--config")
    p.add_argument("--window")
    p.add_argument("--lambdas", default="1e-2,1e-3,1e-4,1e-5,1e-6")
    args = p.parse_args()
    c = validate_config(json.load(open(args.config))) if args.config else symmetric_config()
    win = [float(v) for v in args.window.split(",")] if args.window else default_window(c)
    lams = [float(v) for v in args.lambdas.split(",")]
    print("window [%g, %g]" % tuple(win))
    print("%8s %8s %4s %11s %9s %9s %9s %9s" % ("lambda", "kappa", "j", "r", "r*kappa", "ratio", "target", "control"))
    prev = None
    for lam in lams:
        rep = eigen_residual(c, lam, win)
        for j, r in enumerate(rep.residuals, 1):
            ratio = target = float("nan")
            if prev is not None:
                ratio = r / prev[1][j - 1]
                target = prev[0] / (prev[0] + np.log(10))
            print("%8.0e %8.4f %4d %11.4e %9.4f %9.4f %9.4f %9.2f"
                  % (lam, rep.kappa, j, r, r * rep.kappa, ratio, target, rep.control))
        prev = (rep.kappa, rep.residuals)


if __name__ == "__main__":
    main()
