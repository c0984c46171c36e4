"""Local wavenumber of oracle singular functions against kappa |g_im'(x0)|.

    python3 scripts/wavenumber_study.py [--x0 0.5] [--sigmas 0.3,0.1,0.02,1e-3]

Uses zero crossings where the window holds enough of them and the envelope-
normalized phase otherwise (n = 1 only). kappa is taken both from the nominal
sigma and from the singular value actually selected.
"""

import argparse
import json

import numpy as np

from fhtspec import GEvaluator, kappa_of, symmetric_config, validate_config
from fhtspec.oracle import build_discrete, singular_vector_wavenumber, svd_spectrum


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--config")
    p.add_argument("--x0", type=float, default=0.5)
    p.add_argument("--sigmas", default="0.3,0.1,0.02,1e-3,1e-5")
    p.add_argument("--half-widths", default="0.075,0.1,0.125")
    p.add_argument("--nodes", default="256,512", help="nodes per band")
    args = p.parse_args()
    c = validate_config(json.load(open(args.config))) if args.config else symmetric_config()
    gp = abs(float(GEvaluator(c).g_im_prime(np.array([args.x0]))[0]))
    print("x0 = %g, |g_im'(x0)| = %.6f" % (args.x0, gp))
    print("%6s %8s %10s %6s %8s %10s %10s %10s" % ("nodes", "sigma", "actual", "hw", "method", "k", "k_nominal", "k_actual"))
    for m in (int(v) for v in args.nodes.split(",")):
        op = build_discrete(c, m)
        rep = svd_spectrum(op, vectors=True, eig_check=False)
        for s in (float(v) for v in args.sigmas.split(",")):
            for hw in (float(v) for v in args.half_widths.split(",")):
                try:
                    w = singular_vector_wavenumber(c, s, args.x0, hw, op=op, rep=rep)
                except ValueError as exc:
                    print("%6d %8.0e %10s %6.3f  %s" % (m, s, "-", hw, exc))
                    continue
                print("%6d %8.0e %10.3e %6.3f %8s %10.4f %10.4f %10.4f"
                      % (m, s, w["sigma"], hw, w["method"], w["k"], kappa_of(s) * gp, kappa_of(w["sigma"]) * gp))


if __name__ == "__main__":
    main()
