"""Degree of ill-posedness exp(kappa/|g_im'(x)|) across [a1, a2].

    python3 scripts/illposedness_map.py [--config FILE] [--lambdas 1e-2,1e-3] [--out map.csv] [--plot map.png]

Prints, per band segment, the index at the midpoint and its maximum over the
segment trimmed by 5% at each end. The index tends to 1 wherever |g_im'|
blows up, i.e. at double points and outer endpoints, so the worst point sits
inside each band (1/sqrt 2 in the symmetric case). Optionally writes the
table and a plot.
"""

import argparse
import json

import numpy as np

from fhtspec import KernelSet, symmetric_config, validate_config


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--config")
    p.add_argument("--lambdas", default="1e-1,1e-2,2e-2,1e-3")
    p.add_argument("--grid", type=int, default=801)
    p.add_argument("--out")
    p.add_argument("--plot")
    args = p.parse_args()
    c = validate_config(json.load(open(args.config))) if args.config else symmetric_config()
    ks = KernelSet(c)
    lams = [float(v) for v in args.lambdas.split(",")]
    x = np.linspace(c.a1, c.a2, args.grid)[1:-1]
    x = x[np.min(np.abs(x[:, None] - c.breakpoints()), axis=1) > 2 * ks.delta_excl]
    with np.errstate(over="ignore"):
        idx = np.array([ks.illposedness_index(x, lam) for lam in lams])
    for lo, hi, lab in c.segments():
        trim = 0.05 * (hi - lo)
        sel = (x > lo + trim) & (x < hi - trim)
        mid = np.array([0.5 * (lo + hi)])
        print("%s [%g, %g]" % (lab, lo, hi))
        for lam, row in zip(lams, idx):
            with np.errstate(over="ignore"):
                at_mid = float(ks.illposedness_index(mid, lam)[0])
            k = np.argmax(row[sel])
            print("  lambda=%-8g midpoint %.4g, max %.4g at x=%.3f" % (lam, at_mid, row[sel][k], x[sel][k]))
    if args.out:
        np.savetxt(args.out, np.column_stack([x, idx.T]), delimiter=",", fmt="%.17g",
                   header=",".join(["x"] + ["index@%g" % v for v in lams]), comments="")
    if args.plot:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
        fig, ax = plt.subplots(figsize=(7, 4))
        for lam, row in zip(lams, idx):
            ax.semilogy(x, row, label="lambda=%g" % lam)
        for b in c.b:
            ax.axvline(b, color="k", lw=0.5, ls=":")
        ax.set_xlabel("x")
        ax.set_ylabel("exp(kappa/|g_im'|)")
        ax.legend()
        fig.tight_layout()
        fig.savefig(args.plot, dpi=120)


if __name__ == "__main__":
    main()
