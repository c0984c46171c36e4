"""Oracle spectrum of the discretized operator: node refinement and the log cutoff.

    python3 scripts/spectrum_convergence.py [--config FILE] [--nodes 64,128,256,512]

Two tables. The first refines the node count at the default cutoff delta_h and
shows sigma_max, the leading singular values and the dyadic bin counts. The
second holds the nodes fixed and shrinks delta_h: sigma_max climbs toward 1
roughly like 1 - c/log(1/delta_h), since the norm is carried by the logarithmic
pile-up of singular values near the double points.
"""

import argparse
import json
import time

from fhtspec import symmetric_config, validate_config
from fhtspec.oracle import build_discrete, svd_spectrum


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--config")
    p.add_argument("--nodes", default="64,128,256,512", help="nodes per band")
    p.add_argument("--cutoffs", default="1e-3,1e-4,1e-6,1e-8,1e-12,1e-16", help="delta_h values, relative to the length")
    args = p.parse_args()
    c = validate_config(json.load(open(args.config))) if args.config else symmetric_config()

    print("node refinement at the default cutoff")
    print("%6s %10s %9s  %-40s %s" % ("nodes", "sigma_max", "time[s]", "sigma_1..4", "bins 0..11"))
    for m in (int(v) for v in args.nodes.split(",")):
        t = time.perf_counter()
        rep = svd_spectrum(build_discrete(c, m))
        dt = time.perf_counter() - t
        s = " ".join("%.5f" % v for v in rep.singular_values[1:5])
        print("%6d %10.6f %9.2f  %-40s %s" % (m, rep.sigma_max, dt, s, [rep.bins[k] for k in sorted(rep.bins)]))

    m = int(args.nodes.split(",")[-1])
    print("\ncutoff study at %d nodes per band" % m)
    print("%10s %10s %12s" % ("delta_h", "sigma_max", "1-sigma_max"))
    for d in (float(v) for v in args.cutoffs.split(",")):
        rep = svd_spectrum(build_discrete(c, m, delta_h=d * c.length), eig_check=False)
        print("%10.0e %10.6f %12.4e" % (d, rep.sigma_max, 1 - rep.sigma_max))


if __name__ == "__main__":
    main()
