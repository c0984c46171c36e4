"""Command-line entry point: ``fhtspec <command> [flags]``."""

from __future__ import annotations

import argparse
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .geometry import ConfigError, IntervalConfig, angles, symmetric_config, validate_config

EXIT_OK, EXIT_INVARIANT, EXIT_CONFIG = 0, 1, 2
COMMANDS = ("validate", "gfun", "matrix", "kernels", "illposed", "svd", "residual", "verify")
DEFAULT_LAMBDA = {"kernels": [1e-2], "illposed": [2e-2], "residual": [1e-2, 1e-3, 1e-4]}


class UsageError(Exception):
    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass
class RunConfig:
    interval: IntervalConfig
    command: str
    grid: int = 101
    lambdas: list[float] = field(default_factory=list)
    nodes: int = 512
    seed: int = 0
    tol: float = 1.0
    out: Path | None = None
    block: dict = field(default_factory=dict)


def _parse_lambdas(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(["--lambda must be a comma-separated list of numbers"]) from None


def build_run_config(args) -> RunConfig:
    raw = None
    if args.config:
        try:
            raw = json.loads(Path(args.config).read_text())
        except OSError as exc:
            raise UsageError(["cannot read config: %s" % exc.strerror]) from None
        except json.JSONDecodeError as exc:
            raise UsageError(["config is not valid JSON (line %d)" % exc.lineno]) from None
    interval = symmetric_config() if raw is None else validate_config(raw)
    block = (raw or {}).get(args.command, {}) or {}
    if not isinstance(block, dict):
        raise UsageError(["block '%s' must be an object" % args.command])

    def pick(flag, key, default):
        return flag if flag is not None else block.get(key, default)

    lams = _parse_lambdas(args.lambda_) if args.lambda_ is not None else \
        [float(v) for v in block.get("lambda", DEFAULT_LAMBDA.get(args.command, [1e-2]))]
    rc = RunConfig(interval, args.command, int(pick(args.grid, "grid", 101)), lams,
                   int(pick(args.nodes, "nodes", 512)), int(pick(args.seed, "seed", 0)),
                   float(pick(args.tol, "tol", 1.0)), Path(args.out) if args.out else None, block)
    errs = []
    if rc.grid < 2:
        errs.append("--grid must be at least 2")
    if not rc.lambdas:
        errs.append("--lambda needs at least one value")
    if any(not (0 < abs(v) <= 1) for v in rc.lambdas):
        errs.append("lambda values must satisfy 0 < |lambda| <= 1")
    if args.command == "residual" and any(abs(v) > 0.05 for v in rc.lambdas):
        errs.append("residual needs 0 < |lambda| <= 0.05")
    if rc.nodes < 32 or rc.nodes % 2:
        errs.append("--nodes must be an even integer >= 32")
    if not rc.tol > 0:
        errs.append("--tol must be positive")
    if errs:
        raise UsageError(errs)
    return rc


# -- emission --------------------------------------------------------------------

def _csv(header, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for r in rows:
        buf.write(",".join("%.17g" % v for v in r) + "\n")
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(rc: RunConfig, name: str, text: str):
    if rc.out is None:
        sys.stdout.write(text)
        return
    rc.out.mkdir(parents=True, exist_ok=True)
    (rc.out / name).write_text(text)
    sys.stdout.write("wrote %s\n" % (rc.out / name))


def _grid(rc: RunConfig, margin: float | None = None) -> np.ndarray:
    c = rc.interval
    lo, hi = rc.block.get("range", [c.a1, c.a2])
    x = np.linspace(float(lo), float(hi), rc.grid)
    margin = 1e-3 * c.length if margin is None else margin
    d = np.min(np.abs(x[:, None] - c.breakpoints()[None, :]), axis=1)
    keep = d > margin * (1 + 1e-12)
    return x[keep & (x > c.a1) & (x < c.a2)]


def _lam_tag(v: float) -> str:
    return "%.6g" % v


# -- commands --------------------------------------------------------------------

def cmd_validate(rc: RunConfig) -> int:
    c = rc.interval
    ang = angles(c)
    report = {
        "config": c.to_record(),
        "n": c.n, "N": c.N, "N_tilde": c.N_tilde,
        "nu": ang.nu.tolist(), "alpha": float(ang.alpha),
        "segments": [[lo, hi, lab] for lo, hi, lab in c.segments()],
    }
    _emit(rc, "validate.json", _json(report))
    return EXIT_OK


def cmd_gfun(rc: RunConfig) -> int:
    from .gfunction import GEvaluator
    ev = GEvaluator(rc.interval)
    x = _grid(rc)
    g = ev.g_boundary(x, 1)
    rows = np.column_stack([x, g.real, g.imag, ev.g_im_prime(x)])
    _emit(rc, "gfun.csv", _csv(["x", "re_g", "im_g", "g_im_prime"], rows))
    return EXIT_OK


def cmd_matrix(rc: RunConfig) -> int:
    from .spectral_matrix import build_sums, cholesky, diag_closed
    from .verification import check_spectral
    M = build_sums(rc.interval)
    C = cholesky(M)
    Dt, D = diag_closed(rc.interval)
    checks = _scaled(check_spectral(rc.interval), rc.tol)
    out = {"M": M.full.tolist(), "C": C.full.tolist(), "D_tilde": Dt.tolist(), "D": D.tolist(),
           "report": [{"id": r.id, "passed": r.passed, "value": r.value, "tol": r.tol} for r in checks]}
    _emit(rc, "matrix.json", _json(out))
    return _finish(checks)


def cmd_kernels(rc: RunConfig) -> int:
    from .kernels import KernelSet
    ks = KernelSet(rc.interval)
    x = _grid(rc, ks.delta_excl)
    cols = [x, *ks.amplitudes(x).T]
    header = ["x"] + ["A_%d" % j for j in range(1, rc.interval.n + 1)]
    for lam in rc.lambdas:
        cols.extend(ks.g_kernels(x, lam).T)
        header += ["G_%d@%s" % (j, _lam_tag(lam)) for j in range(1, rc.interval.n + 1)]
    _emit(rc, "kernels.csv", _csv(header, np.column_stack(cols)))
    return EXIT_OK


def cmd_illposed(rc: RunConfig) -> int:
    from .kernels import KernelSet
    ks = KernelSet(rc.interval)
    x = _grid(rc, ks.delta_excl)
    with np.errstate(over="ignore"):
        cols = [x] + [ks.illposedness_index(x, lam) for lam in rc.lambdas]
    header = ["x"] + ["index@%s" % _lam_tag(v) for v in rc.lambdas]
    _emit(rc, "illposed.csv", _csv(header, np.column_stack(cols)))
    return EXIT_OK


def cmd_svd(rc: RunConfig) -> int:
    from .oracle import build_discrete, svd_spectrum
    rep = svd_spectrum(build_discrete(rc.interval, rc.nodes // 2))
    out = {"nodes": rep.nodes, "sigma_max": rep.sigma_max, "signed_symmetry_gap": rep.symmetric_eig_max_gap,
           "bins": {str(k): v for k, v in rep.bins.items()}}
    if rc.out is not None:
        _emit(rc, "singular_values.csv", _csv(["index", "sigma"], enumerate(rep.singular_values)))
    else:
        out["singular_values"] = rep.singular_values.tolist()
    _emit(rc, "svd.json", _json(out))
    return EXIT_OK


def default_window(config: IntervalConfig):
    lo, hi, _ = max(config.segments("J"), key=lambda s: s[1] - s[0])
    return [lo + 0.3 * (hi - lo), lo + 0.7 * (hi - lo)]


def cmd_residual(rc: RunConfig) -> int:
    from .oracle import eigen_residual
    window = rc.block.get("window") or default_window(rc.interval)
    rows = []
    for lam in rc.lambdas:
        rep = eigen_residual(rc.interval, lam, window, control_seed=rc.seed)
        for j, r in enumerate(rep.residuals, 1):
            rows.append([lam, rep.kappa, j, r, rep.control])
    _emit(rc, "residual.csv", _csv(["lambda", "kappa", "j", "residual", "control"], rows))
    return EXIT_OK


def cmd_verify(rc: RunConfig) -> int:
    from .verification import run_all
    results = run_all(rc.interval, seed=rc.seed, tol_scale=rc.tol)
    _emit(rc, "verify.txt", "".join(r.line() + "\n" for r in results))
    return _finish(results)


def _scaled(results, scale):
    from .verification import CheckResult
    if scale == 1.0:
        return results
    return [CheckResult(r.id, r.value < r.tol * scale if r.tol > 0 else r.passed, r.value, r.tol * scale)
            for r in results]


def _finish(results) -> int:
    failed = [r.id for r in results if not r.passed]
    if failed:
        sys.stderr.write(_json({"status": "invariant_failure", "failed": failed}))
        return EXIT_INVARIANT
    return EXIT_OK


HANDLERS = {name: globals()["cmd_" + name] for name in COMMANDS}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        sys.stderr.write(_json({"status": "usage_error", "errors": [message]}))
        raise SystemExit(EXIT_CONFIG)


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fhtspec", description="Small-lambda spectral tools for the multi-interval finite Hilbert transform.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="JSON interval record; defaults to a=[-1,1], doubles=[0], first_band=E")
    p.add_argument("--out", help="directory for output files (stdout when omitted)")
    p.add_argument("--grid", type=int, default=None, help="grid size for gfun, kernels, illposed")
    p.add_argument("--lambda", dest="lambda_", default=None, help="comma-separated lambda values")
    p.add_argument("--nodes", type=int, default=None, help="total discretization nodes for svd (split evenly)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--tol", type=float, default=None, help="multiplier applied to every check tolerance")
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        rc = build_run_config(args)
    except ConfigError as exc:
        sys.stdout.write(_json({"status": "config_error", "errors": exc.errors}))
        return EXIT_CONFIG
    except UsageError as exc:
        sys.stdout.write(_json({"status": "usage_error", "errors": exc.errors}))
        return EXIT_CONFIG
    try:
        return HANDLERS[rc.command](rc)
    except ValueError as exc:
        # precondition violations surfaced by the numerical modules (windows, exclusion zones)
        sys.stdout.write(_json({"status": "usage_error", "errors": [str(exc)]}))
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
