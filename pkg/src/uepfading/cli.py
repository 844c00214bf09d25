"""Command-line front end: sweeps written as CSV, plus the validation suites.

Exit codes: 0 success, 2 usage error, 3 validation failure, 4 grid budget
exceeded.
"""

from __future__ import annotations

import argparse
import io
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__, fbl, ora, oracle, pds, validation
from .bounds import capacity, err_bound, err_exp, err_nor
from .oracle import BudgetExceeded
from .params import PRESETS, aggregate_pairs, importance_vector, is_power_of_two

EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_BUDGET = 4


class UsageError(Exception):
    pass


def _fmt(x) -> str:
    return "%.12g" % x


def write_csv(path, meta, header, rows):
    """# key=value metadata, then header, then rows at 12 significant digits."""
    buf = io.StringIO()
    for k, v in meta:
        buf.write(f"# {k}={v}\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(x) for x in row) + "\n")
    text = buf.getvalue()
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def read_config(path):
    """Flat 'key = value' file; blank lines and # comments are ignored."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            k, v = (s.strip() for s in line.split("=", 1))
            out[k.replace("-", "_")] = v
    return out


def _pmap(fn, items, threads):
    # rows come back in input order whatever the completion order
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


def _importance(args):
    if args.d and args.preset:
        raise UsageError("give either --d or --preset, not both")
    if args.d:
        try:
            raw = [float(s) for s in args.d.split(",")]
        except ValueError:
            raise UsageError(f"--d must be a comma-separated list of numbers, got {args.d!r}")
    else:
        raw = PRESETS[args.preset or "fig2"]
    try:
        return importance_vector(raw)
    except ValueError as exc:
        raise UsageError(f"bad importance vector: {exc}")


def _thetas(args):
    """Theta grid from the sweep flags, or the single point implied by --sigma2."""
    if args.R <= 0:
        raise UsageError("--R must be positive")
    if args.P <= 0:
        raise UsageError("--P must be positive")
    sweep_given = any(v is not None for v in (args.theta_min, args.theta_max, args.theta_step))
    if args.sigma2 is not None:
        if sweep_given:
            raise UsageError("give either --sigma2 or a theta sweep, not both")
        if args.sigma2 <= 0:
            raise UsageError("--sigma2 must be positive")
        return np.array([(2.0**args.R - 1.0) / (args.P * args.sigma2)])
    lo = 0.01 if args.theta_min is None else args.theta_min
    hi = 0.99 if args.theta_max is None else args.theta_max
    step = 0.01 if args.theta_step is None else args.theta_step
    if not (0 < lo <= hi) or step <= 0:
        raise UsageError("need 0 < theta-min <= theta-max and theta-step > 0")
    count = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(count)


def _quad(args):
    try:
        return fbl.parse_quad(args.quad)
    except ValueError as exc:
        raise UsageError(str(exc))


def _channel_meta(args, thetas):
    meta = [("R", _fmt(args.R)), ("P", _fmt(args.P))]
    if args.sigma2 is not None:
        meta += [("sigma2", _fmt(args.sigma2)), ("theta", _fmt(thetas[0]))]
    else:
        meta += [
            ("theta_min", _fmt(thetas[0])),
            ("theta_max", _fmt(thetas[-1])),
            ("theta_count", len(thetas)),
            ("sigma2", "(2^R-1)/(P*theta)"),
        ]
    return meta


def cmd_error_bounds(args):
    if args.n <= 0 or args.rho <= 0 or args.points < 1:
        raise UsageError("need --n > 0, --rho > 0 and --points >= 1")
    f = np.arange(1, args.points + 1) / args.points
    R = f * capacity(args.rho)
    rows = zip(f, R, err_exp(args.n, R, args.rho), err_nor(args.n, R, args.rho), err_bound(args.n, R, args.rho))
    meta = [("command", "error-bounds"), ("n", _fmt(args.n)), ("rho", _fmt(args.rho)), ("version", __version__)]
    write_csv(args.out, meta, ["f", "R", "err_exp", "err_nor", "err_bound"], rows)


def _solvers(args):
    if args.algorithm == "global":
        return pds.algorithm1_global, ora.algorithm3_global
    return pds.algorithm2_local, ora.algorithm4_local


def cmd_asym(args):
    d = _importance(args)
    thetas = _thetas(args)
    K = d.size
    solve_p, solve_o = _solvers(args)
    do_p = args.scheme in ("pds", "both")
    do_o = args.scheme in ("ora", "both")

    def row(th):
        out = [th]
        if do_p:
            sp = solve_p(th, args.R, d)
            out += [sp.objective, *pds.mb_inverse(sp.split, args.R)]
        if do_o:
            so = solve_o(th, args.R, d)
            out += [so.objective, *so.split]
        if do_p and do_o:
            out.append(100.0 * out[K + 2] / out[1])
        return out

    header = ["theta"]
    if do_p:
        header += ["N2"] + [f"alpha_{i}" for i in range(1, K + 1)]
    if do_o:
        header += ["N4"] + [f"v_{i}" for i in range(1, K + 1)]
    if do_p and do_o:
        header.append("ratio_pct")
    meta = [("command", "asym"), ("scheme", args.scheme), ("algorithm", args.algorithm)]
    meta += _channel_meta(args, thetas)
    meta += [("d", ",".join(_fmt(x) for x in d)), ("version", __version__)]
    write_csv(args.out, meta, header, _pmap(row, list(thetas), args.threads))


def cmd_fbl(args):
    d = _importance(args)
    thetas = _thetas(args)
    spec = _quad(args)
    if args.n < 1:
        raise UsageError("--n must be a positive integer")

    def row(th):
        n2 = pds.algorithm2_local(th, args.R, d).objective
        n4 = ora.algorithm4_local(th, args.R, d).objective
        _, n5 = fbl.n5(th, args.R, d, args.n, args.P, spec)
        _, n6 = fbl.n6(th, args.R, d, args.n, args.P, spec)
        return [th, n5, n6, n2, n4, 100.0 * n5 / n2, 100.0 * n6 / n4, 100.0 * n6 / n5]

    header = ["theta", "N5", "N6", "N2", "N4", "pct_fbl_vs_asym_pds", "pct_fbl_vs_asym_ora", "pct_ora_vs_pds_fbl"]
    meta = [("command", "fbl"), ("n", args.n), ("quad", str(spec))]
    meta += _channel_meta(args, thetas)
    meta += [("d", ",".join(_fmt(x) for x in d)), ("version", __version__)]
    write_csv(args.out, meta, header, _pmap(row, list(thetas), args.threads))


def cmd_partition(args):
    d = _importance(args) if (args.d or args.preset) else PRESETS["fig9"]
    K = d.size
    if not is_power_of_two(K):
        raise UsageError(f"partition needs K a power of two, got K={K}")
    if not (0 < args.sigma2_min <= args.sigma2_max) or args.sigma2_step <= 0:
        raise UsageError("need 0 < sigma2-min <= sigma2-max and sigma2-step > 0")
    count = int(np.floor((args.sigma2_max - args.sigma2_min) / args.sigma2_step + 1e-9)) + 1
    sigma2s = args.sigma2_min + args.sigma2_step * np.arange(count)
    levels = []
    k, times = K, 0
    while k >= 1:
        levels.append((k, args.R * 2**times, aggregate_pairs(d, times)))
        k //= 2
        times += 1
    spec = _quad(args)
    _, solve_o = _solvers(args)

    def row(s2):
        out = [s2]
        for _, R, dk in levels:
            out.append(solve_o((2.0**R - 1.0) / (args.P * s2), R, dk).objective)
        if args.n:
            for _, R, dk in levels:
                out.append(fbl.n6((2.0**R - 1.0) / (args.P * s2), R, dk, args.n, args.P, spec)[1])
        return out

    def label(name, k, R):
        mult = round(R / args.R)
        return f"{name}_at_K{k}_{'' if mult == 1 else mult}R"

    header = ["sigma2"] + [label("N4", k, R) for k, R, _ in levels]
    if args.n:
        header += [label("N6", k, R) for k, R, _ in levels]
    meta = [("command", "partition"), ("R", _fmt(args.R)), ("P", _fmt(args.P))]
    if args.n:
        meta += [("n", args.n), ("quad", str(spec))]
    meta += [("d", ",".join(_fmt(x) for x in d)), ("version", __version__)]
    write_csv(args.out, meta, header, _pmap(row, list(sigma2s), args.threads))


def cmd_validate(args):
    if args.inject_lambda_tol < 0:
        raise UsageError("--inject-lambda-tol must be nonnegative")
    failed = []
    for res in validation.run_all(
        quick=args.quick, lam_tol=args.inject_lambda_tol, only=args.suite, budget=args.grid_budget
    ):
        status = "PASS" if res.ok else "FAIL"
        print(f"{status} {res.name}: {res.detail} ({res.seconds:.1f} s)", flush=True)
        if not res.ok:
            failed.append(res.name)
    if failed:
        print("failing suites: " + ", ".join(failed))
        return EXIT_VALIDATION
    print("all suites passed")
    return 0


def _common(p, sweep=True):
    p.add_argument("--R", type=float, default=0.1, help="rate per block, bits per channel use")
    p.add_argument("--P", type=float, default=1.0, help="power budget")
    p.add_argument("--d", help="importance weights, comma separated")
    p.add_argument("--preset", choices=sorted(PRESETS), help="named importance vector")
    p.add_argument("--n", type=int, default=0, help="blocklength")
    p.add_argument("--quad", default="panel", help="panel[:N], gl:ORDER or mc:SAMPLES:SEED")
    p.add_argument("--algorithm", choices=("local", "global"), default="local")
    if sweep:
        p.add_argument("--sigma2", type=float, help="mean channel gain; fixes a single theta")
        p.add_argument("--theta-min", type=float)
        p.add_argument("--theta-max", type=float)
        p.add_argument("--theta-step", type=float)


def build_parser():
    top = argparse.ArgumentParser(prog="uepfading", description=__doc__.splitlines()[0])
    top.add_argument("--version", action="version", version=__version__)
    base = argparse.ArgumentParser(add_help=False)
    base.add_argument("--config", help="flat key = value file; command-line flags win")
    base.add_argument("--out", default="-", help="output CSV path (default stdout)")
    base.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    base.add_argument("--quick", action="store_true", help="reduced grids")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("error-bounds", parents=[base], help="finite-blocklength bounds versus rate")
    p.add_argument("--n", type=float, default=10000.0)
    p.add_argument("--rho", type=float, default=3.0)
    p.add_argument("--points", type=int, default=100)
    p.set_defaults(func=cmd_error_bounds)

    p = sub.add_parser("asym", parents=[base], help="asymptotic optima over a theta sweep")
    _common(p)
    p.add_argument("--scheme", choices=("pds", "ora", "both"), default="both")
    p.set_defaults(func=cmd_asym)

    p = sub.add_parser("fbl", parents=[base], help="finite-blocklength N5/N6 over a theta sweep")
    _common(p)
    p.set_defaults(func=cmd_fbl, n=1000)

    p = sub.add_parser("partition", parents=[base], help="pairwise-aggregation experiment")
    _common(p, sweep=False)
    p.add_argument("--sigma2-min", type=float, default=0.5)
    p.add_argument("--sigma2-max", type=float, default=20.0)
    p.add_argument("--sigma2-step", type=float, default=0.5)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("validate", parents=[base], help="run the cross-check suites")
    p.add_argument("--suite", action="append", choices=sorted(validation.SUITES))
    p.add_argument("--inject-lambda-tol", type=float, default=0.0, help="loosen the multiplier search (fault injection)")
    p.add_argument("--grid-budget", type=int, default=oracle.DEFAULT_BUDGET, help="max oracle grid points")
    p.set_defaults(func=cmd_validate)
    return top


def _apply_config(parser, argv):
    args = parser.parse_args(argv)
    if not args.config:
        return args
    try:
        cfg = read_config(args.config)
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}")
    known = vars(args)
    unknown = sorted(set(cfg) - set(known))
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(unknown)}")
    # re-parse with config values prepended so explicit flags override them
    pre = []
    for k, v in cfg.items():
        flag = "--" + k.replace("_", "-")
        if isinstance(known[k], bool):
            if v.lower() in ("1", "true", "yes"):
                pre.append(flag)
        else:
            pre += [flag, v]
    argv = list(sys.argv[1:] if argv is None else argv)
    return parser.parse_args(argv[:1] + pre + argv[1:])


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        rc = args.func(args)
        return rc or 0
    except UsageError as exc:
        print(f"uepfading: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"uepfading: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except SystemExit as exc:
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
