"""Command-line front end.

    becbell derive   [CONFIG]
    becbell point    [CONFIG] [--tol TOL]
    becbell sweep    [CONFIG] [--preset figN] [--points N] [--workers N] [--out DIR]
    becbell validate [--tol TOL] [--quick]

CONFIG is a YAML file path or ``-`` for stdin; omitted means the reference
parameter set. Exit codes: 0 success, 1 configuration error, 2 physics
error (instability, degenerate measurement, failed oracle suite),
3 numerical-convergence failure.
"""

import argparse
import json
import logging
import os
import sys
import time

from .config import config_to_dict, load_config, sweep_spec
from .csvio import sweep_csv
from .errors import BecBellError, ConfigError
from .node import build_linear_model, derive_node, is_stable
from .pipeline import run_point
from .sweep import run_sweep
from .validation import run_all

log = logging.getLogger("becbell")

EXIT_OK, EXIT_CONFIG, EXIT_PHYSICS, EXIT_NUMERICAL = 0, 1, 2, 3


def _read_config(path):
    if path is None:
        return load_config("", "<defaults>")
    if path == "-":
        return load_config(sys.stdin.read(), "<stdin>")
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config ({exc.strerror})") from None
    return load_config(text, path)


def _emit(text, out, name):
    if out is None:
        sys.stdout.write(text)
        return None
    os.makedirs(out, exist_ok=True)
    target = os.path.join(out, name)
    with open(target, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return target


def cmd_derive(args):
    cfg, _ = _read_config(args.config)
    code = EXIT_OK
    lines = []
    for label, params in (("node_a", cfg.node_a), ("node_b", cfg.node_b)):
        d = derive_node(params)
        stable = is_stable(build_linear_model(d, cfg.convention))
        if not stable:
            code = EXIT_PHYSICS
        lines += [
            f"[{label}]",
            f"kappa      = {d.kappa:.6e} s^-1",
            f"Omega_c    = {d.omega_c:.6e} s^-1",
            f"omega_B    = {d.omega_b:.6e} s^-1  (omega_B/2pi = {d.omega_b / 6.283185307179586:.6e} Hz)",
            f"Delta      = {d.delta:.6e} s^-1",
            f"G          = {d.g:.6e} s^-1",
            f"gamma_c    = {d.gamma_c:.6e} s^-1",
            f"n_c        = {d.n_c:.6e}",
            f"alpha_s    = {d.alpha_s:.6e}",
            f"Q_s        = {d.q_s:.6e}",
            f"P_s        = {d.p_s:.6e}",
        ]
        if d.g_atomic is not None:
            lines.append(f"G_atomic   = {d.g_atomic:.6e} s^-1")
        lines.append(f"stable     = {'true' if stable else 'false'}")
    _emit("\n".join(lines) + "\n", args.out, "derive.txt")
    return code


def cmd_point(args):
    cfg, _ = _read_config(args.config)
    if args.tol is not None:
        cfg = cfg.with_(tol=args.tol)
    res = run_point(cfg).measures
    record = {
        "discord": res.discord,
        "log_negativity": res.log_negativity,
        "s1": res.s1, "s2": res.s2, "s3": res.s3, "s4": res.s4,
        "lambda_plus": res.lambda_plus,
        "lambda_minus": res.lambda_minus,
        "branch": res.branch,
        "eta_minus": res.eta_minus,
    }
    _emit(json.dumps(record, indent=2) + "\n", args.out, "point.json")
    return EXIT_OK


def cmd_sweep(args):
    cfg, sweep = _read_config(args.config)
    if args.tol is not None:
        cfg = cfg.with_(tol=args.tol)
    spec = sweep_spec(cfg, sweep, preset=args.preset, points=args.points)
    t0 = time.perf_counter()
    result = run_sweep(spec, workers=args.workers)
    text = sweep_csv(result, spec, config_to_dict(cfg, spec))
    name = f"{args.preset or (sweep or {}).get('preset') or 'sweep'}.csv"
    target = _emit(text, args.out, name)
    failed = len(result.failures)
    log.info("%d points (%d failed) in %.1f s%s", len(result.points), failed,
             time.perf_counter() - t0, f" -> {target}" if target else "")
    return EXIT_OK


def cmd_validate(args):
    results = run_all(tol=args.tol, fault=args.inject_fault, quick=args.quick)
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_PHYSICS


def build_parser():
    p = argparse.ArgumentParser(prog="becbell", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, tol=True):
        sp.add_argument("config", nargs="?", help="YAML config path, '-' for stdin")
        sp.add_argument("--out", help="output directory (default: stdout)")
        if tol:
            sp.add_argument("--tol", type=float, help="quadrature absolute tolerance")

    sp = sub.add_parser("derive", help="derived node quantities and stability")
    common(sp, tol=False)
    sp.set_defaults(func=cmd_derive)

    sp = sub.add_parser("point", help="discord and negativity at one parameter point")
    common(sp)
    sp.set_defaults(func=cmd_point)

    sp = sub.add_parser("sweep", help="1-D/2-D parameter sweep to CSV")
    common(sp)
    sp.add_argument("--preset", choices=["fig2", "fig3", "fig4", "fig5", "fig6"])
    sp.add_argument("--points", type=int, help="override the point count of every axis")
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("validate", help="run the oracle suites")
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--quick", action="store_true", help="smaller samples")
    sp.add_argument("--inject-fault", choices=["k12_sign"], help=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_validate)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except BecBellError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
