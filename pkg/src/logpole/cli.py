"""Command-line entry point: ``logpole <command> [options]``.

Exit codes: 0 success, 1 a verification check failed, 2 configuration or
usage error.  Every CSV starts with the resolved configuration as ``#``
comment lines, so a file can be fed back through ``--config``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import verify
from .config import RunConfig, load, parse_levels
from .dynamics import duhamel_check
from .errors import ConfigurationError, DomainError, LogpoleError
from .harness import FAMILIES, quotient_series
from .ladder import build_ladder
from .potential import LevelWindow, PotentialModel, level_index
from .quasimode import QuasiMode

SUITES = (
    "ode", "partition", "fd", "normalization", "support", "two_path", "lemma",
    "decay", "sandwich", "integrability", "holder", "duhamel",
)


class UsageError(LogpoleError):
    pass


# -- config ---------------------------------------------------------------------


def _config_from_args(args):
    cfg = load(args.config) if args.config else RunConfig()
    changes = {}
    for key in ("d", "N", "variant", "epsilon"):
        value = getattr(args, key)
        if value is not None:
            changes[key] = value
    if args.M is not None:
        changes["M"] = args.M if args.M == "auto" else _number(args.M, "M")
    if args.n0 is not None:
        changes["n0"] = args.n0 if args.n0 == "auto" else int(_number(args.n0, "n0"))
    if args.levels is not None:
        changes["levels"] = parse_levels(args.levels)
    if args.out is not None:
        changes["out"] = args.out
    if args.format is not None:
        changes["formats"] = (args.format,)
    return cfg.replace(**changes).resolved()


def _number(text, name):
    try:
        return float(text)
    except ValueError:
        raise ConfigurationError(f"--{name} expects a number or 'auto', got {text!r}") from None


def _model(cfg):
    return PotentialModel(profile=cfg.profile, d=cfg.d, n0=cfg.n0)


def _modes(cfg, model=None, levels=None):
    model = model or _model(cfg)
    modes = []
    for n in levels if levels is not None else cfg.level_range:
        mode = QuasiMode(model, n)
        mode.calibrate_alpha()
        modes.append(mode)
    return modes


# -- output ---------------------------------------------------------------------


def _emit(cfg, name, header, rows, summary=None, stream=None):
    fmt = cfg.formats[0]
    if fmt == "csv":
        buf = io.StringIO()
        buf.write("\n".join(cfg.header_lines()) + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(x) for x in row])
        text = buf.getvalue()
    else:
        payload = {"config": cfg.to_text(), "columns": list(header), "rows": [list(map(_jsonable, r)) for r in rows]}
        if summary is not None:
            payload["summary"] = summary
        text = json.dumps(payload, indent=2, default=_jsonable) + "\n"
    _write(cfg, f"{name}.{fmt}", text, stream)
    if summary is not None and fmt == "csv":
        _write(cfg, f"{name}.summary.json", json.dumps(summary, indent=2, default=_jsonable) + "\n", stream)


def _write(cfg, filename, text, stream):
    if cfg.out:
        os.makedirs(cfg.out, exist_ok=True)
        with open(os.path.join(cfg.out, filename), "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        (stream or sys.stdout).write(text)


def _cell(x):
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return x


def _jsonable(x):
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (range, tuple, set)):
        return list(x)
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    if isinstance(x, (str, int, float, bool, list, dict)) or x is None:
        return x
    return str(x)


# -- commands -------------------------------------------------------------------


def cmd_ladder(cfg, args):
    levels = list(cfg.level_range)
    ladder = build_ladder(cfg.profile, cfg.d, cfg.N, n0=cfg.n0, count=len(levels), start=levels[0])
    model = PotentialModel.from_ladder(ladder)
    rows = []
    for entry in ladder:
        mode = QuasiMode(model, entry.n)
        entry.alpha_n = mode.calibrate_alpha()
        entry.log_alpha_n = mode.log_alpha
        a, b = mode.support
        rows.append((entry.n, entry.lambda_n, cfg.profile.q(entry.lambda_n), entry.alpha_n, a, b))
    _emit(cfg, "ladder", ("n", "lambda_n", "q_lambda_n", "alpha_n", "support_lo", "support_hi"), rows)
    return 0


def cmd_potential(cfg, args):
    model = _model(cfg)
    lo = LevelWindow.for_level(cfg.levels[1]).psi_support[0]
    hi = LevelWindow.for_level(cfg.levels[0]).psi_support[1]
    count = int(math.ceil(args.points_per_decade * math.log10(hi / lo)))
    r = np.logspace(math.log10(lo), math.log10(hi), count + 1)
    V = model.V_of_r(r).value
    W = model.W_of_r(r).value
    rows = list(zip(r, V, W, level_index(r).tolist()))
    _emit(cfg, "potential", ("r", "V", "W", "level"), rows)
    return 0


def cmd_quasimode(cfg, args):
    n = args.n if args.n is not None else cfg.levels[0]
    if n < cfg.n0:
        raise ConfigurationError(f"level {n} is below n0 = {cfg.n0}")
    (mode,) = _modes(cfg, levels=[n])
    a, b = mode.support
    r = np.linspace(a, b, args.samples)
    u = mode.u(r).value
    f = mode.f(r, args.j).coeffs
    header = ("r", "u_n") + tuple(f"f_n_d{k}" for k in range(args.j + 1))
    rows = [(r[i], u[i], *f[:, i]) for i in range(r.size)]
    _emit(cfg, f"quasimode_n{n}", header, rows)
    return 0


def run_suite(name, cfg, model=None, modes=None):
    """Reports for one named suite on a resolved config."""
    model = model or _model(cfg)
    if name == "ode":
        return [verify.ode_check()]
    if name == "partition":
        return [verify.partition_check(model)]
    if name == "sandwich":
        return [verify.sandwich_check(model, cfg.level_range)]
    if name == "integrability":
        # p below / at d/2
        return [verify.integrability_check(model, p_conv=0.4 * cfg.d, p_div=0.5 * cfg.d)]
    modes = modes or _modes(cfg, model)
    if name == "fd":
        return [verify.fd_residual_check(m, step_factor=cfg.fd_step) for m in modes[:4]]
    if name == "normalization":
        return [verify.normalization_check(modes)]
    if name == "support":
        return [verify.support_check(modes)]
    if name == "two_path":
        return [verify.two_path_check(modes)]
    if name == "lemma":
        return [verify.lemma_estimations_check(modes, divisor=40.0)]
    if name == "decay":
        return [verify.theorem_decay_check(modes, cfg.N)]
    if name == "holder":
        return [verify.holder_check(modes)]
    if name == "duhamel":
        rep = duhamel_check(modes[0])
        return [
            verify.VerificationReport(
                check="duhamel",
                levels=[rep.n],
                values=[float(rep.extrapolated.max()), rep.refinement_ratio, rep.norm_drift],
                tolerance=1e-8,
                passed=rep.passed,
                oracle="Crank-Nicolson on three nested grids with Richardson error estimate",
            )
        ]
    raise UsageError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")


def cmd_verify(cfg, args):
    names = SUITES if args.suite == "all" else (args.suite,)
    if args.suite != "all" and args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}")
    model = _model(cfg)
    needs_modes = any(n not in ("ode", "partition", "sandwich", "integrability") for n in names)
    modes = _modes(cfg, model) if needs_modes else None
    reports = []
    for name in names:
        reports.extend(run_suite(name, cfg, model, modes))
    payload = {"config": cfg.to_text(), "reports": [r.to_dict() for r in reports]}
    _write(cfg, "verify.json", json.dumps(payload, indent=2, default=_jsonable) + "\n", None)
    for r in reports:
        print(r.summary_line(), file=sys.stderr)
    return 0 if all(r.passed for r in reports) else 1


def cmd_evolve(cfg, args):
    n = args.n if args.n is not None else cfg.n0
    if not cfg.n0 <= n <= cfg.n0 + 2:
        raise ConfigurationError(f"evolve simulates levels n0..n0+2 only, got {n}")
    steps = int(round(args.T / args.dt))
    if steps < 1 or steps % args.stride:
        raise ConfigurationError("T/dt must be a positive multiple of --stride")
    (mode,) = _modes(cfg, levels=[n])
    lam2 = mode.lambda_n**2
    rep = duhamel_check(mode, T=args.T / lam2, dt_factor=args.dt, samples=steps // args.stride)
    summary = {
        "n": n, "lambda_n": mode.lambda_n, "passed": rep.passed,
        "refinement_ratio": rep.refinement_ratio, "norm_drift": rep.norm_drift,
    }
    _emit(cfg, f"evolve_n{n}", ("t", "D", "bound", "mass_fraction"), rep.rows(), summary)
    return 0


def cmd_quotients(cfg, args):
    params = {}
    if args.family in ("strichartz", "dispersion", "loss_strichartz"):
        params["q"] = args.q
    if args.family == "strichartz":
        params["q0"] = args.q0
        if args.q == args.q0:
            raise DomainError("strichartz quotient needs q > q0")
    if args.family in ("smoothing", "loss_strichartz"):
        params["sigma"] = args.sigma
    series = quotient_series(args.family, _modes(cfg), **params)
    _emit(cfg, f"quotients_{args.family}", ("family", "params", "n", "lambda_n", "quotient"), series.rows(), series.summary())
    return 0


COMMANDS = {
    "ladder": cmd_ladder,
    "potential": cmd_potential,
    "quasimode": cmd_quasimode,
    "verify": cmd_verify,
    "evolve": cmd_evolve,
    "quotients": cmd_quotients,
}


def _common(p):
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--d", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--M", help="real > 1 or 'auto'")
    p.add_argument("--variant", choices=("standard", "epsilon"))
    p.add_argument("--epsilon", type=float)
    p.add_argument("--n0", help="integer or 'auto'")
    p.add_argument("--levels", help="inclusive span A..B")
    p.add_argument("--out", help="output directory (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"))


def build_parser():
    parser = argparse.ArgumentParser(prog="logpole", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        _common(p)
        if name == "potential":
            p.add_argument("--points-per-decade", type=int, default=64)
        if name == "quasimode":
            p.add_argument("--n", type=int)
            p.add_argument("--j", type=int, default=2, help="highest derivative of f_n to export")
            p.add_argument("--samples", type=int, default=401)
        if name == "verify":
            p.add_argument("--suite", default="all", help=f"one of {', '.join(SUITES)}, or all")
        if name == "evolve":
            p.add_argument("--n", type=int)
            p.add_argument("--T", type=float, default=10.0, help="horizon in units of 1/lambda_n^2")
            p.add_argument("--dt", type=float, default=0.1, help="step in units of 1/lambda_n^2")
            p.add_argument("--stride", type=int, default=10)
        if name == "quotients":
            p.add_argument("--family", choices=FAMILIES, required=True)
            p.add_argument("--q", type=float, default=4.0)
            p.add_argument("--q0", type=float, default=2.0)
            p.add_argument("--sigma", type=float, default=0.5)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        return COMMANDS[args.command](cfg, args)
    except (ConfigurationError, DomainError, UsageError) as exc:
        print(f"logpole: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
