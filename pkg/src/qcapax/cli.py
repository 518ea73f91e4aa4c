"""Command-line front end.

Subcommands: ``capacity`` (single-channel report), ``trajectory``
(capacity-versus-time sweep as CSV/JSON, optionally rendered to a PNG),
``kernel`` (construction recipes with admissibility report and optional
solve), ``verify`` (formula-versus-oracle grid), ``cross`` (crossing
windows as JSON), ``mixcheck`` (three-route equivalence), ``figures``
(the three standard comparison figures plus their data files).

Exit codes: 0 success/verified, 1 runtime failure, 2 invalid input.
Times are printed with 9 significant digits, capacities with 12, so that
outputs can be diffed tolerance-based.  QCAPAX_THREADS caps sweep
parallelism (0 = auto).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import capacity as cap
from . import core, dynamics, oracle

CSV_HEADER = "t,lambda,p,chi,c_e,chi_unital,c_e_unital"
KERNEL_HEADER = "t,lambda1,lambda3,lambda_star"
FIGURE_PS = (0.0, 2.0 / 3.0, 0.9, 1.0)


@dataclass
class RunConfig:
    command: str
    profile: str | None = None
    p: float = 0.0
    t_max: float = 10.0
    steps: int = 200
    dt: float = 1e-3
    seed: int = 0
    output: str | None = None
    fmt: str = "csv"


def _fmt_t(x: float) -> str:
    return f"{x:.9g}"


def _fmt_c(x: float) -> str:
    return f"{x:.12g}"


def _parse_number(text: str) -> float:
    if "/" in text:
        num, den = text.split("/", 1)
        return float(num) / float(den)
    return float(text)


def _family(profile: str, p: float) -> dynamics.GadcFamily:
    if profile == "exp":
        return dynamics.GadcFamily.exponential(p)
    if profile == "cos":
        return dynamics.GadcFamily.cosine(p)
    data = np.loadtxt(profile, delimiter=",", ndmin=2, comments="#",
                      skiprows=0 if _first_row_numeric(profile) else 1)
    return dynamics.GadcFamily.tabulated(data[:, 0], data[:, 1], p)


def _first_row_numeric(path: str) -> bool:
    with open(path) as fh:
        first = fh.readline()
    try:
        [float(tok) for tok in first.strip().split(",")]
        return True
    except ValueError:
        return False


def _write_lines(path: str | None, lines) -> None:
    text = "\n".join(lines) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _check_config(cfg: RunConfig) -> None:
    if cfg.t_max <= 0.0:
        raise ValueError("t-max must be positive")
    if cfg.steps < 2:
        raise ValueError("steps must be at least 2")
    if not -1.0 <= cfg.p <= 1.0:
        raise ValueError("p must lie in [-1, 1]")


# ---------------------------------------------------------------------------
# capacity
# ---------------------------------------------------------------------------

def cmd_capacity(args) -> int:
    if args.lam is not None:
        lam, p = args.lam, args.p
        ch = core.gadc(lam, p)
    else:
        if None in (args.lambda1, args.lambda3, args.lambda_star):
            raise ValueError("give either --lambda/--p or the full triple")
        ch = core.make_channel(args.lambda1, args.lambda3, args.lambda_star)
        if args.method == "formula":
            lam, p = cap.gadc_parameters(ch)  # shape guard, raises outside family
        else:
            lam, p = None, None

    if not ch.is_valid:
        raise ValueError("channel parameters violate complete positivity")
    if args.method == "oracle":
        chi = oracle.chi_bruteforce(ch, seed=args.seed).value
        c_e = oracle.ce_bruteforce(ch, seed=args.seed).value
    else:
        chi, c_e = cap.capacity_bounds((lam, p))

    ok, (m1, m2) = core.is_cp(ch)
    try:
        nu = f"{core.non_unitality(ch):.12g}"
    except core.DegenerateChannelError:
        nu = "undefined (|lambda3| = 1)"
    try:
        rho = core.stationary_state(ch)
        stat = (f"diag({rho.matrix[0, 0].real:.12g}, "
                f"{rho.matrix[1, 1].real:.12g})")
    except core.DegenerateChannelError:
        stat = "none of the affine form"

    if args.format == "json":
        payload = {"channel": ch.to_dict(), "p": p, "chi": chi, "c_e": c_e,
                   "non_unitality": nu, "stationary_state": stat,
                   "cp_margins": [m1, m2], "method": args.method}
        print(json.dumps(payload, indent=2))
        return 0
    print(f"channel      lambda1={ch.lambda1:g} lambda3={ch.lambda3:g} "
          f"lambda_star={ch.lambda_star:g}")
    if p is not None:
        print(f"p            {p:.12g}")
    print(f"chi          {_fmt_c(chi)}")
    print(f"c_e          {_fmt_c(c_e)}")
    print(f"nu           {nu}")
    print(f"stationary   {stat}")
    print(f"cp_margins   ({m1:.6g}, {m2:.6g})")
    return 0


# ---------------------------------------------------------------------------
# trajectory / figures
# ---------------------------------------------------------------------------

def _trajectory_lines(points, fmt: str) -> list:
    if fmt == "json":
        rows = [{"t": pt.t, "lambda": pt.lam, "p": pt.p, "chi": pt.chi,
                 "c_e": pt.c_e, "chi_unital": pt.chi_unital,
                 "c_e_unital": pt.c_e_unital} for pt in points]
        return [json.dumps(rows, indent=2)]
    lines = [CSV_HEADER]
    for pt in points:
        lines.append(",".join([
            _fmt_t(pt.t), _fmt_c(pt.lam), _fmt_c(pt.p), _fmt_c(pt.chi),
            _fmt_c(pt.c_e), _fmt_c(pt.chi_unital), _fmt_c(pt.c_e_unital)]))
    return lines


def cmd_trajectory(args) -> int:
    cfg = RunConfig("trajectory", args.profile, args.p, args.t_max,
                    args.steps, seed=args.seed, output=args.output,
                    fmt=args.format)
    _check_config(cfg)
    fam = _family(cfg.profile, cfg.p)
    points = cap.trajectory(fam, cfg.t_max, cfg.steps)
    _write_lines(cfg.output, _trajectory_lines(points, cfg.fmt))
    if args.plot is not None:
        from .plotting import save_trajectory_plot
        save_trajectory_plot(points, args.plot, log_x=(cfg.profile == "exp"))
    return 0


def cmd_figures(args) -> int:
    import os

    from .plotting import save_crossing_plot, save_family_plot

    if args.t_max <= 0.0 or args.steps < 2:
        raise ValueError("t-max must be positive and steps at least 2")
    os.makedirs(args.out_dir, exist_ok=True)
    log_x = args.profile == "exp"
    runs = {}
    for p in FIGURE_PS:
        fam = _family(args.profile, p)
        points = cap.trajectory(fam, args.t_max, args.steps)
        runs[p] = points
        csv_path = os.path.join(args.out_dir,
                                f"trajectory_{args.profile}_p{p:.4g}.csv")
        _write_lines(csv_path, _trajectory_lines(points, "csv"))
    save_family_plot(runs, "chi",
                     os.path.join(args.out_dir, f"holevo_{args.profile}.png"),
                     log_x)
    save_family_plot(runs, "c_e",
                     os.path.join(args.out_dir, f"assisted_{args.profile}.png"),
                     log_x)
    save_crossing_plot(runs,
                       os.path.join(args.out_dir, f"crossing_{args.profile}.png"),
                       log_x)
    print(f"wrote 4 data files and 3 figures to {args.out_dir}")
    return 0


# ---------------------------------------------------------------------------
# kernel
# ---------------------------------------------------------------------------

def _load_recipe(text: str) -> dict:
    if text.strip().startswith("{"):
        return json.loads(text)
    with open(text) as fh:
        return json.load(fh)


def cmd_kernel(args) -> int:
    recipe = _load_recipe(args.recipe)
    spec, report = dynamics.kernel_from_recipe(recipe)

    bad = False
    if isinstance(report, dynamics.AdmissibilityReport):
        print(f"admissibility ok={report.ok} a_order={report.a_order_ok} "
              f"a_harmonic={report.a_harmonic_ok} integral={report.integral_ok} "
              f"bound={report.bound:.6g}")
        bad = not report.ok
    elif isinstance(report, dynamics.Theorem1Report):
        print(f"conditions ok={report.ok} c1={report.c1_ok} c2={report.c2_ok} "
              f"c1_margin={report.c1_margin:.6g} c2_margin={report.c2_margin:.6g}")
        bad = not report.ok
    else:
        print("conditions ok=True (recipe valid by construction)")

    if args.solve:
        traj = dynamics.volterra_solve(spec, args.t_max, args.dt)
        closed = spec.closed_form
        header = KERNEL_HEADER
        if closed is not None:
            header += ",err_lambda1,err_lambda3,err_lambda_star"
        lines = [header]
        for i, t in enumerate(traj.t):
            row = [_fmt_t(t), _fmt_c(traj.lambda1[i]), _fmt_c(traj.lambda3[i]),
                   _fmt_c(traj.lambda_star[i])]
            if closed is not None:
                row += [_fmt_c(traj.lambda1[i] - float(closed.lambda1(t))),
                        _fmt_c(traj.lambda3[i] - float(closed.lambda3(t))),
                        _fmt_c(traj.lambda_star[i] - float(closed.lambda_star(t)))]
            lines.append(",".join(row))
        _write_lines(args.output, lines)
    return 2 if bad else 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

CHI_TOL = 5e-3
CE_TOL = 1e-4


def cmd_verify(args) -> int:
    lambdas = [_parse_number(tok) for tok in args.lambdas.split(",")]
    ps = [_parse_number(tok) for tok in args.ps.split(",")]
    print("lambda,p,chi_formula,chi_oracle,d_chi,ce_formula,ce_oracle,d_ce")
    worst_chi = worst_ce = 0.0
    idx = 0
    for lam in lambdas:
        for p in ps:
            ch = core.gadc(lam, p)
            chi_f, ce_f = cap.capacity_bounds((lam, p))
            chi_o = oracle.chi_bruteforce(ch, seed=args.seed + idx).value
            ce_o = oracle.ce_bruteforce(ch, seed=args.seed + idx).value
            d_chi = abs(chi_f - chi_o)
            d_ce = abs(ce_f - ce_o)
            worst_chi = max(worst_chi, d_chi)
            worst_ce = max(worst_ce, d_ce)
            print(",".join([
                _fmt_c(lam), _fmt_c(p), _fmt_c(chi_f), _fmt_c(chi_o),
                _fmt_c(d_chi), _fmt_c(ce_f), _fmt_c(ce_o), _fmt_c(d_ce)]))
            idx += 1
    ok = worst_chi <= CHI_TOL and worst_ce <= CE_TOL
    print(f"# worst d_chi={worst_chi:.3e} (tol {CHI_TOL:g}) "
          f"worst d_ce={worst_ce:.3e} (tol {CE_TOL:g}) -> "
          f"{'PASS' if ok else 'FAIL'}")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# cross / mixcheck
# ---------------------------------------------------------------------------

def cmd_cross(args) -> int:
    cfg = RunConfig("cross", args.profile, args.p, args.t_max)
    _check_config(cfg)
    fam = _family(cfg.profile, cfg.p)
    windows = cap.crossing_windows(fam, cfg.t_max, args.dt)
    _write_lines(args.output,
                 [json.dumps([[round(a, 10), round(b, 10)] for a, b in windows])])
    return 0


def cmd_mixcheck(args) -> int:
    cfg = RunConfig("mixcheck", args.profile, args.p, args.t_max, dt=args.dt)
    _check_config(cfg)
    fam = _family(cfg.profile, cfg.p)
    report = dynamics.mixture_equivalence(fam, cfg.t_max, cfg.dt)
    for (a, b), dev in report.pairwise.items():
        print(f"{a} vs {b}: max deviation {dev:.6e}")
    threshold = 100.0 * cfg.dt
    ok = report.max_deviation < threshold
    print(f"max pairwise deviation {report.max_deviation:.6e} "
          f"(threshold {threshold:g}) -> {'PASS' if ok else 'FAIL'}")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# parser / entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qcapax",
        description="capacities of phase-covariant qubit dynamical maps")
    sub = ap.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("capacity", help="capacities of a single channel")
    pc.add_argument("--lambda", dest="lam", type=_parse_number, default=None)
    pc.add_argument("--p", type=_parse_number, default=0.0)
    pc.add_argument("--lambda1", type=float, default=None)
    pc.add_argument("--lambda3", type=float, default=None)
    pc.add_argument("--lambda-star", dest="lambda_star", type=float, default=None)
    pc.add_argument("--method", choices=("formula", "oracle"), default="formula")
    pc.add_argument("--seed", type=int, default=0)
    pc.add_argument("--format", choices=("text", "json"), default="text")
    pc.set_defaults(fn=cmd_capacity)

    pt = sub.add_parser("trajectory", help="capacity sweep over time")
    pt.add_argument("--profile", required=True,
                    help="exp | cos | path to t,lambda samples")
    pt.add_argument("--p", type=_parse_number, default=0.0)
    pt.add_argument("--t-max", dest="t_max", type=float, default=10.0)
    pt.add_argument("--steps", type=int, default=200)
    pt.add_argument("--seed", type=int, default=0)
    pt.add_argument("--output", default=None)
    pt.add_argument("--format", choices=("csv", "json"), default="csv")
    pt.add_argument("--plot", default=None, help="also render a PNG here")
    pt.set_defaults(fn=cmd_trajectory)

    pk = sub.add_parser("kernel", help="build (and optionally solve) a kernel")
    pk.add_argument("--recipe", required=True,
                    help="JSON object or path to a JSON file")
    pk.add_argument("--solve", action="store_true")
    pk.add_argument("--t-max", dest="t_max", type=float, default=10.0)
    pk.add_argument("--dt", type=float, default=1e-3)
    pk.add_argument("--output", default=None)
    pk.set_defaults(fn=cmd_kernel)

    pv = sub.add_parser("verify", help="formula vs brute-force oracle grid")
    pv.add_argument("--lambdas", default="0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")
    pv.add_argument("--ps", default="0,1/3,2/3,1")
    pv.add_argument("--seed", type=int, default=0)
    pv.set_defaults(fn=cmd_verify)

    px = sub.add_parser("cross", help="windows where chi beats unital c_e")
    px.add_argument("--profile", required=True)
    px.add_argument("--p", type=_parse_number, required=True)
    px.add_argument("--t-max", dest="t_max", type=float, default=10.0)
    px.add_argument("--dt", type=float, default=1e-2)
    px.add_argument("--output", default=None)
    px.set_defaults(fn=cmd_cross)

    pm = sub.add_parser("mixcheck", help="map/generator/kernel equivalence")
    pm.add_argument("--profile", required=True, choices=("exp", "cos"))
    pm.add_argument("--p", type=_parse_number, required=True)
    pm.add_argument("--t-max", dest="t_max", type=float, default=5.0)
    pm.add_argument("--dt", type=float, default=1e-3)
    pm.set_defaults(fn=cmd_mixcheck)

    pf = sub.add_parser("figures", help="standard comparison figures + data")
    pf.add_argument("--profile", required=True, choices=("exp", "cos"))
    pf.add_argument("--t-max", dest="t_max", type=float, default=10.0)
    pf.add_argument("--steps", type=int, default=200)
    pf.add_argument("--out-dir", dest="out_dir", default="figures")
    pf.set_defaults(fn=cmd_figures)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, dynamics.SolverInstabilityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
