"""Command-line interface: reproducible verification runs and file-based exports.

Subcommands: analytic, propagate, verify, sweep, scan, search, invert.
Structured records go to JSON, trajectories to CSV with the fixed header
``tau,x1,...,x8,norm``.  Exit codes: 0 success, 1 check failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .algebra import ControlParams
from .boundary import (
    analytic_family,
    consistency_scan,
    invert_to_physical,
    solution_record,
    sweep_tau,
)
from .dynamics import (
    Trajectory,
    exact_state_trajectory,
    propagate_rk4,
    propagator_discrepancy,
    propagate_expm_integral,
    split_halves,
    join_halves,
    _time_grid,
)
from .hilbert import full_hilbert_trajectory
from .report import run_verification
from .search import grid_search

_X0 = np.zeros(8)
_X0[0] = 1.0


class UsageError(Exception):
    pass


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except FileNotFoundError:
        raise UsageError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file {path} is not valid JSON: {exc}") from None
    if not isinstance(cfg, dict):
        raise UsageError(f"config file {path} must hold a JSON object")
    return cfg


def _write_json(payload, out: str | None) -> None:
    text = json.dumps(payload, indent=2, default=float)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise UsageError(message)


def cmd_analytic(args: argparse.Namespace) -> int:
    _require(args.m0 is not None and args.n0 is not None, "--m0 and --n0 are required")
    params = None
    branch = None
    if args.omega_hat is not None:
        constants, _, tau_star = analytic_family(args.m0, args.n0, args.k)
        sols = invert_to_physical(args.omega_hat, float(args.k), tau_star, constants.b)
        if sols:
            params, branch = sols[0].params, sols[0].branch
    record = solution_record(args.m0, args.n0, k_sign=args.k, params=params, branch=branch, target=args.target)
    _write_json(record, args.out)
    return 0


def _read_params_file(path: str) -> ControlParams:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise UsageError(f"parameter file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"parameter file {path} is not valid JSON: {exc}") from None
    try:
        return ControlParams.from_dict(data)
    except KeyError as exc:
        raise UsageError(f"parameter file {path} is missing field {exc}") from None


def cmd_propagate(args: argparse.Namespace) -> int:
    _require(args.params_file is not None, "--params-file is required")
    _require(args.out is not None, "--out is required for propagate")
    p = _read_params_file(args.params_file)
    _require(args.dtau > 0, "--dtau must be positive")
    _require(args.tau_end > 0, "--tau-end must be positive")
    if args.method == "rk4":
        traj = propagate_rk4(p, _X0, args.tau_end, args.dtau)
    elif args.method == "rotating-exact":
        taus = _time_grid(args.tau_end, args.dtau)
        traj = Trajectory(taus=taus, states=exact_state_trajectory(p, _X0, taus), method="rotating-exact", dtau=args.dtau)
    elif args.method == "expm-integral":
        taus = _time_grid(args.tau_end, args.dtau)
        y_plus0, y_minus0 = split_halves(_X0)
        states = np.empty((len(taus), 8))
        for i, tau in enumerate(taus):
            states[i] = join_halves(
                propagate_expm_integral(p, y_plus0, tau, 1),
                propagate_expm_integral(p, y_minus0, tau, -1),
            )
        traj = Trajectory(taus=taus, states=states, method="expm-integral", dtau=args.dtau)
        disc = propagator_discrepancy(p, taus)
        print(
            f"propagator discrepancy vs rotating-exact: max={disc.max_deviation:.17g} at tau={disc.tau_at_max:.17g}"
        )
    else:  # full-hilbert
        traj = full_hilbert_trajectory(p, args.tau_end, args.dtau)
    traj.write_csv(args.out)
    print(f"wrote {len(traj.taus)} samples (method={traj.method}) to {args.out}")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    omega = args.omega_hat
    if omega != "auto":
        try:
            omega = float(omega)
        except ValueError:
            raise UsageError(f"--omega-hat must be a number or 'auto', got {omega!r}") from None
        _require(omega**2 > 1.0 + args.k**2, f"omega_hat={omega:g} is below the energy floor (omega_hat^2 must exceed 1 + k^2)")
        _require(omega**2 > 2.0, f"omega_hat={omega:g} leaves no transverse amplitude for |k| = 1 (omega_hat^2 must exceed 2)")
    report = run_verification(
        omega_hat=omega,
        k_sign=args.k,
        dtau=args.dtau,
        n_dynamics=args.dynamics_sets,
        grid_resolution=args.resolution,
        scan_samples=args.scan_samples,
        seed=args.seed,
    )
    print(report.to_text())
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(report.to_json() + "\n")
        print(f"report written to {args.out}")
    return report.exit_code


def cmd_sweep(args: argparse.Namespace) -> int:
    rows = sweep_tau(args.max, args.max)
    if args.out:
        _write_json(rows, args.out)
    else:
        print("m0,n0,tau_star")
        for row in rows:
            print(f"{row['m0']},{row['n0']},{row['tau_star']:.17g}")
    return 0


def cmd_scan(args: argparse.Namespace) -> int:
    result = consistency_scan(args.range_from, args.range_to, k_sign=args.k, samples=args.samples)
    payload = {
        "consistent": [
            {"omega_hat": cp.omega_hat, "residual_b": cp.residual_b, "residual_d": cp.residual_d, "branch": cp.branch}
            for cp in result.consistent
        ],
        "curve": [{"omega_hat": float(w), "residual": float(r)} for w, r in zip(result.omegas, result.residuals)],
    }
    if args.out:
        _write_json(payload, args.out)
    else:
        for cp in result.consistent:
            print(f"consistent omega_hat = {cp.omega_hat:.12g}  (b residual {cp.residual_b:.3g}, d residual {cp.residual_d:.3g})")
        if not result.consistent:
            print("no consistent energy scale in range")
        print(f"curve: {len(result.omegas)} samples, min residual {float(np.min(result.residuals)):.3g}")
    return 0


def _resolve_omega(value, k: int) -> float:
    if value == "auto":
        scan = consistency_scan(2.0, 4.0, k_sign=k, samples=4001)
        if not scan.consistent:
            raise UsageError("no consistent energy scale found in (2, 4]; pass --omega-hat explicitly")
        return scan.consistent[0].omega_hat
    try:
        omega = float(value)
    except ValueError:
        raise UsageError(f"--omega-hat must be a number or 'auto', got {value!r}") from None
    _require(omega**2 > 1.0 + k**2, f"omega_hat={omega:g} is below the energy floor")
    return omega


def cmd_search(args: argparse.Namespace) -> int:
    omega = _resolve_omega(args.omega_hat, args.k)
    tau_max = args.tau_max if args.tau_max is not None else 3.0 * 0.25 * math.sqrt(3.0) * math.pi
    result = grid_search(
        omega,
        float(args.k),
        target=args.target,
        resolution=args.resolution,
        threshold=args.threshold,
        tau_max=tau_max,
        dtau=args.dtau,
        collect_landscape=args.landscape is not None,
    )
    if args.landscape:
        with open(args.landscape, "w") as fh:
            fh.write("bz,omega_rf,theta0,tau_to_threshold,peak,peak_tau\n")
            for bz, omega_rf, theta0, reached, peak, peak_tau in result.landscape:
                reach_cell = f"{reached:.17g}" if reached is not None else ""
                fh.write(
                    f"{bz:.17g},{omega_rf:.17g},{theta0:.17g},{reach_cell},{peak:.17g},{peak_tau:.17g}\n"
                )
    payload = {
        "grid_spec": result.grid_spec,
        "feasible": result.feasible,
        "best_tau": result.best_tau,
        "best_params": result.best_params.to_dict() if result.best_params else None,
        "achieved": result.achieved,
        "achieved_tau": result.achieved_tau,
        "achieved_params": result.achieved_params.to_dict() if result.achieved_params else None,
    }
    _write_json(payload, args.out)
    return 0


def cmd_invert(args: argparse.Namespace) -> int:
    _require(args.omega_hat is not None, "--omega-hat is required")
    _require(args.b_target != 0.0, "--b-target must be nonzero (the d = 0 branch requires b != 0)")
    sols = invert_to_physical(
        args.omega_hat,
        float(args.k),
        args.tau_star,
        args.b_target,
        r_values=tuple(args.r),
        root_range=(args.root_lo, args.root_hi),
    )
    payload = [
        {
            "params": s.params.to_dict(),
            "branch": s.branch,
            "residual_b": s.residual_b,
            "residual_d": s.residual_d,
        }
        for s in sols
    ]
    _write_json(payload, args.out)
    return 0


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(
        prog="trispin",
        description="Coherence transfer in a driven three-qubit Ising chain: solve, propagate, verify.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    commands: dict[str, argparse.ArgumentParser] = {}

    def add_common(sp):
        sp.add_argument("--config", default=None, help="JSON config file; flags override its entries")
        sp.add_argument("--out", default=None, help="output path (defaults to stdout where applicable)")

    sp = commands["analytic"] = sub.add_parser("analytic", help="closed-form solution record for an integer branch")
    sp.add_argument("--m0", type=int, default=None)
    sp.add_argument("--n0", type=int, default=None)
    sp.add_argument("--k", type=int, default=1, choices=(1, -1))
    sp.add_argument("--target", default="x8", choices=("x8", "x6"))
    sp.add_argument("--omega-hat", type=float, default=None, help="attach a physical realization at this energy scale")
    add_common(sp)
    sp.set_defaults(func=cmd_analytic)

    sp = commands["propagate"] = sub.add_parser("propagate", help="propagate x from e1 and export the trajectory CSV")
    sp.add_argument("--params-file", default=None, help="JSON file with k, omega_hat, b0, bz, omega_rf, theta0")
    sp.add_argument("--method", default="rk4", choices=("rk4", "expm-integral", "rotating-exact", "full-hilbert"))
    sp.add_argument("--dtau", type=float, default=1e-3)
    sp.add_argument("--tau-end", type=float, default=3.0 * 0.25 * math.sqrt(3.0) * math.pi)
    add_common(sp)
    sp.set_defaults(func=cmd_propagate)

    sp = commands["verify"] = sub.add_parser("verify", help="run the full verification suite")
    sp.add_argument("--omega-hat", default="auto", help="energy scale, or 'auto' to pick a consistent one")
    sp.add_argument("--k", type=int, default=1, choices=(1, -1))
    sp.add_argument("--dtau", type=float, default=1e-4)
    sp.add_argument("--dynamics-sets", type=int, default=5)
    sp.add_argument("--resolution", type=int, default=21)
    sp.add_argument("--scan-samples", type=int, default=4001)
    sp.add_argument("--seed", type=int, default=20260810)
    add_common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = commands["sweep"] = sub.add_parser("sweep", help="table of transfer times over the integer grid")
    sp.add_argument("--max", type=int, default=3)
    add_common(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = commands["scan"] = sub.add_parser("scan", help="scan energy scales for closed-form consistency")
    sp.add_argument("--from", dest="range_from", type=float, required=True)
    sp.add_argument("--to", dest="range_to", type=float, required=True)
    sp.add_argument("--samples", type=int, default=4001)
    sp.add_argument("--k", type=int, default=1, choices=(1, -1))
    add_common(sp)
    sp.set_defaults(func=cmd_scan)

    sp = commands["search"] = sub.add_parser("search", help="grid search of the ansatz for a transfer target")
    sp.add_argument("--target", default="x8", choices=tuple(f"x{i}" for i in range(1, 9)))
    sp.add_argument("--omega-hat", default="auto")
    sp.add_argument("--k", type=int, default=1, choices=(1, -1))
    sp.add_argument("--resolution", type=int, default=21)
    sp.add_argument("--threshold", type=float, default=0.999)
    sp.add_argument("--tau-max", type=float, default=None)
    sp.add_argument("--dtau", type=float, default=1e-2)
    sp.add_argument("--landscape", default=None, help="also write the (parameters -> reach time, peak) CSV here")
    add_common(sp)
    sp.set_defaults(func=cmd_search)

    sp = commands["invert"] = sub.add_parser("invert", help="solve for controls reproducing target boundary constants")
    sp.add_argument("--omega-hat", type=float, default=None)
    sp.add_argument("--k", type=int, default=1, choices=(1, -1))
    sp.add_argument("--tau-star", type=float, default=0.25 * math.sqrt(3.0) * math.pi)
    sp.add_argument("--b-target", type=float, default=-math.pi)
    sp.add_argument("--r", type=int, nargs="+", default=[0, 1, 2])
    sp.add_argument("--root-lo", type=float, default=1e-3)
    sp.add_argument("--root-hi", type=float, default=20.0)
    add_common(sp)
    sp.set_defaults(func=cmd_invert)

    return parser, commands


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser, commands = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(getattr(args, "config", None))
        if cfg:
            # Config entries become subcommand defaults, so explicit flags win.
            sp = commands[args.command]
            valid = {action.dest for action in sp._actions}
            mapped = {}
            for key, value in cfg.items():
                dest = key.replace("-", "_")
                if dest not in valid or dest in ("config", "help", "func"):
                    raise UsageError(f"unknown config key {key!r} for command {args.command!r}")
                mapped[dest] = value
            sp.set_defaults(**mapped)
            args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
