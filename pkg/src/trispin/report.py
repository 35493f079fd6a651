"""Structured verification report and the runner that fills it.

Each check records its measured value, the expected value with a provenance
note naming the oracle it came from, and a pass/fail/measured status.  A
"measured" check documents an experiment whose outcome is reported rather
than asserted.  The runner is deterministic: random parameter draws use a
fixed seed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import ControlParams, transverse_amplitude
from .boundary import (
    analytic_family,
    boundary_residuals,
    closed_form_params,
    consistency_scan,
    exp_boundary_check,
    family_constants_for_target,
    integer_relations_check,
    invert_to_physical,
    swap_bd,
    sweep_tau,
)
from .dynamics import exact_state_trajectory, propagate_rk4, propagator_discrepancy
from .hilbert import closure_check, full_hilbert_trajectory
from .search import grid_search, no_transfer_probe

DEFAULT_SEED = 20260810
TAU_STAR_MIN = 0.25 * math.sqrt(3.0) * math.pi


@dataclass
class Check:
    name: str
    status: str  # "pass" | "fail" | "measured"
    measured: float | str
    expected: float | str | None
    tolerance: float | None
    provenance: str
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "measured": self.measured,
            "expected": self.expected,
            "tolerance": self.tolerance,
            "provenance": self.provenance,
            "note": self.note,
        }


@dataclass
class VerificationReport:
    context: dict
    checks: list[Check] = field(default_factory=list)

    def add(self, check: Check) -> None:
        self.checks.append(check)

    def add_bounded(self, name: str, measured: float, tolerance: float, provenance: str, note: str = "") -> None:
        status = "pass" if measured <= tolerance else "fail"
        self.add(Check(name, status, measured, 0.0, tolerance, provenance, note))

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def get(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"context": self.context, "passed": self.passed, "checks": [c.to_dict() for c in self.checks]}

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def to_text(self) -> str:
        lines = []
        width = max((len(c.name) for c in self.checks), default=0)
        for c in self.checks:
            measured = f"{c.measured:.6g}" if isinstance(c.measured, float) else str(c.measured)
            parts = [f"{c.status.upper():8s} {c.name:<{width}s} measured={measured}"]
            if c.tolerance is not None:
                parts.append(f"tol={c.tolerance:g}")
            if c.expected is not None:
                expected = f"{c.expected:.9g}" if isinstance(c.expected, float) else str(c.expected)
                parts.append(f"expected={expected}")
            parts.append(f"[{c.provenance}]")
            if c.note:
                parts.append(f"({c.note})")
            lines.append("  ".join(parts))
        lines.append("overall: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)


def random_consistent_params(rng: np.random.Generator, k_sign: float | None = None) -> ControlParams:
    """Draw an energy-consistent rotating-control parameter set."""
    k = float(rng.choice([1.0, -1.0])) if k_sign is None else float(k_sign)
    omega_hat = float(rng.uniform(1.6, 3.0))
    shell = math.sqrt(omega_hat**2 - 2.0)
    bz = float(rng.uniform(-0.9, 0.9)) * shell
    return ControlParams(
        k=k,
        omega_hat=omega_hat,
        b0=transverse_amplitude(omega_hat, k, bz),
        bz=bz,
        omega_rf=float(rng.uniform(-5.0, 5.0)),
        theta0=float(rng.uniform(0.0, 2.0 * math.pi)),
    )


def dynamics_equivalence(
    params_list, tau_end: float, dtau: float = 1e-4, scheme: str = "gauss4"
) -> tuple[float, float]:
    """(max full-Hilbert vs RK4 deviation, max rotating-exact vs RK4 deviation)."""
    x0 = np.zeros(8)
    x0[0] = 1.0
    worst_full = 0.0
    worst_exact = 0.0
    for p in params_list:
        reduced = propagate_rk4(p, x0, tau_end, dtau)
        full = full_hilbert_trajectory(p, tau_end, dtau, scheme=scheme)
        exact = exact_state_trajectory(p, x0, reduced.taus)
        worst_full = max(worst_full, float(np.max(np.linalg.norm(full.states - reduced.states, axis=1))))
        worst_exact = max(worst_exact, float(np.max(np.linalg.norm(exact - reduced.states, axis=1))))
    return worst_full, worst_exact


def run_verification(
    omega_hat: float | str = "auto",
    k_sign: int = 1,
    dtau: float = 1e-4,
    n_dynamics: int = 5,
    n_closure: int = 10,
    grid_resolution: int = 21,
    scan_samples: int = 4001,
    scan_range: tuple[float, float] = (2.0, 4.0),
    seed: int = DEFAULT_SEED,
) -> VerificationReport:
    """Run every verification check and return the filled report.

    omega_hat "auto" selects the first energy scale found by the consistency
    scan; a numeric omega_hat must satisfy omega_hat^2 > 2.
    """
    rng = np.random.default_rng(seed)
    report = VerificationReport(
        context={
            "omega_hat_request": omega_hat,
            "k_sign": k_sign,
            "dtau": dtau,
            "seed": seed,
            "scan_samples": scan_samples,
            "scan_range": list(scan_range),
        }
    )

    # --- final-time algebra, minimal branch ---
    constants, qn, tau_star = analytic_family(0, 0, k_sign)
    report.add(
        Check(
            "family_min_time",
            "pass" if abs(tau_star - TAU_STAR_MIN) <= 1e-12 else "fail",
            tau_star,
            TAU_STAR_MIN,
            1e-12,
            "closed-form integer family, minimal branch",
        )
    )
    report.add_bounded(
        "boundary_residuals_max",
        float(np.max(np.abs(boundary_residuals(constants)))),
        1e-10,
        "scalar boundary system at the family constants",
    )
    report.add_bounded(
        "integer_relations_max",
        float(np.max(np.abs(integer_relations_check(constants, qn)))),
        1e-10,
        "integer-labelled relations at the family constants",
    )
    col_plus, col_minus = exp_boundary_check(constants)
    e4 = np.array([0.0, 0.0, 0.0, 1.0])
    report.add_bounded(
        "exp_boundary_columns",
        max(float(np.max(np.abs(col_plus - e4))), float(np.max(np.abs(col_minus + e4)))),
        1e-10,
        "matrix exponential of the final-time generator",
    )

    rows = sweep_tau(3, 3)
    gap = rows[1]["tau_star"] - rows[0]["tau_star"]
    report.add(
        Check(
            "sweep_minimum",
            "pass" if (rows[0]["m0"], rows[0]["n0"]) == (0, 0) and gap > 0 else "fail",
            gap,
            None,
            None,
            "closed-form sweep over the (m0, n0) grid",
            note="gap between the smallest and second-smallest transfer times",
        )
    )

    # --- alternate target: b and d exchanged ---
    c6, qn6, tau6 = family_constants_for_target("x6", 0, 0, k_sign)
    col_p6, col_m6 = exp_boundary_check(c6)
    axis = np.zeros(4)
    axis[1] = 1.0
    orient = 1.0 if abs(col_p6[1] - 1.0) < abs(col_p6[1] + 1.0) else -1.0
    dev6 = max(
        float(np.max(np.abs(col_p6 - orient * axis))),
        float(np.max(np.abs(col_m6 + orient * axis))),
        abs(tau6 - tau_star),
        float(np.max(np.abs(boundary_residuals(swap_bd(c6))))),
        float(np.max(np.abs(integer_relations_check(swap_bd(c6), qn6)))),
    )
    report.add_bounded(
        "x6_variant",
        dev6,
        1e-10,
        "exchanged-constants family and its exponential columns",
        note=f"transfer orientation {'+' if orient > 0 else '-'}1, same tau_star",
    )

    # --- structural closure of the reduced generator ---
    worst_closure = 0.0
    for _ in range(n_closure):
        p = random_consistent_params(rng)
        taus = rng.uniform(0.0, 5.0, size=10)
        worst_closure = max(worst_closure, closure_check(p, taus).max_residual)
    report.add_bounded(
        "closure_residual",
        worst_closure,
        1e-12,
        "commutator projection onto the operator basis",
        note=f"{n_closure} random parameter sets, 10 times each",
    )

    # --- dynamics oracle equivalence ---
    dyn_params = [random_consistent_params(rng) for _ in range(n_dynamics)]
    worst_full, worst_exact = dynamics_equivalence(dyn_params, 3.0 * tau_star, dtau)
    report.add_bounded(
        "cross_validate_full_vs_rk4",
        worst_full,
        1e-8,
        "full-space propagation vs reduced RK4",
        note=f"{n_dynamics} random parameter sets on [0, 3*tau_star], dtau={dtau:g}",
    )
    report.add_bounded(
        "rotating_exact_vs_rk4",
        worst_exact,
        1e-8,
        "rotating-frame closed form vs reduced RK4",
    )

    # --- consistency of the closed-form control constants ---
    scan = consistency_scan(scan_range[0], scan_range[1], k_sign=k_sign, samples=scan_samples)
    report.add(
        Check(
            "consistency_scan",
            "pass" if scan.consistent else "fail",
            scan.consistent[0].omega_hat if scan.consistent else "none",
            None,
            1e-9,
            "closed-form constants against the b, d boundary equations",
            note=f"{len(scan.consistent)} consistent energy scale(s) in ({scan_range[0]}, {scan_range[1]}]",
        )
    )

    if omega_hat == "auto":
        if not scan.consistent:
            raise RuntimeError("no consistent energy scale found; cannot select omega_hat automatically")
        omega_sel = scan.consistent[0].omega_hat
        branch = scan.consistent[0].branch
        params = closed_form_params(omega_sel, k_sign=k_sign, **branch)
    else:
        omega_sel = float(omega_hat)
        if omega_sel**2 <= 2.0:
            raise ValueError(f"omega_hat^2 must exceed 2, got {omega_sel**2:.6g}")
        # away from a consistent scale the closed forms miss the b, d equations,
        # so use inverted controls, which satisfy them exactly at any scale
        sols = invert_to_physical(omega_sel, float(k_sign), tau_star, -math.pi * k_sign)
        if sols:
            params, branch = sols[0].params, sols[0].branch
        else:
            branch = {"b0_sign": 1, "omega_sign": 1, "theta_sign": -1, "r": 0}
            params = closed_form_params(omega_sel, k_sign=k_sign, **branch)
    report.context["omega_hat"] = omega_sel
    report.context["branch"] = branch

    # --- transfer experiment (outcome reported, not assumed) ---
    x0 = np.zeros(8)
    x0[0] = 1.0
    x8_final = float(exact_state_trajectory(params, x0, np.array([tau_star]))[0, 7])
    transfer_ok = abs(x8_final - 1.0) <= 1e-6
    report.add(
        Check(
            "transfer_x8_at_tau_star",
            "measured",
            x8_final,
            1.0,
            1e-6,
            "exact propagation of the closed-form control",
            note="within tolerance" if transfer_ok else "tolerance violated; see propagator_discrepancy",
        )
    )
    disc = propagator_discrepancy(params, np.linspace(0.0, tau_star, 241))
    report.add(
        Check(
            "propagator_discrepancy",
            "measured",
            disc.max_deviation,
            None,
            None,
            "integrated-generator ansatz vs time-ordered propagator on [0, tau_star]",
            note=f"largest gap at tau={disc.tau_at_max:.6g}",
        )
    )

    # --- reachability probes ---
    gs = grid_search(omega_sel, float(k_sign), target="x8", resolution=grid_resolution, threshold=0.999)
    early = gs.best_tau is not None and gs.best_tau <= 0.95 * tau_star
    report.add(
        Check(
            "ansatz_grid_search_x8",
            "fail" if early else "pass",
            gs.best_tau if gs.best_tau is not None else "never reached",
            None,
            None,
            "exhaustive grid over the energy-shell ansatz",
            note=f"largest x8 seen {gs.achieved:.6g} at tau={gs.achieved_tau:.6g}",
        )
    )
    probe = no_transfer_probe([omega_sel], tau_max=3.0 * tau_star, resolution=grid_resolution, k=float(k_sign))
    report.add(
        Check(
            "no_transfer_probe_x7",
            "pass" if probe.max_value < 0.999 else "fail",
            probe.max_value,
            None,
            0.999,
            "exhaustive grid over the energy-shell ansatz",
            note=f"largest x7 at tau={probe.tau:.6g}" if probe.tau is not None else "",
        )
    )
    return report
