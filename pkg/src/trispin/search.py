"""Reachability searches over the rotating-control ansatz.

The search space is the energy shell of the rotating drive: (bz, omega_rf,
theta0) free, b0 fixed by the energy constraint.  All evaluations use the
exact rotating-frame propagator, so the only discretization is the tau grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize

from .algebra import ControlParams, transverse_amplitude
from .dynamics import exact_state_trajectory, propagate_rotating_exact, split_halves, join_halves

_TARGET_INDEX = {f"x{i}": i - 1 for i in range(1, 9)}

_X0 = np.zeros(8)
_X0[0] = 1.0


def _target_index(target: str) -> int:
    try:
        return _TARGET_INDEX[target]
    except KeyError:
        raise ValueError(f"unknown target {target!r}; expected 'x1'..'x8'") from None


def target_expectation(p: ControlParams, tau: float, target: str = "x8") -> float:
    """x_target(tau) starting from x = e1, via the exact rotating-frame propagator."""
    idx = _target_index(target)
    y_plus0, y_minus0 = split_halves(_X0)
    y_plus = propagate_rotating_exact(p, y_plus0, tau, 1)
    y_minus = propagate_rotating_exact(p, y_minus0, tau, -1)
    return float(join_halves(y_plus, y_minus)[idx])


def target_trajectory(p: ControlParams, taus: np.ndarray, target: str = "x8") -> np.ndarray:
    """x_target over a whole tau grid (eigendecomposition fast path)."""
    idx = _target_index(target)
    return exact_state_trajectory(p, _X0, taus)[:, idx]


def min_time_to_target(
    p: ControlParams,
    target: str = "x8",
    threshold: float = 0.999,
    tau_max: float = 10.0,
    dtau: float = 1e-3,
) -> float | None:
    """First tau where x_target >= threshold, bisected to 1e-9; None if never reached."""
    if threshold <= 0.0:
        raise ValueError("threshold must be positive")
    if tau_max <= 0.0 or dtau <= 0.0:
        raise ValueError("tau_max and dtau must be positive")
    # a threshold above 1 is simply unreachable and yields None
    taus = np.arange(0.0, tau_max + dtau, dtau)
    values = target_trajectory(p, taus, target)
    hits = np.nonzero(values >= threshold)[0]
    if len(hits) == 0:
        return None
    i = int(hits[0])
    if i == 0:
        return 0.0
    lo, hi = taus[i - 1], taus[i]
    while hi - lo > 1e-9:
        mid = 0.5 * (lo + hi)
        if target_expectation(p, mid, target) >= threshold:
            hi = mid
        else:
            lo = mid
    return float(0.5 * (lo + hi))


def default_bounds(omega_hat: float) -> dict:
    """Search box covering all closed-form branches with margin."""
    return {"bz": (-omega_hat, omega_hat), "omega_rf": (-8.0, 8.0), "theta0": (0.0, 2.0 * math.pi)}


@dataclass
class SearchResult:
    """Best point found by a grid or local search over the rotating ansatz."""

    best_params: ControlParams | None
    best_tau: float | None
    achieved: float  # largest target expectation seen anywhere
    achieved_params: ControlParams | None
    achieved_tau: float | None
    grid_spec: dict
    feasible: bool
    trace: list = field(default_factory=list)
    landscape: list = field(default_factory=list)  # (bz, omega_rf, theta0, tau_to_threshold, peak, peak_tau)


def _axis(bounds: dict, name: str, resolution: int) -> np.ndarray:
    lo, hi = bounds[name]
    if hi < lo:
        raise ValueError(f"empty bounds for {name}: ({lo}, {hi})")
    if resolution == 1:
        return np.array([0.5 * (lo + hi)])
    return np.linspace(lo, hi, resolution)


def grid_search(
    omega_hat: float,
    k: float,
    target: str = "x8",
    bounds: dict | None = None,
    resolution: int = 21,
    threshold: float = 0.999,
    tau_max: float | None = None,
    dtau: float = 1e-2,
    collect_landscape: bool = False,
) -> SearchResult:
    """Exhaustive scan of the energy-shell ansatz for the earliest threshold crossing.

    Deterministic for fixed inputs.  bz values outside the energy shell are
    skipped (no real transverse amplitude there).  The result also records the
    largest target expectation seen, reached or not, and optionally the whole
    (parameters -> reach time, peak) landscape.
    """
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    bounds = dict(bounds) if bounds is not None else default_bounds(omega_hat)
    for key in ("bz", "omega_rf", "theta0"):
        if key not in bounds:
            raise ValueError(f"bounds must provide {key!r}")
    if tau_max is None:
        tau_max = 3.0 * 0.25 * math.sqrt(3.0) * math.pi
    taus = np.arange(0.0, tau_max + dtau, dtau)
    idx = _target_index(target)

    best_tau = math.inf
    best_params: ControlParams | None = None
    achieved = -math.inf
    achieved_params: ControlParams | None = None
    achieved_tau: float | None = None
    landscape: list = []
    shell = omega_hat**2 - (1.0 + k**2)
    for bz in _axis(bounds, "bz", resolution):
        if bz**2 > shell:
            continue
        b0 = transverse_amplitude(omega_hat, k, bz)
        for omega_rf in _axis(bounds, "omega_rf", resolution):
            for theta0 in _axis(bounds, "theta0", resolution):
                p = ControlParams(k=k, omega_hat=omega_hat, b0=b0, bz=bz, omega_rf=omega_rf, theta0=theta0)
                values = exact_state_trajectory(p, _X0, taus)[:, idx]
                peak = int(np.argmax(values))
                if values[peak] > achieved:
                    achieved = float(values[peak])
                    achieved_params, achieved_tau = p, float(taus[peak])
                reached: float | None = None
                hits = np.nonzero(values >= threshold)[0]
                if len(hits):
                    reached = min_time_to_target(p, target, threshold, tau_max=float(taus[hits[0]]) + dtau, dtau=dtau)
                    if reached is not None and reached < best_tau:
                        best_tau, best_params = reached, p
                if collect_landscape:
                    landscape.append(
                        (float(bz), float(omega_rf), float(theta0), reached, float(values[peak]), float(taus[peak]))
                    )
    return SearchResult(
        best_params=best_params,
        best_tau=None if math.isinf(best_tau) else best_tau,
        achieved=achieved,
        achieved_params=achieved_params,
        achieved_tau=achieved_tau,
        grid_spec={
            "omega_hat": omega_hat,
            "k": k,
            "target": target,
            "bounds": bounds,
            "resolution": resolution,
            "threshold": threshold,
            "tau_max": tau_max,
            "dtau": dtau,
        },
        feasible=best_params is not None,
        landscape=landscape,
    )


def refine_local(seed: SearchResult, iterations: int = 120) -> SearchResult:
    """Simplex refinement of (bz, omega_rf, theta0) minimizing the threshold-crossing time.

    The energy constraint is restored after every move by recomputing b0 from
    (omega_hat, k, bz).  The reported time never increases across iterations;
    an infeasible seed is returned unchanged.
    """
    if not seed.feasible or seed.best_params is None or seed.best_tau is None:
        return replace(seed, trace=list(seed.trace))
    spec = seed.grid_spec
    omega_hat, k = spec["omega_hat"], spec["k"]
    target, threshold = spec["target"], spec["threshold"]
    tau_max, dtau = spec["tau_max"], spec["dtau"]
    shell = omega_hat**2 - (1.0 + k**2)
    best = {"tau": seed.best_tau, "params": seed.best_params}
    trace = [seed.best_tau]

    def objective(v: np.ndarray) -> float:
        bz, omega_rf, theta0 = v
        if bz**2 >= shell:
            return 10.0 * tau_max
        p = ControlParams(
            k=k, omega_hat=omega_hat, b0=transverse_amplitude(omega_hat, k, bz),
            bz=float(bz), omega_rf=float(omega_rf), theta0=float(theta0),
        )
        t = min_time_to_target(p, target, threshold, tau_max=tau_max, dtau=dtau)
        if t is None:
            return 10.0 * tau_max
        if t < best["tau"]:
            best["tau"], best["params"] = t, p
        trace.append(best["tau"])
        return t

    x0 = np.array([seed.best_params.bz, seed.best_params.omega_rf, seed.best_params.theta0])
    minimize(objective, x0, method="Nelder-Mead", options={"maxfev": iterations, "xatol": 1e-10, "fatol": 1e-12})
    return replace(seed, best_params=best["params"], best_tau=best["tau"], trace=trace)


@dataclass(frozen=True)
class ProbeResult:
    """Supremum of a target expectation over the ansatz grid and a tau window."""

    max_value: float
    params: ControlParams | None
    tau: float | None
    per_omega: tuple


def no_transfer_probe(
    omega_hat_list,
    tau_max: float,
    resolution: int = 21,
    target: str = "x7",
    k: float = 1.0,
    dtau: float = 1e-2,
) -> ProbeResult:
    """Maximize x_target over the ansatz grid for each energy scale in the list."""
    per_omega = []
    best = ProbeResult(max_value=-math.inf, params=None, tau=None, per_omega=())
    for omega_hat in omega_hat_list:
        result = grid_search(
            omega_hat, k, target=target, resolution=resolution, threshold=1.0, tau_max=tau_max, dtau=dtau
        )
        per_omega.append((float(omega_hat), result.achieved))
        if result.achieved > best.max_value:
            best = ProbeResult(
                max_value=result.achieved,
                params=result.achieved_params,
                tau=result.achieved_tau,
                per_omega=(),
            )
    return ProbeResult(best.max_value, best.params, best.tau, tuple(per_omega))
