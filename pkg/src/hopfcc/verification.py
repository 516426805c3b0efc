"""Cross-checks between the analytic results and the numerics."""

from __future__ import annotations

from dataclasses import dataclass, replace

from .diagnostics import RunSettings, Verdict, empirical_onset, sweep_tau
from .hopf import find_rightmost_root, hopf_point, transversality
from .model import ModelParams, solve_equilibrium, taylor_coeffs
from .normal_form import Direction, OrbitStability, classify, normal_form


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


def run_battery(
    params: ModelParams,
    h: float,
    settings: RunSettings = RunSettings(),
    b2_offset: float = 0.0,
    onset_tol: float = 0.05,
) -> list[Check]:
    """Run every check; ``b2_offset`` perturbs the root finder's b2 (negative control).

    Raises GainOutOfRange / DegenerateFrequency before any check runs when h
    is infeasible.
    """
    eq = solve_equilibrium(params)
    coeffs = taylor_coeffs(params, eq, h)
    hp = hopf_point(coeffs)
    probe = replace(coeffs, b2=coeffs.b2 + b2_offset)
    checks = []

    root = find_rightmost_root(probe, hp.tau0).lam
    ok = abs(root.real) < 1e-7 and abs(root.imag - hp.omega0) < 1e-7
    checks.append(Check("root_vs_formula", ok, f"lambda(tau0)={root:.3e}, omega0={hp.omega0:.12g}"))

    below = find_rightmost_root(probe, 0.9 * hp.tau0).lam.real
    above = find_rightmost_root(probe, 1.1 * hp.tau0).lam.real
    checks.append(Check("sign_change", below < 0 < above, f"Re at 0.9 tau0={below:.3e}, at 1.1 tau0={above:.3e}"))

    step = 1e-4 * hp.tau0
    fd = (
        find_rightmost_root(probe, hp.tau0 + step).lam.real
        - find_rightmost_root(probe, hp.tau0 - step).lam.real
    ) / (2 * step)
    closed = transversality(coeffs, hp).real
    rel = abs(fd - closed) / abs(closed)
    checks.append(Check("transversality_fd", rel < 1e-3, f"fd={fd:.9g}, closed={closed:.9g}, rel={rel:.2e}"))

    grid = [0.9 * hp.tau0, 0.95 * hp.tau0, 1.05 * hp.tau0, 1.1 * hp.tau0]
    rows = sweep_tau(params, h, grid, settings)
    try:
        onset = empirical_onset(rows, params, h, settings)
        ok = abs(onset - hp.tau0) < onset_tol
        detail = f"onset={onset:.5f}, tau0={hp.tau0:.5f}"
    except Exception as exc:  # reported as a failed check, not raised
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    checks.append(Check("empirical_onset", ok, detail))

    cls = classify(normal_form(coeffs, hp))
    below_v, above_v = rows[0].verdict, rows[-1].verdict
    if cls.direction is Direction.SUPERCRITICAL and cls.orbit_stability is OrbitStability.STABLE:
        ok = below_v == Verdict.CONVERGED.value and above_v == Verdict.LIMIT_CYCLE.value
    else:
        ok = above_v != Verdict.LIMIT_CYCLE.value
    checks.append(
        Check(
            "classification_vs_simulation",
            ok,
            f"{cls.direction.value}/{cls.orbit_stability.value}; 0.9 tau0: {below_v}, 1.1 tau0: {above_v}",
        )
    )
    return checks
