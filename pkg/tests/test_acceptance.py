"""Acceptance criteria on the reference configuration (k = 0.01, c = 50, x = 1/p).

Each test records one ``criterion N: PASS|FAIL ...`` line, printed live with
``-s`` and collected in the terminal summary otherwise.
"""

import math

import numpy as np
import pytest
from conftest import ACCEPTANCE_LINES

from hopfcc.dde import ConstantHistory, SimConfig, simulate
from hopfcc.diagnostics import (
    RunSettings,
    amplitude_scaling_fit,
    empirical_onset,
    measured_period,
    period_trend_check,
    run_point,
    sweep_tau,
)
from hopfcc.hopf import (
    critical_point,
    feasible_gain_range,
    find_rightmost_root,
    hopf_point,
    transversality,
    uncontrolled_tau0,
)
from hopfcc.model import TaylorCoeffs, literal_params, solve_equilibrium, taylor_coeffs
from hopfcc.normal_form import classify, normal_form

SETTINGS = RunSettings()


def verdict(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def coeffs(params, h):
    return taylor_coeffs(params, solve_equilibrium(params), h)


def test_criterion_01_critical_points(params):
    expected = {0.0: (0.5, 3.1416), -0.1: (0.3873, 4.7082), -0.15: (None, 6.3679)}
    parts, ok = [], True
    for h, (w_ref, t_ref) in expected.items():
        hp = hopf_point(coeffs(params, h))
        ok &= abs(hp.tau0 - t_ref) < 1e-3 and (w_ref is None or abs(hp.omega0 - w_ref) < 1e-3)
        parts.append(f"h={h:g}: omega0={hp.omega0:.5f} tau0={hp.tau0:.5f}")
    verdict(1, ok, "; ".join(parts))


def test_criterion_02_gain_range(params):
    r = feasible_gain_range(coeffs(params, 0.0).b)
    verdict(2, (r.lower, r.upper) == (-0.25, 0.0), f"[{r.lower}, {r.upper})")


def test_criterion_03_normal_form(params, frozen):
    expected = {0.0: (5259.2, 2125.0, -758.38), -0.1: (27606.0, 5572.9, -1508.9)}
    parts, ok = [], True
    for h, (mu2, T2, beta2) in expected.items():
        nf = normal_form(coeffs(params, h))
        cls = classify(nf)
        rel = max(abs(nf.mu2 / mu2 - 1), abs(nf.T2 / T2 - 1), abs(nf.beta2 / beta2 - 1))
        labels = (cls.direction.value, cls.orbit_stability.value, cls.period_trend.value)
        ok &= rel < 0.01 and labels == ("supercritical", "stable", "increasing")
        ref = frozen["reference"][f"{h:g}"]
        ok &= abs(nf.mu2 / ref["mu2"] - 1) < 1e-9
        parts.append(
            f"h={h:g}: mu2={nf.mu2:.1f} T2={nf.T2:.1f} beta2={nf.beta2:.2f} max rel={rel:.1e} {'/'.join(labels)}"
        )
    verdict(3, ok, "; ".join(parts))


SCENARIOS = [
    (0.0, 3.0, "Converged"),
    (0.0, 3.2, "LimitCycle"),
    (0.0, 3.4, "LimitCycle"),
    (-0.1, 3.4, "Converged"),
    (-0.1, 4.8, "LimitCycle"),
    (-0.1, 5.2, "LimitCycle"),
    (-0.15, 5.2, "Converged"),
]


def test_criterion_04_figure_scenarios(params):
    got = [run_point(params, h, tau, SETTINGS)[1].verdict.value for h, tau, _ in SCENARIOS]
    ok = got == [v for *_, v in SCENARIOS]
    detail = ", ".join(f"({h:g},{tau:g})={v}" for (h, tau, _), v in zip(SCENARIOS, got))
    verdict(4, ok, detail)


def test_criterion_05_onset_frequency(params):
    parts, ok = [], True
    for h in (0.0, -0.1):
        hp = critical_point(coeffs(params, h).b, h)
        period = measured_period(params, h, 1.02 * hp.tau0, SETTINGS)
        target = 2 * math.pi / hp.omega0
        ok &= abs(period / target - 1) < 0.15
        parts.append(f"h={h:g}: period={period:.3f} vs 2pi/omega0={target:.3f}")
    verdict(5, ok, "; ".join(parts))


def test_criterion_06_period_trend(params):
    a = period_trend_check(params, 0.0, (3.2, 3.4), SETTINGS)
    b = period_trend_check(params, -0.1, (4.8, 5.2), SETTINGS)
    verdict(6, a and b, f"h=0 (3.2->3.4) increasing={a}; h=-0.1 (4.8->5.2) increasing={b}")


def test_criterion_07_empirical_onset(params):
    parts, ok = [], True
    for h in (0.0, -0.1, -0.15):
        tau0 = critical_point(coeffs(params, h).b, h).tau0
        rows = sweep_tau(params, h, [f * tau0 for f in (0.9, 0.95, 1.05, 1.1)], SETTINGS)
        onset = empirical_onset(rows, params, h, SETTINGS)
        ok &= abs(onset - tau0) < 0.05
        parts.append(f"h={h:g}: onset={onset:.4f} tau0={tau0:.4f}")
    verdict(7, ok, "; ".join(parts))


def test_criterion_08_root_finder_cross_validation():
    rng = np.random.default_rng(20261016)
    worst_root, worst_slope, flips = 0.0, 0.0, 0
    for _ in range(20):
        b = -rng.uniform(0.05, 3.0)
        h = 0.5 * b * rng.uniform(0.0, 0.95)
        c = TaylorCoeffs(b=b, b2=b - h, b4=0.0, b5=0.0, b8=0.0, b9=0.0, h=h)
        hp = critical_point(b, h)
        lam = find_rightmost_root(c, hp.tau0).lam
        worst_root = max(worst_root, abs(lam.real), abs(lam.imag - hp.omega0))
        below = find_rightmost_root(c, 0.95 * hp.tau0).lam.real
        above = find_rightmost_root(c, 1.05 * hp.tau0).lam.real
        flips += below < 0 < above
        step = 1e-4 * hp.tau0
        plus = find_rightmost_root(c, hp.tau0 + step).lam.real
        minus = find_rightmost_root(c, hp.tau0 - step).lam.real
        fd = (plus - minus) / (2 * step)
        closed = transversality(c, hp).real
        worst_slope = max(worst_slope, abs(fd / closed - 1))
    ok = worst_root < 1e-7 and flips == 20 and worst_slope < 1e-3
    verdict(8, ok, f"20 pairs: max root error={worst_root:.1e}, sign flips={flips}/20, max slope rel={worst_slope:.1e}")


@pytest.mark.parametrize("h", [0.0, -0.1])
def test_criterion_09_amplitude_scaling(params, h):
    exponent = amplitude_scaling_fit(params, h, n_points=5, settings=SETTINGS)
    verdict(9, 0.4 <= exponent <= 0.6, f"h={h:g}: exponent={exponent:.3f} (delta = 0.02..0.10 tau0)")


def test_criterion_10_integrator_order(params):
    def run(N):
        cfg = SimConfig(tau=3.0, steps_per_delay=N, duration=60.0)
        return simulate(params, ConstantHistory(0.03), cfg).p

    ref = run(640)
    err = {N: float(np.max(np.abs(run(N) - ref[:: 640 // N]))) for N in (40, 80)}
    factor = err[40] / err[80]
    verdict(10, factor >= 8, f"tau=3: error N=40 {err[40]:.2e}, N=80 {err[80]:.2e}, factor={factor:.2f}")


def test_criterion_11_equilibrium_preservation(params):
    rng = np.random.default_rng(11)
    p_star = solve_equilibrium(params).p_star
    lower = feasible_gain_range(coeffs(params, 0.0).b).lower
    worst = 0.0
    for h in rng.uniform(lower, 0.0, 20):
        tau = rng.uniform(1.0, 12.0)
        tr = simulate(params, ConstantHistory(p_star), SimConfig(tau=tau, h=float(h), duration=100 * tau))
        worst = max(worst, float(np.max(np.abs(tr.p - p_star))))
    verdict(11, worst < 1e-10, f"20 gains, max drift over 100 tau = {worst:.1e}")


def test_criterion_12_literal_gain():
    p = literal_params()
    tau0 = uncontrolled_tau0(coeffs(p, 0.0).b)
    verdict(12, abs(tau0 - 0.31416) < 1e-5, f"k=0.1 gives b=-5, tau0={tau0:.5f} (reference k=0.01 gives 3.14159)")
