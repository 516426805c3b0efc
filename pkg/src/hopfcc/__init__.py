"""Stability loss of a link-price model under round-trip delay, with a
delayed-feedback controller: critical delays, normal form, simulation."""

from .dde import ConstantHistory, SimConfig, TabulatedHistory, Trajectory, simulate
from .diagnostics import (
    CycleReport,
    RunSettings,
    Verdict,
    detect_cycle,
    empirical_onset,
    sweep_tau,
)
from .hopf import (
    HopfPoint,
    critical_point,
    design_gain,
    feasible_gain_range,
    find_rightmost_root,
    hopf_point,
    tau0_vs_h,
    transversality,
    uncontrolled_tau0,
)
from .model import (
    Equilibrium,
    ModelParams,
    ProportionalFair,
    TaylorCoeffs,
    UserSupplied,
    reference_params,
    solve_equilibrium,
    taylor_coeffs,
)
from .normal_form import NormalFormResult, classify, normal_form

__version__ = "0.1.0"

__all__ = [
    "ConstantHistory",
    "CycleReport",
    "Equilibrium",
    "HopfPoint",
    "ModelParams",
    "NormalFormResult",
    "ProportionalFair",
    "RunSettings",
    "SimConfig",
    "TabulatedHistory",
    "TaylorCoeffs",
    "Trajectory",
    "UserSupplied",
    "Verdict",
    "classify",
    "critical_point",
    "design_gain",
    "detect_cycle",
    "empirical_onset",
    "feasible_gain_range",
    "find_rightmost_root",
    "hopf_point",
    "normal_form",
    "reference_params",
    "simulate",
    "solve_equilibrium",
    "sweep_tau",
    "tau0_vs_h",
    "taylor_coeffs",
    "transversality",
    "uncontrolled_tau0",
]
