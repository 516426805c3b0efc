"""Command-line entry point.

    hopfcc analyze      [--config FILE] [--section.key=value ...]
    hopfcc simulate     ...
    hopfcc sweep-tau    ...
    hopfcc sweep-gain   ...
    hopfcc design-gain  ...
    hopfcc verify       ...

Exit codes: 0 success, 2 configuration error, 3 infeasible gain or target,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import contextlib
import datetime as _dt
import sys
from typing import Optional, Sequence

import numpy as np

from . import config as cfgmod
from .csvio import read_csv, write_csv
from .dde import ConstantHistory, TabulatedHistory, simulate
from .diagnostics import (
    RunSettings,
    Thresholds,
    detect_cycle,
    sim_config_for,
    sweep_tau,
)
from .errors import (
    ConfigError,
    DegenerateBifurcation,
    DegenerateFrequency,
    GainOutOfRange,
    HopfCCError,
    InvalidModel,
    TargetTooSmall,
)
from .hopf import (
    critical_point,
    design_gain,
    feasible_gain_range,
    hopf_point,
    transversality,
)
from .model import solve_equilibrium, taylor_coeffs
from .normal_form import classify, normal_form
from .verification import run_battery

EXIT_OK, EXIT_CONFIG, EXIT_INFEASIBLE, EXIT_NUMERIC = 0, 2, 3, 4

INFEASIBLE = (GainOutOfRange, DegenerateFrequency, InvalidModel, TargetTooSmall)


def _settings(cfg: cfgmod.RunConfig) -> RunSettings:
    return RunSettings(
        steps_per_delay=cfg.sim.steps_per_delay,
        duration=cfg.sim.duration,
        history_factor=cfg.sim.history_value if cfg.sim.history == "factor" else 1.5,
        record_stride=cfg.sim.record_stride,
        transient_fraction=cfg.detect.transient_fraction,
        converge=cfg.detect.converge,
        cycle=cfg.detect.cycle,
        trend=cfg.detect.trend,
    )


@contextlib.contextmanager
def _output(cfg: cfgmod.RunConfig, stdout):
    if cfg.output.path == "-":
        yield stdout
    else:
        with open(cfg.output.path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _comments(cfg: cfgmod.RunConfig) -> list[str]:
    if cfg.output.timestamp:
        return [f"generated {_dt.datetime.now(_dt.timezone.utc).isoformat(timespec='seconds')}"]
    return []


def _fmt_c(z: complex) -> str:
    return f"{z.real:.10g} {'+' if z.imag >= 0 else '-'} {abs(z.imag):.10g}i"


def cmd_analyze(cfg, out, err) -> int:
    params = cfg.params()
    eq = solve_equilibrium(params)
    coeffs = taylor_coeffs(params, eq, cfg.control.h)
    gains = feasible_gain_range(coeffs.b)
    hp = hopf_point(coeffs)
    slope = transversality(coeffs, hp)
    nf = normal_form(coeffs, hp)
    try:
        cls = classify(nf)
        cls_text = (
            f"{cls.direction.value}, periodic orbits {cls.orbit_stability.value}, "
            f"period {cls.period_trend.value}"
        )
    except DegenerateBifurcation as exc:
        cls_text = f"degenerate ({exc})"

    lines = [
        f"p*        = {eq.p_star:.10g}",
        f"b         = {coeffs.b:.10g}",
        f"b2        = {coeffs.b2:.10g}",
        f"b4, b5    = {coeffs.b4:.10g}, {coeffs.b5:.10g}",
        f"b8, b9    = {coeffs.b8:.10g}, {coeffs.b9:.10g}",
        f"h         = {coeffs.h:.10g}",
        f"gain range= [{gains.lower:.10g}, {gains.upper:g})",
        f"omega0    = {hp.omega0:.10g}",
        f"tau0      = {hp.tau0:.10g}",
        f"dlam/dtau = {_fmt_c(slope)}",
        f"B         = {_fmt_c(nf.B)}",
        f"g20       = {_fmt_c(nf.g20)}",
        f"g11       = {_fmt_c(nf.g11)}",
        f"g02       = {_fmt_c(nf.g02)}",
        f"g21       = {_fmt_c(nf.g21)}",
        f"E1        = {_fmt_c(nf.E1)}",
        f"E2        = {_fmt_c(nf.E2)}",
        f"C1(0)     = {_fmt_c(nf.C1)}",
        f"mu2       = {nf.mu2:.10g}",
        f"beta2     = {nf.beta2:.10g}",
        f"T2        = {nf.T2:.10g}",
        f"bifurcation: {cls_text}",
    ]
    if cfg.output.path == "-":
        out.write("\n".join(lines) + "\n")
    else:
        err.write("\n".join(lines) + "\n")
        rows = [
            ("p_star", eq.p_star, 0.0),
            ("b", coeffs.b, 0.0),
            ("b2", coeffs.b2, 0.0),
            ("h", coeffs.h, 0.0),
            ("gain_lower", gains.lower, 0.0),
            ("omega0", hp.omega0, 0.0),
            ("tau0", hp.tau0, 0.0),
            ("slope", slope.real, slope.imag),
        ]
        for n in ("B", "g20", "g11", "g02", "g21", "E1", "E2", "C1"):
            rows.append((n, getattr(nf, n).real, getattr(nf, n).imag))
        rows += [("mu2", nf.mu2, 0.0), ("beta2", nf.beta2, 0.0), ("T2", nf.T2, 0.0)]
        with _output(cfg, out) as fh:
            write_csv(fh, ["quantity", "real", "imag"], rows, cfg.output.precision, _comments(cfg))
    return EXIT_OK


def _history(cfg, p_star, tau):
    s = cfg.sim
    if s.history == "factor":
        return ConstantHistory(s.history_value * p_star)
    if s.history == "constant":
        return ConstantHistory(s.history_value)
    try:
        with open(s.history_file, encoding="utf-8") as fh:
            table = read_csv(fh)
        return TabulatedHistory(table.column("s"), table.column("p"))
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read history file {s.history_file}: {exc}") from exc


def cmd_simulate(cfg, out, err) -> int:
    params = cfg.params()
    p_star = solve_equilibrium(params).p_star
    h, tau = cfg.control.h, cfg.control.tau
    settings = _settings(cfg)
    try:
        sim_cfg = sim_config_for(params, h, tau, settings)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    traj = simulate(params, _history(cfg, p_star, tau), sim_cfg)

    if traj.flags.nonfinite:
        footer = ["verdict=ERROR nonfinite state, integration halted"]
    else:
        try:
            thr = Thresholds.relative_to(p_star, settings.converge, settings.cycle, settings.trend)
            rep = detect_cycle(traj, settings.transient_fraction, thr)
            footer = [
                f"verdict={rep.verdict.value} amplitude={rep.amplitude:.17g} "
                f"period={'' if rep.period is None else f'{rep.period:.17g}'} trend={rep.amplitude_trend:.6g}"
            ]
        except HopfCCError as exc:
            footer = [f"verdict=ERROR {type(exc).__name__}: {exc}"]
    with _output(cfg, out) as fh:
        write_csv(
            fh,
            ["t", "p", "p_delayed"],
            zip(traj.t, traj.p, traj.p_delayed),
            cfg.output.precision,
            _comments(cfg),
            footer,
        )
    if traj.flags.nonfinite:
        err.write("integration produced a non-finite state\n")
        return EXIT_NUMERIC
    return EXIT_OK


def _grid(cfg, default_start, default_stop, default_count):
    sw = cfg.sweep
    start = default_start if sw.start is None else sw.start
    stop = default_stop if sw.stop is None else sw.stop
    count = default_count if sw.count is None else sw.count
    if count == 1:
        return [start]
    return [float(v) for v in np.linspace(start, stop, count)]


def cmd_sweep_tau(cfg, out, err) -> int:
    params = cfg.params()
    h = cfg.control.h
    eq = solve_equilibrium(params)
    b = taylor_coeffs(params, eq, h).b
    try:
        tau0 = critical_point(b, h).tau0
        start, stop = 0.9 * tau0, 1.1 * tau0
    except INFEASIBLE:
        tau0, start, stop = None, cfg.control.tau, cfg.control.tau
    grid = _grid(cfg, start, stop, 5)
    rows = sweep_tau(params, h, grid, _settings(cfg))
    for r in rows:
        if r.error:
            err.write(f"tau={r.value:.6g}: {r.error}\n")
    footer = [f"tau0={tau0:.17g}"] if tau0 is not None else []
    with _output(cfg, out) as fh:
        write_csv(
            fh,
            ["tau", "verdict", "amplitude", "period"],
            (
                (r.value, r.verdict, r.report.amplitude if r.report else None, r.report.period if r.report else None)
                for r in rows
            ),
            cfg.output.precision,
            _comments(cfg),
            footer,
        )
    return EXIT_OK


def cmd_sweep_gain(cfg, out, err) -> int:
    params = cfg.params()
    b = taylor_coeffs(params, solve_equilibrium(params), 0.0).b
    grid = _grid(cfg, 0.0, 0.96 * b / 2.0, 25)
    rows, bad = [], []
    for h in grid:
        try:
            hp = critical_point(b, h)
            rows.append((h, hp.omega0, hp.tau0))
        except INFEASIBLE as exc:
            bad.append(f"h={h:.17g}: {exc}")
    if bad:
        err.write("infeasible gains:\n" + "\n".join(bad) + "\n")
        return EXIT_INFEASIBLE
    with _output(cfg, out) as fh:
        write_csv(fh, ["h", "omega0", "tau0"], rows, cfg.output.precision, _comments(cfg))
    return EXIT_OK


def cmd_design_gain(cfg, out, err) -> int:
    params = cfg.params()
    b = taylor_coeffs(params, solve_equilibrium(params), 0.0).b
    target = cfg.control.tau_target
    if target is None:
        raise ConfigError("design-gain needs control.tau_target")
    h = design_gain(b, target, tol=1e-9)
    hp = critical_point(b, h)
    out.write(f"h = {h:.10g}\ntau0 = {hp.tau0:.10g}\nomega0 = {hp.omega0:.10g}\ntarget = {target:.10g}\n")
    return EXIT_OK


def cmd_verify(cfg, out, err, b2_offset: float = 0.0) -> int:
    checks = run_battery(cfg.params(), cfg.control.h, _settings(cfg), b2_offset=b2_offset)
    for c in checks:
        out.write(f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.detail}\n")
    ok = all(c.passed for c in checks)
    out.write(f"{'all checks passed' if ok else 'verification FAILED'}\n")
    return EXIT_OK if ok else 1


COMMANDS = {
    "analyze": cmd_analyze,
    "simulate": cmd_simulate,
    "sweep-tau": cmd_sweep_tau,
    "sweep-gain": cmd_sweep_gain,
    "design-gain": cmd_design_gain,
    "verify": cmd_verify,
}


def _split_overrides(extra: Sequence[str]) -> dict[str, str]:
    overrides = {}
    it = iter(extra)
    for tok in it:
        if not tok.startswith("--") or "." not in tok:
            raise ConfigError(f"unrecognised argument {tok!r}")
        key = tok[2:]
        if "=" in key:
            key, value = key.split("=", 1)
        else:
            value = next(it, None)
            if value is None:
                raise ConfigError(f"missing value for {tok}")
        overrides[key] = value
    return overrides


def main(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    parser = argparse.ArgumentParser(
        prog="hopfcc",
        description="Critical delays, normal form and simulation for a delayed price-feedback model.",
        epilog="Any config key can be overridden as --section.key=value.",
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", help="config file (section.key = value lines)")
    parser.add_argument("--timestamp", action="store_true", help="add a generation timestamp comment")
    parser.add_argument("--inject-b2-error", type=float, default=0.0, help=argparse.SUPPRESS)
    args, extra = parser.parse_known_args(argv)

    try:
        overrides = _split_overrides(extra)
        if args.timestamp:
            overrides["output.timestamp"] = "true"
        cfg = cfgmod.load(args.config, overrides)
        if args.command == "verify":
            return cmd_verify(cfg, out, err, b2_offset=args.inject_b2_error)
        return COMMANDS[args.command](cfg, out, err)
    except ConfigError as exc:
        err.write(f"config error: {exc}\n")
        return EXIT_CONFIG
    except INFEASIBLE as exc:
        err.write(f"infeasible: {exc}\n")
        return EXIT_INFEASIBLE
    except HopfCCError as exc:
        err.write(f"numerical failure: {type(exc).__name__}: {exc}\n")
        return EXIT_NUMERIC
    except ValueError as exc:
        err.write(f"invalid input: {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
