"""Run configuration: ``section.key = value`` text with ``#`` comments.

Defaults reproduce the reference setting k = 0.01, c = 50, x(p) = 1/p.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import Optional

from .errors import ConfigError
from .model import ModelParams, ProportionalFair


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _opt(conv):
    def parse(text: str):
        return None if text.strip().lower() in ("", "none", "auto") else conv(text)

    return parse


@dataclass
class ModelSection:
    k: float = 0.01
    c: float = 50.0
    demand: str = "proportional_fair"
    weight: float = 1.0


@dataclass
class ControlSection:
    h: float = 0.0
    tau: float = 3.4
    tau_target: Optional[float] = None


@dataclass
class SimSection:
    steps_per_delay: int = 40
    duration: float = 2000.0
    history: str = "factor"  # factor | constant | tabulated
    history_value: float = 1.5
    history_file: Optional[str] = None
    record_stride: Optional[int] = None


@dataclass
class DetectSection:
    transient_fraction: float = 0.5
    converge: float = 1e-4
    cycle: float = 1e-3
    trend: float = 0.02


@dataclass
class SweepSection:
    start: Optional[float] = None
    stop: Optional[float] = None
    count: Optional[int] = None


@dataclass
class OutputSection:
    path: str = "-"
    precision: int = 17
    timestamp: bool = False


@dataclass
class RunConfig:
    model: ModelSection = field(default_factory=ModelSection)
    control: ControlSection = field(default_factory=ControlSection)
    sim: SimSection = field(default_factory=SimSection)
    detect: DetectSection = field(default_factory=DetectSection)
    sweep: SweepSection = field(default_factory=SweepSection)
    output: OutputSection = field(default_factory=OutputSection)

    def params(self) -> ModelParams:
        return ModelParams(k=self.model.k, c=self.model.c, demand=ProportionalFair(self.model.weight))


CONVERTERS = {
    "model.k": float,
    "model.c": float,
    "model.demand": str,
    "model.weight": float,
    "control.h": float,
    "control.tau": float,
    "control.tau_target": _opt(float),
    "sim.steps_per_delay": int,
    "sim.duration": float,
    "sim.history": str,
    "sim.history_value": float,
    "sim.history_file": _opt(str),
    "sim.record_stride": _opt(int),
    "detect.transient_fraction": float,
    "detect.converge": float,
    "detect.cycle": float,
    "detect.trend": float,
    "sweep.start": _opt(float),
    "sweep.stop": _opt(float),
    "sweep.count": _opt(int),
    "output.path": str,
    "output.precision": int,
    "output.timestamp": _bool,
}


def parse_text(text: str, source: str = "<config>") -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'section.key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in CONVERTERS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def build(entries: dict[str, str]) -> RunConfig:
    cfg = RunConfig()
    for key, text in entries.items():
        if key not in CONVERTERS:
            raise ConfigError(f"unknown key {key!r}")
        section, name = key.split(".", 1)
        try:
            value = CONVERTERS[key](text)
        except ValueError as exc:
            raise ConfigError(f"{key}: {exc}") from exc
        setattr(getattr(cfg, section), name, value)
    validate(cfg)
    return cfg


def validate(cfg: RunConfig) -> None:
    m, s, d, o, sw = cfg.model, cfg.sim, cfg.detect, cfg.output, cfg.sweep
    checks = [
        (m.k > 0, "model.k must be positive"),
        (m.c > 0, "model.c must be positive"),
        (m.weight > 0, "model.weight must be positive"),
        (m.demand == "proportional_fair", "model.demand: only 'proportional_fair' is configurable"),
        (cfg.control.tau > 0, "control.tau must be positive"),
        (cfg.control.tau_target is None or cfg.control.tau_target > 0, "control.tau_target must be positive"),
        (s.steps_per_delay >= 4, "sim.steps_per_delay must be >= 4"),
        (s.duration > 0, "sim.duration must be positive"),
        (s.history in ("factor", "constant", "tabulated"), "sim.history must be factor, constant or tabulated"),
        (s.history_value > 0, "sim.history_value must be positive"),
        (s.history != "tabulated" or s.history_file, "sim.history_file required for tabulated history"),
        (s.record_stride is None or s.record_stride >= 1, "sim.record_stride must be >= 1"),
        (0 < d.transient_fraction < 1, "detect.transient_fraction must lie in (0, 1)"),
        (0 < d.converge <= d.cycle, "detect thresholds need 0 < converge <= cycle"),
        (d.trend > 0, "detect.trend must be positive"),
        (sw.count is None or sw.count >= 1, "sweep.count must be >= 1"),
        (1 <= o.precision <= 17, "output.precision must be in [1, 17]"),
    ]
    for ok, msg in checks:
        if not ok:
            raise ConfigError(msg)


def load(path: Optional[str] = None, overrides: Optional[dict[str, str]] = None) -> RunConfig:
    entries: dict[str, str] = {}
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                entries.update(parse_text(fh.read(), path))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for key, value in (overrides or {}).items():
        if key not in CONVERTERS:
            raise ConfigError(f"unknown override --{key}")
        entries[key] = value
    return build(entries)


def dump(cfg: RunConfig) -> str:
    lines = []
    for sec in fields(cfg):
        obj = getattr(cfg, sec.name)
        for f in fields(obj):
            v = getattr(obj, f.name)
            lines.append(f"{sec.name}.{f.name} = {'auto' if v is None else v}")
    return "\n".join(lines) + "\n"
