"""Fixed-step RK4 integration of the delayed price dynamics.

The step is ``tau / steps_per_delay`` so the delayed state at grid times is a
stored value.  RK4's half-step stages need ``p`` at ``t + dt/2 - tau``, which is
taken from a four-point cubic through neighbouring grid values.  Stencils
never straddle t = 0, where the history generally meets the solution with a
kink, nor t = tau, where that kink leaves a jump in the second derivative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import InvalidHistory
from .model import ModelParams

# Lagrange weights for the midpoint of a cell, by stencil position
_CENTRED = (-1 / 16, 9 / 16, 9 / 16, -1 / 16)  # nodes j-1, j, j+1, j+2
_FORWARD = (5 / 16, 15 / 16, -5 / 16, 1 / 16)  # nodes j, j+1, j+2, j+3
_BACKWARD = (1 / 16, -5 / 16, 15 / 16, 5 / 16)  # nodes j-2, j-1, j, j+1


@dataclass(frozen=True)
class ConstantHistory:
    p0: float

    def sample(self, s: np.ndarray) -> np.ndarray:
        return np.full(len(s), float(self.p0))


@dataclass(frozen=True)
class TabulatedHistory:
    """History given as (s, p) samples on [-tau, 0], linearly interpolated."""

    s: Sequence[float]
    p: Sequence[float]

    def sample(self, s: np.ndarray) -> np.ndarray:
        return np.interp(s, np.asarray(self.s, float), np.asarray(self.p, float))


HistorySpec = Union[ConstantHistory, TabulatedHistory]


@dataclass(frozen=True)
class SimConfig:
    tau: float
    h: float = 0.0
    steps_per_delay: int = 40
    duration: float = 300.0
    record_stride: int = 1

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if self.steps_per_delay < 4:
            raise ValueError("steps_per_delay must be at least 4")
        if self.record_stride < 1:
            raise ValueError("record_stride must be a positive integer")
        if self.duration < 10 * self.tau:
            raise ValueError(f"duration {self.duration} shorter than 10 tau = {10 * self.tau}")

    @property
    def dt(self) -> float:
        return self.tau / self.steps_per_delay


@dataclass
class TrajectoryFlags:
    went_nonpositive: bool = False
    nonfinite: bool = False

    def any(self) -> bool:
        return self.went_nonpositive or self.nonfinite


@dataclass
class Trajectory:
    t: np.ndarray
    p: np.ndarray
    p_delayed: np.ndarray
    tau: float
    flags: TrajectoryFlags = field(default_factory=TrajectoryFlags)


def validate_history(history: HistorySpec, tau: float) -> None:
    if isinstance(history, ConstantHistory):
        if not (math.isfinite(history.p0) and history.p0 > 0):
            raise InvalidHistory(f"constant history must be finite and positive, got {history.p0}")
        return
    s = np.asarray(history.s, float)
    p = np.asarray(history.p, float)
    if s.ndim != 1 or s.shape != p.shape or len(s) < 2:
        raise InvalidHistory("tabulated history needs matching 1-d s and p arrays of length >= 2")
    if not np.all(np.diff(s) > 0):
        raise InvalidHistory("history times must be strictly increasing")
    span = max(1.0, tau)
    if abs(s[0] + tau) > 1e-9 * span or abs(s[-1]) > 1e-9 * span:
        raise InvalidHistory(f"history must cover [-tau, 0] with endpoints present, got [{s[0]}, {s[-1]}]")
    if not (np.all(np.isfinite(p)) and np.all(p > 0)):
        raise InvalidHistory("history prices must be finite and positive")


def simulate(
    params: ModelParams,
    history: HistorySpec,
    config: SimConfig,
    rhs: Optional[Callable[[float, float], float]] = None,
) -> Trajectory:
    """Integrate the controlled model (feedback gain ``config.h``).

    ``rhs(p, p_delayed)`` overrides the vector field; used to run the
    uncontrolled model directly.
    """
    validate_history(history, config.tau)
    N = config.steps_per_delay
    dt = config.dt
    n_steps = int(round(config.duration / dt))

    if rhs is None:
        k, c, h, x = params.k, params.c, config.h, params.demand.value

        def rhs(p, pd):
            return k * p * (x(pd) - c) + h * (p - pd)

    # y[i] holds p at t = (i - N) dt
    y = [0.0] * (N + 1 + n_steps)
    y[: N + 1] = [float(v) for v in history.sample(np.linspace(-config.tau, 0.0, N + 1))]

    flags = TrajectoryFlags()
    half = 0.5 * dt
    last = n_steps
    a0, a1, a2, a3 = _CENTRED
    for n in range(n_steps):
        cur = N + n
        p = y[cur]
        d0 = y[n]
        d1 = y[n + 1]
        if n == 0:
            w = _FORWARD
            dm = w[0] * y[0] + w[1] * y[1] + w[2] * y[2] + w[3] * y[3]
        elif n == N or n == 2 * N:
            w = _FORWARD
            dm = w[0] * y[n] + w[1] * y[n + 1] + w[2] * y[n + 2] + w[3] * y[n + 3]
        elif n == N - 1 or n == 2 * N - 1:
            w = _BACKWARD
            dm = w[0] * y[n - 2] + w[1] * y[n - 1] + w[2] * y[n] + w[3] * y[n + 1]
        else:
            dm = a0 * y[n - 1] + a1 * d0 + a2 * d1 + a3 * y[n + 2]

        k1 = rhs(p, d0)
        k2 = rhs(p + half * k1, dm)
        k3 = rhs(p + half * k2, dm)
        k4 = rhs(p + dt * k3, d1)
        nxt = p + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

        if not math.isfinite(nxt):
            flags.nonfinite = True
            last = n
            break
        if nxt <= 0.0:
            flags.went_nonpositive = True
        y[cur + 1] = nxt

    arr = np.asarray(y[: N + 1 + last])
    idx = np.arange(0, last + 1, config.record_stride)
    return Trajectory(
        t=idx * dt,
        p=arr[N + idx],
        p_delayed=arr[idx],
        tau=config.tau,
        flags=flags,
    )
