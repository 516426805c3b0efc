"""Linear stability of the equilibrium: critical delay, gain range, root finding.

The linearised dynamics ``u' = h u + b2 u(t - tau)`` have the characteristic
equation ``lambda - h - b2 exp(-lambda tau) = 0``.  A purely imaginary pair
``+-i omega0`` appears at the critical delay ``tau0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    BracketFailure,
    DegenerateFrequency,
    GainOutOfRange,
    InvalidModel,
    NoRootFound,
    TargetTooSmall,
)
from .model import TaylorCoeffs


@dataclass(frozen=True)
class GainRange:
    """Feasible feedback gains ``lower <= h < upper``."""

    lower: float
    upper: float = 0.0

    def __contains__(self, h: float) -> bool:
        return self.lower <= h < self.upper


@dataclass(frozen=True)
class HopfPoint:
    omega0: float
    tau0: float


@dataclass(frozen=True)
class CharRoot:
    lam: complex
    residual: float


@dataclass(frozen=True)
class RootSearch:
    """Starting grid and Newton settings for :func:`find_rightmost_root`.

    The box spans ``Re in [-re_left / tau, re_right]`` and
    ``Im in [0, im_periods * pi / tau]``.
    """

    n_re: int = 12
    n_im: int = 16
    re_left: float = 10.0
    re_right: float = 5.0
    im_periods: float = 4.0
    newton_tol: float = 1e-13
    max_iter: int = 200
    max_step: float = 1.0
    dedup_radius: float = 1e-6


def _require_negative_b(b: float) -> None:
    if not b < 0:
        raise InvalidModel(f"b must be negative, got {b}")


def feasible_gain_range(b: float) -> GainRange:
    _require_negative_b(b)
    return GainRange(lower=b / 2.0, upper=0.0)


def uncontrolled_tau0(b: float) -> float:
    """Critical delay without feedback, -pi / (2 b)."""
    _require_negative_b(b)
    return -math.pi / (2.0 * b)


def critical_point(b: float, h: float) -> HopfPoint:
    """(omega0, tau0) for linear coefficient ``b`` and feedback gain ``h``.

    ``h = 0`` (no control) is accepted alongside the controller range [b/2, 0).
    """
    _require_negative_b(b)
    if not (b / 2.0 <= h <= 0.0):
        raise GainOutOfRange(f"h={h} outside [{b / 2.0}, 0]")
    b2 = b - h
    disc = b2 * b2 - h * h
    if not disc > 0:
        raise DegenerateFrequency(f"b2^2 - h^2 = {disc} <= 0 at h={h}")
    omega0 = math.sqrt(disc)
    # -h/b2 lies in [-1, 0]; the principal arccos branch is the consistent one
    tau0 = math.acos(-h / b2) / omega0
    return HopfPoint(omega0, tau0)


def hopf_point(coeffs: TaylorCoeffs) -> HopfPoint:
    hp = critical_point(coeffs.b, coeffs.h)
    wt = hp.omega0 * hp.tau0
    b2, h = coeffs.b2, coeffs.h
    # both real/imaginary parts of the crossing condition must hold
    assert abs(math.cos(wt) + h / b2) < 1e-10
    assert abs(math.sin(wt) + hp.omega0 / b2) < 1e-10
    return hp


def transversality(coeffs: TaylorCoeffs, hp: HopfPoint) -> complex:
    """d(lambda)/d(tau) at tau0, along the root crossing at +i omega0."""
    h, b2 = coeffs.h, coeffs.b2
    w, t = hp.omega0, hp.tau0
    den = (1.0 - h * t) ** 2 + (w * t) ** 2
    return complex(w * w / den, w * (h - b2 * b2 * t) / den)


def char_residual(lam: complex, h: float, b2: float, tau: float) -> float:
    return abs(lam - h - b2 * np.exp(-lam * tau))


def find_rightmost_root(coeffs: TaylorCoeffs, tau: float, search: RootSearch = RootSearch()) -> CharRoot:
    """Root of the characteristic equation with the largest real part.

    Damped Newton from a rectangular grid of starting points in the upper half
    plane; conjugate roots are implied.
    """
    h, b2 = coeffs.h, coeffs.b2
    if tau < 0:
        raise ValueError(f"tau must be nonnegative, got {tau}")
    if tau == 0:
        lam = complex(h + b2)
        return CharRoot(lam, char_residual(lam, h, b2, 0.0))

    re = np.linspace(-search.re_left / tau, search.re_right, search.n_re)
    im = np.linspace(0.0, search.im_periods * math.pi / tau, search.n_im)
    z = (re[:, None] + 1j * im[None, :]).ravel()
    alive = np.ones(z.shape, dtype=bool)
    floor = -10.0 * search.re_left / tau

    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(search.max_iter):
            ex = np.exp(-z * tau)
            f = z - h - b2 * ex
            df = 1.0 + b2 * tau * ex
            step = f / df
            big = np.abs(step) > search.max_step
            step[big] *= search.max_step / np.abs(step[big])
            z = np.where(alive, z - step, z)
            alive &= np.isfinite(z) & (z.real > floor)
            if np.all(np.abs(f[alive]) < search.newton_tol):
                break
        ex = np.exp(-z * tau)
        res = np.abs(z - h - b2 * ex)

    ok = alive & np.isfinite(res) & (res < 1e-9)
    if not ok.any():
        raise NoRootFound(f"no Newton start converged for tau={tau}")
    roots: list[complex] = []
    for r in sorted(z[ok], key=lambda c: -c.real):
        if all(abs(r - q) >= search.dedup_radius for q in roots):
            roots.append(complex(r))
    best = roots[0]
    # real roots can come out with a -0.0 or tiny imaginary part
    best = complex(best.real, abs(best.imag))
    return CharRoot(best, char_residual(best, h, b2, tau))


def tau0_vs_h(b: float, h_grid: Sequence[float]) -> list[tuple[float, float]]:
    out = []
    for i, h in enumerate(h_grid):
        try:
            hp = critical_point(b, float(h))
        except (GainOutOfRange, DegenerateFrequency) as exc:
            raise type(exc)(f"grid index {i}: {exc}") from exc
        out.append((float(h), hp.tau0))
    return out


def design_gain(b: float, tau_target: float, tol: float = 1e-8) -> float:
    """Feedback gain whose critical delay equals ``tau_target``.

    Bisects on h over (b/2, 0]; the bracket is checked numerically rather than
    relying on tau0 being monotone in h.
    """
    tau_free = uncontrolled_tau0(b)
    if tau_target < tau_free - tol:
        raise TargetTooSmall(f"target {tau_target} below uncontrolled critical delay {tau_free}")
    if abs(tau_target - tau_free) <= tol:
        return 0.0

    hi = 0.0  # tau0(hi) < target
    lo = None
    for m in range(1, 60):
        cand = 0.5 * b * (1.0 - 2.0**-m)
        if cand <= 0.5 * b:  # rounded onto the degenerate endpoint
            break
        if critical_point(b, cand).tau0 > tau_target:
            lo = cand
            break
    if lo is None:
        raise BracketFailure(f"could not find h with tau0(h) > {tau_target}")

    f_lo = critical_point(b, lo).tau0 - tau_target
    f_hi = critical_point(b, hi).tau0 - tau_target
    if not (f_lo > 0 > f_hi):
        raise BracketFailure(f"tau0 does not bracket the target on [{lo}, {hi}]")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = critical_point(b, mid).tau0 - tau_target
        if abs(f_mid) <= tol:
            return mid
        if f_mid > 0:
            lo = mid
        else:
            hi = mid
    raise BracketFailure(f"bisection stalled at h={mid}, residual {f_mid}")
