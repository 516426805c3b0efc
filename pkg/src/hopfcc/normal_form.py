"""Centre-manifold reduction at the Hopf point and the resulting normal form.

Everything is closed form in the Taylor coefficients and (omega0, tau0).
The eigenvector is q(theta) = exp(i omega0 theta) with q(0) = 1, and the
adjoint is normalised by the constant B.  The unfolding parameter is
mu = tau - tau0, so lambda'(0) is d(lambda)/d(tau) at tau0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

from .errors import DegenerateBifurcation, SingularDenominator, SingularNormalization
from .hopf import HopfPoint, hopf_point, transversality
from .model import TaylorCoeffs

_EPS = 1e-12


class Direction(str, Enum):
    SUPERCRITICAL = "supercritical"
    SUBCRITICAL = "subcritical"


class OrbitStability(str, Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"


class PeriodTrend(str, Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"


@dataclass(frozen=True)
class BifurcationClassification:
    direction: Direction
    orbit_stability: OrbitStability
    period_trend: PeriodTrend


@dataclass(frozen=True)
class NormalFormResult:
    g20: complex
    g11: complex
    g02: complex
    g21: complex
    C1: complex
    mu2: float
    beta2: float
    T2: float
    B: Optional[complex] = None
    E1: Optional[complex] = None
    E2: Optional[complex] = None


def _phases(hp: HopfPoint):
    e1 = cmath.exp(1j * hp.omega0 * hp.tau0)
    return e1, 1.0 / e1


def coefficient_B(coeffs: TaylorCoeffs, hp: HopfPoint) -> complex:
    """Adjoint normalisation constant, chosen so that <q*, q> = 1."""
    e1, _ = _phases(hp)
    den = 1.0 + coeffs.b2 * hp.tau0 * e1
    if abs(den) < _EPS:
        raise SingularNormalization(f"|1 + b2 tau0 exp(i omega0 tau0)| = {abs(den):g}")
    return 1.0 / den


def g_quadratic(coeffs: TaylorCoeffs, hp: HopfPoint, B: complex) -> tuple[complex, complex, complex]:
    e1, em1 = _phases(hp)
    Bc = B.conjugate()
    b4, b5 = coeffs.b4, coeffs.b5
    g20 = 2.0 * Bc * (b4 * em1 + b5 * em1 * em1)
    g11 = Bc * (b4 * (e1 + em1) + 2.0 * b5)
    g02 = 2.0 * Bc * (b4 * e1 + b5 * e1 * e1)
    return g20, g11, g02


def center_manifold_constants(
    coeffs: TaylorCoeffs, hp: HopfPoint, g20: complex, g11: complex, g02: complex
) -> tuple[complex, complex]:
    """Constants E1, E2 of the second-order centre-manifold terms W20, W11."""
    h, b2, b4, b5 = coeffs.h, coeffs.b2, coeffs.b4, coeffs.b5
    w = hp.omega0
    e1, em1 = _phases(hp)
    iw = 1j * w
    g02c, g11c = g02.conjugate(), g11.conjugate()

    den1 = h + b2 * em1 * em1 - 2.0 * iw
    den2 = h + b2
    if abs(den1) < _EPS or abs(den2) < _EPS:
        raise SingularDenominator(f"|den1|={abs(den1):g}, |den2|={abs(den2):g}")

    quad20 = b4 * em1 + b5 * em1 * em1
    phi1 = (
        (h - 2.0 * iw) * (g20 / iw + g02c / (3.0 * iw))
        + b2 * (g20 / iw * em1 + g02c / (3.0 * iw) * e1)
        + g20
        + g02c
        - 2.0 * quad20
    )
    # W11(-tau0) carries exp(-i w tau0) on the g11 term and exp(+i w tau0) on
    # its conjugate; the b2 term below must match or E2 picks up a spurious
    # contribution from the g11 terms.
    quad11 = b4 * (e1 + em1) + 2.0 * b5
    phi2 = (
        -h * (g11 / iw - g11c / iw)
        - b2 * (g11 / iw * em1 - g11c / iw * e1)
        + g11
        + g11c
        - quad11
    )
    return phi1 / den1, phi2 / den2


def w20(hp: HopfPoint, g20: complex, g02: complex, E1: complex, theta: float) -> complex:
    iw = 1j * hp.omega0
    return (
        -g20 / iw * cmath.exp(iw * theta)
        - g02.conjugate() / (3.0 * iw) * cmath.exp(-iw * theta)
        + E1 * cmath.exp(2.0 * iw * theta)
    )


def w11(hp: HopfPoint, g11: complex, E2: complex, theta: float) -> complex:
    iw = 1j * hp.omega0
    return g11 / iw * cmath.exp(iw * theta) - g11.conjugate() / iw * cmath.exp(-iw * theta) + E2


def g_cubic(
    coeffs: TaylorCoeffs,
    hp: HopfPoint,
    B: complex,
    g20: complex,
    g11: complex,
    g02: complex,
    E1: complex,
    E2: complex,
) -> complex:
    e1, em1 = _phases(hp)
    t = hp.tau0
    w20_0, w20_t = w20(hp, g20, g02, E1, 0.0), w20(hp, g20, g02, E1, -t)
    w11_0, w11_t = w11(hp, g11, E2, 0.0), w11(hp, g11, E2, -t)
    # z^2 zbar coefficients of u(0) u(-tau), u(-tau)^2, u(0) u(-tau)^2, u(-tau)^3
    mixed = w11_0 * em1 + 0.5 * w20_0 * e1 + w11_t + 0.5 * w20_t
    square = 2.0 * w11_t * em1 + w20_t * e1
    bracket = (
        coeffs.b4 * mixed
        + coeffs.b5 * square
        + coeffs.b8 * (em1 * em1 + 2.0)
        + 3.0 * coeffs.b9 * em1
    )
    return 2.0 * B.conjugate() * bracket


def c1_parts(g20: complex, g11: complex, g02: complex, g21: complex, omega0: float) -> tuple[complex, complex]:
    """C1 split into its quadratic-coefficient part and the g21/2 part."""
    quad = 1j / (2.0 * omega0) * (g20 * g11 - 2.0 * abs(g11) ** 2 - abs(g02) ** 2 / 3.0)
    return quad, 0.5 * g21


def lyapunov_quantities(
    g20: complex, g11: complex, g02: complex, g21: complex, slope: complex, hp: HopfPoint
) -> NormalFormResult:
    if not slope.real > 0:
        raise ValueError(f"transversality slope must have positive real part, got {slope}")
    quad, cub = c1_parts(g20, g11, g02, g21, hp.omega0)
    C1 = quad + cub
    mu2 = -C1.real / slope.real
    T2 = -(C1.imag + mu2 * slope.imag) / hp.omega0
    beta2 = 2.0 * C1.real
    return NormalFormResult(g20=g20, g11=g11, g02=g02, g21=g21, C1=C1, mu2=mu2, beta2=beta2, T2=T2)


def normal_form(coeffs: TaylorCoeffs, hp: Optional[HopfPoint] = None) -> NormalFormResult:
    """Full pipeline from Taylor coefficients to (C1, mu2, beta2, T2)."""
    if hp is None:
        hp = hopf_point(coeffs)
    B = coefficient_B(coeffs, hp)
    g20, g11, g02 = g_quadratic(coeffs, hp, B)
    E1, E2 = center_manifold_constants(coeffs, hp, g20, g11, g02)
    g21 = g_cubic(coeffs, hp, B, g20, g11, g02, E1, E2)
    res = lyapunov_quantities(g20, g11, g02, g21, transversality(coeffs, hp), hp)
    return replace(res, B=B, E1=E1, E2=E2)


def classify(result: NormalFormResult) -> BifurcationClassification:
    for name in ("mu2", "beta2", "T2"):
        if abs(getattr(result, name)) < _EPS:
            raise DegenerateBifurcation(f"{name} = {getattr(result, name)!r} is numerically zero")
    return BifurcationClassification(
        direction=Direction.SUPERCRITICAL if result.mu2 > 0 else Direction.SUBCRITICAL,
        orbit_stability=OrbitStability.STABLE if result.beta2 < 0 else OrbitStability.UNSTABLE,
        period_trend=PeriodTrend.INCREASING if result.T2 > 0 else PeriodTrend.DECREASING,
    )


def predicted_period(hp: HopfPoint, result: NormalFormResult, tau: float) -> float:
    """Period of the bifurcating orbit to leading order, 2pi/omega0 (1 + T2 eps^2)
    with eps^2 = (tau - tau0) / mu2.  Rough; only for soft comparisons."""
    eps2 = (tau - hp.tau0) / result.mu2
    return 2.0 * math.pi / hp.omega0 * (1.0 + result.T2 * eps2)
