"""Dual congestion-control fluid model with delayed-feedback control.

The link price obeys

    p'(t) = k p(t) (x(p(t - tau)) - c) + h (p(t) - p(t - tau))

where ``x`` is the users' demand function, ``c`` the link capacity, ``k`` the
price-adaptation gain and ``h <= 0`` the feedback gain.  With ``h = 0`` this is
the uncontrolled dual algorithm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy.optimize import brentq

from .errors import InvalidDemand, NoEquilibrium

BRACKET = (1e-9, 1e9)


@dataclass(frozen=True)
class ProportionalFair:
    """x(p) = w / p."""

    weight: float = 1.0

    def __post_init__(self):
        if not self.weight > 0:
            raise InvalidDemand(f"weight must be positive, got {self.weight}")

    def value(self, p):
        return self.weight / p

    def d1(self, p):
        return -self.weight / p**2

    def d2(self, p):
        return 2.0 * self.weight / p**3

    def d3(self, p):
        return -6.0 * self.weight / p**4


@dataclass(frozen=True)
class UserSupplied:
    """Arbitrary demand given by its value and first three derivatives."""

    value: Callable[[float], float]
    d1: Callable[[float], float]
    d2: Callable[[float], float]
    d3: Callable[[float], float]


DemandFunction = Union[ProportionalFair, UserSupplied]


@dataclass(frozen=True)
class ModelParams:
    k: float
    c: float
    demand: DemandFunction = ProportionalFair()

    def __post_init__(self):
        if not (self.k > 0 and math.isfinite(self.k)):
            raise ValueError(f"gain k must be positive, got {self.k}")
        if not (self.c > 0 and math.isfinite(self.c)):
            raise ValueError(f"capacity c must be positive, got {self.c}")


@dataclass(frozen=True)
class Equilibrium:
    p_star: float


@dataclass(frozen=True)
class TaylorCoeffs:
    """Coefficients of the cubic expansion about p*.

    ``u' = h u + b2 u_tau + b4 u u_tau + b5 u_tau^2 + b8 u u_tau^2 + b9 u_tau^3``
    with ``u = p - p*`` and ``u_tau = u(t - tau)``.
    """

    b: float
    b2: float
    b4: float
    b5: float
    b8: float
    b9: float
    h: float


def check_demand(demand: DemandFunction, points=None, rel_tol: float = 1e-5) -> None:
    """Raise InvalidDemand unless x > 0, x' < 0 and the derivatives agree with
    central differences of the lower-order ones at the sample points."""
    if points is None:
        points = np.geomspace(1e-3, 1e3, 13)
    pairs = ((demand.value, demand.d1), (demand.d1, demand.d2), (demand.d2, demand.d3))
    for p in points:
        p = float(p)
        if not demand.value(p) > 0:
            raise InvalidDemand(f"x({p}) = {demand.value(p)} is not positive")
        if not demand.d1(p) < 0:
            raise InvalidDemand(f"x'({p}) = {demand.d1(p)} is not negative")
        step = 1e-4 * p
        for lower, upper in pairs:
            fd = (lower(p + step) - lower(p - step)) / (2 * step)
            exact = upper(p)
            if abs(fd - exact) > rel_tol * max(abs(exact), 1e-300):
                raise InvalidDemand(
                    f"derivative mismatch at p={p}: finite difference {fd}, supplied {exact}"
                )


def _newton_polish(demand: DemandFunction, c: float, p: float, iters: int = 3) -> float:
    for _ in range(iters):
        slope = demand.d1(p)
        if slope == 0:
            break
        nxt = p - (demand.value(p) - c) / slope
        if not nxt > 0:
            break
        p = nxt
    return p


def solve_equilibrium(params: ModelParams, tol: float = 1e-10) -> Equilibrium:
    """Price p* at which demand equals capacity, x(p*) = c."""
    demand, c = params.demand, params.c
    if isinstance(demand, ProportionalFair):
        return Equilibrium(demand.weight / c)

    lo, hi = BRACKET
    probe = np.geomspace(lo, hi, 37)
    xs = [demand.value(float(p)) for p in probe]
    if any(not (b < a) for a, b in zip(xs, xs[1:])):
        raise InvalidDemand("demand is not strictly decreasing on the search bracket")
    f = lambda s: demand.value(math.exp(s)) - c
    if f(math.log(lo)) < 0 or f(math.log(hi)) > 0:
        raise NoEquilibrium(f"x(p) never crosses c={c} on [{lo:g}, {hi:g}]")
    s = brentq(f, math.log(lo), math.log(hi), xtol=1e-14, rtol=4 * np.finfo(float).eps)
    p = _newton_polish(demand, c, math.exp(s))
    if abs(demand.value(p) - c) > tol * c:
        raise NoEquilibrium(f"equilibrium residual {demand.value(p) - c:g} exceeds tolerance")
    return Equilibrium(p)


def taylor_coeffs(params: ModelParams, eq: Equilibrium, h: float = 0.0) -> TaylorCoeffs:
    k, p = params.k, eq.p_star
    d = params.demand
    x1, x2, x3 = d.d1(p), d.d2(p), d.d3(p)
    b = k * p * x1
    return TaylorCoeffs(
        b=b,
        b2=b - h,
        b4=0.5 * k * x1,
        b5=0.5 * k * p * x2,
        b8=k * x2 / 6.0,
        b9=k * p * x3 / 6.0,
        h=h,
    )


def rhs(params: ModelParams, h: float, p: float, p_delayed: float) -> float:
    """Right-hand side of the controlled model."""
    return params.k * p * (params.demand.value(p_delayed) - params.c) + h * (p - p_delayed)


def rhs_uncontrolled(params: ModelParams, p: float, p_delayed: float) -> float:
    return params.k * p * (params.demand.value(p_delayed) - params.c)


def reference_params() -> ModelParams:
    """k = 0.01, c = 50, x = 1/p: p* = 0.02, b = -0.5."""
    return ModelParams(k=0.01, c=50.0, demand=ProportionalFair(1.0))


def literal_params() -> ModelParams:
    """The k = 0.1 variant, which gives b = -5 rather than -0.5."""
    return ModelParams(k=0.1, c=50.0, demand=ProportionalFair(1.0))
