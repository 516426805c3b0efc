import cmath
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopfcc.errors import DegenerateBifurcation
from hopfcc.hopf import critical_point, hopf_point
from hopfcc.model import TaylorCoeffs, solve_equilibrium, taylor_coeffs
from hopfcc.normal_form import (
    Direction,
    NormalFormResult,
    OrbitStability,
    PeriodTrend,
    c1_parts,
    classify,
    normal_form,
    predicted_period,
    w11,
    w20,
)

GAINS = ("0", "-0.1", "-0.15")
coef = st.floats(-50.0, 50.0)


@st.composite
def random_coeffs(draw):
    b = draw(st.floats(-3.0, -0.05))
    h = b / 2 * draw(st.floats(0.0, 0.95))
    return TaylorCoeffs(b=b, b2=b - h, b4=draw(coef), b5=draw(coef), b8=draw(coef), b9=draw(coef), h=h)


def ref_coeffs(params, h):
    return taylor_coeffs(params, solve_equilibrium(params), h)


@pytest.mark.parametrize("key", GAINS)
def test_frozen_reference_constants(params, frozen, key):
    ref = frozen["reference"][key]
    nf = normal_form(ref_coeffs(params, float(key)))
    for name in ("B", "g20", "g11", "g02", "E1", "E2", "g21", "C1"):
        got, want = getattr(nf, name), ref[name]
        assert abs(got - want) <= 1e-9 * abs(want), name
    for name in ("mu2", "T2", "beta2"):
        assert getattr(nf, name) == pytest.approx(ref[name], rel=1e-9), name


@pytest.mark.parametrize("key", GAINS)
def test_reference_classification(params, key):
    cls = classify(normal_form(ref_coeffs(params, float(key))))
    assert cls.direction is Direction.SUPERCRITICAL
    assert cls.orbit_stability is OrbitStability.STABLE
    assert cls.period_trend is PeriodTrend.INCREASING
    assert cls.direction.value == "supercritical"


@settings(max_examples=120, deadline=None)
@given(random_coeffs())
def test_center_manifold_boundary_conditions(c):
    """W20 and W11 satisfy the linear boundary equations at theta = 0."""
    hp = hopf_point(c)
    nf = normal_form(c, hp)
    w, t = hp.omega0, hp.tau0
    em = cmath.exp(-1j * w * t)
    ep = 1 / em
    a0, at = w20(hp, nf.g20, nf.g02, nf.E1, 0.0), w20(hp, nf.g20, nf.g02, nf.E1, -t)
    lhs = 2j * w * a0 - (c.h * a0 + c.b2 * at)
    rhs = -nf.g20 - nf.g02.conjugate() + 2 * (c.b4 * em + c.b5 * em * em)
    scale = 1 + abs(rhs) + abs(nf.g20) + abs(nf.g02)
    assert abs(lhs - rhs) < 1e-9 * scale

    m0, mt = w11(hp, nf.g11, nf.E2, 0.0), w11(hp, nf.g11, nf.E2, -t)
    lhs = -(c.h * m0 + c.b2 * mt)
    rhs = -nf.g11 - nf.g11.conjugate() + c.b4 * (ep + em) + 2 * c.b5
    assert abs(lhs - rhs) < 1e-9 * (1 + abs(rhs) + abs(nf.g11))


@settings(max_examples=120, deadline=None)
@given(random_coeffs())
def test_quadratic_coefficient_symmetries(c):
    nf = normal_form(c)
    ratio = nf.B.conjugate() / nf.B
    assert abs(nf.g02 - nf.g20.conjugate() * ratio) < 1e-10 * (1 + abs(nf.g02))
    assert abs((nf.g11 / nf.B.conjugate()).imag) < 1e-10 * (1 + abs(nf.g11 / nf.B.conjugate()))
    quad, cub = c1_parts(nf.g20, nf.g11, nf.g02, nf.g21, hopf_point(c).omega0)
    assert abs(quad + cub - nf.C1) < 1e-12 * (1 + abs(nf.C1))
    assert nf.beta2 == pytest.approx(2 * nf.C1.real)


@settings(max_examples=60, deadline=None)
@given(random_coeffs(), st.floats(0.1, 10.0))
def test_scaling_of_quadratic_and_cubic_parts(c, s):
    """g21 is quadratic in (b4, b5) and linear in (b8, b9)."""
    quad_only = replace(c, b8=0.0, b9=0.0)
    cubic_only = replace(c, b4=0.0, b5=0.0)
    base_q, base_c = normal_form(quad_only), normal_form(cubic_only)
    scaled_q = normal_form(replace(quad_only, b4=s * c.b4, b5=s * c.b5))
    scaled_c = normal_form(replace(cubic_only, b8=s * c.b8, b9=s * c.b9))
    assert abs(scaled_q.g20 - s * base_q.g20) <= 1e-9 * (1 + abs(s * base_q.g20))
    assert abs(scaled_q.g21 - s * s * base_q.g21) <= 1e-9 * (1 + abs(s * s * base_q.g21))
    assert abs(scaled_c.g21 - s * base_c.g21) <= 1e-9 * (1 + abs(s * base_c.g21))
    full = normal_form(c)
    assert abs(full.g21 - base_q.g21 - base_c.g21) <= 1e-9 * (1 + abs(full.g21))


def test_zero_quadratic_terms_give_zero_second_order():
    c = TaylorCoeffs(b=-0.5, b2=-0.4, b4=0.0, b5=0.0, b8=1.0, b9=-2.0, h=-0.1)
    nf = normal_form(c)
    assert nf.g20 == nf.g11 == nf.g02 == 0
    assert nf.E1 == 0 and nf.E2 == 0
    hp = hopf_point(c)
    em = cmath.exp(-1j * hp.omega0 * hp.tau0)
    assert abs(nf.g21 - 2 * nf.B.conjugate() * (c.b8 * (em * em + 2) + 3 * c.b9 * em)) < 1e-14


def test_all_zero_nonlinearity_is_degenerate():
    nf = normal_form(TaylorCoeffs(b=-0.5, b2=-0.5, b4=0.0, b5=0.0, b8=0.0, b9=0.0, h=0.0))
    assert nf.C1 == 0
    with pytest.raises(DegenerateBifurcation):
        classify(nf)


@pytest.mark.parametrize(
    "mu2,beta2,T2,expected",
    [
        (1.0, -1.0, 1.0, ("supercritical", "stable", "increasing")),
        (-1.0, 1.0, -1.0, ("subcritical", "unstable", "decreasing")),
        (2.0, 3.0, -4.0, ("supercritical", "unstable", "decreasing")),
    ],
)
def test_classification_signs(mu2, beta2, T2, expected):
    r = NormalFormResult(0j, 0j, 0j, 0j, 0j, mu2=mu2, beta2=beta2, T2=T2)
    cls = classify(r)
    assert (cls.direction.value, cls.orbit_stability.value, cls.period_trend.value) == expected


def test_predicted_period_at_onset(params):
    c = ref_coeffs(params, -0.1)
    hp = critical_point(c.b, c.h)
    nf = normal_form(c, hp)
    assert predicted_period(hp, nf, hp.tau0) == pytest.approx(2 * cmath.pi / hp.omega0)
    assert predicted_period(hp, nf, 1.05 * hp.tau0) > predicted_period(hp, nf, hp.tau0)
