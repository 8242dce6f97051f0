import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import ZYGMUND_COS
from teichkit.corpus import fixture_field, rational_bump, weierstrass
from teichkit.errors import DomainError, InvariantViolation
from teichkit.vectorfield import (
    QuadraticPolyField,
    Quadruple,
    alternating_sum,
    closed_field,
    complex_coefficients,
    cross_ratio,
    crossratio_seminorm,
    from_complex_coefficients,
    from_samples,
    inverse_stereographic,
    little_zygmund_profile,
    project_out_quadratics,
    stereographic,
    transport,
    trig_field,
    zygmund_seminorm,
)

coef = st.lists(st.floats(-2, 2), min_size=1, max_size=6)


@given(coef, coef, st.floats(-2, 2))
def test_complex_coefficient_roundtrip(a, b, a0):
    n = max(len(a), len(b))
    V = trig_field(a0, a, b)
    c = complex_coefficients(V)
    for k, v in c.items():
        assert c[2 - k] == pytest.approx(-np.conj(v))
    W = from_complex_coefficients(c)
    x = np.linspace(0, 2 * np.pi, 17)
    assert np.allclose(W(x), V(x), atol=1e-12)
    assert len(W.a) == n


def test_reality_relation_enforced():
    with pytest.raises(InvariantViolation):
        from_complex_coefficients({2: 1.0, 0: 1.0})


@given(coef, coef)
def test_complex_chart_is_tangent(a, b):
    V = trig_field(0.0, a, b)
    W = transport(V, "complex")
    z = np.exp(1j * np.linspace(0, 2 * np.pi, 13))
    assert np.max(np.abs((W(z) / z).real)) < 1e-12
    assert np.allclose(transport(W, "angle")(np.angle(z)), V(np.angle(z)), atol=1e-12)


def test_stereographic_fixed_points():
    assert stereographic(1.0) == pytest.approx(1.0)
    assert stereographic(-1j) == pytest.approx(0.0)
    assert stereographic(1j) == np.inf
    u = np.linspace(-5, 5, 11)
    assert np.allclose(stereographic(inverse_stereographic(u)), u)


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))
def test_quadratic_fields_are_polynomials_on_the_line(a0, a1, b1):
    P = QuadraticPolyField.from_real(a0, a1, b1)
    L = transport(P.angle_field(), "line")
    p = P.line_coefficients()
    u = np.linspace(-4, 4, 9)
    assert np.allclose(L(u), p[0] + p[1] * u + p[2] * u * u, atol=1e-9)


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3), st.lists(st.floats(-5, 5), min_size=4, max_size=4, unique=True))
def test_alternating_sum_annihilates_quadratics(c0, c1, c2, pts):
    a, b, c, d = sorted(pts)
    if min(np.diff([a, b, c, d])) < 1e-2:
        return
    q = lambda u: c0 + c1 * u + c2 * u * u  # noqa: E731
    assert abs(alternating_sum(q, Quadruple(a, b, c, d))) < 1e-8 * (1 + abs(c2) + abs(c1))


def test_cross_ratio_limit_at_infinity():
    finite = cross_ratio((-1e12, -1.0, 0.0, 1.0))
    assert cross_ratio((-np.inf, -1.0, 0.0, 1.0)) == pytest.approx(-1.0)
    assert finite == pytest.approx(-1.0, rel=1e-9)


def test_alternating_sum_at_infinity_is_second_difference():
    V = np.cos
    x, t = 0.3, 0.2
    val = alternating_sum(V, Quadruple(-np.inf, x - t, x, x + t))
    assert val == pytest.approx((V(x + t) - 2 * V(x) + V(x - t)) / t)


def test_quadruple_validation():
    with pytest.raises(DomainError):
        Quadruple(0.0, 1.0, 0.5, 2.0)
    with pytest.raises(DomainError):
        Quadruple(1, 1j, -1, -1j + 0.1, on_circle=True)


@pytest.mark.parametrize("k", [1, 2, 5])
def test_zygmund_seminorm_of_cosine(k):
    s_star = 2.3311223704144226
    x = np.array([0.0])
    t = np.concatenate([np.geomspace(1e-3, 3, 200), [s_star / k]])
    assert zygmund_seminorm(lambda u: np.cos(k * u), x, t) == pytest.approx(ZYGMUND_COS * k, rel=1e-12)


def test_crossratio_seminorm_scales_with_kappa():
    x = np.linspace(0, 6, 31)
    t = np.geomspace(1e-3, 1, 20)
    assert crossratio_seminorm(np.sin, x, t, kappa=2.0) == pytest.approx(2 * zygmund_seminorm(np.sin, x, t))


def test_little_zygmund_profiles():
    x = np.linspace(0, 2 * np.pi, 128, endpoint=False)
    scales = 2 * np.pi * 2.0 ** -np.arange(2, 10)
    smooth = little_zygmund_profile(np.sin, scales, x)
    rough = little_zygmund_profile(weierstrass(12), scales, x)
    # |Δ²_t sin| / t = 2 (1 - cos t)|sin x| / t <= t
    assert np.all(smooth <= scales * (1 + 1e-12))
    assert rough[-1] > 1.0


@given(st.lists(st.floats(-1, 1), min_size=5, max_size=31))
def test_sampled_field_interpolates(vals):
    V = from_samples(vals)
    N = len(vals)
    assert np.allclose(V(2 * np.pi * np.arange(N) / N), vals, atol=1e-12)


def test_trig_field_derivative_and_integral():
    V = trig_field(1.0, [0.5, 0.0], [0.0, 2.0])
    x = np.linspace(0, 6, 7)
    assert np.allclose(V.derivative(x), -0.5 * np.sin(x) + 4 * np.cos(2 * x))
    assert V.integral(0.0, 2 * np.pi) == pytest.approx(np.pi * 1.0)


def test_coefficients_text_roundtrip():
    V = trig_field(0.25, [1.0, -0.5], [0.0, 3.0])
    W = type(V).from_coefficients_text(V.coefficients_text())
    assert np.array_equal(W.a, V.a) and np.array_equal(W.b, V.b) and W.a0 == V.a0


def test_projection_on_line_vanishes_at_points():
    V = project_out_quadratics(rational_bump(0.3, 0.7))
    assert abs(V(0.0)) < 1e-14 and abs(V(1.0)) < 1e-14


def test_projection_in_angle_chart_drops_mobius_terms():
    V = project_out_quadratics(trig_field(1.0, [2.0, 3.0], [4.0, 5.0]))
    assert V.a0 == 0 and V.a[0] == 0 and V.b[0] == 0 and V.a[1] == 3.0


def test_fixture_field_normalized():
    V = fixture_field()
    assert V(0.0) == 0 and V(1.0) == 0 and V(2.0) == pytest.approx(-0.4)


def test_degree_undefined_for_closed():
    with pytest.raises(DomainError):
        closed_field(np.sin).degree
