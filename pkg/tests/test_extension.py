import numpy as np
import pytest
from hypothesis import given, strategies as st

from teichkit import circlemap as cm
from teichkit.errors import DomainError, InvariantViolation
from teichkit.extension import (
    Y_SWITCH,
    ba_extend,
    ba_wirtinger,
    beltrami_of,
    circle_extension,
    local_dilatation,
    max_dilatation,
    rect_grid,
)

MAPS = [cm.cubic_map(), cm.kink_map(2.0), cm.power_map(0.5), cm.sine_lift(0.7), cm.circle_kink_map(0.5)]


def test_identity_extension_is_identity():
    z = rect_grid((-3, 3), (1e-6, 3), 40, 40)
    assert np.max(np.abs(ba_extend(cm.identity())(z) - z)) < 1e-12


def test_undoubled_identity_halves_height():
    z = rect_grid((-3, 3), (1e-3, 3), 20, 20)
    assert np.max(np.abs(ba_extend(cm.identity(), doubled=False)(z) - (z.real + 0.5j * z.imag))) < 1e-12


@pytest.mark.parametrize("h", MAPS, ids=lambda h: h.name)
def test_extension_is_continuous_to_boundary(h):
    x = np.linspace(-1.3, 1.7, 9)
    assert np.max(np.abs(ba_extend(h)(x + 1e-9j) - h(x))) < 1e-7


@pytest.mark.parametrize("h", MAPS, ids=lambda h: h.name)
def test_two_regimes_agree_at_switch(h):
    x = np.linspace(-1.1, 1.3, 13)
    below = ba_wirtinger(h, x + 1j * Y_SWITCH * (1 - 1e-9))
    above = ba_wirtinger(h, x + 1j * Y_SWITCH * (1 + 1e-9))
    for a, b in zip(below, above):
        assert np.max(np.abs(a - b)) < 1e-6


@pytest.mark.parametrize("h", MAPS, ids=lambda h: h.name)
def test_reflection_symmetry(h):
    z = rect_grid((-2, 2), (0.1, 2), 7, 7)
    H = ba_extend(h)
    assert np.max(np.abs(H(np.conj(z)) - np.conj(H(z)))) == 0.0


@pytest.mark.parametrize("h", [cm.kink_map(2.0), cm.circle_kink_map(0.5)], ids=lambda h: h.name)
@given(a1=st.floats(0.3, 3), b1=st.floats(-2, 2), a2=st.floats(0.3, 3), b2=st.floats(-2, 2))
def test_affine_naturality(h, a1, b1, a2, b2):
    # periodic kinks must stay visible to the small-height quadrature after rescaling
    g = cm.affine_compose(a1, b1, h, a2, b2)
    z = rect_grid((-2, 2), (1e-3, 2), 9, 33)
    lhs = ba_extend(g)(z)
    rhs = a1 * ba_extend(h)(a2 * z + b2) + b1
    assert np.max(np.abs(lhs - rhs)) < 1e-9


def test_power_map_dilatation_is_scale_invariant():
    H = ba_extend(cm.power_map(1.5))
    z = rect_grid((-1, 1), (0.01, 1), 7, 7)
    mu1 = beltrami_of(H, z, method="exact").mu
    mu2 = beltrami_of(H, 8 * z, method="exact").mu
    assert np.max(np.abs(mu1 - mu2)) < 1e-10


@pytest.mark.parametrize("h", [cm.cubic_map(), cm.sine_lift(0.7)], ids=lambda h: h.name)
def test_exact_and_finite_difference_mu_agree_on_smooth_region(h):
    z = rect_grid((0.3, 1.7), (0.2, 1.0), 5, 5)
    H = ba_extend(h)
    exact = beltrami_of(H, z, method="exact").mu
    fd = beltrami_of(H, z, method="fd").mu
    assert np.max(np.abs(exact - fd)) < 1e-6


def test_kink_dilatation_bounded():
    K = max_dilatation(ba_extend(cm.kink_map(2.0)), rect_grid((-3, 3), (1e-4, 3), 41, 41), method="exact")
    assert 1.0 < K < 10.0


def test_dilatation_field_csv(tmp_path):
    f = beltrami_of(ba_extend(cm.kink_map(2.0)), rect_grid(nx=3, ny=3), method="exact")
    p = tmp_path / "d.csv"
    f.to_csv(p)
    lines = p.read_text().splitlines()
    assert lines[0] == "x,y,re_mu,im_mu,K" and len(lines) == 10


def test_local_dilatation_identity():
    assert local_dilatation(ba_extend(cm.identity()), 0.3 + 0.5j) == pytest.approx(1.0, abs=1e-8)


def test_circle_extension_fixes_origin_and_circle():
    E = circle_extension(cm.sine_lift(0.5))
    assert E(0.0) == 0.0
    th = np.linspace(0, 2 * np.pi, 9)
    w = E(0.999999 * np.exp(1j * th))
    assert np.max(np.abs(np.abs(w) - 1)) < 1e-4


def test_wirtinger_rejects_lower_half_plane():
    with pytest.raises(DomainError):
        ba_wirtinger(cm.identity(), np.array([1 - 1j]))


def test_beltrami_unknown_method():
    with pytest.raises(DomainError):
        beltrami_of(ba_extend(cm.identity()), rect_grid(nx=2, ny=2), method="spline")


def test_rect_grid_rejects_axis():
    with pytest.raises(DomainError):
        rect_grid(y_range=(0.0, 1.0))


def test_dilatation_invariant_checked():
    from teichkit.extension import DilatationField

    with pytest.raises(InvariantViolation):
        DilatationField(z=np.array([1j]), mu=np.array([1.0 + 0j]), K=np.array([np.inf]))


def test_smooth_lift_is_asymptotically_conformal_near_the_line():
    # ratio distortion below scale δ and the dilatation on the strip Im z < δ shrink together
    h = cm.sine_lift(0.7)
    H = ba_extend(h)
    x = np.linspace(0, 1, 257)
    eps, eps_prime = [], []
    for d in (0.2, 0.05, 0.0125, 0.003):
        eps.append(cm.ratio_distortion_profile(h, np.geomspace(d, d / 64, 12), x).distortion.max())
        eps_prime.append(beltrami_of(H, rect_grid((0, 1), (d / 64, d), 65, 12), method="exact").K_max - 1)
    assert np.all(np.diff(eps) < 0) and np.all(np.diff(eps_prime) < 0)
    assert eps_prime[-1] < 0.05
