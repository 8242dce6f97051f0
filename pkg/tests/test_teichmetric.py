import numpy as np
import pytest

from teichkit import circlemap as cm
from teichkit.corpus import rational_bump
from teichkit.errors import DomainError
from teichkit.extension import ba_extend
from teichkit.quaddiff import TwoSidedBeltrami, basis_qd, degenerating_sequence, field_beltrami, qd_norm
from teichkit.teichmetric import (
    distance_bracket,
    distance_upper,
    infinitesimal_norm,
    phi_family,
    reich_strebel_lower,
    reich_strebel_terms,
    reich_strebel_upper_functional,
)
from teichkit.extension import rect_grid

PHIS = [basis_qd(2.0), basis_qd(-1.0), degenerating_sequence(0.3, 0.5)]


def test_zero_coefficient_trivial_values():
    mu = TwoSidedBeltrami.zero()
    terms = reich_strebel_terms(mu, PHIS[:2])
    assert np.all(terms.I(conservative=False) == 1.0)
    assert reich_strebel_lower(mu, PHIS[:2]) == 0.0
    assert reich_strebel_upper_functional(mu, PHIS[:2]) == 1.0
    assert infinitesimal_norm(mu, PHIS[:2]).lower == 0.0


def test_identity_bracket_is_zero():
    b = distance_bracket(cm.identity(), PHIS[:2])
    assert abs(b.d_upper) < 1e-12 and b.d_lower == 0.0 and b.certified


def test_kink_bracket_is_ordered_and_nontrivial():
    b = distance_bracket(cm.kink_map(2.0), PHIS)
    assert 0.0 < b.d_lower <= b.d_upper
    assert b.K == pytest.approx(np.exp(2 * b.d_upper))


def test_functional_dominates_reciprocal_of_I():
    terms = reich_strebel_terms(ba_extend(cm.kink_map(2.0)), PHIS[:2])
    assert np.all(terms.F() >= 1.0 / terms.I(conservative=False) - 1e-12)


def test_distance_upper_refines_monotonically():
    H = cm.kink_map(3.0)
    coarse = distance_upper(H, rect_grid((-2, 2), (1e-2, 2), 11, 11))
    fine = distance_upper(H, rect_grid((-2, 2), (1e-2, 2), 41, 41))
    assert fine >= coarse - 1e-12


def test_bracket_symmetric_under_inversion():
    h = cm.kink_map(2.0)
    g = cm.kink_map(0.5)  # the inverse of h
    assert np.allclose(cm.invert(h)(np.linspace(-2, 2, 9)), g(np.linspace(-2, 2, 9)))
    grid = rect_grid((-4, 4), (1e-3, 4), 81, 61)
    bh = distance_bracket(h, PHIS, grid=grid)
    bg = distance_bracket(g, PHIS, grid=grid)
    assert bh.d_upper == pytest.approx(bg.d_upper, abs=1e-9)
    assert bh.d_lower <= bg.d_upper and bg.d_lower <= bh.d_upper


def test_sup_norm_coefficient_rejected():
    mu = TwoSidedBeltrami.constant(1.0)
    with pytest.raises(DomainError):
        reich_strebel_lower(mu, PHIS[:1])


def test_infinitesimal_sandwich_and_isometry():
    mu = field_beltrami(rational_bump(0.3, 0.7))
    rot = TwoSidedBeltrami(upper=lambda z: 1j * mu.on_upper(z), breakpoints=mu.breakpoints)
    a = infinitesimal_norm(mu, PHIS)
    b = infinitesimal_norm(rot, PHIS)
    assert a.lower <= a.upper
    assert a.lower == pytest.approx(b.lower, abs=1e-9)


def test_first_variation_slope():
    mu = field_beltrami(rational_bump(0.3, 0.7))
    target = infinitesimal_norm(mu, PHIS, phases=(0.0, np.pi)).lower
    ts = 2.0 ** -np.arange(4, 9)
    d = [reich_strebel_lower(mu, PHIS, t=t, phases=(0.0, np.pi)) for t in ts]
    slope, _ = np.linalg.lstsq(np.column_stack([ts, ts**2]), np.array(d), rcond=None)[0]
    assert slope == pytest.approx(target, rel=0.05)


def test_upper_functional_slope_matches_infinitesimal_norm():
    mu = field_beltrami(rational_bump(0.3, 0.7))
    t = 2.0**-6
    F = reich_strebel_upper_functional(mu, PHIS, t=t)
    assert 0.5 * np.log(F) / t == pytest.approx(infinitesimal_norm(mu, PHIS).lower, rel=0.05)


def test_phi_family_members_integrable():
    for phi in phi_family():
        assert np.isfinite(qd_norm(phi))
