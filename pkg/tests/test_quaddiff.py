import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import C0, FIXTURE_RESIDUE, bers_disc
from teichkit.corpus import fixture_field, rational_bump
from teichkit.errors import DomainError, InvariantViolation
from teichkit.quaddiff import (
    RationalQD,
    TwoSidedBeltrami,
    b_norm,
    basis_qd,
    bers_map,
    degenerating_sequence,
    field_beltrami,
    pairing_complex,
    pairing_integral,
    pairing_residue,
    qd_norm,
    v_mu,
)
from teichkit.vectorfield import project_out_quadratics


def test_basis_residues_sum_to_zero_with_implicit_poles():
    phi = RationalQD((2.0, -1.0), (1.0, 0.5))
    assert sum(phi.residues().values()) == pytest.approx(0.0, abs=1e-14)


@given(st.floats(-5, 5).filter(lambda x: min(abs(x), abs(x - 1)) > 0.05))
def test_basis_residue_at_its_pole_is_weight(x):
    assert basis_qd(x, 2.5).residues()[x] == pytest.approx(2.5)


def test_validation():
    with pytest.raises(DomainError):
        RationalQD((0.0,), (1.0,))
    with pytest.raises(DomainError):
        RationalQD((1.0, 2.0), numerator=(1.0,))
    with pytest.raises(DomainError):
        degenerating_sequence(0.0, 0.0)


def test_text_roundtrip():
    for phi in (basis_qd(2.0), degenerating_sequence(0.5, 0.25)):
        assert RationalQD.from_text(phi.to_text()) == phi


def test_basis_norm_matches_mpmath_reference():
    assert qd_norm(basis_qd(2.0)) == pytest.approx(C0, rel=1e-9)


@pytest.mark.parametrize("x,t", [(0.0, 1.0), (3.0, 0.01), (-2.0, 7.5)])
def test_degenerating_norm_invariant(x, t):
    assert qd_norm(degenerating_sequence(x, t)) == pytest.approx(C0, rel=1e-6)


def test_fixture_residue():
    assert pairing_residue(fixture_field(), basis_qd(2.0)) == pytest.approx(FIXTURE_RESIDUE, rel=1e-15)


def test_residue_requires_normalized_field():
    with pytest.raises(DomainError):
        pairing_residue(rational_bump(), basis_qd(2.0))


@pytest.mark.parametrize("phi", [basis_qd(2.0), basis_qd(-0.7, 3.0), RationalQD((-1.0, 0.5, 2.0), numerator=(1.0,))],
                         ids=["phi2", "phi-0.7", "general"])
def test_residue_and_integral_pairings_agree(phi):
    V = fixture_field()
    assert pairing_integral(V, phi) == pytest.approx(pairing_residue(V, phi), rel=1e-6)


def test_pairing_against_zero_coefficient():
    assert pairing_complex(TwoSidedBeltrami.zero(), basis_qd(2.0)).value == 0


@pytest.mark.parametrize("x", [-1.0, 0.5, 2.0])
def test_v_mu_reproduces_field_modulo_affine(x):
    V = rational_bump(0.3, 0.7)
    expected = V(x) - (V(0.0) + (V(1.0) - V(0.0)) * x)
    assert v_mu(field_beltrami(V), x).real == pytest.approx(expected, abs=1e-7)


def test_v_mu_rejects_normalization_points():
    with pytest.raises(DomainError):
        v_mu(TwoSidedBeltrami.zero(), 1.0)


@given(st.floats(-2, 2), st.floats(1.5, 3), st.floats(0.2, 1.0))
@settings(max_examples=10)
def test_bers_map_disc_oracle(re, im, r):
    w0 = complex(0.0, 2.0)
    mu = TwoSidedBeltrami.disc_indicator(0.3 + 0.1j, w0, r)
    z = complex(re, -im)
    assert bers_map(mu, z) == pytest.approx(bers_disc(0.3 + 0.1j, w0, r, z), rel=1e-12)


def test_b_norm_bounded_by_six_sup():
    mu = TwoSidedBeltrami.disc_indicator(0.5, 2j, 1.0)
    pts = np.linspace(-3, 3, 13) - 1j
    assert b_norm(mu, pts) <= 6 * 0.5


def test_bers_map_lower_half_plane_only():
    with pytest.raises(DomainError):
        bers_map(TwoSidedBeltrami.zero(), 1j)


def test_symmetry_tags_checked():
    z = np.array([0.5 + 0.5j, -1 + 2j])
    mu = TwoSidedBeltrami(upper=lambda z: 0.2 * np.exp(1j * z), lower=lambda z: 0.0 * z, symmetry="adhoc")
    mu.check(z)
    bad = TwoSidedBeltrami(upper=lambda z: 0.2 * np.exp(1j * z), lower=lambda z: 0.1 + 0 * z, symmetry="symmetric")
    with pytest.raises(InvariantViolation):
        bad.check(z)


def test_projected_field_pairs_consistently():
    V = project_out_quadratics(rational_bump(0.3, 0.7), leading=0.0)
    phi = basis_qd(2.0)
    assert pairing_integral(V, phi) == pytest.approx(pairing_residue(V, phi), rel=1e-6)


def test_degenerating_pairing_is_scaled_second_difference():
    V = np.cos
    x, t = 0.4, 0.1
    expected = 0.5 * math.pi * (V(x + t) - 2 * V(x) + V(x - t)) / t
    assert pairing_residue(V, degenerating_sequence(x, t)) == pytest.approx(expected, rel=1e-12)
