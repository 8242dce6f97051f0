import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from teichkit.errors import DomainError
from teichkit.hilbert import (
    as_line_representative,
    hilbert_fourier,
    hilbert_pv,
    hilbert_via_beltrami,
    normalize_01,
    rotate_beltrami,
)
from teichkit.numerics import Tolerance
from teichkit.quaddiff import TwoSidedBeltrami, field_beltrami
from teichkit.vectorfield import closed_field, from_samples, trig_field

X = np.linspace(0.1, 6.0, 7)


def test_fourier_route_sends_sin_to_cos():
    J = hilbert_fourier(trig_field(0.0, [0.0, 0.0], [1.0, 0.0]))
    assert np.allclose(J(X), np.cos(X))
    J = hilbert_fourier(trig_field(0.0, [0.0, 1.0], [0.0, 0.0]))
    assert np.allclose(J(X), -np.sin(2 * X))


@given(st.lists(st.floats(-1, 1), min_size=1, max_size=8), st.lists(st.floats(-1, 1), min_size=1, max_size=8))
def test_fourier_route_anti_involution(a, b):
    V = trig_field(0.7, a, b)
    JJ = hilbert_fourier(hilbert_fourier(V))
    assert np.allclose(JJ(X), -(V(X) - 0.35), atol=1e-12)


@pytest.mark.parametrize("k", [1, 4, 16])
def test_pv_matches_fourier(k):
    V = trig_field(0.0, np.eye(k)[k - 1] * 0.5, np.eye(k)[k - 1])
    assert np.max(np.abs(hilbert_pv(V, X) - hilbert_fourier(V)(X))) < 1e-8


def test_pv_of_constant_vanishes():
    assert np.max(np.abs(hilbert_pv(closed_field(lambda x: np.ones_like(x)), X))) < 1e-8


def test_fourier_route_needs_coefficients():
    with pytest.raises(DomainError):
        hilbert_fourier(closed_field(np.sin))


def test_rotation_preserves_symmetry_and_bound():
    mu = TwoSidedBeltrami.constant(0.25)
    r = rotate_beltrami(mu)
    z = np.array([0.3 + 1j, -2 + 0.1j])
    r.check(z)
    assert np.allclose(r.on_upper(z), -0.25j)


def test_rotation_requires_symmetric():
    with pytest.raises(DomainError):
        rotate_beltrami(TwoSidedBeltrami.constant(0.2, symmetry="antisymmetric"))


@pytest.mark.parametrize("k", [1, 3])
def test_beltrami_route_matches_fourier(k):
    V = trig_field(0.0, np.zeros(k), np.eye(k)[k - 1])
    xs = np.array([0.4, 2.0, 4.5])
    got = hilbert_via_beltrami(V, xs, tol=Tolerance(1e-9, 1e-7))
    JV = hilbert_fourier(V)
    ref = normalize_01(JV(xs), xs, (float(JV(0.0)), float(JV(1.0))))
    assert np.max(np.abs(got - ref)) < 1e-6


def test_sampled_fields_are_supported():
    V = from_samples(np.sin(2 * np.pi * np.arange(16) / 16))
    assert np.max(np.abs(hilbert_pv(V, X) - np.cos(X))) < 1e-8


def test_line_representative_vanishes_at_normalization_points():
    W = as_line_representative(trig_field(0.0, [1.0], [0.5]))
    assert abs(W(0.0)) < 1e-15 and abs(W(1.0)) < 1e-15
