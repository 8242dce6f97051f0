import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from teichkit.corpus import abs_sin, gaussian, weierstrass
from teichkit.errors import DomainError
from teichkit.trigapprox import (
    TrigKernel,
    approximate,
    bernstein_ratio,
    fejer_kernel,
    magnify,
    rate_profile,
    sup_norm,
)
from teichkit.vectorfield import closed_field, trig_field


@pytest.mark.parametrize("kind,mass", [("fejer", 1.0), ("jackson-vdp", 1.0), ("jackson-paper", -1.0)])
@pytest.mark.parametrize("n", [1, 3, 8])
def test_kernel_mass(kind, mass, n):
    K = TrigKernel(n, kind)
    assert K.mass == mass
    val, _ = quad(K, -np.pi, np.pi, limit=200)
    assert val == pytest.approx(mass, abs=1e-9)


@given(st.integers(1, 12), st.integers(0, 30))
@settings(max_examples=20)
def test_multipliers_are_fourier_coefficients(n, k):
    K = TrigKernel(n, "jackson-vdp")
    val, _ = quad(lambda t: K(t) * np.cos(k * t), -np.pi, np.pi, limit=400)
    assert val == pytest.approx(float(K.multipliers(k)), abs=1e-8)


def test_fejer_kernel_nonnegative_and_peak():
    t = np.linspace(-np.pi, np.pi, 1001)
    assert np.all(fejer_kernel(7, t) >= 0)
    assert fejer_kernel(7, 0.0) == pytest.approx(7 / (2 * np.pi))


def test_kernel_validation():
    with pytest.raises(DomainError):
        TrigKernel(0)
    with pytest.raises(DomainError):
        TrigKernel(3, "dirichlet")


@given(st.lists(st.floats(-1, 1), min_size=1, max_size=5), st.lists(st.floats(-1, 1), min_size=1, max_size=5))
def test_delayed_mean_reproduces_low_degree(a, b):
    V = trig_field(0.3, a, b)
    W = approximate(V, 5)
    x = np.linspace(0, 2 * np.pi, 23)
    assert np.allclose(W(x), V(x), atol=1e-12)


def test_approximant_degree_bound():
    W = approximate(weierstrass(10), 16)
    assert W.degree <= 31


@given(st.integers(1, 24), st.integers(0, 10_000))
@settings(max_examples=20)
def test_bernstein_inequality(n, seed):
    r = np.random.default_rng(seed)
    V = trig_field(r.normal(), r.normal(size=n), r.normal(size=n))
    assert bernstein_ratio(V) <= 1 + 1e-6


@pytest.mark.parametrize("n", [1, 5, 32])
def test_bernstein_equality_for_sine(n):
    assert bernstein_ratio(trig_field(0.0, np.zeros(n), np.eye(n)[n - 1])) == pytest.approx(1.0, abs=1e-9)


def test_bernstein_rejects_constants():
    with pytest.raises(DomainError):
        bernstein_ratio(trig_field(1.0))


def test_sup_norm_trig_fft_vs_grid():
    V = trig_field(0.0, [0.3, 0.0, 1.0], [0.0, -2.0, 0.0])
    x = np.linspace(0, 2 * np.pi, 20001)
    assert sup_norm(V) == pytest.approx(np.max(np.abs(V(x))), rel=1e-6)


def test_rate_profile_bounded_for_weierstrass():
    prof = rate_profile(weierstrass(12), [4, 8, 16, 32, 64, 128, 256])
    assert prof.scaled.max() / prof.scaled.min() < 10


def test_rate_profile_csv(tmp_path):
    prof = rate_profile(abs_sin(), [4, 8])
    p = tmp_path / "r.csv"
    prof.to_csv(p)
    assert p.read_text().splitlines()[0] == "n,error,n_error"


def test_rate_profile_validates_list():
    with pytest.raises(DomainError):
        rate_profile(abs_sin(), [8, 4])


def test_line_chart_field_is_rejected():
    with pytest.raises(DomainError):
        approximate(gaussian(), 8)


def test_magnify_interval_length_enforced():
    with pytest.raises(DomainError):
        magnify(np.sin, 2, (0.0, 1.0))
    M = magnify(np.sin, 3, (0.0, 2 * np.pi / 8))
    assert M(0.1) == pytest.approx(np.sin(0.8) / 8)
    with pytest.raises(DomainError):
        M(2.0)


def test_closed_field_approximation_converges():
    V = closed_field(lambda x: np.exp(np.cos(x)))
    assert sup_norm(approximate(V, 16) - approximate(V, 32)) < 1e-10
