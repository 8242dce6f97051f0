import numpy as np
import pytest
from hypothesis import given, strategies as st

from teichkit.hilbert import rotate_beltrami
from teichkit.quaddiff import TwoSidedBeltrami
from teichkit.quasifuchsian import op_I, op_J, op_K, quaternion_table, random_coefficient


def _points(seed, n=64):
    r = np.random.default_rng(seed)
    return r.uniform(-3, 3, n) + 1j * r.uniform(0, 3, n)


@given(st.integers(0, 2**32 - 1), st.sampled_from(["adhoc", "symmetric", "antisymmetric", "zero-below"]))
def test_quaternion_relations_exact(seed, tag):
    mu = random_coefficient(np.random.default_rng(seed), tag)
    report = quaternion_table(mu, _points(seed))
    assert report.max_error == 0.0
    assert report.passed()


@pytest.mark.parametrize("op,expected", [(op_I, "antisymmetric"), (op_J, "antisymmetric"), (op_K, "symmetric")])
def test_symmetry_tags_of_symmetric_input(op, expected):
    mu = random_coefficient(np.random.default_rng(1), "symmetric")
    out = op(mu)
    assert out.symmetry == expected
    out.check(_points(2))


@pytest.mark.parametrize("op,expected", [(op_I, "symmetric"), (op_J, "symmetric"), (op_K, "antisymmetric")])
def test_symmetry_tags_of_antisymmetric_input(op, expected):
    mu = random_coefficient(np.random.default_rng(3), "antisymmetric")
    out = op(mu)
    assert out.symmetry == expected
    out.check(_points(4))


def test_zero_fixed():
    z = _points(5)
    for op in (op_I, op_J, op_K):
        assert np.all(op(TwoSidedBeltrami.zero())(np.concatenate([z, np.conj(z)])) == 0)


def test_K_on_symmetric_is_minus_hilbert_rotation():
    mu = random_coefficient(np.random.default_rng(6), "symmetric")
    z = _points(7)
    assert np.array_equal(op_K(mu).on_upper(z), -rotate_beltrami(mu).on_upper(z))
    assert np.array_equal(op_K(mu).on_lower(np.conj(z)), -rotate_beltrami(mu).on_lower(np.conj(z)))


def test_J_of_symmetric_keeps_upper_and_negates_lower():
    mu = random_coefficient(np.random.default_rng(8), "symmetric")
    z = _points(9)
    J = op_J(mu)
    assert np.array_equal(J.on_upper(z), mu.on_upper(z))
    assert np.array_equal(J.on_lower(np.conj(z)), -mu.on_lower(np.conj(z)))
