"""The almost complex operators ``I``, ``J``, ``K`` on two-sided coefficients.

A two-sided coefficient is a pair ``(μ₁ on H, μ₂ on H*)``.

* ``I(μ) = (iμ₁, iμ₂)``;
* ``J(μ) = (conj μ₂(z̄), -conj μ₁(z̄))``;
* ``K = I∘J``.

They satisfy the quaternion relations ``I² = J² = K² = -1``, ``IJ = K = -JI``,
``JK = I`` and ``KI = J``, all pointwise and exact in floating point (only
sign flips, conjugation and multiplication by ``i`` are involved).

Reflection symmetry tags transform as follows.  ``K`` preserves both the
symmetric and the antisymmetric class.  ``I`` and ``J`` exchange them: on a
symmetric ``μ`` one gets ``J(μ) = (μ₁, -μ₂)``.  On symmetric coefficients
``K(μ) = (iμ₁, -iμ₂)``, which is minus the rotation used by the Hilbert
transform in :mod:`teichkit.hilbert`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .quaddiff import TwoSidedBeltrami

__all__ = ["op_I", "op_J", "op_K", "random_coefficient", "QuaternionReport", "quaternion_table"]

_SWAP = {"symmetric": "antisymmetric", "antisymmetric": "symmetric"}


def _make(upper, lower, tag: str, mu: TwoSidedBeltrami) -> TwoSidedBeltrami:
    return TwoSidedBeltrami(upper=upper, lower=lower, symmetry=tag, sup_bound=mu.sup_bound,
                            breakpoints=mu.breakpoints, period=mu.period)


def op_I(mu: TwoSidedBeltrami) -> TwoSidedBeltrami:
    tag = _SWAP.get(mu.symmetry, "zero-below" if mu.symmetry == "zero-below" else "adhoc")
    return _make(lambda z: 1j * mu.on_upper(z), lambda z: 1j * mu.on_lower(z), tag, mu)


def op_J(mu: TwoSidedBeltrami) -> TwoSidedBeltrami:
    tag = _SWAP.get(mu.symmetry, "adhoc")
    return _make(lambda z: np.conj(mu.on_lower(np.conj(z))),
                 lambda z: -np.conj(mu.on_upper(np.conj(z))), tag, mu)


def op_K(mu: TwoSidedBeltrami) -> TwoSidedBeltrami:
    tag = mu.symmetry if mu.symmetry in _SWAP else "adhoc"
    return _make(lambda z: 1j * np.conj(mu.on_lower(np.conj(z))),
                 lambda z: -1j * np.conj(mu.on_upper(np.conj(z))), tag, mu)


def random_coefficient(rng: np.random.Generator, symmetry: str = "adhoc") -> TwoSidedBeltrami:
    """Bounded two-sided coefficient built from decaying exponentials.

    ``c₁ e^{ik₁z}`` on H and ``c₂ e^{-ik₂z}`` on H*, with ``|c| < 1``.
    """
    c1, c2 = (rng.uniform(0, 0.95) * np.exp(2j * np.pi * rng.uniform()) for _ in range(2))
    k1, k2 = rng.uniform(0.1, 3.0, size=2)
    up = lambda z: c1 * np.exp(1j * k1 * np.asarray(z))  # noqa: E731
    if symmetry == "adhoc":
        return TwoSidedBeltrami(upper=up, lower=lambda z: c2 * np.exp(-1j * k2 * np.asarray(z)),
                                symmetry="adhoc", sup_bound=max(abs(c1), abs(c2)))
    return TwoSidedBeltrami(upper=up, symmetry=symmetry, sup_bound=abs(c1))


@dataclass(frozen=True)
class QuaternionReport:
    """Maximal pointwise deviation of each relation, and of the sup-norm isometries."""

    errors: dict

    @property
    def max_error(self) -> float:
        return max(self.errors.values())

    def passed(self, tol: float = 1e-15) -> bool:
        return self.max_error <= tol


def _values(mu: TwoSidedBeltrami, zu: np.ndarray) -> np.ndarray:
    return np.concatenate([mu.on_upper(zu), mu.on_lower(np.conj(zu))])


def quaternion_table(mu: TwoSidedBeltrami, points) -> QuaternionReport:
    """Check every relation of the operator algebra on sample points of H (and their mirrors)."""
    zu = np.asarray(points, dtype=complex)
    v = _values(mu, zu)
    ev = lambda m: _values(m, zu)  # noqa: E731
    I, J, K = op_I, op_J, op_K
    rel = {
        "I^2=-1": ev(I(I(mu))) + v,
        "J^2=-1": ev(J(J(mu))) + v,
        "K^2=-1": ev(K(K(mu))) + v,
        "IJ=K": ev(I(J(mu))) - ev(K(mu)),
        "JK=I": ev(J(K(mu))) - ev(I(mu)),
        "KI=J": ev(K(I(mu))) - ev(J(mu)),
        "IJ=-JI": ev(I(J(mu))) + ev(J(I(mu))),
        "JK=-KJ": ev(J(K(mu))) + ev(K(J(mu))),
        "KI=-IK": ev(K(I(mu))) + ev(I(K(mu))),
    }
    errors = {k: float(np.max(np.abs(d))) for k, d in rel.items()}
    sup = np.max(np.abs(v))
    for name, op in (("|I|", I), ("|J|", J), ("|K|", K)):
        errors[name] = float(abs(np.max(np.abs(ev(op(mu)))) - sup))
    return QuaternionReport(errors=errors)
