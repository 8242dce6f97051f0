"""The Hilbert transform ``J`` on circle vector fields, three ways.

Normalization: ``J(sin kx) = cos kx`` and ``J(cos kx) = -sin kx``.  In the
principal-value form this is

    (JV)(x) = (1/2π) PV ∫_{-π}^{π} V(y) cot((y - x)/2) dy.

The Beltrami route rotates the extension coefficient of ``V``: with
``μ = ∂Ṽ/∂z̄`` it solves for the field of ``μ̂ = -iμ`` on H and ``+iμ`` on
H*.  With this orientation the result matches the two other routes; the
opposite rotation produces ``-J``.  Outputs agree modulo quadratic
polynomials (constants in the angle chart, affine terms after the 0, 1
normalization on the line).
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError
from .numerics import Tolerance, pv_circle_integral
from .quaddiff import TwoSidedBeltrami, field_beltrami, v_mu
from .vectorfield import VectorField, closed_field, trig_field

__all__ = ["hilbert_pv", "hilbert_fourier", "hilbert_via_beltrami", "rotate_beltrami"]


def hilbert_pv(V, x_grid, tol: float = 1e-10, n_nodes: int = 2**14) -> np.ndarray:
    """Principal-value transform sampled on ``x_grid`` (mean-zero representative)."""
    xs = np.atleast_1d(np.asarray(x_grid, dtype=float))
    out = np.empty(xs.size)
    for i, x in enumerate(xs):
        g = lambda y, x=x: np.asarray(V(y)) / np.tan((y - x) / 2)  # noqa: E731
        out[i] = pv_circle_integral(g, x, tol=tol, n_outer=n_nodes) / (2 * np.pi)
    return out


def hilbert_fourier(V: VectorField) -> VectorField:
    """Exact coefficient map ``(a_k, b_k) -> (b_k, -a_k)``, ``a0 -> 0``."""
    if V.kind == "closed":
        raise DomainError("the Fourier route needs a trigonometric field")
    return trig_field(0.0, V.b.copy(), -V.a.copy(), name=f"J({V.name})")


def rotate_beltrami(mu: TwoSidedBeltrami) -> TwoSidedBeltrami:
    """``-iμ`` on H and ``+iμ`` on H*; preserves symmetry and ``‖μ‖∞``."""
    if mu.symmetry != "symmetric":
        raise DomainError("the Hilbert rotation is defined for symmetric coefficients")
    up = mu.upper
    return TwoSidedBeltrami(upper=lambda z: -1j * np.asarray(up(z)), symmetry="symmetric",
                            sup_bound=mu.sup_bound, support=mu.support,
                            breakpoints=mu.breakpoints, period=mu.period)


def hilbert_via_beltrami(mu, x_grid, tol: Tolerance | None = None) -> np.ndarray:
    """Real-axis values of the field of the rotated coefficient, vanishing at 0 and 1.

    ``mu`` is a symmetric :class:`TwoSidedBeltrami` or a field whose BA
    extension provides it.  Periodic coefficients (angle-chart fields) are
    integrated over one period strip.
    """
    if isinstance(mu, VectorField):
        mu = field_beltrami(mu)
    if mu.symmetry != "symmetric":
        raise DomainError("hilbert_via_beltrami requires a symmetric coefficient")
    rot = rotate_beltrami(mu)
    xs = np.atleast_1d(np.asarray(x_grid, dtype=float))
    tol = tol or Tolerance(abs_tol=1e-7, rel_tol=1e-6)
    return np.array([0.0 if x in (0.0, 1.0) else v_mu(rot, x, tol=tol).real for x in xs])


def normalize_01(values, x_grid, V01: tuple[float, float]) -> np.ndarray:
    """Subtract the affine function through ``(0, V01[0])`` and ``(1, V01[1])``."""
    x = np.asarray(x_grid, dtype=float)
    return np.asarray(values) - (V01[0] + (V01[1] - V01[0]) * x)


def as_line_representative(W: VectorField) -> VectorField:
    """``W`` read as a line-chart function, normalized to vanish at 0 and 1."""
    w0, w1 = float(W(0.0)), float(W(1.0))
    return closed_field(lambda x: np.asarray(W(x)) - (w0 + (w1 - w0) * np.asarray(x)), chart="line")
