"""Integrable quadratic differentials on the upper half-plane and their pairings.

Differentials are rational with simple poles on the real axis, either as
basis combinations ``Σ λ_j φ_{x_j}`` with

    φ_x(z) = x(x-1) / (z (z-1) (z-x)),

or in general form ``p(z) / Π (z - x_j)`` with ``deg p <= n - 3``.

Pairing convention.  For a line-chart field ``V`` with a bounded extension
``Ṽ`` and ``μ = ∂Ṽ/∂z̄``, Green's formula over the half-plane indented at
the poles gives ``Re ∫∫_H μ φ = -(π/2) Σ_p Res_p(φ) V(p)``.  The pairing used
throughout is

    (V, φ) = (π/2) Σ_p Res_p(φ) V(p) = -Re ∫∫_H μ φ,

so both routes (:func:`pairing_residue`, :func:`pairing_integral`) return the
same number.  Norm-type quantities only involve ``|∫∫ μ φ|`` and are
unaffected by the orientation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, InvariantViolation
from .extension import ba_wirtinger
from .numerics import Disc, HalfPlaneGrid, QuadResult, Tolerance, integrate_disc, integrate_halfplane
from .vectorfield import VectorField

__all__ = [
    "RationalQD",
    "TwoSidedBeltrami",
    "basis_qd",
    "degenerating_sequence",
    "qd_grid",
    "qd_norm",
    "pairing_complex",
    "pairing_integral",
    "pairing_residue",
    "field_beltrami",
    "v_mu",
    "bers_map",
    "b_norm",
]


@dataclass(frozen=True)
class RationalQD:
    """Rational quadratic differential with simple real poles.

    Basis form: ``weights`` are the ``λ_j`` of ``Σ λ_j φ_{x_j}`` (poles 0 and
    1 are implicit).  General form: ``numerator`` holds the coefficients of
    ``p`` in increasing degree and ``weights`` is empty.
    """

    poles: tuple
    weights: tuple = ()
    numerator: tuple | None = None

    def __post_init__(self):
        poles = np.asarray(self.poles, dtype=float)
        if poles.ndim != 1 or poles.size == 0:
            raise DomainError("at least one pole is required")
        if len(np.unique(poles)) != poles.size:
            raise DomainError("poles must be distinct")
        if self.numerator is None:
            if len(self.weights) != poles.size:
                raise DomainError("one weight per pole")
            if np.any(np.isin(poles, [0.0, 1.0])):
                raise DomainError("basis differentials φ_x need x outside {0, 1}")
        else:
            if self.weights:
                raise DomainError("give weights (basis form) or a numerator (general form), not both")
            if len(self.numerator) > poles.size - 2:
                raise DomainError("numerator degree must be <= n - 3 for integrability at infinity")

    @property
    def is_basis(self) -> bool:
        return self.numerator is None

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if self.is_basis:
            base = 1.0 / (z * (z - 1))
            acc = np.zeros_like(z)
            for x, lam in zip(self.poles, self.weights):
                acc = acc + lam * x * (x - 1) / (z - x)
            return base * acc
        num = np.polynomial.polynomial.polyval(z, np.asarray(self.numerator, dtype=float))
        den = np.ones_like(z)
        for x in self.poles:
            den = den * (z - x)
        return num / den

    def residues(self) -> dict[float, float]:
        """Residue at every pole (including 0 and 1 for the basis form)."""
        res: dict[float, float] = {}
        if self.is_basis:
            for x, lam in zip(self.poles, self.weights):
                res[float(x)] = res.get(float(x), 0.0) + lam
                res[0.0] = res.get(0.0, 0.0) + lam * (x - 1)
                res[1.0] = res.get(1.0, 0.0) - lam * x
            return res
        p = np.asarray(self.numerator, dtype=float)
        for j, x in enumerate(self.poles):
            others = np.prod([x - y for k, y in enumerate(self.poles) if k != j])
            res[float(x)] = float(np.polynomial.polynomial.polyval(x, p) / others)
        return res

    def all_poles(self) -> tuple:
        return tuple(sorted(self.residues()))

    def scaled(self, c: float) -> "RationalQD":
        if self.is_basis:
            return RationalQD(self.poles, tuple(c * w for w in self.weights))
        return RationalQD(self.poles, numerator=tuple(c * a for a in self.numerator))

    def to_text(self) -> str:
        coeffs = self.weights if self.is_basis else self.numerator
        tag = "basis" if self.is_basis else "general"
        return f"{tag};{','.join(map(repr, map(float, self.poles)))};{','.join(map(repr, map(float, coeffs)))}\n"

    @staticmethod
    def from_text(text: str) -> "RationalQD":
        tag, poles, coeffs = text.strip().split(";")
        poles = tuple(float(t) for t in poles.split(","))
        coeffs = tuple(float(t) for t in coeffs.split(",") if t)
        if tag == "basis":
            return RationalQD(poles, coeffs)
        if tag == "general":
            return RationalQD(poles, numerator=coeffs)
        raise DomainError(f"unknown differential form {tag!r}")


def basis_qd(x: float, weight: float = 1.0) -> RationalQD:
    return RationalQD((float(x),), (float(weight),))


def degenerating_sequence(x: float, t: float) -> RationalQD:
    """``2t / ((z - (x-t)) (z - x) (z - (x+t)))``; its norm does not depend on ``(x, t)``."""
    if t <= 0:
        raise DomainError("t must be positive")
    return RationalQD((x - t, x, x + t), numerator=(2.0 * t,))


# ---------------------------------------------------------------------------
# Beltrami coefficients on both half-planes

SYMMETRY_TAGS = ("symmetric", "antisymmetric", "zero-below", "adhoc")


@dataclass(frozen=True)
class TwoSidedBeltrami:
    """Coefficient ``μ`` given by ``upper`` on H and ``lower`` on H*.

    ``lower`` receives points of the lower half-plane.  For the
    ``symmetric`` tag it defaults to ``conj(upper(conj z))``, for
    ``antisymmetric`` to its negative, and for ``zero-below`` to 0.
    ``support`` optionally confines the upper part to a disc; ``breakpoints``
    are real abscissae where ``upper`` is not smooth up to the axis.
    """

    upper: Callable
    lower: Callable | None = None
    symmetry: str = "symmetric"
    sup_bound: float = np.inf
    support: Disc | None = None
    breakpoints: tuple = ()
    period: float | None = None

    def __post_init__(self):
        if self.symmetry not in SYMMETRY_TAGS:
            raise DomainError(f"unknown symmetry tag {self.symmetry!r}")
        if self.symmetry == "adhoc" and self.lower is None:
            raise DomainError("ad hoc coefficients need an explicit lower evaluator")

    def on_upper(self, z):
        z = np.asarray(z, dtype=complex)
        vals = np.asarray(self.upper(z), dtype=complex)
        if self.support is not None:
            vals = np.where(np.abs(z - self.support.center) <= self.support.radius, vals, 0.0)
        return np.broadcast_to(vals, z.shape)

    def on_lower(self, z):
        z = np.asarray(z, dtype=complex)
        if self.lower is not None:
            return np.broadcast_to(np.asarray(self.lower(z), dtype=complex), z.shape)
        if self.symmetry == "zero-below":
            return np.zeros(z.shape, dtype=complex)
        refl = np.conj(self.on_upper(np.conj(z)))
        return refl if self.symmetry == "symmetric" else -refl

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return np.where(z.imag >= 0, self.on_upper(z), self.on_lower(z))

    def check(self, points, tol: float = 1e-12) -> None:
        """Verify the declared symmetry and sup bound on sample points of H."""
        z = np.asarray(points, dtype=complex)
        up, low = self.on_upper(z), self.on_lower(np.conj(z))
        if self.symmetry == "symmetric" and np.max(np.abs(low - np.conj(up)), initial=0) > tol:
            raise InvariantViolation("coefficient is not symmetric under reflection")
        if self.symmetry == "antisymmetric" and np.max(np.abs(low + np.conj(up)), initial=0) > tol:
            raise InvariantViolation("coefficient is not antisymmetric under reflection")
        if self.symmetry == "zero-below" and np.max(np.abs(low), initial=0) > 0:
            raise InvariantViolation("coefficient does not vanish below")
        if max(np.max(np.abs(up), initial=0), np.max(np.abs(low), initial=0)) > self.sup_bound + tol:
            raise InvariantViolation("sup bound exceeded")

    def sampled_sup(self, points) -> float:
        z = np.asarray(points, dtype=complex)
        return float(max(np.max(np.abs(self.on_upper(z))), np.max(np.abs(self.on_lower(np.conj(z))))))

    @staticmethod
    def zero() -> "TwoSidedBeltrami":
        return TwoSidedBeltrami(upper=lambda z: np.zeros_like(z), sup_bound=0.0)

    @staticmethod
    def constant(c: complex, symmetry: str = "symmetric") -> "TwoSidedBeltrami":
        return TwoSidedBeltrami(upper=lambda z: np.full(np.shape(z), c, dtype=complex),
                                symmetry=symmetry, sup_bound=abs(c))

    @staticmethod
    def disc_indicator(c: complex, center: complex, radius: float, symmetry: str = "zero-below") -> "TwoSidedBeltrami":
        if center.imag - radius <= 0:
            raise DomainError("disc must lie in the upper half-plane")
        return TwoSidedBeltrami(upper=lambda z: np.full(np.shape(z), c, dtype=complex), symmetry=symmetry,
                                sup_bound=abs(c), support=Disc(center, radius))


def field_beltrami(V: VectorField, doubled: bool = True) -> TwoSidedBeltrami:
    """Symmetric coefficient ``∂Ṽ/∂z̄`` of the BA extension of a line or angle field."""
    if V.chart == "complex":
        raise DomainError("extend fields in the angle or line chart")

    def upper(z):
        z = np.asarray(z, dtype=complex)
        _, mu = ba_wirtinger(V, z.ravel(), doubled=doubled)
        return mu.reshape(z.shape)

    return TwoSidedBeltrami(upper=upper, breakpoints=tuple(V.breakpoints), period=V.period)


# ---------------------------------------------------------------------------
# quadrature


def qd_grid(points, y_min_rel: float = 1e-12, **kw) -> HalfPlaneGrid:
    """Half-plane grid adapted to a set of real singular points."""
    pts = np.unique(np.asarray(points, dtype=float))
    if pts.size == 0:
        return HalfPlaneGrid(**kw)
    spread = float(pts[-1] - pts[0]) if pts.size > 1 else 1.0
    gap = float(np.min(np.diff(pts))) if pts.size > 1 else 1.0
    return HalfPlaneGrid(center=float(pts.mean()), scale=spread, y_min=y_min_rel * gap,
                         breakpoints=tuple(pts.tolist()), **kw)


def qd_norm(phi: RationalQD, grid: HalfPlaneGrid | None = None, tol: Tolerance | None = None) -> float:
    """``∫∫_H |φ|``."""
    grid = grid or qd_grid(phi.all_poles())
    tol = tol or Tolerance(abs_tol=1e-13, rel_tol=1e-10)
    res = integrate_halfplane(lambda z: np.abs(phi(z)), grid, tol).require("qd_norm")
    return float(res.value.real)


def _as_beltrami(mu) -> TwoSidedBeltrami:
    if isinstance(mu, TwoSidedBeltrami):
        return mu
    if isinstance(mu, VectorField):
        return field_beltrami(mu)
    raise DomainError("expected a TwoSidedBeltrami or a VectorField")


def pairing_complex(mu, phi: RationalQD, grid: HalfPlaneGrid | None = None,
                    tol: Tolerance | None = None) -> QuadResult:
    """``∫∫_H μ φ`` as a quadrature result."""
    mu = _as_beltrami(mu)
    tol = tol or Tolerance(abs_tol=1e-10, rel_tol=1e-7)
    if mu.support is not None:
        val = integrate_disc(lambda z: mu.on_upper(z) * phi(z), mu.support)
        return QuadResult(value=val, error=0.0, converged=True, n_evals=mu.support.order**2 * 2)
    grid = grid or qd_grid(list(phi.all_poles()) + list(mu.breakpoints))
    return integrate_halfplane(lambda z: mu.on_upper(z) * phi(z), grid, tol)


def pairing_integral(mu, phi: RationalQD, grid: HalfPlaneGrid | None = None, tol: Tolerance | None = None) -> float:
    """``(V, φ) = -Re ∫∫_H μ φ`` with ``μ = ∂Ṽ/∂z̄`` (``mu`` may be the field ``V`` itself)."""
    return -float(pairing_complex(mu, phi, grid, tol).require("pairing").value.real)


def pairing_residue(V: Callable, phi: RationalQD, check_normalized: bool = True, tol: float = 1e-10) -> float:
    """``(π/2) Σ λ_j V(x_j)`` for basis form; ``(π/2) Σ_p Res_p(φ) V(p)`` in general.

    The basis-form sum omits the implicit poles 0 and 1, so ``V`` must
    vanish there (see :func:`~teichkit.vectorfield.project_out_quadratics`).
    """
    if phi.is_basis:
        if check_normalized:
            v0, v1 = float(V(0.0)), float(V(1.0))
            if max(abs(v0), abs(v1)) > tol:
                raise DomainError(
                    f"field must vanish at 0 and 1 (got {v0:.3g}, {v1:.3g}); apply project_out_quadratics first"
                )
        return float(0.5 * np.pi * sum(w * float(V(x)) for x, w in zip(phi.poles, phi.weights)))
    return float(0.5 * np.pi * sum(r * float(V(p)) for p, r in phi.residues().items()))


# ---------------------------------------------------------------------------
# representation maps


def _cauchy_kernel(z: complex, period: float | None):
    """``1/(ζ(ζ-1)(ζ-z))``, or its sum over translates by ``period``."""
    A, B, C = 1.0 / z, 1.0 / (1.0 - z), 1.0 / (z * (z - 1.0))
    if period is None:
        return lambda w: 1.0 / (w * (w - 1.0) * (w - z))
    k = np.pi / period
    # Σ_n 1/(w + nP - a) = (π/P) cot(π(w - a)/P); A + B + C = 0 gives decay in Im w
    cot = lambda u: 1.0 / np.tan(u)  # noqa: E731
    return lambda w: k * (A * cot(k * w) + B * cot(k * (w - 1.0)) + C * cot(k * (w - z)))


def v_mu(mu: TwoSidedBeltrami, z: complex, grid: HalfPlaneGrid | None = None,
         tol: Tolerance | None = None) -> complex:
    """``V_μ(z) = -(z(z-1)/π) ∫∫_C μ(ζ) / (ζ(ζ-1)(ζ-z))``, normalized to vanish at 0 and 1.

    For a ``period``-periodic ``μ`` the integral is folded onto one strip.
    Real ``z`` with symmetric ``μ`` uses ``V = -(2 z(z-1)/π) Re ∫∫_H``.
    """
    z = complex(z)
    if z in (0, 1):
        raise DomainError("V_mu is normalized to vanish at 0 and 1; evaluate elsewhere")
    tol = tol or Tolerance(abs_tol=1e-11, rel_tol=1e-8)
    P = mu.period
    K = _cauchy_kernel(z, P)
    pts = [0.0, 1.0, z.real] + list(mu.breakpoints)
    if P is not None:
        pts = [((p + P / 2) % P) - P / 2 for p in pts]
        grid = grid or HalfPlaneGrid(center=0.0, scale=1.0, x_extent=P / 2,
                                     breakpoints=tuple(sorted(set(pts))), y_min=1e-13)
    else:
        grid = grid or qd_grid(pts + ([z.real + 1.0] if z.real in (0.0, 1.0) else []))

    def integrate(f):
        if mu.support is not None:
            return integrate_disc(f, mu.support)
        return integrate_halfplane(f, grid, tol).require("v_mu").value

    pref = -z * (z - 1) / np.pi
    if z.imag == 0 and mu.symmetry == "symmetric":
        return complex(2 * (pref * integrate(lambda w: mu.on_upper(w) * K(w))).real)
    up = integrate(lambda w: mu.on_upper(w) * K(w))
    if mu.symmetry == "zero-below":
        return complex(pref * up)
    if mu.support is not None:
        low = np.conj(integrate(lambda w: np.conj(mu.on_lower(np.conj(w)) * K(np.conj(w)))))
    else:
        low = integrate(lambda w: mu.on_lower(np.conj(w)) * K(np.conj(w)))
    return complex(pref * (up + low))


def bers_map(mu: TwoSidedBeltrami, z: complex, grid: HalfPlaneGrid | None = None,
             tol: Tolerance | None = None) -> complex:
    """``-(6/π) ∫∫_H μ(ζ) / (ζ - z)^4`` at a point of the lower half-plane."""
    z = complex(z)
    if z.imag >= 0:
        raise DomainError("the Bers map is evaluated in the lower half-plane")
    f = lambda w: mu.on_upper(w) / (w - z) ** 4  # noqa: E731
    if mu.support is not None:
        val = integrate_disc(f, mu.support)
    else:
        tol = tol or Tolerance(abs_tol=1e-12, rel_tol=1e-9)
        grid = grid or HalfPlaneGrid(center=z.real, scale=abs(z.imag), breakpoints=tuple(mu.breakpoints))
        val = integrate_halfplane(f, grid, tol).require("bers_map").value
    return complex(-6.0 / np.pi * val)


def b_norm(mu: TwoSidedBeltrami, points, **kw) -> float:
    """Sampled ``sup |β(z)| y²`` over points of the lower half-plane."""
    pts = np.atleast_1d(np.asarray(points, dtype=complex))
    return float(max(abs(bers_map(mu, p, **kw)) * p.imag**2 for p in pts))
