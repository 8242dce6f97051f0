"""Brackets for the Teichmüller distance of a normalized quasisymmetric map.

Upper bound: ``½ log K`` of the Beurling-Ahlfors extension.  Lower bound:
for every integrable holomorphic ``φ`` with ``‖φ‖ = 1`` and any extension
with coefficient ``μ``

    1/K₀ <= I(φ) = ∫∫ |1 - μ φ/|φ||² / (1 - |μ|²) |φ|,

so ``d >= -½ log I(φ)``.  The companion functional ``F(φ)`` (with ``1 + μ``)
is reported as an estimate only: a max over finitely many ``φ`` is not a
bound on ``K₀``.

Writing ``I = 1 + (A - Re C)/‖φ‖`` and ``F = 1 + (A + Re C)/‖φ‖`` with
``A = ∫∫ 2|μ|²|φ|/(1-|μ|²)`` and ``C = ∫∫ 2μφ/(1-|μ|²)`` avoids the
cancellation in ``|1 - μφ/|φ||²`` for small ``μ``.  Quadrature error
estimates are added to ``I`` before taking logarithms, so the lower bound
errs on the safe side; it is flagged as uncertified when an integral did not
reach its tolerance.  Since ``e^{iθ}φ`` is
again admissible, the default optimizes the phase in closed form
(``Re e^{iθ}C -> |C|``); an explicit tuple of phases restricts the choice.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circlemap import LineMap
from .errors import DomainError
from .extension import PlaneExtension, ba_extend, beltrami_of, rect_grid
from .numerics import HalfPlaneGrid, Tolerance, integrate_halfplane
from .quaddiff import RationalQD, TwoSidedBeltrami, basis_qd, degenerating_sequence, qd_grid, qd_norm

__all__ = [
    "DistanceBracket",
    "RSTerms",
    "InfinitesimalNorm",
    "phi_family",
    "distance_upper",
    "reich_strebel_terms",
    "reich_strebel_lower",
    "reich_strebel_upper_functional",
    "infinitesimal_norm",
    "distance_bracket",
]

DEFAULT_PHASES = None  # optimal phase


def _rotated_real(C: np.ndarray, phases) -> np.ndarray:
    """``Re(e^{iθ} C)`` per row and phase; ``|C|`` for the optimal phase."""
    if phases is None:
        return np.abs(C)[:, None]
    return (np.exp(1j * np.asarray(phases))[None, :] * C[:, None]).real


def phi_family(poles=(-3.0, -1.0, -0.5, 0.5, 2.0, 4.0),
               degenerate=((0.0, 1.0), (0.0, 0.25), (0.0, 0.05), (1.0, 0.5), (-1.0, 0.5))) -> list[RationalQD]:
    """Basis differentials at the given poles plus degenerating-family members ``(x, t)``."""
    return [basis_qd(x) for x in poles] + [degenerating_sequence(x, t) for x, t in degenerate]


def _upper_mu(mu):
    """Evaluator of ``μ`` on the upper half-plane and its real singular abscissae."""
    if isinstance(mu, PlaneExtension):
        return mu.beltrami, tuple(mu.boundary.breakpoints)
    if isinstance(mu, TwoSidedBeltrami):
        return mu.on_upper, tuple(mu.breakpoints)
    if callable(mu):
        return mu, ()
    raise DomainError("expected an extension, a TwoSidedBeltrami or a callable")


def _flat(f):
    def g(z):
        z = np.asarray(z)
        return np.asarray(f(z.ravel())).reshape(z.shape)

    return g


def distance_upper(h: LineMap, grid=None) -> float:
    """``½ log`` of the sampled maximal dilatation of the BA extension."""
    grid = rect_grid((-4, 5), (1e-3, 5), 91, 61) if grid is None else grid
    K = beltrami_of(ba_extend(h), grid, method="exact").K_max
    return float(0.5 * np.log(K))


@dataclass(frozen=True)
class RSTerms:
    """Per-``φ`` quantities: norms, ``A``, complex ``C`` and optionally ``∫∫μφ``.

    ``error`` holds the summed quadrature error estimates of ``A`` and ``C``.
    """

    norm: np.ndarray
    A: np.ndarray
    C: np.ndarray
    error: np.ndarray
    converged: bool
    pairing: np.ndarray | None = None

    def I(self, phases=DEFAULT_PHASES, conservative: bool = True) -> np.ndarray:
        """``I(e^{iθ}φ)`` as an array of shape ``(n_phi, n_phase)``, inflated by the error estimate."""
        pad = self.error if conservative else 0.0 * self.error
        return 1 + (self.A[:, None] + pad[:, None] - _rotated_real(self.C, phases)) / self.norm[:, None]

    def F(self, phases=DEFAULT_PHASES) -> np.ndarray:
        return 1 + (self.A[:, None] + _rotated_real(self.C, phases)) / self.norm[:, None]


def reich_strebel_terms(mu, phi_list, t: float = 1.0, tol: Tolerance | None = None,
                        grid: HalfPlaneGrid | None = None, with_pairing: bool = False,
                        max_cells: int = 40_000) -> RSTerms:
    """Integrals behind both inequalities for the coefficient ``t μ``.

    ``A`` and ``C`` are not required to converge; their error estimates are
    carried along instead (see :meth:`RSTerms.I`).
    """
    f, bps = _upper_mu(mu)
    f = _flat(f)
    tol = tol or Tolerance(abs_tol=1e-9, rel_tol=1e-7)
    norms, As, Cs, Ps, errs, ok = [], [], [], [], [], True
    for phi in phi_list:
        g = grid or qd_grid(list(phi.all_poles()) + list(bps))

        def weights(z, phi=phi):
            m = t * np.asarray(f(z))
            a2 = np.abs(m) ** 2
            if np.any(a2 >= 1):
                raise DomainError("|mu| >= 1 inside the half-plane")
            return m, a2, phi(z), 1.0 / (1.0 - a2)

        def integrand_A(z):
            m, a2, p, w = weights(z)
            return 2 * a2 * np.abs(p) * w

        def integrand_C(z):
            m, a2, p, w = weights(z)
            return 2 * m * p * w

        def integrand_P(z):
            return t * np.asarray(f(z)) * phi(z)

        norms.append(qd_norm(phi))
        rA = integrate_halfplane(integrand_A, g, tol, max_cells=max_cells)
        rC = integrate_halfplane(integrand_C, g, tol, max_cells=max_cells)
        As.append(rA.value.real)
        Cs.append(rC.value)
        errs.append(rA.error + rC.error)
        ok = ok and rA.converged and rC.converged
        if with_pairing:
            Ps.append(integrate_halfplane(integrand_P, g, tol).require("pairing").value)
    return RSTerms(norm=np.array(norms), A=np.array(As), C=np.array(Cs), error=np.array(errs),
                   converged=ok, pairing=np.array(Ps) if with_pairing else None)


def _lower_from_terms(terms: RSTerms, phases) -> float:
    return float(max(0.0, np.max(-0.5 * np.log(terms.I(phases)))))


def reich_strebel_lower(mu, phi_list, t: float = 1.0, phases=DEFAULT_PHASES, **kw) -> float:
    """Lower bound ``max(0, max_φ -½ log I(φ))`` on the distance."""
    return _lower_from_terms(reich_strebel_terms(mu, phi_list, t=t, **kw), phases)


def reich_strebel_upper_functional(mu, phi_list, t: float = 1.0, phases=DEFAULT_PHASES, **kw) -> float:
    """``max_φ F(φ)`` over the sampled list; an estimate of the sup functional, not a bound."""
    return float(np.max(reich_strebel_terms(mu, phi_list, t=t, **kw).F(phases)))


@dataclass(frozen=True)
class InfinitesimalNorm:
    """``lower = max |Re e^{iθ}∫∫μφ| / ‖φ‖`` over the list; ``upper`` = sampled ``‖μ‖∞``.

    With the phase free (``phases=None``) the lower value is ``max |∫∫μφ| / ‖φ‖``.
    """

    lower: float
    upper: float


def infinitesimal_norm(mu, phi_list, phases=None, tol: Tolerance | None = None,
                       sup_points=None) -> InfinitesimalNorm:
    f, bps = _upper_mu(mu)
    f = _flat(f)
    tol = tol or Tolerance(abs_tol=1e-11, rel_tol=1e-8)
    best = 0.0
    for phi in phi_list:
        g = qd_grid(list(phi.all_poles()) + list(bps))
        val = integrate_halfplane(lambda z: np.asarray(f(z)) * phi(z), g, tol).require("pairing").value
        best = max(best, float(_rotated_real(np.array([val]), phases).max()) / qd_norm(phi))
    if isinstance(mu, TwoSidedBeltrami) and np.isfinite(mu.sup_bound):
        upper = float(mu.sup_bound)
    else:
        pts = rect_grid((-5, 5), (1e-3, 5), 81, 41) if sup_points is None else sup_points
        upper = float(np.max(np.abs(f(pts))))
    return InfinitesimalNorm(lower=best, upper=max(upper, best))


@dataclass(frozen=True)
class DistanceBracket:
    map_id: str
    K: float
    d_upper: float
    d_lower: float
    certified: bool = True

    @property
    def gap(self) -> float:
        return self.d_upper - self.d_lower

    def as_dict(self) -> dict:
        return {"map": self.map_id, "K_BA": self.K, "d_upper": self.d_upper,
                "d_lower": self.d_lower, "gap": self.gap, "certified": self.certified}


def distance_bracket(h: LineMap, phi_list=None, grid=None, tol: Tolerance | None = None) -> DistanceBracket:
    d_up = distance_upper(h, grid)
    phis = phi_family() if phi_list is None else phi_list
    terms = reich_strebel_terms(ba_extend(h), phis, tol=tol)
    return DistanceBracket(map_id=h.name, K=float(np.exp(2 * d_up)), d_upper=d_up,
                           d_lower=_lower_from_terms(terms, DEFAULT_PHASES), certified=terms.converged)
