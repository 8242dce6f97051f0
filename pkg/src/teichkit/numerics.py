"""Quadrature and grid infrastructure.

Half-plane integrals are computed on a compactified copy of the upper
half-plane: ``x = c + L tan(u)``, ``y = L tan(v)``.  Integrands decaying like
``|z|**-3`` stay bounded in ``(u, v)``, so no truncation at infinity is needed.
A quadtree of tensor Gauss-Legendre cells is refined where the
parent/children discrepancy is largest; point singularities sitting on the
real axis (simple poles of quadratic differentials) are resolved by this
refinement.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import DomainError, NumericsError

__all__ = [
    "Tolerance",
    "HalfPlaneGrid",
    "QuadResult",
    "Disc",
    "gauss_legendre",
    "integrate_halfplane",
    "integrate_disc",
    "pv_circle_integral",
    "second_difference",
]


@lru_cache(maxsize=64)
def _gl01(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    return (x + 1.0) / 2.0, w / 2.0


def gauss_legendre(n: int, a: float = 0.0, b: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on ``[a, b]``."""
    x, w = _gl01(n)
    return a + (b - a) * x, (b - a) * w


@dataclass(frozen=True)
class Tolerance:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_depth: int = 48

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("tolerances must be positive")
        if self.max_depth < 1:
            raise DomainError("max_depth must be >= 1")

    def target(self, value: complex) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


@dataclass(frozen=True)
class HalfPlaneGrid:
    """Discretization of (a truncation of) the upper half-plane.

    ``center`` and ``scale`` position the compactifying map.  ``y_min`` is the
    inner cutoff; ``y_max`` and ``x_extent`` (half-width about ``center``)
    default to infinity, i.e. the whole half-plane.  ``breakpoints`` are real
    abscissae (poles, kinks) that are placed on cell corners.
    """

    center: float = 0.0
    scale: float = 1.0
    y_min: float = 1e-12
    y_max: float = np.inf
    x_extent: float = np.inf
    breakpoints: tuple = ()
    order: int = 8
    base_cells: int = 8

    def __post_init__(self):
        if not self.y_min > 0:
            raise DomainError("y_min must be positive")
        if not self.y_max > self.y_min:
            raise DomainError("y_max must exceed y_min")
        if not (self.scale > 0 and self.x_extent > 0):
            raise DomainError("scale and x_extent must be positive")
        if self.order < 2 or self.base_cells < 1:
            raise DomainError("order >= 2 and base_cells >= 1 required")

    # compact coordinates -------------------------------------------------
    def u_of_x(self, x):
        return np.arctan((np.asarray(x, dtype=float) - self.center) / self.scale)

    def v_of_y(self, y):
        return np.arctan(np.asarray(y, dtype=float) / self.scale)

    def to_plane(self, u, v):
        x = self.center + self.scale * np.tan(u)
        y = self.scale * np.tan(v)
        jac = self.scale**2 / (np.cos(u) ** 2 * np.cos(v) ** 2)
        return x + 1j * y, jac

    def base_partition(self) -> np.ndarray:
        """Base cells as rows ``(u0, u1, v0, v1)``."""
        ulo = float(self.u_of_x(self.center - self.x_extent))
        uhi = float(self.u_of_x(self.center + self.x_extent))
        vlo = float(self.v_of_y(self.y_min))
        vhi = float(self.v_of_y(self.y_max))
        ucuts = set(np.linspace(ulo, uhi, self.base_cells + 1).tolist())
        for b in self.breakpoints:
            ub = float(self.u_of_x(b))
            if ulo < ub < uhi:
                ucuts.add(ub)
        ucuts = np.array(sorted(ucuts))
        ucuts = ucuts[np.concatenate([[True], np.diff(ucuts) > 1e-14])]
        vcuts = np.linspace(vlo, vhi, self.base_cells + 1)
        uu0, vv0 = np.meshgrid(ucuts[:-1], vcuts[:-1], indexing="ij")
        uu1, vv1 = np.meshgrid(ucuts[1:], vcuts[1:], indexing="ij")
        return np.column_stack([uu0.ravel(), uu1.ravel(), vv0.ravel(), vv1.ravel()])

    def nodes(self) -> tuple[np.ndarray, np.ndarray]:
        """Tensor Gauss-Legendre nodes (complex) and area weights of the base partition."""
        z, w = _cell_nodes(self, self.base_partition(), self.order)
        return z.ravel(), w.ravel()


def _cell_nodes(grid: HalfPlaneGrid, cells: np.ndarray, n: int):
    g, gw = _gl01(n)
    du = cells[:, 1] - cells[:, 0]
    dv = cells[:, 3] - cells[:, 2]
    u = cells[:, 0, None, None] + du[:, None, None] * g[None, :, None]
    v = cells[:, 2, None, None] + dv[:, None, None] * g[None, None, :]
    u, v = np.broadcast_arrays(u, v)
    z, jac = grid.to_plane(u, v)
    w = (du * dv)[:, None, None] * gw[None, :, None] * gw[None, None, :] * jac
    return z, w


@dataclass
class QuadResult:
    value: complex
    error: float
    converged: bool
    n_evals: int
    n_cells: int = 0

    def __iter__(self):
        yield self.value
        yield self.error

    def require(self, what: str = "quadrature") -> "QuadResult":
        if not self.converged:
            raise NumericsError(
                f"{what} did not converge: value={self.value!r}, error estimate={self.error:.3e}"
            )
        return self


def _evaluate(f, z, w):
    vals = np.asarray(f(z))
    if vals.shape != z.shape:
        vals = np.broadcast_to(vals, z.shape)
    bad = ~np.isfinite(vals)
    if bad.any():
        idx = np.argwhere(bad)[0]
        raise DomainError(f"non-finite integrand value at node z={complex(z[tuple(idx)])!r}")
    return np.sum(vals * w, axis=(1, 2))


def _split(cells: np.ndarray) -> np.ndarray:
    um = 0.5 * (cells[:, 0] + cells[:, 1])
    vm = 0.5 * (cells[:, 2] + cells[:, 3])
    c = cells
    kids = np.stack(
        [
            np.column_stack([c[:, 0], um, c[:, 2], vm]),
            np.column_stack([um, c[:, 1], c[:, 2], vm]),
            np.column_stack([c[:, 0], um, vm, c[:, 3]]),
            np.column_stack([um, c[:, 1], vm, c[:, 3]]),
        ],
        axis=1,
    )
    return kids.reshape(-1, 4)


def integrate_halfplane(
    f: Callable[[np.ndarray], np.ndarray],
    grid: HalfPlaneGrid | None = None,
    tol: Tolerance | None = None,
    max_cells: int = 200_000,
) -> QuadResult:
    """Adaptive cubature of ``f`` over the region described by ``grid``.

    ``f`` receives an array of complex points and must return an array of
    the same shape.  The result is flagged (``converged=False``) rather than
    raised when the error target is not met within ``tol.max_depth`` levels.
    """
    grid = grid or HalfPlaneGrid()
    tol = tol or Tolerance()
    n = grid.order

    cells = grid.base_partition()
    z, w = _cell_nodes(grid, cells, n)
    vals = _evaluate(f, z, w)
    n_evals = z.size
    errs = np.full(len(cells), np.inf)
    depth = np.zeros(len(cells), dtype=int)

    done_val = []  # leaves that cannot / need not be refined further
    done_err = []

    while True:
        total = np.sum(vals) + (np.sum(done_val) if done_val else 0.0)
        total_err = np.sum(errs) + (np.sum(done_err) if done_err else 0.0)
        target = tol.target(total)
        if total_err <= target or len(cells) == 0:
            break
        # retire leaves at max depth
        capped = depth >= tol.max_depth
        if capped.any():
            done_val.extend(vals[capped].tolist())
            done_err.extend(errs[capped].tolist())
            cells, vals, errs, depth = cells[~capped], vals[~capped], errs[~capped], depth[~capped]
            if len(cells) == 0:
                break
        emax = errs.max()
        thresh = max(0.25 * emax, target / (4.0 * max(len(cells), 1)))
        pick = errs >= thresh
        if not np.isfinite(emax):
            pick = ~np.isfinite(errs) | pick
        # negligible leaves are frozen to keep the working set small
        tiny = (~pick) & (errs < 1e-3 * target / max(len(cells), 1))
        if tiny.any():
            done_val.extend(vals[tiny].tolist())
            done_err.extend(errs[tiny].tolist())
        parent_cells, parent_vals, parent_depth = cells[pick], vals[pick], depth[pick]
        keep = ~(pick | tiny)
        cells, vals, errs, depth = cells[keep], vals[keep], errs[keep], depth[keep]

        kids = _split(parent_cells)
        kz, kw = _cell_nodes(grid, kids, n)
        kvals = _evaluate(f, kz, kw)
        n_evals += kz.size
        fam = kvals.reshape(-1, 4)
        fam_err = np.abs(fam.sum(axis=1) - parent_vals)
        kerrs = np.repeat(fam_err / 4.0, 4)
        cells = np.concatenate([cells, kids])
        vals = np.concatenate([vals, kvals])
        errs = np.concatenate([errs, kerrs])
        depth = np.concatenate([depth, np.repeat(parent_depth + 1, 4)])
        if len(cells) + len(done_val) > max_cells:
            break

    total = complex(np.sum(vals) + (np.sum(done_val) if done_val else 0.0))
    total_err = float(np.sum(errs) + (np.sum(done_err) if done_err else 0.0))
    return QuadResult(
        value=total,
        error=total_err,
        converged=bool(total_err <= tol.target(total)),
        n_evals=int(n_evals),
        n_cells=int(len(cells) + len(done_val)),
    )


@dataclass(frozen=True)
class Disc:
    """Closed disc ``|z - center| <= radius`` (used for compactly supported fields)."""

    center: complex
    radius: float
    order: int = 48

    def nodes(self) -> tuple[np.ndarray, np.ndarray]:
        r, wr = gauss_legendre(self.order, 0.0, self.radius)
        m = 2 * self.order
        th = 2 * np.pi * np.arange(m) / m
        rr, tt = np.meshgrid(r, th, indexing="ij")
        z = self.center + rr * np.exp(1j * tt)
        w = (wr * r)[:, None] * np.full(m, 2 * np.pi / m)[None, :]
        return z.ravel(), w.ravel()


def integrate_disc(f: Callable[[np.ndarray], np.ndarray], disc: Disc) -> complex:
    """Polar product rule (Gauss in r, trapezoid in angle) over a disc."""
    z, w = disc.nodes()
    vals = np.asarray(f(z))
    if not np.all(np.isfinite(vals)):
        raise DomainError("non-finite integrand inside disc")
    return complex(np.sum(vals * w))


def pv_circle_integral(
    g: Callable[[np.ndarray], np.ndarray],
    x: float,
    tol: float = 1e-10,
    n_outer: int = 2048,
    eps0: float = 0.5,
    max_halvings: int = 60,
) -> float:
    """Symmetric principal value of ``∫_{-π}^{π} g(y) dy`` with singularity at ``x``.

    ``g`` must be 2π-periodic.  The excised window ``|y - x| < ε`` is halved
    repeatedly.  Since ``g(x+s) + g(x-s)`` tends to a constant, the excluded
    part ``∫_0^ε`` is estimated by the last admitted piece.  Iteration stops
    when two successive estimates differ by less than ``tol``.  Halving
    stops near ``1e-7 (1 + |x|)``, where ``g`` can no longer resolve the offset.
    """

    def sym(s):
        vals = np.asarray(g(x + s)) + np.asarray(g(x - s))
        if not np.all(np.isfinite(vals)):
            raise DomainError(f"integrand singular away from x={x}")
        return vals

    # outer part split in panels to keep the Gauss rule well resolved
    edges = np.linspace(eps0, np.pi, 9)
    per = max(n_outer // 8, 8)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        s, w = gauss_legendre(per, a, b)
        total += float(np.sum(sym(s) * w))
    eps = eps0
    floor = 1e-7 * (1.0 + abs(x))
    prev = None
    for _ in range(max_halvings):
        s, w = gauss_legendre(8, eps / 2, eps)
        piece = float(np.sum(sym(s) * w))
        total += piece
        eps /= 2
        est = total + piece  # ∫_0^ε ≈ ∫_ε^{2ε}
        if prev is not None and abs(est - prev) < tol:
            return est
        prev = est
        if eps < floor:
            break
    raise NumericsError(f"principal value at x={x} did not settle to tol={tol}")


def second_difference(V: Callable, x, t) -> np.ndarray | float:
    """``V(x+t) - 2V(x) + V(x-t)``."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise DomainError("second difference requires t > 0")
    x = np.asarray(x, dtype=float)
    out = np.asarray(V(x + t)) - 2 * np.asarray(V(x)) + np.asarray(V(x - t))
    return out if out.ndim else float(out)
