"""Beurling-Ahlfors extension of line and circle homeomorphisms.

For an increasing ``h`` the extension to ``z = x + iy`` (``y > 0``) is
``H = F + iG`` with

    F = (1/2y) ∫_{x-y}^{x+y} h,
    G = (c/y) (∫_x^{x+y} h - ∫_{x-y}^x h),

where ``c = 1`` for the default (doubled) extension and ``c = 1/2`` for the
classical normalization.  Lower half-plane values follow from
``H(conj z) = conj H(z)``.

The same linear formula extends vector fields, so the derivative machinery
(:func:`ba_wirtinger`) accepts any object exposing ``__call__``,
``derivative``, ``integral``, ``breakpoints`` and ``periodic``.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

import numpy as np

from .circlemap import LineMap
from .errors import DomainError, InvariantViolation
from .numerics import HalfPlaneGrid, gauss_legendre

__all__ = [
    "PlaneExtension",
    "CircleExtension",
    "DilatationField",
    "ba_extend",
    "circle_extension",
    "ba_wirtinger",
    "local_dilatation",
    "beltrami_of",
    "max_dilatation",
    "rect_grid",
]

# below this height the derivative (no-cancellation) formula is used
Y_SWITCH = 0.05


class BoundaryProfile(Protocol):
    periodic: bool
    breakpoints: tuple

    def __call__(self, x): ...
    def derivative(self, x): ...
    def integral(self, a, b): ...


def _as_points(z) -> np.ndarray:
    return np.atleast_1d(np.asarray(z, dtype=complex))


def _cut_points(f: BoundaryProfile, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Per point, the values of ``s`` in (0, 1) where ``x ± y s`` meets a breakpoint.

    Returned as an ``(N, m)`` array padded with 1.0 (a zero-length panel).
    """
    bps = np.asarray(f.breakpoints, dtype=float)
    period = getattr(f, "period", None) or (1.0 if f.periodic else None)
    if period:
        base = bps[None, :] + period * np.round((x[:, None] - bps[None, :]) / period)
        cand = np.concatenate([base - period, base, base + period], axis=1)
    else:
        cand = np.broadcast_to(bps[None, :], (x.size, bps.size))
    s = np.abs(cand - x[:, None]) / y[:, None]
    s = np.where((s > 1e-14) & (s < 1 - 1e-14), s, 1.0)
    return np.sort(s, axis=1)


def _smoothed_rule(n: int = 32):
    # s = 3u^2 - 2u^3 clusters nodes at both ends, absorbing |s - s0|^(-1/2) endpoint singularities
    u, w = gauss_legendre(n, 0.0, 1.0)
    return 3 * u**2 - 2 * u**3, 6 * u * (1 - u) * w


_RULE = _smoothed_rule()
_CHUNK = 4096  # points per vectorized moment evaluation


def _small_y_moments(f: BoundaryProfile, z: np.ndarray, values: bool = False):
    """Moments over s in [0, 1] of the even/odd parts of f' (or f) at ``x ± y s``.

    Returns ``∫A, ∫sA, ∫D, ∫sD`` with ``A = g(x+ys) + g(x-ys)``,
    ``D = g(x+ys) - g(x-ys)`` and ``g = f'`` (``g = f`` when ``values``).
    Panels are cut where ``x ± ys`` meets a breakpoint of ``f``.
    """
    if z.size > _CHUNK:
        return np.concatenate([_small_y_moments(f, z[i : i + _CHUNK], values)
                               for i in range(0, z.size, _CHUNK)], axis=1)
    g = f if values else f.derivative
    x, y = z.real, z.imag
    r, w = _RULE
    if f.breakpoints:
        cuts = _cut_points(f, x, y)
        edges = np.concatenate([np.zeros((x.size, 1)), cuts, np.ones((x.size, 1))], axis=1)
    else:
        edges = np.tile([0.0, 1.0], (x.size, 1))
    lo, width = edges[:, :-1], np.diff(edges, axis=1)
    s = (lo[:, :, None] + width[:, :, None] * r).reshape(x.size, -1)
    ws = (width[:, :, None] * w).reshape(x.size, -1)
    gp = g(x[:, None] + y[:, None] * s)
    gm = g(x[:, None] - y[:, None] * s)
    A, D = (gp + gm) * ws, (gp - gm) * ws
    return np.stack([A.sum(1), (A * s).sum(1), D.sum(1), (D * s).sum(1)])


def _ba_values(f: BoundaryProfile, z: np.ndarray, c: float, y_switch: float = Y_SWITCH) -> np.ndarray:
    out = np.empty(z.size, dtype=complex)
    hi = z.imag >= y_switch
    if hi.any():
        x, y = z[hi].real, z[hi].imag
        ip = f.integral(x, x + y)
        im = f.integral(x - y, x)
        out[hi] = (ip + im) / (2 * y) + 1j * c * (ip - im) / y
    lo = ~hi
    if lo.any():
        iA, _, iD, _ = _small_y_moments(f, z[lo], values=True)
        out[lo] = 0.5 * iA + 1j * c * iD
    return out


def ba_wirtinger(f: BoundaryProfile, z, doubled: bool = True, y_switch: float = Y_SWITCH):
    """Exact Wirtinger derivatives ``(H_z, H_zbar)`` of the BA extension of ``f``.

    Points must lie in the open upper half-plane.  Above ``y_switch`` the
    derivatives are assembled from boundary values and the extension itself;
    below it they are written as integrals of ``f'`` that avoid the ``1/y``
    cancellation.
    """
    z = _as_points(z)
    if np.any(z.imag <= 0):
        raise DomainError("Wirtinger derivatives are evaluated in the upper half-plane")
    c = 1.0 if doubled else 0.5
    Fx = np.empty(z.size)
    Fy, Gx, Gy = np.empty_like(Fx), np.empty_like(Fx), np.empty_like(Fx)
    hi = z.imag >= y_switch
    if hi.any():
        zz = z[hi]
        x, y = zz.real, zz.imag
        hp, h0, hm = f(x + y), f(x), f(x - y)
        H = _ba_values(f, zz, c)
        Fx[hi] = (hp - hm) / (2 * y)
        Fy[hi] = (hp + hm) / (2 * y) - H.real / y
        Gx[hi] = c * (hp - 2 * h0 + hm) / y
        Gy[hi] = c * (hp - hm) / y - H.imag / y
    lo = ~hi
    if lo.any():
        iA, isA, iD, isD = _small_y_moments(f, z[lo])
        Fx[lo], Fy[lo] = 0.5 * iA, 0.5 * isD
        Gx[lo], Gy[lo] = c * iD, c * isA
    Hz = 0.5 * ((Fx + Gy) + 1j * (Gx - Fy))
    Hzb = 0.5 * ((Fx - Gy) + 1j * (Gx + Fy))
    return Hz, Hzb


@dataclass(frozen=True)
class PlaneExtension:
    """Beurling-Ahlfors extension ``H`` of a boundary map, reflected to the lower half-plane."""

    boundary: LineMap
    doubled: bool = True

    @property
    def c(self) -> float:
        return 1.0 if self.doubled else 0.5

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        shape = z.shape
        z = z.ravel()
        out = np.empty(z.size, dtype=complex)
        up, down, on = z.imag > 0, z.imag < 0, z.imag == 0
        if up.any():
            out[up] = _ba_values(self.boundary, z[up], self.c)
        if down.any():
            out[down] = np.conj(_ba_values(self.boundary, np.conj(z[down]), self.c))
        if on.any():
            out[on] = self.boundary(z[on].real)
        out = out.reshape(shape)
        return out if out.ndim else complex(out)

    def wirtinger(self, z):
        return ba_wirtinger(self.boundary, z, doubled=self.doubled)

    def beltrami(self, z):
        """Beltrami coefficient from the exact derivatives (upper half-plane)."""
        Hz, Hzb = self.wirtinger(z)
        return Hzb / Hz


def ba_extend(h: LineMap, doubled: bool = True) -> PlaneExtension:
    return PlaneExtension(boundary=h, doubled=doubled)


@dataclass(frozen=True)
class CircleExtension:
    """Disc extension ``w -> exp(2πi H(log(w)/2πi))`` of a circle lift, fixing 0."""

    plane: PlaneExtension

    def __call__(self, w):
        w = np.asarray(w, dtype=complex)
        if np.any(np.abs(w) > 1 + 1e-15):
            raise DomainError("circle extension is defined on the closed unit disc")
        out = np.zeros_like(w)
        nz = w != 0
        z = np.log(w[nz]) / (2j * np.pi)
        out[nz] = np.exp(2j * np.pi * self.plane(z))
        return out if out.ndim else complex(out)


def circle_extension(h: LineMap, doubled: bool = True) -> CircleExtension:
    if not h.periodic:
        raise DomainError("circle extension needs a periodic lift")
    return CircleExtension(plane=ba_extend(h, doubled))


# ---------------------------------------------------------------------------
# difference quotients


def _fd_wirtinger(H, z: np.ndarray, step: np.ndarray):
    def d(s):
        hx = (H(z + s) - H(z - s)) / (2 * s)
        hy = (H(z + 1j * s) - H(z - 1j * s)) / (2 * s)
        return hx, hy

    hx1, hy1 = d(step)
    hx2, hy2 = d(step / 2)
    hx = (4 * hx2 - hx1) / 3
    hy = (4 * hy2 - hy1) / 3
    return 0.5 * (hx - 1j * hy), 0.5 * (hx + 1j * hy)


def _fd_mu(H, z, step=None):
    z = _as_points(z)
    if np.any(z.imag <= 0):
        raise DomainError("difference quotients need points in the upper half-plane")
    step = z.imag / 100 if step is None else np.broadcast_to(np.asarray(step, float), z.shape)
    if np.any(step >= z.imag):
        raise DomainError("step must be smaller than Im z")
    Hz, Hzb = _fd_wirtinger(H, z, step)
    return z, Hz, Hzb


def local_dilatation(H, z, step: float | None = None):
    """``(|H_z| + |H_zbar|) / (|H_z| - |H_zbar|)`` from Richardson-extrapolated differences."""
    zz, Hz, Hzb = _fd_mu(H, z, step)
    a, b = np.abs(Hz), np.abs(Hzb)
    bad = a <= b
    if bad.any():
        raise InvariantViolation(f"orientation failure at z={complex(zz[bad][0])!r}")
    K = (a + b) / (a - b)
    return K if np.ndim(z) else float(K[0])


@dataclass(frozen=True)
class DilatationField:
    z: np.ndarray
    mu: np.ndarray
    K: np.ndarray

    def __post_init__(self):
        if np.any(np.abs(self.mu) >= 1):
            raise InvariantViolation("|mu| >= 1 in dilatation field")
        expected = (1 + np.abs(self.mu)) / (1 - np.abs(self.mu))
        if not np.allclose(self.K, expected, rtol=1e-12, atol=0):
            raise InvariantViolation("K and mu are inconsistent")

    @property
    def K_max(self) -> float:
        return float(np.max(self.K)) if self.K.size else 1.0

    def rows(self) -> np.ndarray:
        return np.column_stack([self.z.real, self.z.imag, self.mu.real, self.mu.imag, self.K])

    def to_csv(self, path) -> None:
        lines = ["x,y,re_mu,im_mu,K"]
        lines += [",".join(repr(float(v)) for v in row) for row in self.rows()]
        Path(path).write_text("\n".join(lines) + "\n")


def rect_grid(x_range=(-2.0, 2.0), y_range=(0.01, 2.0), nx: int = 41, ny: int = 41, log_y: bool = True) -> np.ndarray:
    """Rectangular node set in the upper half-plane (log-spaced heights by default)."""
    if y_range[0] <= 0:
        raise DomainError("heights must be positive")
    xs = np.linspace(*x_range, nx)
    ys = np.geomspace(*y_range, ny) if log_y else np.linspace(*y_range, ny)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    return (X + 1j * Y).ravel()


def _grid_points(grid) -> np.ndarray:
    if isinstance(grid, HalfPlaneGrid):
        z, _ = grid.nodes()
        return z[np.isfinite(z)]
    z = _as_points(grid)
    if z.size == 0:
        raise DomainError("empty grid")
    return z


def beltrami_of(H, grid, method: str = "fd") -> DilatationField:
    """Beltrami coefficient and local dilatation on the nodes of ``grid``.

    ``method="fd"`` uses difference quotients (any callable ``H``);
    ``method="exact"`` uses :meth:`PlaneExtension.wirtinger`.
    """
    z = _grid_points(grid)
    if method == "fd":
        z, Hz, Hzb = _fd_mu(H, z)
    elif method == "exact":
        Hz, Hzb = H.wirtinger(z)
    else:
        raise DomainError(f"unknown method {method!r}")
    mu = Hzb / Hz
    bad = np.abs(mu) >= 1
    if bad.any():
        raise InvariantViolation(f"|mu| >= 1 at node z={complex(z[bad][0])!r}")
    a = np.abs(mu)
    return DilatationField(z=z, mu=mu, K=(1 + a) / (1 - a))


def max_dilatation(H, grid, method: str = "fd") -> float:
    """Largest sampled local dilatation: a lower estimate of ``K(H)``."""
    return beltrami_of(H, grid, method=method).K_max
