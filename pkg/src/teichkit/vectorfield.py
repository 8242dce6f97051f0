"""Zygmund-class vector fields on the circle and the line.

Three charts are used:

* ``angle``: a real ``2π``-periodic function ``V(x)``;
* ``complex``: ``W(z) = i z V(arg z)`` on the unit circle;
* ``line``: ``V̂(u)`` on the real axis, related through the stereographic
  coordinate ``u = (z + i)/(iz + 1)`` by ``W(z) = V̂(u) dz/du`` with
  ``dz/du = -2/(u + i)**2``.

Trigonometric fields are ``a0/2 + Σ a_k cos kx + b_k sin kx``.  In the
complex chart ``W = Σ c_k z^k`` the coefficients satisfy
``a_k = 2 Im c_{k+1}``, ``b_k = 2 Re c_{k+1}`` and ``c_{2-k} = -conj(c_k)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad_vec

from .errors import DomainError, InvariantViolation
from .numerics import second_difference

__all__ = [
    "VectorField",
    "QuadraticPolyField",
    "Quadruple",
    "trig_field",
    "from_samples",
    "closed_field",
    "stereographic",
    "inverse_stereographic",
    "cross_ratio",
    "alternating_sum",
    "zygmund_seminorm",
    "little_zygmund_profile",
    "crossratio_seminorm",
    "transport",
    "project_out_quadratics",
    "complex_coefficients",
    "from_complex_coefficients",
]

CHARTS = ("angle", "complex", "line")


@dataclass(frozen=True)
class VectorField:
    """A vector field in one chart.

    ``kind`` is ``"trig"`` (coefficients ``a0, a, b``), ``"sampled"`` (angle
    samples, evaluated through their trigonometric interpolant) or
    ``"closed"`` (a vectorized ``func``).  Closed forms may supply ``deriv``
    and ``antideriv``; otherwise numerical versions are used.
    """

    kind: str
    chart: str = "angle"
    func: Callable | None = None
    deriv: Callable | None = None
    antideriv: Callable | None = None
    a0: float = 0.0
    a: np.ndarray = field(default_factory=lambda: np.zeros(0))
    b: np.ndarray = field(default_factory=lambda: np.zeros(0))
    samples: np.ndarray | None = None
    breakpoints: tuple = ()
    name: str = ""

    def __post_init__(self):
        if self.kind not in ("trig", "sampled", "closed"):
            raise DomainError(f"unknown representation {self.kind!r}")
        if self.chart not in CHARTS:
            raise DomainError(f"unknown chart {self.chart!r}")
        if self.kind in ("trig", "sampled") and self.chart != "angle":
            raise DomainError("trigonometric and sampled fields live in the angle chart")
        if self.kind == "closed" and self.func is None:
            raise DomainError("closed-form field needs an evaluator")
        if self.kind != "closed" and len(self.a) != len(self.b):
            raise DomainError("cosine and sine coefficient lists differ in length")

    # boundary-profile protocol used by the BA extension -----------------
    @property
    def periodic(self) -> bool:
        return self.chart == "angle"

    @property
    def period(self) -> float | None:
        return 2 * np.pi if self.chart == "angle" else None

    @property
    def degree(self) -> int:
        if self.kind == "closed":
            raise DomainError("degree is defined for trigonometric fields")
        nz = np.flatnonzero((np.abs(self.a) + np.abs(self.b)) > 0)
        return int(nz[-1] + 1) if nz.size else 0

    def _k(self):
        return np.arange(1, len(self.a) + 1)

    def _modes(self, x, ca, cb, fa, fb, chunk: int = 1 << 22):
        """``Σ ca_k fa(kx) + cb_k fb(kx)`` over the nonzero modes, in memory-bounded chunks."""
        x = np.asarray(x, dtype=float)
        live = np.flatnonzero((ca != 0) | (cb != 0))
        out = np.zeros(x.size)
        if live.size:
            k = live + 1.0
            xf = x.ravel()
            step = max(chunk // live.size, 1)
            for i in range(0, xf.size, step):
                kx = np.multiply.outer(xf[i : i + step], k)
                out[i : i + step] = fa(kx) @ ca[live] + fb(kx) @ cb[live]
        return out.reshape(x.shape) if x.ndim else float(out[0])

    def __call__(self, x):
        if self.kind == "closed":
            return self.func(np.asarray(x, dtype=complex if self.chart == "complex" else float))
        return self.a0 / 2 + self._modes(x, self.a, self.b, np.cos, np.sin)

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "closed":
            if self.deriv is not None:
                return self.deriv(x)
            s = 1e-5 * np.maximum(1.0, np.abs(x))
            return (self.func(x + s) - self.func(x - s)) / (2 * s)
        k = self._k()
        return self._modes(x, -k * self.a, k * self.b, np.sin, np.cos)

    def integral(self, lo, hi):
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        if self.kind != "closed" or self.antideriv is not None:
            P = self.antiderivative
            return P(hi) - P(lo)
        lo, hi = np.broadcast_arrays(lo, hi)
        lf, hf = lo.ravel(), hi.ravel()
        res, _ = quad_vec(lambda s: self.func(lf + (hf - lf) * s), 0.0, 1.0, epsabs=1e-14, epsrel=1e-12)
        return ((hf - lf) * res).reshape(lo.shape)

    def antiderivative(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "closed":
            if self.antideriv is None:
                raise DomainError("no closed-form antiderivative")
            return self.antideriv(x)
        k = self._k()
        return self.a0 / 2 * x + self._modes(x, self.a / k, -self.b / k, np.sin, np.cos)

    # linear structure ----------------------------------------------------
    def __add__(self, other: "VectorField") -> "VectorField":
        if self.chart != other.chart:
            raise DomainError("fields live in different charts")
        if self.kind != "closed" and other.kind != "closed":
            n = max(len(self.a), len(other.a))
            pa, pb = _pad(self.a, n), _pad(other.a, n)
            qa, qb = _pad(self.b, n), _pad(other.b, n)
            return trig_field(self.a0 + other.a0, pa + pb, qa + qb)
        return VectorField(
            kind="closed", chart=self.chart, func=lambda x: self(x) + other(x),
            deriv=lambda x: self.derivative(x) + other.derivative(x),
            breakpoints=tuple(sorted(set(self.breakpoints) | set(other.breakpoints))),
        )

    def scale(self, c: float) -> "VectorField":
        if self.kind != "closed":
            return trig_field(c * self.a0, c * self.a, c * self.b)
        f, d, P = self.func, self.deriv, self.antideriv
        return VectorField(
            kind="closed", chart=self.chart, func=lambda x: c * f(x),
            deriv=None if d is None else (lambda x: c * d(x)),
            antideriv=None if P is None else (lambda x: c * P(x)),
            breakpoints=self.breakpoints, name=f"{c}*{self.name}",
        )

    def __rmul__(self, c: float) -> "VectorField":
        return self.scale(c)

    def __sub__(self, other: "VectorField") -> "VectorField":
        return self + other.scale(-1.0)

    # serialization -------------------------------------------------------
    def coefficients_text(self) -> str:
        if self.kind == "closed":
            raise DomainError("only trigonometric fields serialize as coefficients")
        fmt = lambda v: ",".join(repr(float(t)) for t in v)  # noqa: E731
        return f"{float(self.a0)!r};{fmt(self.a)};{fmt(self.b)}\n"

    @staticmethod
    def from_coefficients_text(text: str) -> "VectorField":
        parts = text.strip().split(";")
        if len(parts) != 3:
            raise DomainError("expected 'a0;a1,...,an;b1,...,bn'")
        parse = lambda s: np.array([float(t) for t in s.split(",") if t.strip()])  # noqa: E731
        return trig_field(float(parts[0]), parse(parts[1]), parse(parts[2]))

    def to_csv(self, path, n: int = 1024) -> None:
        xs = 2 * np.pi * np.arange(n) / n
        vals = self(xs)
        lines = ["x,V"] + [f"{x!r},{float(v)!r}" for x, v in zip(xs.tolist(), vals.tolist())]
        Path(path).write_text("\n".join(lines) + "\n")


def _pad(v: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros(n)
    out[: len(v)] = v
    return out


def trig_field(a0: float = 0.0, a: Sequence[float] = (), b: Sequence[float] = (), name: str = "") -> VectorField:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n = max(len(a), len(b))
    return VectorField(kind="trig", a0=float(a0), a=_pad(a, n), b=_pad(b, n), name=name)


def from_samples(values: Sequence[float], name: str = "") -> VectorField:
    """Trigonometric interpolant of samples on the uniform grid ``2πj/N``."""
    v = np.asarray(values, dtype=float)
    N = v.size
    if N < 3:
        raise DomainError("need at least three samples")
    c = np.fft.rfft(v) / N
    n = (N - 1) // 2
    a = 2 * c[1 : n + 1].real
    b = -2 * c[1 : n + 1].imag
    if N % 2 == 0:
        # split the Nyquist term symmetrically: cos(N x / 2) only
        a = np.append(a, c[N // 2].real)
        b = np.append(b, 0.0)
    return VectorField(kind="sampled", a0=2 * c[0].real, a=a, b=b, samples=v, name=name)


def closed_field(func, chart: str = "angle", deriv=None, antideriv=None, breakpoints=(), name: str = "") -> VectorField:
    return VectorField(kind="closed", chart=chart, func=func, deriv=deriv, antideriv=antideriv,
                       breakpoints=tuple(breakpoints), name=name)


def complex_coefficients(V: VectorField) -> dict[int, complex]:
    """Coefficients ``c_k`` of ``W(z) = Σ c_k z^k`` for a trigonometric field."""
    if V.kind == "closed":
        raise DomainError("complex coefficients need a trigonometric field")
    c = {1: 0.5j * V.a0}
    for k, (ak, bk) in enumerate(zip(V.a, V.b), start=1):
        c[k + 1] = 0.5 * (bk + 1j * ak)
        c[1 - k] = -np.conj(c[k + 1])
    return c


def from_complex_coefficients(c: dict[int, complex], tol: float = 1e-12) -> VectorField:
    """Angle-chart field of ``W = Σ c_k z^k``; requires ``c_{2-k} = -conj(c_k)``."""
    for k, v in c.items():
        if abs(c.get(2 - k, 0.0) + np.conj(v)) > tol * max(1.0, abs(v)):
            raise InvariantViolation(f"coefficients violate the reality relation at k={k}")
    n = max([k - 1 for k in c] + [0])
    a = [2 * complex(c.get(k + 1, 0)).imag for k in range(1, n + 1)]
    b = [2 * complex(c.get(k + 1, 0)).real for k in range(1, n + 1)]
    return trig_field(2 * complex(c.get(1, 0)).imag, a, b)


# ---------------------------------------------------------------------------
# charts


def stereographic(z):
    """``U(z) = (z + i)/(iz + 1)``; maps 1, i, -1, -i to 1, ∞, -1, 0."""
    z = np.asarray(z, dtype=complex)
    den = 1j * z + 1
    with np.errstate(divide="ignore", invalid="ignore"):
        u = np.where(den == 0, np.inf, (z + 1j) / np.where(den == 0, 1, den))
    return u if u.ndim else complex(u)


def inverse_stereographic(u):
    u = np.asarray(u, dtype=complex)
    return 1j * (u - 1j) / (u + 1j)


def _dz_du(u):
    return -2.0 / (np.asarray(u) + 1j) ** 2


def transport(V: VectorField, to_chart: str) -> VectorField:
    """Express ``V`` in another chart (closed-form result)."""
    if to_chart not in CHARTS:
        raise DomainError(f"unknown chart {to_chart!r}")
    src = V.chart
    if src == to_chart:
        return V
    if src == "angle" and to_chart == "complex":
        f = lambda z: 1j * z * V(np.angle(z))  # noqa: E731
    elif src == "complex" and to_chart == "angle":
        f = lambda x: (V(np.exp(1j * x)) / (1j * np.exp(1j * x))).real  # noqa: E731
    elif src == "complex" and to_chart == "line":
        def f(u):
            u = np.asarray(u, dtype=float)
            return (V(inverse_stereographic(u)) / _dz_du(u)).real
    elif src == "line" and to_chart == "complex":
        def f(z):
            z = np.asarray(z, dtype=complex)
            if np.any(np.abs(z - 1j) < 1e-14):
                raise DomainError("z = i is sent to u = ∞ by the line chart")
            u = stereographic(z).real
            return V(u) * _dz_du(u)
    else:
        return transport(transport(V, "complex"), to_chart)
    return closed_field(f, chart=to_chart, name=f"{V.name}@{to_chart}")


@dataclass(frozen=True)
class QuadraticPolyField:
    """Möbius field ``W(z) = αz² + βz + γ`` on the circle, tangent when ``β ∈ iℝ`` and ``γ = -conj(α)``."""

    alpha: complex
    beta: complex
    gamma: complex

    def __post_init__(self):
        if abs(complex(self.beta).real) > 1e-12 or abs(self.gamma + np.conj(self.alpha)) > 1e-12:
            raise InvariantViolation("Möbius field is not tangent to the circle")

    @classmethod
    def from_real(cls, a0: float, a1: float, b1: float) -> "QuadraticPolyField":
        """The field ``a0/2 + a1 cos x + b1 sin x``."""
        alpha = 0.5 * (b1 + 1j * a1)
        return cls(alpha=alpha, beta=0.5j * a0, gamma=-np.conj(alpha))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return self.alpha * z**2 + self.beta * z + self.gamma

    def angle_field(self) -> VectorField:
        return from_complex_coefficients({0: self.gamma, 1: self.beta, 2: self.alpha})

    def line_coefficients(self) -> np.ndarray:
        """``(p0, p1, p2)`` with ``V̂(u) = p0 + p1 u + p2 u²``."""
        u = np.array([-1.0, 0.0, 1.0])
        vals = (self(inverse_stereographic(u)) / _dz_du(u)).real
        return np.polyfit(u, vals, 2)[::-1]


@dataclass(frozen=True)
class Quadruple:
    """Four ordered points: increasing on the line (``a`` may be ``-inf``) or counter-clockwise on the circle."""

    a: complex
    b: complex
    c: complex
    d: complex
    on_circle: bool = False

    def __post_init__(self):
        pts = self.points
        if self.on_circle:
            if any(abs(abs(p) - 1) > 1e-12 for p in pts):
                raise DomainError("circle quadruple points must have modulus 1")
            ang = np.mod(np.angle(np.array(pts)) - np.angle(pts[0]), 2 * np.pi)
            if not np.all(np.diff(ang) > 0):
                raise DomainError("circle quadruple must be in counter-clockwise order")
        else:
            xs = [complex(p).real for p in pts]
            if any(complex(p).imag != 0 for p in pts[1:]) or not all(np.diff(xs) > 0):
                raise DomainError("line quadruple must be real and strictly increasing")

    @property
    def points(self):
        return (self.a, self.b, self.c, self.d)


def _points(Q):
    return Q.points if isinstance(Q, Quadruple) else tuple(Q)


def cross_ratio(Q) -> complex:
    """``(d-c)(b-a)/((c-b)(a-d))``; ``a = -inf`` is accepted as a limit."""
    a, b, c, d = _points(Q)
    finite = [p for p in (a, b, c, d) if np.isfinite(p)]
    if len(set(finite)) < len(finite):
        raise DomainError("coincident points in quadruple")
    if not np.isfinite(a):
        if not all(np.isfinite(p) for p in (b, c, d)):
            raise DomainError("only a may be infinite")
        val = -(d - c) / (c - b)
    else:
        val = (d - c) * (b - a) / ((c - b) * (a - d))
    val = complex(val)
    return val.real if val.imag == 0 else val


def alternating_sum(W: Callable, Q) -> float:
    """``W[a,b,c,d]``; terms involving ``a = -inf`` vanish for fields of growth ``o(|u|²)``."""
    a, b, c, d = _points(Q)
    finite = [p for p in (a, b, c, d) if np.isfinite(p)]
    if len(set(finite)) < len(finite):
        raise DomainError("coincident points in quadruple")
    Wb, Wc, Wd = W(b), W(c), W(d)
    val = (Wd - Wc) / (d - c) - (Wc - Wb) / (c - b)
    if np.isfinite(a):
        Wa = W(a)
        val = val + (Wb - Wa) / (b - a) - (Wa - Wd) / (a - d)
    return val


# ---------------------------------------------------------------------------
# Zygmund seminorms


def _delta2_over_t(V, x_grid, t_grid) -> np.ndarray:
    x = np.asarray(x_grid, dtype=float)[:, None]
    t = np.asarray(t_grid, dtype=float)[None, :]
    if x.size == 0 or t.size == 0:
        raise DomainError("grids must be nonempty")
    return np.abs(second_difference(V, x, t)) / t


def zygmund_seminorm(V: Callable, x_grid, t_grid) -> float:
    """Largest ``|V(x+t) - 2V(x) + V(x-t)|/t`` on the grid (a lower bound for the sup)."""
    return float(np.max(_delta2_over_t(V, x_grid, t_grid)))


def little_zygmund_profile(V: Callable, scales, x_grid) -> np.ndarray:
    """Per-scale sup of ``|Δ²V|/t``; tends to 0 for little-Zygmund fields."""
    scales = np.asarray(scales, dtype=float)
    if np.any(np.diff(scales) >= 0):
        raise DomainError("scales must be strictly decreasing")
    return np.max(_delta2_over_t(V, x_grid, scales), axis=0)


def crossratio_seminorm(V: VectorField, x_grid, t_grid, kappa: float = 1.0) -> float:
    """``κ`` times the sup over normalized quadruples ``(-∞, x-t, x, x+t)``.

    On this family the cross ratio is ``-1`` and the density weight is the
    single constant ``κ``; the sup over general quadruples is not evaluated.
    """
    if kappa <= 0:
        raise DomainError("kappa must be positive")
    return kappa * zygmund_seminorm(V, x_grid, t_grid)


def _leading_coefficient(V: Callable, radius: float) -> float:
    R = radius
    return float((np.asarray(V(R)) + np.asarray(V(-R)) - 2 * np.asarray(V(0.0))) / (2 * R * R))


def project_out_quadratics(V: VectorField, points=(0.0, 1.0), leading: float | None = None,
                           radius: float = 1e6) -> VectorField:
    """Representative of ``V`` modulo quadratic polynomials.

    Line chart: subtract the quadratic ``q`` with ``q = V`` at ``points`` and
    the same ``u²`` coefficient as ``V`` at infinity (estimated from the even
    part at ``±radius`` unless ``leading`` is given).  Angle chart: drop the
    Möbius terms ``a0, a1, b1`` of a trigonometric field.
    """
    if V.chart == "angle":
        if V.kind == "closed":
            raise DomainError("angle-chart projection needs a trigonometric field")
        a, b = V.a.copy(), V.b.copy()
        if a.size:
            a[0] = b[0] = 0.0
        return trig_field(0.0, a, b, name=V.name)
    if V.chart != "line":
        raise DomainError("project in the angle or line chart")
    p, q = (float(t) for t in points)
    if p == q:
        raise DomainError("normalization points must differ")
    c2 = _leading_coefficient(V, radius) if leading is None else float(leading)
    Vp, Vq = float(V(p)), float(V(q))
    # q(u) = c2 u² + c1 u + c0 through (p, Vp), (q, Vq)
    c1 = (Vq - Vp) / (q - p) - c2 * (p + q)
    c0 = Vp - c2 * p * p - c1 * p
    f, d, P = V.func, V.deriv, V.antideriv

    def func(u):
        u = np.asarray(u, dtype=float)
        return f(u) - (c2 * u * u + c1 * u + c0)

    return closed_field(
        func,
        chart="line",
        deriv=None if d is None else (lambda u: d(u) - (2 * c2 * u + c1)),
        antideriv=None if P is None else (lambda u: P(u) - (c2 * u**3 / 3 + c1 * u**2 / 2 + c0 * u)),
        breakpoints=V.breakpoints,
        name=f"proj({V.name})",
    )
