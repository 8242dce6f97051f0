"""Quasisymmetric homeomorphisms of the line and circle.

Circle maps are stored as lifts ``h`` with ``h(x + 1) = h(x) + 1``; the
corresponding circle map is ``exp(2πi x) -> exp(2πi h(x))`` and circle
formulas take angles ``θ = 2πx``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad_vec
from scipy.interpolate import PchipInterpolator

from .errors import DomainError, InvariantViolation

__all__ = [
    "LineMap",
    "RatioDistortionProfile",
    "identity",
    "affine",
    "rotation",
    "power_map",
    "cubic_map",
    "kink_map",
    "circle_kink_map",
    "sine_lift",
    "power_law_dynamics",
    "from_table",
    "qs_ratio",
    "circle_ratio",
    "qs_constant",
    "in_neighborhood",
    "ratio_distortion_profile",
    "holder_exponent_bound",
    "linear_conjugacy",
    "empirical_holder",
    "compose",
    "affine_compose",
    "invert",
    "read_map",
    "write_map",
]

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class LineMap:
    """Increasing homeomorphism of the line, optionally a circle lift.

    ``func`` must be vectorized.  ``deriv`` and ``antideriv`` are optional
    closed forms; when missing they are replaced by numerical versions.
    ``breakpoints`` list abscissae where ``func`` fails to be smooth (taken
    modulo ``period``, which defaults to 1 for circle lifts).
    """

    func: Callable[[np.ndarray], np.ndarray]
    periodic: bool = False
    deriv: Callable | None = None
    antideriv: Callable | None = None
    inverse_func: Callable | None = None
    breakpoints: tuple = ()
    kind: str = "closed"
    table: tuple | None = None
    name: str = ""
    M: float | None = None
    period: float | None = None

    def __post_init__(self):
        if self.kind not in ("closed", "sampled"):
            raise DomainError(f"unknown representation {self.kind!r}")
        if self.M is not None and self.M < 1:
            raise InvariantViolation("cached quasisymmetry constant must be >= 1")
        xs = np.linspace(-2.0, 2.0, 257)
        hs = np.asarray(self.func(xs), dtype=float)
        if np.any(np.diff(hs) <= 0):
            raise InvariantViolation(f"map {self.name or '<anon>'} is not strictly increasing")
        if self.periodic:
            shift = np.asarray(self.func(xs + 1.0)) - hs - 1.0
            if np.max(np.abs(shift)) > 1e-9:
                raise InvariantViolation("periodic lift violates h(x+1) = h(x) + 1")

    def __call__(self, x):
        return self.func(np.asarray(x, dtype=float))

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        if self.deriv is not None:
            return self.deriv(x)
        s = 1e-6 * np.maximum(1.0, np.abs(x))
        return (self.func(x + s) - self.func(x - s)) / (2 * s)

    def integral(self, a, b):
        """``∫_a^b h(t) dt`` elementwise."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if self.antideriv is not None:
            return self.antideriv(b) - self.antideriv(a)
        a, b = np.broadcast_arrays(a, b)
        shape = a.shape
        af, bf = a.ravel(), b.ravel()
        res, _ = quad_vec(lambda s: self.func(af + (bf - af) * s), 0.0, 1.0, epsabs=1e-14, epsrel=1e-12)
        return ((bf - af) * res).reshape(shape)

    def with_name(self, name: str) -> "LineMap":
        return replace(self, name=name)


@dataclass(frozen=True)
class RatioDistortionProfile:
    scales: np.ndarray
    distortion: np.ndarray

    def __post_init__(self):
        if np.any(np.diff(self.scales) >= 0):
            raise DomainError("scales must be strictly decreasing")
        if np.any(self.distortion < -1e-12):
            raise InvariantViolation("ratio distortion must be non-negative")

    def is_vanishing(self, threshold: float = 0.5) -> bool:
        """Heuristic: the profile at the finest scale fell below ``threshold`` of the coarsest."""
        d = self.distortion
        if d[0] == 0:
            return bool(np.all(d == 0))
        return bool(d[-1] <= threshold * d[0])


# ---------------------------------------------------------------------------
# constructors


def identity() -> LineMap:
    return LineMap(
        func=lambda x: np.asarray(x, dtype=float) * 1.0,
        periodic=True,
        deriv=lambda x: np.ones_like(np.asarray(x, dtype=float)),
        antideriv=lambda x: 0.5 * np.asarray(x, dtype=float) ** 2,
        inverse_func=lambda y: np.asarray(y, dtype=float) * 1.0,
        name="identity",
        M=1.0,
    )


def affine(a: float, b: float = 0.0) -> LineMap:
    if a <= 0:
        raise DomainError("affine map must be increasing (a > 0)")
    return LineMap(
        func=lambda x: a * np.asarray(x, dtype=float) + b,
        periodic=(a == 1.0),
        deriv=lambda x: np.full_like(np.asarray(x, dtype=float), a),
        antideriv=lambda x: 0.5 * a * np.asarray(x, dtype=float) ** 2 + b * np.asarray(x, dtype=float),
        inverse_func=lambda y: (np.asarray(y, dtype=float) - b) / a,
        name=f"affine({a},{b})",
        M=1.0,
    )


def rotation(angle: float) -> LineMap:
    """Rigid rotation of the circle by ``angle`` radians."""
    m = affine(1.0, angle / TWO_PI)
    return replace(m, periodic=True, name=f"rotation({angle})")


def power_map(alpha: float) -> LineMap:
    """``sign(x)|x|**alpha``."""
    if alpha <= 0:
        raise DomainError("exponent must be positive")

    def f(x):
        x = np.asarray(x, dtype=float)
        return np.sign(x) * np.abs(x) ** alpha

    def df(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            return alpha * np.abs(x) ** (alpha - 1.0)

    def F(x):
        x = np.asarray(x, dtype=float)
        return np.abs(x) ** (alpha + 1.0) / (alpha + 1.0)

    return LineMap(
        func=f,
        deriv=df,
        antideriv=F,
        inverse_func=lambda y: np.sign(y) * np.abs(np.asarray(y, dtype=float)) ** (1.0 / alpha),
        breakpoints=(0.0,),
        name=f"power({alpha})",
    )


def cubic_map() -> LineMap:
    return power_map(3.0).with_name("cubic")


def kink_map(K: float) -> LineMap:
    """``x`` for ``x >= 0`` and ``K x`` for ``x < 0``; fixes 0, 1 and ∞."""
    if K <= 0:
        raise DomainError("slope must be positive")

    def f(x):
        x = np.asarray(x, dtype=float)
        return np.where(x >= 0, x, K * x)

    def F(x):
        x = np.asarray(x, dtype=float)
        return np.where(x >= 0, 0.5 * x * x, 0.5 * K * x * x)

    return LineMap(
        func=f,
        deriv=lambda x: np.where(np.asarray(x) >= 0, 1.0, K),
        antideriv=F,
        inverse_func=lambda y: np.where(np.asarray(y) >= 0, y, np.asarray(y, dtype=float) / K),
        breakpoints=(0.0,),
        name=f"kink({K})",
        M=float(max(K, 1.0 / K)),
    )


def circle_kink_map(s1: float) -> LineMap:
    """Piecewise-linear lift: slope ``s1`` on [0, 1/2), ``2 - s1`` on [1/2, 1)."""
    if not 0 < s1 < 2:
        raise DomainError("slope must lie in (0, 2)")
    s2 = 2.0 - s1

    def f(x):
        x = np.asarray(x, dtype=float)
        n = np.floor(x)
        r = x - n
        return n + np.where(r < 0.5, s1 * r, 0.5 * s1 + s2 * (r - 0.5))

    def df(x):
        r = np.asarray(x, dtype=float) % 1.0
        return np.where(r < 0.5, s1, s2)

    def F(x):
        # ∫_0^x h, using ∫_n^{n+1} h = n + c1 with c1 = ∫_0^1 h(r) dr
        x = np.asarray(x, dtype=float)
        n = np.floor(x)
        r = x - n
        c1 = 0.125 * s1 + 0.5 * (0.5 * s1) + 0.125 * s2
        base = n * (n - 1) / 2.0 + n * c1
        part = np.where(
            r < 0.5,
            0.5 * s1 * r * r,
            0.125 * s1 + 0.5 * s1 * (r - 0.5) + 0.5 * s2 * (r - 0.5) ** 2,
        )
        return base + n * r + part

    return LineMap(func=f, periodic=True, deriv=df, antideriv=F, breakpoints=(0.0, 0.5),
                   name=f"circle_kink({s1})")


def sine_lift(a: float) -> LineMap:
    """``x - a sin(2πx)/(2π)``: a circle diffeomorphism for |a| < 1, cubic-type at a = 1."""
    if abs(a) > 1:
        raise DomainError("|a| <= 1 required for monotonicity")

    def f(x):
        x = np.asarray(x, dtype=float)
        return x - a * np.sin(TWO_PI * x) / TWO_PI

    def df(x):
        return 1.0 - a * np.cos(TWO_PI * np.asarray(x, dtype=float))

    def F(x):
        x = np.asarray(x, dtype=float)
        return 0.5 * x * x + a * (np.cos(TWO_PI * x) - 1.0) / TWO_PI**2

    return LineMap(func=f, periodic=True, deriv=df, antideriv=F, name=f"sine_lift({a})")


def power_law_dynamics(alpha: float, c: float) -> Callable:
    """Test-corpus dynamics ``F(x) = |x|**alpha sign(x) + c`` (alpha > 1)."""
    if alpha <= 1:
        raise DomainError("power-law exponent must exceed 1")
    return lambda x: np.abs(np.asarray(x, dtype=float)) ** alpha * np.sign(x) + c


def from_table(xs: Sequence[float], hs: Sequence[float], periodic: bool = False, name: str = "") -> LineMap:
    """Sampled map through monotone cubic (PCHIP) interpolation.

    For ``periodic`` tables the samples cover one period ``[x0, x0 + 1]``,
    and ``hs[-1] - hs[0]`` must equal 1.
    """
    xs = np.asarray(xs, dtype=float)
    hs = np.asarray(hs, dtype=float)
    if xs.ndim != 1 or xs.shape != hs.shape or len(xs) < 2:
        raise DomainError("table needs matching 1-D columns with at least two rows")
    if np.any(np.diff(xs) <= 0) or np.any(np.diff(hs) <= 0):
        raise InvariantViolation("table must be strictly increasing in both columns")
    if periodic and (abs(xs[-1] - xs[0] - 1.0) > 1e-12 or abs(hs[-1] - hs[0] - 1.0) > 1e-12):
        raise InvariantViolation("periodic table must span exactly one period in x and h")
    interp = PchipInterpolator(xs, hs, extrapolate=not periodic)
    dinterp = interp.derivative()
    ainterp = interp.antiderivative()
    x0 = xs[0]

    if periodic:
        def f(x):
            x = np.asarray(x, dtype=float)
            n = np.floor(x - x0)
            return interp(x - n) + n

        def df(x):
            x = np.asarray(x, dtype=float)
            return dinterp(x - np.floor(x - x0))

        per = float(ainterp(xs[-1]))

        def F(x):
            x = np.asarray(x, dtype=float)
            n = np.floor(x - x0)
            return n * per + n * (n - 1) / 2.0 + n * (x - n - x0) + ainterp(x - n)

        inv = PchipInterpolator(hs, xs)
        h0 = hs[0]

        def finv(y):
            y = np.asarray(y, dtype=float)
            n = np.floor(y - h0)
            return inv(y - n) + n
    else:
        f, df, F = interp, dinterp, ainterp
        inv = PchipInterpolator(hs, xs, extrapolate=True)
        finv = inv

    return LineMap(func=f, periodic=periodic, deriv=df, antideriv=F, inverse_func=finv,
                   kind="sampled", table=(xs, hs), name=name)


# ---------------------------------------------------------------------------
# measurements


def qs_ratio(h: LineMap, x, t):
    """``(h(x+t) - h(x)) / (h(x) - h(x-t))``."""
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise DomainError("t must be positive")
    num = h(x + t) - h(x)
    den = h(x) - h(x - t)
    if np.any(den <= 0) or np.any(num <= 0):
        raise InvariantViolation("non-positive increment: map is not increasing")
    r = num / den
    return r if np.ndim(r) else float(r)


def circle_ratio(h: LineMap, theta, t):
    """Chordal ratio for a circle lift, angles in radians, ``0 < t < π/2``."""
    if not h.periodic:
        raise DomainError("circle ratio needs a periodic lift")
    theta = np.asarray(theta, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0) or np.any(t >= np.pi / 2):
        raise DomainError("circle quasisymmetry uses 0 < t < π/2")
    x = theta / TWO_PI
    s = t / TWO_PI
    hx = h(x)
    num = np.abs(np.sin(np.pi * (h(x + s) - hx)))
    den = np.abs(np.sin(np.pi * (hx - h(x - s))))
    if np.any(den == 0):
        raise InvariantViolation("zero chord: map is not injective")
    r = num / den
    return r if np.ndim(r) else float(r)


def _ratio(h: LineMap, x, t, circle: bool):
    return circle_ratio(h, x, t) if circle else qs_ratio(h, x, t)


def qs_constant(h: LineMap, x_grid, t_grid, circle: bool | None = None) -> float:
    """Largest ``max(r, 1/r)`` over the grid; a lower bound for the true constant.

    For circle lifts (``circle=True``, the default when ``h.periodic``) the
    grids are angles and the chordal ratio is used.
    """
    circle = h.periodic if circle is None else circle
    x = np.asarray(x_grid, dtype=float)[:, None]
    t = np.asarray(t_grid, dtype=float)[None, :]
    if x.size == 0 or t.size == 0:
        raise DomainError("grids must be nonempty")
    r = _ratio(h, x, t, circle)
    return float(np.max(np.maximum(r, 1.0 / r)))


def _default_circle_grids(n_x: int = 512, n_t: int = 40):
    theta = TWO_PI * np.arange(n_x) / n_x
    t = (np.pi / 2) * np.geomspace(1e-4, 0.999, n_t)
    return theta, t


def in_neighborhood(h: LineMap, eps: float, n_x: int = 512, n_t: int = 40) -> bool:
    """Grid verdict on membership of the basic neighbourhood ``V(eps)`` of the identity."""
    if eps <= 0:
        raise DomainError("eps must be positive")
    if not h.periodic:
        raise DomainError("neighbourhoods are defined for circle lifts")
    x = np.arange(n_x) / n_x
    disp = np.max(2 * np.abs(np.sin(np.pi * (h(x) - x))))
    hinv = invert(h)
    disp_inv = np.max(2 * np.abs(np.sin(np.pi * (hinv(x) - x))))
    if max(disp, disp_inv) >= eps:
        return False
    theta, t = _default_circle_grids(n_x, n_t)
    return qs_constant(h, theta, t, circle=True) <= 1.0 + eps


def ratio_distortion_profile(h: LineMap, scales, x_grid, circle: bool | None = None) -> RatioDistortionProfile:
    circle = h.periodic if circle is None else circle
    scales = np.asarray(scales, dtype=float)
    if np.any(scales <= 0):
        raise DomainError("scales must be positive")
    x = np.asarray(x_grid, dtype=float)[:, None]
    r = _ratio(h, x, scales[None, :], circle)
    eps = np.max(np.maximum(r, 1.0 / r), axis=0) - 1.0
    return RatioDistortionProfile(scales=scales, distortion=np.maximum(eps, 0.0))


def holder_exponent_bound(M: float) -> float:
    """Hölder exponent ``log((M+1)/M)/log 2`` guaranteed by quasisymmetry constant ``M``."""
    if M < 1:
        raise DomainError("quasisymmetry constant must be >= 1")
    return float(np.log((M + 1.0) / M) / np.log(2.0))


def linear_conjugacy(lam0: float, lam1: float) -> LineMap:
    """Conjugacy ``h`` with ``h(lam0 x) = lam1 h(x)``, ``h(0)=0``, ``h(1)=1``."""
    if lam0 <= 1 or lam1 <= 1:
        raise DomainError("multipliers must exceed 1")
    alpha = np.log(lam1) / np.log(lam0)
    if alpha == 1.0:
        return identity().with_name(f"conjugacy({lam0},{lam1})")
    return power_map(alpha).with_name(f"conjugacy({lam0},{lam1})")


def empirical_holder(h: LineMap, x0: float, scales) -> float:
    """Least-squares slope of ``log|h(x0+t) - h(x0)|`` against ``log t``."""
    scales = np.asarray(scales, dtype=float)
    if scales.size < 3 or np.any(scales <= 0):
        raise DomainError("need at least three positive scales")
    dh = np.abs(h(x0 + scales) - h(x0))
    if np.any(dh <= 0):
        raise InvariantViolation("map is constant on a sampled interval")
    slope, _ = np.polyfit(np.log(scales), np.log(dh), 1)
    return float(slope)


def _bisect_inverse(h: LineMap, y):
    y = np.asarray(y, dtype=float)
    lo = y - 1.0
    hi = y + 1.0
    for _ in range(200):
        bad = h(lo) > y
        if not bad.any():
            break
        lo = np.where(bad, y - 2 * (y - lo) - 1.0, lo)
    for _ in range(200):
        bad = h(hi) < y
        if not bad.any():
            break
        hi = np.where(bad, y + 2 * (hi - y) + 1.0, hi)
    for _ in range(120):
        mid = 0.5 * (lo + hi)
        up = h(mid) < y
        lo = np.where(up, mid, lo)
        hi = np.where(up, hi, mid)
    return 0.5 * (lo + hi)


def invert(h: LineMap) -> LineMap:
    """Inverse map; sampled maps are inverted by swapping table columns."""
    if h.kind == "sampled":
        xs, hs = h.table
        return from_table(hs, xs, periodic=h.periodic, name=f"inv({h.name})")
    finv = h.inverse_func
    if finv is None and h.periodic:
        # reduce to one period so the lift identity holds exactly
        def finv(y):
            y = np.asarray(y, dtype=float)
            n = np.floor(y)
            return _bisect_inverse(h, y - n) + n
    elif finv is None:
        finv = lambda y: _bisect_inverse(h, y)  # noqa: E731

    def dinv(y):
        return 1.0 / h.derivative(finv(y))

    return LineMap(func=finv, periodic=h.periodic, deriv=dinv, inverse_func=h.func,
                   breakpoints=tuple(float(b) for b in np.atleast_1d(h(np.array(h.breakpoints)))) if h.breakpoints else (),
                   name=f"inv({h.name})")


def affine_compose(a1: float, b1: float, h: LineMap, a2: float, b2: float) -> LineMap:
    """``x -> a1 h(a2 x + b2) + b1`` with closed-form derivative and antiderivative."""
    if a1 <= 0 or a2 <= 0:
        raise DomainError("affine factors must be increasing")
    inv = None
    if h.inverse_func is not None:
        inv = lambda y: (h.inverse_func((np.asarray(y) - b1) / a1) - b2) / a2  # noqa: E731
    F = h.antideriv
    base_period = h.period or (1.0 if h.periodic else None)
    return LineMap(
        func=lambda x: a1 * h(a2 * x + b2) + b1,
        periodic=h.periodic and a1 == 1.0 and a2 == 1.0,
        deriv=lambda x: a1 * a2 * h.derivative(a2 * x + b2),
        antideriv=None if F is None else (lambda x: a1 / a2 * F(a2 * np.asarray(x) + b2) + b1 * np.asarray(x)),
        inverse_func=inv,
        breakpoints=tuple((p - b2) / a2 for p in h.breakpoints),
        period=None if base_period is None else base_period / a2,
        name=f"A({h.name})B",
    )


def compose(g: LineMap, h: LineMap, n_samples: int = 2049) -> LineMap:
    """``g ∘ h``; sampled when either factor is sampled."""
    periodic = g.periodic and h.periodic
    if g.kind == "sampled" or h.kind == "sampled":
        if periodic:
            xs = np.linspace(0.0, 1.0, n_samples)
        elif h.kind == "sampled":
            xs = h.table[0]
        else:
            ginv = invert(g)
            xs = np.asarray(invert(h)(ginv(np.asarray(g.table[0]))))
        vals = g(h(xs))
        if np.any(np.diff(vals) <= 0):
            raise InvariantViolation("composition lost monotonicity under interpolation")
        if periodic:
            vals = vals - np.floor(vals[0])
            vals[-1] = vals[0] + 1.0
        return from_table(xs, vals, periodic=periodic, name=f"{g.name}∘{h.name}")

    def f(x):
        return g(h(x))

    def df(x):
        return g.derivative(h(x)) * h.derivative(x)

    inv = None
    if g.inverse_func is not None and h.inverse_func is not None:
        inv = lambda y: h.inverse_func(g.inverse_func(y))  # noqa: E731
    bps = set(h.breakpoints)
    if g.breakpoints:
        hinv = invert(h)
        bps.update(float(b) for b in np.atleast_1d(hinv(np.array(g.breakpoints))))
    return LineMap(func=f, periodic=periodic, deriv=df, inverse_func=inv,
                   breakpoints=tuple(sorted(bps)), name=f"{g.name}∘{h.name}")


# ---------------------------------------------------------------------------
# exchange format

_HEADER = "# teichkit-map lift={lift}"


def write_map(path, h: LineMap, n: int = 1025, x_range: tuple = (0.0, 1.0)) -> None:
    """Write ``(x, h(x))`` rows; circle lifts are written over one period."""
    if h.kind == "sampled":
        xs, hs = h.table
    else:
        xs = np.linspace(*((0.0, 1.0) if h.periodic else x_range), n)
        hs = h(xs)
    lines = [_HEADER.format(lift="periodic" if h.periodic else "none"), "x,h"]
    lines += [f"{x!r},{y!r}" for x, y in zip(np.asarray(xs, float).tolist(), np.asarray(hs, float).tolist())]
    Path(path).write_text("\n".join(lines) + "\n")


def read_map(path, name: str | None = None) -> LineMap:
    text = Path(path).read_text().splitlines()
    if not text or not text[0].startswith("# teichkit-map"):
        raise DomainError(f"{path}: missing '# teichkit-map lift=...' header")
    head = dict(tok.split("=", 1) for tok in text[0][1:].split() if "=" in tok)
    lift = head.get("lift")
    if lift not in ("periodic", "none"):
        raise DomainError(f"{path}: unknown lift convention {lift!r}")
    rows = [ln for ln in text[1:] if ln.strip() and not ln.startswith("#")]
    if rows and rows[0].replace(" ", "") == "x,h":
        rows = rows[1:]
    data = np.array([[float(v) for v in ln.split(",")] for ln in rows])
    if data.ndim != 2 or data.shape[1] != 2:
        raise DomainError(f"{path}: expected two columns")
    return from_table(data[:, 0], data[:, 1], periodic=(lift == "periodic"), name=name or Path(path).stem)
