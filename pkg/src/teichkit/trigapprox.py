"""Trigonometric approximation of Zygmund-class fields.

All kernels are combinations of unit-mass Fejér kernels

    σ_m(t) = (1/2πm) (sin(mt/2)/sin(t/2))²,

whose Fourier multipliers are ``(1 - |k|/m)_+``.  Convolutions with
trigonometric fields are therefore exact coefficient multiplications.

Kernel kinds:

* ``fejer``: ``σ_n``;
* ``jackson-vdp`` (default): the delayed mean ``2σ_{2n} - σ_n``, degree
  ``2n - 1``, multiplier 1 for ``|k| <= n``;
* ``jackson-paper``: ``σ_{2n-1} - 2σ_n``, kept for comparison; it has mass
  ``-1`` and does not approximate the identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DomainError
from .vectorfield import VectorField, closed_field, trig_field

__all__ = [
    "TrigKernel",
    "RateProfile",
    "fejer_kernel",
    "jackson_kernel",
    "approximate",
    "sup_norm",
    "bernstein_ratio",
    "rate_profile",
    "magnify",
    "fourier_coefficients",
]

KINDS = ("fejer", "jackson-paper", "jackson-vdp")


def fejer_kernel(n: int, t):
    """``σ_n(t)``, with the removable singularity at ``t ≡ 0`` filled by ``n/2π``."""
    if n < 1:
        raise DomainError("Fejér kernel needs n >= 1")
    t = np.asarray(t, dtype=float)
    s = np.sin(t / 2)
    near = np.abs(s) < 1e-8
    safe = np.where(near, 1.0, s)
    val = np.where(near, n * n, (np.sin(n * t / 2) / safe) ** 2) / (2 * np.pi * n)
    return val if val.ndim else float(val)


def _fejer_multiplier(m: int, k: np.ndarray) -> np.ndarray:
    return np.clip(1.0 - np.abs(k) / m, 0.0, None)


@dataclass(frozen=True)
class TrigKernel:
    n: int
    kind: str = "jackson-vdp"

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("kernel degree parameter must be >= 1")
        if self.kind not in KINDS:
            raise DomainError(f"unknown kernel kind {self.kind!r}")

    @property
    def parts(self) -> tuple[tuple[float, int], ...]:
        """The kernel as ``Σ c σ_m``, listed as ``(c, m)`` pairs."""
        n = self.n
        return {
            "fejer": ((1.0, n),),
            "jackson-paper": ((1.0, 2 * n - 1), (-2.0, n)),
            "jackson-vdp": ((2.0, 2 * n), (-1.0, n)),
        }[self.kind]

    @property
    def degree(self) -> int:
        return max(m for _, m in self.parts) - 1

    @property
    def mass(self) -> float:
        return float(sum(c for c, _ in self.parts))

    def __call__(self, t):
        return sum(c * fejer_kernel(m, t) for c, m in self.parts)

    def multipliers(self, k) -> np.ndarray:
        k = np.asarray(k)
        return sum(c * _fejer_multiplier(m, k) for c, m in self.parts)


def jackson_kernel(n: int, t, kind: str = "jackson-vdp"):
    if kind == "fejer":
        raise DomainError("use fejer_kernel for the Fejér kind")
    return TrigKernel(n, kind)(t)


def fourier_coefficients(V, degree: int, oversample: int = 8) -> VectorField:
    """Trigonometric field of degree ``degree`` from dense samples (FFT)."""
    if V.kind != "closed":
        return V
    if not V.periodic:
        raise DomainError("trigonometric approximation needs a 2π-periodic (angle-chart) field")
    N = max(oversample * 2 * max(degree, 1), 64)
    x = 2 * np.pi * np.arange(N) / N
    c = np.fft.rfft(np.asarray(V(x), dtype=float)) / N
    a = 2 * c[1 : degree + 1].real
    b = -2 * c[1 : degree + 1].imag
    return trig_field(2 * c[0].real, a, b)


def approximate(V: VectorField, n: int, kind: str = "jackson-vdp") -> VectorField:
    """Convolution of ``V`` with the kernel of parameter ``n``."""
    K = TrigKernel(n, kind)
    T = fourier_coefficients(V, K.degree)
    m = K.multipliers(np.arange(1, len(T.a) + 1))
    return trig_field(K.mass * T.a0, m * T.a, m * T.b, name=f"{kind}{n}({V.name})")


def _difference(V: VectorField, W: VectorField) -> VectorField:
    if V.kind == "closed":
        return closed_field(lambda x: np.asarray(V(x)) - np.asarray(W(x)), name="diff")
    return V - W


def sup_norm(V: VectorField, n_grid: int | None = None) -> float:
    """``max |V|`` on ``[0, 2π)``: dense grid (FFT for trigonometric fields), then local polishing."""
    if V.kind != "closed":
        D = max(len(V.a), 1)
        N = n_grid or max(16 * D, 1024)
        coef = np.zeros(N // 2 + 1, dtype=complex)
        coef[0] = V.a0 / 2
        coef[1 : D + 1] = 0.5 * (V.a - 1j * V.b)[: N // 2]
        vals = np.abs(np.fft.irfft(coef, n=N) * N)
    else:
        N = n_grid or 2**15
        vals = np.abs(V(2 * np.pi * np.arange(N) / N))
    x = 2 * np.pi * np.arange(N) / N
    return _polished_max(lambda s: float(V(s)), x, vals, 2 * np.pi / N)


def _polished_max(f, x: np.ndarray, vals: np.ndarray, h: float) -> float:
    """Refine the largest grid values of ``|f|`` by bounded scalar search."""
    best = float(np.max(vals))
    for i in np.argsort(vals)[-4:]:
        res = minimize_scalar(lambda s: -abs(f(s)), bounds=(x[i] - h, x[i] + h), method="bounded",
                              options={"xatol": 1e-13})
        best = max(best, -float(res.fun))
    return best


def bernstein_ratio(V: VectorField, samples_per_degree: int = 64) -> float:
    """``‖V'‖∞ / (n ‖V‖∞)`` with ``n`` the exact degree of ``V``."""
    if V.kind == "closed":
        raise DomainError("Bernstein ratio needs a trigonometric field")
    n = V.degree
    if n == 0:
        raise DomainError("Bernstein ratio is undefined for constants")
    N = 4 * n * samples_per_degree
    x = 2 * np.pi * np.arange(N) / N
    h = 2 * np.pi / N
    v, dv = np.abs(V(x)), np.abs(V.derivative(x))
    sup_v = _polished_max(lambda s: float(V(s)), x, v, h)
    sup_dv = _polished_max(lambda s: float(V.derivative(s)), x, dv, h)
    if sup_v == 0:
        raise DomainError("zero polynomial")
    return sup_dv / (n * sup_v)


@dataclass(frozen=True)
class RateProfile:
    n: np.ndarray
    error: np.ndarray

    @property
    def scaled(self) -> np.ndarray:
        return self.n * self.error

    @property
    def constant(self) -> float:
        """Measured ``C'`` = ``max_n n ‖V - V_n‖``."""
        return float(np.max(self.scaled))

    def to_csv(self, path) -> None:
        lines = ["n,error,n_error"] + [
            f"{int(n)},{float(e)!r},{float(n * e)!r}" for n, e in zip(self.n, self.error)
        ]
        Path(path).write_text("\n".join(lines) + "\n")


def rate_profile(V: VectorField, n_list, kind: str = "jackson-vdp") -> RateProfile:
    """``n ‖V - V_n‖∞`` for approximants ``V_n`` of degree at most ``n``.

    The approximant for degree ``n`` is the kernel of parameter
    ``(n + 1) // 2`` (degree ``<= n``).
    """
    ns = np.asarray(list(n_list), dtype=int)
    if np.any(np.diff(ns) <= 0) or np.any(ns < 1):
        raise DomainError("n_list must be increasing positive integers")
    errs = np.array([sup_norm(_difference(V, approximate(V, max((n + 1) // 2, 1), kind))) for n in ns])
    return RateProfile(n=ns, error=errs)


def magnify(V, k: int, interval: tuple[float, float]) -> VectorField:
    """``x -> V(2^k x) / 2^k`` on an interval of length ``2π / 2^k``."""
    a, b = map(float, interval)
    if k < 0 or abs((b - a) - 2 * np.pi / 2**k) > 1e-12:
        raise DomainError("interval length must equal 2π/2^k")
    s = 2.0**k

    def f(x):
        x = np.asarray(x, dtype=float)
        if np.any((x < a - 1e-12) | (x > b + 1e-12)):
            raise DomainError("point outside the magnified interval")
        return np.asarray(V(s * x)) / s

    return closed_field(f, chart="line", name=f"M[{k}]({getattr(V, 'name', '')})")
