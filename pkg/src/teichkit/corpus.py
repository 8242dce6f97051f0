"""Named test maps and fields used by tests, scripts and the CLI."""

from __future__ import annotations

import numpy as np

from . import circlemap as cm
from .errors import ConfigError
from .vectorfield import VectorField, closed_field, trig_field

__all__ = ["MAPS", "FIELDS", "get_map", "get_field", "weierstrass", "rational_bump", "fixture_field"]


def weierstrass(n_terms: int = 12, phase: str = "cos") -> VectorField:
    """``Σ_{k=1}^{n} 2^{-k} cos(2^k x)``: Zygmund class but not little Zygmund."""
    deg = 2**n_terms
    a = np.zeros(deg)
    b = np.zeros(deg)
    for k in range(1, n_terms + 1):
        (a if phase == "cos" else b)[2**k - 1] = 2.0**-k
    return trig_field(0.0, a, b, name=f"weierstrass{n_terms}")


def fixture_field() -> VectorField:
    """``x(1-x)/(1+x²)`` on the line: vanishes at 0 and 1, bounded at infinity."""
    return closed_field(
        lambda x: x * (1 - x) / (1 + x * x),
        chart="line",
        deriv=lambda x: (1 - 2 * x - x * x) / (1 + x * x) ** 2,
        antideriv=lambda x: -x + 0.5 * np.log1p(x * x) + np.arctan(x),
        name="fixture",
    )


def rational_bump(c: float = 0.0, s: float = 1.0) -> VectorField:
    """``s / (1 + ((x - c)/s)²)``, a decaying smooth line field."""

    def f(x):
        return s / (1 + ((x - c) / s) ** 2)

    def df(x):
        u = (x - c) / s
        return -2 * u / (1 + u * u) ** 2

    def F(x):
        return s * s * np.arctan((x - c) / s)

    return closed_field(f, chart="line", deriv=df, antideriv=F, name=f"bump({c},{s})")


def gaussian(c: float = 0.0, s: float = 1.0) -> VectorField:
    from scipy.special import erf

    return closed_field(
        lambda x: np.exp(-(((x - c) / s) ** 2)),
        chart="line",
        deriv=lambda x: -2 * (x - c) / s**2 * np.exp(-(((x - c) / s) ** 2)),
        antideriv=lambda x: 0.5 * np.sqrt(np.pi) * s * erf((x - c) / s),
        name=f"gauss({c},{s})",
    )


def abs_sin() -> VectorField:
    return closed_field(lambda x: np.abs(np.sin(x)), breakpoints=(0.0, np.pi), name="abs_sin")


MAPS = {
    "identity": cm.identity,
    "cubic": cm.cubic_map,
    "sqrt": lambda: cm.power_map(0.5),
    "kink2": lambda: cm.kink_map(2.0),
    "kink3": lambda: cm.kink_map(3.0),
    "power1.5": lambda: cm.power_map(1.5),
    "circle_kink": lambda: cm.circle_kink_map(0.5),
    "sine_lift": lambda: cm.sine_lift(0.7),
    "sine_cubic": lambda: cm.sine_lift(1.0),
}

FIELDS = {
    "weierstrass": weierstrass,
    "fixture": fixture_field,
    "bump": rational_bump,
    "gaussian": gaussian,
    "abs_sin": abs_sin,
    "sin1": lambda: trig_field(0.0, [0.0], [1.0], name="sin"),
    "cos2": lambda: trig_field(0.0, [0.0, 1.0], [0.0, 0.0], name="cos2"),
}


def get_map(name: str) -> cm.LineMap:
    if name in MAPS:
        return MAPS[name]().with_name(name)
    if name.startswith("kink:"):
        return cm.kink_map(float(name.split(":", 1)[1]))
    if name.startswith("power:"):
        return cm.power_map(float(name.split(":", 1)[1]))
    raise ConfigError(f"unknown map {name!r}; known: {sorted(MAPS)} or kink:K, power:a")


def get_field(name: str) -> VectorField:
    if name in FIELDS:
        return FIELDS[name]()
    raise ConfigError(f"unknown field {name!r}; known: {sorted(FIELDS)}")
