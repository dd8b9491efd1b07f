"""Target functions with optional derivatives, growth tags and a builtin registry."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace
from typing import Callable, Optional, Tuple

import numpy as np

from .errors import ConfigurationError

Fn = Callable[[np.ndarray], np.ndarray]

GROWTH_KINDS = ("bounded", "polynomial", "exponential")


@dataclass(frozen=True)
class TargetFunction:
    """A function on ``[0, inf)`` evaluated elementwise on numpy arrays.

    ``growth`` is one of ``bounded``, ``polynomial`` (with ``degree``) or
    ``exponential`` (with ``rate`` a, meaning ``|g(t)| <= C e**(a t)``).
    ``poly`` holds ascending monomial coefficients when ``g`` is a polynomial
    and ``exp_coeffs`` pairs ``(c, a)`` when ``g = sum c e**(a t)``; both enable
    closed-form evaluation of the operator.
    """

    func: Fn
    d1: Optional[Fn] = None
    d2: Optional[Fn] = None
    growth: str = "bounded"
    degree: float = 0.0
    rate: float = 0.0
    name: str = "g"
    poly: Optional[Tuple[float, ...]] = None
    exp_coeffs: Optional[Tuple[Tuple[complex, complex], ...]] = None

    def __post_init__(self):
        if self.growth not in GROWTH_KINDS:
            raise ValueError(f"unknown growth tag {self.growth!r}")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.asarray(self.func(t), dtype=float)
        if out.shape != t.shape:
            out = np.broadcast_to(out, t.shape).astype(float)
        return out

    def derivative(self, t, order: int = 1):
        fn = {1: self.d1, 2: self.d2}.get(order)
        if fn is None:
            raise ValueError(f"{self.name} has no derivative of order {order}")
        t = np.asarray(t, dtype=float)
        return np.broadcast_to(np.asarray(fn(t), dtype=float), t.shape)

    # arithmetic: enough for linearity checks and products in the Gruss gap

    def __add__(self, other: "TargetFunction") -> "TargetFunction":
        return _linear(self, other, 1.0, 1.0)

    def scaled(self, c: float) -> "TargetFunction":
        f = self
        return replace(
            f,
            func=lambda t: c * f(t),
            d1=(lambda t: c * f.derivative(t, 1)) if f.d1 else None,
            d2=(lambda t: c * f.derivative(t, 2)) if f.d2 else None,
            name=f"{c:g}*{f.name}",
            poly=tuple(c * p for p in f.poly) if f.poly is not None else None,
            exp_coeffs=tuple((c * k, a) for k, a in f.exp_coeffs) if f.exp_coeffs else None,
        )

    def __mul__(self, other: "TargetFunction") -> "TargetFunction":
        f, g = self, other
        has1 = f.d1 is not None and g.d1 is not None
        has2 = has1 and f.d2 is not None and g.d2 is not None
        poly = None
        if f.poly is not None and g.poly is not None:
            poly = tuple(np.convolve(f.poly, g.poly))
        exps = None
        if f.exp_coeffs and g.exp_coeffs:
            exps = tuple((c1 * c2, a1 + a2) for c1, a1 in f.exp_coeffs for c2, a2 in g.exp_coeffs)
        growth, degree, rate = _product_growth(f, g)
        return TargetFunction(
            func=lambda t: f(t) * g(t),
            d1=(lambda t: f.derivative(t, 1) * g(t) + f(t) * g.derivative(t, 1)) if has1 else None,
            d2=(lambda t: f.derivative(t, 2) * g(t) + 2 * f.derivative(t, 1) * g.derivative(t, 1)
                + f(t) * g.derivative(t, 2)) if has2 else None,
            growth=growth, degree=degree, rate=rate,
            name=f"({f.name})*({g.name})", poly=poly, exp_coeffs=exps,
        )


def _growth_rank(f):
    return GROWTH_KINDS.index(f.growth)


def _product_growth(f, g):
    if "exponential" in (f.growth, g.growth):
        return "exponential", 0.0, f.rate + g.rate
    if "polynomial" in (f.growth, g.growth):
        return "polynomial", f.degree + g.degree, 0.0
    return "bounded", 0.0, 0.0


def _linear(f, g, a, b):
    if _growth_rank(f) >= _growth_rank(g):
        growth = f.growth
    else:
        growth = g.growth
    poly = None
    if f.poly is not None and g.poly is not None:
        n = max(len(f.poly), len(g.poly))
        fp = np.pad(f.poly, (0, n - len(f.poly)))
        gp = np.pad(g.poly, (0, n - len(g.poly)))
        poly = tuple(a * fp + b * gp)
    exps = None
    if f.exp_coeffs and g.exp_coeffs:
        exps = tuple((a * c, r) for c, r in f.exp_coeffs) + tuple((b * c, r) for c, r in g.exp_coeffs)
    has1 = f.d1 is not None and g.d1 is not None
    has2 = f.d2 is not None and g.d2 is not None
    return TargetFunction(
        func=lambda t: a * f(t) + b * g(t),
        d1=(lambda t: a * f.derivative(t, 1) + b * g.derivative(t, 1)) if has1 else None,
        d2=(lambda t: a * f.derivative(t, 2) + b * g.derivative(t, 2)) if has2 else None,
        growth=growth, degree=max(f.degree, g.degree), rate=max(f.rate, g.rate),
        name=f"{a:g}*{f.name}+{b:g}*{g.name}", poly=poly, exp_coeffs=exps,
    )


def monomial(m: int) -> TargetFunction:
    poly = tuple([0.0] * m + [1.0])
    return TargetFunction(
        func=lambda t: t**m,
        d1=lambda t: m * t ** (m - 1) if m >= 1 else 0.0 * t,
        d2=lambda t: m * (m - 1) * t ** (m - 2) if m >= 2 else 0.0 * t,
        growth="bounded" if m == 0 else "polynomial",
        degree=float(m), name=f"t^{m}", poly=poly,
    )


def constant(c: float) -> TargetFunction:
    return TargetFunction(func=lambda t: np.full_like(t, c, dtype=float),
                          d1=lambda t: 0.0 * t, d2=lambda t: 0.0 * t,
                          name=f"{c:g}", poly=(float(c),), exp_coeffs=((c, 0.0),))


def exponential(a: float = 1.0) -> TargetFunction:
    """``e**(a t)``; tagged bounded when ``a <= 0``."""
    return TargetFunction(
        func=lambda t: np.exp(a * t),
        d1=lambda t: a * np.exp(a * t),
        d2=lambda t: a * a * np.exp(a * t),
        growth="exponential" if a > 0 else "bounded",
        rate=max(a, 0.0),
        name="exp" if a == 1 else ("exp_neg" if a == -1 else f"exp({a:g}t)"),
        exp_coeffs=((1.0, a),),
    )


def x2sin2pix() -> TargetFunction:
    w = 2 * math.pi
    return TargetFunction(
        func=lambda t: t * t * np.sin(w * t),
        d1=lambda t: 2 * t * np.sin(w * t) + w * t * t * np.cos(w * t),
        d2=lambda t: (2 - w * w * t * t) * np.sin(w * t) + 4 * w * t * np.cos(w * t),
        growth="polynomial", degree=2.0, name="x2sin2pix",
    )


def sin_plus_2() -> TargetFunction:
    return TargetFunction(
        func=lambda t: np.sin(t) + 2.0,
        d1=np.cos,
        d2=lambda t: -np.sin(t),
        name="sin+2",
        exp_coeffs=((-0.5j, 1j), (0.5j, -1j), (2.0, 0.0)),
    )


def sqrt_fn() -> TargetFunction:
    return TargetFunction(
        func=np.sqrt,
        d1=lambda t: 0.5 / np.sqrt(t),
        d2=lambda t: -0.25 * t**-1.5,
        growth="polynomial", degree=0.5, name="sqrt",
    )


def rational() -> TargetFunction:
    """``t / (1 + t)``: bounded, member of the modified Lipschitz class with M = 1."""
    return TargetFunction(
        func=lambda t: t / (1.0 + t),
        d1=lambda t: 1.0 / (1.0 + t) ** 2,
        d2=lambda t: -2.0 / (1.0 + t) ** 3,
        name="t/(1+t)",
    )


def abs_sin() -> TargetFunction:
    return TargetFunction(func=lambda t: np.abs(np.sin(t)), name="|sin|")


_REGISTRY = {
    "exp": lambda: exponential(1.0),
    "exp_neg": lambda: exponential(-1.0),
    "x2sin2pix": x2sin2pix,
    "sqrt": sqrt_fn,
    "one": lambda: constant(1.0),
    "zero": lambda: constant(0.0),
    "sin_plus_2": sin_plus_2,
    "rational": rational,
    "abs_sin": abs_sin,
}


def builtin_names():
    return sorted(_REGISTRY) + ["t^<m>"]


def builtin(name: str) -> TargetFunction:
    """Look up a registry entry; monomials are written ``t^m`` (e.g. ``t^3``)."""
    hit = re.fullmatch(r"t\^(\d+)", name)
    if hit:
        return monomial(int(hit.group(1)))
    try:
        return _REGISTRY[name]()
    except KeyError:
        raise ConfigurationError("function", f"unknown builtin {name!r}; "
                                 f"choose from {', '.join(builtin_names())}") from None
