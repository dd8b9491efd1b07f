"""Numerical evidence for the approximation theorems of the operator.

Suprema (the Lipschitz maximal function and the weighted modulus) are grid
maxima and hence lower bounds.  Bound checks that need an upper bound take an
analytic constant from the caller.  Limit theorems are judged by least-squares
log-log slopes over dyadic ``n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from .errors import DomainError, UsageError
from .evaluator import DEFAULT_QUAD, QuadratureSpec, apply, operator_values
from .functions import TargetFunction
from .kernel import UnSequence
from .moments import central_moment, raw_moment

DEFAULT_X_GRID = np.linspace(0.0, 4.0, 401)
MAX_PAIRS = 10**6


def loglog_slope(us, values) -> float:
    """Least-squares slope of ``log|values|`` against ``log us``."""
    us = np.asarray(us, dtype=float)
    vals = np.abs(np.asarray(values, dtype=float))
    if len(us) < 2:
        raise UsageError("need at least two points for a slope")
    if np.any(vals == 0):
        raise DomainError("log-log slope undefined for zero values")
    slope, _ = np.polyfit(np.log(us), np.log(vals), 1)
    return float(slope)


@dataclass
class ResidualSeries:
    ns: List[int]
    us: List[float]
    residuals: List[float]
    slope: Optional[float] = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (len(self.ns) == len(self.us) == len(self.residuals)):
            raise UsageError("residual series lengths disagree")
        if any(b <= a for a, b in zip(self.us, self.us[1:])):
            raise UsageError("u_n values must be strictly increasing")
        if self.slope is None and self.residuals and all(r != 0 for r in self.residuals):
            self.slope = loglog_slope(self.us, self.residuals)


def dyadic(lo_exp: int, hi_exp: int) -> List[int]:
    return [2**k for k in range(lo_exp, hi_exp + 1)]


# Korovkin ---------------------------------------------------------------------

def korovkin_errors(u_n: float, x_grid=DEFAULT_X_GRID):
    """``sup_x |S(e_i; x) - x**i|`` over the grid for ``e_i = 1, t, t**2``."""
    x = np.asarray(x_grid, dtype=float)
    return tuple(float(np.max(np.abs(raw_moment(i)(x, u_n) - x**i))) for i in range(3))


def korovkin_errors_numeric(u_n: float, x_grid=DEFAULT_X_GRID, q: QuadratureSpec = DEFAULT_QUAD):
    """Same sup errors, but with the operator evaluated by quadrature."""
    from .functions import monomial
    x = np.asarray(x_grid, dtype=float)
    return tuple(float(np.max(np.abs(operator_values(monomial(i), u_n, x, q) - x**i)))
                 for i in range(3))


# Lipschitz-type bounds --------------------------------------------------------

def _pair_grid(grid, max_pairs):
    pts = np.unique(np.asarray(grid, dtype=float))
    if len(pts) < 2:
        raise UsageError("need at least two distinct grid points")
    n_pairs = len(pts) * (len(pts) - 1) // 2
    if n_pairs > max_pairs:
        keep = int((1 + math.sqrt(1 + 8 * max_pairs)) / 2)
        idx = np.unique(np.linspace(0, len(pts) - 1, keep).round().astype(int))
        pts = pts[idx]
    return pts


def kappa_estimate(g: TargetFunction, r: float, grid, max_pairs: int = MAX_PAIRS) -> float:
    """Grid maximum of ``|g(u) - g(v)| / |u - v|**r`` over distinct pairs (a lower bound)."""
    if not 0 < r <= 1:
        raise DomainError(f"r must lie in (0, 1], got {r}")
    pts = _pair_grid(grid, max_pairs)
    vals = g(pts)
    best = 0.0
    for i in range(len(pts) - 1):
        du = pts[i + 1:] - pts[i]
        ratio = np.abs(vals[i + 1:] - vals[i]) / du**r
        best = max(best, float(ratio.max()))
    return best


@dataclass(frozen=True)
class BoundCheck:
    lhs: float
    rhs: float
    constant: float
    certified: bool

    @property
    def holds(self) -> bool:
        # relative slack for quadrature error plus an absolute floor for roundoff when rhs = 0
        return self.lhs <= self.rhs * (1 + 1e-6) + 1e-12


def theorem1_check(g: TargetFunction, r: float, u_n: float, x: float, grid=DEFAULT_X_GRID,
                   kappa: Optional[float] = None, q: QuadratureSpec = DEFAULT_QUAD) -> BoundCheck:
    """``|S(g;x) - g(x)|`` against ``kappa_r(g) * Theta_2(x)**(r/2)``.

    ``kappa`` is an analytic Lipschitz constant; without it the grid estimate is
    used and the result is marked uncertified.
    """
    lhs = abs(apply(g, u_n, x, q).value - float(g(x)))
    k = kappa if kappa is not None else kappa_estimate(g, r, grid)
    rhs = k * central_moment(2)(x, u_n) ** (r / 2)
    return BoundCheck(lhs, rhs, k, kappa is not None)


@dataclass(frozen=True)
class LipschitzSpaceParams:
    a1: float
    a2: float
    s: float
    M: float

    def __post_init__(self):
        if not (self.a1 > 0 and self.a2 > 0 and self.M > 0 and 0 < self.s <= 1):
            raise DomainError("need a1 > 0, a2 > 0, M > 0 and 0 < s <= 1")


def lipschitz_space_constant(g: TargetFunction, a1: float, a2: float, s: float,
                             grid, max_pairs: int = MAX_PAIRS) -> float:
    """Smallest M on the grid with ``|g(u)-g(v)| <= M |u-v|**s / (u + a1 v**2 + a2 v)**(s/2)``."""
    pts = _pair_grid(grid, max_pairs)
    vals = g(pts)
    best = 0.0
    for i, v in enumerate(pts):
        others = np.delete(pts, i)
        diff = np.abs(np.delete(vals, i) - vals[i])
        ratio = diff * (others + a1 * v * v + a2 * v) ** (s / 2) / np.abs(others - v) ** s
        best = max(best, float(ratio.max()))
    return best


def theorem2_check(g: TargetFunction, params: LipschitzSpaceParams, u_n: float, x: float,
                   q: QuadratureSpec = DEFAULT_QUAD) -> BoundCheck:
    """``|S(g;x) - g(x)|`` against ``M (Theta_2 / (x (a1 x + a2)))**(s/2)``."""
    if not x > 0:
        raise DomainError("the modified Lipschitz bound is singular at x = 0")
    lhs = abs(apply(g, u_n, x, q).value - float(g(x)))
    rhs = params.M * (central_moment(2)(x, u_n) / (x * (x * params.a1 + params.a2))) ** (params.s / 2)
    return BoundCheck(lhs, rhs, params.M, True)


# Voronovskaya -----------------------------------------------------------------

def voronovskaya_residual(g: TargetFunction, x: float, u_n: float,
                          q: QuadratureSpec = DEFAULT_QUAD) -> float:
    """``u (S(g;x) - g(x)) - (g'(x) + x g''(x))``."""
    s = apply(g, u_n, x, q).value
    target = float(g.derivative(x, 1)) + x * float(g.derivative(x, 2))
    return u_n * (s - float(g(x))) - target


def voronovskaya_series(g: TargetFunction, x: float, ns: Sequence[int],
                        sequence: UnSequence = UnSequence(),
                        q: QuadratureSpec = DEFAULT_QUAD) -> ResidualSeries:
    us = sequence.values(ns)
    res = [voronovskaya_residual(g, x, u, q) for u in us]
    return ResidualSeries(list(ns), us, res)


# weighted modulus and the quantitative theorem ------------------------------------

def weighted_modulus_estimate(g, xi: float, h_grid=None, x_grid=DEFAULT_X_GRID) -> float:
    """Grid maximum of ``|g(x+h) - g(x)| / ((1+h**2)(1+x**2))`` for ``0 <= h <= xi``.

    ``g`` is any vectorised callable (typically a second derivative).
    """
    if not xi > 0:
        raise DomainError(f"xi must be positive, got {xi}")
    h = np.linspace(0.0, xi, 41) if h_grid is None else np.asarray(h_grid, dtype=float)
    if h.size == 0 or np.any(h < 0) or np.any(h > xi * (1 + 1e-12)):
        raise DomainError("h_grid must be nonempty and inside [0, xi]")
    x = np.asarray(x_grid, dtype=float)[:, None]
    h = h[None, :]
    num = np.abs(np.asarray(g(x + h)) - np.asarray(g(x)))
    return float(np.max(num / ((1 + h * h) * (1 + x * x))))


def _poly_exact(poly, x: Fraction) -> List[Fraction]:
    """Value, first and second derivative of a polynomial at a rational point."""
    coeffs = [Fraction(c) for c in poly]
    val = sum(c * x**k for k, c in enumerate(coeffs))
    d1 = sum(k * c * x ** (k - 1) for k, c in enumerate(coeffs) if k >= 1)
    d2 = sum(k * (k - 1) * c * x ** (k - 2) for k, c in enumerate(coeffs) if k >= 2)
    return [Fraction(val), Fraction(d1), Fraction(d2)]


def quantitative_gap(g: TargetFunction, x: float, u_n: float,
                     q: QuadratureSpec = DEFAULT_QUAD) -> float:
    """``u |S(g;x) - g(x) - g'(x)/u - g''(x)(x + 1/u)/u|``; exact rational for polynomials."""
    if g.poly is not None:
        fx, fu = Fraction(x), Fraction(u_n)
        s = sum(Fraction(c) * sum(v * fx**a / fu**b for (a, b), v in raw_moment(k).terms)
                for k, c in enumerate(g.poly))
        g0, g1, g2 = _poly_exact(g.poly, fx)
        return float(abs(fu * (s - g0 - g1 / fu - g2 * (fx + 1 / fu) / fu)))
    s = apply(g, u_n, x, q).value
    g0, g1, g2 = float(g(x)), float(g.derivative(x, 1)), float(g.derivative(x, 2))
    return u_n * abs(s - g0 - g1 / u_n - g2 * (x + 1 / u_n) / u_n)


def quantitative_voronovskaya_check(g: TargetFunction, x: float, ns: Sequence[int],
                                    sequence: UnSequence = UnSequence(),
                                    q: QuadratureSpec = DEFAULT_QUAD,
                                    x_grid=DEFAULT_X_GRID) -> ResidualSeries:
    """Ratios ``L_n / Delta(g'', 1/sqrt(u_n))``.

    ``extra`` carries ``L``, ``D`` and ``violations`` (indices where ``D == 0 < L``).
    A ``0/0`` entry counts as ratio 0.  ``slope`` is fitted on the nonzero ratios.
    """
    us = sequence.values(ns)
    d2 = lambda t: g.derivative(t, 2)  # noqa: E731
    L, D, ratios, violations = [], [], [], []
    for i, u in enumerate(us):
        ln = quantitative_gap(g, x, u, q)
        dn = weighted_modulus_estimate(d2, 1 / math.sqrt(u), x_grid=x_grid)
        L.append(ln)
        D.append(dn)
        if dn == 0:
            if ln > 0:
                violations.append(i)
            ratios.append(0.0 if ln == 0 else math.inf)
        else:
            ratios.append(ln / dn)
    keep = [(u, r) for u, r in zip(us, ratios) if 0 < r < math.inf]
    slope = loglog_slope(*zip(*keep)) if len(keep) >= 2 else 0.0
    return ResidualSeries(list(ns), us, ratios, slope=slope,
                          extra={"L": L, "D": D, "violations": violations})


# Gruss-Voronovskaya ---------------------------------------------------------------

def gruss_gap(f: TargetFunction, g: TargetFunction, x: float, u_n: float,
              q: QuadratureSpec = DEFAULT_QUAD) -> float:
    """``u (S(f g; x) - S(f; x) S(g; x))``."""
    sfg = apply(f * g, u_n, x, q).value
    return u_n * (sfg - apply(f, u_n, x, q).value * apply(g, u_n, x, q).value)


def gruss_limit(f: TargetFunction, g: TargetFunction, x: float) -> float:
    return 2 * x * float(f.derivative(x, 1)) * float(g.derivative(x, 1))


def gruss_series(f: TargetFunction, g: TargetFunction, x: float, ns: Sequence[int],
                 sequence: UnSequence = UnSequence(),
                 q: QuadratureSpec = DEFAULT_QUAD) -> ResidualSeries:
    us = sequence.values(ns)
    limit = gruss_limit(f, g, x)
    res = [gruss_gap(f, g, x, u, q) - limit for u in us]
    return ResidualSeries(list(ns), us, res, extra={"limit": limit})
