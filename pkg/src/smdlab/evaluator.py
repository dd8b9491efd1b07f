"""Numerical evaluation of the Szász-Mirakjan-Durrmeyer operator.

``S(g; x) = sum_j s_{u,j}(x) * I_j`` with ``I_j = u * int_0^inf s_{u,j}(t) g(t) dt``.
After ``s = u t`` the inner integral is the mean of ``g(S/u)`` for
``S ~ Gamma(j+1, 1)``, which generalized Gauss-Laguerre with ``alpha = j``
integrates exactly for polynomials of degree ``2*order - 1``.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DomainError, EvaluationError
from .functions import TargetFunction
from .kernel import log_poisson_weights, truncation_window
from .moments import raw_moment
from .quadrature import gauss_laguerre

log = logging.getLogger(__name__)

SCHEMES = ("gauss-laguerre", "adaptive", "closed-form")


@dataclass(frozen=True)
class QuadratureSpec:
    scheme: str = "gauss-laguerre"
    order: int = 48
    series_tol: float = 1e-14
    max_order: int = 512

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise DomainError(f"unknown quadrature scheme {self.scheme!r}")
        if self.order < 2:
            raise DomainError(f"quadrature order must be >= 2, got {self.order}")
        if not 0 < self.series_tol < 1:
            raise DomainError(f"series_tol must lie in (0, 1), got {self.series_tol}")


DEFAULT_QUAD = QuadratureSpec()


@dataclass(frozen=True)
class OperatorEvaluation:
    value: float
    terms_used: int
    tail_bound: float
    inner_abs_error_estimate: float


def _check_growth(g: TargetFunction, u_n: float):
    if not u_n > 0:
        raise DomainError(f"u_n must be positive, got {u_n}")
    if g.growth == "exponential" and g.rate >= u_n:
        raise DomainError(
            f"{g.name} grows like exp({g.rate:g} t); the integral diverges unless u_n > {g.rate:g}")


def _eval_at_nodes(g: TargetFunction, t: np.ndarray) -> np.ndarray:
    vals = g(t)
    bad = ~np.isfinite(vals)
    if np.any(bad):
        node = float(t[bad].flat[0])
        raise EvaluationError(f"{g.name} is not finite at quadrature node t={node!r}", node=node)
    return vals


def _inner_table(js: np.ndarray, u_n: float, g: TargetFunction, order: int):
    """Inner integrals over ``js`` as ``(log_scale, integral)`` pairs.

    For exponential growth ``g = e**(a t) h`` the factor ``e**(a t)`` is absorbed
    into the Laguerre weight: ``I_j = (1 - a/u)**-(j+1) * E[h(S/(u - a))]``.
    """
    a = g.rate if g.growth == "exponential" else 0.0
    scale_u = u_n - a
    nodes = np.empty((len(js), order))
    weights = np.empty((len(js), order))
    for row, j in enumerate(js):
        nodes[row], weights[row] = gauss_laguerre(order, float(j))
    t = nodes / scale_u
    vals = _eval_at_nodes(g, t)
    if a:
        vals = vals * np.exp(-a * t)
        log_scale = -(js + 1.0) * math.log1p(-a / u_n)
    else:
        log_scale = np.zeros(len(js))
    return log_scale, np.sum(weights * vals, axis=1)


def _quad_integral(j: int, scale_u: float, h) -> tuple:
    """Adaptive ``E[h(S/scale_u)]`` for ``S ~ Gamma(j+1, 1)``, split around the mode."""
    lg = math.lgamma(j + 1)

    def density(s):
        if s <= 0:
            return 1.0 if j == 0 else 0.0
        return math.exp(j * math.log(s) - s - lg)

    def f(s):
        return density(s) * float(h(np.array([s / scale_u]))[0])

    spread = 12 * math.sqrt(j + 1) + 12
    cuts = [0.0] + [c for c in (j - spread, j, j + spread) if c > 0]
    total = err = 0.0
    for a, b in zip(cuts, cuts[1:] + [math.inf]):
        # roundoff notices are expected this close to machine precision; the
        # returned error estimate is checked by the caller instead
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, e = integrate.quad(f, a, b, epsabs=1e-15, epsrel=1e-13, limit=500)
        total += val
        err += e
    return total, err


def _tilted(g: TargetFunction):
    a = g.rate if g.growth == "exponential" else 0.0
    if not a:
        return a, g
    return a, lambda t: g(t) * np.exp(-a * t)


def _adaptive_table(js: np.ndarray, u_n: float, g: TargetFunction, q: QuadratureSpec):
    """Per-index order doubling; indices unresolved at ``max_order`` fall back to
    adaptive quadrature.  Returns ``(log_scale, integrals, abs_error)``."""
    order = q.order
    log_scale, vals = _inner_table(js, u_n, g, order)
    err = np.full(len(js), np.inf)
    todo = np.arange(len(js))
    while len(todo) and order < q.max_order:
        order = min(2 * order, q.max_order)
        _, nxt = _inner_table(js[todo], u_n, g, order)
        diff = np.abs(nxt - vals[todo])
        vals[todo] = nxt
        err[todo] = diff
        todo = todo[diff > q.series_tol * np.maximum(1.0, np.abs(nxt))]
    if len(todo):
        log.info("%s: %d inner integrals unresolved at order %d, using adaptive quadrature",
                 g.name, len(todo), order)
        a, h = _tilted(g)
        for i in todo:
            try:
                vals[i], err[i] = _quad_integral(int(js[i]), u_n - a, h)
            except (ValueError, OverflowError) as exc:
                raise EvaluationError(f"{g.name}: adaptive quadrature failed at j={js[i]}: {exc}") from exc
            if not math.isfinite(vals[i]):
                raise EvaluationError(f"{g.name}: adaptive quadrature not finite at j={js[i]}")
        bad = err[todo] > q.series_tol * np.maximum(1.0, np.abs(vals[todo]))
        if np.any(bad):
            log.warning("%s: %d inner integrals above tolerance, worst error %.3g",
                        g.name, int(bad.sum()), float(np.max(err[todo])))
    return log_scale, vals, err


def inner_integral(j: int, u_n: float, g: TargetFunction, q: QuadratureSpec = DEFAULT_QUAD) -> float:
    """``u_n * int_0^inf s_{u_n,j}(t) g(t) dt`` by generalized Gauss-Laguerre."""
    _check_growth(g, u_n)
    if j < 0:
        raise DomainError(f"basis index must be nonnegative, got {j}")
    js = np.array([int(j)])
    if q.scheme == "adaptive":
        log_scale, val, _ = _adaptive_table(js, u_n, g, q)
    else:
        log_scale, val = _inner_table(js, u_n, g, q.order)
    return float(math.exp(log_scale[0]) * val[0])


def closed_form(g: TargetFunction, u_n: float, x):
    """Exact operator values for polynomials and finite sums of exponentials.

    Uses ``S(t**m)`` from the moment polynomials and
    ``S(e**(z t); x) = u/(u - z) * exp(u x z/(u - z))`` for ``Re z < u``.
    """
    x = np.asarray(x, dtype=float)
    if g.poly is not None:
        total = np.zeros_like(x)
        for m, c in enumerate(g.poly):
            if c:
                total = total + c * raw_moment(m)(x, u_n)
        return total
    if g.exp_coeffs:
        total = np.zeros(x.shape, dtype=complex)
        for c, z in g.exp_coeffs:
            if np.real(z) >= u_n:
                raise DomainError(f"exp({z} t) has no finite image for u_n = {u_n}")
            total = total + c * u_n / (u_n - z) * np.exp(u_n * x * z / (u_n - z))
        return np.real(total)
    raise DomainError(f"no closed form registered for {g.name}")


# extra mass margin for growing integrands, whose tail terms exceed the tail mass
_GROWTH_MARGIN = 1e-6


def _window(g: TargetFunction, u_n: float, x: float, tol: float):
    """Series window for ``g``; under the exponential tilt the weights
    ``s_{u,j}(x) (1 - a/u)**-(j+1)`` are Poisson in ``j`` with mean ``u**2 x/(u - a)``."""
    if g.growth == "exponential":
        return truncation_window(u_n * u_n / (u_n - g.rate), x, tol * _GROWTH_MARGIN)
    if g.growth == "polynomial":
        return truncation_window(u_n, x, tol * _GROWTH_MARGIN)
    return truncation_window(u_n, x, tol)


def _union(windows):
    lo = min(w.j_min for w in windows)
    return lo, np.arange(lo, max(w.j_max for w in windows) + 1)


def _grid_values(u_n, xs, windows, lo, js, log_scale, integrals):
    out = np.empty(len(xs))
    for i, (x, w) in enumerate(zip(xs, windows)):
        sl = slice(w.j_min - lo, w.j_max - lo + 1)
        coef = np.exp(log_poisson_weights(u_n, x, js[sl]) + log_scale[sl])
        out[i] = math.fsum(coef * integrals[sl])
    return out


def apply_grid(g: TargetFunction, u_n: float, xs, q: QuadratureSpec = DEFAULT_QUAD):
    """Evaluate the operator on many points, sharing one table of inner integrals.

    The error estimate is the change against half the quadrature order for the
    fixed rule and the propagated per-index error for the adaptive scheme.
    """
    _check_growth(g, u_n)
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    windows = [_window(g, u_n, float(x), q.series_tol) for x in xs]
    if q.scheme == "closed-form":
        vals = np.atleast_1d(closed_form(g, u_n, xs))
        errs = np.zeros(len(xs))
    else:
        lo, js = _union(windows)
        if q.scheme == "adaptive":
            log_scale, integrals, err = _adaptive_table(js, u_n, g, q)
            vals = _grid_values(u_n, xs, windows, lo, js, log_scale, integrals)
            errs = _grid_values(u_n, xs, windows, lo, js, log_scale, err)
        else:
            log_scale, integrals = _inner_table(js, u_n, g, q.order)
            vals = _grid_values(u_n, xs, windows, lo, js, log_scale, integrals)
            _, coarse = _inner_table(js, u_n, g, max(2, q.order // 2))
            errs = np.abs(vals - _grid_values(u_n, xs, windows, lo, js, log_scale, coarse))
    return [OperatorEvaluation(float(v), len(w), w.tail_mass_bound, float(e))
            for v, w, e in zip(vals, windows, errs)]


def apply(g: TargetFunction, u_n: float, x: float, q: QuadratureSpec = DEFAULT_QUAD) -> OperatorEvaluation:
    """``S_n*(g; x)`` with truncation and quadrature diagnostics."""
    if not x >= 0:
        raise DomainError(f"x must be nonnegative, got {x}")
    return apply_grid(g, u_n, [x], q)[0]


def operator_values(g: TargetFunction, u_n: float, xs, q: QuadratureSpec = DEFAULT_QUAD) -> np.ndarray:
    """Plain array of operator values on ``xs``."""
    return np.array([e.value for e in apply_grid(g, u_n, xs, q)])


def apply_discrete_szasz(g: TargetFunction, u_n: float, x: float, series_tol: float = 1e-14) -> float:
    """Discrete Szász baseline ``sum_j s_{u,j}(x) g(j/u)``."""
    if not u_n > 0:
        raise DomainError(f"u_n must be positive, got {u_n}")
    w = truncation_window(u_n, x, series_tol)
    js = w.indices
    vals = _eval_at_nodes(g, js / u_n)
    return math.fsum(np.exp(log_poisson_weights(u_n, x, js)) * vals)
