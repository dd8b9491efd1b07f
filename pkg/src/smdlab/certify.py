"""Certification suites: each runs a fixed battery of checks and reports pass/fail."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List

import numpy as np

from . import analysis
from .analysis import LipschitzSpaceParams, dyadic
from .errors import UsageError
from .functions import exponential, monomial, rational, sin_plus_2, sqrt_fn
from .moments import (central_moment, moment_oracle, order_bound_exponent,
                      printed_recurrence_step, raw_moment, recurrence_step)

THEOREMS = ("moments", "korovkin", "voronovskaya", "gruss", "quantitative", "bounds")

SLOPE_WINDOW = (-1.2, -0.8)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    measured: str
    tolerance: str
    detail: str = ""

    def line(self, verbose: bool = False) -> str:
        text = f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.measured} (tolerance {self.tolerance})"
        if verbose and self.detail:
            text += "\n" + "\n".join("      " + ln for ln in self.detail.splitlines())
        return text


def _max_abs(pairs):
    return max((abs(a - b) for a, b in pairs), default=0.0)


def _series_detail(series) -> str:
    return "\n".join(f"n={n} u_n={u:g} value={r:.6e}"
                     for n, u, r in zip(series.ns, series.us, series.residuals))


def _slope_check(name, series, lo=SLOPE_WINDOW[0], hi=SLOPE_WINDOW[1]):
    s = series.slope
    return Check(name, s is not None and lo <= s <= hi, f"slope={s:.4f}", f"[{lo}, {hi}]",
                 _series_detail(series))


def moments_checks() -> List[Check]:
    out = []
    theta0, theta1, theta2 = central_moment(0), central_moment(1), central_moment(2)
    out.append(Check("Theta_0 = 1", theta0.coefficients == {(0, 0): 1}, str(theta0), "exact"))
    out.append(Check("Theta_1 = 1/u", theta1.coefficients == {(0, 1): 1}, str(theta1), "exact"))
    want2 = {(1, 1): Fraction(2), (0, 2): Fraction(2)}
    out.append(Check("Theta_2 = 2(1 + u x)/u^2", theta2.coefficients == want2, str(theta2), "exact"))

    pairs = [(moment_oracle(m, u, x), raw_moment(m)(x, u))
             for m in range(7) for u in (1.0, 10.0, 100.0) for x in (0.0, 0.5, 1.0, 4.0)]
    # absolute 1e-9, scaled by magnitude where the value exceeds one
    worst = max(abs(a - b) / max(1.0, abs(b)) for a, b in pairs)
    out.append(Check("series oracle vs closed forms, m<=6", worst <= 1e-9,
                     f"max scaled diff={worst:.3g}", "1e-9"))

    closure = all(recurrence_step(central_moment(m), central_moment(m - 1), m)
                  .same_coefficients(central_moment(m + 1)) for m in range(1, 8))
    out.append(Check("corrected recurrence reproduces Theta_{m+1}, m=1..7", closure,
                     "exact match" if closure else "mismatch", "exact"))
    printed = printed_recurrence_step(theta1, theta0, 1)
    corrected = recurrence_step(theta1, theta0, 1)
    disagree = not printed.same_coefficients(theta2) and corrected.same_coefficients(theta2)
    out.append(Check("printed recurrence (x on all terms) contradicts Theta_2 at m=1", disagree,
                     f"u*Theta_2 printed -> {printed.over_u(-1)} ; corrected -> {corrected.over_u(-1)}",
                     "must differ from 2x + 2/u"))

    worst_dev = 0.0
    for m in range(1, 9):
        us = [10.0**k for k in range(2, 6)]
        slope = analysis.loglog_slope(us, [central_moment(m)(1.0, v) for v in us])
        worst_dev = max(worst_dev, abs(slope + order_bound_exponent(m)))
    out.append(Check("order bound O(u^-[(m+1)/2]), m=1..8", worst_dev <= 0.05,
                     f"max |slope + [(m+1)/2]|={worst_dev:.4f}", "0.05"))

    us = np.linspace(1, 1000, 60)
    xs = np.linspace(0, 4, 81)
    X, U = np.meshgrid(xs, us)
    neg = min(float(np.min(central_moment(m)(X, U))) for m in (2, 4, 6, 8))
    out.append(Check("even central moments nonnegative", neg >= 0, f"min={neg:.3g}", ">= 0"))

    dev = max(abs(u * central_moment(2)(x, u) - 2 * x - 2 / u)
              for u in (1.0, 10.0, 1e4) for x in np.linspace(0, 4, 41))
    out.append(Check("u*Theta_2 - 2x = 2/u", dev <= 1e-12, f"max dev={dev:.3g}", "1e-12"))
    return out


def korovkin_checks() -> List[Check]:
    out = []
    for u in (10.0, 100.0, 1000.0):
        want = (0.0, 1 / u, 16 / u + 2 / u**2)
        got = analysis.korovkin_errors(u)
        num = analysis.korovkin_errors_numeric(u)
        d = max(_max_abs(zip(got, want)), _max_abs(zip(num, want)))
        out.append(Check(f"sup errors (1, t, t^2) at u={u:g}", d <= 1e-10,
                         "closed=(" + ", ".join(f"{v:.6g}" for v in got) + "), quad=("
                         + ", ".join(f"{v:.6g}" for v in num) + f"), diff={d:.2g}", "1e-10"))
    return out


def voronovskaya_checks() -> List[Check]:
    out = []
    g = monomial(2)
    d = max(abs(analysis.voronovskaya_residual(g, x, u) - 2 / u)
            for u in (10.0, 100.0, 1000.0) for x in (0.0, 0.5, 1.0, 4.0))
    out.append(Check("g=t^2 residual equals 2/u", d <= 1e-10, f"max diff={d:.3g}", "1e-10"))
    s = analysis.voronovskaya_series(g, 1.0, dyadic(4, 12))
    out.append(_slope_check("g=t^2 residual slope (exactly -1)", s))
    ns = dyadic(4, 12)
    for g, x in ((exponential(1.0), 1.0), (exponential(-1.0), 0.5), (exponential(-1.0), 2.0)):
        out.append(_slope_check(f"g={g.name} at x={x:g}, n=2^4..2^12",
                                analysis.voronovskaya_series(g, x, ns)))
    return out


def gruss_checks() -> List[Check]:
    out = []
    t, t2 = monomial(1), monomial(2)
    d1 = d2 = 0.0
    for u in (10.0, 100.0, 1000.0):
        for x in (0.0, 0.5, 1.0, 4.0):
            d1 = max(d1, abs(analysis.gruss_gap(t, t, x, u) - (2 * x + 1 / u)))
            d2 = max(d2, abs(analysis.gruss_gap(t, t2, x, u) - (4 * x * x + 12 * x / u + 4 / u**2)))
    out.append(Check("gap(t, t) = 2x + 1/u", d1 <= 1e-8, f"max diff={d1:.3g}", "1e-8"))
    out.append(Check("gap(t, t^2) = 4x^2 + 12x/u + 4/u^2", d2 <= 1e-8, f"max diff={d2:.3g}", "1e-8"))
    f, g = exponential(-1.0), sin_plus_2()
    s = analysis.gruss_series(f, g, 1.0, dyadic(4, 12))
    out.append(_slope_check("|gap - 2x f'g'| for f=e^-t, g=sin t+2 at x=1", s))
    sym = max(abs(analysis.gruss_gap(f, g, x, u) - analysis.gruss_gap(g, f, x, u))
              for u in (10.0, 100.0) for x in (0.5, 2.0))
    out.append(Check("gap symmetric in (f, g)", sym <= 1e-10, f"max diff={sym:.3g}", "1e-10"))
    return out


def quantitative_checks() -> List[Check]:
    out = []
    ns = dyadic(4, 10)
    for g in (exponential(1.0), monomial(3)):
        r = analysis.quantitative_voronovskaya_check(g, 1.0, ns)
        ok = r.slope <= 0.1 and not r.extra["violations"] and all(math.isfinite(v) for v in r.residuals)
        out.append(Check(f"L_n/Delta(g'', u^-1/2) bounded for g={g.name} at x=1", ok,
                         f"slope={r.slope:.4f}, max ratio={max(r.residuals):.4g}", "slope <= 0.1",
                         _series_detail(r)))
    r = analysis.quantitative_voronovskaya_check(monomial(2), 1.0, ns)
    zero = all(v == 0 for v in r.extra["L"])
    out.append(Check("g=t^2 gives L_n = 0 identically", zero and not r.extra["violations"],
                     f"max L={max(r.extra['L']):.3g}", "exactly 0"))
    return out


def bounds_checks() -> List[Check]:
    out = []
    xs = (0.0, 0.25, 0.5, 1.0, 2.0, 4.0)
    us = (10.0, 50.0, 100.0, 1000.0)
    for g, r, kappa in ((monomial(1), 1.0, 1.0), (exponential(-1.0), 1.0, 1.0), (sqrt_fn(), 0.5, 1.0)):
        res = [analysis.theorem1_check(g, r, u, x, kappa=kappa) for u in us for x in xs]
        bad = sum(not c.holds for c in res)
        worst = max(c.lhs / c.rhs for c in res if c.rhs > 0)
        out.append(Check(f"Lipschitz-maximal bound, g={g.name}, r={r:g}, kappa={kappa:g}", bad == 0,
                         f"violations={bad}, max lhs/rhs={worst:.4f}", "lhs <= rhs"))
    grid = np.linspace(0, 4, 401)
    for s in (1.0, 0.5):
        params = LipschitzSpaceParams(a1=1.0, a2=1.0, s=s, M=1.0)
        member = analysis.lipschitz_space_constant(rational(), 1.0, 1.0, s, grid)
        res = [analysis.theorem2_check(rational(), params, u, x) for u in us for x in xs if x > 0]
        bad = sum(not c.holds for c in res)
        worst = max(c.lhs / c.rhs for c in res)
        out.append(Check(f"modified Lipschitz bound, g=t/(1+t), s={s:g}, M=1",
                         bad == 0 and member <= 1.0,
                         f"violations={bad}, grid M={member:.4f}, max lhs/rhs={worst:.4f}", "lhs <= rhs"))
    return out


SUITES: Dict[str, Callable[[], List[Check]]] = {
    "moments": moments_checks,
    "korovkin": korovkin_checks,
    "voronovskaya": voronovskaya_checks,
    "gruss": gruss_checks,
    "quantitative": quantitative_checks,
    "bounds": bounds_checks,
}


def certify(kind: str, verbose: bool = False):
    """Run one suite; returns ``(exit_status, report_text)`` with status 0 iff all checks pass."""
    if kind not in SUITES:
        raise UsageError(f"unknown theorem {kind!r}; choose from {', '.join(THEOREMS)}")
    checks = SUITES[kind]()
    failures = [c for c in checks if not c.passed]
    lines = [c.line(verbose) for c in checks]
    lines.append(f"{kind}: {len(checks) - len(failures)}/{len(checks)} checks passed")
    if failures:
        lines.append("failed: " + "; ".join(c.name for c in failures))
    return (1 if failures else 0), "\n".join(lines)
