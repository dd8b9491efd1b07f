"""Exact raw and central moments of the operator as polynomials in ``x`` and ``1/u``.

Applying the operator to ``t**m`` gives, per basis index ``j``, the Gamma
integral ``(j+m)!/(j! u**m)``.  Averaging the rising product
``(J+1)...(J+m)`` over ``J ~ Poisson(u x)`` through factorial moments
``E[J(J-1)...(J-k+1)] = (u x)**k`` yields integer coefficients, so every
polynomial here is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Tuple

import numpy as np

from .errors import UsageError
from .kernel import UnSequence, log_poisson_weights, truncation_window

Key = Tuple[int, int]  # (power of x, power of 1/u)


@dataclass(frozen=True)
class MomentPolynomial:
    """``sum c[a, b] * x**a * u**(-b)`` with rational ``c``; immutable."""

    terms: Tuple[Tuple[Key, Fraction], ...]
    m: int
    kind: str = "raw"

    @classmethod
    def from_dict(cls, coeffs: Dict[Key, Fraction], m: int, kind: str = "raw"):
        items = tuple(sorted((k, Fraction(v)) for k, v in coeffs.items() if v != 0))
        return cls(items, m, kind)

    @property
    def coefficients(self) -> Dict[Key, Fraction]:
        return dict(self.terms)

    def coefficient(self, a: int, b: int) -> Fraction:
        return self.coefficients.get((a, b), Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def same_coefficients(self, other: "MomentPolynomial") -> bool:
        return self.terms == other.terms

    # algebra ---------------------------------------------------------------

    def _combine(self, other, sign):
        out = self.coefficients
        for k, v in other.terms:
            out[k] = out.get(k, Fraction(0)) + sign * v
        return out

    def __add__(self, other):
        return MomentPolynomial.from_dict(self._combine(other, 1), self.m, self.kind)

    def __sub__(self, other):
        return MomentPolynomial.from_dict(self._combine(other, -1), self.m, self.kind)

    def scaled(self, factor) -> "MomentPolynomial":
        f = Fraction(factor)
        return MomentPolynomial.from_dict({k: f * v for k, v in self.terms}, self.m, self.kind)

    def times_x(self, power: int = 1) -> "MomentPolynomial":
        return MomentPolynomial.from_dict(
            {(a + power, b): v for (a, b), v in self.terms}, self.m, self.kind)

    def over_u(self, power: int = 1) -> "MomentPolynomial":
        return MomentPolynomial.from_dict(
            {(a, b + power): v for (a, b), v in self.terms}, self.m, self.kind)

    def d_dx(self) -> "MomentPolynomial":
        return MomentPolynomial.from_dict(
            {(a - 1, b): a * v for (a, b), v in self.terms if a > 0}, self.m, self.kind)

    def relabel(self, m: int, kind: str | None = None) -> "MomentPolynomial":
        return MomentPolynomial(self.terms, m, kind or self.kind)

    # evaluation -------------------------------------------------------------

    def __call__(self, x, u):
        """Evaluate at ``x`` (scalar or array) and ``u > 0``."""
        x = np.asarray(x, dtype=float)
        inv_u = 1.0 / np.asarray(u, dtype=float)
        total = np.zeros(np.broadcast(x, inv_u).shape)
        for (a, b), v in self.terms:
            total = total + float(v) * x**a * inv_u**b
        return total if total.ndim else float(total)

    def min_inverse_degree(self, with_x_only: bool = False) -> int | None:
        bs = [b for (a, b), _ in self.terms if a > 0 or not with_x_only]
        return min(bs) if bs else None

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, b), v in sorted(self.terms, key=lambda t: (-t[0][0], t[0][1])):
            mono = "".join(filter(None, [
                "" if a == 0 else ("x" if a == 1 else f"x^{a}"),
                "" if b == 0 else ("/u" if b == 1 else f"/u^{b}"),
            ]))
            coef = str(v)
            if mono and v == 1:
                coef = ""
            if mono.startswith("/") and not coef:
                coef = "1"
            parts.append(f"{coef}{'*' if coef and mono and mono[0] == 'x' else ''}{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _poly(coeffs: Dict[Key, int], m: int, kind: str) -> MomentPolynomial:
    return MomentPolynomial.from_dict({k: Fraction(v) for k, v in coeffs.items()}, m, kind)


@lru_cache(maxsize=None)
def _stirling2(n: int, k: int) -> int:
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * _stirling2(n - 1, k) + _stirling2(n - 1, k - 1)


@lru_cache(maxsize=None)
def raw_moment(m: int) -> MomentPolynomial:
    """Exact ``S_n*(t**m; x)``."""
    if m < 0:
        raise UsageError(f"moment order must be nonnegative, got {m}")
    # coefficients of (J+1)(J+2)...(J+m) in powers of J
    rising = [1]
    for i in range(1, m + 1):
        nxt = [0] * (len(rising) + 1)
        for p, c in enumerate(rising):
            nxt[p] += i * c
            nxt[p + 1] += c
        rising = nxt
    coeffs: Dict[Key, int] = {}
    for p, c in enumerate(rising):
        for k in range(p + 1):
            s = _stirling2(p, k)
            if s:
                # E[J falling k] = (u x)**k, then divide by u**m
                coeffs[(k, m - k)] = coeffs.get((k, m - k), 0) + c * s
    return _poly(coeffs, m, "raw")


@lru_cache(maxsize=None)
def central_moment(m: int) -> MomentPolynomial:
    """Exact central moment ``S_n*((t - x)**m; x)`` by binomial expansion of raw moments."""
    if m < 0:
        raise UsageError(f"moment order must be nonnegative, got {m}")
    acc: Dict[Key, Fraction] = {}
    for k in range(m + 1):
        factor = math.comb(m, k) * (-1) ** (m - k)
        for (a, b), v in raw_moment(k).terms:
            key = (a + m - k, b)
            acc[key] = acc.get(key, Fraction(0)) + factor * v
    return MomentPolynomial.from_dict(acc, m, "central")


def _check_recurrence_inputs(theta_m, theta_prev, m):
    if m < 0:
        raise UsageError(f"recurrence order must be nonnegative, got {m}")
    if theta_m.m != m:
        raise UsageError(f"theta_m has order {theta_m.m}, expected {m}")
    if theta_prev is None:
        if m != 0:
            raise UsageError("theta_{m-1} is required for m >= 1")
        return MomentPolynomial((), -1, "central")
    if theta_prev.m != m - 1:
        raise UsageError(f"theta_(m-1) has order {theta_prev.m}, expected {m - 1}")
    return theta_prev


def recurrence_step(theta_m: MomentPolynomial, theta_m_minus_1: MomentPolynomial | None,
                    m: int) -> MomentPolynomial:
    """``u Theta_{m+1} = x Theta_m' + 2 m x Theta_{m-1} + (m+1) Theta_m``.

    ``theta_m_minus_1`` may be ``None`` when ``m == 0`` (taken as zero).
    """
    prev = _check_recurrence_inputs(theta_m, theta_m_minus_1, m)
    rhs = (theta_m.d_dx().times_x()
           + prev.times_x().scaled(2 * m).relabel(m)
           + theta_m.scaled(m + 1))
    return rhs.over_u().relabel(m + 1, "central")


def printed_recurrence_step(theta_m: MomentPolynomial, theta_m_minus_1: MomentPolynomial | None,
                            m: int) -> MomentPolynomial:
    """Variant with ``x`` multiplying all three terms; kept to exhibit its disagreement."""
    prev = _check_recurrence_inputs(theta_m, theta_m_minus_1, m)
    inner = theta_m.d_dx() + prev.scaled(2 * m).relabel(m) + theta_m.scaled(m + 1)
    return inner.times_x().over_u().relabel(m + 1, "central")


def order_bound_exponent(m: int) -> int:
    """Integer part of ``(m + 1) / 2``: central moment ``m`` is ``O(u**-that)``."""
    return (m + 1) // 2


def moment_oracle(m: int, u_n: float, x: float, tol: float = 1e-13) -> float:
    """Raw moment ``S_n*(t**m; x)`` by direct truncated summation over ``j``.

    Each inner integral is the exact Gamma value ``(j+1)...(j+m)/u**m``, summed
    in log space.  Both truncated tails of the weighted series are bounded by
    geometric majorants and kept below ``tol``.
    """
    if m < 0:
        raise UsageError(f"moment order must be nonnegative, got {m}")
    window = truncation_window(u_n, x, min(tol, 0.5))
    lam = u_n * x
    if lam == 0.0:
        return math.prod(range(1, m + 1)) / u_n**m
    lo, hi = window.j_min, window.j_max
    width = max(16, hi - lo)
    log_u = math.log(u_n)
    while True:
        js = np.arange(lo, hi + 2)
        log_terms = log_poisson_weights(u_n, x, js)
        for i in range(1, m + 1):
            log_terms = log_terms + np.log(js + i) - log_u
        terms = np.exp(log_terms)
        # consecutive-term ratio beyond hi is at most lam*(hi+m+2)/(hi+2)**2
        rho = lam * (hi + m + 2) / (hi + 2) ** 2
        right = terms[-1] / (1 - rho) if rho < 1 else math.inf
        if lo == 0:
            left = 0.0
        else:
            # mass below lo times the largest per-j factor there
            lw = log_poisson_weights(u_n, x, np.array([lo - 1]))[0]
            grow = sum(math.log((lo - 1 + i) / u_n) for i in range(1, m + 1))
            ratio = 1 - (lo - 1) / lam
            left = math.exp(lw + grow) / ratio if ratio > 0 else math.inf
        if left + right <= tol:
            return math.fsum(terms[:-1])
        hi += width
        lo = max(0, lo - width)
        width *= 2


def remark1_limit_check(x: float, sequence: UnSequence, N: int) -> list:
    """``u_n * Theta_{n,2}(x)`` for ``n = 1..N``; tends to ``2 x``."""
    if N < 2:
        raise UsageError("N must be at least 2")
    theta2 = central_moment(2)
    return [u * theta2(x, u) for u in sequence.values(range(1, N + 1))]
