"""Szász basis weights and certified truncation of the series over ``j``.

The basis ``s_{c,j}(x) = exp(-c x) (c x)^j / j!`` is the Poisson mass of
``j`` at mean ``c x``.  Weights are evaluated in log space using the
saddle-point split of ``log j!`` (Stirling remainder plus deviance term),
which keeps the relative error near machine precision far beyond the range
where the naive product overflows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

# lgamma(n+1) - (n+1/2) log n + n - log sqrt(2 pi) for n = 1..15 (40-digit reference).
_STIRLERR_SMALL = np.array([
    np.nan,
    0.08106146679532725822,
    0.041340695955409294094,
    0.027677925684998339149,
    0.020790672103765093112,
    0.016644691189821192163,
    0.013876128823070747999,
    0.011896709945891770095,
    0.010411265261972096497,
    0.0092554621827127329177,
    0.0083305634333628712565,
    0.007573675487951840795,
    0.0069428401072095298657,
    0.0064089941880042070684,
    0.0059513701127588477356,
    0.005554733551962801371,
])

_S0 = 1.0 / 12
_S1 = 1.0 / 360
_S2 = 1.0 / 1260
_S3 = 1.0 / 1680
_S4 = 1.0 / 1188


def stirling_remainder(n):
    """``log n! - [(n + 1/2) log n - n + log sqrt(2 pi)]`` for integers ``n >= 1``."""
    n = np.asarray(n, dtype=float)
    out = np.empty_like(n)
    small = n <= 15
    out[small] = _STIRLERR_SMALL[n[small].astype(int)]
    big = ~small
    if np.any(big):
        nb = n[big]
        nn = nb * nb
        series = np.where(
            nb > 500, (_S0 - _S1 / nn) / nb,
            np.where(
                nb > 80, (_S0 - (_S1 - _S2 / nn) / nn) / nb,
                np.where(
                    nb > 35, (_S0 - (_S1 - (_S2 - _S3 / nn) / nn) / nn) / nb,
                    (_S0 - (_S1 - (_S2 - (_S3 - _S4 / nn) / nn) / nn) / nn) / nb,
                ),
            ),
        )
        out[big] = series
    return out


def deviance(k, mean):
    """``k log(k/mean) + mean - k`` without cancellation near ``k == mean``."""
    k = np.asarray(k, dtype=float)
    mean = np.broadcast_to(np.asarray(mean, dtype=float), k.shape)
    out = np.empty_like(k)
    diff = k - mean
    near = np.abs(diff) < 0.5 * (k + mean)
    if np.any(near):
        kk, mm, dd = k[near], mean[near], diff[near]
        v = dd / (kk + mm)
        total = dd * v
        term = 2.0 * kk * v
        v2 = v * v
        # |v| < 1/2 so each pass gains at least a factor 4; 40 passes reach eps.
        for i in range(1, 40):
            term = term * v2
            total = total + term / (2 * i + 1)
        out[near] = total
    far = ~near
    if np.any(far):
        kf, mf = k[far], mean[far]
        out[far] = kf * (np.log(kf) - np.log(mf)) + mf - kf
    return out


def _two_product(a: float, b: float):
    """Dekker's exact product: ``a * b == hi + lo`` with ``hi = fl(a * b)``."""
    hi = a * b
    split = 134217729.0  # 2**27 + 1
    t = split * a
    a1 = t - (t - a)
    a2 = a - a1
    t = split * b
    b1 = t - (t - b)
    b2 = b - b1
    lo = ((a1 * b1 - hi) + a1 * b2 + a2 * b1) + a2 * b2
    return hi, lo


def _check_domain(c, x):
    if not c > 0 or not math.isfinite(c):
        raise DomainError(f"basis scale c must be positive and finite, got {c!r}")
    if not x >= 0 or not math.isfinite(x):
        raise DomainError(f"evaluation point x must be nonnegative and finite, got {x!r}")


def log_poisson_weights(c: float, x: float, js) -> np.ndarray:
    """Natural log of ``s_{c,j}(x)`` for an integer array ``js`` (``-inf`` for exact zeros)."""
    _check_domain(c, x)
    js = np.asarray(js)
    if np.any(js < 0):
        raise DomainError("basis index j must be nonnegative")
    lam, lam_lo = _two_product(c, x)
    out = np.empty(js.shape, dtype=float)
    if lam == 0.0:
        out.fill(-np.inf)
        out[js == 0] = 0.0
        return out
    zero = js == 0
    out[zero] = -lam - lam_lo
    pos = ~zero
    if np.any(pos):
        jp = js[pos].astype(float)
        # first-order correction for the rounding of the mean c*x
        dev = deviance(jp, lam) + lam_lo - jp * (lam_lo / lam)
        out[pos] = -stirling_remainder(jp) - dev - _LOG_SQRT_2PI - 0.5 * np.log(jp)
    return out


def poisson_weights(c: float, x: float, js) -> np.ndarray:
    """Vectorised ``s_{c,j}(x)`` over integer indices ``js``."""
    return np.exp(log_poisson_weights(c, x, js))


def poisson_weight(c: float, j: int, x: float) -> float:
    """Single basis value ``exp(-c x) (c x)^j / j!``."""
    if int(j) != j:
        raise DomainError(f"basis index j must be an integer, got {j!r}")
    return float(poisson_weights(c, x, np.array([int(j)]))[0])


@dataclass(frozen=True)
class TruncationWindow:
    j_min: int
    j_max: int
    tail_mass_bound: float

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.j_min, self.j_max + 1)

    def __len__(self):
        return self.j_max - self.j_min + 1


def _tail_bounds(lam, js, logw):
    """Geometric bounds on the Poisson mass strictly left/right of each index.

    For ``k <= lam`` the mass below ``k`` is at most ``p_{k-1} / (1 - (k-1)/lam)``;
    for ``k + 2 > lam`` the mass above ``k`` is at most ``p_{k+1} / (1 - lam/(k+2))``.
    """
    w = np.exp(logw)
    left = np.full(js.shape, np.inf)
    right = np.full(js.shape, np.inf)
    # entry i refers to cutting at js[i]; neighbours come from the shifted arrays
    ks = js[1:]
    with np.errstate(over="ignore"):
        ratio = 1.0 - (ks - 1) / lam
    ok = ratio > 0
    left[1:][ok] = w[:-1][ok] / ratio[ok]
    if js[0] == 0:
        left[0] = 0.0
    ks = js[:-1]
    ratio = 1.0 - lam / (ks + 2)
    ok = ratio > 0
    right[:-1][ok] = w[1:][ok] / ratio[ok]
    return left, right


def truncation_window(c: float, x: float, tol: float) -> TruncationWindow:
    """Smallest index window around the mode whose excluded mass is certified below ``tol``.

    Half of ``tol`` is allotted to each side.  Tail bounds are rigorous
    geometric majorants, so no ``1 - sum`` cancellation is involved.
    """
    _check_domain(c, x)
    if not 0 < tol < 1:
        raise DomainError(f"tol must lie in (0, 1), got {tol!r}")
    lam = c * x
    if lam == 0.0:
        return TruncationWindow(0, 0, 0.0)
    mode = int(math.floor(lam))
    half = tol / 2
    width = int(math.ceil(8.0 * math.sqrt(lam) + 16))
    while True:
        lo = max(0, mode - width)
        hi = mode + width + 1
        js = np.arange(lo, hi + 1)
        logw = log_poisson_weights(c, x, js)
        if np.any(np.isnan(logw)):
            raise DomainError(f"Poisson weights undefined for c={c!r}, x={x!r}")
        left, right = _tail_bounds(lam, js, logw)
        below = js <= mode
        above = js >= mode
        left_ok = below & (left <= half)
        right_ok = above & (right <= half)
        # left bound grows with k below the mode: admissible cuts form a prefix
        if np.any(left_ok) and np.any(right_ok):
            i_min = int(np.nonzero(left_ok)[0].max())
            i_max = int(np.nonzero(right_ok)[0].min())
            return TruncationWindow(int(js[i_min]), int(js[i_max]),
                                    float(left[i_min] + right[i_max]))
        width *= 2


@dataclass(frozen=True)
class UnSequence:
    """Parameter sequence ``u_n``: ``identity`` (n), ``power`` (n**p) or a ``table``."""

    kind: str = "identity"
    power: float = 1.0
    table: Sequence[float] = field(default=())

    def __post_init__(self):
        if self.kind not in ("identity", "power", "table"):
            raise DomainError(f"unknown sequence kind {self.kind!r}")
        if self.kind == "power" and not self.power > 0:
            raise DomainError("power sequence needs p > 0")
        if self.kind == "table":
            vals = list(self.table)
            if not vals or vals[0] <= 0:
                raise DomainError("table sequence must be nonempty and positive")
            if any(b <= a for a, b in zip(vals, vals[1:])):
                raise DomainError("table sequence must be strictly increasing")
            object.__setattr__(self, "table", tuple(float(v) for v in vals))

    def __call__(self, n: int) -> float:
        if n < 1:
            raise DomainError(f"sequence index starts at 1, got {n}")
        if self.kind == "identity":
            return float(n)
        if self.kind == "power":
            return float(n) ** self.power
        if n > len(self.table):
            raise DomainError(f"table sequence has only {len(self.table)} entries")
        return self.table[n - 1]

    def values(self, ns) -> list:
        return [self(int(n)) for n in ns]

    @classmethod
    def parse(cls, text: str) -> "UnSequence":
        """Parse ``identity``, ``power:<p>`` or ``table:<path>`` (one value per line)."""
        if text == "identity":
            return cls()
        kind, _, arg = text.partition(":")
        if kind == "power" and arg:
            return cls("power", power=float(arg))
        if kind == "table" and arg:
            with open(arg, encoding="utf-8") as fh:
                vals = [float(tok) for line in fh for tok in line.replace(",", " ").split()]
            return cls("table", table=vals)
        raise DomainError(f"cannot parse sequence {text!r}")

    def describe(self) -> str:
        if self.kind == "identity":
            return "identity"
        if self.kind == "power":
            return f"power:{self.power:g}"
        return f"table[{len(self.table)}]"
