"""Generalized Gauss-Laguerre rules with probability-normalised weights.

The rule integrates against the Gamma(alpha + 1, 1) density
``s**alpha exp(-s) / Gamma(alpha + 1)``, so weights sum to one and no
``Gamma(alpha + 1)`` factor ever overflows (unlike ``roots_genlaguerre``
for large ``alpha``).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal


@lru_cache(maxsize=16384)
def gauss_laguerre(order: int, alpha: float):
    """Nodes and weights (summing to 1) for the weight ``s**alpha e**-s`` on ``[0, inf)``.

    Golub-Welsch on the symmetric Jacobi matrix of the generalized Laguerre
    recurrence supplies starting nodes.  Newton steps on the orthonormal
    polynomial then polish them, and the weights come from the Christoffel
    sums ``1 / sum_k p_k(t)**2``, which keep relative accuracy that the
    eigenvector components lose.  The returned arrays are read-only and cached.
    """
    if order < 1:
        raise ValueError(f"quadrature order must be positive, got {order}")
    k = np.arange(order, dtype=float)
    diag = 2.0 * k + alpha + 1.0
    off = np.sqrt(k[1:] * (k[1:] + alpha))
    nodes = eigh_tridiagonal(diag, off, eigvals_only=True)
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(2):
            p, dp, _ = _orthonormal(nodes, diag, off, order)
            step = p / dp
            nodes = np.where(np.isfinite(step), nodes - step, nodes)
        _, _, sq = _orthonormal(nodes, diag, off, order)
        weights = np.where(np.isfinite(sq), 1.0 / sq, 0.0)
    weights /= weights.sum()
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _orthonormal(t, diag, off, order):
    """``p_n(t)``, ``p_n'(t)`` and ``sum_{k<n} p_k(t)**2`` by the three-term recurrence."""
    # p_{-1} = 0, p_0 = 1 for the probability-normalised weight
    prev, cur = np.zeros_like(t), np.ones_like(t)
    dprev, dcur = np.zeros_like(t), np.zeros_like(t)
    sq = np.ones_like(t)
    for k in range(order):
        b_prev = off[k - 1] if k >= 1 else 0.0
        # b_n for the last step: sqrt(n (n + alpha)), recovered from diag
        b_next = off[k] if k + 1 < order else np.sqrt(order * (diag[0] - 1.0 + order))
        nxt = ((t - diag[k]) * cur - b_prev * prev) / b_next
        dnxt = (cur + (t - diag[k]) * dcur - b_prev * dprev) / b_next
        prev, cur, dprev, dcur = cur, nxt, dcur, dnxt
        if k + 1 < order:
            sq = sq + cur * cur
    return cur, dcur, sq


def gamma_moment(alpha: float, k: int) -> float:
    """``E[S**k]`` for ``S ~ Gamma(alpha + 1, 1)``: the rising product ``(alpha+1)...(alpha+k)``."""
    out = 1.0
    for i in range(1, k + 1):
        out *= alpha + i
    return out
