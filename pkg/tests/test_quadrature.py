import math

import numpy as np
import pytest
from scipy import integrate, special

from smdlab.quadrature import gamma_moment, gauss_laguerre


@pytest.mark.parametrize("alpha", [0.0, 1.0, 7.0, 200.0, 3000.0])
@pytest.mark.parametrize("order", [4, 16, 48])
def test_rule_exact_for_low_degree(alpha, order):
    t, w = gauss_laguerre(order, alpha)
    assert w.sum() == pytest.approx(1.0, rel=1e-14)
    scale = alpha + 1.0
    for k in range(0, 2 * order):
        # normalized moments of the Gamma(alpha + 1) law, in units of its mean
        want = math.prod((alpha + i) / scale for i in range(1, k + 1))
        assert np.dot(w, (t / scale) ** k) == pytest.approx(want, rel=1e-12)


def test_matches_scipy_where_finite():
    t, w = gauss_laguerre(12, 3.0)
    st, sw = special.roots_genlaguerre(12, 3.0)
    np.testing.assert_allclose(t, st, rtol=1e-12)
    np.testing.assert_allclose(w, sw / math.gamma(4.0), rtol=1e-10)


def test_smooth_integrand_against_adaptive_quad():
    alpha = 5.0
    t, w = gauss_laguerre(48, alpha)
    got = np.dot(w, np.cos(t / 3))
    ref, _ = integrate.quad(lambda s: s**alpha * math.exp(-s) * math.cos(s / 3), 0, np.inf)
    assert got == pytest.approx(ref / math.gamma(alpha + 1), rel=1e-12)


def test_rule_is_cached_and_read_only():
    a = gauss_laguerre(16, 2.0)
    assert gauss_laguerre(16, 2.0) is a
    with pytest.raises(ValueError):
        a[0][0] = 1.0


def test_gamma_moment():
    assert gamma_moment(0.0, 3) == 6.0
    assert gamma_moment(2.0, 2) == 12.0
