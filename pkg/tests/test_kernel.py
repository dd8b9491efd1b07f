import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from smdlab.errors import DomainError
from smdlab.kernel import (UnSequence, log_poisson_weights, poisson_weight, poisson_weights,
                           truncation_window)


def reference_weight(c, j, x):
    with mp.workdps(60):
        lam = mp.mpf(c) * mp.mpf(x)
        return mp.e ** (-lam + j * mp.log(lam) - mp.loggamma(j + 1))


def test_weight_examples():
    assert poisson_weight(3.7, 0, 0.0) == 1.0
    assert poisson_weight(3.7, 3, 0.0) == 0.0
    assert poisson_weight(1.0, 1, 1.0) == pytest.approx(math.exp(-1), rel=1e-15)


@pytest.mark.parametrize("c, x", [(0.0, 1.0), (-1.0, 1.0), (1.0, -0.5), (float("nan"), 1.0)])
def test_weight_domain_errors(c, x):
    with pytest.raises(DomainError):
        poisson_weight(c, 2, x)


def test_weight_rejects_negative_index():
    with pytest.raises(DomainError):
        poisson_weights(1.0, 1.0, np.array([-1, 2]))


def _random_cases(seed, count):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        lam = 10 ** rng.uniform(-3, 6)
        c = 10 ** rng.uniform(0, 3)
        j = int(max(0, rng.normal(lam, 8 * math.sqrt(lam) + 5)))
        if rng.random() < 0.1:
            j = int(10 ** rng.uniform(0, 7))
        yield c, lam / c, j


def test_relative_accuracy_against_mpmath():
    worst = 0.0
    for c, x, j in _random_cases(7, 1500):
        ref = reference_weight(c, j, x)
        if ref < mp.mpf("1e-50"):
            continue
        worst = max(worst, float(abs((poisson_weight(c, j, x) - ref) / ref)))
    assert worst <= 1e-13


def test_deep_tail_error_scales_with_log_weight():
    # exp(y) inherits the absolute error of y, so far-tail weights lose digits
    for c, x, j in _random_cases(11, 1500):
        ref = reference_weight(c, j, x)
        if ref < mp.mpf("1e-300"):
            continue
        rel = float(abs((poisson_weight(c, j, x) - ref) / ref))
        assert rel <= 1e-14 + 2e-15 * abs(float(mp.log(ref)))


def test_large_scale_does_not_overflow():
    # naive (c x)**j / j! overflows here
    w = poisson_weight(300.0, 1200, 4.0)
    assert w == pytest.approx(float(reference_weight(300.0, 1200, 4.0)), rel=1e-13)


def test_log_space_matches_naive_form():
    for c in (0.5, 3.0, 10.0):
        for x in (0.1, 1.0, 3.0):
            if c * x > 30:
                continue
            for j in range(51):
                naive = math.exp(-c * x) * (c * x) ** j / math.factorial(j)
                if naive > 1e-300:
                    assert poisson_weight(c, j, x) == pytest.approx(naive, rel=1e-10)


@pytest.mark.parametrize("c, x", [(1.0, 0.3), (10.0, 2.5), (100.0, 1.0), (300.0, 4.0), (7.0, 1 / 7)])
def test_monotone_around_mode(c, x):
    lam = c * x
    js = np.arange(0, int(lam + 20 * math.sqrt(lam) + 30))
    w = poisson_weights(c, x, js)
    up = js <= math.floor(lam)
    down = js >= math.ceil(lam)
    # exact ties (integer c*x) may differ by rounding only
    assert np.all(np.diff(w[up]) >= -1e-15 * w[up][1:])
    assert np.all(np.diff(w[down]) <= 1e-15 * w[down][:-1])


def test_window_examples():
    w = truncation_window(10.0, 0.0, 1e-12)
    assert (w.j_min, w.j_max, w.tail_mass_bound) == (0, 0, 0.0)
    w = truncation_window(100.0, 1.0, 1e-12)
    assert w.j_min <= 100 <= w.j_max
    # brute-force complement up to j = 2000
    js = np.arange(0, 2001)
    outside = (js < w.j_min) | (js > w.j_max)
    excluded = math.fsum(poisson_weights(100.0, 1.0, js[outside]))
    assert excluded < 1e-12
    assert excluded <= w.tail_mass_bound


@pytest.mark.parametrize("tol", [0.0, 1.0, -1e-3])
def test_window_tolerance_domain(tol):
    with pytest.raises(DomainError):
        truncation_window(1.0, 1.0, tol)


@settings(max_examples=60, deadline=None)
@given(c=st.floats(0.05, 500), x=st.floats(0.0, 5.0), tol_exp=st.integers(2, 15))
def test_window_invariants(c, x, tol_exp):
    tol = 10.0**-tol_exp
    w = truncation_window(c, x, tol)
    assert w.tail_mass_bound <= tol
    lam = c * x
    if lam > 0:
        assert w.j_min <= math.floor(lam) <= w.j_max
    hi = int(lam + 40 * math.sqrt(lam) + 200)
    js = np.arange(0, hi)
    excluded = math.fsum(poisson_weights(c, x, js[(js < w.j_min) | (js > w.j_max)]))
    assert excluded <= w.tail_mass_bound * (1 + 1e-9) + 1e-300


@pytest.mark.parametrize("c", [0.3, 1.0, 10.0, 100.0, 1000.0])
@pytest.mark.parametrize("x", [0.0, 0.01, 0.5, 1.0, 4.0])
def test_normalization(c, x):
    w = truncation_window(c, x, 1e-13)
    total = math.fsum(poisson_weights(c, x, np.arange(0, w.j_max + 1)))
    assert 1 - 1e-12 <= total <= 1 + 1e-12


def test_log_weights_zero_point():
    out = log_poisson_weights(2.0, 0.0, np.array([0, 1, 5]))
    assert out[0] == 0.0 and np.all(np.isneginf(out[1:]))


def test_sequences():
    assert UnSequence()(1) == 1.0
    assert UnSequence().values([1, 2, 3]) == [1.0, 2.0, 3.0]
    p = UnSequence("power", power=1.5)
    assert p(4) == pytest.approx(8.0)
    vals = p.values(range(1, 20))
    assert all(b > a for a, b in zip(vals, vals[1:]))
    t = UnSequence("table", table=[1, 2, 5])
    assert t(3) == 5.0
    with pytest.raises(DomainError):
        t(4)
    with pytest.raises(DomainError):
        UnSequence("table", table=[1, 3, 2])
    with pytest.raises(DomainError):
        UnSequence("power", power=0)
    with pytest.raises(DomainError):
        UnSequence()(0)


def test_sequence_parse(tmp_path):
    assert UnSequence.parse("identity") == UnSequence()
    assert UnSequence.parse("power:2").power == 2.0
    path = tmp_path / "u.txt"
    path.write_text("1\n2.5\n7\n")
    seq = UnSequence.parse(f"table:{path}")
    assert seq.values([1, 2, 3]) == [1.0, 2.5, 7.0]
    with pytest.raises(DomainError):
        UnSequence.parse("fibonacci")


@pytest.mark.parametrize("x", [5e-324, 1e-310, 1e-200, 1e-20])
def test_tiny_points(x):
    # c*x may be subnormal; weights stay finite and the window stays tiny
    w = truncation_window(200.0, x, 1e-20)
    assert w.j_min == 0 and w.j_max <= 1
    assert poisson_weight(200.0, 0, x) == pytest.approx(math.exp(-200.0 * x), rel=1e-15)
    assert poisson_weight(200.0, 1, x) == pytest.approx(200.0 * x, rel=1e-12)
