import cmath
import math

import pytest

from qrun.asymptotics import (
    CONTOUR_HEIGHT,
    DEFAULT_PREFACTOR,
    AsymptoticEstimate,
    bigint_log,
    calibrate_contour_prefactor,
    eta_asymptote,
    gbar_difference_asymptote,
    hk_asymptote,
    hk_contour,
    hk_numeric,
    hk_series_value,
    ingham_asymptote,
    ingham_parameters,
    integrand_exponent,
    leading_exponent,
    p2_asymptote,
    pbar_asymptote,
    pk_log_asymptote,
    saddle_data,
    taylor_exponent,
)
from qrun.specfun import pochhammer_numeric


@pytest.mark.parametrize("k", [1, 2, 3])
def test_saddle_point(k):
    sd = saddle_data(k)
    K = k * (k + 1)
    assert sd.w == 1j * CONTOUR_HEIGHT
    assert abs(leading_exponent(k, sd.w) - math.pi**2 / (12 * K)) < 1e-14
    # derivative of -2 pi^2 u^2 + Li2(e^(2 pi i u)) is -4 pi^2 u - 2 pi i log(1 - e^(2 pi i u))
    d1 = -4 * math.pi**2 * sd.w - 2j * math.pi * cmath.log(1 - cmath.exp(2j * math.pi * sd.w))
    assert abs(d1) < 1e-13
    h = 1e-4
    d2 = (leading_exponent(k, sd.w + h) - 2 * leading_exponent(k, sd.w) + leading_exponent(k, sd.w - h)) / h**2
    assert abs(d2 - sd.f2_w) < 1e-5


def test_taylor_model_error_shrinks_like_sqrt_eps():
    k, sd = 1, saddle_data(1)
    for z in (0.5, 1.0, 0.7j, 0.6 + 0.6j):
        errs = []
        for eps in (0.04, 0.01, 0.0025):
            u = sd.w + math.sqrt(eps) * z
            errs.append(abs(integrand_exponent(k, eps, u) - taylor_exponent(k, eps, z)))
        # each 4x reduction of eps should roughly halve the error
        for a, b in zip(errs, errs[1:]):
            assert 1.4 < a / b < 2.8


def test_hk_numeric_equals_series_value():
    for k, eps in ((1, 0.3), (2, 0.5), (3, 0.4)):
        assert hk_numeric(k, eps) == pytest.approx(hk_series_value(k, eps), rel=1e-12)


def test_hk_numeric_rejects_bad_eps():
    with pytest.raises(ValueError):
        hk_numeric(1, 0.0)


def test_contour_calibration_selects_default():
    cal = calibrate_contour_prefactor(1, 0.3)
    assert cal["selected"] == DEFAULT_PREFACTOR
    assert min(cal["relative_errors"].values()) < 1e-10


@pytest.mark.parametrize("k,eps", [(1, 0.4), (2, 0.3)])
def test_contour_matches_series(k, eps):
    assert hk_contour(k, eps) == pytest.approx(hk_numeric(k, eps), rel=1e-9)


def test_contour_height_is_free():
    # moving the line within the strip of analyticity leaves the integral unchanged
    a = hk_contour(1, 0.5)
    b = hk_contour(1, 0.5, c=0.6 * CONTOUR_HEIGHT)
    assert a == pytest.approx(b, rel=1e-9)
    with pytest.raises(ValueError):
        hk_contour(1, 0.5, c=0.0)


def test_hk_asymptote_value():
    # exponent pi^2 / (12 k (k+1) eps) is 1/2 here and 1 at half the eps
    assert hk_asymptote(1, math.pi**2 / 12).value == pytest.approx(math.sqrt(2 * math.e), rel=1e-15)
    assert hk_asymptote(1, math.pi**2 / 24).value == pytest.approx(math.sqrt(2) * math.e, rel=1e-15)


def test_eta_asymptote_within_one_percent():
    eps = 0.1
    direct = pochhammer_numeric(math.exp(-eps), math.exp(-eps)).real
    assert direct / eta_asymptote(eps).value == pytest.approx(1, abs=0.01)


@pytest.mark.parametrize("k", [1, 2, 5])
@pytest.mark.parametrize("n", [1, 100, 10**6])
def test_ingham_reproduces_pbar(k, n):
    p = ingham_parameters(k)
    a = ingham_asymptote(p["lam"], p["alpha"], p["A"], n).log_value
    assert a == pytest.approx(pbar_asymptote(k, n).log_value, rel=1e-14)


@pytest.mark.parametrize("k", [1, 2])
def test_gbar_difference_composition(k):
    # eps * H_k / (q;q)_inf
    for eps in (0.3, 0.01):
        composed = math.log(eps) + hk_asymptote(k, eps).log_value - eta_asymptote(eps).log_value
        assert composed == pytest.approx(gbar_difference_asymptote(k, eps).log_value, abs=1e-12)


def test_log_level_forms():
    assert pk_log_asymptote(2, 10**4) == pytest.approx(2 * math.pi / 3 * 100)
    # the k -> infinity exponent tends to the partition exponent
    assert pk_log_asymptote(1000, 10**4) == pytest.approx(math.pi * math.sqrt(2 * 10**4 / 3), rel=1e-5)
    with pytest.raises(ValueError):
        pk_log_asymptote(1, 10)
    assert p2_asymptote(1).log_value == pytest.approx(2 * math.pi / 3 - math.log(4 * math.sqrt(3)))


def test_bigint_log():
    for n in (1, 2, 10**20, 3**1000, 7**5000 + 1):
        assert bigint_log(n) == pytest.approx(float(__import__("mpmath").log(n)), rel=1e-15)
    with pytest.raises(ValueError):
        bigint_log(0)


def test_estimate_overflow_guard():
    est = AsymptoticEstimate(1.0, 800.0, "x")
    with pytest.raises(OverflowError):
        est.value
    with pytest.raises(ValueError):
        AsymptoticEstimate(1.0, math.inf, "x")
