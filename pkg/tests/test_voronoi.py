import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from cuspsums.bessel import bessel_j, bessel_j_quadrature, integral_y_bessel
from cuspsums.coeffs import synthetic_table
from cuspsums.sums import Twist
from cuspsums.voronoi import (
    VoronoiParams,
    constant_term,
    full_voronoi_check,
    half_integer_samples,
    truncation_error_scan,
    voronoi_lhs,
    voronoi_main_term,
    voronoi_main_terms,
)


def test_bessel_trivial_values():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(5, 0.0) == 0.0
    x = 1e-3
    lead = (x / 2) ** 11 / math.factorial(11)
    assert bessel_j(11, x) == pytest.approx(lead, rel=1e-6)


def test_bessel_against_quadrature_oracle():
    for nu, x in [(11, 50.0), (0, 3.7), (13, 20.0), (20, 35.0), (3, 900.0)]:
        assert bessel_j(nu, x) == pytest.approx(bessel_j_quadrature(nu, x), abs=1e-13)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 20), st.floats(0.05, 1e6))
def test_bessel_against_scipy(nu, x):
    ref = special.jv(nu, x)
    got = bessel_j(nu, x)
    # near zeros of J compare absolutely on the scale of the envelope
    scale = max(abs(ref), 1e-3 * min(1.0, (2 / (math.pi * x)) ** 0.5))
    assert abs(got - ref) <= 1e-10 * scale + 1e-300


def test_bessel_tiny_values_against_mpmath():
    mpmath.mp.dps = 40
    for nu, x in [(20, 0.1), (13, 0.5), (20, 5.0), (17, 11.9)]:
        ref = float(mpmath.besselj(nu, x))
        assert bessel_j(nu, x) == pytest.approx(ref, rel=1e-12)


def test_bessel_envelope_checked():
    with pytest.raises(ValueError):
        bessel_j(21, 1.0)
    with pytest.raises(ValueError):
        bessel_j(3, 2e6)
    with pytest.raises(ValueError):
        bessel_j(3, -1.0)


@pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
@pytest.mark.parametrize("nu", [0, 11, 15, 17])
def test_integral_y_bessel(nu):
    for lo, hi in [(0.5, 40.0), (20.0, 400.0), (300.0, 3000.0)]:
        ref, _ = integrate.quad(lambda y: y * special.jv(nu, y), lo, hi, limit=2000, epsabs=1e-12, epsrel=1e-12)
        got = integral_y_bessel(nu, lo, hi)[0]
        assert got == pytest.approx(ref, rel=1e-9, abs=1e-9)


def test_params_validation():
    t = Twist.make(1, 3)
    VoronoiParams(100.0, 10.0, t)
    with pytest.raises(ValueError):
        VoronoiParams(100.0, 200.0, t)
    with pytest.raises(ValueError):
        VoronoiParams(2.0, 1.0, t)


def test_main_term_single_frequency():
    table = synthetic_table({1: 1}, 100)
    twist = Twist.make(0, 1)
    for x in (10.5, 37.25, 99.0):
        expect = x**0.25 / (math.pi * math.sqrt(2)) * math.cos(4 * math.pi * math.sqrt(x) - math.pi / 4)
        assert voronoi_main_term(table, VoronoiParams(x, 1, twist)).real == pytest.approx(expect, abs=1e-14)
    zero = synthetic_table({}, 100)
    assert voronoi_main_term(zero, VoronoiParams(50.0, 10, twist)) == 0


def test_main_term_vectorized_matches_scalar(delta):
    twist = Twist.make(2, 5)
    xs = [1000.5, 1234.5, 1999.5]
    vec = voronoi_main_terms(delta, twist, xs, 300)
    for x, v in zip(xs, vec):
        assert voronoi_main_term(delta, VoronoiParams(x, 300, twist)) == pytest.approx(v, abs=1e-12)


def test_main_term_twist_reduction(delta):
    for h, k in [(1, 3), (2, 7)]:
        a = voronoi_main_term(delta, VoronoiParams(5000.5, 200, Twist.make(h, k)))
        b = voronoi_main_term(delta, VoronoiParams(5000.5, 200, Twist.make(h + k, k)))
        assert a == b


def test_truncation_main_term_tracks_sum(delta, delta_cache):
    twist = Twist.make(0, 1)
    x = 10**4 + 0.5
    err = abs(delta_cache(0, 1).S[10**4] - voronoi_main_term(delta, VoronoiParams(x, 1000, twist)))
    # k x^(1/2) N^(-1/2) = 3.16; the constant term alone is about 0.73
    assert err < math.sqrt(x) / math.sqrt(1000)


def test_scan_flags_and_errors(delta):
    twist = Twist.make(0, 1)
    xs = half_integer_samples(2000, 3000, 4)
    scan = truncation_error_scan(delta, twist, xs, [100])
    assert scan.slope is None and "slope_undefined" in scan.flags
    with pytest.raises(ValueError):
        truncation_error_scan(delta, twist, [], [100])
    with pytest.raises(ValueError):
        truncation_error_scan(delta, twist, xs, [])


def test_scan_single_frequency_error_is_tail():
    table = synthetic_table({1: 1}, 3000)
    twist = Twist.make(0, 1)
    xs = half_integer_samples(1000, 2000, 8)
    scan = truncation_error_scan(table, twist, xs, [1, 10, 100])
    # the main term already contains the only frequency, so N changes nothing
    assert scan.max_errors[0] == pytest.approx(scan.max_errors[1]) == pytest.approx(scan.max_errors[2])


def test_scan_workers_deterministic(delta):
    twist = Twist.make(1, 3)
    xs = half_integer_samples(10**4, 2 * 10**4, 12)
    a = truncation_error_scan(delta, twist, xs, [100, 1000], workers=1)
    b = truncation_error_scan(delta, twist, xs, [100, 1000], workers=3)
    assert a.max_errors == b.max_errors


def test_scan_monotone_in_trend(delta, delta_cache):
    xs = half_integer_samples(10**4, 2 * 10**4, 32)
    for k in (1, 2, 3, 5):
        scan = truncation_error_scan(delta, Twist.make(1, k), xs, [250, 500, 1000, 2000, 4000], cache=delta_cache(1, k))
        e = scan.max_errors
        assert all(b <= 1.1 * a for a, b in zip(e, e[1:]))


def test_constant_term_is_mean_of_A(delta, delta_cache):
    # the mean of A over a long range is the regularized constant term
    for k in (1, 2):
        c = delta_cache(1, k)
        mean = np.mean(c.S[10**5 : 2 * 10**5])
        assert abs(mean - constant_term(delta, Twist.make(1, k))) < 0.05


def test_lhs_halving():
    table = synthetic_table({3: 1, 4: 1, 5: 1}, 10, weight=12)
    twist = Twist.make(0, 1)
    a3, a4, a5 = table.a(3), table.a(4), table.a(5)
    assert voronoi_lhs(table, twist, 3, 5) == pytest.approx(a3 / 2 + a4 + a5 / 2)
    assert voronoi_lhs(table, twist, 3.5, 3.9) == 0


def test_full_voronoi_single_coefficient():
    table = synthetic_table({1: 1}, 10)
    twist = Twist.make(0, 1)
    res = full_voronoi_check(table, twist, 2.5, 7.5, 1)
    assert res.lhs == 0
    nu = 11
    ref, _ = integrate.quad(lambda x: special.jv(nu, 4 * math.pi * math.sqrt(x)), 2.5, 7.5, limit=500)
    assert res.rhs.real == pytest.approx(2 * math.pi * ref, rel=1e-8)
