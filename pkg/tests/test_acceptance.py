"""Acceptance criteria, each at its stated tolerance.

Every test appends one "ACCEPTANCE n: PASS|FAIL ..." line, printed together
in the terminal summary, and then asserts.
"""

import math
import sys
import time
from fractions import Fraction as F

import mpmath
import numpy as np
import pytest

import conftest
from cuspsums.bessel import bessel_j, bessel_j_quadrature
from cuspsums.coeffs import build_cusp_form, build_eta3_series, deligne_check, divisor_tables, hecke_check, schoolbook_multiply
from cuspsums.exppairs import apply_process_word, psi_threshold, theorem3_phi_psi
from cuspsums.moments import (
    constant_C,
    constant_CF,
    exact_power_moment,
    large_value_count,
    max_short_mean_square,
    omega_scan,
    second_moment_ratio,
    short_mean_square,
)
from cuspsums.quadruples import enumerate_equal_sum_quadruples, equal_sum_identity, min_gap_ratio
from cuspsums.sums import Twist
from cuspsums.voronoi import full_voronoi_check, half_integer_samples, truncation_error_scan


def record(n: int, ok: bool, detail: str) -> None:
    conftest.ACCEPTANCE_LINES.append(f"ACCEPTANCE {n}: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, detail


def test_01_deligne_exact():
    t0 = time.perf_counter()
    table = build_cusp_form("delta", 10**5)
    ok = deligne_check(table, divisor_tables(10**5))
    secs = time.perf_counter() - t0
    record(1, ok and secs <= 60, f"|a(n)| <= d(n) for n <= 1e5: {ok}, {secs:.1f} s")


def test_02_coefficient_exactness():
    n = 2000
    eta3 = build_eta3_series(n - 1)
    power = [1] + [0] * (n - 1)
    for _ in range(8):
        power = schoolbook_multiply(power, eta3, n - 1)
    table = build_cusp_form("delta", 10**5)
    match = list(table.exact[1 : n + 1]) == power
    hecke = hecke_check(table)
    record(2, match and hecke, f"schoolbook match n <= 2000: {match}; Hecke relations n <= 1e5: {hecke}")


def test_03_truncation_slope(delta, delta_cache):
    t0 = time.perf_counter()
    xs = half_integer_samples(10**4, 2 * 10**4, 32)
    slopes = {}
    for k in (1, 2, 3, 5):
        scan = truncation_error_scan(delta, Twist.make(1, k), xs, [1e2, 1e3, 1e4], cache=delta_cache(1, k))
        slopes[k] = scan.slope
    secs = time.perf_counter() - t0
    ok = all(-0.65 <= s <= -0.35 for s in slopes.values()) and secs <= 300
    detail = ", ".join(f"k={k}: {s:.3f}" for k, s in slopes.items())
    record(3, ok, f"log-log slope in [-0.65, -0.35]: {detail} ({secs:.1f} s)")


def test_04_second_moment_constant(delta, delta_cache):
    C = constant_C(delta, 10**5).value
    rel = {k: second_moment_ratio(delta_cache(1, k), 1e5) / C - 1 for k in (1, 2, 3)}
    ok = all(abs(r) <= 0.10 for r in rel.values())
    detail = ", ".join(f"k={k}: {r:+.3f}" for k, r in rel.items())
    record(4, ok, f"ratio vs C={C:.6f} within 10%: {detail}")


def test_05_fourth_moment_constant(delta, delta_cache):
    quads = enumerate_equal_sum_quadruples(4000)
    cf = constant_CF(delta, Twist.make(1, 1), 4000, quads)
    c = delta_cache(1, 1)
    ratio = {M: exact_power_moment(c, M, "abs_power", 4).raw / M**2 for M in (5e4, 1e5)}
    rel = ratio[1e5] / cf.value - 1
    trend = ratio[5e4] / ratio[1e5] - 1
    ok = abs(rel) <= 0.25 and abs(trend) <= 0.15
    record(5, ok, f"C_F={cf.value:.6f}, ratio {ratio[1e5]:.6f} ({rel:+.3f}), M 5e4 vs 1e5 {trend:+.3f}")


def test_06_cubic_moment_slope(delta_cache):
    c = delta_cache(1, 1)
    Ms = [2**e for e in range(14, 18)]
    ys = [math.log(exact_power_moment(c, M, "abs_power", 3).raw / M**1.75) for M in Ms]
    slope = float(np.polyfit(np.log(Ms), ys, 1)[0])
    record(6, abs(slope) <= 0.05, f"slope {slope:+.4f}, tolerance 0.05")


def test_07_short_mean_square(delta_cache):
    c = delta_cache(1, 1)
    ratios = {D: short_mean_square(c, 1e5, 1e5, D).ratio for D in (16, 64, 256)}
    ok = all(0.1 <= r <= 10 for r in ratios.values())
    record(7, ok, "ratio in [0.1, 10]: " + ", ".join(f"D={D}: {r:.4f}" for D, r in ratios.items()))


def test_08_max_short_mean_square(delta_cache):
    t0 = time.perf_counter()
    c = delta_cache(1, 1)
    M = 2**16
    ratios = {D: max_short_mean_square(c, M, D).ratio for D in (64, 256)}
    secs = time.perf_counter() - t0
    lo, hi = min(ratios.values()), max(ratios.values())
    change = (hi - lo) / hi
    ok = change <= 0.30 and secs <= 600
    detail = ", ".join(f"D={D}: {r:.5f}" for D, r in ratios.items())
    record(8, ok, f"{detail}; variation {change:.3f}, tolerance 0.30")


def brute_force_members(N: int) -> set:
    """All (a, b, c, d) in [1, N]^4 by comparing every pair of pairs."""
    r = np.sqrt(np.arange(1, N + 1, dtype=float))
    right = (r[:, None] + r[None, :]).ravel()
    found = set()
    for a in range(N):
        left = r[a] + r
        near = np.abs(left[:, None] - right[None, :]) < 1e-9
        for b, j in zip(*np.nonzero(near)):
            c, d = divmod(int(j), N)
            quad = (a + 1, int(b) + 1, c + 1, d + 1)
            if equal_sum_identity(*quad):
                found.add(quad)
    return found


def test_09_quadruple_enumeration():
    results = []
    for N in (50, 200):
        q = enumerate_equal_sum_quadruples(N)
        members = set(q.members())
        brute = brute_force_members(N)
        results.append((N, q.count(), len(brute), members == brute))
    q = enumerate_equal_sum_quadruples(50)
    present = q.contains(1, 9, 4, 4) and q.contains(2, 32, 8, 18)
    ok = present and all(cnt == bc and same for _, cnt, bc, same in results)
    detail = "; ".join(f"N={N}: {cnt} vs {bc}, sets equal {same}" for N, cnt, bc, same in results)
    record(9, ok, f"{detail}; known members present {present}")


def test_10_spacing_floor():
    parts = []
    ok = True
    for pattern in ("two_two", "three_one"):
        g100 = min_gap_ratio(100, pattern)
        g50 = min_gap_ratio(50, pattern)
        change = abs(g100.min_ratio - g50.min_ratio) / g50.min_ratio
        ok &= g100.min_ratio >= 0.1 and change <= 0.5
        parts.append(f"{pattern}: {g100.min_ratio:.5f} at {g100.argmin_ratio}, change 50->100 {change:.3f}")
    record(10, ok, "min ratio >= 0.1; " + "; ".join(parts))


def test_11_exponent_pairs():
    t0 = time.perf_counter()
    pair = apply_process_word("BABAAB")
    out = theorem3_phi_psi(pair, F(2, 3), F(1, 3), 3)
    checks = [
        (pair.p, pair.q) == (F(2, 9), F(11, 18)),
        psi_threshold(pair) == 11,
        out["Phi"].exponents()[:2] == (F(8, 3), F(4, 3)),
        out["Psi"].exponents()[:2] == (F(3, 2), F(7, 4)),
    ]
    secs = time.perf_counter() - t0
    record(11, all(checks) and secs <= 1, f"pair {pair}, threshold {psi_threshold(pair)}, checks {checks}, {secs * 1e3:.1f} ms")


def test_12_large_values(delta_cache):
    c = delta_cache(1, 1)
    pair = apply_process_word("BABAAB")
    M = 1e5
    parts = []
    ok = True
    for V in (M**0.25, 2 * M**0.25):
        rep = large_value_count(c, M, V, pair, 0.01)
        ok &= rep.R <= rep.bound_value
        parts.append(f"V={V:.2f}: R={rep.R}, bound {rep.bound_value:.4g}")
    record(12, ok, "; ".join(parts))


def test_13_oscillation(delta_cache):
    t0 = time.perf_counter()
    c = delta_cache(1, 1)
    M = 1e5
    rep = omega_scan(c, M, 0.01, 100, (-math.pi / 2 - 0.1, math.pi + 0.1))
    secs = time.perf_counter() - t0
    min_len = math.sqrt(M) / math.log(M) ** 2
    ok = rep.proportion >= 0.01 and rep.longest >= min_len and secs <= 600
    record(
        13,
        ok,
        f"proportion {rep.proportion:.4f}, {len(rep.intervals)} intervals, longest {rep.longest:.0f} "
        f"(need {min_len:.2f}), flags {rep.flags}",
    )


def precise_quadrature(nu: int, x: float) -> float:
    """Trapezoid rule for the Bessel integral, in 40 digits where J can be tiny."""
    if x >= 50:
        return bessel_j_quadrature(nu, x)
    with mpmath.workdps(40):
        n = 2 * int(x + nu) + 64
        X = mpmath.mpf(x)
        s = mpmath.fsum(mpmath.cos(nu * t - X * mpmath.sin(t)) for t in (2 * mpmath.pi * i / n for i in range(n)))
        return float(s / n)


def test_14_bessel_accuracy():
    xs = np.logspace(-1, 4, 200)
    worst_rel = 0.0
    worst_rec = 0.0
    for nu in range(14):
        for x in xs:
            j = bessel_j(nu, x)
            ref = precise_quadrature(nu, x)
            worst_rel = max(worst_rel, abs(j - ref) / abs(ref))
            if nu >= 1:
                lo, hi, mid = bessel_j(nu - 1, x), bessel_j(nu + 1, x), 2 * nu / x * j
                worst_rec = max(worst_rec, abs(lo + hi - mid) / max(abs(lo), abs(hi), abs(mid)))
    ok = worst_rel <= 1e-8 and worst_rec <= 1e-7
    record(14, ok, f"max relative error {worst_rel:.2e}, recurrence residual {worst_rec:.2e}")


def test_15_full_voronoi(delta):
    res = full_voronoi_check(delta, Twist.make(0, 1), 10.5, 50.5, 10**5)
    record(15, res.relative_gap <= 0.05, f"lhs {complex(res.lhs).real:.6f}, rhs {res.rhs.real:.6f}, relative gap {res.relative_gap:.2e}")


PLUSPLUS_FLOOR = 0.005


def test_16_holder_chain(delta_cache):
    parts = []
    ok = True
    for k in (1, 2):
        c = delta_cache(1, k)
        m2, m3, m4 = (exact_power_moment(c, 1e5, "abs_power", A).raw for A in (2, 3, 4))
        holder = m3**2 <= m2 * m4 * (1 + 1e-9)
        pp = exact_power_moment(c, 1e5, "plusplus_square").ratio
        ok &= holder and pp >= PLUSPLUS_FLOOR
        parts.append(f"k={k}: Holder {holder}, ++ ratio {pp:.4f}")
    record(16, ok, f"floor {PLUSPLUS_FLOOR}; " + "; ".join(parts))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
