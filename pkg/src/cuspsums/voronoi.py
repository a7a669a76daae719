"""Truncated and full Voronoi-type formulas for twisted coefficient sums."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bessel import bessel_j, integral_y_bessel
from .coeffs import CoeffTable
from .sums import PrefixCache, Twist, build_prefix_cache, mod_inverse, twist_phases

__all__ = [
    "VoronoiParams",
    "bessel_j",
    "mod_inverse",
    "voronoi_main_term",
    "voronoi_main_terms",
    "truncation_error_scan",
    "constant_term",
    "half_integer_samples",
    "full_voronoi_check",
]


@dataclass(frozen=True)
class VoronoiParams:
    x: float
    N: float
    twist: Twist

    def __post_init__(self):
        if self.x < 1:
            raise ValueError("x must be at least 1")
        if not 1 <= self.N <= self.x:
            raise ValueError(f"truncation N={self.N} must satisfy 1 <= N <= x={self.x}")
        if self.twist.k > self.x:
            raise ValueError("k must not exceed x")


def _dual_coefficients(table: CoeffTable, twist: Twist, n_top: int) -> np.ndarray:
    """a(n) n^{-3/4} e(-n h_bar / k) for n = 1..n_top."""
    n = np.arange(1, n_top + 1, dtype=float)
    phase = twist_phases(n_top, twist.h_bar, twist.k, sign=-1)[1:]
    return table.normalized[1 : n_top + 1] * n**-0.75 * phase


def voronoi_main_terms(table: CoeffTable, twist: Twist, xs, N: float) -> np.ndarray:
    """Main term of the truncated identity at every x in xs (vectorized)."""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    n_top = math.floor(N)
    if n_top > table.length:
        raise IndexError(f"truncation N={N} exceeds table length {table.length}")
    k = twist.k
    coef = _dual_coefficients(table, twist, n_top)
    sqrt_n = np.sqrt(np.arange(1, n_top + 1, dtype=float))
    out = np.empty(xs.size, dtype=complex)
    for i, x in enumerate(xs):
        osc = np.cos(4 * math.pi * sqrt_n * math.sqrt(x) / k - math.pi / 4)
        out[i] = np.dot(coef, osc)
    return math.sqrt(k) * xs**0.25 / (math.pi * math.sqrt(2)) * out


def voronoi_main_term(table: CoeffTable, params: VoronoiParams) -> complex:
    return complex(voronoi_main_terms(table, params.twist, [params.x], params.N)[0])


def half_integer_samples(lo: float, hi: float, count: int) -> np.ndarray:
    """count points m + 1/2 spread evenly over [lo, hi], away from the jumps of A."""
    grid = np.linspace(lo, hi - 1, count)
    return np.floor(grid) + 0.5


def constant_term(table: CoeffTable, twist: Twist, n_top: int | None = None) -> complex:
    """(-1)^(kappa/2) (kappa-1) k/(4 pi) sum_n a(n) e(-n h_bar/k) / n.

    The truncated identity has no constant term; this is the one that the full
    formula produces from the regularized int_0^inf y J_nu(y) dy = nu.  It
    is bounded, so the stated error term absorbs it, but at desk scale it
    dominates the truncation error once N is moderately large.
    """
    n_top = table.length if n_top is None else n_top
    n = np.arange(1, n_top + 1, dtype=float)
    phase = twist_phases(n_top, twist.h_bar, twist.k, sign=-1)[1:]
    series = complex(np.sum(table.normalized[1 : n_top + 1] * phase / n))
    sign = -1 if (table.weight // 2) % 2 else 1
    return sign * (table.weight - 1) * twist.k / (4 * math.pi) * series


def _loglog_fit(Ns, errors):
    slope, intercept = np.polyfit(np.log(Ns), np.log(errors), 1)
    return float(slope), float(intercept)


@dataclass
class TruncationScan:
    N_grid: list
    max_errors: list
    slope: float | None
    intercept: float | None
    flags: list = field(default_factory=list)
    offset: complex = 0j
    offset_errors: list = field(default_factory=list)
    offset_slope: float | None = None

    def as_dict(self) -> dict:
        return {
            "N_grid": list(self.N_grid),
            "max_errors": list(self.max_errors),
            "slope": self.slope,
            "fitted_constant": None if self.intercept is None else math.exp(self.intercept),
            "offset": self.offset,
            "offset_corrected_errors": list(self.offset_errors),
            "offset_corrected_slope": self.offset_slope,
            "flags": list(self.flags),
        }


def truncation_error_scan(
    table: CoeffTable,
    twist: Twist,
    x_samples,
    N_grid,
    cache: PrefixCache | None = None,
    workers: int = 1,
) -> TruncationScan:
    """Max over x of |A(x) - main term(x, N)| for each N, and the log-log slope in N."""
    xs = np.asarray(list(x_samples), dtype=float)
    Ns = [float(N) for N in N_grid]
    if xs.size == 0 or not Ns:
        raise ValueError("x_samples and N_grid must be nonempty")
    for x in xs:
        for N in Ns:
            VoronoiParams(float(x), N, twist)
    if cache is None:
        cache = build_prefix_cache(table, twist.h, twist.k)
    exact = cache.S[np.floor(xs).astype(np.int64)]
    offset = constant_term(table, twist)

    def one(N):
        chunks = np.array_split(np.arange(xs.size), max(1, workers))
        parts = [voronoi_main_terms(table, twist, xs[c], N) for c in chunks if c.size]
        diff = exact - np.concatenate(parts)
        return float(np.max(np.abs(diff))), float(np.max(np.abs(diff - offset)))

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            pairs = list(pool.map(one, Ns))
    else:
        pairs = [one(N) for N in Ns]
    errors = [p[0] for p in pairs]
    corrected = [p[1] for p in pairs]

    flags = []
    slope = intercept = offset_slope = None
    if len(set(Ns)) < 2:
        flags.append("slope_undefined")
    else:
        slope, intercept = _loglog_fit(Ns, errors)
        offset_slope = _loglog_fit(Ns, corrected)[0]
    return TruncationScan(Ns, errors, slope, intercept, flags, offset, corrected, offset_slope)


@dataclass
class FullVoronoiResult:
    lhs: complex
    rhs: complex
    gap: float

    @property
    def relative_gap(self) -> float:
        return self.gap / abs(self.lhs) if self.lhs != 0 else math.inf


def voronoi_lhs(table: CoeffTable, twist: Twist, a: float, b: float) -> complex:
    """sum' over a <= n <= b of a(n) e(nh/k), integer endpoints weighted 1/2."""
    lo, hi = math.ceil(a), math.floor(b)
    if hi < lo:
        return 0j
    n = np.arange(lo, hi + 1)
    w = np.ones(n.size)
    if lo == a:
        w[0] *= 0.5
    if hi == b:
        w[-1] *= 0.5
    phase = twist_phases(hi, twist.h, twist.k)[lo:]
    return complex(np.sum(w * table.normalized[lo : hi + 1] * phase))


def full_voronoi_check(table: CoeffTable, twist: Twist, a: float, b: float, n_max: int) -> FullVoronoiResult:
    """Both sides of the full summation formula with test function f = 1 on [a, b]."""
    if not 0 < a < b <= table.length:
        raise ValueError("need 0 < a < b <= table length")
    if n_max > table.length:
        raise IndexError("n_max exceeds table length")
    lhs = voronoi_lhs(table, twist, a, b)
    k = twist.k
    nu = table.weight - 1
    n = np.arange(1, n_max + 1, dtype=float)
    c = 4 * math.pi * np.sqrt(n) / k
    integrals = 2.0 / c**2 * integral_y_bessel(nu, c * math.sqrt(a), c * math.sqrt(b))
    phase = twist_phases(n_max, twist.h_bar, twist.k, sign=-1)[1:]
    series = np.sum(table.normalized[1 : n_max + 1] * phase * integrals)
    sign = -1 if (table.weight // 2) % 2 else 1
    rhs = complex(sign * 2 * math.pi / k * series)
    return FullVoronoiResult(lhs, rhs, abs(lhs - rhs))
