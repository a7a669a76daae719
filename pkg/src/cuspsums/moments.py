"""Moment integrals of A(x, h/k) over [M, 2M] and related statistics.

A(x) = S(floor x) is a step function, so every integral here is an exact sum
over unit intervals with fractional end pieces.  Short sums over [x, x+D]
additionally jump where x + D crosses an integer; on each unit interval
(j, j+1) that happens once, at j + 1 - frac(D).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import exppairs
from .coeffs import CoeffTable
from .quadruples import QuadrupleSet
from .sums import PrefixCache, Twist, positive_part_array, twist_phases

EPS = 0.01

MODES = ("abs_power", "signed_first", "abs_first", "plusplus_square")


@dataclass
class MomentReport:
    M: float
    k: int
    mode: str
    exponent: float | str
    raw: complex | float
    divisor: float
    flags: list = field(default_factory=list)

    @property
    def ratio(self):
        return self.raw / self.divisor

    def as_dict(self) -> dict:
        raw = self.raw
        if isinstance(raw, complex):
            raw = {"re": raw.real, "im": raw.imag}
            ratio = {"re": self.ratio.real, "im": self.ratio.imag}
        else:
            ratio = self.ratio
        return {
            "M": self.M,
            "k": self.k,
            "mode": self.mode,
            "exponent": self.exponent,
            "raw": raw,
            "divisor": self.divisor,
            "ratio": ratio,
            "flags": list(self.flags),
        }


def _unit_pieces(lo: float, hi: float) -> tuple[np.ndarray, np.ndarray]:
    """Integer j and the length of [j, j+1) inside [lo, hi]."""
    js = np.arange(math.floor(lo), math.floor(hi) + 1, dtype=np.int64)
    lengths = np.minimum(js + 1, hi) - np.maximum(js, lo)
    keep = lengths > 0
    return js[keep], lengths[keep]


def _check_span(cache: PrefixCache, hi: float) -> None:
    if hi > cache.length:
        raise IndexError(f"integration range reaches {hi}, beyond N_max={cache.length}")


def exact_power_moment(cache: PrefixCache, M: float, mode: str = "abs_power", A_exp: float = 2.0) -> MomentReport:
    if mode not in MODES:
        raise ValueError(f"unsupported mode {mode!r}")
    if M < 1:
        raise ValueError("M must be at least 1")
    _check_span(cache, 2 * M)
    k = cache.twist.k
    js, lengths = _unit_pieces(M, 2 * M)
    vals = cache.S[js]
    if mode == "abs_power":
        if not 1 <= A_exp <= 8:
            raise ValueError("A_exp must lie in [1, 8]")
        raw = float(np.dot(np.abs(vals) ** A_exp, lengths))
        divisor = k ** (A_exp / 2) * M ** (A_exp / 4 + 1)
        exponent = float(A_exp)
    elif mode == "signed_first":
        raw = complex(np.dot(vals, lengths))
        divisor = k**1.5 * M**0.75
        exponent = "signed_first"
    elif mode == "abs_first":
        raw = float(np.dot(np.abs(vals), lengths))
        divisor = k**0.5 * M**1.25
        exponent = "abs_first"
    else:
        raw = float(np.dot(np.abs(positive_part_array(vals)) ** 2, lengths))
        divisor = k * M**1.5
        exponent = "plusplus_square"
    return MomentReport(M, k, mode, exponent, raw, divisor)


def second_moment_ratio(cache: PrefixCache, M: float) -> float:
    """int_M^2M |A|^2 / (k ((2M)^(3/2) - M^(3/2))), to compare with constant_C."""
    rep = exact_power_moment(cache, M, "abs_power", 2)
    return rep.raw / (cache.twist.k * ((2 * M) ** 1.5 - M**1.5))


# --- constants ---------------------------------------------------------------


@dataclass(frozen=True)
class ConstantEstimate:
    value: float
    tail: float
    imag_residue: float = 0.0


def constant_C(table: CoeffTable, cutoff: int) -> ConstantEstimate:
    """(1/6pi^2) sum_{n <= cutoff} |a(n)|^2 n^{-3/2} with a tail bound.

    The tail uses partial summation with sum_{n <= x} |a(n)|^2 ~ c x, c
    estimated from the table itself: sum_{n > X} ~ 2 c X^{-1/2}.
    """
    if not 1 <= cutoff <= table.length:
        raise ValueError("cutoff must lie in [1, table length]")
    a = table.normalized[1 : cutoff + 1]
    n = np.arange(1, cutoff + 1, dtype=float)
    value = float(np.sum(a * a * n**-1.5)) / (6 * math.pi**2)
    rs = float(np.sum(a * a)) / cutoff
    tail = 2 * rs * cutoff**-0.5 / (6 * math.pi**2)
    return ConstantEstimate(value, tail)


def _dual_weights(table: CoeffTable, twist: Twist, cutoff: int) -> np.ndarray:
    """g(n) = a(n) n^{-3/4} e(-n h_bar / k), index 0 unused."""
    n = np.arange(cutoff + 1, dtype=float)
    n[0] = 1.0
    g = table.normalized[: cutoff + 1] * n**-0.75 * twist_phases(cutoff, twist.h_bar, twist.k, sign=-1)
    g[0] = 0.0
    return g


def _cf_sums(g: np.ndarray, classes: dict) -> tuple[complex, complex]:
    """(S1, S2) where S1 = sum_s |G(s)|^2 and S2 = S3 = sum_s H(s)^2.

    G(s) = sum_{sqrt a + sqrt b = s} g(a) g(b) and H(s) the same with the
    second factor conjugated.  Same-kernel classes are convolutions in u;
    pairs of distinct kernels contribute closed forms.
    """
    abs2 = np.abs(g) ** 2
    total_abs2 = float(np.sum(abs2))
    total_sq = complex(np.sum(g * g))
    s1_same = 0.0
    s2_same = 0j
    block_abs2 = 0.0
    block_re2 = 0.0
    for m in sorted(classes):
        v = g[np.asarray(classes[m], dtype=np.int64)]
        G = np.convolve(v, v)
        H = np.convolve(v, np.conj(v))
        s1_same += float(np.sum(np.abs(G) ** 2))
        s2_same += complex(np.sum(H * H))
        w = float(np.sum(np.abs(v) ** 2))
        block_abs2 += w * w
        block_re2 += 0.5 * (w * w + abs(complex(np.sum(v * v))) ** 2)
    # ordered pairs (a, b) of distinct kernels, each giving G = 2 g(a) g(b)
    s1_cross = 2.0 * (total_abs2**2 - block_abs2)
    # Re(z conj w)^2 = (|z|^2 |w|^2 + Re(z^2 conj(w)^2)) / 2 summed over all ordered pairs
    all_re2 = 0.5 * (total_abs2**2 + abs(total_sq) ** 2)
    s2_cross = 2.0 * (all_re2 - block_re2)
    return s1_same + s1_cross, s2_same + s2_cross


def _cf_raw(table: CoeffTable, twist: Twist, cutoff: int, classes: dict) -> complex:
    g = _dual_weights(table, twist, cutoff)
    s1, s2 = _cf_sums(g, classes)
    return 3.0 / (64 * math.pi**4) * (s1 + 2 * s2)


def constant_CF(table: CoeffTable, twist: Twist, cutoff: int, quadset: QuadrupleSet) -> ConstantEstimate:
    """The fourth-moment constant truncated to quadruples with entries <= cutoff.

    The tail is extrapolated from the change between cutoff/2 and cutoff
    assuming geometric decay like cutoff^{-1/4}.
    """
    if not quadset.classes:
        raise ValueError("empty quadruple set")
    if quadset.cutoff < cutoff:
        raise ValueError("quadruple set enumerated below the requested cutoff")
    if cutoff > table.length:
        raise IndexError("cutoff exceeds table length")
    classes = {m: [v for v in vals if v <= cutoff] for m, vals in quadset.classes.items() if m <= cutoff}
    value = _cf_raw(table, twist, cutoff, classes)
    tail = 0.0
    if cutoff >= 2:
        half = cutoff // 2
        half_classes = {m: [v for v in vals if v <= half] for m, vals in classes.items() if m <= half}
        prev = _cf_raw(table, twist, half, half_classes)
        r = 2**-0.25
        tail = abs(value.real - prev.real) * r / (1 - r)
    return ConstantEstimate(value.real, tail, abs(value.imag))


def constant_CF_bruteforce(table: CoeffTable, twist: Twist, quadset: QuadrupleSet) -> complex:
    """Direct sum over explicit members; the test oracle for constant_CF."""
    g = _dual_weights(table, twist, quadset.cutoff)
    total = 0j
    for a, b, c, d in quadset.members():
        # the three constraint orders: ab=cd, ac=bd, ad=bc, written for the member (p, q, r, s)
        total += g[a] * g[b] * np.conj(g[c] * g[d])
        total += g[a] * g[c] * np.conj(g[b] * g[d])
        total += g[a] * g[c] * np.conj(g[d] * g[b])
    return 3.0 / (64 * math.pi**4) * total


# --- large values ------------------------------------------------------------


@dataclass
class LargeValueReport:
    M: float
    V: float
    points: list
    bound_value: float
    pair: str

    @property
    def R(self) -> int:
        return len(self.points)

    def check(self, cache: PrefixCache) -> None:
        for s, t in zip(self.points, self.points[1:]):
            assert t - s >= self.V
        for t in self.points:
            assert self.M <= t <= 2 * self.M
            assert abs(cache.S[t]) >= self.V

    def as_dict(self) -> dict:
        return {
            "M": self.M,
            "V": self.V,
            "R": self.R,
            "bound_value": self.bound_value,
            "margin": self.bound_value / self.R if self.R else None,
            "pair": self.pair,
        }


def large_value_count(
    cache: PrefixCache,
    M: float,
    V: float,
    pair: exppairs.ExponentPair | None = None,
    eps: float = EPS,
) -> LargeValueReport:
    """Greedy V-separated integer points t in [M, 2M] with |A(t)| >= V."""
    k = cache.twist.k
    if not k * M**eps <= V <= math.sqrt(M):
        raise ValueError(f"V={V} outside the admissible window [k M^{eps}, M^(1/2)]")
    _check_span(cache, 2 * M)
    if pair is None:
        pair = exppairs.apply_process_word("BABAAB")
    ts = np.arange(math.ceil(M), math.floor(2 * M) + 1)
    hits = ts[np.abs(cache.S[ts]) >= V]
    points = []
    last = -math.inf
    for t in hits.tolist():
        if t >= last + V:
            points.append(t)
            last = t
    bound = exppairs.theorem2_bound(pair, k, M, V, eps)["value"]
    rep = LargeValueReport(M, V, points, bound, str(pair))
    rep.check(cache)
    return rep


# --- short sums ----------------------------------------------------------------


def _short_pieces(lo: float, hi: float, delta_len: float):
    """Pieces of [lo, hi] on which the window [x, x+D] has fixed integer content.

    For x in (j, j+1) the window holds n = j+1 .. j+D0 before x reaches
    j + 1 - f and n = j+1 .. j+D0+1 after, with D0 = floor(D), f = frac(D).
    Returns (j, width_in_prefix_steps, length) arrays.
    """
    d0 = math.floor(delta_len)
    f = delta_len - d0
    js = np.arange(math.floor(lo), math.ceil(hi), dtype=np.int64)
    cut = js + 1 - f
    len_a = np.minimum(cut, hi) - np.maximum(js, lo)
    len_b = np.minimum(js + 1, hi) - np.maximum(cut, lo)
    j = np.concatenate([js, js])
    w = np.concatenate([np.full(js.size, d0), np.full(js.size, d0 + 1)])
    length = np.concatenate([len_a, len_b])
    keep = length > 0
    return j[keep], w[keep], length[keep]


def _short_flags(k: int, M: float, Xi: float, delta_len: float) -> list:
    flags = []
    if not 1 <= delta_len <= math.sqrt(M):
        flags.append("inadmissible: delta_len outside [1, M^(1/2)]")
    if k > delta_len**0.5 * M**-EPS:
        flags.append("inadmissible: k > delta_len^(1/2) M^(-eps)")
    if not k * k * M ** (1 + EPS) / delta_len <= Xi <= M:
        flags.append("inadmissible: Xi outside [k^2 M^(1+eps)/delta_len, M]")
    return flags


def short_mean_square(cache: PrefixCache, M: float, Xi: float, delta_len: float) -> MomentReport:
    """int_M^{M+Xi} |sum_{x <= n <= x+D} a(n) e(nh/k)|^2 dx, exactly."""
    if delta_len < 0 or Xi <= 0:
        raise ValueError("need delta_len >= 0 and Xi > 0")
    _check_span(cache, M + Xi + delta_len)
    k = cache.twist.k
    j, w, length = _short_pieces(M, M + Xi, delta_len)
    vals = np.abs(cache.S[j + w] - cache.S[j]) ** 2
    raw = float(np.dot(vals, length))
    rep = MomentReport(M, k, "short_mean_square", float(delta_len), raw, Xi * delta_len)
    rep.flags.extend(_short_flags(k, M, Xi, delta_len))
    return rep


def _max_short_values(S: np.ndarray, j: np.ndarray, w: np.ndarray) -> np.ndarray:
    """max_{0 <= r <= w} |S[j+r] - S[j]| for the two widths D0, D0+1 in one pass."""
    base = S[j]
    best = np.zeros(j.size)
    for r in range(1, int(w.max()) + 1 if w.size else 1):
        live = w >= r
        np.maximum(best, np.where(live, np.abs(S[np.minimum(j + r, S.size - 1)] - base), 0.0), out=best)
    return best


def max_short_mean_square(cache: PrefixCache, M: float, delta_len: float) -> MomentReport:
    """int_M^{2M} max_{0 <= U <= D} |sum_{x <= n <= x+U}|^2 dx, exactly."""
    if delta_len < 0:
        raise ValueError("delta_len must be nonnegative")
    _check_span(cache, 2 * M + delta_len)
    k = cache.twist.k
    j, w, length = _short_pieces(M, 2 * M, delta_len)
    vals = _max_short_values(cache.S, j, w) ** 2
    raw = float(np.dot(vals, length))
    rep = MomentReport(M, k, "max_short_mean_square", float(delta_len), raw, M * delta_len * math.log(M) ** 2)
    if not M**EPS <= delta_len <= math.sqrt(M):
        rep.flags.append("inadmissible: delta_len outside [M^eps, M^(1/2)]")
    if k > delta_len**0.25 * M**-EPS:
        rep.flags.append("inadmissible: k > delta_len^(1/4) M^(-eps)")
    return rep


# --- oscillation -----------------------------------------------------------------


@dataclass
class OscillationReport:
    M: float
    c_small: float
    C_big: float
    delta_len: float
    measure: float
    threshold: float
    arg_window: tuple
    intervals: list
    min_length: float
    flags: list = field(default_factory=list)

    @property
    def proportion(self) -> float:
        return self.measure / self.M

    @property
    def longest(self) -> float:
        return max((b - a for a, b in self.intervals), default=0.0)

    def as_dict(self) -> dict:
        return {
            "M": self.M,
            "c_small": self.c_small,
            "C_big": self.C_big,
            "delta_len": self.delta_len,
            "measure": self.measure,
            "proportion": self.proportion,
            "threshold": self.threshold,
            "arg_window": list(self.arg_window),
            "interval_count": len(self.intervals),
            "longest_interval": self.longest,
            "min_length": self.min_length,
            "flags": list(self.flags),
        }


def in_arg_window(z: np.ndarray, lo: float, hi: float) -> np.ndarray:
    theta = np.angle(z)
    return (np.mod(theta - lo, 2 * math.pi) <= hi - lo) & (z != 0)


def _runs(mask: np.ndarray) -> list[tuple[int, int]]:
    """Maximal runs [start, stop) of True."""
    if not mask.size:
        return []
    padded = np.concatenate([[False], mask, [False]]).astype(np.int8)
    edges = np.flatnonzero(np.diff(padded))
    return list(zip(edges[::2].tolist(), edges[1::2].tolist()))


def omega_scan(
    cache: PrefixCache,
    M: float,
    c_small: float = 0.01,
    C_big: float = 100.0,
    arg_window: tuple = (-math.pi / 2 - 0.1, math.pi + 0.1),
    min_length: float | None = None,
) -> OscillationReport:
    """Measure of {x in [M, 2M] : omega(x) > 0} and long good intervals.

    omega(x) = |A_{++}(x)|^2 - C max_{0<=U<=D} |sum_{x<=n<=x+U}|^2 - c k x^{1/2}
    with D = c M^{1/2} / log^2 M.  On each piece where the step functions are
    constant, omega > 0 exactly for x below a closed-form crossing point, so
    the measure is exact.
    """
    if 2 * M > cache.length:
        raise IndexError(f"2M={2 * M} beyond N_max={cache.length}")
    k = cache.twist.k
    lo_w, hi_w = arg_window
    flags = []
    margin = (hi_w - lo_w - 1.5 * math.pi) / 2
    if margin <= 0:
        flags.append("arg_window shorter than 3pi/2")
    elif C_big < 1 / math.sin(margin) ** 2:
        flags.append(f"C_big below 1/sin^2(margin) = {1 / math.sin(margin) ** 2:.6g}")
    delta_len = c_small * math.sqrt(M) / math.log(M) ** 2
    _check_span(cache, 2 * M + delta_len)

    j, w, length = _short_pieces(M, 2 * M, delta_len)
    # piece start points: recompute from lengths, the pieces are ordered per j
    d0 = math.floor(delta_len)
    f = delta_len - d0
    start = np.where(w == d0, np.maximum(j, M), np.maximum(j + 1 - f, M))
    dev = _max_short_values(cache.S, j, w)
    # on (j, j+1), A(x) = S[j]
    value = np.abs(positive_part_array(cache.S[j])) ** 2 - C_big * dev**2
    crossing = np.where(value > 0, (np.maximum(value, 0) / (c_small * k)) ** 2, -np.inf)
    measure = float(np.sum(np.clip(np.minimum(start + length, crossing) - start, 0, None)))

    if min_length is None:
        min_length = math.sqrt(M) / math.log(M) ** 2
    threshold = math.sqrt(c_small * k) * M**0.25
    ts = np.arange(math.floor(M), math.ceil(2 * M), dtype=np.int64)
    vals = cache.S[ts]
    good = (np.abs(vals) >= threshold) & in_arg_window(vals, lo_w, hi_w)
    intervals = []
    for s, e in _runs(good):
        a, b = max(float(ts[s]), M), min(float(ts[e - 1] + 1), 2 * M)
        if b - a >= min_length:
            intervals.append((a, b))
    return OscillationReport(M, c_small, C_big, delta_len, measure, threshold, (lo_w, hi_w), intervals, min_length, flags)
