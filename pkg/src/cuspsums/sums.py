"""Additively twisted partial sums A(x, h/k) over cached prefix sums.

All sums are inclusive at both ends: A(x) = sum_{n <= x}, and the short sum
over [x, x+D] runs from ceil(x) to floor(x+D).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coeffs import CoeffTable


def mod_inverse(h: int, k: int) -> int:
    """h_bar in [0, k) with h*h_bar = 1 mod k; 0 when k = 1."""
    if k < 1:
        raise ValueError("k must be positive")
    if k == 1:
        return 0
    if math.gcd(h, k) != 1:
        raise ValueError(f"h={h} and k={k} are not coprime")
    return pow(h, -1, k)


@dataclass(frozen=True)
class Twist:
    h: int
    k: int
    h_bar: int

    @classmethod
    def make(cls, h: int, k: int) -> "Twist":
        if k < 1:
            raise ValueError("k must be positive")
        h %= k
        if math.gcd(h, k) != 1:
            raise ValueError(f"twist {h}/{k} is not reduced: gcd(h, k) != 1")
        return cls(h, k, mod_inverse(h, k))


def twist_phases(n_max: int, h: int, k: int, sign: int = 1) -> np.ndarray:
    """e(sign * n*h/k) for n = 0..n_max, using exact residues n*h mod k."""
    roots = np.exp(2j * np.pi * sign * np.arange(k) / k)
    if k == 1:
        roots = np.ones(1, dtype=complex)
    elif k == 2:
        roots = np.array([1.0, -1.0], dtype=complex)
    elif k == 4:
        roots = np.array([1, 1j * sign, -1, -1j * sign], dtype=complex)
    idx = (np.arange(n_max + 1, dtype=np.int64) * (h % k)) % k
    return roots[idx]


@dataclass(frozen=True)
class PrefixCache:
    twist: Twist
    S: np.ndarray
    form_id: str
    weight: int

    @property
    def length(self) -> int:
        return self.S.size - 1


def build_prefix_cache(table: CoeffTable, h: int, k: int) -> PrefixCache:
    twist = Twist.make(h, k)
    terms = table.normalized * twist_phases(table.length, twist.h, twist.k)
    terms[0] = 0.0
    S = np.cumsum(terms)
    S.setflags(write=False)
    return PrefixCache(twist, S, table.form_id, table.weight)


def _check_range(cache: PrefixCache, upper: float) -> None:
    if upper > cache.length:
        raise IndexError(f"x={upper} beyond cached range N_max={cache.length}")


def long_sum(cache: PrefixCache, x: float) -> complex:
    """A(x) = sum_{n <= x} a(n) e(nh/k)."""
    if x < 0:
        raise ValueError("x must be nonnegative")
    _check_range(cache, x)
    return complex(cache.S[math.floor(x)])


def _window(x: float, delta_len: float) -> tuple[int, int]:
    # integers in [x, x+delta_len] are ceil(x) .. floor(x+delta_len);
    # returns (ceil(x) - 1, floor(x+delta_len)) as prefix indices
    lo = math.ceil(x) - 1
    hi = math.floor(x + delta_len)
    return max(lo, 0), max(hi, max(lo, 0))


def short_sum(cache: PrefixCache, x: float, delta_len: float) -> complex:
    """sum over x <= n <= x+delta_len."""
    if delta_len < 0:
        raise ValueError("delta_len must be nonnegative")
    _check_range(cache, x + delta_len)
    lo, hi = _window(x, delta_len)
    return complex(cache.S[hi] - cache.S[lo])


def positive_part(z: complex) -> complex:
    """(Re z)_+ + i (Im z)_+."""
    return complex(max(z.real, 0.0), max(z.imag, 0.0))


def positive_part_array(z: np.ndarray) -> np.ndarray:
    return np.maximum(z.real, 0.0) + 1j * np.maximum(z.imag, 0.0)


def max_short_deviation(cache: PrefixCache, x: float, delta_len: float) -> float:
    """max over 0 <= U <= delta_len of |sum_{x <= n <= x+U}|.

    The sum is a step function of U, so the maximum is taken over the
    breakpoints j = ceil(x)-1 .. floor(x+delta_len) of |S(j) - S(ceil(x)-1)|.
    """
    if delta_len < 0:
        raise ValueError("delta_len must be nonnegative")
    _check_range(cache, x + delta_len)
    lo, hi = _window(x, delta_len)
    seg = cache.S[lo : hi + 1] - cache.S[lo]
    return float(np.max(np.abs(seg)))


def running_max_deviation(S: np.ndarray, starts: np.ndarray, widths: np.ndarray) -> np.ndarray:
    """For each base index b and width w: max_{0<=r<=w} |S[b+r] - S[b]|.

    Vectorized over bases; loops over the offset r, so cost is
    len(starts) * max(widths).
    """
    base = S[starts]
    best = np.zeros(starts.size)
    wmax = int(widths.max()) if widths.size else 0
    for r in range(1, wmax + 1):
        live = widths >= r
        if not live.any():
            break
        dev = np.abs(S[starts + r] - base)
        np.maximum(best, np.where(live, dev, 0.0), out=best)
    return best
