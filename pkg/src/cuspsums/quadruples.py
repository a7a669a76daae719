"""Square-root additive quadruples: exact enumeration and near-solution counting.

Every n factors uniquely as n = m*u**2 with m squarefree.  Square roots of
distinct squarefree kernels are linearly independent over the rationals, so a
signed sum of square roots vanishes exactly when, for each kernel m, the signed
roots u belonging to m cancel.  That gives an exact zero test with no
floating point at all; floats only prune candidates.
"""

from __future__ import annotations

import csv
import math
from collections import defaultdict
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from functools import lru_cache
from itertools import product
from pathlib import Path

import numpy as np

SIEVE_LIMIT = 10**7
NEAR_BUDGET = 10**10

PATTERNS = ("two_two", "three_one")


class BudgetExceededError(RuntimeError):
    pass


@dataclass(frozen=True)
class SqrtDecomp:
    n: int
    m: int
    u: int

    def __post_init__(self):
        assert self.m * self.u * self.u == self.n


@lru_cache(maxsize=8)
def kernel_table(n_max: int) -> np.ndarray:
    """Squarefree kernel of every n <= n_max (index 0 unused)."""
    if n_max > SIEVE_LIMIT:
        raise ValueError(f"sieve limit is {SIEVE_LIMIT}")
    kern = np.arange(n_max + 1, dtype=np.int64)
    for p in range(2, math.isqrt(n_max) + 1):
        if all(p % q for q in range(2, math.isqrt(p) + 1)):
            p2 = p * p
            sel = np.arange(p2, n_max + 1, p2)
            vals = kern[sel]
            hit = vals % p2 == 0
            while hit.any():
                vals[hit] //= p2
                hit = vals % p2 == 0
            kern[sel] = vals
    kern.setflags(write=False)
    return kern


def _table_for(n: int) -> np.ndarray:
    size = 1 << max(16, (n - 1).bit_length())
    return kernel_table(min(size, SIEVE_LIMIT))


def squarefree_decompose(n: int) -> SqrtDecomp:
    if not 1 <= n <= SIEVE_LIMIT:
        raise ValueError(f"n={n} outside [1, {SIEVE_LIMIT}]")
    m = int(_table_for(n)[n])
    return SqrtDecomp(n, m, math.isqrt(n // m))


def signed_sqrt_sum_is_zero(terms) -> bool:
    """Exact test of sum(sign * sqrt(n)) == 0 for terms [(sign, n), ...]."""
    coef = defaultdict(int)
    for sign, n in terms:
        d = squarefree_decompose(n)
        coef[d.m] += sign * d.u
    return all(v == 0 for v in coef.values())


def equal_sum_identity(a: int, b: int, c: int, d: int) -> bool:
    """sqrt(a)+sqrt(b) == sqrt(c)+sqrt(d) by squaring twice in integers."""
    e = c + d - a - b
    g = 4 * a * b + 4 * c * d - e * e  # = 8 sqrt(abcd) when equal
    if g < 0 or g * g != 64 * a * b * c * d:
        return False
    # then 2 sqrt(ab) - 2 sqrt(cd) = +-e; the sign must match
    return (a * b > c * d) - (a * b < c * d) == (e > 0) - (e < 0)


def _decimal_gap(signs, values, prec: int = 60) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = prec
        return sum(Decimal(s) * Decimal(v).sqrt() for s, v in zip(signs, values))


# --- exact equal-sum quadruples --------------------------------------------


def _pair_sum_counts(U: int) -> np.ndarray:
    """r(t) = #{(u, v) in [1, U]^2 : u + v = t}, for t = 0..2U."""
    t = np.arange(2 * U + 1)
    return np.clip(np.minimum(t - 1, 2 * U + 1 - t), 0, None)


@dataclass
class QuadrupleSet:
    """Ordered (a, b, c, d) in [1, N]^4 with sqrt(a)+sqrt(b) = sqrt(c)+sqrt(d).

    Stored structurally: ``classes`` maps each squarefree kernel m to the
    values m*u**2 <= N.  Members are either all in one class with
    u1 + u2 = u3 + u4, or (a, b) of distinct kernels with (c, d) a
    permutation of (a, b).
    """

    cutoff: int
    classes: dict
    pattern: str = "two_two"
    near: list = field(default_factory=list)

    def count(self) -> int:
        same = 0
        square_total = 0
        for m, vals in self.classes.items():
            r = _pair_sum_counts(len(vals))
            same += int(np.sum(r * r))
            square_total += len(vals) ** 2
        cross = self.cutoff**2 - square_total
        return same + 2 * cross

    def contains(self, a: int, b: int, c: int, d: int) -> bool:
        if not all(1 <= v <= self.cutoff for v in (a, b, c, d)):
            return False
        return signed_sqrt_sum_is_zero([(1, a), (1, b), (-1, c), (-1, d)])

    def members(self):
        """Iterate over all members (cost proportional to the count)."""
        for m, vals in sorted(self.classes.items()):
            U = len(vals)
            for u1, u2, u3 in product(range(1, U + 1), repeat=3):
                u4 = u1 + u2 - u3
                if 1 <= u4 <= U:
                    yield (m * u1 * u1, m * u2 * u2, m * u3 * u3, m * u4 * u4)
        kern = kernel_table(max(self.cutoff, 1))
        for a in range(1, self.cutoff + 1):
            for b in range(1, self.cutoff + 1):
                if kern[a] != kern[b]:
                    yield (a, b, a, b)
                    yield (a, b, b, a)


def enumerate_equal_sum_quadruples(N: int) -> QuadrupleSet:
    if not 1 <= N <= 10**5:
        raise ValueError(f"cutoff N={N} outside [1, 100000]")
    kern = kernel_table(max(N, 1))
    classes = {}
    for m in np.flatnonzero(kern[1 : N + 1] == np.arange(1, N + 1)) + 1:
        m = int(m)
        U = math.isqrt(N // m)
        classes[m] = [m * u * u for u in range(1, U + 1)]
    return QuadrupleSet(N, classes)


def export_quadruples_csv(rows, path) -> None:
    """rows of (a, b, c, d, gap); gap written to 17 significant digits."""
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["a", "b", "c", "d", "gap"])
        for a, b, c, d, gap in rows:
            w.writerow([a, b, c, d, format(float(gap), ".17g")])


# --- near solutions in dyadic boxes ----------------------------------------


def _box(X: int) -> np.ndarray:
    return np.arange(X + 1, 2 * X + 1, dtype=np.int64)


def _gap_terms(pattern: str, a, b, c, d):
    if pattern == "two_two":
        return [(1, a), (1, b), (-1, c), (-1, d)]
    return [(1, a), (1, b), (1, c), (-1, d)]


def _classify(pattern: str, quad, threshold: Decimal, include_zero: bool) -> bool:
    """Exact-ish decision of |gap| <= threshold for one borderline tuple."""
    terms = _gap_terms(pattern, *quad)
    if signed_sqrt_sum_is_zero(terms):
        return include_zero
    gap = abs(_decimal_gap([s for s, _ in terms], [v for _, v in terms]))
    return gap <= threshold


def near_quadruple_count(boxes, delta: float, pattern: str = "two_two") -> int:
    """Ordered tuples in the dyadic boxes (X, 2X] with small gap.

    two_two:   |sqrt a + sqrt b - sqrt c - sqrt d| <= delta sqrt C
    three_one: 0 < |sqrt a + sqrt b + sqrt c - sqrt d| <= delta sqrt C

    ``boxes`` = (A, B, C, D).  Extended-precision sums prune; tuples within
    1e-12 sqrt C of the threshold are decided exactly.
    """
    if pattern not in PATTERNS:
        raise ValueError(f"unknown pattern {pattern!r}")
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    A, B, C, D = (int(v) for v in boxes)
    if A * B * C * D > NEAR_BUDGET:
        raise BudgetExceededError(f"box volume {A * B * C * D} exceeds budget {NEAR_BUDGET}")
    with localcontext() as ctx:
        ctx.prec = 60
        threshold = Decimal(delta) * Decimal(C).sqrt()
    thr = np.longdouble(delta) * np.sqrt(np.longdouble(C))
    tol = np.longdouble(1e-12) * np.sqrt(np.longdouble(C))
    ra, rb, rc, rd = (np.sqrt(_box(X).astype(np.longdouble)) for X in (A, B, C, D))

    if pattern == "two_two":
        left = (ra[:, None] + rb[None, :]).ravel()
        right = (rc[:, None] + rd[None, :]).ravel()
        right_idx = np.argsort(right, kind="stable")
        right_sorted = right[right_idx]
        left_width = B
        right_width = D
        include_zero = True
    else:
        left = (ra[:, None, None] + rb[None, :, None] + rc[None, None, :]).ravel()
        right_idx = np.arange(D)
        right_sorted = rd
        left_width = B * C
        include_zero = False

    lo_in = np.searchsorted(right_sorted, left - thr + tol, side="left")
    hi_in = np.searchsorted(right_sorted, left + thr - tol, side="right")
    lo_out = np.searchsorted(right_sorted, left - thr - tol, side="left")
    hi_out = np.searchsorted(right_sorted, left + thr + tol, side="right")
    # safely inside: [lo_in, hi_in); borderline: [lo_out, lo_in) and [hi_in, hi_out)

    a_box, b_box, c_box, d_box = (_box(X) for X in (A, B, C, D))

    def unpack(li: int, rj: int):
        if pattern == "two_two":
            ia, ib = divmod(li, left_width)
            ic, id_ = divmod(int(right_idx[rj]), right_width)
        else:
            ia, rest = divmod(li, left_width)
            ib, ic = divmod(rest, C)
            id_ = int(right_idx[rj])
        return int(a_box[ia]), int(b_box[ib]), int(c_box[ic]), int(d_box[id_])

    inner = np.maximum(hi_in - lo_in, 0)
    total = int(np.sum(inner))
    for li in np.flatnonzero((lo_in > lo_out) | (hi_out > hi_in) | (inner == 0)):
        if inner[li]:
            span = [*range(lo_out[li], lo_in[li]), *range(hi_in[li], hi_out[li])]
        else:
            span = range(lo_out[li], hi_out[li])
        for rj in span:
            if _classify(pattern, unpack(int(li), int(rj)), threshold, include_zero):
                total += 1

    if not include_zero:
        # exact zeros sitting in a safely-inside range were counted; take them out
        zlo = np.searchsorted(right_sorted, left - 1e-9, side="left")
        zhi = np.searchsorted(right_sorted, left + 1e-9, side="right")
        for li in np.flatnonzero((zhi > zlo) & (inner > 0)):
            for rj in range(max(zlo[li], lo_in[li]), min(zhi[li], hi_in[li])):
                if signed_sqrt_sum_is_zero(_gap_terms(pattern, *unpack(int(li), int(rj)))):
                    total -= 1
    return total


def near_quadruple_count_naive(boxes, delta: float, pattern: str = "two_two") -> int:
    """Independent recount with reversed loop order and decimal arithmetic.

    Only for small boxes; used as a test oracle.
    """
    A, B, C, D = (int(v) for v in boxes)
    with localcontext() as ctx:
        ctx.prec = 50
        threshold = Decimal(delta) * Decimal(C).sqrt()
        roots = {n: Decimal(n).sqrt() for X in (A, B, C, D) for n in range(X + 1, 2 * X + 1)}
        sgn = (1, 1, -1, -1) if pattern == "two_two" else (1, 1, 1, -1)
        count = 0
        for d in range(2 * D, D, -1):
            for c in range(2 * C, C, -1):
                for b in range(2 * B, B, -1):
                    for a in range(2 * A, A, -1):
                        quad = (a, b, c, d)
                        if signed_sqrt_sum_is_zero(list(zip(sgn, quad))):
                            count += pattern == "two_two"
                            continue
                        gap = abs(sum(s * roots[v] for s, v in zip(sgn, quad)))
                        if gap <= threshold:
                            count += 1
    return count


# --- lower bound for nonzero gaps -------------------------------------------


@dataclass(frozen=True)
class GapResult:
    min_gap: float
    min_ratio: float
    argmin_gap: tuple
    argmin_ratio: tuple


def min_gap_ratio(N: int, pattern: str = "two_two") -> GapResult:
    """Minimum nonzero |sqrt a + sqrt b -+ sqrt c - sqrt d| over a, b <= c <= N.

    ``two_two`` uses the minus sign, ``three_one`` the plus sign.  For fixed
    (a, b, c) the gap is monotone in d, so the minimum over all d >= 1 is
    attained at one of the integers around s**2, s = sqrt a + sqrt b -+ sqrt c;
    exact zeros are skipped and the next neighbour taken.  The ratio is
    gap * c**2 * sqrt(abc).
    """
    if not 1 <= N <= 300:
        raise ValueError("N must lie in [1, 300]")
    if pattern not in PATTERNS:
        raise ValueError(f"unknown pattern {pattern!r}")
    sign = -1 if pattern == "two_two" else 1
    best_gap = (math.inf, None)
    best_ratio = (math.inf, None)
    root = np.sqrt(np.arange(N + 1, dtype=np.longdouble))
    for c in range(1, N + 1):
        a, b = np.meshgrid(np.arange(1, c + 1), np.arange(1, c + 1), indexing="ij")
        a, b = a.ravel(), b.ravel()
        s = root[a] + root[b] + sign * root[c]
        base = np.floor(np.maximum(s, 0) ** 2).astype(np.int64)
        gaps = np.full(a.size, np.inf, dtype=np.longdouble)
        dbest = np.zeros(a.size, dtype=np.int64)
        for off in (-1, 0, 1, 2):
            d = np.maximum(base + off, 1)
            g = np.abs(s - np.sqrt(d.astype(np.longdouble)))
            tiny = np.flatnonzero(g < 1e-9)
            for i in tiny:
                terms = [(1, int(a[i])), (1, int(b[i])), (sign, c), (-1, int(d[i]))]
                if signed_sqrt_sum_is_zero(terms):
                    g[i] = np.inf
                else:
                    g[i] = np.longdouble(str(abs(_decimal_gap(*zip(*terms)))))
            better = g < gaps
            gaps[better] = g[better]
            dbest[better] = d[better]
        ratio = gaps * np.longdouble(c) ** 2 * np.sqrt((a * b * c).astype(np.longdouble))
        i = int(np.argmin(gaps))
        if gaps[i] < best_gap[0]:
            best_gap = (gaps[i], (int(a[i]), int(b[i]), c, int(dbest[i])))
        j = int(np.argmin(ratio))
        if ratio[j] < best_ratio[0]:
            best_ratio = (ratio[j], (int(a[j]), int(b[j]), c, int(dbest[j])))
    return GapResult(float(best_gap[0]), float(best_ratio[0]), best_gap[1], best_ratio[1])
