"""Exact Fourier coefficient tables for level-one cusp forms.

Delta is built from Jacobi's sparse expansion of eta**3:

    Delta = q * prod(1 - q**n)**24 = q * (sum_j (-1)**j (2j+1) q**(j(j+1)/2))**8

and the weight 16 / 18 eigenforms as Delta*E4 and Delta*E6.  All coefficient
arithmetic is exact; normalized values a(n) = c(n) / n**((k-1)/2) are kept as
doubles next to the integers.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .ntt import exact_convolve

DEFAULT_CAP = 2**20

FORM_WEIGHTS = {"delta": 12, "delta_e4": 16, "delta_e6": 18}


class ResourceLimitError(RuntimeError):
    """Requested table exceeds the configured size cap."""


@dataclass(frozen=True)
class CoeffTable:
    """Coefficients c(1..length) of a weight-`weight` form.

    Arrays are indexed by n with a zero placeholder at index 0.
    """

    weight: int
    form_id: str
    exact: tuple
    normalized: np.ndarray

    @property
    def length(self) -> int:
        return len(self.exact) - 1

    def c(self, n: int) -> int:
        return self.exact[n]

    def a(self, n: int) -> float:
        return float(self.normalized[n])


@dataclass(frozen=True)
class DivisorTables:
    d: np.ndarray
    sigma3: tuple
    sigma5: tuple

    @property
    def length(self) -> int:
        return self.d.size - 1


def build_eta3_series(n_max: int) -> list[tuple[int, int]]:
    """Terms (j(j+1)/2, (-1)**j (2j+1)) of the eta**3 q-series up to degree n_max."""
    terms = []
    j = 0
    while j * (j + 1) // 2 <= n_max:
        terms.append((j * (j + 1) // 2, (-1) ** j * (2 * j + 1)))
        j += 1
    return terms


def _as_dense(series, n_max: int) -> np.ndarray:
    """Dense object array of length n_max+1 from a list/array or sparse terms."""
    out = np.zeros(n_max + 1, dtype=object)
    if len(series) and isinstance(series[0], tuple):
        for e, c in series:
            if e <= n_max:
                out[e] += c
    else:
        vals = list(series)[: n_max + 1]
        out[: len(vals)] = [int(v) for v in vals]
    return out


def _sparse_terms(dense: np.ndarray) -> list[tuple[int, int]]:
    return [(int(e), int(dense[e])) for e in np.flatnonzero(dense != 0)]


def schoolbook_multiply(f, g, n_max: int) -> list[int]:
    """Reference O(n**2) truncated product, plain Python integers."""
    f = [int(v) for v in _as_dense(f, n_max)]
    g = [int(v) for v in _as_dense(g, n_max)]
    out = [0] * (n_max + 1)
    for i, fi in enumerate(f):
        if fi == 0:
            continue
        for j in range(n_max + 1 - i):
            out[i + j] += fi * g[j]
    return out


def power_series_multiply(f, g, n_max: int, method: str = "auto") -> list[int]:
    """Exact product of two integer power series truncated at degree n_max.

    Inputs may be dense sequences of integers or sparse lists of
    (exponent, coefficient) pairs.  ``method`` is one of ``schoolbook``,
    ``sparse`` (cost proportional to n_max times the nonzero count of the
    sparser factor), ``ntt`` (multi-prime transform) or ``auto``.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    fd = _as_dense(f, n_max)
    gd = _as_dense(g, n_max)
    nz_f = int(np.count_nonzero(fd != 0))
    nz_g = int(np.count_nonzero(gd != 0))
    if method == "auto":
        if min(nz_f, nz_g) <= 4 * math.isqrt(n_max + 1) + 8:
            method = "sparse"
        elif n_max < 256:
            method = "schoolbook"
        else:
            method = "ntt"
    if method == "schoolbook":
        return schoolbook_multiply(list(fd), list(gd), n_max)
    if method == "sparse":
        if nz_f < nz_g:
            fd, gd = gd, fd
        out = np.zeros(n_max + 1, dtype=object)
        for e, c in _sparse_terms(gd):
            out[e:] += c * fd[: n_max + 1 - e]
        return [int(v) for v in out]
    if method == "ntt":
        if nz_f == 0 or nz_g == 0:
            return [0] * (n_max + 1)
        top_f = int(np.flatnonzero(fd != 0)[-1]) + 1
        top_g = int(np.flatnonzero(gd != 0)[-1]) + 1
        fa = fd[:top_f]
        ga = fa if (gd is fd or (top_f == top_g and np.array_equal(fd, gd))) else gd[:top_g]
        return [int(v) for v in exact_convolve(fa, ga, n_max + 1)]
    raise ValueError(f"unknown multiplication method {method!r}")


def _spf_sieve(n_max: int) -> np.ndarray:
    spf = np.zeros(n_max + 1, dtype=np.int64)
    for p in range(2, math.isqrt(n_max) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    rest = np.flatnonzero(spf == 0)
    spf[rest] = rest
    return spf


def divisor_tables(n_max: int) -> DivisorTables:
    """d(n), sigma_3(n), sigma_5(n) for 1 <= n <= n_max via a smallest-prime-factor sieve."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    spf = _spf_sieve(n_max).tolist()
    d = [0, 1] + [0] * (n_max - 1)
    s3 = [0, 1] + [0] * (n_max - 1)
    s5 = [0, 1] + [0] * (n_max - 1)
    for n in range(2, n_max + 1):
        p = spf[n]
        m, e = n // p, 1
        while m % p == 0:
            m //= p
            e += 1
        pe = p**e
        d[n] = d[m] * (e + 1)
        s3[n] = s3[m] * ((pe**3 * p**3 - 1) // (p**3 - 1))
        s5[n] = s5[m] * ((pe**5 * p**5 - 1) // (p**5 - 1))
    return DivisorTables(np.array(d, dtype=np.int64), tuple(s3), tuple(s5))


def _normalize(exact, weight: int) -> np.ndarray:
    n = np.arange(len(exact), dtype=np.float64)
    n[0] = 1.0
    vals = np.array([float(v) for v in exact], dtype=np.float64)
    half = (weight - 2) // 2
    out = vals / (n**half * np.sqrt(n))
    out[0] = 0.0
    out.setflags(write=False)
    return out


def table_from_exact(exact, weight: int, form_id: str = "synthetic") -> CoeffTable:
    """Wrap exact integers c(1..N) (index 0 ignored) into a CoeffTable."""
    exact = [0] + [int(v) for v in list(exact)[1:]]
    return CoeffTable(weight, form_id, tuple(exact), _normalize(exact, weight))


def synthetic_table(values: dict[int, int], n_max: int, weight: int = 12) -> CoeffTable:
    """Table with the given exact c(n) and zeros elsewhere."""
    exact = [0] * (n_max + 1)
    for n, v in values.items():
        exact[n] = v
    return table_from_exact(exact, weight)


def build_cusp_form(form_id: str, n_max: int, method: str = "ntt", cap: int = DEFAULT_CAP) -> CoeffTable:
    """Exact coefficients of delta, delta_e4 (weight 16) or delta_e6 (weight 18).

    ``method="sparse"`` multiplies eight times by the eta**3 series;
    ``method="ntt"`` squares twice by transform after one sparse product.
    """
    if form_id not in FORM_WEIGHTS:
        raise ValueError(f"unknown form_id {form_id!r}; expected one of {sorted(FORM_WEIGHTS)}")
    if n_max > cap:
        raise ResourceLimitError(f"n_max={n_max} exceeds cap {cap}")
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    deg = n_max - 1  # c(n) is the coefficient of q**(n-1) in the eighth power
    eta3 = build_eta3_series(deg)
    if method == "sparse":
        power = _as_dense(eta3, deg)
        for _ in range(7):
            power = np.array(power_series_multiply(power, eta3, deg, method="sparse"), dtype=object)
    elif method == "ntt":
        power = power_series_multiply(eta3, eta3, deg, method="sparse")
        power = power_series_multiply(power, power, deg, method="ntt" if deg >= 256 else "schoolbook")
        power = power_series_multiply(power, power, deg, method="ntt" if deg >= 256 else "schoolbook")
    else:
        raise ValueError(f"unknown build method {method!r}")
    delta = [0] + [int(v) for v in power]
    weight = FORM_WEIGHTS[form_id]
    if form_id != "delta":
        sig = divisor_tables(n_max)
        if form_id == "delta_e4":
            eis = [1] + [240 * s for s in sig.sigma3[1:]]
        else:
            eis = [1] + [-504 * s for s in sig.sigma5[1:]]
        prod = power_series_multiply(delta, eis, n_max, method="ntt" if n_max >= 256 else "schoolbook")
        delta = [0] + prod[1:]
    table = CoeffTable(weight, form_id, tuple(delta), _normalize(delta, weight))
    assert table.exact[1] == 1
    return table


def deligne_check(table: CoeffTable, tables: DivisorTables) -> bool:
    """Exact |c(n)|**2 <= d(n)**2 * n**(k-1) for every stored n."""
    km1 = table.weight - 1
    d = tables.d
    for n in range(1, table.length + 1):
        c = table.exact[n]
        dn = int(d[n])
        if c * c > dn * dn * n**km1:
            return False
    return True


def hecke_check(table: CoeffTable) -> bool:
    """Exact Hecke relations for an eigenform of level one.

    Checks c(p^(r+1)) = c(p) c(p^r) - p^(k-1) c(p^(r-1)) for every prime power
    in range, and c(n) = prod c(p^e) over the factorization of n, which is
    equivalent to c(mn) = c(m) c(n) for all coprime m, n.
    """
    n_max = table.length
    if n_max < 1 or table.exact[1] != 1:
        return False
    km1 = table.weight - 1
    c = table.exact
    spf = _spf_sieve(n_max).tolist()
    for n in range(2, n_max + 1):
        p = spf[n]
        m, pe = n, 1
        while m % p == 0:
            m //= p
            pe *= p
        if m > 1:
            if c[n] != c[m] * c[pe]:
                return False
        elif pe > p:
            prev = pe // p
            if c[pe] != c[p] * c[prev] - p**km1 * c[prev // p]:
                return False
    return True


def coefficient_statistics(table: CoeffTable, tables: DivisorTables, windows: int = 64) -> dict:
    """Deligne check, Rankin-Selberg constant estimates and a Shiu window ratio."""
    if tables.length < table.length:
        raise ValueError("divisor tables shorter than coefficient table")
    n_max = table.length
    sq = np.cumsum(table.normalized**2)
    x_hi, x_lo = n_max, max(n_max // 2, 1)
    rs_hi = float(sq[x_hi] / x_hi)
    rs_lo = float(sq[x_lo] / x_lo)
    gap = abs(rs_hi - rs_lo) / abs(rs_hi) if rs_hi else 0.0

    dcum = np.concatenate([[0], np.cumsum(tables.d[1 : n_max + 1])])
    shiu = 0.0
    starts = np.unique(np.linspace(2, n_max, windows).astype(np.int64))
    for x in starts:
        y = max(int(round(x ** (2 / 3))), 1)
        hi = min(int(x) + y, n_max)
        if hi < x:
            continue
        total = dcum[hi] - dcum[x - 1]
        shiu = max(shiu, float(total) / (y * max(math.log(x), 1.0)))
    return {
        "deligne_ok": deligne_check(table, tables),
        "rankin_selberg_C": {"at_N": rs_hi, "at_N_half": rs_lo, "relative_gap": gap},
        "shiu_ratio": shiu,
    }


def export_csv(table: CoeffTable, path) -> None:
    """Write header 'weight,N' then rows 'n,c(n),a(n)' (a(n) to 17 significant digits)."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([table.weight, table.length])
        for n in range(1, table.length + 1):
            w.writerow([n, str(table.exact[n]), format(float(table.normalized[n]), ".17g")])


def import_csv(path, form_id: str = "synthetic") -> CoeffTable:
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    weight, n_max = int(rows[0][0]), int(rows[0][1])
    exact = [0] * (n_max + 1)
    for row in rows[1:]:
        exact[int(row[0])] = int(row[1])
    return table_from_exact(exact, weight, form_id)
