"""Bessel J of integer order, and integrals of y*J_nu(y).

Three regimes:
    x < max(12, 2*nu)          ascending series, summed in 50-digit decimal
    x > 30 + nu**2/2           Hankel asymptotic expansion
    otherwise                  Miller's downward recurrence, normalized by
                               J_0 + 2*sum J_2k = 1
"""

from __future__ import annotations

import math
from decimal import Decimal, localcontext

import numpy as np

MAX_ORDER = 20
MAX_ARG = 1e6

_SQRT_HALF = math.sqrt(0.5)


def _check(nu: int, x: float) -> None:
    if not (isinstance(nu, (int, np.integer)) and 0 <= nu <= MAX_ORDER):
        raise ValueError(f"order must be an integer in [0, {MAX_ORDER}], got {nu!r}")
    if not (0 <= x <= MAX_ARG) or math.isnan(x):
        raise ValueError(f"argument must lie in [0, {MAX_ARG:g}], got {x!r}")


def series_threshold(nu: int) -> float:
    return max(12.0, 2.0 * nu)


def asymptotic_threshold(nu: int) -> float:
    return 30.0 + nu * nu / 2.0


def _series(nu: int, x: float) -> float:
    with localcontext() as ctx:
        ctx.prec = 50
        half = Decimal(x) / 2
        h2 = half * half
        term = half**nu / math.factorial(nu)
        total = term
        m = 0
        tiny = term.copy_abs() * Decimal("1e-45")
        while True:
            m += 1
            term = -term * h2 / (m * (m + nu))
            total += term
            if term.copy_abs() < tiny or (m > x and term.copy_abs() < total.copy_abs() * Decimal("1e-40")):
                break
        return float(total)


def hankel_coefficients(nu: int, count: int) -> list[float]:
    """a_k(nu) = prod_{j=1..k} (4nu^2 - (2j-1)^2) / (k! 8^k)."""
    mu = 4 * nu * nu
    out = [1.0]
    for k in range(1, count):
        out.append(out[-1] * (mu - (2 * k - 1) ** 2) / (8.0 * k))
    return out


def _phase(nu: int) -> tuple[float, float]:
    """(cos phi, sin phi) for phi = nu*pi/2 + pi/4, exactly."""
    table = {
        0: (1.0, 1.0),
        1: (-1.0, 1.0),
        2: (-1.0, -1.0),
        3: (1.0, -1.0),
    }
    c, s = table[nu % 4]
    return c * _SQRT_HALF, s * _SQRT_HALF


def _asymptotic(nu: int, x: float) -> float:
    coef = hankel_coefficients(nu, 60)
    p = q = 0.0
    prev = math.inf
    xp = 1.0
    for k, a in enumerate(coef):
        term = a / xp
        if abs(term) > prev:
            break
        if k % 4 == 0:
            p += term
        elif k % 4 == 1:
            q += term
        elif k % 4 == 2:
            p -= term
        else:
            q -= term
        prev = abs(term) if term != 0 else prev
        if abs(term) < 1e-18 * max(abs(p), 1e-300):
            break
        xp *= x
    cphi, sphi = _phase(nu)
    cx, sx = math.cos(x), math.sin(x)
    # chi = x - phi
    cos_chi = cx * cphi + sx * sphi
    sin_chi = sx * cphi - cx * sphi
    return math.sqrt(2.0 / (math.pi * x)) * (p * cos_chi - q * sin_chi)


def _miller(nu: int, x: float) -> float:
    start = int(x + 40 + 12 * x ** (1 / 3))
    start += start % 2
    j_next, j_cur = 0.0, 1e-300
    norm = 0.0
    result = 0.0
    for m in range(start, 0, -1):
        j_prev = 2.0 * m / x * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        # j_cur now holds the unnormalized J_{m-1}
        if abs(j_cur) > 1e250:
            j_cur *= 1e-250
            j_next *= 1e-250
            norm *= 1e-250
            result *= 1e-250
        if m - 1 == nu:
            result = j_cur
        if (m - 1) % 2 == 0 and m - 1 > 0:
            norm += 2.0 * j_cur
    norm += j_cur
    return result / norm


def bessel_j(nu: int, x: float) -> float:
    """J_nu(x) for integer 0 <= nu <= 20 and 0 <= x <= 1e6."""
    _check(nu, x)
    if x == 0.0:
        return 1.0 if nu == 0 else 0.0
    if x < series_threshold(nu):
        return _series(nu, x)
    if x > asymptotic_threshold(nu):
        return _asymptotic(nu, x)
    return _miller(nu, x)


def bessel_j_quadrature(nu: int, x: float, points: int | None = None) -> float:
    """(1/pi) int_0^pi cos(nu*t - x sin t) dt by the periodic trapezoid rule.

    Spectrally accurate once the node count exceeds x + nu by a margin;
    absolute accuracy is about 1e-16, so it cannot resolve very small values.
    """
    if points is None:
        points = 2 * int(x + nu) + 64
    t = 2.0 * np.pi * np.arange(points) / points
    return float(np.mean(np.cos(nu * t - x * np.sin(t))))


# --- integrals of y * J_nu(y) -------------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


def _gauss_panels(f, lo: float, hi: float, width: float) -> float:
    if hi <= lo:
        return 0.0
    panels = max(1, math.ceil((hi - lo) / width))
    edges = np.linspace(lo, hi, panels + 1)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        ys = mid + half * _GL_NODES
        total += half * float(np.dot(_GL_WEIGHTS, [f(y) for y in ys]))
    return total


def _antiderivative_coefficients(nu: int, count: int) -> np.ndarray:
    """gamma_j with d/dy[e^{iy} sum_j gamma_j y^(1/2-j)] = e^{iy} sqrt(2/pi) sum_j i^j a_j y^(1/2-j)."""
    a = hankel_coefficients(nu, count)
    scale = math.sqrt(2.0 / math.pi)
    gam = np.zeros(count, dtype=complex)
    prev = 0j
    for j in range(count):
        beta = scale * (1j**j) * a[j]
        prev = -1j * (beta - (1.5 - j) * prev)
        gam[j] = prev
    return gam


def _asymptotic_antiderivative(nu: int, y: np.ndarray, terms: int = 24) -> np.ndarray:
    """Re[e^{-i phi} e^{iy} G(y)], an antiderivative of y J_nu(y) for large y."""
    gam = _antiderivative_coefficients(nu, terms)
    y = np.asarray(y, dtype=float)
    inv = 1.0 / y
    acc = np.zeros(y.shape, dtype=complex)
    for g in gam[::-1]:
        acc = acc * inv + g
    cphi, sphi = _phase(nu)
    rot = np.exp(1j * y) * (cphi - 1j * sphi)
    return np.real(rot * acc * np.sqrt(y))


def integral_y_bessel(nu: int, y1, y2) -> np.ndarray:
    """int_{y1}^{y2} y J_nu(y) dy, elementwise over arrays.

    Below the asymptotic threshold the integrand is integrated by 24-point
    Gauss-Legendre panels no wider than one period; above it the closed-form
    asymptotic antiderivative is differenced.
    """
    y1 = np.atleast_1d(np.asarray(y1, dtype=float))
    y2 = np.atleast_1d(np.asarray(y2, dtype=float))
    cut = asymptotic_threshold(nu) + 1.0
    out = np.zeros(np.broadcast(y1, y2).shape)
    y1, y2 = np.broadcast_arrays(y1, y2)
    hi_lo = np.maximum(y1, cut)
    high = y2 > hi_lo
    if high.any():
        out[high] = _asymptotic_antiderivative(nu, y2[high]) - _asymptotic_antiderivative(nu, hi_lo[high])
    for i in np.flatnonzero(y1 < cut):
        lo, hi = y1.flat[i], min(y2.flat[i], cut)
        out.flat[i] += _gauss_panels(lambda t: t * bessel_j(nu, t), lo, hi, 2 * math.pi)
    return out
