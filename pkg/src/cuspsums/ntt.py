"""Multi-prime number-theoretic transforms with exact CRT reconstruction.

Convolutions of integer sequences are computed modulo several NTT-friendly
primes below 2**31 (so every residue product fits in int64), then lifted back
to exact signed integers with Garner's algorithm.  The number of primes is
derived from a rigorous bound on the output coefficients; asking for fewer
primes than the bound requires raises instead of wrapping silently.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

# every prime used has 2**_TWO_ADIC dividing p - 1, so transforms up to that
# length are available
_TWO_ADIC = 22


class ReconstructionWidthError(ArithmeticError):
    """The prime product is too small to represent the result exactly."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic for n < 3.3e24
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _primitive_root(p: int) -> int:
    factors = _prime_factors(p - 1)
    g = 2
    while any(pow(g, (p - 1) // f, p) == 1 for f in factors):
        g += 1
    return g


@lru_cache(maxsize=None)
def ntt_primes() -> tuple[tuple[int, int], ...]:
    """All primes p = c*2**22 + 1 < 2**31, largest first, with a generator each."""
    out = []
    c = (2**31 - 1) >> _TWO_ADIC
    while c > 0:
        p = (c << _TWO_ADIC) + 1
        if p < 2**31 and _is_prime(p):
            out.append((p, _primitive_root(p)))
        c -= 1
    return tuple(out)


def _powers(base: int, count: int, p: int) -> np.ndarray:
    """[base**0, ..., base**(count-1)] mod p, built by doubling."""
    out = np.ones(count, dtype=np.int64)
    if count > 1:
        out[1] = base % p
    filled = 2
    step = base * base % p
    while filled < count:
        take = min(filled, count - filled)
        out[filled:filled + take] = out[:take] * step % p
        filled += take
        step = step * step % p
    return out


@lru_cache(maxsize=64)
def _twiddles(p: int, g: int, length: int, inverse: bool) -> np.ndarray:
    root = pow(g, (p - 1) // length, p)
    if inverse:
        root = pow(root, p - 2, p)
    tw = _powers(root, max(length // 2, 1), p)
    tw.setflags(write=False)
    return tw


def _forward(x: np.ndarray, p: int, g: int) -> np.ndarray:
    # decimation in frequency: natural order in, bit-reversed order out
    n = x.size
    tw = _twiddles(p, g, n, False)
    size = n
    while size >= 2:
        half = size // 2
        blocks = x.reshape(-1, size)
        u = blocks[:, :half].copy()
        v = blocks[:, half:]
        w = tw[:: n // size][:half]
        s = u + v
        s[s >= p] -= p
        d = u - v
        d[d < 0] += p
        blocks[:, :half] = s
        blocks[:, half:] = d * w % p
        size = half
    return x


def _inverse(x: np.ndarray, p: int, g: int) -> np.ndarray:
    # decimation in time: bit-reversed order in, natural order out
    n = x.size
    tw = _twiddles(p, g, n, True)
    size = 2
    while size <= n:
        half = size // 2
        blocks = x.reshape(-1, size)
        u = blocks[:, :half].copy()
        v = blocks[:, half:] * tw[:: n // size][:half] % p
        s = u + v
        s[s >= p] -= p
        d = u - v
        d[d < 0] += p
        blocks[:, :half] = s
        blocks[:, half:] = d
        size *= 2
    return x * pow(n, p - 2, p) % p


def convolve_mod(f: np.ndarray, g: np.ndarray, p: int, root: int, out_len: int) -> np.ndarray:
    """Cyclic-free convolution of residue vectors mod p, truncated to out_len."""
    full = f.size + g.size - 1
    size = 1
    while size < full:
        size *= 2
    if size > 1 << _TWO_ADIC:
        raise ValueError(f"transform length {size} exceeds 2**{_TWO_ADIC}")
    fa = np.zeros(size, dtype=np.int64)
    fa[: f.size] = f
    fa = _forward(fa, p, root)
    if g is f:
        prod = fa * fa % p
    else:
        ga = np.zeros(size, dtype=np.int64)
        ga[: g.size] = g
        prod = fa * _forward(ga, p, root) % p
    return _inverse(prod, p, root)[:out_len]


def residues(values: np.ndarray, p: int) -> np.ndarray:
    """Reduce an object array of Python ints into [0, p) as int64."""
    return (values % p).astype(np.int64)


def primes_for_bound(bound: int) -> int:
    """Smallest prime count whose product P satisfies P > 2*bound."""
    prod = 1
    for count, (p, _) in enumerate(ntt_primes(), start=1):
        prod *= p
        if prod > 2 * bound:
            return count
    raise ReconstructionWidthError(f"bound of {bound.bit_length()} bits exceeds the available prime pool")


def crt_signed(res: list[np.ndarray], primes: list[int]) -> np.ndarray:
    """Garner reconstruction into the symmetric range (-P/2, P/2]; object array out."""
    digits: list[np.ndarray] = []
    for i, p in enumerate(primes):
        acc = np.zeros_like(res[i])
        coeff = 1
        for j in range(i):
            acc = (acc + digits[j] * (coeff % p)) % p
            coeff = coeff * primes[j] % p
        inv = pow(coeff, p - 2, p)
        digits.append((res[i] - acc) % p * inv % p)
    value = digits[-1].astype(object)
    for i in range(len(primes) - 2, -1, -1):
        value = value * primes[i] + digits[i].astype(object)
    modulus = 1
    for p in primes:
        modulus *= p
    half = modulus // 2
    return np.where(value > half, value - modulus, value)


def exact_convolve(f: np.ndarray, g: np.ndarray, out_len: int, n_primes: int | None = None) -> np.ndarray:
    """Exact truncated product of two integer sequences (object arrays).

    ``n_primes`` forces a prime count; it must still cover the rigorous
    coefficient bound max|f| * max|g| * min(len f, len g).
    """
    max_f = max((abs(int(v)) for v in f), default=0)
    max_g = max((abs(int(v)) for v in g), default=0)
    bound = max_f * max_g * min(f.size, g.size)
    needed = primes_for_bound(bound)
    if n_primes is None:
        n_primes = needed
    elif n_primes < needed:
        raise ReconstructionWidthError(
            f"{n_primes} primes cannot hold coefficients up to {bound.bit_length()} bits (need {needed})"
        )
    chosen = ntt_primes()[:n_primes]
    res = []
    for p, root in chosen:
        fr = residues(f, p)
        gr = fr if g is f else residues(g, p)
        res.append(convolve_mod(fr, gr, p, root, out_len))
    out = crt_signed(res, [p for p, _ in chosen])
    if out.size < out_len:
        out = np.concatenate([out, np.zeros(out_len - out.size, dtype=object)])
    return out
