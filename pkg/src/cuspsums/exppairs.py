"""Exponent pairs and the bound expressions built from them.

Pairs are exact rationals.  The van der Corput processes are

    A<p, q> = <p / (2p + 2), (p + q + 1) / (2p + 2)>
    B<p, q> = <q - 1/2, p + 1/2>

and a word such as "BABAAB" acts on its argument rightmost letter first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

HALF = Fraction(1, 2)


class InvalidPairError(ValueError):
    pass


@dataclass(frozen=True)
class ExponentPair:
    p: Fraction
    q: Fraction

    def __post_init__(self):
        object.__setattr__(self, "p", Fraction(self.p))
        object.__setattr__(self, "q", Fraction(self.q))
        if not (0 <= self.p <= HALF <= self.q <= 1):
            raise InvalidPairError(f"<{self.p}, {self.q}> violates 0 <= p <= 1/2 <= q <= 1")

    @property
    def moment_admissible(self) -> bool:
        """q >= (p + 1)/2, required by the large-value and moment bounds."""
        return self.q >= (self.p + 1) / 2

    def __str__(self) -> str:
        return f"<{self.p}, {self.q}>"


TRIVIAL = ExponentPair(Fraction(0), Fraction(1))


def process_a(pair: ExponentPair) -> ExponentPair:
    p, q = pair.p, pair.q
    return ExponentPair(p / (2 * p + 2), (p + q + 1) / (2 * p + 2))


def process_b(pair: ExponentPair) -> ExponentPair:
    return ExponentPair(pair.q - HALF, pair.p + HALF)


def apply_process_word(word: str, start: ExponentPair = TRIVIAL) -> ExponentPair:
    """Apply a word over {A, B}; the rightmost letter acts first."""
    word = word.strip().upper()
    if any(ch not in "AB" for ch in word):
        raise ValueError(f"malformed process word {word!r}")
    pair = start
    for ch in reversed(word):
        pair = process_a(pair) if ch == "A" else process_b(pair)
    return pair


@dataclass(frozen=True)
class BoundExpression:
    """k**k_exp * M**(m_exp + eps) * V**v_exp with exact rational exponents."""

    k_exp: Fraction
    m_exp: Fraction
    v_exp: Fraction = Fraction(0)
    has_eps: bool = True

    def evaluate(self, k: float, M: float, V: float = 1.0, eps: float = 0.0) -> float:
        m = float(self.m_exp) + (eps if self.has_eps else 0.0)
        return math.exp(float(self.k_exp) * math.log(k) + m * math.log(M) + float(self.v_exp) * math.log(V))

    def exponents(self) -> tuple[Fraction, Fraction, Fraction]:
        return self.k_exp, self.m_exp, self.v_exp


def _require_positive_p(pair: ExponentPair) -> None:
    if pair.p == 0:
        raise InvalidPairError("p = 0: the second term has exponents 1/p and is undefined")


def theorem2_terms(pair: ExponentPair) -> tuple[BoundExpression, BoundExpression]:
    """The two terms of R << k^2 M^{1+eps} V^-3 + k^{2q/p} M^{1+q/p+eps} V^{-2-(1+2q)/p}."""
    _require_positive_p(pair)
    if not pair.moment_admissible:
        raise InvalidPairError(f"{pair} does not satisfy q >= (p+1)/2")
    p, q = pair.p, pair.q
    first = BoundExpression(Fraction(2), Fraction(1), Fraction(-3))
    second = BoundExpression(2 * q / p, 1 + q / p, -2 - (1 + 2 * q) / p)
    return first, second


def theorem2_bound(pair: ExponentPair, k: float, M: float, V: float, eps: float = 0.01) -> dict:
    """Evaluated large-value count bound plus its exact exponent tuples."""
    first, second = theorem2_terms(pair)
    v1 = first.evaluate(k, M, V, eps)
    v2 = second.evaluate(k, M, V, eps)
    return {
        "value": v1 + v2,
        "terms": [v1, v2],
        "exponents": [first.exponents(), second.exponents()],
    }


def psi_threshold(pair: ExponentPair) -> Fraction:
    """The moment exponent 1 + (1 + 2q)/p where the two Psi branches meet."""
    _require_positive_p(pair)
    return 1 + (1 + 2 * pair.q) / pair.p


def _phi_branches(alpha, beta, A) -> tuple[BoundExpression, BoundExpression]:
    hi = BoundExpression(alpha * A + 2 * (1 - alpha), beta * A + (1 - 2 * beta))
    lo = BoundExpression(A / 2 + 1, A / 4 + HALF)
    return hi, lo


def _psi_branches(pair, alpha, beta, A) -> tuple[BoundExpression, BoundExpression]:
    p, q = pair.p, pair.q
    hi = BoundExpression(
        alpha * A - alpha - alpha / p + (1 - alpha) * 2 * q / p,
        beta * A + 1 - beta - beta / p + (1 - 2 * beta) * q / p,
    )
    lo = BoundExpression(
        A / 2 - HALF - 1 / (2 * p) + q / p,
        A / 4 + Fraction(3, 4) - 1 / (4 * p) + q / (2 * p),
    )
    return hi, lo


def theorem3_phi_psi(pair: ExponentPair, alpha, beta, A_exp, gamma=None, delta=None) -> dict:
    """Phi and Psi of the general moment bound, with the branch chosen by A.

    At A = 2 (Phi) and A = 1 + (1+2q)/p (Psi) both branches are evaluated and
    must coincide.  ``gamma``/``delta`` (validity range of the pointwise bound)
    are only echoed back.
    """
    _require_positive_p(pair)
    alpha, beta, A = Fraction(alpha), Fraction(beta), Fraction(A_exp)
    if A < 0:
        raise ValueError("moment exponent must be nonnegative")
    phi_hi, phi_lo = _phi_branches(alpha, beta, A)
    psi_hi, psi_lo = _psi_branches(pair, alpha, beta, A)
    threshold = psi_threshold(pair)
    if A == 2:
        assert phi_hi.exponents() == phi_lo.exponents()
    if A == threshold:
        assert psi_hi.exponents() == psi_lo.exponents()
    return {
        "Phi": phi_hi if A >= 2 else phi_lo,
        "Psi": psi_hi if A >= threshold else psi_lo,
        "main": BoundExpression(A / 2, A / 4 + 1, has_eps=False),
        "psi_threshold": threshold,
        "gamma": gamma,
        "delta": delta,
    }


# pointwise bound rows: (label, k exponent, M exponent, eps?, log power, theta range)
POINTWISE_ROWS = [
    ("k^(2/3) M^(1/3) log^(1/3) M", Fraction(2, 3), Fraction(1, 3), False, Fraction(1, 3), (Fraction(0), HALF)),
    ("k^(1/4) M^(3/8+eps)", Fraction(1, 4), Fraction(3, 8), True, 0, (Fraction(1, 10), Fraction(1, 4))),
    ("k^(2/3) M^(13/48+eps)", Fraction(2, 3), Fraction(13, 48), True, 0, (Fraction(1, 4), Fraction(19, 64))),
    ("M^(15/32+eps)", Fraction(0), Fraction(15, 32), True, 0, (Fraction(19, 64), Fraction(21, 64))),
    ("k^(2/3) M^(1/4+eps)", Fraction(2, 3), Fraction(1, 4), True, 0, (Fraction(21, 64), Fraction(3, 8))),
    ("M^(1/2)", Fraction(0), HALF, False, 0, (Fraction(0), HALF)),
]


def _theta_at_least(k: Fraction, M: Fraction, r: Fraction) -> bool:
    # log k / log M >= r  <=>  k**den >= M**num  (k, M >= 1)
    return k ** r.denominator >= M ** r.numerator


def _theta_at_most(k: Fraction, M: Fraction, r: Fraction) -> bool:
    return k ** r.denominator <= M ** r.numerator


def pointwise_bound_table(k: int, M, eps: float = 0.01) -> dict:
    """Evaluate every applicable row of the pointwise bound and return the smallest."""
    kf, Mf = Fraction(k), Fraction(M)
    if Mf <= 1:
        raise ValueError("M must exceed 1")
    if not (1 <= kf and kf * kf <= Mf):
        raise ValueError(f"k={k} outside 1 <= k <= M^(1/2)")
    logM = math.log(float(M))
    rows = []
    for label, ke, me, with_eps, logp, (lo, hi) in POINTWISE_ROWS:
        if not (_theta_at_least(kf, Mf, lo) and _theta_at_most(kf, Mf, hi)):
            continue
        m = float(me) + (eps if with_eps else 0.0)
        value = float(k) ** float(ke) * float(M) ** m * logM ** float(logp)
        rows.append((value, label))
    value, label = min(rows)
    return {"value": value, "regime": label, "rows": {lab: v for v, lab in rows}}


def es_pair_sum_bound(pair: ExponentPair, A_coef: float, M_len: float) -> float:
    """A^p M^(q - p/2) + A^-1 M^(1/2) for sums of e(A sqrt n) over [M, M + Delta]."""
    if A_coef <= 0 or M_len < 1:
        raise ValueError("need A > 0 and M >= 1")
    p, q = float(pair.p), float(pair.q)
    return A_coef**p * M_len ** (q - p / 2) + M_len**0.5 / A_coef
