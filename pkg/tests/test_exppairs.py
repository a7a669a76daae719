import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cuspsums.exppairs import (
    TRIVIAL,
    ExponentPair,
    InvalidPairError,
    apply_process_word,
    es_pair_sum_bound,
    pointwise_bound_table,
    psi_threshold,
    theorem2_bound,
    theorem2_terms,
    theorem3_phi_psi,
)

BABAAB = apply_process_word("BABAAB")


def test_words():
    assert apply_process_word("") == TRIVIAL
    assert apply_process_word("B") == ExponentPair(F(1, 2), F(1, 2))
    assert apply_process_word("AB") == ExponentPair(F(1, 6), F(2, 3))
    assert BABAAB == ExponentPair(F(2, 9), F(11, 18))
    assert str(BABAAB) == "<2/9, 11/18>"
    with pytest.raises(ValueError):
        apply_process_word("BAC")


@given(st.text(alphabet="AB", max_size=12))
def test_random_words_give_valid_pairs(word):
    pair = apply_process_word(word)
    assert 0 <= pair.p <= F(1, 2) <= pair.q <= 1
    assert pair.moment_admissible == (pair.q >= (pair.p + 1) / 2)


def test_invalid_pair():
    with pytest.raises(InvalidPairError):
        ExponentPair(F(3, 5), F(1, 2))


def test_large_value_bound_exponents():
    first, second = theorem2_terms(BABAAB)
    assert first.exponents() == (2, 1, -3)
    assert second.exponents() == (F(11, 2), F(15, 4), -12)
    res = theorem2_bound(BABAAB, 1, 1e4, 1e2, eps=0.0)
    assert res["terms"][0] == pytest.approx(1e-2)
    assert res["terms"][1] == pytest.approx(1e-9)
    assert res["value"] == pytest.approx(sum(res["terms"]))


def test_p_zero_rejected():
    with pytest.raises(InvalidPairError):
        theorem2_terms(TRIVIAL)
    with pytest.raises(InvalidPairError):
        theorem3_phi_psi(TRIVIAL, "2/3", "1/3", 3)
    # B gives <1/2, 1/2>, which fails q >= (p + 1)/2
    assert not apply_process_word("B").moment_admissible
    with pytest.raises(InvalidPairError):
        theorem2_terms(apply_process_word("B"))


def test_phi_psi_values():
    out = theorem3_phi_psi(BABAAB, F(2, 3), F(1, 3), 3)
    assert out["Phi"].exponents()[:2] == (F(8, 3), F(4, 3))
    assert out["Psi"].exponents()[:2] == (F(3, 2), F(7, 4))
    assert out["main"].exponents()[:2] == (F(3, 2), F(7, 4))
    assert out["psi_threshold"] == 11 == psi_threshold(BABAAB)


@pytest.mark.parametrize("A", [2, 11])
def test_branch_boundaries(A):
    out = theorem3_phi_psi(BABAAB, F(2, 3), F(1, 3), A, gamma=F(1, 10), delta=F(1, 4))
    assert out["gamma"] == F(1, 10) and out["delta"] == F(1, 4)


@given(st.fractions(0, 1), st.fractions(0, 1))
def test_branches_meet(alpha, beta):
    # both thresholds are where the two branches coincide for any alpha, beta
    theorem3_phi_psi(BABAAB, alpha, beta, 2)
    theorem3_phi_psi(BABAAB, alpha, beta, psi_threshold(BABAAB))


def test_pointwise_rows():
    t = pointwise_bound_table(1, 10**6)
    assert t["regime"] == "k^(2/3) M^(1/3) log^(1/3) M"
    assert t["value"] == pytest.approx(100 * math.log(1e6) ** (1 / 3))
    assert t["rows"]["M^(1/2)"] == 1000.0
    t = pointwise_bound_table(100, 10**10)
    assert t["regime"] == "k^(1/4) M^(3/8+eps)"
    assert t["value"] == pytest.approx(100**0.25 * 1e10 ** (0.385))
    with pytest.raises(ValueError):
        pointwise_bound_table(1001, 10**6)


@given(st.integers(2, 10**12), st.data())
def test_pointwise_never_above_trivial(M, data):
    k = data.draw(st.integers(1, math.isqrt(M)))
    t = pointwise_bound_table(k, M)
    assert t["value"] <= math.sqrt(M) * (1 + 1e-12)


def test_es_bound_examples():
    half = apply_process_word("B")
    assert es_pair_sum_bound(half, 1.0, 1e4) == pytest.approx(110.0)
    assert es_pair_sum_bound(TRIVIAL, 1.0, 4.0) == pytest.approx(6.0)
    with pytest.raises(ValueError):
        es_pair_sum_bound(half, 0.0, 10.0)


@pytest.mark.parametrize("A,M", [(7.0, 1e3), (0.5, 1e4), (30.0, 1e5)])
def test_es_bound_dominates_direct_sum(A, M):
    n = np.arange(int(M), int(2 * M) + 1)
    direct = abs(np.exp(2j * np.pi * A * np.sqrt(n)).sum())
    assert direct <= es_pair_sum_bound(BABAAB, A, M)
