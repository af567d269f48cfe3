from fractions import Fraction

import pytest
from hypothesis import given

from freeprod.errors import CapMismatch
from freeprod.magnus import (
    Sign,
    TruncatedSeries,
    binomial_coefficients,
    embed,
    letter_series,
    series_mul,
    series_one,
    word_sign,
)
from freeprod.words import Letter, multiply, normalize

from conftest import W, reduced_words


def S(cap, **terms):
    """Series from keyword terms: S(2, _=1, X1=1, X1X2=-1); ``_`` is the constant."""
    out = {}
    for name, c in terms.items():
        mono = () if name == "_" else tuple(int(t) for t in name.split("X")[1:])
        out[mono] = Fraction(c)
    return TruncatedSeries(cap, out)


def test_series_mul_examples():
    assert series_mul(S(2, _=1, X1=1), S(2, _=1, X2=1)) == S(2, _=1, X1=1, X2=1, X1X2=1)
    assert series_mul(S(2, _=1, X1=1), S(2, _=1, X1=-1, X1X1=1)) == series_one(2)
    s = S(3, _=2, X1X2=5)
    assert series_mul(s, series_one(3)) == s == series_mul(series_one(3), s)


def test_series_mul_requires_equal_caps():
    with pytest.raises(CapMismatch):
        series_mul(series_one(2), series_one(3))


def test_letter_series_examples():
    assert letter_series(Letter(1, Fraction(1)), 3) == S(3, _=1, X1=1)
    assert letter_series(Letter(1, Fraction(-1)), 2) == S(2, _=1, X1=-1, X1X1=1)
    assert letter_series(Letter(1, Fraction(1, 2)), 2) == S(2, _=1, X1=Fraction(1, 2), X1X1=Fraction(-1, 8))


def test_binomial_coefficients_match_falling_factorial():
    q = Fraction(-3, 2)
    c = binomial_coefficients(q, 4)
    assert list(map(Fraction, c)) == [1, q, q * (q - 1) / 2, q * (q - 1) * (q - 2) / 6, q * (q - 1) * (q - 2) * (q - 3) / 24]


def test_word_sign_examples():
    assert word_sign(()) == Sign.Zero
    assert word_sign(W("g1^-1 g2")) == Sign.Negative
    assert word_sign(W("g1^2 g2^3")) == Sign.Positive
    assert embed(W("g1^2 g2^3"), 2).coefficient((1, 2)) == 6


@given(reduced_words(max_size=5), reduced_words(max_size=5))
def test_embedding_is_a_homomorphism(u, w):
    cap = 4
    assert embed(multiply(u, w), cap) == series_mul(embed(u, cap), embed(w, cap))


@given(reduced_words(min_size=1, max_size=7))
def test_full_monomial_coefficient(w):
    full = tuple(f for f, _ in w)
    prod = Fraction(1)
    for _, q in w:
        prod *= q
    assert embed(w, len(w)).coefficient(full) == prod


@given(reduced_words(min_size=1, max_size=7))
def test_sign_matches_fixed_cap_definition(w):
    m, c = embed(w, len(w)).lowest_term()
    assert word_sign(w) == (Sign.Positive if c > 0 else Sign.Negative)


@given(reduced_words(max_size=5), reduced_words(max_size=5))
def test_positive_cone_is_a_semigroup(u, w):
    if word_sign(u) == Sign.Positive and word_sign(w) == Sign.Positive:
        assert word_sign(normalize(u + w)) == Sign.Positive
