from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freeprod.errors import EmptyWord, NotCyclicallyReduced, ParseError, PreconditionViolated
from freeprod.factors import Cmp, FactorElement, FactorSystem, factor_compare
from freeprod.words import (
    Strong,
    compare,
    cyclic_reduce,
    factorize_u1_u2,
    format_word,
    invert,
    is_cyclically_reduced,
    is_reduced,
    is_strongly_negative,
    is_strongly_positive,
    lemma4_sign,
    multiply,
    normalize,
    parse_word,
    rotate,
    strongly_signed_cyclic_permutation,
    word,
)

from conftest import W, reduced_words

a, b = W("g1"), W("g2")
A, B = invert(a), invert(b)


def test_normalize_examples():
    assert normalize([(1, 1), (1, 2)]) == W("g1^3")
    assert normalize([(1, 1), (1, -1)]) == ()
    assert normalize([(1, 1), (2, 2), (2, -2), (1, 1)]) == W("g1^2")


def test_group_operation_examples():
    assert multiply(a, A) == ()
    assert invert(a + b) == B + A
    assert cyclic_reduce(a + b + A) == (a, b)


def test_compare_examples():
    assert compare(b, a) == Cmp.LT
    assert compare((), a) == Cmp.LT
    assert compare(a + b, a + b) == Cmp.EQ


def test_strongly_positive_examples():
    assert is_strongly_positive(a)
    assert not is_strongly_positive(a + B)
    assert is_strongly_positive(a + b)
    with pytest.raises(EmptyWord):
        is_strongly_positive(())


def test_quotient_sign_examples():
    with pytest.raises(PreconditionViolated):
        lemma4_sign(a, a + b)
    assert lemma4_sign(b, a) == Strong.StronglyPositive
    assert lemma4_sign(a, b) == Strong.StronglyNegative


def test_factorization_examples():
    assert factorize_u1_u2(()) == ((), ())
    assert factorize_u1_u2(a + B) == (a, b)
    assert factorize_u1_u2(A + b) == ((), B + a)


def test_rotation_examples():
    assert strongly_signed_cyclic_permutation(a) == (0, Strong.StronglyPositive)
    assert strongly_signed_cyclic_permutation(A + b) == (0, Strong.StronglyNegative)
    assert strongly_signed_cyclic_permutation(a + B) == (1, Strong.StronglyPositive)
    with pytest.raises(NotCyclicallyReduced):
        strongly_signed_cyclic_permutation(a + b + a)


def test_parse_and_format_round_trip():
    w = parse_word("g1^2 g2^-1/2 g3")
    assert w == word((1, 2), (2, Fraction(-1, 2)), (3, 1))
    assert parse_word(format_word(w)) == w
    assert parse_word("1") == () == parse_word("")
    assert parse_word("g1 g1") == W("g1^2")
    assert format_word(()) == "1"


@pytest.mark.parametrize("text", ["g0", "g1^0", "x1", "g1^", "g1^1/0"])
def test_parse_rejects(text):
    with pytest.raises(ParseError):
        parse_word(text)


def test_parse_checks_factor_system():
    fs = FactorSystem.free(2)
    with pytest.raises(ParseError):
        parse_word("g3", fs)
    with pytest.raises(ParseError):
        parse_word("g1^1/2", fs)


@given(reduced_words(), reduced_words())
def test_normalize_idempotent_and_multiplicative(u, w):
    assert normalize(u) == u and is_reduced(u)
    assert normalize(multiply(u, w)) == multiply(u, w) == normalize(u + w)
    assert multiply(u, invert(u)) == ()


@given(reduced_words(min_size=1))
def test_cyclic_reduce_conjugates(w):
    c, v = cyclic_reduce(w)
    assert multiply(multiply(c, v), invert(c)) == w
    assert v == () or is_cyclically_reduced(v)


@settings(max_examples=60)
@given(reduced_words(max_size=5), reduced_words(max_size=5), reduced_words(max_size=5))
def test_order_left_invariant_and_antisymmetric(u, w, c):
    r = compare(u, w)
    assert compare(w, u) == {Cmp.LT: Cmp.GT, Cmp.GT: Cmp.LT, Cmp.EQ: Cmp.EQ}[r]
    assert (r == Cmp.EQ) == (u == w)
    assert compare(multiply(c, u), multiply(c, w)) == r


@given(st.integers(1, 3), st.fractions(max_denominator=4), st.fractions(max_denominator=4))
def test_order_restricts_to_factor_order(f, p, q):
    u = normalize([(f, p)])
    w = normalize([(f, q)])
    assert compare(u, w) == factor_compare(FactorElement(f, p), FactorElement(f, q))


@given(reduced_words(min_size=1))
def test_factorization_parts_are_strongly_positive(w):
    u1, u2 = factorize_u1_u2(w)
    assert u1 + invert(u2) == w
    assert u1 == () or is_strongly_positive(u1)
    assert u2 == () or is_strongly_positive(u2)


@given(reduced_words(min_size=1))
def test_rotation_is_strongly_signed(w):
    _, v = cyclic_reduce(w)
    r, kind = strongly_signed_cyclic_permutation(v)
    rv = rotate(v, r)
    if kind == Strong.StronglyPositive:
        assert is_strongly_positive(rv)
    else:
        assert is_strongly_negative(rv)
