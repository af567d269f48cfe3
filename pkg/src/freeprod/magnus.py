"""Computable order on the free product via a Magnus-type embedding.

A letter ``(alpha, q)`` is sent to the binomial series ``(1 + X_alpha)^q`` in
noncommuting variables ``X_1, X_2, ...`` over the rationals.  A word is
positive when the lowest nonzero non-constant term of its image (degree first,
then lexicographic in the variable order) has a positive coefficient.

Series are plain dicts mapping monomials (tuples of factor ids) to nonzero
rationals; anything above the cap is dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence, Tuple

from .errors import CapMismatch, InternalDegreeBoundViolated

Monomial = Tuple[int, ...]


class Sign(IntEnum):
    Negative = -1
    Zero = 0
    Positive = 1


def monomial_key(m: Monomial) -> tuple[int, Monomial]:
    """Graded-lex sort key."""
    return (len(m), m)


@dataclass(frozen=True)
class TruncatedSeries:
    cap: int
    terms: Mapping[Monomial, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {m: c for m, c in self.terms.items() if c != 0 and len(m) <= self.cap}
        object.__setattr__(self, "terms", clean)

    def coefficient(self, m: Monomial) -> Fraction:
        return Fraction(self.terms.get(tuple(m), 0))

    def lowest_term(self) -> tuple[Monomial, Fraction] | None:
        """Least non-constant monomial with nonzero coefficient, or None."""
        rest = [m for m in self.terms if m]
        if not rest:
            return None
        m = min(rest, key=monomial_key)
        return m, Fraction(self.terms[m])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.cap == other.cap and dict(self.terms) == dict(other.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=monomial_key):
            c = Fraction(self.terms[m])
            mono = "".join(f"X{a}" for a in m)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def series_one(cap: int) -> TruncatedSeries:
    return TruncatedSeries(cap, {(): 1})


def _mul_terms(s: Mapping, t: Mapping, cap: int) -> dict:
    out: dict = {}
    for m1, c1 in s.items():
        room = cap - len(m1)
        for m2, c2 in t.items():
            if len(m2) > room:
                continue
            m = m1 + m2
            out[m] = out.get(m, 0) + c1 * c2
    return {m: c for m, c in out.items() if c != 0}


def series_mul(s: TruncatedSeries, t: TruncatedSeries) -> TruncatedSeries:
    if s.cap != t.cap:
        raise CapMismatch(f"cannot multiply series with caps {s.cap} and {t.cap}")
    return TruncatedSeries(s.cap, _mul_terms(s.terms, t.terms, s.cap))


@lru_cache(maxsize=4096)
def binomial_coefficients(q: Fraction, cap: int) -> tuple:
    """C(q, 0..cap) for rational q; integral values are returned as int."""
    coeffs = []
    c = Fraction(1)
    for j in range(cap + 1):
        coeffs.append(int(c) if c.denominator == 1 else c)
        c = c * (q - j) / (j + 1)
    return tuple(coeffs)


def _letter_terms(factor: int, q: Fraction, cap: int) -> dict:
    return {
        (factor,) * j: c
        for j, c in enumerate(binomial_coefficients(Fraction(q), cap))
        if c != 0
    }


def letter_series(letter: Sequence, cap: int) -> TruncatedSeries:
    factor, q = letter[0], letter[1]
    return TruncatedSeries(cap, _letter_terms(factor, Fraction(q), cap))


def _embed_terms(word: Iterable[Sequence], cap: int) -> dict:
    acc: dict = {(): 1}
    for factor, q in word:
        acc = _mul_terms(acc, _letter_terms(factor, Fraction(q), cap), cap)
    return acc


def embed(word: Sequence[Sequence], cap: int) -> TruncatedSeries:
    """Image of a word (sequence of ``(factor, value)`` letters) truncated at ``cap``."""
    return TruncatedSeries(cap, _embed_terms(word, cap))


def _lowest(terms: Mapping) -> tuple[Monomial, object] | None:
    best = None
    for m, c in terms.items():
        if m and (best is None or monomial_key(m) < monomial_key(best)):
            best = m
    return None if best is None else (best, terms[best])


def word_sign(word: Sequence[Sequence]) -> Sign:
    """Sign of a reduced word in the Magnus order.

    The lowest term always lives in degree <= syllable length, so the cap is
    raised by doubling up to that bound; lower degrees are exact at every cap.
    """
    n = len(word)
    if n == 0:
        return Sign.Zero
    cap = 1
    while True:
        low = _lowest(_embed_terms(word, cap))
        if low is not None:
            return Sign.Positive if low[1] > 0 else Sign.Negative
        if cap >= n:
            raise InternalDegreeBoundViolated(
                f"no nonzero term up to degree {n} for a reduced word"
            )
        cap = min(2 * cap, n)
