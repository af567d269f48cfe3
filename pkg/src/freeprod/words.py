"""Reduced words in the free product and strongly positive word machinery.

A word is a tuple of :class:`Letter`; it is reduced when no letter is the
identity and adjacent letters lie in distinct factors.  The empty tuple is 1.
"""

from __future__ import annotations

import re
from enum import Enum
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence, Tuple

from .errors import EmptyWord, NotCyclicallyReduced, ParseError, PreconditionViolated
from .factors import Cmp, FactorSystem
from .magnus import Sign, word_sign


class Letter(NamedTuple):
    factor: int
    value: Fraction

    def __str__(self) -> str:
        return f"g{self.factor}^{self.value}"


Word = Tuple[Letter, ...]


class Strong(str, Enum):
    StronglyPositive = "StronglyPositive"
    StronglyNegative = "StronglyNegative"


def letter(factor: int, value) -> Letter:
    return Letter(factor, Fraction(value))


def word(*pairs) -> Word:
    """Shorthand: ``word((1, 2), (2, -1))``; the result is normalized."""
    return normalize(Letter(f, Fraction(v)) for f, v in pairs)


def normalize(raw: Iterable[Sequence]) -> Word:
    out: list[Letter] = []
    for f, v in raw:
        if v == 0:
            continue
        if out and out[-1].factor == f:
            merged = out[-1].value + v
            out.pop()
            if merged != 0:
                out.append(Letter(f, Fraction(merged)))
        else:
            out.append(Letter(f, Fraction(v)))
    return tuple(out)


def is_reduced(w: Sequence[Sequence]) -> bool:
    return all(x[1] != 0 for x in w) and all(
        a[0] != b[0] for a, b in zip(w, w[1:])
    )


def multiply(u: Word, w: Word) -> Word:
    return normalize(u + w)


def invert(w: Word) -> Word:
    return tuple(Letter(x.factor, -x.value) for x in reversed(w))


def is_cyclically_reduced(w: Word) -> bool:
    """Reduced, and first/last letters in different factors.

    A single letter counts as cyclically reduced.
    """
    return is_reduced(w) and (len(w) <= 1 or w[0].factor != w[-1].factor)


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Return ``(c, v)`` with ``w = c v c^-1`` and ``v`` cyclically reduced."""
    i, j = 0, len(w)
    while j - i >= 2 and w[i].factor == w[j - 1].factor:
        a, b = w[i], w[j - 1]
        if a.value + b.value != 0:
            # a X b = a (X (b a)) a^-1
            core = w[i + 1 : j - 1] + (Letter(a.factor, a.value + b.value),)
            return w[: i + 1], core
        i += 1
        j -= 1
    return w[:i], w[i:j]


def compare(u: Word, w: Word) -> Cmp:
    s = word_sign(normalize(invert(u) + w))
    return {Sign.Positive: Cmp.LT, Sign.Zero: Cmp.EQ, Sign.Negative: Cmp.GT}[s]


def is_positive(w: Word) -> bool:
    return word_sign(w) is Sign.Positive


def is_strongly_positive(w: Word) -> bool:
    if not w:
        raise EmptyWord("strong positivity is defined for nonempty words")
    return all(word_sign(w[i:]) is Sign.Positive for i in range(len(w)))


def is_strongly_negative(w: Word) -> bool:
    return is_strongly_positive(invert(w))


def lemma4_sign(s: Word, t: Word) -> Strong:
    """Classify ``s^-1 t`` for strongly positive ``s, t`` with letter-reduced product."""
    for name, x in (("s", s), ("t", t)):
        if not x or not is_reduced(x):
            raise PreconditionViolated(name, "must be a nonempty reduced word")
        if not is_strongly_positive(x):
            raise PreconditionViolated(name, "not strongly positive")
    if s[0].factor == t[0].factor:
        raise PreconditionViolated("s^-1 t", "boundary letters lie in the same factor")
    sign = word_sign(invert(s) + t)
    return Strong.StronglyPositive if sign is Sign.Positive else Strong.StronglyNegative


def factorize_u1_u2(w: Word) -> tuple[Word, Word]:
    """Split ``w`` literally as ``u1 u2^-1`` with u1, u2 empty or strongly positive.

    Blocks carry a sign: a ``+`` block is strongly positive as written, a ``-``
    block has a strongly positive inverse.  Rewrites are applied leftmost first
    until the sign pattern is ``+`` then ``-``.
    """
    if not w:
        return (), ()
    blocks: list[tuple[Word, int]] = [
        ((x,), 1 if x.value > 0 else -1) for x in w
    ]
    while True:
        for k in range(len(blocks) - 1):
            (a, sa), (b, sb) = blocks[k], blocks[k + 1]
            if sa == sb:
                blocks[k : k + 2] = [(a + b, sa)]
                break
            if sa < 0 < sb:
                kind = lemma4_sign(invert(a), b)
                blocks[k : k + 2] = [(a + b, 1 if kind is Strong.StronglyPositive else -1)]
                break
        else:
            break
    u1: Word = ()
    u2: Word = ()
    for seg, sgn in blocks:
        if sgn > 0:
            u1 = seg
        else:
            u2 = invert(seg)
    return u1, u2


def strongly_signed_cyclic_permutation(w: Word) -> tuple[int, Strong]:
    """Rotation ``r`` such that ``w[r:] + w[:r]`` is strongly positive or negative."""
    if not w:
        raise EmptyWord("cannot rotate the empty word")
    if not is_cyclically_reduced(w):
        raise NotCyclicallyReduced("word is not cyclically reduced")
    u1, u2 = factorize_u1_u2(w)
    if not u2:
        kind = Strong.StronglyPositive
    elif not u1:
        kind = Strong.StronglyNegative
    else:
        kind = lemma4_sign(u2, u1)
    return len(u1) % len(w), kind


def rotate(w: Word, r: int) -> Word:
    return w[r:] + w[:r]


# -- text syntax ---------------------------------------------------------------

_TOKEN = re.compile(r"^([gx])(\d+)(?:\^(-?\d+(?:/\d+)?))?$")


def parse_word(text: str, factors: FactorSystem | None = None) -> Word:
    """Parse ``g1^3 g2^-1 g1^1/2``; a bare ``gN`` means exponent 1.

    ``1`` or an empty string is the identity.  Exponent 0 is rejected.
    """
    text = text.strip()
    if text in ("", "1"):
        return ()
    raw = []
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m or m.group(1) != "g":
            raise ParseError(f"bad word token {tok!r}")
        f = int(m.group(2))
        try:
            q = Fraction(m.group(3)) if m.group(3) is not None else Fraction(1)
        except ZeroDivisionError:
            raise ParseError(f"zero denominator in {tok!r}") from None
        if q == 0:
            raise ParseError(f"zero exponent in {tok!r}")
        if f < 1:
            raise ParseError(f"factor index must be >= 1 in {tok!r}")
        if factors is not None and not factors.contains(f, q):
            raise ParseError(f"{tok!r} does not belong to the declared factors")
        raw.append(Letter(f, q))
    return normalize(raw)


def format_word(w: Sequence[Sequence]) -> str:
    if not w:
        return "1"
    return " ".join(f"g{f}^{Fraction(v)}" for f, v in w)
