from fractions import Fraction

import pytest
from hypothesis import strategies as st

from freeprod import agraph as ag
from freeprod.factors import FactorSystem
from freeprod.words import Letter, normalize, parse_word

EXPONENTS = [Fraction(k) for k in (-3, -2, -1, 1, 2, 3)] + [Fraction(1, 2), Fraction(-1, 2), Fraction(3, 2), Fraction(-3, 2)]


def W(text: str):
    return parse_word(text)


def build(*gens: str) -> ag.AGraph:
    return ag.build_from_generators([W(g) for g in gens])


def letters(n_factors: int = 3):
    return st.builds(Letter, st.integers(1, n_factors), st.sampled_from(EXPONENTS))


def reduced_words(n_factors: int = 3, max_size: int = 8, min_size: int = 0):
    return st.lists(letters(n_factors), min_size=min_size, max_size=max_size).map(normalize).filter(lambda w: len(w) >= min_size)


def random_word(rng, n_factors: int = 3, max_len: int = 8):
    """Reduced word with a uniform length in [0, max_len] (stdlib ``random.Random``)."""
    n = rng.randint(0, max_len)
    out = []
    while len(out) < n:
        f = rng.randint(1, n_factors)
        if out and out[-1].factor == f:
            continue
        out.append(Letter(f, rng.choice(EXPONENTS)))
    return tuple(out)


@pytest.fixture
def zz():
    return FactorSystem.free(2)


# -- acceptance summary ------------------------------------------------------------

ACCEPTANCE: dict[int, str] = {}


def record_criterion(number: int, title: str, ok: bool, detail: str) -> None:
    ACCEPTANCE[number] = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
