"""Reproducible random instances: factor lists and two subgroups' generators.

Randomness comes from numpy's PCG64 bit generator seeded with
``SeedSequence([seed, stream])``, so instance ``i`` of a sweep depends only on
``(seed, i)`` and is identical across runs and platforms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .agraph import AGraph, build_from_generators
from .errors import FactorFreeViolation, RetriesExhausted
from .factors import FactorKind, FactorSystem
from .words import Letter, Word, invert

INT_POOL = (-3, -2, -1, 1, 2, 3)
HALF_POOL = (Fraction(-3, 2), Fraction(-1, 2), Fraction(1, 2), Fraction(3, 2))


@dataclass(frozen=True)
class InstanceSpec:
    seed: int = 1
    min_factors: int = 2
    max_factors: int = 4
    kinds: str = "mixed"  # "mixed", "Z" or "Q"
    min_gens: int = 1
    max_gens: int = 4
    min_syllables: int = 1
    max_syllables: int = 8
    int_pool: tuple[int, ...] = INT_POOL
    rational_pool: tuple[Fraction, ...] = HALF_POOL
    share: float = 0.5  # chance that an H2 generator is reused from H1
    retries: int = 200

    def __post_init__(self) -> None:
        if not 1 <= self.min_factors <= self.max_factors:
            raise ValueError("bad factor range")
        if not 1 <= self.min_gens <= self.max_gens:
            raise ValueError("bad generator range")
        if not 1 <= self.min_syllables <= self.max_syllables:
            raise ValueError("bad syllable range")
        if not 0.0 <= self.share <= 1.0:
            raise ValueError("share must lie in [0, 1]")
        if self.kinds not in ("mixed", "Z", "Q"):
            raise ValueError(f"unknown kinds {self.kinds!r}")


@dataclass
class Instance:
    factors: FactorSystem
    gens1: list[Word]
    gens2: list[Word]
    rejections: int = 0
    graphs: tuple[AGraph, AGraph] | None = field(default=None, repr=False)


def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, stream])))


def _word(rng: np.random.Generator, factors: FactorSystem, spec: InstanceSpec) -> Word:
    n = int(rng.integers(spec.min_syllables, spec.max_syllables + 1))
    k = len(factors)
    out: list[Letter] = []
    prev = 0
    for _ in range(n):
        choices = [f for f in range(1, k + 1) if f != prev]
        f = int(choices[int(rng.integers(len(choices)))])
        pool = list(spec.int_pool)
        if factors.kind(f) is FactorKind.Q:
            pool += list(spec.rational_pool)
        q = Fraction(pool[int(rng.integers(len(pool)))])
        out.append(Letter(f, q))
        prev = f
    return tuple(out)


def _subgroup(rng, factors, spec, pool: list[Word] = ()) -> tuple[list[Word], AGraph, int]:
    rejections = 0
    for _ in range(spec.retries):
        n = int(rng.integers(spec.min_gens, spec.max_gens + 1))
        gens = []
        for _ in range(n):
            if pool and rng.random() < spec.share:
                w = pool[int(rng.integers(len(pool)))]
                gens.append(invert(w) if rng.integers(2) else w)
            else:
                gens.append(_word(rng, factors, spec))
        try:
            return gens, build_from_generators(gens), rejections
        except FactorFreeViolation:
            rejections += 1
    raise RetriesExhausted(rejections)


def generate(spec: InstanceSpec, stream: int = 0) -> Instance:
    """Draw factors and two factor-free subgroups, resampling on violations."""
    rng = _rng(spec.seed, stream)
    k = int(rng.integers(spec.min_factors, spec.max_factors + 1))
    if spec.kinds == "mixed":
        kinds = tuple(FactorKind.Q if rng.integers(2) else FactorKind.Z for _ in range(k))
    else:
        kinds = (FactorKind(spec.kinds),) * k
    factors = FactorSystem(kinds)
    gens1, g1, rej1 = _subgroup(rng, factors, spec)
    gens2, g2, rej2 = _subgroup(rng, factors, spec, gens1)
    return Instance(factors, gens1, gens2, rej1 + rej2, (g1, g2))


def free_instance(seed: int, stream: int = 0, rank: int = 2, max_gens: int = 3, max_len: int = 6):
    """Two lists of freely reduced words in F(x1..x_rank)."""
    rng = _rng(seed, stream)

    def word():
        n = int(rng.integers(1, max_len + 1))
        out = []
        while len(out) < n:
            g = int(rng.integers(1, rank + 1))
            e = 1 if rng.integers(2) else -1
            if out and out[-1] == (g, -e):
                continue
            out.append((g, e))
        return tuple(out)

    def gens():
        return [word() for _ in range(int(rng.integers(1, max_gens + 1)))]

    return gens(), gens()
