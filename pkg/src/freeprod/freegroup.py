"""Classical Stallings graphs for free groups, used as an independent oracle,
and the embedding of F(x1..xm) into Z*Z.

Nothing here shares graph code with :mod:`freeprod.agraph`.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass
from typing import Sequence, Tuple

from .errors import ParseError
from .words import Letter, Word, normalize

FreeWord = Tuple[Tuple[int, int], ...]  # (generator 1..m, +1 | -1)


def free_reduce(letters) -> FreeWord:
    out: list[tuple[int, int]] = []
    for g, e in letters:
        if out and out[-1] == (g, -e):
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def free_invert(w: FreeWord) -> FreeWord:
    return tuple((g, -e) for g, e in reversed(w))


_FTOKEN = re.compile(r"^x(\d+)(?:\^(-?\d+))?$")


def parse_free_word(text: str) -> FreeWord:
    """``x1 x2^-1 x1^3`` style; ``1`` or empty is the identity."""
    text = text.strip()
    if text in ("", "1"):
        return ()
    letters = []
    for tok in text.split():
        m = _FTOKEN.match(tok)
        if not m:
            raise ParseError(f"bad free-group token {tok!r}")
        g = int(m.group(1))
        k = int(m.group(2)) if m.group(2) is not None else 1
        if g < 1 or k == 0:
            raise ParseError(f"bad free-group token {tok!r}")
        letters.extend([(g, 1 if k > 0 else -1)] * abs(k))
    return free_reduce(letters)


def format_free_word(w: FreeWord) -> str:
    if not w:
        return "1"
    parts = []
    for g, e in w:
        if parts and parts[-1][0] == g and (parts[-1][1] > 0) == (e > 0):
            parts[-1][1] += e
        else:
            parts.append([g, e])
    return " ".join(f"x{g}" if k == 1 else f"x{g}^{k}" for g, k in parts)


@dataclass
class StallingsAutomaton:
    """Folded graph: ``arcs`` holds ``(tail, generator, head)`` triples."""

    n_vertices: int
    arcs: list[tuple[int, int, int]]
    base: int

    def euler_char(self) -> int:
        return self.n_vertices - len(self.arcs)

    def rank(self) -> int:
        return 1 - self.euler_char()

    def reduced_rank(self) -> int:
        return max(-self.euler_char(), 0)

    def accepts(self, w: FreeWord) -> bool:
        step = {}
        for t, g, h in self.arcs:
            step[(t, g, 1)] = h
            step[(h, g, -1)] = t
        v = self.base
        for g, e in w:
            if (v, g, e) not in step:
                return False
            v = step[(v, g, e)]
        return v == self.base


def stallings_build(gens: Sequence[FreeWord]) -> StallingsAutomaton:
    parent: list[int] = [0]
    arcs: list[tuple[int, int, int]] = []

    def new() -> int:
        parent.append(len(parent))
        return len(parent) - 1

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for w in gens:
        v = 0
        for i, (g, e) in enumerate(w):
            u = 0 if i == len(w) - 1 else new()
            arcs.append((v, g, u) if e > 0 else (u, g, v))
            v = u
    # fold until deterministic in both directions
    changed = True
    while changed:
        changed = False
        seen_out: dict = {}
        seen_in: dict = {}
        kept = set()
        for t, g, h in arcs:
            t, h = find(t), find(h)
            a = seen_out.get((t, g))
            if a is not None and a != h:
                parent[max(a, h)] = min(a, h)
                changed = True
                break
            seen_out[(t, g)] = h
            b = seen_in.get((h, g))
            if b is not None and b != t:
                parent[max(b, t)] = min(b, t)
                changed = True
                break
            seen_in[(h, g)] = t
            kept.add((t, g, h))
        if not changed:
            arcs = sorted(kept)
        else:
            arcs = [(find(t), g, find(h)) for t, g, h in arcs]
    # prune leaves other than the base
    while True:
        deg: dict[int, int] = defaultdict(int)
        for t, _, h in arcs:
            deg[t] += 1
            deg[h] += 1
        leaves = {v for v, d in deg.items() if d == 1 and v != 0}
        if not leaves:
            break
        arcs = [a for a in arcs if a[0] not in leaves and a[2] not in leaves]
    verts = sorted({0} | {t for t, _, _ in arcs} | {h for _, _, h in arcs})
    idx = {v: i for i, v in enumerate(verts)}
    return StallingsAutomaton(
        len(verts), sorted((idx[t], g, idx[h]) for t, g, h in arcs), idx[0]
    )


def _core_components(n: int, arcs: list[tuple[int, int, int]]) -> list[tuple[int, int]]:
    """(vertex count, arc count) per component of the core."""
    alive_v = set(range(n))
    alive = list(arcs)
    while True:
        deg: dict[int, int] = defaultdict(int)
        for t, _, h in alive:
            deg[t] += 1
            deg[h] += 1
        drop = {v for v in alive_v if deg[v] <= 1}
        if not drop:
            break
        alive_v -= drop
        alive = [a for a in alive if a[0] in alive_v and a[2] in alive_v]
    root = {v: v for v in alive_v}

    def find(x: int) -> int:
        while root[x] != x:
            x = root[x]
        return x

    for t, _, h in alive:
        a, b = find(t), find(h)
        if a != b:
            root[max(a, b)] = min(a, b)
    counts: dict[int, list[int]] = {}
    for v in alive_v:
        counts.setdefault(find(v), [0, 0])[0] += 1
    for t, _, _ in alive:
        counts[find(t)][1] += 1
    return [tuple(counts[r]) for r in sorted(counts)]


@dataclass(frozen=True)
class StallingsPullback:
    component_ranks: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.component_ranks)

    @property
    def count(self) -> int:
        return len(self.component_ranks)


def stallings_pullback(x1: StallingsAutomaton, x2: StallingsAutomaton) -> StallingsPullback:
    n2 = x2.n_vertices
    by_gen: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for t, g, h in x2.arcs:
        by_gen[g].append((t, h))
    arcs = [
        (t1 * n2 + t2, g, h1 * n2 + h2)
        for t1, g, h1 in x1.arcs
        for t2, h2 in by_gen[g]
    ]
    comps = _core_components(x1.n_vertices * n2, arcs)
    return StallingsPullback(tuple(e - v for v, e in comps))


def mu_letter(i: int) -> Word:
    return (Letter(1, i), Letter(2, i), Letter(1, -i), Letter(2, -i))


def mu_embed(w: FreeWord) -> Word:
    """Image under x_i -> a^i b^i a^-i b^-i in Z*Z (a = g1, b = g2)."""
    raw: list[Letter] = []
    for g, e in w:
        img = mu_letter(g)
        if e < 0:
            img = tuple(Letter(f, -v) for f, v in reversed(img))
        raw.extend(img)
    return normalize(raw)


def free_to_product(w: FreeWord) -> Word:
    """Read ``x_i`` as the generator 1 of the i-th Z factor."""
    return normalize(Letter(g, e) for g, e in w)


def product_to_free(w: Word) -> FreeWord:
    """Expand each Z-syllable ``g_i^k`` into ``|k|`` letters ``x_i^{±1}``."""
    letters = []
    for f, q in w:
        if q.denominator != 1:
            raise ValueError("only integral syllables have a free-group reading")
        k = int(q)
        letters.extend([(f, 1 if k > 0 else -1)] * abs(k))
    return free_reduce(letters)


@dataclass(frozen=True)
class ShncReport:
    free_side: int
    product_side: int
    rbar1: int
    rbar2: int
    mu_rbar1: int
    mu_rbar2: int

    @property
    def bound(self) -> int:
        return self.rbar1 * self.rbar2

    @property
    def holds(self) -> bool:
        return (
            self.free_side <= self.product_side <= self.bound
            and self.mu_rbar1 == self.rbar1
            and self.mu_rbar2 == self.rbar2
        )

    def as_dict(self) -> dict:
        return {
            "free_side_sum": self.free_side,
            "product_side_sum": self.product_side,
            "rbar_H1": self.rbar1,
            "rbar_H2": self.rbar2,
            "bound": self.bound,
            "holds": self.holds,
        }


def verify_shnc(h1gens: Sequence[FreeWord], h2gens: Sequence[FreeWord]) -> ShncReport:
    """Compare the classical intersection sum with the product-side pullback of
    the mu-images.  A factor-free violation of a mu-image propagates."""
    from .agraph import build_from_generators, reduced_rank
    from .pullback import pullback

    x1, x2 = stallings_build(h1gens), stallings_build(h2gens)
    free_side = stallings_pullback(x1, x2).total
    mg1 = build_from_generators([mu_embed(w) for w in h1gens if w])
    mg2 = build_from_generators([mu_embed(w) for w in h2gens if w])
    product_side = pullback(mg1, mg2).total_rank
    return ShncReport(
        free_side,
        product_side,
        x1.reduced_rank(),
        x2.reduced_rank(),
        reduced_rank(mg1),
        reduced_rank(mg2),
    )
