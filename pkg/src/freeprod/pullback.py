"""Pullback of two A-graphs: intersections of conjugates and their ranks.

Primary vertices of the product are pairs of primary vertices.  Because the
factors are abelian, the classes of the secondary relation are exactly the
fibres of the key ``(type, s1, s2, label1 - label2)``, so they are built by
hashing instead of a closure computation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .agraph import (
    AGraph,
    build_from_generators,
    basis,
    core,
    component_labels,
    core_masks,
    euler_char,
    reduced_rank,
    subgraph,
    tree_paths,
)
from .words import Word, format_word, invert, normalize


@dataclass(frozen=True, eq=False)
class Product:
    """Uncored product graph with projections onto both factors' graphs."""

    graph: AGraph
    tau_v: tuple[tuple[int, ...], tuple[int, ...]]
    tau_e: tuple[tuple[int, ...], tuple[int, ...]]


@dataclass(frozen=True, eq=False)
class PullbackGraph:
    """Core of the product graph, with vertex and edge projections.

    ``tau_v[i][v]`` is the image in ``g{i+1}`` of pullback vertex ``v`` and
    ``tau_e[i][k]`` the image of edge pair ``k`` (orientation is preserved).
    """

    graph: AGraph
    g1: AGraph
    g2: AGraph
    tau_v: tuple[tuple[int, ...], tuple[int, ...]]
    tau_e: tuple[tuple[int, ...], tuple[int, ...]]

    def tau(self, i: int, x: int) -> int:
        """Project oriented edge ``x`` to graph ``i`` (1 or 2)."""
        return 2 * self.tau_e[i - 1][x >> 1] + (x & 1)

    @property
    def total_rank(self) -> int:
        return -euler_char(self.graph)


def product(g1: AGraph, g2: AGraph) -> Product:
    prim1 = g1.primary_vertices()
    prim2 = g2.primary_vertices()
    vtype: list[int] = []
    tv1: list[int] = []
    tv2: list[int] = []
    pair_id: dict[tuple[int, int], int] = {}
    for v1 in prim1:
        for v2 in prim2:
            pair_id[(v1, v2)] = len(vtype)
            vtype.append(0)
            tv1.append(v1)
            tv2.append(v2)
    classes: dict[tuple, int] = {}
    edges: list[tuple[int, int, Fraction]] = []
    te1: list[int] = []
    te2: list[int] = []
    for v1 in prim1:
        by1 = g1._by_type[v1]
        if not by1:
            continue
        for v2 in prim2:
            by2 = g2._by_type[v2]
            for alpha, x1 in by1.items():
                x2 = by2.get(alpha)
                if x2 is None:
                    continue
                l1 = g1.label(x1)
                key = (alpha, g1.head(x1), g2.head(x2), l1 - g2.label(x2))
                s = classes.get(key)
                if s is None:
                    s = classes[key] = len(vtype)
                    vtype.append(alpha)
                    tv1.append(g1.head(x1))
                    tv2.append(g2.head(x2))
                edges.append((pair_id[(v1, v2)], s, l1))
                te1.append(x1 >> 1)
                te2.append(x2 >> 1)
    base = None
    if g1.base is not None and g2.base is not None:
        base = pair_id[(g1.base, g2.base)]
    graph = AGraph(tuple(vtype), tuple(edges), base)
    return Product(graph, (tuple(tv1), tuple(tv2)), (tuple(te1), tuple(te2)))


def pullback(g1: AGraph, g2: AGraph) -> PullbackGraph:
    prod = product(g1, g2)
    valive, ealive = core_masks(prod.graph)
    graph, vmap, emap = subgraph(prod.graph, valive, ealive)
    tau_v = tuple(tuple(prod.tau_v[i][v] for v in vmap) for i in (0, 1))
    tau_e = tuple(tuple(prod.tau_e[i][k] for k in emap) for i in (0, 1))
    return PullbackGraph(graph, g1, g2, tau_v, tau_e)


@dataclass(frozen=True, eq=False)
class Component:
    graph: AGraph
    rank: int
    representative: Word
    vertices: tuple[int, ...]
    edges: tuple[int, ...]

    def summary(self) -> dict:
        return {
            "rank": self.rank,
            "representative": format_word(self.representative),
            "vertices": self.graph.n_vertices,
            "edges": self.graph.n_edges,
        }


def _tree_words(g: AGraph) -> dict[int, Word]:
    return {v: g.path_label(path) for v, path in tree_paths(g).items()}


def components(p: PullbackGraph) -> list[Component]:
    """Components of the cored pullback, each with rank and double-coset representative.

    For a primary vertex ``w`` of a component, the representative is
    ``label(q1) * label(q2)^-1`` where ``qi`` is the BFS tree path in ``gi``
    from the base to ``tau_i(w)``.
    """
    g = p.graph
    if g.n_vertices == 0:
        return []
    labels = component_labels(g)
    words1 = _tree_words(p.g1)
    words2 = _tree_words(p.g2)
    out = []
    for c in range(int(labels.max()) + 1):
        valive = labels == c
        ealive = np.array([valive[a] for a, _, _ in g.edges], dtype=bool)
        sub, vmap, emap = subgraph(g, valive, ealive)
        w = min(v for v in vmap if g.is_primary(v))
        s = normalize(words1[p.tau_v[0][w]] + invert(words2[p.tau_v[1][w]]))
        out.append(Component(sub, -euler_char(sub), s, tuple(vmap), tuple(emap)))
    return out


def intersection_with_base(g1: AGraph, g2: AGraph) -> AGraph:
    """Based graph of the intersection: the base component of the product,
    pruned of degree-1 vertices other than the base."""
    prod = product(g1, g2)
    o = prod.graph.base
    labels = component_labels(prod.graph)
    valive = labels == labels[o]
    eu, ev = prod.graph.arrays
    valive, ealive = _kernels.peel(prod.graph.n_vertices, eu, ev, valive, None, protect=o)
    return subgraph(prod.graph, valive, ealive, o)[0]


def conjugate_generators(s: Word, gens: list[Word]) -> list[Word]:
    return [normalize(s + w + invert(s)) for w in gens]


def rebuild_component(g1: AGraph, g2: AGraph, s: Word) -> AGraph:
    """Core of the based graph of ``H1 ∩ s H2 s^-1``, built from scratch."""
    g2s = build_from_generators(conjugate_generators(s, basis(g2)))
    return core(intersection_with_base(g1, g2s))


@dataclass(frozen=True)
class Theorem1Report:
    rank1: int
    rank2: int
    rank12: int
    holds: bool
    components: tuple[int, ...] = ()

    def as_dict(self) -> dict:
        return {
            "rbar_H1": self.rank1,
            "rbar_H2": self.rank2,
            "rbar_H1_H2": self.rank12,
            "bound": self.rank1 * self.rank2,
            "component_ranks": list(self.components),
            "holds": self.holds,
        }


def verify_theorem1(g1: AGraph, g2: AGraph, p: PullbackGraph | None = None) -> Theorem1Report:
    p = pullback(g1, g2) if p is None else p
    r1, r2 = reduced_rank(g1), reduced_rank(g2)
    comps = components(p)
    r12 = -euler_char(p.graph)
    assert r12 == sum(c.rank for c in comps)
    return Theorem1Report(r1, r2, r12, r12 <= r1 * r2, tuple(c.rank for c in comps))
