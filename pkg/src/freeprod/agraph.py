"""Labeled bipartite A-graphs representing factor-free subgroups.

Vertices are dense ints.  ``vtype[v] == 0`` marks a primary vertex and
``vtype[v] == alpha >= 1`` a secondary vertex of type alpha.  Each edge pair is
stored once as ``(primary, secondary, label)`` with the label read in the
primary -> secondary direction.  Oriented edges are encoded as ``2*k`` for
primary -> secondary and ``2*k + 1`` for the reverse, so ``x ^ 1`` is the
inverse of ``x``.  A path from a primary vertex through a secondary vertex and
back reads one syllable ``label(e) - label(f)``.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import FactorFreeViolation
from .words import Letter, Word, format_word, invert, is_reduced, normalize


@dataclass(frozen=True, eq=False)
class AGraph:
    vtype: tuple[int, ...]
    edges: tuple[tuple[int, int, Fraction], ...]
    base: int | None = None

    # -- basic accessors ---------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.vtype)

    @property
    def n_edges(self) -> int:
        """Number of edge pairs (half the oriented edge count)."""
        return len(self.edges)

    def is_primary(self, v: int) -> bool:
        return self.vtype[v] == 0

    def primary_vertices(self) -> list[int]:
        return [v for v, t in enumerate(self.vtype) if t == 0]

    def secondary_vertices(self) -> list[int]:
        return [v for v, t in enumerate(self.vtype) if t != 0]

    def tail(self, x: int) -> int:
        p, s, _ = self.edges[x >> 1]
        return s if x & 1 else p

    def head(self, x: int) -> int:
        p, s, _ = self.edges[x >> 1]
        return p if x & 1 else s

    def label(self, x: int) -> Fraction:
        lab = self.edges[x >> 1][2]
        return -lab if x & 1 else lab

    def etype(self, x: int) -> int:
        return self.vtype[self.edges[x >> 1][1]]

    @cached_property
    def _out(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in self.vtype]
        for k, (p, s, _) in enumerate(self.edges):
            out[p].append(2 * k)
            out[s].append(2 * k + 1)
        return tuple(tuple(xs) for xs in out)

    def out_edges(self, v: int) -> tuple[int, ...]:
        """Oriented edges leaving ``v``, in edge-id order."""
        return self._out[v]

    def degree(self, v: int) -> int:
        return len(self._out[v])

    @cached_property
    def _by_type(self) -> tuple[dict, ...]:
        # primary v -> {type: oriented edge}; only meaningful when irreducible
        return tuple(
            {self.etype(x): x for x in self._out[v]} if t == 0 else {}
            for v, t in enumerate(self.vtype)
        )

    @cached_property
    def _by_label(self) -> tuple[dict, ...]:
        # secondary s -> {label of incoming edge: edge pair id}
        return tuple(
            {self.edges[x >> 1][2]: x >> 1 for x in self._out[v]} if t != 0 else {}
            for v, t in enumerate(self.vtype)
        )

    @cached_property
    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        eu = np.fromiter((p for p, _, _ in self.edges), dtype=np.int64, count=len(self.edges))
        ev = np.fromiter((s for _, s, _ in self.edges), dtype=np.int64, count=len(self.edges))
        return eu, ev

    def path_letters(self, path: Iterable[int]) -> list[Letter]:
        return [Letter(self.etype(x), self.label(x)) for x in path]

    def path_label(self, path: Iterable[int]) -> Word:
        """Label of an edge path as a reduced word."""
        return normalize(self.path_letters(path))

    def is_path(self, path: Sequence[int]) -> bool:
        return all(0 <= x < 2 * self.n_edges for x in path) and all(
            self.head(a) == self.tail(b) for a, b in zip(path, path[1:])
        )

    def __repr__(self) -> str:
        return (
            f"AGraph(primary={len(self.primary_vertices())}, "
            f"secondary={len(self.secondary_vertices())}, edges={self.n_edges}, base={self.base})"
        )


# -- subgraphs -------------------------------------------------------------------


def subgraph(g: AGraph, valive, ealive, base: int | None = None):
    """Induced relabeled subgraph; returns ``(graph, vertex_map, edge_map)``.

    ``vertex_map[i]`` / ``edge_map[k]`` give the ids in ``g`` of the new vertex
    ``i`` / edge pair ``k``.
    """
    vmap = [v for v in range(g.n_vertices) if valive[v]]
    inv = {v: i for i, v in enumerate(vmap)}
    emap = [k for k in range(g.n_edges) if ealive[k]]
    edges = tuple((inv[g.edges[k][0]], inv[g.edges[k][1]], g.edges[k][2]) for k in emap)
    new_base = inv.get(base) if base is not None else None
    return AGraph(tuple(g.vtype[v] for v in vmap), edges, new_base), vmap, emap


def core_masks(g: AGraph, protect: int = -1):
    eu, ev = g.arrays
    return _kernels.peel(g.n_vertices, eu, ev, protect=protect)


def core_with_maps(g: AGraph):
    valive, ealive = core_masks(g)
    return subgraph(g, valive, ealive)


def core(g: AGraph) -> AGraph:
    """Delete vertices of degree <= 1 until none remain; the result is unbased."""
    return core_with_maps(g)[0]


def component_labels(g: AGraph, valive=None, ealive=None) -> np.ndarray:
    eu, ev = g.arrays
    return _kernels.components(g.n_vertices, eu, ev, valive, ealive)


def split_components(g: AGraph):
    """Connected components as ``(graph, vertex_map, edge_map)`` triples."""
    labels = component_labels(g)
    n = int(labels.max()) + 1 if labels.size else 0
    out = []
    for c in range(n):
        valive = labels == c
        ealive = np.array([valive[p] for p, _, _ in g.edges], dtype=bool)
        out.append(subgraph(g, valive, ealive, g.base if g.base is not None and valive[g.base] else None))
    return out


def euler_char(g: AGraph) -> int:
    return g.n_vertices - g.n_edges


def reduced_rank(g: AGraph) -> int:
    return max(-euler_char(g), 0)


# -- validation -------------------------------------------------------------------


def validate(g: AGraph) -> list[dict]:
    """List every violated irreducibility property with offending ids."""
    report: list[dict] = []
    for k, (p, s, lab) in enumerate(g.edges):
        if g.vtype[p] != 0 or g.vtype[s] == 0:
            report.append({"property": "bipartite", "edge": k})
        elif g.etype(2 * k) != g.vtype[s]:
            report.append({"property": "typing", "edge": k})
    for v in g.primary_vertices():
        seen: dict[int, int] = {}
        targets: dict[int, list[int]] = {}
        for x in g.out_edges(v):
            s = g.head(x)
            targets.setdefault(s, []).append(x >> 1)
            t = g.vtype[s]
            if t in seen and seen[t] != s:
                report.append({"property": "P1", "vertex": v, "secondaries": sorted((seen[t], s))})
            seen.setdefault(t, s)
        for s, ks in targets.items():
            if len(ks) > 1:
                report.append({"property": "P3-multiple-edge", "vertex": v, "secondary": s, "edges": ks})
    for s in g.secondary_vertices():
        labels: dict[Fraction, int] = {}
        for x in g.out_edges(s):
            lab = g.edges[x >> 1][2]
            if lab in labels:
                report.append({"property": "P2", "vertex": s, "edges": [labels[lab], x >> 1]})
            labels.setdefault(lab, x >> 1)
    leaves = [v for v in range(g.n_vertices) if g.degree(v) == 1]
    for v in range(g.n_vertices):
        if g.degree(v) == 0 and g.n_vertices > 1:
            report.append({"property": "P3-isolated", "vertex": v})
    if len(leaves) > 1 or any(not g.is_primary(v) for v in leaves):
        report.append({"property": "P3-leaves", "vertices": leaves})
    return report


# -- folding ----------------------------------------------------------------------


class _Folder:
    """Mutable workspace for folding a wedge of subdivided loops."""

    def __init__(self, gens: Sequence[Word]):
        self.vt: dict[int, int] = {0: 0}
        self.ed: dict[int, list] = {}
        self.inc: dict[int, set[int]] = {0: set()}
        self.base = 0
        self._nv = 1
        self._ne = 0
        for w in gens:
            prev = self.base
            for i, (f, q) in enumerate(w):
                s = self._vertex(f)
                nxt = self.base if i == len(w) - 1 else self._vertex(0)
                self._edge(prev, s, Fraction(q))
                self._edge(nxt, s, Fraction(0))
                prev = nxt

    def _vertex(self, t: int) -> int:
        v = self._nv
        self._nv += 1
        self.vt[v] = t
        self.inc[v] = set()
        return v

    def _edge(self, p: int, s: int, lab: Fraction) -> int:
        k = self._ne
        self._ne += 1
        self.ed[k] = [p, s, lab]
        self.inc[p].add(k)
        self.inc[s].add(k)
        return k

    def _drop_edge(self, k: int) -> None:
        p, s, _ = self.ed.pop(k)
        self.inc[p].discard(k)
        self.inc[s].discard(k)

    def _merge_vertex(self, keep: int, gone: int) -> None:
        for k in self.inc.pop(gone):
            e = self.ed[k]
            if e[0] == gone:
                e[0] = keep
            else:
                e[1] = keep
            self.inc[keep].add(k)
        del self.vt[gone]
        if gone == self.base:
            self.base = keep

    # candidate scans, each returning a list of fold descriptions

    def _p2(self):
        out = []
        for s in sorted(self.inc):
            if self.vt[s] == 0:
                continue
            by: dict = {}
            for k in sorted(self.inc[s]):
                lab = self.ed[k][2]
                if lab in by:
                    out.append(("P2", by[lab], k))
                else:
                    by[lab] = k
        return out

    def _p1(self):
        out = []
        for p in sorted(self.inc):
            if self.vt[p] != 0:
                continue
            by: dict = {}
            for k in sorted(self.inc[p]):
                s = self.ed[k][1]
                t = self.vt[s]
                if t in by and self.ed[by[t]][1] != s:
                    out.append(("P1", by[t], k))
                else:
                    by.setdefault(t, k)
        return out

    def _p3(self):
        out = []
        for p in sorted(self.inc):
            if self.vt[p] != 0:
                continue
            by: dict = {}
            for k in sorted(self.inc[p]):
                s = self.ed[k][1]
                if s in by:
                    out.append(("P3", by[s], k))
                else:
                    by[s] = k
        return out

    def _leaves(self):
        return [("prune", v, None) for v in sorted(self.inc) if v != self.base and len(self.inc[v]) <= 1]

    def apply(self, fold) -> None:
        kind, a, b = fold
        if kind == "P2":
            pa, pb = self.ed[a][0], self.ed[b][0]
            self._drop_edge(b)
            if pa != pb:
                keep, gone = min(pa, pb), max(pa, pb)
                self._merge_vertex(keep, gone)
        elif kind == "P1":
            e, f = a, b
            se, sf = self.ed[e][1], self.ed[f][1]
            shift = self.ed[f][2] - self.ed[e][2]
            for k in self.inc[se]:
                self.ed[k][2] += shift
            self._drop_edge(e)
            self._merge_vertex(sf, se)
        elif kind == "P3":
            if self.ed[a][2] != self.ed[b][2]:
                raise self._violation(a, b)
            self._drop_edge(b)
        else:
            for k in list(self.inc[a]):
                self._drop_edge(k)
            del self.inc[a]
            del self.vt[a]

    def _violation(self, a: int, b: int) -> FactorFreeViolation:
        p, s, x = self.ed[a]
        y = self.ed[b][2]
        alpha = self.vt[s]
        prefix = self._path_from_base(p)
        core = [Letter(alpha, x - y)]
        w = normalize(prefix + core + list(invert(tuple(prefix))))
        return FactorFreeViolation(w, alpha)

    def _path_from_base(self, target: int) -> list[Letter]:
        prev: dict[int, tuple[int, Letter] | None] = {self.base: None}
        queue = deque([self.base])
        while queue:
            v = queue.popleft()
            if v == target:
                break
            for k in sorted(self.inc[v]):
                p, s, lab = self.ed[k]
                w, lt = (s, Letter(self.vt[s], lab)) if v == p else (p, Letter(self.vt[s], -lab))
                if w not in prev:
                    prev[w] = (v, lt)
                    queue.append(w)
        letters: list[Letter] = []
        v = target
        while prev[v] is not None:
            v, lt = prev[v]
            letters.append(lt)
        return letters[::-1]

    def pending(self):
        for scan in (self._p2, self._p1, self._p3, self._leaves):
            found = scan()
            if found:
                return found
        return []

    def freeze(self) -> AGraph:
        order = sorted(self.vt)
        idx = {v: i for i, v in enumerate(order)}
        edges = tuple(
            (idx[p], idx[s], Fraction(lab)) for _, (p, s, lab) in sorted(self.ed.items())
        )
        return AGraph(tuple(self.vt[v] for v in order), edges, idx[self.base])


def build_from_generators(
    gens: Sequence[Word],
    rng: random.Random | None = None,
    on_fold: Callable[[AGraph], None] | None = None,
) -> AGraph:
    """Fold the wedge of loops spelling ``gens`` into an irreducible based graph.

    With ``rng`` the next fold is drawn at random among the pending ones of the
    highest-priority kind; otherwise the first is taken.  ``on_fold`` receives a
    snapshot after every fold.

    Raises :class:`FactorFreeViolation` when two parallel edges carry
    different labels.
    """
    for w in gens:
        if not w or not is_reduced(w):
            raise ValueError(f"generator {format_word(w)} must be a nonempty reduced word")
    folder = _Folder(gens)
    while True:
        todo = folder.pending()
        if not todo:
            break
        fold = rng.choice(todo) if rng is not None else todo[0]
        before = len(folder.ed)
        folder.apply(fold)
        assert len(folder.ed) < before, "fold did not decrease the edge count"
        if on_fold is not None:
            on_fold(folder.freeze())
    return folder.freeze()


# -- membership and paths -----------------------------------------------------------


def membership(w: Word, g: AGraph) -> bool:
    """Trace ``w`` from the base of an irreducible graph."""
    if not w:
        return True
    v = g.base
    if v is None:
        raise ValueError("membership needs a based graph")
    for f, q in w:
        x = g._by_type[v].get(f)
        if x is None:
            return False
        s = g.head(x)
        k = g._by_label[s].get(g.label(x) - q)
        if k is None or k == x >> 1:
            return False
        v = g.edges[k][0]
    return v == g.base


def spells_closed_path(g: AGraph, w: Word, start: int | None = None) -> bool:
    """Search (not trace) for a closed path at ``start`` reading ``w`` syllable by syllable.

    Works on graphs that are not folded yet, which is what property (Q)
    checks need.
    """
    start = g.base if start is None else start
    frontier = {start}
    for f, q in w:
        nxt = set()
        for v in frontier:
            for x in g.out_edges(v):
                if g.etype(x) != f:
                    continue
                s = g.head(x)
                for y in g.out_edges(s):
                    if g.label(x) + g.label(y) == q:
                        nxt.add(g.head(y))
        frontier = nxt
    return start in frontier


def tree_paths(g: AGraph, root: int | None = None) -> dict[int, list[int]]:
    """Breadth-first tree paths (oriented edge lists) from ``root`` to each vertex."""
    root = g.base if root is None else root
    paths: dict[int, list[int]] = {root: []}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for x in g.out_edges(v):
            w = g.head(x)
            if w not in paths:
                paths[w] = paths[v] + [x]
                queue.append(w)
    return paths


def basis(g: AGraph) -> list[Word]:
    """Free basis of the subgroup: one word per edge pair outside a BFS tree."""
    if g.base is None:
        raise ValueError("basis needs a based graph")
    paths = tree_paths(g)
    tree = {x >> 1 for path in paths.values() for x in path}
    out = []
    for k, (p, s, _) in enumerate(g.edges):
        if k in tree or p not in paths:
            continue
        loop = paths[p] + [2 * k] + [x ^ 1 for x in reversed(paths[s])]
        out.append(g.path_label(loop))
    return out


# -- canonical forms ----------------------------------------------------------------


def _canonical_from(g: AGraph, root: int) -> tuple:
    idx = {root: 0}
    offset: dict[int, Fraction] = {}
    queue = deque([root])
    out = []
    while queue:
        v = queue.popleft()
        if g.is_primary(v):
            xs = sorted(g.out_edges(v), key=lambda x: (g.etype(x), x))
            for x in xs:
                s = g.head(x)
                if s not in idx:
                    idx[s] = len(idx)
                    offset[s] = g.label(x)
                    queue.append(s)
                out.append((idx[v], g.etype(x), idx[s], g.label(x) - offset[s]))
        else:
            xs = sorted(g.out_edges(v), key=lambda x: g.label(x ^ 1) - offset[v])
            for x in xs:
                p = g.head(x)
                if p not in idx:
                    idx[p] = len(idx)
                    queue.append(p)
                out.append((idx[v], idx[p], g.label(x ^ 1) - offset[v]))
    return (len(idx), tuple(out))


def canonical_form(g: AGraph) -> tuple:
    """Isomorphism invariant of a labeled graph, up to translating the labels at
    each secondary vertex (which leaves every path label unchanged).

    Based graphs are read from the base; unbased ones take the least reading
    over primary start vertices, per component, sorted.
    """
    if g.base is not None:
        return ("based", _canonical_from(g, g.base), g.n_vertices)
    comps = []
    for sub, _, _ in split_components(g):
        starts = sub.primary_vertices() or [0]
        comps.append(min(_canonical_from(sub, r) for r in starts))
    return ("free", tuple(sorted(comps)))


def canonical_hash(g: AGraph) -> int:
    return hash(canonical_form(g))


# -- export -------------------------------------------------------------------------


def to_dot(g: AGraph, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    for v, t in enumerate(g.vtype):
        if t == 0:
            extra = ", peripheries=2" if v == g.base else ""
            lines.append(f'  v{v} [shape=circle, label="{v}"{extra}];')
        else:
            lines.append(f'  v{v} [shape=square, label="{v}:g{t}"];')
    for k, (p, s, lab) in enumerate(g.edges):
        lines.append(f'  v{p} -- v{s} [label="{lab}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
