"""Maximal edges: construction, finite certificates and good cutting sets.

An edge ``e`` leaving a primary vertex is maximal when two reduced infinite
paths ``p = e e2 ...`` and ``q = f1 f2 ...`` start at its tail, the type of
``e`` exceeds the type of ``f1``, and every even-length prefix of either path
has label below 1.

Certificates use eventually periodic paths ``spine + cycle^inf`` where the
cycle label ``C`` has a strongly positive inverse.  Every prefix of ``C`` is
then below 1, so past the spine each period only pushes labels further down
(left invariance); checking the even prefixes of the spine is enough.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

import networkx as nx
import numpy as np

from .agraph import AGraph, component_labels, core_masks, euler_char
from .errors import ChiNonNegative, MalformedCertificate
from .factors import Cmp
from .magnus import Sign, word_sign
from .words import (
    Strong,
    compare,
    invert,
    is_strongly_positive,
    normalize,
    strongly_signed_cyclic_permutation,
)


@dataclass(frozen=True)
class Ray:
    """Eventually periodic path ``spine + cycle + cycle + ...`` (oriented edge ids)."""

    spine: tuple[int, ...]
    cycle: tuple[int, ...]

    @property
    def first(self) -> int:
        return (self.spine or self.cycle)[0]

    def prefix(self, n: int) -> list[int]:
        out = list(self.spine[:n])
        while len(out) < n:
            out.extend(self.cycle[: n - len(out)])
        return out

    def map(self, f) -> "Ray":
        return Ray(tuple(f(x) for x in self.spine), tuple(f(x) for x in self.cycle))

    def as_dict(self) -> dict:
        return {"spine": list(self.spine), "cycle": list(self.cycle)}


@dataclass(frozen=True)
class MaximalEdgeCertificate:
    p: Ray
    q: Ray

    def swapped(self) -> "MaximalEdgeCertificate":
        return MaximalEdgeCertificate(self.q, self.p)

    def map(self, f) -> "MaximalEdgeCertificate":
        return MaximalEdgeCertificate(self.p.map(f), self.q.map(f))

    def as_dict(self) -> dict:
        return {"p": self.p.as_dict(), "q": self.q.as_dict()}


# -- certificate checking ------------------------------------------------------------


def _check_structure(g: AGraph, ray: Ray, name: str) -> None:
    if not ray.cycle:
        raise MalformedCertificate(f"{name}: empty cycle")
    if len(ray.spine) % 2 or len(ray.cycle) % 2:
        raise MalformedCertificate(f"{name}: spine and cycle must have even length")
    path = list(ray.spine) + list(ray.cycle)
    if not g.is_path(path):
        raise MalformedCertificate(f"{name}: not a path in the graph")
    if g.head(ray.cycle[-1]) != g.tail(ray.cycle[0]):
        raise MalformedCertificate(f"{name}: cycle is not closed")


def _reduced_ray(ray: Ray) -> bool:
    seq = list(ray.spine) + list(ray.cycle) + [ray.cycle[0]]
    return all(a ^ 1 != b for a, b in zip(seq, seq[1:]))


def _descends(g: AGraph, ray: Ray, depth: int) -> bool:
    cyc = g.path_label(ray.cycle)
    if len(cyc) != len(ray.cycle) // 2 or not is_strongly_positive(invert(cyc)):
        return False
    path = ray.prefix(len(ray.spine) + depth * len(ray.cycle))
    letters = []
    for j in range(0, len(path), 2):
        letters = list(normalize(letters + g.path_letters(path[j : j + 2])))
        if word_sign(tuple(letters)) is not Sign.Negative:
            return False
    return True


def check_certificate(g: AGraph, e: int, cert: MaximalEdgeCertificate, depth: int = 0) -> bool:
    """Verify that ``cert`` proves oriented edge ``e`` maximal.

    Checks: both rays reduced and starting at one primary vertex with distinct
    first edges; ``type(p1) > type(q1)``; each cycle label has a strongly
    positive inverse; every even prefix of each spine is below 1.  ``depth``
    extra periods of each cycle are checked too (never needed for soundness).
    Since the empty prefix is 1, the last condition is the same as the common
    start being the strict maximum of the finite set of prefix labels.
    """
    _check_structure(g, cert.p, "p")
    _check_structure(g, cert.q, "q")
    p1, q1 = cert.p.first, cert.q.first
    if p1 != e:
        raise MalformedCertificate("p does not start with the certified edge")
    if g.tail(p1) != g.tail(q1) or not g.is_primary(g.tail(p1)):
        raise MalformedCertificate("rays must start at a common primary vertex")
    if p1 == q1 or not (_reduced_ray(cert.p) and _reduced_ray(cert.q)):
        return False
    if g.etype(p1) <= g.etype(q1):
        return False
    return _descends(g, cert.p, depth) and _descends(g, cert.q, depth)


# -- the constructive existence proof ----------------------------------------------------


class _CoreView:
    def __init__(self, g: AGraph, ealive):
        self.g = g
        self.ealive = ealive
        self.out = [tuple(x for x in g.out_edges(v) if ealive[x >> 1]) for v in range(g.n_vertices)]

    def deg(self, v: int) -> int:
        return len(self.out[v])

    def walk(self, start: int, accept) -> list[int] | None:
        """Shortest non-backtracking walk beginning with ``start`` whose last
        edge satisfies ``accept``."""
        prev = {start: None}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            if accept(x):
                path = []
                while x is not None:
                    path.append(x)
                    x = prev[x]
                return path[::-1]
            for y in self.out[self.g.head(x)]:
                if y != x ^ 1 and y not in prev:
                    prev[y] = x
                    queue.append(y)
        return None


def _closing_cycle(view: _CoreView, t: list[int]) -> list[int]:
    """Closed reduced path at the end of ``t`` whose first and last edges keep
    both ``t r t^-1`` and ``t r^-1 t^-1`` reduced."""
    last = t[-1]
    v = view.g.head(last)
    best = None
    for x in view.out[v]:
        if x == last ^ 1:
            continue
        w = view.walk(x, lambda y, x=x: view.g.head(y) == v and y != x ^ 1 and y != last)
        if w is not None and (best is None or len(w) < len(best)):
            best = w
    if best is None:
        raise AssertionError("no closing cycle in a core component with negative Euler characteristic")
    return best


def _align(g: AGraph, t: list[int], r0: list[int]) -> Ray:
    """Rotate/orient the cycle so its label has a strongly positive inverse."""
    for attempt in range(2):
        k0 = 0 if g.is_primary(g.head(t[-1])) else 1
        label = g.path_label(r0[k0:] + r0[:k0])
        rot, kind = strongly_signed_cyclic_permutation(label)
        if kind is Strong.StronglyNegative:
            k = k0 + 2 * rot
            return Ray(tuple(t + r0[:k]), tuple(r0[k:] + r0[:k]))
        r0 = [x ^ 1 for x in reversed(r0)]
    raise AssertionError("a cycle and its inverse are both strongly positive")


def find_one_maximal_edge(g: AGraph) -> tuple[int, MaximalEdgeCertificate]:
    """Construct a maximal edge of a graph with a component of negative Euler
    characteristic, together with its certificate."""
    valive, ealive = core_masks(g)
    labels = component_labels(g, valive, ealive)
    eu, _ = g.arrays
    chosen = None
    for c in range(int(labels.max()) + 1 if labels.size else 0):
        nv = int(np.sum(labels == c))
        ne = int(np.sum(ealive & (labels[eu] == c))) if eu.size else 0
        if nv - ne < 0:
            chosen = c
            break
    if chosen is None:
        raise ChiNonNegative("every component has Euler characteristic >= 0")
    view = _CoreView(g, ealive)
    o = min(v for v in range(g.n_vertices) if labels[v] == chosen and g.is_primary(v))
    t1, u1 = view.out[o][:2]
    t = view.walk(t1, lambda x: view.deg(g.head(x)) > 2)
    u = view.walk(u1, lambda x: view.deg(g.head(x)) > 2)
    T = _align(g, t, _closing_cycle(view, t))
    U = _align(g, u, _closing_cycle(view, u))

    # finite set of prefix labels; its maximum splits the biinfinite path
    candidates = [("T", 2 * j) for j in range(len(T.spine) // 2 + 1)]
    candidates += [("U", 2 * k) for k in range(1, len(U.spine) // 2 + 1)]
    best, best_label = None, None
    seen = []
    for side, n in candidates:
        ray = T if side == "T" else U
        lab = g.path_label(ray.spine[:n])
        seen.append(lab)
        if best is None or compare(best_label, lab) is Cmp.LT:
            best, best_label = (side, n), lab
    assert sum(1 for lab in seen if lab == best_label) == 1, "prefix labels are not distinct"

    side, n = best
    if side == "T":
        p = Ray(T.spine[n:], T.cycle)
        q = Ray(tuple(x ^ 1 for x in reversed(T.spine[:n])) + U.spine, U.cycle)
    else:
        q = Ray(U.spine[n:], U.cycle)
        p = Ray(tuple(x ^ 1 for x in reversed(U.spine[:n])) + T.spine, T.cycle)
    cert = MaximalEdgeCertificate(p, q)
    if g.etype(p.first) < g.etype(q.first):
        cert = cert.swapped()
    e = cert.p.first
    assert check_certificate(g, e, cert), "constructed certificate failed verification"
    return e, cert


# -- certified search for all maximal edges -------------------------------------------------


def _descending_cycles(g: AGraph, ealive, budget: int, max_cycles: int):
    """Simple cycles (up to ``budget`` edges), rotated to every primary start
    whose label has a strongly positive inverse; grouped by start vertex."""
    G = nx.Graph()
    edge_of: dict[tuple[int, int], int] = {}
    for k, (p, s, _) in enumerate(g.edges):
        if ealive[k]:
            G.add_edge(p, s)
            edge_of[(p, s)] = 2 * k
            edge_of[(s, p)] = 2 * k + 1
    at: dict[int, list[tuple[int, ...]]] = {}
    count = 0
    truncated = False
    for cyc in nx.simple_cycles(G, length_bound=budget):
        count += 1
        if count > max_cycles:
            truncated = True
            break
        for verts in (cyc, cyc[::-1]):
            n = len(verts)
            path = [edge_of[(verts[i], verts[(i + 1) % n])] for i in range(n)]
            for i in range(n):
                if not g.is_primary(verts[i]):
                    continue
                rot = tuple(path[i:] + path[:i])
                if is_strongly_positive(invert(g.path_label(rot))):
                    at.setdefault(verts[i], []).append(rot)
    for v in at:
        at[v].sort(key=lambda c: (len(c), c))
    return at, truncated


class _Budget(Exception):
    pass


def _descending_ray(g, view, cycles_at, x, budget, counter, max_nodes) -> Ray | None:
    """Depth-first search for a certified descending ray starting with ``x``."""
    v0 = g.tail(x)
    for cyc in cycles_at.get(v0, ()):
        if cyc[0] == x:
            return Ray((), cyc)
    stack = [((), ())]
    while stack:
        path, label = stack.pop()
        counter[0] += 1
        if counter[0] > max_nodes:
            raise _Budget
        if path:
            w = g.head(path[-1])
            for cyc in cycles_at.get(w, ()):
                if cyc[0] != path[-1] ^ 1:
                    return Ray(path, cyc)
        if len(path) + 2 > budget:
            continue
        firsts = (x,) if not path else tuple(y for y in view.out[g.head(path[-1])] if y != path[-1] ^ 1)
        children = []
        for y1 in firsts:
            for y2 in view.out[g.head(y1)]:
                if y2 == y1 ^ 1:
                    continue
                new = normalize(label + tuple(g.path_letters((y1, y2))))
                if word_sign(new) is Sign.Negative:
                    children.append((path + (y1, y2), new))
        stack.extend(reversed(children))
    return None


@dataclass
class CertifiedSet:
    edges: frozenset[int]
    certificates: dict[int, MaximalEdgeCertificate] = field(default_factory=dict)
    exhausted: bool = True
    corroborated: bool = True

    @property
    def complete(self) -> bool:
        return self.exhausted and self.corroborated

    def as_dict(self) -> dict:
        return {
            "edges": sorted(self.edges),
            "complete": self.complete,
            "exhausted": self.exhausted,
            "corroborated": self.corroborated,
            "certificates": {str(e): c.as_dict() for e, c in sorted(self.certificates.items())},
        }


def find_all_certified(
    g: AGraph,
    budget: int | None = None,
    max_nodes: int = 200_000,
    max_cycles: int = 20_000,
) -> CertifiedSet:
    """Sound under-approximation of the set of maximal edges.

    ``complete`` is claimed only if every search ran to the end and the found
    set has exactly ``-chi(core)`` edges and is a good cutting set.  Since the
    full set of maximal edges is itself good, and any good set has exactly
    ``-chi`` edges, such a set is then the full set.
    """
    valive, ealive = core_masks(g)
    chi_core = int(valive.sum()) - int(ealive.sum())
    labels = component_labels(g, valive, ealive)
    eu, _ = g.arrays
    ncomp = int(labels.max()) + 1 if labels.size else 0
    negative = [
        c for c in range(ncomp)
        if int(np.sum(labels == c)) - int(np.sum(ealive & (labels[eu] == c))) < 0
    ]
    if not negative:
        return CertifiedSet(frozenset(), {}, True, True)
    budget = 2 * g.n_edges if budget is None else budget
    view = _CoreView(g, ealive)
    cycles_at, truncated = _descending_cycles(g, ealive, budget, max_cycles)
    counter = [0]
    exhausted = not truncated
    rays: dict[int, Ray] = {}
    for v in range(g.n_vertices):
        if not g.is_primary(v) or labels[v] not in negative:
            continue
        for x in view.out[v]:
            counter[0] = 0
            try:
                ray = _descending_ray(g, view, cycles_at, x, budget, counter, max_nodes)
            except _Budget:
                exhausted = False
                continue
            if ray is not None:
                rays[x] = ray
    certs: dict[int, MaximalEdgeCertificate] = {}
    for x, ray in rays.items():
        v = g.tail(x)
        lower = [y for y in view.out[v] if y in rays and g.etype(y) < g.etype(x)]
        if lower:
            cert = MaximalEdgeCertificate(ray, rays[min(lower)])
            assert check_certificate(g, x, cert), "search produced an invalid certificate"
            certs[x] = cert
    found = frozenset(certs)
    corroborated = len(found) == -chi_core and _good_cut(g, found, valive, ealive)
    return CertifiedSet(found, certs, exhausted, corroborated)


# -- good cutting sets -----------------------------------------------------------------


def _good_cut(g: AGraph, d: Iterable[int], valive, ealive) -> bool:
    cut = {x >> 1 for x in d}
    keep = np.array([bool(ealive[k]) and k not in cut for k in range(g.n_edges)], dtype=bool)
    labels = component_labels(g, valive, keep)
    eu, _ = g.arrays
    for c in range(int(labels.max()) + 1 if labels.size else 0):
        nv = int(np.sum(labels == c))
        ne = int(np.sum(keep & (labels[eu] == c))) if eu.size else 0
        if nv != ne:
            return False
    return True


def is_good_cut(g: AGraph, d: Iterable[int]) -> bool:
    """Whether removing ``d`` (both orientations) leaves only components of
    Euler characteristic 0."""
    return _good_cut(g, d, np.ones(g.n_vertices, dtype=bool), np.ones(g.n_edges, dtype=bool))


# -- the edge counting chain ------------------------------------------------------------


@dataclass
class EdgeCountReport:
    rank12: int
    rank1: int
    rank2: int
    d: int
    d1: int
    d2: int
    tau1_d: int
    tau2_d: int
    projections_certified: bool
    projections_in_sets: bool
    complete: bool
    status: str
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {k: v for k, v in self.__dict__.items() if k != "details"}
        out.update(self.details)
        return out


def verify_edge_count_bound(p, budget: int | None = None, **limits) -> EdgeCountReport:
    """Check ``|D| <= |tau1(D)| * |tau2(D)| <= |D1| * |D2|`` on certified sets.

    ``status`` is ``consistent`` when all checks pass with complete searches,
    ``inconclusive`` when some search is incomplete but nothing contradicts,
    and ``violation`` otherwise.
    """
    from .agraph import reduced_rank

    D = find_all_certified(p.graph, budget, **limits)
    D1 = find_all_certified(p.g1, budget, **limits)
    D2 = find_all_certified(p.g2, budget, **limits)
    rank12 = -euler_char(p.graph)
    tau1 = {p.tau(1, x) for x in D.edges}
    tau2 = {p.tau(2, x) for x in D.edges}
    projected = all(
        check_certificate(p.g1, p.tau(1, x), c.map(lambda y: p.tau(1, y)))
        and check_certificate(p.g2, p.tau(2, x), c.map(lambda y: p.tau(2, y)))
        for x, c in D.certificates.items()
    )
    in_sets = tau1 <= D1.edges and tau2 <= D2.edges
    complete = D.complete and D1.complete and D2.complete
    ok = projected and len(D.edges) <= rank12 and len(D.edges) <= len(tau1) * len(tau2)
    if complete:
        ok = ok and (
            len(D.edges) == rank12
            and len(D1.edges) == reduced_rank(p.g1)
            and len(D2.edges) == reduced_rank(p.g2)
            and in_sets
            and len(tau1) * len(tau2) <= len(D1.edges) * len(D2.edges)
        )
    status = "violation" if not ok else ("consistent" if complete else "inconclusive")
    return EdgeCountReport(
        rank12, reduced_rank(p.g1), reduced_rank(p.g2),
        len(D.edges), len(D1.edges), len(D2.edges), len(tau1), len(tau2),
        projected, in_sets, complete, status,
    )
