"""Integer graph kernels: degree peeling and connected components.

Edges are given as two int64 arrays of endpoints (one row per edge pair).
Every kernel has a numba implementation and a pure-numpy fallback; the
backend is picked once at import time from ``FREEPROD_NUMBA``:

* ``FREEPROD_NUMBA=0`` forces numpy,
* anything else (default) uses numba when it imports.
"""

from __future__ import annotations

import os

import numpy as np

_WANT_NUMBA = os.environ.get("FREEPROD_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")

try:
    if not _WANT_NUMBA:
        raise ImportError
    from numba import njit
except ImportError:  # pragma: no cover - depends on environment
    njit = None

BACKEND = "numba" if njit is not None else "numpy"


# -- numpy fallback --------------------------------------------------------------


def _peel_numpy(n, eu, ev, valive, ealive, protect):
    valive = valive.copy()
    ealive = ealive.copy()
    while True:
        live_u = eu[ealive]
        live_v = ev[ealive]
        deg = np.bincount(live_u, minlength=n) + np.bincount(live_v, minlength=n)
        drop = valive & (deg <= 1)
        if protect >= 0:
            drop[protect] = False
        if not drop.any():
            return valive, ealive
        valive &= ~drop
        ealive &= valive[eu] & valive[ev]


def _components_numpy(n, eu, ev, valive, ealive):
    labels = np.arange(n, dtype=np.int64)
    u = eu[ealive]
    v = ev[ealive]
    while True:
        lo = np.minimum(labels[u], labels[v])
        new = labels.copy()
        np.minimum.at(new, u, lo)
        np.minimum.at(new, v, lo)
        # pointer jumping
        new = new[new]
        if np.array_equal(new, labels):
            break
        labels = new
    out = np.full(n, -1, dtype=np.int64)
    roots = labels[valive]
    _, compact = np.unique(roots, return_inverse=True)
    out[valive] = compact
    return out


# -- numba -----------------------------------------------------------------------

if njit is not None:

    @njit(cache=True)
    def _peel_numba(n, eu, ev, valive, ealive, protect):  # pragma: no cover - jitted
        valive = valive.copy()
        ealive = ealive.copy()
        m = eu.shape[0]
        deg = np.zeros(n, dtype=np.int64)
        start = np.zeros(n + 1, dtype=np.int64)
        for k in range(m):
            if ealive[k]:
                deg[eu[k]] += 1
                deg[ev[k]] += 1
            start[eu[k] + 1] += 1
            start[ev[k] + 1] += 1
        for i in range(n):
            start[i + 1] += start[i]
        fill = start[:-1].copy()
        inc = np.empty(2 * m, dtype=np.int64)
        for k in range(m):
            inc[fill[eu[k]]] = k
            fill[eu[k]] += 1
            inc[fill[ev[k]]] = k
            fill[ev[k]] += 1
        stack = np.empty(n, dtype=np.int64)
        top = 0
        queued = np.zeros(n, dtype=np.bool_)
        for v in range(n):
            if valive[v] and deg[v] <= 1 and v != protect:
                stack[top] = v
                top += 1
                queued[v] = True
        while top > 0:
            top -= 1
            v = stack[top]
            valive[v] = False
            for idx in range(start[v], start[v + 1]):
                k = inc[idx]
                if not ealive[k]:
                    continue
                ealive[k] = False
                w = eu[k] if ev[k] == v else ev[k]
                deg[w] -= 1
                deg[v] -= 1
                if valive[w] and not queued[w] and deg[w] <= 1 and w != protect:
                    stack[top] = w
                    top += 1
                    queued[w] = True
        return valive, ealive

    @njit(cache=True)
    def _find(parent, x):  # pragma: no cover - jitted
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    @njit(cache=True)
    def _components_numba(n, eu, ev, valive, ealive):  # pragma: no cover - jitted
        parent = np.arange(n)
        for k in range(eu.shape[0]):
            if ealive[k]:
                a = _find(parent, eu[k])
                b = _find(parent, ev[k])
                if a < b:
                    parent[b] = a
                elif b < a:
                    parent[a] = b
        out = np.full(n, -1, dtype=np.int64)
        seen = np.full(n, -1, dtype=np.int64)
        nxt = 0
        for v in range(n):
            if valive[v]:
                r = _find(parent, v)
                if seen[r] < 0:
                    seen[r] = nxt
                    nxt += 1
                out[v] = seen[r]
        return out


def _arrays(n, eu, ev, valive, ealive):
    eu = np.asarray(eu, dtype=np.int64)
    ev = np.asarray(ev, dtype=np.int64)
    valive = np.ones(n, dtype=bool) if valive is None else np.asarray(valive, dtype=bool)
    ealive = np.ones(eu.shape[0], dtype=bool) if ealive is None else np.asarray(ealive, dtype=bool)
    # an edge is only alive if both endpoints are
    if eu.size:
        ealive = ealive & valive[eu] & valive[ev]
    return eu, ev, valive, ealive


def _pick(backend):
    backend = backend or BACKEND
    if backend == "numba" and njit is None:
        raise RuntimeError("numba backend requested but disabled or not installed")
    return backend


def peel(n, eu, ev, valive=None, ealive=None, protect=-1, backend=None):
    """Repeatedly delete vertices of degree <= 1 (never ``protect``).

    Returns boolean masks ``(vertex_alive, edge_alive)``.
    """
    eu, ev, valive, ealive = _arrays(n, eu, ev, valive, ealive)
    if _pick(backend) == "numba":
        return _peel_numba(n, eu, ev, valive, ealive, protect)
    return _peel_numpy(n, eu, ev, valive, ealive, protect)


def components(n, eu, ev, valive=None, ealive=None, backend=None):
    """Component index per vertex (-1 for dead vertices).

    Components are numbered in order of their smallest vertex.
    """
    eu, ev, valive, ealive = _arrays(n, eu, ev, valive, ealive)
    if _pick(backend) == "numba":
        return _components_numba(n, eu, ev, valive, ealive)
    return _components_numpy(n, eu, ev, valive, ealive)
