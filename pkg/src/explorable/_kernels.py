"""Hot loops of the UXS walk, with numba and pure-numpy implementations.

Walk states are parallel arrays over (graph, start) pairs packed into one
disjoint union: current node (global index), entry port, visited bitmask
over the graph's local node indices, and the graph's base offset.

Set EXPLORABLE_DISABLE_NUMBA=1 to force the numpy versions.
"""
from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None

USE_NUMBA = njit is not None and os.environ.get("EXPLORABLE_DISABLE_NUMBA", "") not in ("1", "true", "yes")


# ---------------------------------------------------------------- numpy


def walk_states_numpy(deg, nbr, rport, base, node, entry, visited, offsets):
    """Advance every state through the offset sequence, in place."""
    one = np.int64(1)
    for off in offsets:
        p = (entry + off) % deg[node]
        nxt = nbr[node, p]
        entry[:] = rport[node, p]
        node[:] = nxt
        visited |= one << (node - base)


def offset_gains_numpy(deg, nbr, rport, base, node, entry, visited, omax):
    """gains[o] = number of states that would reach an unvisited node with offset o."""
    gains = np.zeros(omax, dtype=np.int64)
    d = deg[node]
    for o in range(omax):
        nxt = nbr[node, (entry + o) % d]
        gains[o] = np.count_nonzero(((visited >> (nxt - base)) & 1) == 0)
    return gains


# ---------------------------------------------------------------- numba

if njit is not None:

    @njit(cache=True)
    def walk_states_numba(deg, nbr, rport, base, node, entry, visited, offsets):
        for s in range(node.shape[0]):
            u = node[s]
            e = entry[s]
            vis = visited[s]
            b = base[s]
            for t in range(offsets.shape[0]):
                p = (e + offsets[t]) % deg[u]
                v = nbr[u, p]
                e = rport[u, p]
                u = v
                vis |= np.int64(1) << (u - b)
            node[s] = u
            entry[s] = e
            visited[s] = vis

    @njit(cache=True)
    def offset_gains_numba(deg, nbr, rport, base, node, entry, visited, omax):
        gains = np.zeros(omax, dtype=np.int64)
        for s in range(node.shape[0]):
            u = node[s]
            d = deg[u]
            for o in range(omax):
                v = nbr[u, (entry[s] + o) % d]
                if (visited[s] >> (v - base[s])) & 1 == 0:
                    gains[o] += 1
        return gains

else:  # pragma: no cover
    walk_states_numba = walk_states_numpy
    offset_gains_numba = offset_gains_numpy


def walk_states(*args, use_numba: bool | None = None):
    fn = walk_states_numba if (USE_NUMBA if use_numba is None else use_numba) else walk_states_numpy
    fn(*args)


def offset_gains(*args, use_numba: bool | None = None) -> np.ndarray:
    fn = offset_gains_numba if (USE_NUMBA if use_numba is None else use_numba) else offset_gains_numpy
    return fn(*args)
