"""Canonical enumeration of all small connected port-numbered graphs.

Generation is orderly: we build every graph directly in the numbering that
a port-ordered BFS from node 0 would assign, so each (isomorphism class,
root) pair appears once.  A generated graph is kept iff it already equals
its canonical form, which leaves one representative per class.
"""
from __future__ import annotations

import logging
import pickle
from functools import lru_cache

from .config import get_config
from .errors import InvalidParameter, ResourceCapError
from .graph import PortGraph, _canonical, serialize

log = logging.getLogger(__name__)

CACHE_VERSION = 2


def _bfs_forms(n: int, trees_only: bool):
    """Yield every connected port graph on n nodes in BFS-from-0 numbering."""
    if n == 1:
        yield PortGraph(1, [[]])
        return
    deg = [0] * n
    adj: list[list] = [[] for _ in range(n)]
    nbmask = [0] * n  # bitmask of current neighbors, for the simple-graph test

    def place(u: int, p: int, found: int, open_: int):
        # open_ = unassigned ports at discovered nodes.  In a tree each of
        # them leads to a distinct undiscovered node.
        if trees_only and found + open_ > n:
            return
        # advance to the next unassigned (u, p)
        while u < found:
            if p < deg[u] and adj[u][p] is None:
                break
            p += 1
            if p >= deg[u]:
                u += 1
                p = 0
        if u == found:
            if found == n:
                yield PortGraph(n, [list(row) for row in adj])
            return
        # connect to a discovered, unprocessed node v > u
        if not trees_only:
            for v in range(u + 1, found):
                if nbmask[u] >> v & 1:
                    continue
                for q in range(deg[v]):
                    if adj[v][q] is None:
                        adj[u][p] = (v, q)
                        adj[v][q] = (u, p)
                        nbmask[u] |= 1 << v
                        nbmask[v] |= 1 << u
                        yield from place(u, p + 1, found, open_ - 2)
                        nbmask[u] &= ~(1 << v)
                        nbmask[v] &= ~(1 << u)
                        adj[u][p] = None
                        adj[v][q] = None
        # or discover a new node
        if found < n:
            v = found
            # ports still unassigned at nodes < found bound what is left
            for d in range(1, n):
                deg[v] = d
                adj[v] = [None] * d
                for q in range(d):
                    adj[u][p] = (v, q)
                    adj[v][q] = (u, p)
                    nbmask[u] |= 1 << v
                    nbmask[v] = 1 << u
                    yield from place(u, p + 1, found + 1, open_ + d - 2)
                    nbmask[u] &= ~(1 << v)
                    nbmask[v] = 0
                    adj[u][p] = None
                    adj[v][q] = None
                adj[v] = []
                deg[v] = 0

    for d0 in range(1, n):
        deg[0] = d0
        adj[0] = [None] * d0
        yield from place(0, 0, 1, d0)
    adj[0] = []


def generate_size(n: int, trees_only: bool = False) -> list[PortGraph]:
    """One canonical representative per class of size n, sorted by code."""
    kept = []
    for g in _bfs_forms(n, trees_only):
        s = serialize(g)
        if s == _canonical(g)[0]:
            kept.append((s, g))
    kept.sort(key=lambda t: t[0])
    return [g for _, g in kept]


def _cache_path(kind: str, n: int):
    cfg = get_config()
    return cfg.cache_dir / f"enum-v{CACHE_VERSION}-{kind}-{n}.pkl"


@lru_cache(maxsize=None)
def graphs_of_size(n: int, trees_only: bool = False) -> tuple[PortGraph, ...]:
    cfg = get_config()
    kind = "trees" if trees_only else "graphs"
    path = _cache_path(kind, n)
    if cfg.use_disk_cache and path.exists():
        with open(path, "rb") as fh:
            data = pickle.load(fh)
        return tuple(PortGraph(g[0], g[1]) for g in data)
    log.info("generating all %s of size %d", kind, n)
    out = tuple(generate_size(n, trees_only))
    if cfg.use_disk_cache:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix(".tmp")
            with open(tmp, "wb") as fh:
                pickle.dump([(g.n, g.adj) for g in out], fh)
            tmp.replace(path)
        except OSError:
            log.warning("could not write enumeration cache %s", path)
    return out


class _Enumeration:
    """Concatenated per-size lists, sizes 2..cap (n=1 is excluded)."""

    def __init__(self, trees_only: bool):
        self.trees_only = trees_only

    def cap(self) -> int:
        cfg = get_config()
        return cfg.tree_cap if self.trees_only else cfg.graph_cap

    def __call__(self, i: int, cap: int | None = None) -> PortGraph:
        if i < 1:
            raise InvalidParameter(f"enumeration index must be >= 1, got {i}")
        cap = self.cap() if cap is None else cap
        offset = 0
        for n in range(2, cap + 1):
            block = graphs_of_size(n, self.trees_only)
            if i <= offset + len(block):
                return block[i - offset - 1]
            offset += len(block)
        kind = "trees" if self.trees_only else "graphs"
        raise ResourceCapError(
            f"index {i} is beyond the {kind} enumeration size cap {cap} "
            f"({offset} {kind} of size <= {cap})",
            cap=cap,
        )

    def count(self, cap: int | None = None) -> int:
        cap = self.cap() if cap is None else cap
        return sum(len(graphs_of_size(n, self.trees_only)) for n in range(2, cap + 1))

    def index_range(self, n: int) -> range:
        """Indices (1-based) of the members of size n."""
        start = 1 + sum(len(graphs_of_size(s, self.trees_only)) for s in range(2, n))
        return range(start, start + len(graphs_of_size(n, self.trees_only)))

    def upto(self, cap: int | None = None):
        cap = self.cap() if cap is None else cap
        for n in range(2, cap + 1):
            yield from graphs_of_size(n, self.trees_only)


enumerate_all_graphs = _Enumeration(trees_only=False)
enumerate_all_trees = _Enumeration(trees_only=True)
