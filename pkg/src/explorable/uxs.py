"""Universal exploration sequences at desk scale: walk, verify, search, replay.

Offsets are relative: at a node of degree d entered by port p the walk exits
by port (p + offset) mod d; the start node counts as entered by port 0.
Verification against every graph of size <= N is the only source of truth;
the searcher is a greedy heuristic and makes no optimality claim.

A verified sequence covers every graph of size <= N only if it is played to
the end.  Stopping part-way voids the guarantee.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .config import get_config
from .enumeration import enumerate_all_graphs
from .errors import ConfigurationError, ExplorableError, InvalidParameter, ResourceCapError
from .graph import PortGraph
from .runtime import Move
from .views import union_arrays

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class UXS:
    bound: int
    offsets: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.offsets)

    def to_text(self) -> str:
        return f"N {self.bound}\n" + " ".join(map(str, self.offsets)) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "UXS":
        lines = text.strip().splitlines()
        head = lines[0].split() if lines else []
        if len(head) != 2 or head[0] != "N":
            raise InvalidParameter("UXS file must start with a line 'N <bound>'")
        offs = tuple(int(x) for line in lines[1:] for x in line.split())
        if any(o < 0 for o in offs):
            raise InvalidParameter("UXS offsets must be nonnegative")
        return cls(int(head[1]), offs)


def uxs_walk(g: PortGraph, start: int, offsets) -> set[int]:
    """Nodes visited by the offset walk from start."""
    if not 0 <= start < g.n:
        raise InvalidParameter(f"start {start} not a node of the graph")
    u, e = start, 0
    seen = {u}
    for off in offsets:
        u, e = g.adj[u][(e + off) % g.degree(u)]
        seen.add(u)
    return seen


# ---------------------------------------------------------------- batch state


@lru_cache(maxsize=None)
def _pack(n_max: int):
    """All graphs of size 2..n_max stacked, plus one walk state per (graph, start)."""
    graphs = list(enumerate_all_graphs.upto(n_max))
    deg, nbr, rport, offsets = union_arrays(graphs)
    sizes = np.diff(offsets)
    base = np.repeat(offsets[:-1], sizes)
    full = np.repeat((np.int64(1) << sizes) - 1, sizes)
    return deg, nbr, rport, base, full


def _check_bound(n: int) -> None:
    if n < 1:
        raise InvalidParameter(f"bound must be >= 1, got {n}")
    cap = get_config().graph_cap
    if n > cap:
        raise ResourceCapError(f"bound {n} is beyond the enumeration size cap {cap}", cap=cap)


def _fresh_states(n: int):
    deg, nbr, rport, base, full = _pack(n)
    node = np.arange(deg.shape[0], dtype=np.int64)
    entry = np.zeros_like(node)
    visited = np.int64(1) << (node - base)
    return deg, nbr, rport, base.copy(), full.copy(), node, entry, visited


def uncovered(offsets, n: int, use_numba: bool | None = None) -> int:
    """Number of (graph, start) pairs of size <= n the sequence fails to cover."""
    _check_bound(n)
    if n < 2:
        return 0
    deg, nbr, rport, base, full, node, entry, visited = _fresh_states(n)
    seq = np.asarray(offsets, dtype=np.int64)
    _kernels.walk_states(deg, nbr, rport, base, node, entry, visited, seq, use_numba=use_numba)
    return int(np.count_nonzero(visited != full))


def verify_uxs(seq: UXS | tuple | list, n: int, use_numba: bool | None = None) -> bool:
    """Exhaustive check over one graph per class and every start node.

    Per-class checking suffices because the walk commutes with port-preserving
    relabeling.
    """
    offsets = seq.offsets if isinstance(seq, UXS) else seq
    return uncovered(offsets, n, use_numba) == 0


def _extension(deg, nbr, rport, u: int, e: int, vis: int, b: int, omax: int) -> list[int]:
    """Shortest offset string taking one walk state to a node it has not visited."""
    prev: dict[tuple[int, int], tuple[tuple[int, int], int] | None] = {(u, e): None}
    queue = deque([(u, e)])
    while queue:
        x, ex = queue.popleft()
        d = int(deg[x])
        for o in range(min(omax, d)):
            p = (ex + o) % d
            y, ey = int(nbr[x, p]), int(rport[x, p])
            if (y, ey) in prev:
                continue
            prev[(y, ey)] = ((x, ex), o)
            if not vis >> (y - b) & 1:
                path = []
                key = (y, ey)
                while prev[key] is not None:
                    key, o2 = prev[key]
                    path.append(o2)
                return path[::-1]
            queue.append((y, ey))
    raise ExplorableError("walk state cannot reach its unvisited nodes; graph not connected")


def search_uxs(n: int, budget: int = 200_000, use_numba: bool | None = None) -> UXS:
    """Greedy construction of a verified UXS for graphs of size <= n.

    Each step appends the offset that moves the most uncovered walk states to
    a node they have not seen (smallest offset on ties).  When no single
    offset helps, the shortest string that helps the first uncovered state is
    appended instead, so every round makes progress and the search ends.
    """
    _check_bound(n)
    if n < 2:
        return UXS(n, ())
    deg, nbr, rport, base, full, node, entry, visited = _fresh_states(n)
    omax = max(1, n - 1)
    seq: list[int] = []
    alive = np.nonzero(visited != full)[0]
    base, full, node, entry, visited = (a[alive] for a in (base, full, node, entry, visited))
    while node.size:
        if len(seq) > budget:
            raise ExplorableError(
                f"UXS search for N={n} exhausted its budget of {budget} offsets "
                f"with {node.size} (graph, start) pairs uncovered"
            )
        gains = _kernels.offset_gains(deg, nbr, rport, base, node, entry, visited, omax, use_numba=use_numba)
        if gains.max() > 0:
            chunk = [int(np.argmax(gains))]
        else:
            chunk = _extension(deg, nbr, rport, int(node[0]), int(entry[0]), int(visited[0]), int(base[0]), omax)
        _kernels.walk_states(
            deg, nbr, rport, base, node, entry, visited, np.asarray(chunk, dtype=np.int64), use_numba=use_numba
        )
        seq.extend(chunk)
        keep = visited != full
        if not keep.all():
            base, full, node, entry, visited = (a[keep] for a in (base, full, node, entry, visited))
    out = UXS(n, tuple(seq))
    if not verify_uxs(out, n, use_numba):
        raise ExplorableError(f"internal: searched UXS for N={n} fails verification")
    return out


# ---------------------------------------------------------------- cache


_memo: dict[int, UXS] = {}


def _cache_file(n: int):
    return get_config().cache_dir / f"uxs-N{n}.txt"


def save_uxs(seq: UXS, path) -> None:
    with open(path, "w") as fh:
        fh.write(seq.to_text())


def load_uxs(path) -> UXS:
    with open(path) as fh:
        return UXS.from_text(fh.read())


def get_uxs(n: int) -> UXS:
    """Verified UXS for bound n: memory, then disk cache (re-verified), then search."""
    seq = _memo.get(n)
    if seq is not None:
        return seq
    cfg = get_config()
    path = _cache_file(n)
    if cfg.use_disk_cache and path.exists():
        try:
            cand = load_uxs(path)
            if cand.bound == n and verify_uxs(cand, n):
                _memo[n] = cand
                return cand
            log.warning("discarding UXS cache %s: failed verification", path)
        except (OSError, InvalidParameter, ValueError):
            log.warning("discarding unreadable UXS cache %s", path)
    seq = search_uxs(n)
    _memo[n] = seq
    if cfg.use_disk_cache:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            save_uxs(seq, path)
        except OSError:
            log.warning("could not write UXS cache %s", path)
    return seq


# ---------------------------------------------------------------- agent


def replay(walker, seq: UXS):
    """Subroutine: play the walk of seq from the walker's position, fresh entry 0."""
    e = 0
    for off in seq.offsets:
        obs = yield from walker.move((e + off) % walker.obs.degree)
        e = obs.entry


class UXSAgent:
    def __init__(self, seq: UXS):
        self.seq = seq
        self.name = f"uxs:N={seq.bound}"

    def program(self, obs, hooks):
        e = 0
        for off in self.seq.offsets:
            obs = yield Move((e + off) % obs.degree)
            e = obs.entry


def r_agent(n: int) -> UXSAgent:
    """R(n): replay a verified UXS for bound n, then stop."""
    cap = get_config().uxs_cap
    if n > cap:
        raise ConfigurationError(f"no verified UXS available for N={n} (UXS cap is {cap})")
    return UXSAgent(get_uxs(n))
