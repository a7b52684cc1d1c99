"""Port-numbered graphs: the model, validation, constructions, canonical codes.

A graph is stored as ``adj[u][p] = (v, q)``: leaving ``u`` by port ``p``
reaches ``v``, entering it by port ``q``.  Node indices are internal handles;
agents only ever see degrees and port numbers.
"""
from __future__ import annotations

import json
from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property
from itertools import permutations
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidParameter

Port = int
Half = tuple[int, int]  # (neighbor, reverse port)


@dataclass(frozen=True)
class PortGraph:
    n: int
    adj: tuple[tuple[Half, ...], ...]

    def __init__(self, n: int, adj: Iterable[Iterable[Sequence[int]]]):
        object.__setattr__(self, "n", int(n))
        object.__setattr__(
            self, "adj", tuple(tuple((int(v), int(q)) for v, q in row) for row in adj)
        )

    def degree(self, u: int) -> int:
        return len(self.adj[u])

    def move(self, u: int, p: Port) -> Half:
        return self.adj[u][p]

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(row) for row in self.adj)

    @property
    def num_edges(self) -> int:
        return sum(len(row) for row in self.adj) // 2

    def edges(self) -> list[tuple[int, int, int, int]]:
        """Each edge once, as (u, p, v, q) with u < v."""
        return [
            (u, p, v, q)
            for u, row in enumerate(self.adj)
            for p, (v, q) in enumerate(row)
            if u < v
        ]

    @property
    def is_tree(self) -> bool:
        return self.num_edges == self.n - 1

    @cached_property
    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(deg, nbr, rport) as int64 arrays; missing ports padded with -1."""
        dmax = max((len(r) for r in self.adj), default=0)
        deg = np.array([len(r) for r in self.adj], dtype=np.int64)
        nbr = np.full((self.n, max(dmax, 1)), -1, dtype=np.int64)
        rport = np.full((self.n, max(dmax, 1)), -1, dtype=np.int64)
        for u, row in enumerate(self.adj):
            for p, (v, q) in enumerate(row):
                nbr[u, p] = v
                rport[u, p] = q
        return deg, nbr, rport

    def relabel(self, perm: Sequence[int]) -> "PortGraph":
        """Graph with node ``u`` renamed ``perm[u]``; ports untouched."""
        inv = [0] * self.n
        for u, a in enumerate(perm):
            inv[a] = u
        return PortGraph(
            self.n,
            [[(perm[v], q) for v, q in self.adj[inv[a]]] for a in range(self.n)],
        )

    def __repr__(self) -> str:
        return f"PortGraph(n={self.n}, m={self.num_edges})"


# ---------------------------------------------------------------- validation


def validate(g: PortGraph) -> str | None:
    """Return ``None`` if ``g`` satisfies the model, else the violated invariant."""
    if g.n < 1 or len(g.adj) != g.n:
        return "node count"
    for u, row in enumerate(g.adj):
        for p, (v, q) in enumerate(row):
            if not 0 <= v < g.n:
                return "neighbor range"
            if v == u:
                return "self-loop"
            if not (0 <= q < len(g.adj[v]) and g.adj[v][q] == (u, p)):
                return "port symmetry"
        if len({v for v, _ in row}) != len(row):
            return "parallel edge"
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for v, _ in g.adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    if len(seen) != g.n:
        return "connected"
    return None


def check(g: PortGraph) -> PortGraph:
    problem = validate(g)
    if problem is not None:
        raise InvalidParameter(f"invalid port graph: {problem}")
    return g


# ------------------------------------------------------------- constructions


def build_clockwise_ring(s: int) -> PortGraph:
    """Ring R_s: port 1 leads clockwise (i -> i+1), port 0 counterclockwise."""
    if s < 3:
        raise InvalidParameter(f"ring size must be >= 3, got {s}")
    return PortGraph(s, [[((i - 1) % s, 1), ((i + 1) % s, 0)] for i in range(s)])


def build_c(k: int) -> PortGraph:
    """C_k: ring R_k with a pendant on node 0 via port 2.  The pendant is node k."""
    if k < 3:
        raise InvalidParameter(f"C_k needs k >= 3, got {k}")
    adj = [list(row) for row in build_clockwise_ring(k).adj]
    adj[0].append((k, 0))
    adj.append([(0, 2)])
    return PortGraph(k + 1, adj)


def build_d(j: int) -> PortGraph:
    """D_j: ring R_{6j} with a pendant (port 2) on every third ring node and a
    second pendant (port 3) on ring node 0, the unique degree-4 node.

    Ring nodes are 0..6j-1; pendants follow.  Node 3j is antipodal to node 0.
    """
    if j < 1:
        raise InvalidParameter(f"D_j needs j >= 1, got {j}")
    s = 6 * j
    adj = [list(row) for row in build_clockwise_ring(s).adj]
    for x in range(0, s, 3):
        adj[x].append((len(adj), 0))
        adj.append([(x, 2)])
    adj[0].append((len(adj), 0))
    adj.append([(0, 3)])
    return PortGraph(len(adj), adj)


def degree_census(g: PortGraph) -> dict[int, int]:
    return dict(Counter(g.degrees))


def bfs_distances(g: PortGraph, source: int, allowed=None) -> list[int]:
    dist = [-1] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v, _ in g.adj[u]:
            if dist[v] < 0 and (allowed is None or allowed(v)):
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def antipode_of_degree4(g: PortGraph) -> int:
    """In a D_j, the ring node farthest (3j) from the degree-4 node."""
    hub = g.degrees.index(4)
    dist = bfs_distances(g, hub, allowed=lambda v: g.degree(v) >= 2)
    far = max(dist)
    return dist.index(far)


def eccentricity(g: PortGraph, v: int) -> int:
    return max(bfs_distances(g, v))


# ---------------------------------------------------------------- canonical


def _refinement_partitions(g: PortGraph):
    """Yield canonical color lists round by round until the partition is stable.

    Round 0 colors by degree; round t+1 by (degree, (reverse port, color) per
    port).  Colors are ranks of sorted signatures, so isomorphic graphs get
    identical color names.
    """
    sig = [(len(row),) for row in g.adj]
    ranks = {s: c for c, s in enumerate(sorted(set(sig)))}
    colors = [ranks[s] for s in sig]
    yield colors
    classes = len(ranks)
    while True:
        sig = [
            (len(row),) + tuple(x for v, q in row for x in (q, colors[v]))
            for row in g.adj
        ]
        ranks = {s: c for c, s in enumerate(sorted(set(sig)))}
        colors = [ranks[s] for s in sig]
        if len(ranks) == classes:
            return
        classes = len(ranks)
        yield colors


def root_class(g: PortGraph) -> list[int]:
    """Canonically chosen set of candidate roots for the canonical code.

    The first refinement round that has a singleton class contributes its
    lowest-colored singleton; if no round has one, the stable partition's
    smallest class (ties by color) is used.
    """
    last = None
    for colors in _refinement_partitions(g):
        last = colors
        counts = Counter(colors)
        singles = [c for c, cnt in counts.items() if cnt == 1]
        if singles:
            return [colors.index(min(singles))]
    counts = Counter(last)
    best = min(counts, key=lambda c: (counts[c], c))
    return [u for u, c in enumerate(last) if c == best]


def bfs_order(g: PortGraph, root: int) -> list[int]:
    """label[u] = position of u in the port-ordered BFS from root."""
    label = [-1] * g.n
    label[root] = 0
    nxt = 1
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v, _ in g.adj[u]:
            if label[v] < 0:
                label[v] = nxt
                nxt += 1
                queue.append(v)
    return label


def serialize(g: PortGraph, label: Sequence[int] | None = None) -> tuple[int, ...]:
    """(n, m, then per node in label order: degree, (neighbor, reverse port)...)."""
    if label is None:
        label = range(g.n)
    inv = [0] * g.n
    for u, a in enumerate(label):
        inv[a] = u
    out = [g.n, g.num_edges]
    for a in range(g.n):
        row = g.adj[inv[a]]
        out.append(len(row))
        for v, q in row:
            out.append(label[v])
            out.append(q)
    return tuple(out)


def encode(seq: Sequence[int]) -> bytes:
    return np.asarray(seq, dtype=">u4").tobytes()


def decode(code: bytes) -> PortGraph:
    seq = np.frombuffer(code, dtype=">u4").astype(int).tolist()
    return from_serialization(seq)


def from_serialization(seq: Sequence[int]) -> PortGraph:
    n = seq[0]
    pos = 2
    adj = []
    for _ in range(n):
        d = seq[pos]
        pos += 1
        adj.append([(seq[pos + 2 * p], seq[pos + 2 * p + 1]) for p in range(d)])
        pos += 2 * d
    return PortGraph(n, adj)


def _canonical(g: PortGraph) -> tuple[tuple[int, ...], list[int]]:
    best = None
    for r in root_class(g):
        label = bfs_order(g, r)
        s = serialize(g, label)
        if best is None or s < best[0]:
            best = (s, label)
    return best


def canonical_serialization(g: PortGraph) -> tuple[int, ...]:
    return _canonical(check(g))[0]


def canonical_code(g: PortGraph) -> bytes:
    """Byte string identifying ``g`` up to port-preserving isomorphism.

    Big-endian words, so bytewise order equals order of the integer sequence,
    which starts with the size.
    """
    return encode(canonical_serialization(g))


def canonical_form(g: PortGraph) -> PortGraph:
    """``g`` relabeled into its canonical numbering."""
    return g.relabel(_canonical(check(g))[1])


def canonical_labeling(g: PortGraph) -> list[int]:
    """label[u] = index of node u in canonical_form(g)."""
    return _canonical(check(g))[1]


def isomorphism(g: PortGraph, h: PortGraph) -> list[int] | None:
    """A port-preserving bijection phi (phi[u] in h) or None.

    Connected port graphs: the image of node 0 determines everything, so try
    each candidate image and propagate along ports.
    """
    if g.n != h.n or g.degrees.count(1) != h.degrees.count(1):
        return None
    if sorted(g.degrees) != sorted(h.degrees):
        return None
    for start in range(h.n):
        if h.degree(start) != g.degree(0):
            continue
        phi = [-1] * g.n
        used = [False] * h.n
        phi[0] = start
        used[start] = True
        stack = [0]
        ok = True
        while stack and ok:
            u = stack.pop()
            a = phi[u]
            for p, (v, q) in enumerate(g.adj[u]):
                b, qb = h.adj[a][p]
                if qb != q or h.degree(b) != g.degree(v):
                    ok = False
                    break
                if phi[v] < 0:
                    if used[b]:
                        ok = False
                        break
                    phi[v] = b
                    used[b] = True
                    stack.append(v)
                elif phi[v] != b:
                    ok = False
                    break
        if ok:
            return phi
    return None


def port_isomorphic(g: PortGraph, h: PortGraph) -> bool:
    return isomorphism(g, h) is not None


def brute_force_isomorphic(g: PortGraph, h: PortGraph) -> bool:
    """Exhaustive bijection search.  Test oracle only; n! cost."""
    if g.n != h.n:
        return False
    for perm in permutations(range(g.n)):
        if all(
            len(h.adj[perm[u]]) == len(row)
            and all(h.adj[perm[u]][p] == (perm[v], q) for p, (v, q) in enumerate(row))
            for u, row in enumerate(g.adj)
        ):
            return True
    return False


# ----------------------------------------------------------------------- I/O


def to_json(g: PortGraph) -> str:
    return json.dumps({"n": g.n, "adj": [[list(h) for h in row] for row in g.adj]})


def from_json(text: str) -> PortGraph:
    doc = json.loads(text)
    return check(PortGraph(doc["n"], doc["adj"]))


def to_dot(g: PortGraph, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    for u in range(g.n):
        lines.append(f'  {u} [label="{u} (d={g.degree(u)})"];')
    for u, p, v, q in g.edges():
        lines.append(f'  {u} -- {v} [taillabel="{p}", headlabel="{q}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
