"""Truncated views and their comparison.

A depth-k view of node v is the depth-k truncation of the port-labeled
unfolding of the graph from v: every tree node carries the port by which it
was entered and its degree, and has one child per exit port (the port leading
straight back included).  Two such trees are equal iff the non-backtracking
labeled paths of length <= k with their degrees agree, so this is the usual
universal-cover view.

Views are hash-consed into a process-wide table, so shared subtrees are
stored once and two views are equal iff their root ids are equal.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import InvalidParameter
from .graph import PortGraph, check

ROOT = -1  # entry label of the root

_keys: list[tuple[int, int, tuple[int, ...]]] = []
_ids: dict[tuple[int, int, tuple[int, ...]], int] = {}


def _intern(entry: int, degree: int, children: tuple[int, ...]) -> int:
    key = (entry, degree, children)
    i = _ids.get(key)
    if i is None:
        i = len(_keys)
        _keys.append(key)
        _ids[key] = i
    return i


def view_table_size() -> int:
    return len(_keys)


def clear_view_table() -> None:
    """Drop all interned views.  Existing TruncatedView objects become invalid."""
    _keys.clear()
    _ids.clear()


@dataclass(frozen=True)
class TruncatedView:
    depth: int
    root: int

    @property
    def degree(self) -> int:
        return _keys[self.root][1]

    def node(self, i: int) -> tuple[int, int, tuple[int, ...]]:
        """(entry port, degree, child ids) of interned node i."""
        return _keys[i]

    def child(self, path: Sequence[int]) -> tuple[int, int]:
        """(entry, degree) of the tree node reached by the exit-port sequence."""
        i = self.root
        for p in path:
            i = _keys[i][2][p]
        return _keys[i][0], _keys[i][1]

    def to_text(self) -> str:
        memo: dict[int, str] = {}

        def render(i: int) -> str:
            s = memo.get(i)
            if s is None:
                entry, deg, kids = _keys[i]
                head = f"({'' if entry == ROOT else entry}:{deg}"
                s = head + "".join(" " + render(c) for c in kids) + ")"
                memo[i] = s
            return s

        return render(self.root)

    def __str__(self) -> str:
        return self.to_text()

    def maximal_paths(self) -> Iterator[tuple[tuple[int, ...], tuple[tuple[int, int], ...]]]:
        """Non-backtracking maximal paths in lexicographic port order.

        Yields (exit ports, expected (entry, degree) after each step).  A path
        is maximal when it reaches depth k or a node whose only exit is the
        port it was entered by.  The depth-0 view has the single empty path.
        """

        def walk(i, depth, ports, seen):
            entry, _, kids = _keys[i]
            extended = False
            if depth < self.depth:
                for p, c in enumerate(kids):
                    if p == entry:
                        continue
                    extended = True
                    ce, cd, _ = _keys[c]
                    yield from walk(c, depth + 1, ports + (p,), seen + ((ce, cd),))
            if not extended:
                yield ports, seen

        yield from walk(self.root, 0, (), ())


def unfold_view(g: PortGraph, v: int, k: int) -> TruncatedView:
    if not 0 <= v < g.n:
        raise InvalidParameter(f"node {v} not in graph of size {g.n}")
    if k < 0:
        raise InvalidParameter(f"depth must be >= 0, got {k}")
    return _Unfolder(g).view(v, k)


class _Unfolder:
    def __init__(self, g: PortGraph):
        self.g = g
        self.kids: dict[tuple[int, int], tuple[int, ...]] = {}

    def children(self, u: int, t: int) -> tuple[int, ...]:
        if t == 0:
            return ()
        key = (u, t)
        out = self.kids.get(key)
        if out is None:
            g = self.g
            out = tuple(
                _intern(q, g.degree(x), self.children(x, t - 1)) for x, q in g.adj[u]
            )
            self.kids[key] = out
        return out

    def view(self, v: int, k: int) -> TruncatedView:
        # fill bottom-up so recursion depth stays at one level per call
        for t in range(1, k):
            for u in range(self.g.n):
                self.children(u, t)
        return TruncatedView(k, _intern(ROOT, self.g.degree(v), self.children(v, k)))


def all_views(g: PortGraph, k: int) -> list[TruncatedView]:
    """Depth-k view of every node, in node order (a multiset; dedupe with set())."""
    unf = _Unfolder(g)
    return [unf.view(v, k) for v in range(g.n)]


def views_equal(a: TruncatedView, b: TruncatedView) -> bool:
    if a.depth != b.depth:
        raise InvalidParameter(f"view depths differ: {a.depth} vs {b.depth}")
    return a.root == b.root


_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def view_from_text(text: str) -> TruncatedView:
    """Inverse of TruncatedView.to_text."""
    tokens = _TOKEN.findall(text)
    pos = 0

    def parse() -> tuple[int, int]:
        nonlocal pos
        if tokens[pos] != "(":
            raise InvalidParameter(f"bad view text near token {pos}")
        label = tokens[pos + 1]
        pos += 2
        entry_s, _, deg_s = label.partition(":")
        kids, depth = [], 0
        while tokens[pos] != ")":
            c, d = parse()
            kids.append(c)
            depth = max(depth, d + 1)
        pos += 1
        entry = ROOT if entry_s == "" else int(entry_s)
        return _intern(entry, int(deg_s), tuple(kids)), depth

    root, depth = parse()
    return TruncatedView(depth, root)


def tree_from_view(view: TruncatedView) -> PortGraph:
    """Rebuild the tree spanned by the non-backtracking paths of a view.

    Only meaningful for a closed view: every maximal path must end at a
    degree-1 node, as happens for a tree unfolded to at least its eccentricity.
    """
    adj: list[list] = [[None] * view.degree]
    stack = [(view.root, 0)]
    while stack:
        i, u = stack.pop()
        entry, deg, kids = _keys[i]
        if not kids and deg > (0 if entry == ROOT else 1):
            raise InvalidParameter("view is not closed; depth too small for a tree")
        for p, c in enumerate(kids):
            if p == entry:
                continue
            ce, cd, _ = _keys[c]
            x = len(adj)
            adj.append([None] * cd)
            adj[u][p] = (x, ce)
            adj[x][ce] = (u, p)
            stack.append((c, x))
    return check(PortGraph(len(adj), adj))


# ---------------------------------------------------------------- refinement


def union_arrays(graphs: Sequence[PortGraph]):
    """Stack graphs into one disjoint union; returns (deg, nbr, rport, offsets)."""
    dmax = max(max(g.degrees, default=0) for g in graphs)
    dmax = max(dmax, 1)
    total = sum(g.n for g in graphs)
    deg = np.zeros(total, dtype=np.int64)
    nbr = np.full((total, dmax), -1, dtype=np.int64)
    rport = np.full((total, dmax), -1, dtype=np.int64)
    offsets = np.zeros(len(graphs) + 1, dtype=np.int64)
    base = 0
    for i, g in enumerate(graphs):
        d, nb, rp = g.arrays
        w = nb.shape[1]
        deg[base : base + g.n] = d
        nbr[base : base + g.n, :w] = np.where(nb >= 0, nb + base, -1)
        rport[base : base + g.n, :w] = rp
        base += g.n
        offsets[i + 1] = base
    return deg, nbr, rport, offsets


def refine(deg: np.ndarray, nbr: np.ndarray, rport: np.ndarray, rounds: int):
    """Port-aware color refinement.

    Returns (colors after min(rounds, t_stable) rounds, rounds actually run,
    stabilized flag).  Round 0 colors by degree; each later round recolors by
    (degree, reverse port and previous color of the neighbor behind each port).
    Two nodes share a round-t color iff their depth-t views are equal.
    """
    _, colors = np.unique(deg, return_inverse=True)
    colors = colors.astype(np.int64)
    classes = int(colors.max()) + 1 if colors.size else 0
    present = nbr >= 0
    for t in range(rounds):
        neighbor_colors = np.where(present, colors[np.where(present, nbr, 0)], -1)
        sig = np.concatenate([deg[:, None], rport, neighbor_colors], axis=1)
        _, new = np.unique(sig, axis=0, return_inverse=True)
        new = new.reshape(-1).astype(np.int64)
        new_classes = int(new.max()) + 1
        colors = new
        if new_classes == classes:
            return colors, t + 1, True
        classes = new_classes
    return colors, rounds, False


def refinement_history(deg, nbr, rport, rounds: int) -> list[np.ndarray]:
    """Colors after each round 0..rounds (stable rounds repeat the last partition)."""
    _, colors = np.unique(deg, return_inverse=True)
    colors = colors.astype(np.int64)
    out = [colors]
    present = nbr >= 0
    stable = False
    for _ in range(rounds):
        if stable:
            out.append(colors)
            continue
        neighbor_colors = np.where(present, colors[np.where(present, nbr, 0)], -1)
        sig = np.concatenate([deg[:, None], rport, neighbor_colors], axis=1)
        _, new = np.unique(sig, axis=0, return_inverse=True)
        new = new.reshape(-1).astype(np.int64)
        stable = new.max() == colors.max()
        colors = new
        out.append(colors)
    return out


def node_views_equal(g: PortGraph, v: int, h: PortGraph, w: int, k: int) -> bool:
    """Same answer as comparing unfold_view outputs, via joint refinement."""
    if not 0 <= v < g.n or not 0 <= w < h.n:
        raise InvalidParameter("node index out of range")
    if k < 0:
        raise InvalidParameter(f"depth must be >= 0, got {k}")
    deg, nbr, rport, off = union_arrays([g, h])
    colors, _, _ = refine(deg, nbr, rport, k)
    return bool(colors[v] == colors[off[1] + w])


def view_classes(g: PortGraph, k: int) -> int:
    """Number of distinct depth-k views among the nodes of g."""
    deg, nbr, rport = g.arrays
    colors, _, _ = refine(deg, nbr, rport, k)
    return int(colors.max()) + 1
