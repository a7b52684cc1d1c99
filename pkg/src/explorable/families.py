"""Graph families in canonical order, with explorability witnesses.

A family is an enumeration ``member(i)``, i >= 1, of pairwise non-isomorphic
graphs with non-decreasing sizes.  Members are returned in canonical
numbering, so "node v of the i-th member" means the same thing to every
component (dedicated agents, the oracle, the universal agent).

Condition C quantifies over the whole infinite tail of a family.  Witness
search and verification here are finite surrogates that look at members up
to an index ``j_max``; each built-in family documents why its tail cannot
collide.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .enumeration import enumerate_all_graphs, enumerate_all_trees
from .errors import InvalidParameter
from .graph import (
    PortGraph,
    build_c,
    build_clockwise_ring,
    build_d,
    canonical_form,
    eccentricity,
    port_isomorphic,
)
from .views import node_views_equal, refinement_history, union_arrays


class Witness(NamedTuple):
    k: int  # depth witness
    m: int  # range witness


class Bounds(NamedTuple):
    k_max: int
    m_max: int
    j_max: int


@dataclass(eq=False)
class Family:
    name: str
    build: Callable[[int], PortGraph]
    size_fn: Callable[[int], int] | None = None
    witness_fn: Callable[["Family", int, int], Witness] | None = None
    counterexample_fn: Callable[[int, int, int, int], tuple[int, int]] | None = None
    canonicalize: bool = True
    _members: dict[int, PortGraph] = field(default_factory=dict, repr=False)

    def member(self, i: int) -> PortGraph:
        if i < 1:
            raise InvalidParameter(f"family index must be >= 1, got {i}")
        g = self._members.get(i)
        if g is None:
            g = self.build(i)
            if self.canonicalize:
                g = canonical_form(g)
            self._members[i] = g
        return g

    enumerate = member

    def size(self, i: int) -> int:
        if self.size_fn is not None:
            return self.size_fn(i)
        return self.member(i).n

    @property
    def has_witnesses(self) -> bool:
        return self.witness_fn is not None

    def witness(self, i: int, v: int) -> Witness:
        if self.witness_fn is None:
            raise InvalidParameter(f"family {self.name!r} carries no explorability witnesses")
        g = self.member(i)
        if not 0 <= v < g.n:
            raise InvalidParameter(f"node {v} not in member {i} of size {g.n}")
        return self.witness_fn(self, i, v)

    def counterexample(self, i: int, v: int, k: int, m: int) -> tuple[int, int]:
        if self.counterexample_fn is None:
            raise InvalidParameter(f"family {self.name!r} carries no non-explorability witness")
        return self.counterexample_fn(i, v, k, m)

    def index_of(self, g: PortGraph) -> int | None:
        """Index of the member port-isomorphic to g, or None."""
        i = 1
        while True:
            s = self.size(i)
            if s > g.n:
                return None
            if s == g.n and port_isomorphic(self.member(i), g):
                return i
            i += 1

    def contains(self, g: PortGraph) -> bool:
        return self.index_of(g) is not None

    def __repr__(self) -> str:
        return f"Family({self.name!r})"


# ------------------------------------------------------------ witness search


_collision_cache: dict[tuple[int, int, int, int], np.ndarray] = {}


def _collisions(f: Family, i: int, j: int, k_max: int) -> np.ndarray:
    """coll[v, k] = some node of G_j has the same depth-k view as v in G_i."""
    key = (id(f), i, j, k_max)
    out = _collision_cache.get(key)
    if out is None:
        gi, gj = f.member(i), f.member(j)
        deg, nbr, rport, off = union_arrays([gi, gj])
        hist = refinement_history(deg, nbr, rport, k_max)
        out = np.zeros((gi.n, k_max + 1), dtype=bool)
        for k, colors in enumerate(hist):
            theirs = colors[off[1] :]
            out[:, k] = np.isin(colors[: gi.n], theirs)
        _collision_cache[key] = out
    return out


def collision_table(f: Family, i: int, bounds: Bounds) -> np.ndarray:
    """coll[v, k, j] for j in 0..j_max (column 0 unused)."""
    g = f.member(i)
    table = np.zeros((g.n, bounds.k_max + 1, bounds.j_max + 1), dtype=bool)
    for j in range(1, bounds.j_max + 1):
        table[:, :, j] = _collisions(f, i, j, bounds.k_max)
    return table


def _witness_from_table(coll: np.ndarray, bounds: Bounds) -> Witness | None:
    """coll[k, j] for one node: lexicographically first (k, m)."""
    for k in range(1, bounds.k_max + 1):
        hits = np.nonzero(coll[k, 1:])[0]
        m = max(1, int(hits[-1]) + 1) if hits.size else 1
        if m <= bounds.m_max:
            return Witness(k, m)
    return None


def find_witness(f: Family, i: int, v: int, bounds: Bounds) -> Witness | None:
    """Lexicographically first (k, m), k <= k_max, m <= m_max, such that the
    depth-k view of v in G_i differs from every depth-k view in G_j for
    m < j <= j_max.  None when the bounds are exhausted."""
    g = f.member(i)
    if not 0 <= v < g.n:
        raise InvalidParameter(f"node {v} not in member {i}")
    table = collision_table(f, i, bounds)
    return _witness_from_table(table[v], bounds)


def find_witnesses(f: Family, i: int, bounds: Bounds) -> list[Witness | None]:
    table = collision_table(f, i, bounds)
    return [_witness_from_table(table[v], bounds) for v in range(f.member(i).n)]


def verify_witness_prefix(f: Family, i: int, v: int, k: int, m: int, j_max: int) -> bool:
    """Depth-k view of v in G_i differs from all depth-k views in G_j, m < j <= j_max."""
    if k < 1 or m < 1:
        raise InvalidParameter("witness values must be positive")
    g = f.member(i)
    for j in range(m + 1, j_max + 1):
        h = f.member(j)
        deg, nbr, rport, off = union_arrays([g, h])
        from .views import refine

        colors, _, _ = refine(deg, nbr, rport, k)
        if np.any(colors[off[1] :] == colors[v]):
            return False
    return True


class WitnessTable:
    """Computed witnesses, kept per (family, i); persisted as a text table
    with columns family, i, v, k, m, j_max."""

    def __init__(self):
        self.rows: dict[tuple[str, int], tuple[list[Witness], int]] = {}

    def get(self, family: str, i: int):
        return self.rows.get((family, i))

    def put(self, family: str, i: int, ws: list[Witness], j_max: int) -> None:
        self.rows[(family, i)] = (ws, j_max)

    def dump(self) -> str:
        lines = ["# family i v k m j_max"]
        for (name, i), (ws, j_max) in sorted(self.rows.items()):
            for v, w in enumerate(ws):
                lines.append(f"{name} {i} {v} {w.k} {w.m} {j_max}")
        return "\n".join(lines) + "\n"

    def save(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.dump())

    @classmethod
    def load(cls, path) -> "WitnessTable":
        table = cls()
        acc: dict[tuple[str, int], tuple[dict[int, Witness], int]] = {}
        with open(path) as fh:
            for line in fh:
                if not line.strip() or line.startswith("#"):
                    continue
                name, i, v, k, m, j_max = line.split()
                entry = acc.setdefault((name, int(i)), ({}, int(j_max)))
                entry[0][int(v)] = Witness(int(k), int(m))
        for key, (by_v, j_max) in acc.items():
            table.rows[key] = ([by_v[v] for v in sorted(by_v)], j_max)
        return table


WITNESS_TABLE = WitnessTable()


def computed_witnesses(bounds_for: Callable[[int], Bounds]):
    """Witness oracle backed by find_witness, cached in WITNESS_TABLE."""

    def witness(f: Family, i: int, v: int) -> Witness:
        row = WITNESS_TABLE.get(f.name, i)
        if row is None:
            b = bounds_for(i)
            ws = find_witnesses(f, i, b)
            missing = [u for u, w in enumerate(ws) if w is None]
            if missing:
                raise InvalidParameter(
                    f"no witness for nodes {missing} of member {i} of {f.name!r} within {b}"
                )
            WITNESS_TABLE.put(f.name, i, ws, b.j_max)
            row = WITNESS_TABLE.get(f.name, i)
        return row[0][v]

    return witness


# ------------------------------------------------------------ the families


def c_bounds(i: int) -> Bounds:
    # C_{i+2}: a node is separated from all longer rings once its view closes
    # a full turn around the ring, i.e. k <= 2(i+2).  Members with ring size
    # above 2k+2 cannot then collide, which is why j_max = 2*k_max + 4 makes
    # the surrogate exact.
    k_max = 2 * (i + 2)
    return Bounds(k_max=k_max, m_max=i + 4, j_max=2 * k_max + 4)


def c_family() -> Family:
    """G_i = C_{i+2}, sizes i+3."""
    return Family(
        "c",
        build=lambda i: build_c(i + 2),
        size_fn=lambda i: i + 3,
        witness_fn=computed_witnesses(c_bounds),
    )


def _ring_counterexample(i: int, v: int, k: int, m: int) -> tuple[int, int]:
    # every clockwise ring has the same view from every node
    return max(m, k) + 1, 0


def ring_family() -> Family:
    """G_i = R_{i+2}; not explorable."""
    return Family(
        "rings",
        build=lambda i: build_clockwise_ring(i + 2),
        size_fn=lambda i: i + 2,
        counterexample_fn=_ring_counterexample,
    )


def _tree_witness(f: Family, i: int, v: int) -> Witness:
    # The depth-ecc(v) view of a tree reaches a leaf at the end of every
    # non-backtracking path, so it determines the tree: only G_i itself can
    # match, for every j.  Any smaller depth leaves a non-leaf at the frontier
    # and longer trees repeat the view.  Hence this is the lexicographically
    # first pair, exactly, not just on a prefix.
    return Witness(eccentricity(f.member(i), v), i)


def tree_family() -> Family:
    return Family(
        "trees",
        build=enumerate_all_trees,
        witness_fn=_tree_witness,
        canonicalize=False,
    )


def fstar_family(r: int) -> Family:
    """H_i = C_{i+2} for i <= r, D_i for i > r."""
    if r < 0:
        raise InvalidParameter(f"r must be >= 0, got {r}")
    return Family(
        f"fstar:r={r}",
        build=lambda i: build_c(i + 2) if i <= r else build_d(i),
        size_fn=lambda i: i + 3 if i <= r else 8 * i + 1,
    )


def all_graphs_family() -> Family:
    return Family("all-graphs", build=enumerate_all_graphs, canonicalize=False)


_FSTAR = re.compile(r"fstar:r=(\d+)$")
_registry: dict[str, Family] = {}


def get_family(name: str) -> Family:
    """Look up a family by registry name: rings, trees, c, fstar:r=<R>, all-graphs."""
    fam = _registry.get(name)
    if fam is not None:
        return fam
    if name == "rings":
        fam = ring_family()
    elif name == "trees":
        fam = tree_family()
    elif name == "c":
        fam = c_family()
    elif name == "all-graphs":
        fam = all_graphs_family()
    elif (mt := _FSTAR.match(name)) is not None:
        fam = fstar_family(int(mt.group(1)))
    else:
        raise InvalidParameter(f"unknown family {name!r}")
    _registry[name] = fam
    return fam


def check_counterexample(f: Family, i: int, v: int, k: int, m: int) -> bool:
    j, w = f.counterexample(i, v, k, m)
    return j > m and node_views_equal(f.member(i), v, f.member(j), w, k)
