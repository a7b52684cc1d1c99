"""Yes/no oracle over a family, and the oracle-driven universal agent.

The query algebra is closed over the schemas the universal algorithm uses:

* IthMemberIs(i, H): is the i-th member port-isomorphic to H?
* DepthWitnessIs(v, i, j): is k(v, i) = j?
* RangeWitnessIs(v, i, j): is m(v, i) = j?

plus CodeEntryIs(i, pos, x), an extension: is entry pos of the canonical
serialization of the i-th member equal to x?  It lets the agent learn members
whose index in the all-graphs enumeration lies beyond the enumeration cap.
Further schemas can be added with ``register``.

{H_j} is read as the canonical enumeration of all connected port graphs
(enumerate_all_graphs), the reading under which the questions type-check.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable

from .config import get_config
from .enumeration import enumerate_all_graphs, graphs_of_size
from .errors import InvalidParameter, OracleFault
from .families import Family
from .graph import PortGraph, canonical_serialization, from_serialization, port_isomorphic, to_json
from .agents import Walker, check, r_procedure
from .runtime import Hooks
from .views import unfold_view


@dataclass(frozen=True)
class IthMemberIs:
    i: int
    graph: PortGraph

    def to_record(self):
        return {"schema": "Q1", "i": self.i, "graph": json.loads(to_json(self.graph))}


@dataclass(frozen=True)
class DepthWitnessIs:
    v: int
    i: int
    j: int

    def to_record(self):
        return {"schema": "Q2", "v": self.v, "i": self.i, "j": self.j}


@dataclass(frozen=True)
class RangeWitnessIs:
    v: int
    i: int
    j: int

    def to_record(self):
        return {"schema": "Q3", "v": self.v, "i": self.i, "j": self.j}


@dataclass(frozen=True)
class CodeEntryIs:
    i: int
    pos: int
    x: int

    def to_record(self):
        return {"schema": "code-entry", "i": self.i, "pos": self.pos, "x": self.x}


def _q1(f: Family, q: IthMemberIs) -> bool:
    if f.size(q.i) != q.graph.n:
        return False
    return port_isomorphic(f.member(q.i), q.graph)


def _witness(f: Family, i: int, v: int):
    try:
        return f.witness(i, v)
    except InvalidParameter as exc:
        raise OracleFault(f"witness of ({v}, {i}) unavailable: {exc}") from exc


def _code_entry(f: Family, q: CodeEntryIs) -> bool:
    s = canonical_serialization(f.member(q.i))
    return q.pos < len(s) and s[q.pos] == q.x


_evaluators: dict[type, Callable[[Family, object], bool]] = {
    IthMemberIs: _q1,
    DepthWitnessIs: lambda f, q: _witness(f, q.i, q.v).k == q.j,
    RangeWitnessIs: lambda f, q: _witness(f, q.i, q.v).m == q.j,
    CodeEntryIs: _code_entry,
}


def register(schema: type, evaluator: Callable[[Family, object], bool]) -> None:
    """Add a query schema: evaluator(family, query) -> bool."""
    _evaluators[schema] = evaluator


class OracleBackend(Hooks):
    """Truthful oracle for one family; answers the hook kind "ask"."""

    def __init__(self, fam: Family):
        self.family = fam
        self.log: list[tuple[object, bool]] = []

    def evaluate(self, q) -> bool:
        ev = _evaluators.get(type(q))
        if ev is None:
            raise OracleFault(f"no evaluator registered for {type(q).__name__}")
        return bool(ev(self.family, q))

    def answer(self, kind, args):
        if kind != "ask" or len(args) != 1:
            raise OracleFault(f"oracle only answers 'ask' queries, got {kind!r}")
        ans = self.evaluate(args[0])
        self.log.append((args[0], ans))
        return ans


def oracle_backend(fam: Family) -> OracleBackend:
    return OracleBackend(fam)


# ---------------------------------------------------------------- procedures
#
# ``ask`` is any callable query -> bool: the logged hooks of a running agent,
# or OracleBackend.evaluate when used directly.


def _ask_fn(oracle) -> Callable[[object], bool]:
    if isinstance(oracle, OracleBackend):
        return oracle.evaluate
    if hasattr(oracle, "ask"):
        return oracle.ask
    return oracle


def find_ith_graph(oracle, i: int, mode: str = "scan") -> PortGraph:
    """The i-th member of the oracle's family.

    scan: ask IthMemberIs(i, H_j) for j = 1, 2, ... over the all-graphs
    enumeration; resource-cap error when the cap is reached without a yes.
    digits: read the canonical serialization entry by entry (each entry by
    asking x = 0, 1, ...), then confirm with one IthMemberIs query.
    auto: learn the size first; scan inside that size block when the
    size is at most enum_query_cap, digits otherwise.
    """
    ask = _ask_fn(oracle)
    if mode == "scan":
        j = 1
        while True:
            h = enumerate_all_graphs(j)  # raises ResourceCapError past the cap
            if ask(IthMemberIs(i, h)):
                return h
            j += 1
    if mode not in ("digits", "auto"):
        raise InvalidParameter(f"unknown mode {mode!r}")
    n = _read_entry(ask, i, 0)
    if mode == "auto" and n <= min(enum_query_cap, get_config().graph_cap):
        for h in graphs_of_size(n):
            if ask(IthMemberIs(i, h)):
                return h
        raise OracleFault(f"no graph of size {n} matches member {i}")
    seq = [n, _read_entry(ask, i, 1)]
    for _ in range(n):
        d = _read_entry(ask, i, len(seq))
        seq.append(d)
        for _ in range(2 * d):
            seq.append(_read_entry(ask, i, len(seq)))
    g = from_serialization(seq)
    if not ask(IthMemberIs(i, g)):
        raise OracleFault(f"reconstructed member {i} was not confirmed")
    return g


enum_query_cap = 4  # largest size fetched by IthMemberIs scans in auto mode


def _read_entry(ask, i: int, pos: int, limit: int = 1 << 20) -> int:
    for x in range(limit):
        if ask(CodeEntryIs(i, pos, x)):
            return x
    raise OracleFault(f"entry {pos} of member {i} not found below {limit}")


def _count_up(ask, make, limit: int = 1 << 20) -> int:
    for j in range(1, limit):
        if ask(make(j)):
            return j
    raise OracleFault("witness not found")


def find_depth_witness(oracle, v: int, i: int) -> int:
    return _count_up(_ask_fn(oracle), lambda j: DepthWitnessIs(v, i, j))


def find_range_witness(oracle, v: int, i: int) -> int:
    return _count_up(_ask_fn(oracle), lambda j: RangeWitnessIs(v, i, j))


# ---------------------------------------------------------------- the agent


def universal_find_success(w: Walker, ask, events: list, mode: str):
    """Find Success where each Check(v, i) first fetches G_i and k(v, i) by queries."""
    i = 1
    while True:
        v = 0
        while True:
            g = find_ith_graph(ask, i, mode)
            if v >= g.n:
                break
            k = find_depth_witness(ask, v, i)
            ok = yield from check(w, unfold_view(g, v, k))
            events.append((i, v, ok, w.moves))
            if ok:
                return v, i
            v += 1
        i += 1


class UniversalExplorationAgent:
    """Universal Find Success, then the range witness, G_1..G_m, and R(M).

    Needs hooks answering "ask" (an OracleBackend).  Nothing about the family
    is built in; everything comes through queries.
    """

    def __init__(self, mode: str = "auto", name: str = "universal-oracle"):
        self.mode = mode
        self.name = name
        self.events: list = []
        self.result: tuple[int, int] | None = None
        self.bound: int | None = None

    def program(self, obs, hooks):
        if hooks is None:
            raise OracleFault("universal agent run without an oracle")
        self.events, self.result, self.bound = [], None, None
        ask = hooks.ask
        w = Walker(obs)
        v, i = yield from universal_find_success(w, ask, self.events, self.mode)
        self.result = (v, i)
        m = find_range_witness(ask, v, i)
        self.bound = max(find_ith_graph(ask, t, self.mode).n for t in range(1, m + 1))
        yield from r_procedure(w, self.bound)


def universal_exploration_agent(mode: str = "auto") -> UniversalExplorationAgent:
    return UniversalExplorationAgent(mode)


def replay_log(fam: Family, records) -> bool:
    """Every (query, answer) reproduces against a fresh backend for fam."""
    fresh = OracleBackend(fam)
    return all(fresh.evaluate(q) == a for q, a in records)

