"""Deterministic execution of reactive agents on port graphs.

An agent is an object with ``program(obs, hooks)`` returning a generator: it
yields ``Move(port)`` actions, receives the next ``Observation`` through
``send``, and stops by returning (or by yielding ``STOP``).  Query hooks are
answered synchronously and cost no steps.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Any, Callable, Generator, Iterable, Protocol

from .graph import PortGraph, to_json


@dataclass(frozen=True)
class Observation:
    degree: int
    entry: int | None  # None at the start node


@dataclass(frozen=True)
class Move:
    port: int


class _Stop:
    __slots__ = ()

    def __repr__(self) -> str:
        return "STOP"


STOP = _Stop()

Action = Move | _Stop
Program = Generator[Action, Observation, Any]


class Agent(Protocol):
    name: str

    def program(self, obs: Observation, hooks: "Hooks | None") -> Program: ...


class Status(enum.Enum):
    STOPPED = "stopped"
    STEP_LIMIT = "step-limit"
    FAULTED = "faulted"


@dataclass(frozen=True)
class Step:
    exit_port: int
    node: int  # runtime handle of the entered node; never shown to the agent
    obs: Observation


@dataclass(frozen=True)
class QueryRecord:
    step: int  # number of moves made before the query
    kind: str
    args: tuple
    answer: Any


@dataclass
class Trace:
    start: int
    start_obs: Observation
    steps: list[Step] = field(default_factory=list)
    status: Status = Status.STEP_LIMIT
    queries: list[QueryRecord] = field(default_factory=list)
    fault: str | None = None

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def nodes(self) -> list[int]:
        return [self.start] + [s.node for s in self.steps]

    @property
    def visited(self) -> set[int]:
        return set(self.nodes)

    @property
    def final_node(self) -> int:
        return self.steps[-1].node if self.steps else self.start

    def node_after(self, moves: int) -> int:
        return self.start if moves == 0 else self.steps[moves - 1].node


class Hooks:
    """Base hook set.  Subclasses answer the query kinds they support."""

    def answer(self, kind: str, args: tuple) -> Any:
        raise NotImplementedError(f"query kind {kind!r} not supported")


class _LoggedHooks:
    """What the agent actually receives: forwards to Hooks and logs each call."""

    def __init__(self, inner: Hooks, trace: Trace):
        self._inner = inner
        self._trace = trace

    def query(self, kind: str, *args) -> Any:
        ans = self._inner.answer(kind, args)
        self._trace.queries.append(QueryRecord(len(self._trace.steps), kind, args, ans))
        return ans

    # convenience wrappers for the hook schemas used in this package
    def enumerate(self, i: int) -> PortGraph:
        return self.query("enumerate", i)

    def member(self, g: PortGraph) -> bool:
        return self.query("member", g)

    def ask(self, q) -> bool:
        return self.query("ask", q)


class ScriptedHooks(Hooks):
    """Replays answers recorded in an earlier trace, in order."""

    def __init__(self, records: Iterable[QueryRecord]):
        self._records = list(records)
        self._pos = 0

    def answer(self, kind, args):
        rec = self._records[self._pos]
        if rec.kind != kind or rec.args != args:
            raise RuntimeError(f"replay diverged at query {self._pos}: {kind}{args}")
        self._pos += 1
        return rec.answer


def run(
    agent: Agent,
    g: PortGraph,
    start: int,
    limit: int,
    hooks: Hooks | None = None,
) -> Trace:
    """Run ``agent`` on ``g`` from ``start`` for at most ``limit`` moves."""
    if not 0 <= start < g.n:
        raise ValueError(f"start {start} not a node of the graph")
    if limit < 0:
        raise ValueError("limit must be >= 0")
    obs = Observation(g.degree(start), None)
    trace = Trace(start, obs)
    logged = _LoggedHooks(hooks, trace) if hooks is not None else None
    node = start
    try:
        prog = agent.program(obs, logged)
        action = next(prog)
        while True:
            if action is STOP:
                trace.status = Status.STOPPED
                break
            if not isinstance(action, Move):
                raise TypeError(f"agent produced {action!r}, not an action")
            deg = g.degree(node)
            if not 0 <= action.port < deg:
                trace.status = Status.FAULTED
                trace.fault = f"move by port {action.port} at a node of degree {deg}"
                break
            if len(trace.steps) >= limit:
                trace.status = Status.STEP_LIMIT
                break
            node, entry = g.adj[node][action.port]
            obs = Observation(g.degree(node), entry)
            trace.steps.append(Step(action.port, node, obs))
            action = prog.send(obs)
    except StopIteration:
        trace.status = Status.STOPPED
    except Exception as exc:  # agent bug or hook fault: never report it as an outcome
        trace.status = Status.FAULTED
        trace.fault = f"{type(exc).__name__}: {exc}"
    return trace


def is_full_exploration(t: Trace, g: PortGraph) -> bool:
    return t.status is Status.STOPPED and len(t.visited) == g.n


def traces_prefix_equal(t1: Trace, t2: Trace, k: int) -> bool:
    """First k moves and observations, and the queries issued up to the
    (k+1)-th move decision, coincide."""
    if t1.start_obs != t2.start_obs:
        return False
    a, b = t1.steps[:k], t2.steps[:k]
    if len(a) != len(b):
        return False
    if any(x.exit_port != y.exit_port or x.obs != y.obs for x, y in zip(a, b)):
        return False
    qa = [(q.step, q.kind, q.args) for q in t1.queries if q.step <= k]
    qb = [(q.step, q.kind, q.args) for q in t2.queries if q.step <= k]
    return _same_requests(qa, qb)


def _same_requests(qa, qb) -> bool:
    if len(qa) != len(qb):
        return False
    for (sa, ka, aa), (sb, kb, ab) in zip(qa, qb):
        if sa != sb or ka != kb or len(aa) != len(ab):
            return False
        for x, y in zip(aa, ab):
            if isinstance(x, PortGraph) or isinstance(y, PortGraph):
                if not (isinstance(x, PortGraph) and isinstance(y, PortGraph)):
                    return False
                if (x.n, x.adj) != (y.n, y.adj):
                    return False
            elif x != y:
                return False
    return True


# ------------------------------------------------------------ serialization


def _jsonable(x):
    if isinstance(x, PortGraph):
        return {"graph": json.loads(to_json(x))}
    if isinstance(x, (list, tuple)):
        return [_jsonable(y) for y in x]
    if hasattr(x, "to_record"):
        return x.to_record()
    return x


def trace_records(t: Trace) -> Iterable[dict]:
    """Line records: header, interleaved steps and queries, footer."""
    yield {"start": t.start, "degree": t.start_obs.degree}
    qi = 0
    for i in range(len(t.steps) + 1):
        while qi < len(t.queries) and t.queries[qi].step == i:
            q = t.queries[qi]
            yield {
                "step": i,
                "query": q.kind,
                "args": _jsonable(q.args),
                "answer": _jsonable(q.answer),
            }
            qi += 1
        if i < len(t.steps):
            s = t.steps[i]
            yield {
                "step": i + 1,
                "exit": s.exit_port,
                "entry": s.obs.entry,
                "degree": s.obs.degree,
                "node": s.node,
            }
    footer = {"status": t.status.value}
    if t.fault:
        footer["fault"] = t.fault
    yield footer


def write_trace(t: Trace, path) -> None:
    with open(path, "w") as fh:
        for rec in trace_records(t):
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def read_trace(path) -> Trace:
    """Rebuild a Trace from its line records (query payloads stay as JSON)."""
    with open(path) as fh:
        recs = [json.loads(line) for line in fh if line.strip()]
    head = recs[0]
    t = Trace(head["start"], Observation(head["degree"], None))
    for rec in recs[1:]:
        if "exit" in rec:
            t.steps.append(Step(rec["exit"], rec["node"], Observation(rec["degree"], rec["entry"])))
        elif "query" in rec:
            t.queries.append(
                QueryRecord(rec["step"], rec["query"], tuple(rec["args"]), rec["answer"])
            )
        elif "status" in rec:
            t.status = Status(rec["status"])
            t.fault = rec.get("fault")
    return t


# ------------------------------------------------------------ simple agents


class FunctionAgent:
    """Agent from a pure policy ``f(history) -> port | None`` (None = stop)."""

    def __init__(self, policy: Callable[[list[Observation]], int | None], name="policy"):
        self.policy = policy
        self.name = name

    def program(self, obs, hooks):
        history = [obs]
        while True:
            p = self.policy(history)
            if p is None:
                return
            obs = yield Move(p)
            history.append(obs)


def stop_agent() -> FunctionAgent:
    return FunctionAgent(lambda h: None, name="stop")


def port_zero_agent() -> FunctionAgent:
    return FunctionAgent(lambda h: 0, name="port-zero")
