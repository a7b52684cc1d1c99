"""Adversary against universal agents that read the family as an algorithm.

E_1 runs the candidate on C_3 from its degree-3 node with the c family
behind its hook; k is its stop step and r the largest index it asked for
(largest queried graph size in decision mode, 0 without queries).  E_2 runs
it on D_m, m = max(k, r) + 1, from the node antipodal to the degree-4 node,
with fstar_family(r) behind the hook.  The first k steps and all hook traffic
coincide, so the candidate stops at step k having seen fewer than 8m+1 nodes.

Every verdict is computed from the two traces; nothing the candidate reports
about itself is trusted.
"""
from __future__ import annotations

import json
import subprocess
from dataclasses import dataclass, field

from .agents import Walker, explo_agent, r_procedure
from .config import get_config
from .errors import InternalError, InvalidParameter
from .families import Family, c_family, fstar_family, get_family
from .graph import PortGraph, antipode_of_degree4, build_c, canonical_form, from_json, to_json
from .runtime import STOP, Hooks, Move, Observation, Status, Trace, run, traces_prefix_equal, write_trace

ENUM, DECISION = "enum", "decision"


class EnumerationHooks(Hooks):
    """Answers "enumerate": the i-th member of the family."""

    def __init__(self, fam: Family):
        self.family = fam

    def answer(self, kind, args):
        if kind != "enumerate":
            raise InvalidParameter(f"enumeration hook cannot answer {kind!r}")
        (i,) = args
        if not isinstance(i, int) or i < 1:
            raise InvalidParameter(f"enumeration index must be a positive integer, got {i!r}")
        return self.family.member(i)


class MembershipHooks(Hooks):
    """Answers "member": is the graph port-isomorphic to some member?"""

    def __init__(self, fam: Family):
        self.family = fam

    def answer(self, kind, args):
        if kind != "member":
            raise InvalidParameter(f"membership hook cannot answer {kind!r}")
        (g,) = args
        return self.family.contains(g)


def hooks_for(fam: Family, mode: str) -> Hooks:
    if mode == ENUM:
        return EnumerationHooks(fam)
    if mode == DECISION:
        return MembershipHooks(fam)
    raise InvalidParameter(f"unknown mode {mode!r}")


def adversary_parameter(t: Trace, mode: str) -> int:
    """r: largest queried index (enum) or largest queried graph size (decision)."""
    vals = [0]
    for q in t.queries:
        if mode == ENUM and q.kind == "enumerate":
            vals.append(q.args[0])
        elif mode == DECISION and q.kind == "member":
            vals.append(q.args[0].n)
    return max(vals)


@dataclass
class RefutationReport:
    candidate: str
    mode: str
    verdict: str  # refuted | survived-cap | faulted
    k: int | None = None
    r: int | None = None
    m: int | None = None
    e1: Trace | None = None
    e2: Trace | None = None
    visited_e2: int | None = None
    size_e2: int | None = None
    prefix_equal: bool | None = None
    detail: str = ""
    trace_files: dict = field(default_factory=dict)

    @property
    def fstar_explorable(self) -> bool | None:
        # fstar_family(r) contains C_3 when r >= 1, and C_3's degree-3 node
        # shares every finite view with some D_j; only r = 0 is explorable.
        return None if self.r is None else self.r == 0

    def to_dict(self) -> dict:
        return {
            "candidate": self.candidate,
            "mode": self.mode,
            "verdict": self.verdict,
            "k": self.k,
            "r": self.r,
            "m": self.m,
            "visited_e2": self.visited_e2,
            "size_e2": self.size_e2,
            "prefix_equal": self.prefix_equal,
            "fstar_explorable": self.fstar_explorable,
            "detail": self.detail,
            "traces": self.trace_files,
        }

    def write(self, path, trace_prefix=None) -> None:
        if trace_prefix is not None:
            for name, t in (("e1", self.e1), ("e2", self.e2)):
                if t is not None:
                    out = f"{trace_prefix}.{name}.jsonl"
                    write_trace(t, out)
                    self.trace_files[name] = out
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def e1_host() -> tuple[PortGraph, int]:
    g = c_family().member(1)
    return g, g.degrees.index(3)


def run_e1(u, cap: int, mode: str = ENUM):
    """(k, r, trace) with k None when the candidate did not stop."""
    g, v = e1_host()
    t = run(u, g, v, cap, hooks_for(c_family(), mode))
    if t.status is not Status.STOPPED:
        return None, adversary_parameter(t, mode), t
    return len(t.steps), adversary_parameter(t, mode), t


def run_e2(u, k: int, r: int, mode: str = ENUM, e1: Trace | None = None):
    """(m, trace, verdict, detail).  Raises InternalError if E_2 departs from
    E_1 within the first k steps."""
    m = max(k, r, 0) + 1
    if m > get_config().build_limit:
        return m, None, "survived-cap", f"m = {m} exceeds the build limit"
    fam = fstar_family(r)
    h = fam.member(m)
    w = antipode_of_degree4(h)
    t = run(u, h, w, k + 1, hooks_for(fam, mode))
    if e1 is not None:
        if not traces_prefix_equal(e1, t, k):
            raise InternalError(
                "E_2 diverged from E_1 within the first k steps; the candidate is not "
                "deterministic in its observations and hook answers"
            )
    if t.status is Status.FAULTED:
        return m, t, "faulted", t.fault or ""
    stopped_at_k = t.status is Status.STOPPED and len(t.steps) == k
    if stopped_at_k and len(t.visited) < h.n:
        return m, t, "refuted", f"stopped at step {k} after visiting {len(t.visited)} of {h.n} nodes"
    raise InternalError(f"E_2 did not stop at step {k} with nodes unvisited ({t.status.value}, {len(t.steps)} steps)")


def refute(u, mode: str = ENUM, cap: int | None = None) -> RefutationReport:
    cap = get_config().step_limit if cap is None else cap
    name = getattr(u, "name", type(u).__name__)
    k, r, t1 = run_e1(u, cap, mode)
    rep = RefutationReport(name, mode, "survived-cap", k=k, r=r, e1=t1)
    if t1.status is Status.FAULTED:
        rep.verdict, rep.detail = "faulted", t1.fault or ""
        return rep
    if k is None:
        rep.detail = f"no stop on C_3 within {cap} steps"
        return rep
    m, t2, verdict, detail = run_e2(u, k, r, mode, e1=t1)
    rep.m, rep.e2, rep.verdict, rep.detail = m, t2, verdict, detail
    if t2 is not None:
        rep.prefix_equal = traces_prefix_equal(t1, t2, k)
        rep.visited_e2 = len(t2.visited)
        rep.size_e2 = 8 * m + 1
    return rep


# ---------------------------------------------------------------- strawmen


class NaiveCandidate:
    """Enumerate(1..B), M = largest size seen (4 without queries), R(min(M, cap))."""

    def __init__(self, budget: int):
        if budget < 0:
            raise InvalidParameter("budget must be >= 0")
        self.budget = budget
        self.name = f"naive:B={budget}"
        self.bound: int | None = None

    def program(self, obs, hooks):
        sizes = [hooks.enumerate(i).n for i in range(1, self.budget + 1)]
        self.bound = min(max(sizes, default=4), get_config().uxs_cap)
        yield from r_procedure(Walker(obs), self.bound)


def naive_candidate(budget: int) -> NaiveCandidate:
    return NaiveCandidate(budget)


class MembershipStrawman:
    """Asks whether C_3..C_6 are members, then R on the largest member size."""

    name = "membership"

    def __init__(self, probe_max: int = 6):
        self.probe_max = probe_max
        self.bound: int | None = None

    def program(self, obs, hooks):
        yes = [k + 1 for k in range(3, self.probe_max + 1) if hooks.member(canonical_form(build_c(k)))]
        self.bound = min(max(yes, default=4), get_config().uxs_cap)
        yield from r_procedure(Walker(obs), self.bound)


def membership_strawman() -> MembershipStrawman:
    return MembershipStrawman()


class SubprocessCandidate:
    """External candidate speaking JSON lines over stdin/stdout.

    We send {"obs": {"degree": d, "entry": e|null}} and {"answer": ...};
    the candidate sends {"move": p}, {"stop": true}, {"enumerate": i} or
    {"member": {"n": .., "adj": ..}}.  One process per run.
    """

    def __init__(self, argv: list[str], name: str | None = None):
        self.argv = list(argv)
        self.name = name or f"cmd:{' '.join(argv)}"

    def program(self, obs: Observation, hooks):
        proc = subprocess.Popen(
            self.argv, stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True, bufsize=1
        )
        try:
            self._send(proc, {"obs": {"degree": obs.degree, "entry": obs.entry}})
            while True:
                line = proc.stdout.readline()
                if not line:
                    raise InvalidParameter("candidate process ended without stopping")
                msg = json.loads(line)
                if "move" in msg:
                    obs = yield Move(int(msg["move"]))
                    self._send(proc, {"obs": {"degree": obs.degree, "entry": obs.entry}})
                elif msg.get("stop"):
                    yield STOP
                    return
                elif "enumerate" in msg:
                    g = hooks.enumerate(int(msg["enumerate"]))
                    self._send(proc, {"answer": json.loads(to_json(g))})
                elif "member" in msg:
                    ans = hooks.member(from_json(json.dumps(msg["member"])))
                    self._send(proc, {"answer": ans})
                else:
                    raise InvalidParameter(f"unrecognized candidate record {msg!r}")
        finally:
            if proc.stdin:
                proc.stdin.close()
            proc.kill()
            proc.wait()

    @staticmethod
    def _send(proc, rec) -> None:
        proc.stdin.write(json.dumps(rec) + "\n")
        proc.stdin.flush()


def resolve_candidate(name: str):
    """naive:B=<B>, membership, explo:<family>."""
    if name.startswith("naive:B="):
        return naive_candidate(int(name.split("=", 1)[1]))
    if name == "membership":
        return membership_strawman()
    if name.startswith("explo:"):
        return explo_agent(get_family(name.split(":", 1)[1]))
    raise InvalidParameter(f"unknown candidate {name!r}")
