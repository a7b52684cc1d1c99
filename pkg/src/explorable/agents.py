"""Exploration algorithms as agents and agent subroutines.

Subroutines are generators driven through a Walker: ``obs = yield from
w.move(p)``.  They yield Move actions to the runtime and may return a value,
so procedures compose with ``yield from`` the way the pseudo-code nests.
"""
from __future__ import annotations

from typing import Generator

from .config import get_config
from .errors import InvalidParameter
from .families import Family
from .graph import build_c
from .runtime import Move, Observation
from .uxs import get_uxs, replay
from .views import TruncatedView, unfold_view

Sub = Generator[Move, Observation, object]


class Walker:
    """Agent-side position bookkeeping: last observation and move count."""

    def __init__(self, obs: Observation):
        self.obs = obs
        self.moves = 0

    def move(self, port: int) -> Sub:
        obs = yield Move(port)
        self.obs = obs
        self.moves += 1
        return obs


# ---------------------------------------------------------------- trees


class BasicWalkTreeAgent:
    """Basic walk with a stack of parent ports.

    On a tree the walk is an Euler tour.  A non-parent exit always leads to a
    fresh child, so the agent can keep the DFS stack exactly and knows it is
    back at the start once the stack is empty; the tour is over when the
    start is re-entered by its last port.
    """

    name = "basic-walk-tree"

    def program(self, obs, hooks):
        d0 = obs.degree
        if d0 == 0:
            return
        obs = yield Move(0)
        stack = [obs.entry]
        while True:
            if not stack:
                if obs.entry + 1 == d0:
                    return
                p = obs.entry + 1
            else:
                p = (obs.entry + 1) % obs.degree
            up = bool(stack) and p == stack[-1]
            obs = yield Move(p)
            if up:
                stack.pop()
            else:
                stack.append(obs.entry)


def basic_walk_tree_agent() -> BasicWalkTreeAgent:
    return BasicWalkTreeAgent()


# ---------------------------------------------------------------- Check, Find Success


def check(w: Walker, target: TruncatedView) -> Sub:
    """Compare the depth-k view at the walker's node with target.

    Walks every non-backtracking maximal path of the target in lexicographic
    order and comes back along the reverse.  Stops at the first mismatch,
    after unwinding.  Returns True on success.  Net displacement is zero.
    """
    if w.obs.degree != target.degree:
        return False
    for ports, expected in target.maximal_paths():
        back: list[int] = []
        ok = True
        for p, want in zip(ports, expected):
            obs = yield from w.move(p)
            back.append(obs.entry)
            if (obs.entry, obs.degree) != want:
                ok = False
                break
        for q in reversed(back):
            yield from w.move(q)
        if not ok:
            return False
    return True


class CheckAgent:
    """Runs one Check and stops; result in .result."""

    name = "check"

    def __init__(self, target: TruncatedView):
        self.target = target
        self.result: bool | None = None

    def program(self, obs, hooks):
        self.result = None
        w = Walker(obs)
        self.result = yield from check(w, self.target)


def check_procedure(target: TruncatedView) -> CheckAgent:
    return CheckAgent(target)


def find_success(w: Walker, fam: Family, events: list) -> Sub:
    """First (v, i) in scan order whose Check succeeds.

    events gets (i, v, success, moves so far) after every Check, so callers
    can confirm the agent is back at its start each time.
    """
    i = 1
    while True:
        g = fam.member(i)
        for v in range(g.n):
            k = fam.witness(i, v).k
            ok = yield from check(w, unfold_view(g, v, k))
            events.append((i, v, ok, w.moves))
            if ok:
                return v, i
        i += 1


class FindSuccessAgent:
    name = "find-success"

    def __init__(self, fam: Family):
        self.fam = fam
        self.result: tuple[int, int] | None = None
        self.events: list = []

    def program(self, obs, hooks):
        self.result, self.events = None, []
        w = Walker(obs)
        self.result = yield from find_success(w, self.fam, self.events)


def find_success_agent(fam: Family) -> FindSuccessAgent:
    if not fam.has_witnesses:
        raise InvalidParameter(f"family {fam.name!r} has no witnesses")
    return FindSuccessAgent(fam)


# ---------------------------------------------------------------- R(M)


def nb_cover(w: Walker, depth: int, entry: int | None = None) -> Sub:
    """Walk every non-backtracking path of length <= depth, returning along
    the reverse.  Shortest paths never backtrack, so this reaches every node
    within distance depth."""
    if depth == 0:
        return
    for p in range(w.obs.degree):
        if p == entry:
            continue
        obs = yield from w.move(p)
        yield from nb_cover(w, depth - 1, obs.entry)
        yield from w.move(obs.entry)


def r_procedure(w: Walker, bound: int) -> Sub:
    """R(bound): visit every node of any graph of size <= bound.

    Replays the verified UXS when bound is within the UXS cap; above it,
    walks all non-backtracking paths of length bound - 1 (the diameter of
    any such graph is below bound).
    """
    if bound <= 1:
        return
    if bound <= get_config().uxs_cap:
        yield from replay(w, get_uxs(bound))
    else:
        yield from nb_cover(w, bound - 1)


class ExploAgent:
    """Find Success, then R(M) with M the largest size among G_1..G_m(v,i)."""

    def __init__(self, fam: Family):
        if not fam.has_witnesses:
            raise InvalidParameter(f"family {fam.name!r} has no witnesses")
        self.fam = fam
        self.name = f"explo:{fam.name}"
        self.events: list = []
        self.result: tuple[int, int] | None = None
        self.bound: int | None = None

    def program(self, obs, hooks):
        self.events, self.result, self.bound = [], None, None
        w = Walker(obs)
        v, i = yield from find_success(w, self.fam, self.events)
        self.result = (v, i)
        m = self.fam.witness(i, v).m
        self.bound = max(self.fam.size(t) for t in range(1, m + 1))
        yield from r_procedure(w, self.bound)


def explo_agent(fam: Family) -> ExploAgent:
    return ExploAgent(fam)


# ---------------------------------------------------------------- the C_k / D_j algorithms


def clockwise_until_degree(w: Walker, d: int) -> Sub:
    while True:
        obs = yield from w.move(1)
        if obs.degree == d:
            return


def a_f(w: Walker) -> Sub:
    d = w.obs.degree
    if d == 1:
        yield from w.move(0)
        yield from clockwise_until_degree(w, 3)
    elif d == 3:
        yield from w.move(2)
        yield from w.move(0)
        yield from clockwise_until_degree(w, 3)
    elif d == 2:
        visits = 0
        while visits < 2:
            obs = yield from w.move(1)
            if obs.degree == 3:
                visits += 1
        yield from w.move(2)
    else:
        raise InvalidParameter(f"A(F) is undefined at a node of degree {d}")


class AFAgent:
    name = "a-f"

    def program(self, obs, hooks):
        yield from a_f(Walker(obs))


def a_f_agent() -> AFAgent:
    return AFAgent()


# The literal body "1, 1, 2, 0" steps two ring edges and then asks for port
# 2 at a degree-2 node of D_j.  Segments between pendant-carrying nodes have
# three edges, so the body takes port 1 three times.
GO_AROUND_BODY = (1, 1, 1, 2, 0)


def go_around(w: Walker) -> Sub:
    """From a degree-3 ring node of D_j: repeat the body until the third time
    it ends at the degree-4 node, then take port 3 and stop."""
    visits = 0
    while True:
        for p in GO_AROUND_BODY:
            obs = yield from w.move(p)
        if obs.degree == 4:
            visits += 1
            if visits == 3:
                yield from w.move(3)
                return


class GoAroundAgent:
    name = "go-around"

    def program(self, obs, hooks):
        yield from go_around(Walker(obs))


def go_around_subroutine() -> GoAroundAgent:
    return GoAroundAgent()


def _probe(w: Walker, r: int) -> Sub:
    """Pendant step if needed, then r+1 clockwise steps; returns the observations."""
    seen = [(None, w.obs.degree)]
    if w.obs.degree == 1:
        obs = yield from w.move(0)
        seen.append((obs.entry, obs.degree))
    for _ in range(r + 1):
        obs = yield from w.move(1)
        seen.append((obs.entry, obs.degree))
    return tuple(seen)


def _c_probe_signatures(r: int) -> frozenset:
    """Observation strings the probe produces on C_3..C_{r+2} from every start."""
    sigs = set()
    for j in range(1, r + 1):
        g = build_c(j + 2)
        for s in range(g.n):
            u, seen = s, [(None, g.degree(s))]
            if g.degree(u) == 1:
                u, e = g.adj[u][0]
                seen.append((e, g.degree(u)))
            for _ in range(r + 1):
                u, e = g.adj[u][1]
                seen.append((e, g.degree(u)))
            sigs.add(tuple(seen))
    return frozenset(sigs)


class AFStarAgent:
    """Dedicated algorithm for fstar_family(r).

    Dispatch after the probe: the A(F) branch is taken only when the probe saw
    no degree-4 node and its observations are ones some C_j, j <= r, can
    produce; otherwise the D_j branch.  Dispatching on "no degree-4 node seen"
    alone sends D_j starts far from the degree-4 node into A(F), which then
    stops early, already for r = 0.

    For r >= 1 no dispatch can be right everywhere: C_3 is a member, and the
    view of its degree-3 node equals the view of the node of D_j antipodal to
    the degree-4 node up to depth 3j - 1.  Starts on D_j whose probe mimics
    C_3 are misrouted.
    """

    def __init__(self, r: int):
        if r < 0:
            raise InvalidParameter(f"r must be >= 0, got {r}")
        self.r = r
        self.name = f"a-fstar:r={r}"
        self._c_sigs = _c_probe_signatures(r)

    def program(self, obs, hooks):
        w = Walker(obs)
        seen = yield from _probe(w, self.r)
        if all(d != 4 for _, d in seen) and seen in self._c_sigs:
            yield from a_f(w)
            return
        if w.obs.degree != 3:
            yield from clockwise_until_degree(w, 3)
        yield from go_around(w)


def a_fstar_agent(r: int) -> AFStarAgent:
    return AFStarAgent(r)
