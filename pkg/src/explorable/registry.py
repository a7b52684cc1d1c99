"""Agent lookup by name, shared by the CLI and the test harnesses."""
from __future__ import annotations

import re

from .agents import a_f_agent, a_fstar_agent, basic_walk_tree_agent, explo_agent, go_around_subroutine
from .errors import InvalidParameter
from .families import get_family
from .oracle import oracle_backend, universal_exploration_agent
from .runtime import Hooks
from .uxs import r_agent

AGENT_NAMES = (
    "basic-walk-tree",
    "a-f",
    "go-around",
    "a-fstar:r=<R>",
    "explo:<family>",
    "universal-oracle:<family>",
    "uxs:N=<N>",
)


def resolve_agent(name: str) -> tuple[object, Hooks | None]:
    """(agent, hooks it needs or None)."""
    if name == "basic-walk-tree":
        return basic_walk_tree_agent(), None
    if name == "a-f":
        return a_f_agent(), None
    if name == "go-around":
        return go_around_subroutine(), None
    if (mt := re.fullmatch(r"a-fstar:r=(\d+)", name)) is not None:
        return a_fstar_agent(int(mt.group(1))), None
    if (mt := re.fullmatch(r"uxs:N=(\d+)", name)) is not None:
        return r_agent(int(mt.group(1))), None
    if name.startswith("explo:"):
        return explo_agent(get_family(name[len("explo:") :])), None
    if name.startswith("universal-oracle:"):
        fam = get_family(name[len("universal-oracle:") :])
        agent = universal_exploration_agent()
        agent.name = name
        return agent, oracle_backend(fam)
    raise InvalidParameter(f"unknown agent {name!r}; known: {', '.join(AGENT_NAMES)}")
