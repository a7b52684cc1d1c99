"""Exploration of anonymous port-numbered graphs: views, explorable
families, dedicated and oracle-driven exploration agents, and an adversary
against universal agents that take the family as an algorithm."""
from .errors import (
    ConfigurationError,
    ExplorableError,
    InternalError,
    InvalidParameter,
    OracleFault,
    ResourceCapError,
)
from .graph import (
    PortGraph,
    build_c,
    build_clockwise_ring,
    build_d,
    canonical_code,
    port_isomorphic,
    validate,
)
from .enumeration import enumerate_all_graphs, enumerate_all_trees
from .views import TruncatedView, all_views, node_views_equal, unfold_view, views_equal
from .runtime import Move, Observation, STOP, Status, Trace, is_full_exploration, run, traces_prefix_equal
from .families import Family, c_family, find_witness, fstar_family, get_family, ring_family, tree_family
from .uxs import UXS, r_agent, search_uxs, uxs_walk, verify_uxs

__version__ = "0.1.0"
