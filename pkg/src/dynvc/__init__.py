"""Dynamic (2+eps)-approximate vertex cover with level-based FIX-DIRTY maintenance."""

from .engine import (DuplicateEdgeError, DynamicGraph, GraphError, MissingEdgeError, Move,
                     MoveBudgetExceeded, NodeRangeError, SelfLoopError, UpdateReport, new_graph)
from .numerics import NumericTier, build_weight_table, level_count, parse_eps
from .oracle import exact_min_vertex_cover, recompute_state, verify_all
from .accounting import Auditor, audit_conservation, potential_row, total_potential
from .snapshot import dump_snapshot, load_snapshot, parse_snapshot
from .tracegen import (Trace, UpdateEvent, gen_random, gen_sliding_window, gen_star_churn,
                       parse_trace, serialize_trace)

__all__ = [
    "DynamicGraph", "new_graph", "Move", "UpdateReport",
    "GraphError", "NodeRangeError", "SelfLoopError", "DuplicateEdgeError", "MissingEdgeError",
    "MoveBudgetExceeded",
    "NumericTier", "build_weight_table", "level_count", "parse_eps",
    "verify_all", "recompute_state", "exact_min_vertex_cover",
    "Auditor", "audit_conservation", "potential_row", "total_potential",
    "dump_snapshot", "load_snapshot", "parse_snapshot",
    "Trace", "UpdateEvent", "parse_trace", "serialize_trace",
    "gen_random", "gen_sliding_window", "gen_star_churn",
]
