"""Multiple-patterning layout decomposition toolkit.

Build a conflict/stitch decomposition graph from a rectangle layout, simplify
it, and assign k masks by minimizing the weighted conflict+stitch objective
with a distribution-evolution metaheuristic, validated against an exact
branch-and-bound oracle.
"""

from .decomp import (
    DecompositionGraph,
    GraphComponent,
    RecoveryEntry,
    RecoveryStack,
    VertexOrigin,
    graph_to_json,
    insert_stitch_candidates,
    parse_graph_json,
    recover,
    simplify,
)
from .deappm import (
    DistributionIndividual,
    RefineState,
    SolverConfig,
    init_distribution,
    orthogonal_explore,
    refine_p,
    refine_q,
    sample_solution,
    solve,
)
from .errors import ContractViolation, InputError
from .geometry import (
    Feature,
    Layout,
    LayoutGraph,
    Rect,
    build_layout_graph,
    layout_to_json,
    parse_layout,
    rect_distance,
)
from .oracle import OracleResult, exact_min_cost
from .pipeline import DecompositionResult, build_decomposition_graph, solve_decomposition
from .render import MASK_PALETTE, mask_color, render_svg
from .solver import (
    DEFAULT_ALPHA,
    Move,
    Solution,
    apply_move,
    cost_key,
    delta_evaluate,
    evaluate,
    format_cost,
    mgpx,
    parse_alpha,
    tabu_search,
    tabu_tenure,
)

__version__ = "0.1.0"

__all__ = [
    "ContractViolation",
    "DEFAULT_ALPHA",
    "DecompositionGraph",
    "DecompositionResult",
    "DistributionIndividual",
    "Feature",
    "GraphComponent",
    "InputError",
    "Layout",
    "LayoutGraph",
    "MASK_PALETTE",
    "Move",
    "OracleResult",
    "RecoveryEntry",
    "RecoveryStack",
    "RefineState",
    "Rect",
    "Solution",
    "SolverConfig",
    "VertexOrigin",
    "apply_move",
    "build_decomposition_graph",
    "build_layout_graph",
    "cost_key",
    "delta_evaluate",
    "evaluate",
    "exact_min_cost",
    "format_cost",
    "graph_to_json",
    "init_distribution",
    "insert_stitch_candidates",
    "layout_to_json",
    "mask_color",
    "mgpx",
    "orthogonal_explore",
    "parse_alpha",
    "parse_graph_json",
    "parse_layout",
    "recover",
    "rect_distance",
    "refine_p",
    "refine_q",
    "render_svg",
    "sample_solution",
    "simplify",
    "solve",
    "solve_decomposition",
    "tabu_search",
    "tabu_tenure",
]
