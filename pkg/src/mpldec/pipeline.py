"""End-to-end flow: layout -> graphs -> per-component solve -> recovery."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .decomp import DecompositionGraph, insert_stitch_candidates, recover, simplify
from .deappm import SolverConfig, _SEED_MASK, solve
from .errors import ContractViolation
from .geometry import Layout, build_layout_graph
from .oracle import DEFAULT_NODE_LIMIT, exact_min_cost
from .solver import Solution, evaluate


@dataclass(frozen=True)
class DecompositionResult:
    """Outcome of coloring one decomposition graph."""

    solution: Solution        # counts evaluated on the full graph
    assignment: np.ndarray    # color per vertex
    components: int
    hidden: int               # vertices colored during recovery
    proved_optimal: bool | None  # exact solver only; None for the stochastic one


def build_decomposition_graph(layout: Layout, min_cs: int) -> DecompositionGraph:
    """Layout -> spacing-violation graph -> graph with stitch candidates."""
    return insert_stitch_candidates(build_layout_graph(layout, min_cs))


def solve_decomposition(dg: DecompositionGraph, config: SolverConfig,
                        solver: str = "deappm",
                        node_limit: int = DEFAULT_NODE_LIMIT) -> DecompositionResult:
    """Simplify, color every component independently, and recover.

    Components are independent subproblems; each gets its own generator
    seeded from (config.seed, component index), so any execution order gives
    identical results.
    """
    if solver not in ("deappm", "exact"):
        raise ContractViolation(f"unknown solver {solver!r}")
    components, stack = simplify(dg, config.k)
    coloring: dict[int, int] = {}
    proved: bool | None = None if solver == "deappm" else True
    for index, comp in enumerate(components):
        if solver == "deappm":
            rng = np.random.default_rng((config.seed & _SEED_MASK, index))
            local = solve(comp.graph, config, rng=rng)
        else:
            result = exact_min_cost(comp.graph, config.k, config.alpha, node_limit)
            local = result.optimum
            proved = proved and result.proved_optimal
        for local_v, orig_v in enumerate(comp.vertices):
            coloring[orig_v] = int(local.colors[local_v])
    assignment = recover(coloring, stack, dg, config.k)
    full = evaluate(dg, assignment, config.alpha, k=config.k)
    return DecompositionResult(full, assignment, len(components), len(stack), proved)
