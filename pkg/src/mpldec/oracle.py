"""Exact branch-and-bound minimizer for small decomposition graphs.

Ground truth for testing the stochastic solver: enumerates colorings
depth-first with an admissible partial-cost bound, so the returned optimum is
provable whenever the search completes within its node budget.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

from .decomp import DecompositionGraph
from .errors import ContractViolation
from .solver import DEFAULT_ALPHA, Solution, _as_fraction, cost_key, evaluate

DEFAULT_NODE_LIMIT = 2_000_000


@dataclass(frozen=True)
class OracleResult:
    optimum: Solution
    assignments_examined: int
    proved_optimal: bool


def exact_min_cost(dg: DecompositionGraph, k: int, alpha=DEFAULT_ALPHA,
                   node_limit: int = DEFAULT_NODE_LIMIT) -> OracleResult:
    """Minimize conflicts + alpha*stitches exactly by branch and bound.

    Vertices are colored in descending combined-degree order; the cost of the
    colored prefix is a lower bound on any completion, pruning subtrees that
    cannot beat the incumbent.  Color symmetry is broken by fixing the first
    vertex to color 0.  If more than ``node_limit`` partial assignments are
    examined the best incumbent is returned with ``proved_optimal=False``.
    """
    if k < 2:
        raise ContractViolation("k must be at least 2")
    alpha = _as_fraction(alpha)
    n = dg.n
    if n == 0:
        return OracleResult(evaluate(dg, [], alpha, k=k), 0, True)

    order = sorted(range(n), key=lambda v: (-(dg.conflict_degree(v) + dg.stitch_degree(v)), v))
    rank = {v: d for d, v in enumerate(order)}
    # Neighbors already colored when a vertex is reached, in search order.
    ce_prior = [[u for u in map(int, dg.ce_neighbors[v]) if rank[u] < rank[v]] for v in order]
    se_prior = [[u for u in map(int, dg.se_neighbors[v]) if rank[u] < rank[v]] for v in order]
    num, den = alpha.numerator, alpha.denominator

    colors = [-1] * n
    # Greedy incumbent: best locally for each vertex in order, ties to low colors.
    for d, v in enumerate(order):
        best_c, best_inc = 0, None
        for c in range(k):
            inc = (den * sum(1 for u in ce_prior[d] if colors[u] == c)
                   + num * sum(1 for u in se_prior[d] if colors[u] != c))
            if best_inc is None or inc < best_inc:
                best_c, best_inc = c, inc
        colors[v] = best_c
    incumbent = evaluate(dg, colors, alpha, k=k)
    best_key = incumbent.key
    best_colors = list(colors)

    colors = [-1] * n
    examined = 0
    aborted = False
    sys.setrecursionlimit(max(sys.getrecursionlimit(), n + 200))

    def descend(depth: int, partial_key: int) -> None:
        nonlocal examined, aborted, best_key, best_colors
        if aborted:
            return
        if depth == n:
            if partial_key < best_key:
                best_key = partial_key
                best_colors = list(colors)
            return
        v = order[depth]
        domain = range(1) if depth == 0 else range(k)
        for c in domain:
            if examined >= node_limit:
                aborted = True
                return
            examined += 1
            inc = (den * sum(1 for u in ce_prior[depth] if colors[u] == c)
                   + num * sum(1 for u in se_prior[depth] if colors[u] != c))
            child_key = partial_key + inc
            if child_key >= best_key:
                continue
            colors[v] = c
            descend(depth + 1, child_key)
            colors[v] = -1

    descend(0, 0)
    optimum = evaluate(dg, best_colors, alpha, k=k)
    assert optimum.key == best_key or aborted
    return OracleResult(optimum, examined, not aborted)
