"""Cost model, incremental move evaluation, tabu search, and greedy partition crossover.

The objective is ``conflicts + alpha * stitches``.  Conflict and stitch counts
are exact integers and alpha is a rational weight, so every comparison uses the
scaled integer key ``den*conflicts + num*stitches`` (for alpha = num/den) and
formatted costs never pick up binary floating-point drift.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from numba import njit

from .decomp import DecompositionGraph
from .errors import ContractViolation

DEFAULT_ALPHA = Fraction(1, 10)


def parse_alpha(text: str) -> Fraction:
    """Parse a stitch weight given as a decimal string such as "0.1"."""
    try:
        alpha = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ContractViolation(f"invalid alpha {text!r}: {e}") from e
    if alpha < 0:
        raise ContractViolation("alpha must be non-negative")
    return alpha


def _as_fraction(alpha) -> Fraction:
    if isinstance(alpha, float):
        raise ContractViolation(
            "pass alpha as a string, int or Fraction; floats lose decimal exactness"
        )
    alpha = Fraction(alpha)
    if alpha < 0:
        raise ContractViolation("alpha must be non-negative")
    return alpha


def cost_key(conflicts: int, stitches: int, alpha: Fraction) -> int:
    """Exact integer comparison key for conflicts + alpha*stitches."""
    return conflicts * alpha.denominator + stitches * alpha.numerator


def format_cost(conflicts: int, stitches: int, alpha: Fraction) -> str:
    """Exact decimal rendering of conflicts + alpha*stitches.

    Integers print without a decimal point ("48", "0"); fractional costs print
    with exactly the digits the decimal expansion has ("0.4", "21.5").
    """
    total = Fraction(conflicts) + alpha * stitches
    num, den = total.numerator, total.denominator
    if den == 1:
        return str(num)
    twos = fives = 0
    d = den
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return repr(float(total))  # non-terminating decimal; best effort
    shift = max(twos, fives)
    digits = str(num * 10**shift // den).rjust(shift + 1, "0")
    whole, frac = digits[:-shift], digits[-shift:]
    return f"{whole}.{frac.rstrip('0') or '0'}"


@dataclass(frozen=True, eq=False)
class Solution:
    """A complete color assignment with cached conflict/stitch counts."""

    colors: np.ndarray
    conflicts: int
    stitches: int
    alpha: Fraction
    key: int = field(init=False)

    def __post_init__(self) -> None:
        # Scaled-integer cost; compares exactly like the rational cost.
        object.__setattr__(self, "key", cost_key(self.conflicts, self.stitches, self.alpha))

    @property
    def cost(self) -> Fraction:
        return Fraction(self.conflicts) + self.alpha * self.stitches

    @property
    def cost_str(self) -> str:
        return format_cost(self.conflicts, self.stitches, self.alpha)


@dataclass(frozen=True)
class Move:
    """Recolor one vertex; deltas are exact count changes."""

    vertex: int
    old_color: int
    new_color: int
    delta_conflicts: int
    delta_stitches: int


def _check_colors(dg: DecompositionGraph, colors, k: int | None) -> np.ndarray:
    arr = np.asarray(colors, dtype=np.int64)
    if arr.ndim != 1 or arr.shape[0] != dg.n:
        raise ContractViolation(f"expected {dg.n} colors, got shape {arr.shape}")
    if arr.size and arr.min() < 0:
        raise ContractViolation("colors must be non-negative")
    if k is not None and arr.size and arr.max() >= k:
        raise ContractViolation(f"color {int(arr.max())} out of range for k={k}")
    return arr


@njit(cache=True)
def _count_costs(ce_u, ce_v, se_u, se_v, colors):  # pragma: no cover
    conflicts = 0
    for e in range(ce_u.shape[0]):
        if colors[ce_u[e]] == colors[ce_v[e]]:
            conflicts += 1
    stitches = 0
    for e in range(se_u.shape[0]):
        if colors[se_u[e]] != colors[se_v[e]]:
            stitches += 1
    return conflicts, stitches


def _evaluate_trusted(dg: DecompositionGraph, arr: np.ndarray, alpha: Fraction) -> Solution:
    # Internal fast path: caller owns arr and guarantees validity.
    conflicts, stitches = _count_costs(dg.ce_u, dg.ce_v, dg.se_u, dg.se_v, arr)
    arr.setflags(write=False)
    return Solution(arr, int(conflicts), int(stitches), alpha)


def evaluate(dg: DecompositionGraph, colors, alpha=DEFAULT_ALPHA, k: int | None = None) -> Solution:
    """Count monochrome conflict edges and bichrome stitch edges from scratch."""
    alpha = _as_fraction(alpha)
    arr = _check_colors(dg, colors, k).copy()
    return _evaluate_trusted(dg, arr, alpha)


def delta_evaluate(dg: DecompositionGraph, solution: Solution, vertex: int, new_color: int) -> Move:
    """Cost deltas for recoloring one vertex, from its incident edges only."""
    old = int(solution.colors[vertex])
    if new_color == old:
        raise ContractViolation("new color equals current color")
    if new_color < 0:
        raise ContractViolation("colors must be non-negative")
    ce_nb = solution.colors[dg.ce_neighbors[vertex]]
    se_nb = solution.colors[dg.se_neighbors[vertex]]
    dc = int(np.count_nonzero(ce_nb == new_color)) - int(np.count_nonzero(ce_nb == old))
    ds = int(np.count_nonzero(se_nb == old)) - int(np.count_nonzero(se_nb == new_color))
    return Move(vertex, old, new_color, dc, ds)


def apply_move(dg: DecompositionGraph, solution: Solution, move: Move) -> Solution:
    """Apply a move, updating the cached counts incrementally."""
    colors = solution.colors.copy()
    colors[move.vertex] = move.new_color
    colors.setflags(write=False)
    return Solution(
        colors,
        solution.conflicts + move.delta_conflicts,
        solution.stitches + move.delta_stitches,
        solution.alpha,
    )


def tabu_tenure(count: int, conflicts: int, stitches: int, r: int) -> int:
    """Iteration horizon for a reverted assignment: count + floor(0.6*(10*c + s)) + r."""
    return count + (6 * (10 * conflicts + stitches)) // 10 + r


@njit(cache=True)
def _tabu_kernel(ce_indptr, ce_indices, se_indptr, se_indices,
                 colors, k, alpha_num, alpha_den, budget,
                 tie_draws, tenure_draws):  # pragma: no cover
    n = colors.shape[0]
    gamma_ce = np.zeros((n, k), dtype=np.int64)
    gamma_se = np.zeros((n, k), dtype=np.int64)
    se_deg = np.zeros(n, dtype=np.int64)
    conflicts = 0
    stitches = 0
    for v in range(n):
        cv = colors[v]
        for idx in range(ce_indptr[v], ce_indptr[v + 1]):
            u = ce_indices[idx]
            gamma_ce[v, colors[u]] += 1
            if u > v and colors[u] == cv:
                conflicts += 1
        se_deg[v] = se_indptr[v + 1] - se_indptr[v]
        for idx in range(se_indptr[v], se_indptr[v + 1]):
            u = se_indices[idx]
            gamma_se[v, colors[u]] += 1
            if u > v and colors[u] != cv:
                stitches += 1

    best_colors = colors.copy()
    best_key = alpha_den * conflicts + alpha_num * stitches
    cur_key = best_key
    best_c, best_s = conflicts, stitches
    tabu_until = np.zeros((n, k), dtype=np.int64)
    count = 0
    sentinel = np.int64(2**62)

    while cur_key > 0 and count < budget:
        # Pass 1: best legal (non-tabu) move among vertices on a violated edge.
        best_delta = sentinel
        ties = 0
        for waive in range(2):
            for v in range(n):
                cv = colors[v]
                if gamma_ce[v, cv] == 0 and gamma_se[v, cv] == se_deg[v]:
                    continue
                base = alpha_den * gamma_ce[v, cv] - alpha_num * gamma_se[v, cv]
                for j in range(k):
                    if j == cv:
                        continue
                    if waive == 0 and count < tabu_until[v, j]:
                        continue
                    delta = alpha_den * gamma_ce[v, j] - alpha_num * gamma_se[v, j] - base
                    if delta < best_delta:
                        best_delta = delta
                        ties = 1
                    elif delta == best_delta:
                        ties += 1
            if ties > 0:
                break
            # Every candidate move is tabu: waive the restriction this iteration.

        pick = int(tie_draws[count] * ties)
        move_v = -1
        move_j = -1
        seen = 0
        for waive in range(2):
            for v in range(n):
                cv = colors[v]
                if gamma_ce[v, cv] == 0 and gamma_se[v, cv] == se_deg[v]:
                    continue
                base = alpha_den * gamma_ce[v, cv] - alpha_num * gamma_se[v, cv]
                for j in range(k):
                    if j == cv:
                        continue
                    if waive == 0 and count < tabu_until[v, j]:
                        continue
                    delta = alpha_den * gamma_ce[v, j] - alpha_num * gamma_se[v, j] - base
                    if delta == best_delta:
                        if seen == pick:
                            move_v = v
                            move_j = j
                        seen += 1
            if seen > 0:
                break
        v = move_v
        j = move_j
        i = colors[v]
        conflicts += gamma_ce[v, j] - gamma_ce[v, i]
        stitches += gamma_se[v, i] - gamma_se[v, j]
        colors[v] = j
        for idx in range(ce_indptr[v], ce_indptr[v + 1]):
            u = ce_indices[idx]
            gamma_ce[u, i] -= 1
            gamma_ce[u, j] += 1
        for idx in range(se_indptr[v], se_indptr[v + 1]):
            u = se_indices[idx]
            gamma_se[u, i] -= 1
            gamma_se[u, j] += 1
        r = tenure_draws[count]
        tabu_until[v, i] = count + (6 * (10 * conflicts + stitches)) // 10 + r
        count += 1
        cur_key = alpha_den * conflicts + alpha_num * stitches
        if cur_key < best_key:
            best_key = cur_key
            best_c, best_s = conflicts, stitches
            best_colors[:] = colors
    return best_colors, best_c, best_s, count


def tabu_search(dg: DecompositionGraph, x: Solution, k: int, alpha, rng,
                budget: int | None = None, return_iters: bool = False):
    """Tabu-restricted local search on single-vertex recolorings.

    Keeps a working solution and the best one found; each iteration applies
    the best non-tabu recoloring of a vertex incident to a violated edge
    (ties broken uniformly at random) and forbids reverting it for a tenure
    that grows with the current violation counts.  Stops at cost zero or
    after ``budget`` iterations (default 5 per vertex).

    Returns the best solution found; with ``return_iters`` also the number of
    iterations performed (exactly 0 when the input already has cost zero).
    """
    alpha = _as_fraction(alpha)
    if k < 2:
        raise ContractViolation("k must be at least 2")
    _check_colors(dg, x.colors, k)
    best, iters = _tabu_trusted(dg, x, k, alpha, rng, budget)
    return (best, iters) if return_iters else best


def _tabu_trusted(dg: DecompositionGraph, x: Solution, k: int, alpha: Fraction,
                  rng, budget: int | None = None) -> tuple[Solution, int]:
    # Internal fast path: inputs already validated.
    if budget is None:
        budget = 5 * dg.n
    if x.key == 0 or budget <= 0:
        return x, 0
    # Randomness is drawn up front so the kernel takes only plain arrays
    # (dispatching a Generator into compiled code costs more than the draw).
    tie_draws = rng.random(budget)
    tenure_draws = rng.integers(1, 11, size=budget)
    colors, best_c, best_s, iters = _tabu_kernel(
        dg.ce_indptr, dg.ce_indices, dg.se_indptr, dg.se_indices,
        x.colors.copy(), k, alpha.numerator, alpha.denominator, budget,
        tie_draws, tenure_draws,
    )
    colors.setflags(write=False)
    best = Solution(colors, int(best_c), int(best_s), alpha)
    if best.key > x.key:  # kernel never worsens, but keep the contract explicit
        best = x
    return best, int(iters)


@njit(cache=True)
def _mgpx_kernel(parent0, parent1, parent2, k, fills):  # pragma: no cover
    n = parent0.shape[0]
    child = np.full(n, -1, dtype=np.int64)
    counts = np.zeros(k, dtype=np.int64)
    for c in range(k):
        rotation = c % 3
        parent = parent0 if rotation == 0 else (parent1 if rotation == 1 else parent2)
        counts[:] = 0
        for v in range(n):
            if child[v] < 0:
                counts[parent[v]] += 1
        largest = 0
        for j in range(1, k):
            if counts[j] > counts[largest]:
                largest = j
        if counts[largest] == 0:
            break
        for v in range(n):
            if child[v] < 0 and parent[v] == largest:
                child[v] = c
    for v in range(n):
        if child[v] < 0:
            child[v] = fills[v]
    return child


def mgpx(x: Solution, p1: Solution, p2: Solution, k: int, rng) -> np.ndarray:
    """Multi-parent greedy partition crossover over three parents.

    Color classes are harvested round-robin from (x, p1, p2): each class takes
    the current parent's largest color class among still-unassigned vertices
    (ties to the lowest color).  Vertices left after k classes get uniform
    random colors.
    """
    if k < 2:
        raise ContractViolation("k must be at least 2")
    n = x.colors.shape[0]
    for parent in (x, p1, p2):
        if parent.colors.shape[0] != n:
            raise ContractViolation("parents must color the same vertex set")
        if n and int(parent.colors.max()) >= k:
            raise ContractViolation(f"parent color out of range for k={k}")
    fills = rng.integers(0, k, size=n)
    return _mgpx_kernel(x.colors, p1.colors, p2.colors, k, fills)
