"""Distribution-evolution solver: co-evolving color distributions and colorings.

Each population member pairs a concrete coloring with a per-vertex amplitude
vector over the k colors (squared amplitudes are sampling probabilities).
One outer iteration rotates the worst members' distributions (exploration),
samples new colorings with partial inheritance, refines the coloring
population with crossover plus tabu search, and pulls the distributions
toward the refined colorings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .decomp import DecompositionGraph
from .errors import ContractViolation
from .solver import (
    DEFAULT_ALPHA,
    Solution,
    _as_fraction,
    _evaluate_trusted,
    _tabu_trusted,
    evaluate,
    mgpx,
)

_SEED_MASK = (1 << 64) - 1
STAGNATION_LIMIT = 6  # refinement loop exits after this many non-improving rounds


@dataclass
class SolverConfig:
    """Knobs for the distribution-evolution solver; defaults favor robustness."""

    k: int
    alpha: Fraction = DEFAULT_ALPHA
    population: int = 8
    max_outer_iters: int = 500
    inherit_rate: float = 0.5
    explore_fraction: float = 1 / 3
    explore_angle_max: float = math.pi / 2
    refine_rate: float = 0.25
    seed: int = 0

    def __post_init__(self) -> None:
        self.alpha = _as_fraction(self.alpha)
        if self.k < 2:
            raise ContractViolation("k must be at least 2")
        if self.population < 2:
            raise ContractViolation("population must be at least 2")
        if not 0.0 <= self.inherit_rate <= 1.0:
            raise ContractViolation("inherit_rate must be in [0, 1]")
        if not 0.0 < self.refine_rate < 1.0:
            raise ContractViolation("refine_rate must be in (0, 1)")
        if not 0.0 <= self.explore_fraction <= 1.0:
            raise ContractViolation("explore_fraction must be in [0, 1]")
        if self.max_outer_iters < 0:
            raise ContractViolation("max_outer_iters must be non-negative")


@dataclass
class DistributionIndividual:
    """Per-vertex color amplitudes; column v squares to a probability vector."""

    amplitudes: np.ndarray  # shape (k, n)

    def probabilities(self) -> np.ndarray:
        return self.amplitudes**2


@dataclass
class RefineState:
    """Elite bookkeeping carried across refinement calls."""

    p1: Solution          # current elite
    p2: Solution          # secondary elite
    c1: Solution          # most recently displaced elite
    x_best: Solution      # global best
    w2: bool = False      # a displaced elite is waiting to become p2
    iter: int = 0
    iter_stag: int = 0


def init_distribution(n: int, k: int) -> DistributionIndividual:
    """Uniform distribution: every amplitude 1/sqrt(k)."""
    if n < 1 or k < 2:
        raise ContractViolation("need n >= 1 and k >= 2")
    return DistributionIndividual(np.full((k, n), 1.0 / math.sqrt(k)))


def sample_solution(q: DistributionIndividual, parent: Solution | None,
                    inherit_rate: float, rng) -> np.ndarray:
    """Draw a coloring from q, copying each vertex from the parent with
    probability ``inherit_rate`` when a parent is given."""
    k, n = q.amplitudes.shape
    cum = np.cumsum(q.amplitudes**2, axis=0)
    draws = rng.random(n)
    colors = np.minimum((draws[None, :] > cum).sum(axis=0), k - 1).astype(np.int64)
    if parent is not None and inherit_rate > 0.0:
        keep = rng.random(n) < inherit_rate
        colors[keep] = parent.colors[keep]
    return colors


def orthogonal_explore(Q: list[DistributionIndividual], P: list[Solution],
                       config: SolverConfig, rng) -> list[DistributionIndividual]:
    """Rotate amplitude pairs in the worst-paired individuals.

    The ceil(population * explore_fraction) individuals whose solutions cost
    most (ties by index) get ceil(n/10) randomly chosen columns perturbed by a
    Givens rotation of two random color rows; negative amplitudes are flipped
    positive and the column renormalized, so sampling weights stay valid.
    """
    if len(Q) != len(P):
        raise ContractViolation("distribution and solution populations must pair up")
    count = math.ceil(len(Q) * config.explore_fraction)
    worst = sorted(range(len(Q)), key=lambda i: (-P[i].key, i))[:count]
    out = list(Q)
    for i in worst:
        amps = Q[i].amplitudes.copy()
        k, n = amps.shape
        if n == 0:
            continue
        m = max(1, math.ceil(n / 10))
        cols = rng.choice(n, size=min(m, n), replace=False)
        j1 = rng.integers(0, k, size=cols.size)
        j2 = rng.integers(0, k - 1, size=cols.size)
        j2 = j2 + (j2 >= j1)
        theta = rng.uniform(-config.explore_angle_max, config.explore_angle_max, size=cols.size)
        a1 = amps[j1, cols]
        a2 = amps[j2, cols]
        cos_t, sin_t = np.cos(theta), np.sin(theta)
        amps[j1, cols] = np.abs(a1 * cos_t - a2 * sin_t)
        amps[j2, cols] = np.abs(a1 * sin_t + a2 * cos_t)
        amps[:, cols] /= np.sqrt((amps[:, cols] ** 2).sum(axis=0))
        out[i] = DistributionIndividual(amps)
    return out


def refine_q(pop_before: list[Solution], pop_after: list[Solution],
             Q: list[DistributionIndividual], refine_rate: float) -> list[DistributionIndividual]:
    """Pull each distribution toward its refined coloring.

    Squared columns move by ``refine_rate`` toward the unit vector of the
    refined color, which keeps them normalized by construction.
    """
    if not (len(pop_before) == len(pop_after) == len(Q)):
        raise ContractViolation("populations must pair up")
    out = []
    for sol, q in zip(pop_after, Q):
        sq = q.amplitudes**2 * (1.0 - refine_rate)
        sq[sol.colors, np.arange(sq.shape[1])] += refine_rate
        out.append(DistributionIndividual(np.sqrt(sq)))
    return out


def refine_p(population: list[Solution], state: RefineState, dg: DecompositionGraph,
             config: SolverConfig, rng) -> tuple[list[Solution], RefineState]:
    """Refine the coloring population by crossover and tabu search.

    Rounds of (crossover with the two elites, tabu search, elite bookkeeping)
    run until the elite has stagnated for STAGNATION_LIMIT rounds; a displaced
    elite is promoted to p2 every third round.  A final tabu pass over the
    population re-seats p1.
    """
    if not population:
        raise ContractViolation("population must be non-empty")
    k, alpha = config.k, config.alpha
    state.iter = 0
    state.iter_stag = 0
    state.c1 = state.x_best
    state.w2 = False
    pop = list(population)
    while state.iter_stag < STAGNATION_LIMIT:
        pop = [_evaluate_trusted(dg, mgpx(member, state.p1, state.p2, k, rng), alpha)
               for member in pop]
        pop = [_tabu_trusted(dg, member, k, alpha, rng)[0] for member in pop]
        best = min(pop, key=lambda s: s.key)
        if best.key < state.p1.key:
            state.w2 = True
            state.iter_stag = 0
            state.c1 = state.p1
            state.p1 = best
        else:
            state.iter_stag += 1
        if best.key < state.x_best.key:
            state.x_best = best
        if state.iter % 3 == 0 and state.w2:
            state.p2 = state.c1
            state.w2 = False
        state.iter += 1
    pop = [_tabu_trusted(dg, member, k, alpha, rng)[0] for member in pop]
    best = min(pop, key=lambda s: s.key)
    state.p1 = best
    if best.key < state.x_best.key:
        state.x_best = best
    return pop, state


def solve(dg: DecompositionGraph, config: SolverConfig, rng=None) -> Solution:
    """Run the full distribution-evolution loop on one graph.

    Deterministic given ``config.seed`` (or a caller-supplied generator);
    stops as soon as a zero-cost coloring is found or after
    ``config.max_outer_iters`` outer iterations.
    """
    if rng is None:
        rng = np.random.default_rng(config.seed & _SEED_MASK)
    n, k, alpha = dg.n, config.k, config.alpha
    if n == 0:
        return evaluate(dg, np.empty(0, dtype=np.int64), alpha, k=k)

    Q = [init_distribution(n, k) for _ in range(config.population)]
    P = [_evaluate_trusted(dg, sample_solution(q, None, 0.0, rng), alpha) for q in Q]
    x_best = min(P, key=lambda s: s.key)
    state = RefineState(p1=x_best, p2=x_best, c1=x_best, x_best=x_best)

    outer = 0
    while state.x_best.key > 0 and outer < config.max_outer_iters:
        Q_explored = orthogonal_explore(Q, P, config, rng)
        sampled = [
            _evaluate_trusted(
                dg, sample_solution(Q_explored[i], P[i], config.inherit_rate, rng), alpha)
            for i in range(config.population)
        ]
        P, state = refine_p(sampled, state, dg, config, rng)
        Q = refine_q(sampled, P, Q_explored, config.refine_rate)
        outer += 1
    return state.x_best
