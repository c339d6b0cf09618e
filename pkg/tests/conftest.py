"""Shared builders for the test suite."""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest

from mpldec import DecompositionGraph


def complete_graph(n: int) -> DecompositionGraph:
    return DecompositionGraph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def triangle() -> DecompositionGraph:
    return complete_graph(3)


def k4() -> DecompositionGraph:
    return complete_graph(4)


def path(n: int) -> DecompositionGraph:
    return DecompositionGraph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> DecompositionGraph:
    edges = [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)]
    return DecompositionGraph(n, edges)


def random_dg(rng: np.random.Generator, n_max: int = 10, ce_max: int = 20,
              se_max: int = 5, n_min: int = 1) -> DecompositionGraph:
    """Random graph with disjoint conflict and stitch edge sets."""
    n = int(rng.integers(n_min, n_max + 1))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    rng.shuffle(pairs)
    ce_count = int(rng.integers(0, min(ce_max, len(pairs)) + 1))
    se_count = int(rng.integers(0, min(se_max, len(pairs) - ce_count) + 1))
    return DecompositionGraph(n, pairs[:ce_count], pairs[ce_count:ce_count + se_count])


def naive_min_cost(dg: DecompositionGraph, k: int, alpha: Fraction) -> Fraction:
    """Exhaustive minimum of conflicts + alpha*stitches over all k^n assignments.

    Intentionally written from the objective definition alone so it stays
    independent of both the solver and the branch-and-bound oracle.
    """
    ce = list(dg.conflict_edges)
    se = list(dg.stitch_edges)
    best = None
    for assignment in itertools.product(range(k), repeat=dg.n):
        conflicts = sum(1 for u, v in ce if assignment[u] == assignment[v])
        stitches = sum(1 for u, v in se if assignment[u] != assignment[v])
        cost = Fraction(conflicts) + alpha * stitches
        if best is None or cost < best:
            best = cost
    return Fraction(0) if best is None else best


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260809)
