"""Command-line front end: decompose, benchmark, generate."""

from __future__ import annotations

import argparse
import json
import math
import statistics
import sys
import time
from dataclasses import dataclass

import numpy as np

from .decomp import DecompositionGraph, graph_to_json, parse_graph_json
from .deappm import _SEED_MASK, SolverConfig
from .errors import ContractViolation, InputError
from .geometry import Layout, layout_to_json, parse_layout
from .pipeline import build_decomposition_graph, solve_decomposition
from .render import render_svg
from .solver import parse_alpha


@dataclass
class RunReport:
    """Per-run cost records plus mean/std aggregates over independent runs."""

    runs: list[dict]

    def aggregates(self) -> dict:
        costs = [r["cost"] for r in self.runs]
        times = [r["time_s"] for r in self.runs]
        # Sample standard deviation (R-1 divisor); 0 by convention for R=1.
        std = statistics.stdev if len(self.runs) > 1 else lambda _: 0.0
        return {
            "mean_cost": statistics.fmean(costs),
            "std_cost": std(costs),
            "mean_time_s": statistics.fmean(times),
            "std_time_s": std(times),
        }


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--layout", metavar="FILE", help="layout JSON input")
    src.add_argument("--graph", metavar="FILE", help="decomposition-graph JSON input")
    p.add_argument("--masks", type=int, default=3, help="number of masks (default 3)")
    p.add_argument("--min-cs", type=int, default=120,
                   help="minimum coloring spacing in nm (default 120)")
    p.add_argument("--alpha", default="0.1", help="stitch weight, decimal string (default 0.1)")
    p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    p.add_argument("--pop-size", type=int, default=8, help="population size (default 8)")
    p.add_argument("--max-iter", type=int, default=500,
                   help="outer iteration cap (default 500)")
    p.add_argument("--inherit-rate", type=float, default=0.5,
                   help="per-vertex parent inheritance probability (default 0.5)")
    p.add_argument("--refine-rate", type=float, default=0.25,
                   help="distribution refinement rate (default 0.25)")
    p.add_argument("--solver", choices=("deappm", "exact"), default="deappm")
    p.add_argument("--emit-graph", metavar="FILE",
                   help="write the decomposition graph JSON to FILE")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mpldec",
        description="Multiple-patterning layout decomposition toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    dec = sub.add_parser("decompose", help="color one layout or graph")
    _add_common_flags(dec)
    dec.add_argument("--svg", metavar="FILE", help="render the colored layout to FILE")

    bench = sub.add_parser("benchmark", help="independent-run statistics")
    _add_common_flags(bench)
    bench.add_argument("--runs", type=int, default=10,
                       help="number of independent runs (default 10)")

    gen = sub.add_parser("generate", help="emit a synthetic layout or graph")
    gen.add_argument("--mode", choices=("layout", "graph"), required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--n", type=int, default=0, help="graph mode: vertex count")
    gen.add_argument("--ce", type=int, default=0, help="graph mode: conflict edge count")
    gen.add_argument("--se", type=int, default=0, help="graph mode: stitch edge count")
    gen.add_argument("--rects", type=int, default=100, help="layout mode: rectangle count")
    gen.add_argument("--pitch", type=int, default=200,
                     help="layout mode: placement cell pitch in nm (default 200)")
    gen.add_argument("--fill", type=float, default=0.5,
                     help="layout mode: mean rectangle size as a fraction of pitch")
    return parser


def _config_from(args, seed: int | None = None) -> SolverConfig:
    return SolverConfig(
        k=args.masks,
        alpha=parse_alpha(args.alpha),
        population=args.pop_size,
        max_outer_iters=args.max_iter,
        inherit_rate=args.inherit_rate,
        refine_rate=args.refine_rate,
        seed=args.seed if seed is None else seed,
    )


def _load_inputs(args) -> tuple[Layout | None, DecompositionGraph]:
    if args.layout is not None:
        with open(args.layout, "r", encoding="utf-8") as fh:
            layout = parse_layout(fh)
        return layout, build_decomposition_graph(layout, args.min_cs)
    with open(args.graph, "r", encoding="utf-8") as fh:
        return None, parse_graph_json(fh)


def cmd_decompose(args) -> int:
    layout, dg = _load_inputs(args)
    if args.svg and layout is None:
        raise InputError("--svg requires --layout (graph inputs carry no geometry)")
    if args.emit_graph:
        with open(args.emit_graph, "w", encoding="utf-8") as fh:
            fh.write(graph_to_json(dg))
    config = _config_from(args)
    started = time.perf_counter()
    result = solve_decomposition(dg, config, solver=args.solver)
    elapsed = time.perf_counter() - started
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(render_svg(layout, dg, result.assignment, config.k))
    report = {
        "n": dg.n,
        "masks": config.k,
        "solver": args.solver,
        "seed": args.seed,
        "components": result.components,
        "hidden": result.hidden,
        "st": result.solution.stitches,
        "cn": result.solution.conflicts,
        "cost": float(result.solution.cost),
        "time_s": elapsed,
        "proved_optimal": result.proved_optimal,
        "assignment": [int(c) for c in result.assignment],
    }
    print(json.dumps(report))
    return 0


def cmd_benchmark(args) -> int:
    if args.runs < 1:
        raise InputError("--runs must be at least 1")
    _, dg = _load_inputs(args)
    if args.emit_graph:
        with open(args.emit_graph, "w", encoding="utf-8") as fh:
            fh.write(graph_to_json(dg))
    runs = []
    for index in range(args.runs):
        config = _config_from(args, seed=args.seed + index)
        started = time.perf_counter()
        result = solve_decomposition(dg, config, solver=args.solver)
        elapsed = time.perf_counter() - started
        runs.append({
            "run": index,
            "seed": config.seed,
            "st": result.solution.stitches,
            "cn": result.solution.conflicts,
            "cost": float(result.solution.cost),
            "time_s": elapsed,
        })
    report = RunReport(runs)
    out = {
        "n": dg.n,
        "masks": args.masks,
        "solver": args.solver,
        "runs": runs,
        **report.aggregates(),
    }
    print(json.dumps(out))
    return 0


def _generate_graph(args) -> str:
    n, ce, se = args.n, args.ce, args.se
    if n < 0 or ce < 0 or se < 0:
        raise InputError("--n, --ce and --se must be non-negative")
    total = n * (n - 1) // 2
    if ce + se > total:
        raise InputError(f"{ce}+{se} edges requested but only {total} distinct pairs exist")
    rng = np.random.default_rng(args.seed & _SEED_MASK)
    if ce + se == 0:
        pairs: list[tuple[int, int]] = []
    elif total <= 200_000:
        all_pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        chosen = rng.choice(total, size=ce + se, replace=False)
        pairs = [all_pairs[int(i)] for i in chosen]
    else:
        picked: dict[tuple[int, int], None] = {}
        while len(picked) < ce + se:
            u = int(rng.integers(0, n))
            v = int(rng.integers(0, n))
            if u != v:
                picked.setdefault((min(u, v), max(u, v)), None)
        pairs = list(picked)
    return graph_to_json(DecompositionGraph(n, pairs[:ce], pairs[ce:]))


def _generate_layout(args) -> str:
    from .geometry import Rect  # local import keeps the CLI namespace flat

    if args.rects < 0:
        raise InputError("--rects must be non-negative")
    if args.pitch < 4:
        raise InputError("--pitch must be at least 4 nm")
    if not 0.0 < args.fill < 1.0:
        raise InputError("--fill must be in (0, 1)")
    rng = np.random.default_rng(args.seed & _SEED_MASK)
    side = max(1, math.isqrt(max(args.rects - 1, 0)) + 1)
    pitch = args.pitch
    rects = []
    for index in range(args.rects):
        gx, gy = index % side, index // side
        w = max(1, min(pitch - 1, int(pitch * args.fill * (0.7 + 0.6 * rng.random()))))
        h = max(1, min(pitch - 1, int(pitch * args.fill * (0.7 + 0.6 * rng.random()))))
        ox = int(rng.integers(0, pitch - w))
        oy = int(rng.integers(0, pitch - h))
        x0, y0 = gx * pitch + ox, gy * pitch + oy
        rects.append(Rect(x0, y0, x0 + w, y0 + h, f"r{index:05d}"))
    return layout_to_json(Layout(tuple(rects)))


def cmd_generate(args) -> int:
    print(_generate_graph(args) if args.mode == "graph" else _generate_layout(args))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "decompose": cmd_decompose,
        "benchmark": cmd_benchmark,
        "generate": cmd_generate,
    }
    try:
        return handlers[args.command](args)
    except (InputError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ContractViolation as e:
        print(f"contract violation: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
