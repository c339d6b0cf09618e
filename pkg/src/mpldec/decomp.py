"""Decomposition graph: stitch insertion, simplification, and color recovery.

The decomposition graph holds two disjoint edge sets over one vertex set:
conflict edges (same color forbidden) and stitch edges (different colors
penalized).  A layout graph becomes a decomposition graph by splitting
features where stitch candidates exist; the decomposition graph is then
shrunk by iteratively hiding low-degree vertices, solved per connected
component, and the hidden vertices are colored back in reverse order.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import IO, Iterable, Mapping, Sequence

import numpy as np

from .errors import ContractViolation, InputError
from .geometry import LayoutGraph, Rect


@dataclass(frozen=True)
class VertexOrigin:
    """Where a decomposition-graph vertex came from in the layout.

    ``rect`` is the sub-rectangle for vertices created by a stitch split;
    None means the vertex covers the whole feature.
    """

    feature_id: str
    rect: Rect | None = None


class DecompositionGraph:
    """Vertex set with conflict edges and stitch edges.

    Edges are stored canonically as sorted (u, v) tuples with u < v; the
    constructor also builds CSR adjacency arrays used by the solvers.
    """

    def __init__(self, n: int, conflict_edges: Iterable[Sequence[int]],
                 stitch_edges: Iterable[Sequence[int]] = (),
                 vertex_origin: Mapping[int, VertexOrigin] | None = None):
        if n < 0:
            raise ContractViolation("vertex count must be non-negative")
        self.n = int(n)
        self.conflict_edges = self._normalize(conflict_edges, "conflict")
        self.stitch_edges = self._normalize(stitch_edges, "stitch")
        overlap = set(self.conflict_edges) & set(self.stitch_edges)
        if overlap:
            raise ContractViolation(f"edges {sorted(overlap)} are both conflict and stitch")
        self.vertex_origin = dict(vertex_origin) if vertex_origin else {}
        self.ce_u, self.ce_v = self._edge_arrays(self.conflict_edges)
        self.se_u, self.se_v = self._edge_arrays(self.stitch_edges)
        self.ce_indptr, self.ce_indices = self._csr(self.conflict_edges)
        self.se_indptr, self.se_indices = self._csr(self.stitch_edges)
        self.ce_neighbors = [self.ce_indices[self.ce_indptr[v]:self.ce_indptr[v + 1]]
                             for v in range(self.n)]
        self.se_neighbors = [self.se_indices[self.se_indptr[v]:self.se_indptr[v + 1]]
                             for v in range(self.n)]

    def _normalize(self, edges: Iterable[Sequence[int]], kind: str) -> tuple[tuple[int, int], ...]:
        out = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise ContractViolation(f"{kind} edge ({u},{v}) is a self-loop")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ContractViolation(f"{kind} edge ({u},{v}) references a missing vertex")
            out.add((u, v) if u < v else (v, u))
        return tuple(sorted(out))

    @staticmethod
    def _edge_arrays(edges) -> tuple[np.ndarray, np.ndarray]:
        if not edges:
            return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
        arr = np.asarray(edges, dtype=np.int64)
        return arr[:, 0], arr[:, 1]

    def _csr(self, edges) -> tuple[np.ndarray, np.ndarray]:
        deg = np.zeros(self.n + 1, dtype=np.int64)
        for u, v in edges:
            deg[u + 1] += 1
            deg[v + 1] += 1
        indptr = np.cumsum(deg)
        indices = np.empty(indptr[-1], dtype=np.int64)
        cursor = indptr[:-1].copy()
        for u, v in edges:
            indices[cursor[u]] = v
            cursor[u] += 1
            indices[cursor[v]] = u
            cursor[v] += 1
        return indptr, indices

    def conflict_degree(self, v: int) -> int:
        return int(self.ce_indptr[v + 1] - self.ce_indptr[v])

    def stitch_degree(self, v: int) -> int:
        return int(self.se_indptr[v + 1] - self.se_indptr[v])

    def __repr__(self) -> str:
        return (f"DecompositionGraph(n={self.n}, conflicts={len(self.conflict_edges)}, "
                f"stitches={len(self.stitch_edges)})")


@dataclass(frozen=True)
class RecoveryEntry:
    vertex: int
    conflict_neighbors: tuple[int, ...]
    stitch_neighbors: tuple[int, ...]


@dataclass
class RecoveryStack:
    """Hidden vertices with their live-neighbor snapshots, in removal order."""

    entries: list[RecoveryEntry] = field(default_factory=list)

    def push(self, entry: RecoveryEntry) -> None:
        self.entries.append(entry)

    def __len__(self) -> int:
        return len(self.entries)

    def vertices(self) -> set[int]:
        return {e.vertex for e in self.entries}


@dataclass(frozen=True)
class GraphComponent:
    """A connected component of the reduced graph, relabeled to 0..m-1."""

    graph: DecompositionGraph
    vertices: tuple[int, ...]  # local index -> vertex id in the parent graph


def _bounding_interval(rects: Sequence[Rect], axis: str) -> tuple[int, int]:
    if axis == "x":
        return min(r.x_lo for r in rects), max(r.x_hi for r in rects)
    return min(r.y_lo for r in rects), max(r.y_hi for r in rects)


def _clip(interval: tuple[int, int], lo: int, hi: int) -> tuple[int, int]:
    # Degenerate point intervals at the boundary are kept so the conflict
    # edge still attaches to the nearest sub-vertex.
    a = min(max(interval[0], lo), hi)
    b = max(min(interval[1], hi), lo)
    return (a, b) if a <= b else (b, a)


def _merge_intervals(intervals: list[tuple[int, int]]) -> list[tuple[int, int]]:
    merged: list[tuple[int, int]] = []
    for a, b in sorted(intervals):
        if merged and a <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], b))
        else:
            merged.append((a, b))
    return merged


def insert_stitch_candidates(lg: LayoutGraph) -> DecompositionGraph:
    """Split features where conflicting neighbors leave an uncovered gap.

    A single-rectangle feature with at least two conflict neighbors is cut at
    the midpoint of every gap between the merged projections of its neighbors
    onto its long axis; consecutive pieces are joined by stitch edges, and
    each conflict edge reattaches to the pieces its projection touches.
    Everything else passes through as one vertex per feature.
    """
    features = lg.features
    nf = len(features)
    neighbors: list[list[int]] = [[] for _ in range(nf)]
    for u, v in lg.edges:
        neighbors[u].append(v)
        neighbors[v].append(u)

    # Per feature: list of sub-extents on the split axis (singleton if unsplit).
    axes: list[str] = []
    pieces: list[list[tuple[int, int]]] = []
    for fi, f in enumerate(features):
        if len(f.rects) == 1 and len(neighbors[fi]) >= 2:
            rect = f.rects[0]
            axis = "x" if rect.width >= rect.height else "y"
            lo, hi = _bounding_interval([rect], axis)
            shadows = [
                _clip(_bounding_interval(features[g].rects, axis), lo, hi)
                for g in neighbors[fi]
            ]
            cuts = []
            merged = _merge_intervals(shadows)
            for (_, b), (a2, _) in zip(merged, merged[1:]):
                if a2 - b > 0:
                    cuts.append((b + a2) // 2)
            bounds = [lo, *cuts, hi]
            axes.append(axis)
            pieces.append([(bounds[i], bounds[i + 1]) for i in range(len(bounds) - 1)])
        else:
            axes.append("x")
            pieces.append([(0, 0)])  # placeholder; unsplit features keep one vertex

    first_vertex = []
    total = 0
    for fi in range(nf):
        first_vertex.append(total)
        total += len(pieces[fi])

    origin: dict[int, VertexOrigin] = {}
    stitch_edges: list[tuple[int, int]] = []
    for fi, f in enumerate(features):
        base = first_vertex[fi]
        if len(pieces[fi]) == 1:
            origin[base] = VertexOrigin(f.feature_id)
            continue
        rect = f.rects[0]
        for s, (a, b) in enumerate(pieces[fi]):
            sub = (Rect(a, rect.y_lo, b, rect.y_hi, rect.feature_id) if axes[fi] == "x"
                   else Rect(rect.x_lo, a, rect.x_hi, b, rect.feature_id))
            origin[base + s] = VertexOrigin(f.feature_id, sub)
            if s:
                stitch_edges.append((base + s - 1, base + s))

    def attach(fi: int, other: int) -> list[int]:
        # Sub-vertices of fi whose extent the other feature's projection touches.
        if len(pieces[fi]) == 1:
            return [first_vertex[fi]]
        rect = features[fi].rects[0]
        lo, hi = _bounding_interval([rect], axes[fi])
        a, b = _clip(_bounding_interval(features[other].rects, axes[fi]), lo, hi)
        return [first_vertex[fi] + s
                for s, (plo, phi) in enumerate(pieces[fi])
                if plo <= b and a <= phi]

    conflict_edges: list[tuple[int, int]] = []
    for u, v in lg.edges:
        for su in attach(u, v):
            for sv in attach(v, u):
                conflict_edges.append((su, sv))

    return DecompositionGraph(total, conflict_edges, stitch_edges, origin)


def simplify(dg: DecompositionGraph, k: int) -> tuple[list[GraphComponent], RecoveryStack]:
    """Hide every vertex with combined degree below k, then split what is left.

    Hiding is iterative: degrees are counted over live vertices only, so one
    removal can expose the next.  Hidden vertices are pushed with snapshots of
    their live neighbors; the residue is returned as connected components
    (connectivity over both edge sets) relabeled to local indices.
    """
    if k < 2:
        raise ContractViolation("k must be at least 2")
    n = dg.n
    live = np.ones(n, dtype=bool)
    ce_deg = np.array([dg.conflict_degree(v) for v in range(n)], dtype=np.int64)
    se_deg = np.array([dg.stitch_degree(v) for v in range(n)], dtype=np.int64)
    stack = RecoveryStack()
    queue = deque(v for v in range(n) if ce_deg[v] + se_deg[v] < k)
    queued = set(queue)
    while queue:
        v = queue.popleft()
        queued.discard(v)
        if not live[v] or ce_deg[v] + se_deg[v] >= k:
            continue
        ce_live = tuple(int(u) for u in dg.ce_neighbors[v] if live[u])
        se_live = tuple(int(u) for u in dg.se_neighbors[v] if live[u])
        stack.push(RecoveryEntry(int(v), ce_live, se_live))
        live[v] = False
        for u in ce_live:
            ce_deg[u] -= 1
            if ce_deg[u] + se_deg[u] < k and u not in queued:
                queue.append(u)
                queued.add(u)
        for u in se_live:
            se_deg[u] -= 1
            if ce_deg[u] + se_deg[u] < k and u not in queued:
                queue.append(u)
                queued.add(u)

    comp_of = np.full(n, -1, dtype=np.int64)
    member_lists: list[list[int]] = []
    for start in range(n):
        if not live[start] or comp_of[start] >= 0:
            continue
        cid = len(member_lists)
        comp = []
        frontier = [start]
        comp_of[start] = cid
        while frontier:
            v = frontier.pop()
            comp.append(v)
            for u in dg.ce_neighbors[v]:
                if live[u] and comp_of[u] < 0:
                    comp_of[u] = cid
                    frontier.append(int(u))
            for u in dg.se_neighbors[v]:
                if live[u] and comp_of[u] < 0:
                    comp_of[u] = cid
                    frontier.append(int(u))
        comp.sort()
        member_lists.append(comp)

    locals_: list[dict[int, int]] = [
        {v: i for i, v in enumerate(comp)} for comp in member_lists]
    ce_lists: list[list[tuple[int, int]]] = [[] for _ in member_lists]
    se_lists: list[list[tuple[int, int]]] = [[] for _ in member_lists]
    for u, v in dg.conflict_edges:
        if live[u] and live[v]:
            cid = int(comp_of[u])
            ce_lists[cid].append((locals_[cid][u], locals_[cid][v]))
    for u, v in dg.stitch_edges:
        if live[u] and live[v]:
            cid = int(comp_of[u])
            se_lists[cid].append((locals_[cid][u], locals_[cid][v]))

    components = []
    for cid, comp in enumerate(member_lists):
        origin = {locals_[cid][v]: dg.vertex_origin[v] for v in comp if v in dg.vertex_origin}
        components.append(GraphComponent(
            DecompositionGraph(len(comp), ce_lists[cid], se_lists[cid], origin), tuple(comp)))
    return components, stack


def recover(component_colorings: Mapping[int, int], stack: RecoveryStack,
            dg: DecompositionGraph, k: int) -> np.ndarray:
    """Extend component colorings to all vertices by replaying the stack.

    Hidden vertices are popped last-in-first-out; each takes a color unused by
    its colored conflict neighbors, preferring the one most common among its
    stitch neighbors, with the lowest color index breaking ties.  The hiding
    rule's degree bound guarantees a conflict-free choice always exists.
    """
    if k < 2:
        raise ContractViolation("k must be at least 2")
    colors = np.full(dg.n, -1, dtype=np.int64)
    for v, c in component_colorings.items():
        if not (0 <= int(c) < k):
            raise ContractViolation(f"color {c} for vertex {v} out of range for k={k}")
        colors[v] = int(c)
    hidden = stack.vertices()
    for v in range(dg.n):
        if v not in hidden and colors[v] < 0:
            raise ContractViolation(f"surviving vertex {v} has no color")
    for entry in reversed(stack.entries):
        used = {int(colors[u]) for u in entry.conflict_neighbors if colors[u] >= 0}
        allowed = [c for c in range(k) if c not in used]
        if not allowed:
            raise AssertionError("hiding rule violated: no conflict-free color")
        stitch_count = {c: 0 for c in allowed}
        for u in entry.stitch_neighbors:
            cu = int(colors[u])
            if cu in stitch_count:
                stitch_count[cu] += 1
        colors[entry.vertex] = min(allowed, key=lambda c: (-stitch_count[c], c))
    colors.setflags(write=False)
    return colors


def parse_graph_json(source: str | IO[str]) -> DecompositionGraph:
    """Parse the decomposition-graph JSON format.

    Format: ``{"n": int, "ce": [[u, v], ...], "se": [[u, v], ...]}`` with
    0-based vertex indices.
    """
    text = source.read() if hasattr(source, "read") else source
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from e
    if not isinstance(doc, dict):
        raise InputError("top-level value must be an object")
    n = doc.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise InputError("'n' must be a non-negative integer")
    edges = {}
    for key in ("ce", "se"):
        raw = doc.get(key, [])
        if not isinstance(raw, list):
            raise InputError(f"'{key}' must be an array of [u, v] pairs")
        for i, e in enumerate(raw):
            if (not isinstance(e, list) or len(e) != 2
                    or not all(isinstance(c, int) and not isinstance(c, bool) for c in e)):
                raise InputError(f"{key}[{i}]: must be a pair of integers")
        edges[key] = raw
    try:
        return DecompositionGraph(n, edges["ce"], edges["se"])
    except ContractViolation as e:
        raise InputError(str(e)) from e


def graph_to_json(dg: DecompositionGraph) -> str:
    """Serialize to the decomposition-graph JSON format (canonical edge order)."""
    return json.dumps({
        "n": dg.n,
        "ce": [[u, v] for u, v in dg.conflict_edges],
        "se": [[u, v] for u, v in dg.stitch_edges],
    })
