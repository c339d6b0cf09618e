"""SVG rendering of colored layouts."""

from __future__ import annotations

import xml.etree.ElementTree as ET

from .decomp import DecompositionGraph
from .errors import ContractViolation
from .geometry import Layout, Rect

MASK_PALETTE = (
    "#4e79a7", "#f28e2b", "#59a14f", "#e15759",
    "#b07aa1", "#edc949", "#76b7b2", "#9c755f",
)
_MARGIN = 10


def mask_color(index: int) -> str:
    return MASK_PALETTE[index % len(MASK_PALETTE)]


def render_svg(layout: Layout, dg: DecompositionGraph, assignment, k: int) -> str:
    """Render each layout rectangle filled by its assigned mask color.

    Vertices created by stitch splits draw their sub-rectangles (two abutting
    pieces); rectangles on a monochrome conflict edge are overdrawn with a
    hatched outline.  The assignment must cover every graph vertex.
    """
    colors = list(assignment)
    if len(colors) != dg.n:
        raise ContractViolation(f"expected {dg.n} colors, got {len(colors)}")
    for v, c in enumerate(colors):
        if not (0 <= int(c) < k):
            raise ContractViolation(f"vertex {v} has color {c}, out of range for k={k}")

    feature_vertices: dict[str, list[int]] = {}
    for v, origin in dg.vertex_origin.items():
        feature_vertices.setdefault(origin.feature_id, []).append(v)

    # (rect, vertex) pairs to draw; split vertices carry their own sub-rects.
    drawn: list[tuple[Rect, int]] = []
    for feature in layout.features():
        vertices = feature_vertices.get(feature.feature_id)
        if not vertices:
            raise ContractViolation(f"feature {feature.feature_id!r} missing from the graph")
        for v in sorted(vertices):
            sub = dg.vertex_origin[v].rect
            if sub is not None:
                drawn.append((sub, v))
            else:
                drawn.extend((r, v) for r in feature.rects)

    conflicted = set()
    for u, v in dg.conflict_edges:
        if colors[u] == colors[v]:
            conflicted.add(u)
            conflicted.add(v)

    if drawn:
        x_lo = min(r.x_lo for r, _ in drawn) - _MARGIN
        y_lo = min(r.y_lo for r, _ in drawn) - _MARGIN
        x_hi = max(r.x_hi for r, _ in drawn) + _MARGIN
        y_hi = max(r.y_hi for r, _ in drawn) + _MARGIN
    else:
        x_lo = y_lo = 0
        x_hi = y_hi = 1
    width, height = x_hi - x_lo, y_hi - y_lo

    svg = ET.Element("svg", {
        "xmlns": "http://www.w3.org/2000/svg",
        "version": "1.1",
        "viewBox": f"0 0 {width} {height}",
    })
    defs = ET.SubElement(svg, "defs")
    pattern = ET.SubElement(defs, "pattern", {
        "id": "conflict-hatch", "width": "6", "height": "6",
        "patternUnits": "userSpaceOnUse", "patternTransform": "rotate(45)",
    })
    ET.SubElement(pattern, "line", {
        "x1": "0", "y1": "0", "x2": "0", "y2": "6",
        "stroke": "#d62728", "stroke-width": "2",
    })

    def place(r: Rect) -> dict[str, str]:
        # Flip y so the layout's origin sits bottom-left in the image.
        return {
            "x": str(r.x_lo - x_lo),
            "y": str(y_hi - r.y_hi),
            "width": str(r.width),
            "height": str(r.height),
        }

    for rect, v in drawn:
        ET.SubElement(svg, "rect", {
            **place(rect),
            "fill": mask_color(int(colors[v])),
            "stroke": "#333333",
            "stroke-width": "1",
        })
    for rect, v in drawn:
        if v in conflicted:
            ET.SubElement(svg, "rect", {
                **place(rect),
                "fill": "url(#conflict-hatch)",
                "stroke": "#d62728",
                "stroke-width": "2",
            })
    return ET.tostring(svg, encoding="unicode")
