"""SVG rendering of colored layouts."""

from __future__ import annotations

import xml.etree.ElementTree as ET

import pytest

from mpldec import (
    ContractViolation,
    Layout,
    Rect,
    build_decomposition_graph,
    mask_color,
    render_svg,
)

SVG_NS = "{http://www.w3.org/2000/svg}"


def _rects(svg_text: str):
    root = ET.fromstring(svg_text)
    return [el for el in root.iter(f"{SVG_NS}rect")]


def test_empty_layout_renders_valid_svg():
    layout = Layout(())
    dg = build_decomposition_graph(layout, 120)
    svg = render_svg(layout, dg, [], 3)
    assert _rects(svg) == []


def test_single_rect_uses_first_palette_entry():
    layout = Layout((Rect(0, 0, 10, 10, "a"),))
    dg = build_decomposition_graph(layout, 120)
    svg = render_svg(layout, dg, [0], 3)
    rects = _rects(svg)
    assert len(rects) == 1
    assert rects[0].get("fill") == mask_color(0)


def test_split_feature_renders_two_abutting_rects():
    layout = Layout((
        Rect(0, 0, 100, 10, "bar"),
        Rect(0, 20, 30, 40, "A"),
        Rect(70, 20, 100, 40, "B"),
    ))
    dg = build_decomposition_graph(layout, 15)
    assert len(dg.stitch_edges) == 1
    colors = {v: (0 if origin.feature_id == "bar" else 1)
              for v, origin in dg.vertex_origin.items()}
    svg = render_svg(layout, dg, [colors[v] for v in range(dg.n)], 3)
    bar_pieces = [r for r in _rects(svg) if int(r.get("height")) == 10]
    assert len(bar_pieces) == 2
    left = min(bar_pieces, key=lambda r: int(r.get("x")))
    right = max(bar_pieces, key=lambda r: int(r.get("x")))
    assert int(left.get("x")) + int(left.get("width")) == int(right.get("x"))


def test_conflicts_get_hatched_overlay():
    layout = Layout((
        Rect(0, 0, 10, 10, "a"),
        Rect(15, 0, 25, 10, "b"),
    ))
    dg = build_decomposition_graph(layout, 50)
    assert len(dg.conflict_edges) == 1
    monochrome = render_svg(layout, dg, [0, 0], 3)
    hatched = [r for r in _rects(monochrome) if "hatch" in (r.get("fill") or "")]
    assert len(hatched) == 2
    proper = render_svg(layout, dg, [0, 1], 3)
    assert not [r for r in _rects(proper) if "hatch" in (r.get("fill") or "")]


def test_missing_color_is_contract_violation():
    layout = Layout((Rect(0, 0, 10, 10, "a"),))
    dg = build_decomposition_graph(layout, 120)
    with pytest.raises(ContractViolation):
        render_svg(layout, dg, [], 3)
    with pytest.raises(ContractViolation):
        render_svg(layout, dg, [7], 3)


def test_wellformed_xml_fuzz(rng):
    for _ in range(20):
        count = int(rng.integers(0, 10))
        rects = tuple(
            Rect(int(i % 4) * 120, int(i // 4) * 120,
                 int(i % 4) * 120 + int(rng.integers(10, 100)),
                 int(i // 4) * 120 + int(rng.integers(10, 100)),
                 f"f{i}")
            for i in range(count)
        )
        layout = Layout(rects)
        dg = build_decomposition_graph(layout, int(rng.integers(10, 200)))
        colors = rng.integers(0, 3, size=dg.n)
        ET.fromstring(render_svg(layout, dg, colors, 3))  # parse must succeed
