"""Geometry: rectangle parsing, distances, and the layout graph."""

from __future__ import annotations

import json

import numpy as np
import pytest

from mpldec import (
    ContractViolation,
    InputError,
    Layout,
    Rect,
    build_layout_graph,
    parse_layout,
    rect_distance,
)


def rect(x0, y0, x1, y1, fid="f"):
    return Rect(x0, y0, x1, y1, fid)


class TestRectDistance:
    def test_touching_edges_is_zero(self):
        assert rect_distance(rect(0, 0, 10, 10, "a"), rect(10, 0, 20, 10, "b")) == 0

    def test_pure_horizontal_gap(self):
        assert rect_distance(rect(0, 0, 10, 10, "a"), rect(20, 0, 30, 10, "b")) == 10

    def test_diagonal_3_4_5(self):
        # dx=3, dy=4 -> hypotenuse 5
        assert rect_distance(rect(0, 0, 10, 10, "a"), rect(13, 14, 20, 20, "b")) == 5

    def test_overlapping_is_zero(self):
        assert rect_distance(rect(0, 0, 10, 10, "a"), rect(5, 5, 15, 15, "b")) == 0

    def test_symmetry_fuzz(self, rng):
        for _ in range(300):
            a = _random_rect(rng)
            b = _random_rect(rng)
            assert rect_distance(a, b) == rect_distance(b, a)

    def test_self_distance_zero_fuzz(self, rng):
        for _ in range(100):
            a = _random_rect(rng)
            assert rect_distance(a, a) == 0


def _random_rect(rng) -> Rect:
    x0 = int(rng.integers(-500, 500))
    y0 = int(rng.integers(-500, 500))
    return Rect(x0, y0, x0 + int(rng.integers(1, 80)), y0 + int(rng.integers(1, 80)), "f")


class TestRectValidation:
    def test_inverted_x_rejected(self):
        with pytest.raises(ContractViolation):
            Rect(10, 0, 0, 10, "a")

    def test_zero_height_rejected(self):
        with pytest.raises(ContractViolation):
            Rect(0, 5, 10, 5, "a")


class TestParseLayout:
    def test_empty(self):
        layout = parse_layout('{"units_per_nm":1,"rects":[]}')
        assert layout.features() == ()

    def test_single_rect(self):
        layout = parse_layout('{"rects":[{"id":"a","x":[0,10],"y":[0,10]}]}')
        assert len(layout.features()) == 1
        assert len(layout.rects) == 1
        assert layout.units_per_nm == 1

    def test_inverted_interval_names_index(self):
        with pytest.raises(InputError, match=r"rects\[0\]"):
            parse_layout('{"rects":[{"id":"a","x":[10,0],"y":[0,10]}]}')

    def test_malformed_json_reports_position(self):
        with pytest.raises(InputError, match="line"):
            parse_layout('{"rects": [}')

    def test_missing_rects_key(self):
        with pytest.raises(InputError, match="rects"):
            parse_layout('{"units_per_nm": 1}')

    def test_non_integer_coordinate(self):
        with pytest.raises(InputError, match=r"rects\[0\]"):
            parse_layout('{"rects":[{"id":"a","x":[0,10.5],"y":[0,10]}]}')

    def test_empty_id(self):
        with pytest.raises(InputError, match="id"):
            parse_layout('{"rects":[{"id":"","x":[0,10],"y":[0,10]}]}')

    def test_overlap_between_features_rejected(self):
        doc = {"rects": [
            {"id": "a", "x": [0, 10], "y": [0, 10]},
            {"id": "b", "x": [5, 15], "y": [5, 15]},
        ]}
        with pytest.raises(InputError, match="overlap"):
            parse_layout(json.dumps(doc))

    def test_same_feature_rects_may_touch_and_overlap(self):
        doc = {"rects": [
            {"id": "a", "x": [0, 10], "y": [0, 10]},
            {"id": "a", "x": [5, 15], "y": [0, 10]},
        ]}
        layout = parse_layout(json.dumps(doc))
        assert len(layout.features()) == 1

    def test_groups_rects_by_feature(self):
        doc = {"rects": [
            {"id": "a", "x": [0, 10], "y": [0, 10]},
            {"id": "b", "x": [100, 110], "y": [0, 10]},
            {"id": "a", "x": [20, 30], "y": [0, 10]},
        ]}
        layout = parse_layout(json.dumps(doc))
        features = layout.features()
        assert [f.feature_id for f in features] == ["a", "b"]
        assert len(features[0].rects) == 2


def two_feature_layout(gap: int) -> Layout:
    return Layout((
        Rect(0, 0, 100, 20, "a"),
        Rect(100 + gap, 0, 200 + gap, 20, "b"),
    ))


class TestBuildLayoutGraph:
    def test_gap_below_min_cs_gives_edge(self):
        lg = build_layout_graph(two_feature_layout(10), 120)
        assert lg.edges == frozenset({(0, 1)})

    def test_gap_above_min_cs_gives_no_edge(self):
        lg = build_layout_graph(two_feature_layout(150), 120)
        assert lg.edges == frozenset()

    def test_gap_equal_to_min_cs_is_legal_spacing(self):
        lg = build_layout_graph(two_feature_layout(120), 120)
        assert lg.edges == frozenset()

    def test_collinear_path(self):
        # Adjacent gaps 50, end-to-end gap 200: path graph on three features.
        layout = Layout((
            Rect(0, 0, 100, 20, "a"),
            Rect(150, 0, 250, 20, "b"),
            Rect(300, 0, 400, 20, "c"),
        ))
        lg = build_layout_graph(layout, 120)
        assert lg.edges == frozenset({(0, 1), (1, 2)})

    def test_same_feature_rects_never_edge(self):
        layout = Layout((
            Rect(0, 0, 100, 20, "a"),
            Rect(110, 0, 210, 20, "a"),
        ))
        lg = build_layout_graph(layout, 120)
        assert lg.edges == frozenset()

    def test_units_per_nm_scaling(self):
        # 10 units gap at 2 units/nm is a 5 nm gap.
        layout = Layout((
            Rect(0, 0, 100, 20, "a"),
            Rect(110, 0, 210, 20, "b"),
        ), units_per_nm=2)
        assert build_layout_graph(layout, 6).edges == frozenset({(0, 1)})
        assert build_layout_graph(layout, 5).edges == frozenset()

    def test_min_cs_must_be_positive(self):
        with pytest.raises(ContractViolation):
            build_layout_graph(two_feature_layout(10), 0)

    def test_empty_layout(self):
        lg = build_layout_graph(Layout(()), 120)
        assert lg.features == ()
        assert lg.edges == frozenset()

    def test_monotone_in_min_cs_fuzz(self, rng):
        for _ in range(30):
            layout = _random_layout(rng)
            cs1, cs2 = sorted(int(c) for c in rng.integers(5, 300, size=2))
            e1 = build_layout_graph(layout, cs1).edges
            e2 = build_layout_graph(layout, cs2).edges
            assert e1 <= e2

    def test_no_self_loops_or_duplicates_fuzz(self, rng):
        for _ in range(30):
            layout = _random_layout(rng)
            lg = build_layout_graph(layout, int(rng.integers(5, 300)))
            for u, v in lg.edges:
                assert u != v
                assert 0 <= u < len(lg.features)
                assert 0 <= v < len(lg.features)

    def test_matches_brute_force_fuzz(self, rng):
        for _ in range(20):
            layout = _random_layout(rng)
            min_cs = int(rng.integers(5, 300))
            lg = build_layout_graph(layout, min_cs)
            features = layout.features()
            expected = set()
            for i in range(len(features)):
                for j in range(i + 1, len(features)):
                    gap = min(
                        rect_distance(a, b)
                        for a in features[i].rects for b in features[j].rects
                    )
                    if gap < min_cs:
                        expected.add((i, j))
            assert lg.edges == frozenset(expected)


def _random_layout(rng) -> Layout:
    # Disjoint cells guarantee the no-overlap layout invariant.
    count = int(rng.integers(0, 12))
    rects = []
    for i in range(count):
        gx, gy = i % 4, i // 4
        w = int(rng.integers(10, 90))
        h = int(rng.integers(10, 90))
        ox = int(rng.integers(0, 100 - w))
        oy = int(rng.integers(0, 100 - h))
        fid = f"f{rng.integers(0, max(1, count // 2))}"
        rects.append(Rect(gx * 100 + ox, gy * 100 + oy,
                          gx * 100 + ox + w, gy * 100 + oy + h, fid))
    return Layout(tuple(rects))
