"""Rectangle layouts and the spacing-violation graph built from them.

Coordinates are integers in layout database units; a layout carries a
``units_per_nm`` scale (default 1, i.e. 1 unit = 1 nm).  Two features are
connected in the layout graph when the Euclidean gap between their closest
rectangles is below the minimum coloring spacing.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import IO, Iterable

from .errors import ContractViolation, InputError

_COORD_LIMIT = 2**63  # signed 64-bit database units


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle with strictly positive area, owned by a feature."""

    x_lo: int
    y_lo: int
    x_hi: int
    y_hi: int
    feature_id: str

    def __post_init__(self) -> None:
        if self.x_lo >= self.x_hi or self.y_lo >= self.y_hi:
            raise ContractViolation(
                f"rectangle must have positive area, got x=[{self.x_lo},{self.x_hi}] "
                f"y=[{self.y_lo},{self.y_hi}]"
            )
        for c in (self.x_lo, self.y_lo, self.x_hi, self.y_hi):
            if not -_COORD_LIMIT <= c < _COORD_LIMIT:
                raise ContractViolation(f"coordinate {c} outside signed 64-bit range")

    @property
    def width(self) -> int:
        return self.x_hi - self.x_lo

    @property
    def height(self) -> int:
        return self.y_hi - self.y_lo


@dataclass(frozen=True)
class Feature:
    """All rectangles sharing one feature id."""

    feature_id: str
    rects: tuple[Rect, ...]


@dataclass(frozen=True)
class Layout:
    """A bag of rectangles grouped into features by id."""

    rects: tuple[Rect, ...]
    units_per_nm: int = 1

    def __post_init__(self) -> None:
        if self.units_per_nm < 1:
            raise ContractViolation("units_per_nm must be a positive integer")
        for r in self.rects:
            if not r.feature_id:
                raise ContractViolation("feature_id values must be non-empty")

    def features(self) -> tuple[Feature, ...]:
        """Group rectangles by feature id, in first-seen order."""
        order: dict[str, list[Rect]] = {}
        for r in self.rects:
            order.setdefault(r.feature_id, []).append(r)
        return tuple(Feature(fid, tuple(rs)) for fid, rs in order.items())


@dataclass(frozen=True)
class LayoutGraph:
    """Features as vertices; an edge when two features violate min_cs."""

    features: tuple[Feature, ...]
    edges: frozenset[tuple[int, int]]
    min_cs: int
    units_per_nm: int = 1


def rect_distance(a: Rect, b: Rect) -> float:
    """Euclidean gap between the closest boundary points of two rectangles.

    Zero when the rectangles touch or overlap.
    """
    dx = max(0, max(a.x_lo, b.x_lo) - min(a.x_hi, b.x_hi))
    dy = max(0, max(a.y_lo, b.y_lo) - min(a.y_hi, b.y_hi))
    return math.hypot(dx, dy)


def _gap_below(a: Rect, b: Rect, limit: int) -> bool:
    # Exact integer form of rect_distance(a, b) < limit.
    dx = max(0, max(a.x_lo, b.x_lo) - min(a.x_hi, b.x_hi))
    dy = max(0, max(a.y_lo, b.y_lo) - min(a.y_hi, b.y_hi))
    return dx * dx + dy * dy < limit * limit


def _interiors_overlap(a: Rect, b: Rect) -> bool:
    return (
        max(a.x_lo, b.x_lo) < min(a.x_hi, b.x_hi)
        and max(a.y_lo, b.y_lo) < min(a.y_hi, b.y_hi)
    )


def _grid_candidate_pairs(rects: tuple[Rect, ...], cell: int) -> Iterable[tuple[int, int]]:
    """Candidate index pairs (i < j) whose gap can be below ``cell``.

    Rectangles are bucketed into a uniform grid of the given cell size; only
    rectangles registered in the same or adjacent cells can be closer than one
    cell, so all qualifying pairs appear among the candidates.
    """
    buckets: dict[tuple[int, int], list[int]] = {}
    spans = []
    for i, r in enumerate(rects):
        span = (r.x_lo // cell, r.x_hi // cell, r.y_lo // cell, r.y_hi // cell)
        spans.append(span)
        for gx in range(span[0], span[1] + 1):
            for gy in range(span[2], span[3] + 1):
                buckets.setdefault((gx, gy), []).append(i)
    for i, (x0, x1, y0, y1) in enumerate(spans):
        seen: set[int] = set()
        for gx in range(x0 - 1, x1 + 2):
            for gy in range(y0 - 1, y1 + 2):
                for j in buckets.get((gx, gy), ()):
                    if j > i and j not in seen:
                        seen.add(j)
                        yield i, j


def build_layout_graph(layout: Layout, min_cs: int) -> LayoutGraph:
    """Build the layout graph for a minimum coloring spacing given in nm.

    One vertex per feature; an edge between two distinct features exactly when
    the minimum rectangle-pair gap is strictly below ``min_cs``.  Gap exactly
    equal to min_cs counts as legal spacing.
    """
    if min_cs <= 0:
        raise ContractViolation("min_cs must be positive")
    features = layout.features()
    feature_index = {f.feature_id: i for i, f in enumerate(features)}
    limit = min_cs * layout.units_per_nm
    edges: set[tuple[int, int]] = set()
    for i, j in _grid_candidate_pairs(layout.rects, limit):
        a, b = layout.rects[i], layout.rects[j]
        if a.feature_id == b.feature_id:
            continue
        fa, fb = feature_index[a.feature_id], feature_index[b.feature_id]
        pair = (fa, fb) if fa < fb else (fb, fa)
        if pair not in edges and _gap_below(a, b, limit):
            edges.add(pair)
    return LayoutGraph(features, frozenset(edges), min_cs, layout.units_per_nm)


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise InputError(msg)


def parse_layout(source: str | IO[str]) -> Layout:
    """Parse the layout JSON document.

    Format: ``{"units_per_nm": int (optional, default 1), "rects": [
    {"id": str, "x": [lo, hi], "y": [lo, hi]}, ...]}``.

    Raises InputError with field context on malformed documents and on
    degenerate rectangles (naming the rectangle index).
    """
    text = source.read() if hasattr(source, "read") else source
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from e
    _require(isinstance(doc, dict), "top-level value must be an object")
    units = doc.get("units_per_nm", 1)
    _require(
        isinstance(units, int) and not isinstance(units, bool) and units >= 1,
        "'units_per_nm' must be a positive integer",
    )
    _require("rects" in doc, "missing required key 'rects'")
    raw = doc["rects"]
    _require(isinstance(raw, list), "'rects' must be an array")

    rects: list[Rect] = []
    for i, entry in enumerate(raw):
        where = f"rects[{i}]"
        _require(isinstance(entry, dict), f"{where}: must be an object")
        fid = entry.get("id")
        _require(isinstance(fid, str) and fid != "", f"{where}: 'id' must be a non-empty string")
        coords = {}
        for axis in ("x", "y"):
            iv = entry.get(axis)
            _require(
                isinstance(iv, list) and len(iv) == 2
                and all(isinstance(c, int) and not isinstance(c, bool) for c in iv),
                f"{where}: '{axis}' must be a pair of integers",
            )
            _require(
                all(-_COORD_LIMIT <= c < _COORD_LIMIT for c in iv),
                f"{where}: '{axis}' coordinate outside signed 64-bit range",
            )
            _require(iv[0] < iv[1], f"{where}: '{axis}' interval [{iv[0]},{iv[1]}] is empty")
            coords[axis] = iv
        rects.append(Rect(coords["x"][0], coords["y"][0], coords["x"][1], coords["y"][1], fid))

    # Interior overlap between different features is a layout defect.
    if rects:
        cell = max(1, max(max(r.width, r.height) for r in rects))
        for i, j in _grid_candidate_pairs(tuple(rects), cell):
            a, b = rects[i], rects[j]
            if a.feature_id != b.feature_id and _interiors_overlap(a, b):
                raise InputError(
                    f"rects[{i}] and rects[{j}] overlap but belong to "
                    f"different features ({a.feature_id!r}, {b.feature_id!r})"
                )
    return Layout(tuple(rects), units)


def layout_to_json(layout: Layout) -> str:
    """Serialize a layout back to the layout JSON format."""
    doc = {
        "units_per_nm": layout.units_per_nm,
        "rects": [
            {"id": r.feature_id, "x": [r.x_lo, r.x_hi], "y": [r.y_lo, r.y_hi]}
            for r in layout.rects
        ],
    }
    return json.dumps(doc)
