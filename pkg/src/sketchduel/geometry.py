"""Stroke geometry: points, strokes, drawings, and the operations shared by
the classifier, the ink meter, and the wire protocol.

Coordinates are abstract canvas units. The live canvas and the ingestion
format both use a 256x256 canvas; normalized drawings live on a 1x1 canvas.
All functions here are pure and safe to call from any thread.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

Point = tuple[float, float]

CANVAS_SIZE = 256.0
RESAMPLE_POINTS = 64


@dataclass
class Stroke:
    """An ordered, non-empty polyline. Consecutive duplicate points are
    permitted and contribute zero length."""

    points: list[Point]

    def __len__(self) -> int:
        return len(self.points)


@dataclass
class Drawing:
    """Ordered strokes on a width x height canvas. May be empty while a
    round's drawing is still growing."""

    strokes: list[Stroke] = field(default_factory=list)
    width: float = CANVAS_SIZE
    height: float = CANVAS_SIZE

    def point_count(self) -> int:
        return sum(len(s) for s in self.strokes)

    def all_points(self) -> list[Point]:
        """Flatten the stroke sequence into one point list, in draw order."""
        out: list[Point] = []
        for s in self.strokes:
            out.extend(s.points)
        return out


def validate_stroke(s: Stroke) -> None:
    """Reject empty strokes and non-finite coordinates."""
    if not s.points:
        raise ValueError("stroke has no points")
    for x, y in s.points:
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ValueError(f"non-finite point ({x}, {y})")


def validate_drawing(d: Drawing, in_canvas: bool = False) -> None:
    """Validate strokes; with in_canvas=True also enforce canvas bounds.

    Bounds are only checked where drawings enter the system (ingest, wire);
    internal transforms such as rotation may leave the canvas.
    """
    if d.width <= 0 or d.height <= 0:
        raise ValueError("canvas dimensions must be positive")
    for s in d.strokes:
        validate_stroke(s)
        if in_canvas:
            for x, y in s.points:
                if not (0 <= x <= d.width and 0 <= y <= d.height):
                    raise ValueError(f"point ({x}, {y}) outside canvas "
                                     f"{d.width}x{d.height}")


def stroke_length(s: Stroke) -> float:
    """Sum of Euclidean distances between consecutive points."""
    validate_stroke(s)
    pts = s.points
    total = 0.0
    for i in range(1, len(pts)):
        total += math.hypot(pts[i][0] - pts[i - 1][0], pts[i][1] - pts[i - 1][1])
    return total


def path_length(d: Drawing) -> float:
    """Cumulative length of every stroke in the drawing.

    Single-point strokes contribute zero. An empty drawing has length 0.
    """
    return sum(stroke_length(s) for s in d.strokes)


def resample_stroke(s: Stroke, n: int = RESAMPLE_POINTS) -> Stroke:
    """Resample a stroke to n points at equal arc-length spacing.

    The first and last points are preserved exactly. A zero-length stroke
    (single point, or all points coincident) yields n copies of its first
    point.
    """
    if n < 2:
        raise ValueError(f"resample count must be >= 2, got {n}")
    validate_stroke(s)
    pts = s.points

    seg_lengths = [
        math.hypot(pts[i][0] - pts[i - 1][0], pts[i][1] - pts[i - 1][1])
        for i in range(1, len(pts))
    ]
    total = sum(seg_lengths)
    if total == 0.0:
        return Stroke([pts[0]] * n)

    out: list[Point] = [pts[0]]
    step = total / (n - 1)
    seg = 0                      # current segment index
    seg_start = 0.0              # cumulative length at start of current segment
    for i in range(1, n - 1):
        target = i * step
        while seg < len(seg_lengths) - 1 and seg_start + seg_lengths[seg] < target:
            seg_start += seg_lengths[seg]
            seg += 1
        length = seg_lengths[seg]
        t = 0.0 if length == 0.0 else (target - seg_start) / length
        ax, ay = pts[seg]
        bx, by = pts[seg + 1]
        out.append((ax + (bx - ax) * t, ay + (by - ay) * t))
    out.append(pts[-1])
    return Stroke(out)


def bounding_box(d: Drawing) -> tuple[float, float, float, float]:
    """(min_x, min_y, max_x, max_y) over every point. Drawing must be
    non-empty."""
    pts = d.all_points()
    if not pts:
        raise ValueError("empty drawing has no bounding box")
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    return min(xs), min(ys), max(xs), max(ys)


def normalize_drawing(d: Drawing) -> Drawing:
    """Map a drawing onto the unit canvas, preserving aspect ratio.

    Translates the bounding box's min corner to the origin and scales
    uniformly so the larger bounding-box side equals 1. A degenerate
    drawing (zero-size bounding box) maps every point to (0.5, 0.5).
    Normalization is idempotent.
    """
    if not d.strokes:
        raise ValueError("cannot normalize an empty drawing")
    validate_drawing(d)
    min_x, min_y, max_x, max_y = bounding_box(d)
    side = max(max_x - min_x, max_y - min_y)
    if side == 0.0:
        strokes = [Stroke([(0.5, 0.5)] * len(s)) for s in d.strokes]
    else:
        strokes = [
            Stroke([((x - min_x) / side, (y - min_y) / side) for x, y in s.points])
            for s in d.strokes
        ]
    return Drawing(strokes, width=1.0, height=1.0)


def truncate_stroke(s: Stroke, max_length: float) -> Stroke | None:
    """Prefix of a stroke with arc length at most max_length.

    Returns None when no drawable prefix of at least two points fits
    (max_length <= 0 and the stroke has positive length). The cut point is
    interpolated on the segment where the length runs out.
    """
    validate_stroke(s)
    if max_length < 0:
        raise ValueError("max_length must be >= 0")
    pts = s.points
    if stroke_length(s) <= max_length:
        return Stroke(list(pts))
    if max_length == 0.0:
        return None
    out: list[Point] = [pts[0]]
    remaining = max_length
    for i in range(1, len(pts)):
        ax, ay = pts[i - 1]
        bx, by = pts[i]
        seg = math.hypot(bx - ax, by - ay)
        if seg <= remaining:
            out.append(pts[i])
            remaining -= seg
        else:
            t = remaining / seg
            out.append((ax + (bx - ax) * t, ay + (by - ay) * t))
            break
    if len(out) < 2:
        return None
    return Stroke(out)
