"""Synthetic drawing corpus: parametric shapes with seeded jitter, emitted
in the exact ndjson ingest format so every test can run offline.

Shapes are built in a unit frame, rotated, jittered, then placed on the
256x256 canvas as integer coordinates. Generation is deterministic for a
fixed seed.
"""

from __future__ import annotations

import json
import math
import random
from pathlib import Path
from typing import Iterable, Iterator

from .dataset import Dataset, parse_ndjson_line
from .geometry import CANVAS_SIZE, Stroke

UnitStrokes = list[list[tuple[float, float]]]


def _edge_points(corners, per_edge=6, close=False):
    """Sample each edge of a corner polyline at per_edge points."""
    pts = list(corners)
    if close:
        pts.append(pts[0])
    out = [pts[0]]
    for i in range(1, len(pts)):
        ax, ay = pts[i - 1]
        bx, by = pts[i]
        for j in range(1, per_edge + 1):
            t = j / per_edge
            out.append((ax + (bx - ax) * t, ay + (by - ay) * t))
    return out


def _line(rng) -> UnitStrokes:
    return [_edge_points([(0.0, 0.5), (1.0, 0.5)], per_edge=8)]


def _circle(rng) -> UnitStrokes:
    n = rng.randint(22, 30)
    pts = [(0.5 + 0.45 * math.cos(2 * math.pi * i / n),
            0.5 + 0.45 * math.sin(2 * math.pi * i / n)) for i in range(n + 1)]
    return [pts]


def _square(rng) -> UnitStrokes:
    return [_edge_points([(0.08, 0.08), (0.92, 0.08), (0.92, 0.92), (0.08, 0.92)],
                         close=True)]


def _triangle(rng) -> UnitStrokes:
    return [_edge_points([(0.5, 0.06), (0.94, 0.9), (0.06, 0.9)], close=True)]


def _zigzag(rng) -> UnitStrokes:
    peaks = rng.randint(4, 6)
    pts = []
    for i in range(peaks * 2 + 1):
        x = i / (peaks * 2)
        y = 0.2 if i % 2 == 0 else 0.8
        pts.append((x, y))
    return [_edge_points(pts, per_edge=3)]


def _star(rng) -> UnitStrokes:
    pts = []
    for i in range(10):
        r = 0.46 if i % 2 == 0 else 0.18
        a = -math.pi / 2 + i * math.pi / 5
        pts.append((0.5 + r * math.cos(a), 0.5 + r * math.sin(a)))
    return [_edge_points(pts, per_edge=3, close=True)]


def _tshape(rng) -> UnitStrokes:
    return [
        _edge_points([(0.08, 0.12), (0.92, 0.12)], per_edge=6),
        _edge_points([(0.5, 0.12), (0.5, 0.92)], per_edge=6),
    ]


def _spiral(rng) -> UnitStrokes:
    turns = rng.uniform(2.2, 2.8)
    n = 44
    pts = []
    for i in range(n + 1):
        t = i / n
        a = 2 * math.pi * turns * t
        r = 0.04 + 0.43 * t
        pts.append((0.5 + r * math.cos(a), 0.5 + r * math.sin(a)))
    return [pts]


def _arrow(rng) -> UnitStrokes:
    return [
        _edge_points([(0.05, 0.5), (0.88, 0.5)], per_edge=8),
        _edge_points([(0.6, 0.22), (0.92, 0.5), (0.6, 0.78)], per_edge=4),
    ]


def _plus(rng) -> UnitStrokes:
    return [
        _edge_points([(0.5, 0.08), (0.5, 0.92)], per_edge=6),
        _edge_points([(0.08, 0.5), (0.92, 0.5)], per_edge=6),
    ]


def _house(rng) -> UnitStrokes:
    return [_edge_points([(0.14, 0.92), (0.14, 0.45), (0.5, 0.1),
                          (0.86, 0.45), (0.86, 0.92)], close=True, per_edge=4)]


def _hourglass(rng) -> UnitStrokes:
    return [_edge_points([(0.15, 0.08), (0.85, 0.08), (0.15, 0.92), (0.85, 0.92)],
                         close=True, per_edge=4)]


SHAPES = {
    "line": _line,
    "circle": _circle,
    "square": _square,
    "triangle": _triangle,
    "zigzag": _zigzag,
    "star": _star,
    "tshape": _tshape,
    "spiral": _spiral,
    "arrow": _arrow,
    "plus": _plus,
    "house": _house,
    "hourglass": _hourglass,
}

# Full-turn rotation would alias some shapes (square vs hourglass), so each
# shape gets its own cap.
_ROTATION = {
    "line": 0.5, "circle": math.pi, "square": 0.18, "triangle": 0.18,
    "zigzag": 0.15, "star": 0.3, "tshape": 0.12, "spiral": math.pi,
    "arrow": 0.25, "plus": 0.12, "house": 0.1, "hourglass": 0.12,
}


def synth_strokes(word: str, rng: random.Random) -> list[list[list[int]]]:
    """One jittered instance of a shape in ingest stroke format
    [[xs, ys], ...] with integer coordinates in [0, 255]."""
    if word not in SHAPES:
        raise ValueError(f"unknown synthetic category {word!r}; "
                         f"choose from {sorted(SHAPES)}")
    strokes = SHAPES[word](rng)

    cap = _ROTATION[word]
    angle = rng.uniform(-cap, cap)
    cos_a, sin_a = math.cos(angle), math.sin(angle)
    sigma = rng.uniform(0.004, 0.012)
    jittered = []
    for pts in strokes:
        out = []
        for x, y in pts:
            dx, dy = x - 0.5, y - 0.5
            rx = 0.5 + dx * cos_a - dy * sin_a + rng.gauss(0, sigma)
            ry = 0.5 + dx * sin_a + dy * cos_a + rng.gauss(0, sigma)
            out.append((rx, ry))
        jittered.append(out)

    # Fit the jittered bbox into a random patch of the canvas.
    xs = [p[0] for s in jittered for p in s]
    ys = [p[1] for s in jittered for p in s]
    min_x, max_x, min_y, max_y = min(xs), max(xs), min(ys), max(ys)
    side = max(max_x - min_x, max_y - min_y) or 1.0
    size = rng.uniform(140.0, 235.0)
    scale = size / side
    span_x = (max_x - min_x) * scale
    span_y = (max_y - min_y) * scale
    off_x = rng.uniform(2.0, max(2.0, 253.0 - span_x))
    off_y = rng.uniform(2.0, max(2.0, 253.0 - span_y))

    result = []
    for pts in jittered:
        sx = [max(0, min(255, round((x - min_x) * scale + off_x))) for x, y in pts]
        sy = [max(0, min(255, round((y - min_y) * scale + off_y))) for x, y in pts]
        result.append([sx, sy])
    return result


def corpus_lines(categories: Iterable[str], per_category: int,
                 seed: int) -> Iterator[str]:
    """ndjson lines for a synthetic corpus; byte-identical for a fixed seed."""
    if per_category < 1:
        raise ValueError("per_category must be >= 1")
    rng = random.Random(seed)
    for word in categories:
        for _ in range(per_category):
            strokes = synth_strokes(word, rng)
            yield json.dumps(
                {"word": word, "recognized": True, "drawing": strokes},
                separators=(",", ":"))


def write_corpus(path: str | Path, categories: Iterable[str], per_category: int,
                 seed: int) -> int:
    """Write the corpus to one ndjson file; returns the line count."""
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        for line in corpus_lines(categories, per_category, seed):
            fh.write(line + "\n")
            count += 1
    return count


def synth_dataset(categories: Iterable[str], per_category: int,
                  seed: int) -> Dataset:
    """In-memory corpus, parsed through the same ingest path as files."""
    ds = Dataset()
    for i, line in enumerate(corpus_lines(categories, per_category, seed), 1):
        ds.add(parse_ndjson_line(line, source="<synth>", line_number=i))
    return ds


def crosshatch_strokes(rng: random.Random, total_length: float,
                       canvas: float = CANVAS_SIZE) -> list[Stroke]:
    """Seeded visual-noise strokes: two crossing passes of parallel slanted
    lines in a random patch, cumulative length capped by total_length."""
    strokes: list[Stroke] = []
    if total_length < 8.0:
        return strokes
    size = rng.uniform(0.25, 0.5) * canvas
    slant = 0.35 * size
    x0 = rng.uniform(0, canvas - size - slant)
    y0 = rng.uniform(0, canvas - size - slant)
    lines = rng.randint(3, 5)
    step = size / lines
    line_len = math.hypot(slant, size)
    remaining = total_length
    for i in range(lines * 2):
        if remaining < 8.0:
            break
        if i < lines:                       # lines slanting down-right
            ax, ay = x0 + i * step, y0
            bx, by = ax + slant, ay + size
        else:                               # the crossing pass
            j = i - lines
            ax, ay = x0, y0 + j * step
            bx, by = ax + size, ay + slant
        frac = min(1.0, remaining / line_len)
        bx = ax + (bx - ax) * frac
        by = ay + (by - ay) * frac
        strokes.append(Stroke([(ax, ay), (bx, by)]))
        remaining -= line_len * frac
    return strokes
