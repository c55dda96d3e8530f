"""Ingestion of drawing corpora in the simplified ndjson format.

One JSON object per line with fields `word` (string), `recognized` (bool)
and `drawing` = [[xs, ys], ...] where xs/ys are equal-length arrays of
integer coordinates in [0, 255]. Category words are lowercased and trimmed
at ingest; that normal form is used for every later word comparison.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .errors import DatasetError, ParseError
from .geometry import CANVAS_SIZE, Drawing, Stroke, path_length

COORD_MAX = 255


def canonical_word(word: str) -> str:
    """Lowercase, trim, and collapse internal whitespace."""
    return " ".join(word.lower().split())


@dataclass
class LabeledDrawing:
    word: str
    drawing: Drawing
    recognized: bool


@dataclass
class Dataset:
    """Immutable after load; categories keep first-seen order."""

    categories: list[str] = field(default_factory=list)
    examples: dict[str, list[LabeledDrawing]] = field(default_factory=dict)
    skipped: int = 0

    def add(self, ex: LabeledDrawing) -> None:
        if ex.word not in self.examples:
            self.categories.append(ex.word)
            self.examples[ex.word] = []
        self.examples[ex.word].append(ex)

    def count(self, word: str | None = None) -> int:
        if word is not None:
            return len(self.examples.get(word, []))
        return sum(len(v) for v in self.examples.values())

    def all_examples(self) -> Iterable[LabeledDrawing]:
        for word in self.categories:
            yield from self.examples[word]


def _coord_list(value, axis: str, context) -> list[int]:
    if not isinstance(value, list) or not value:
        raise ParseError(f"stroke {axis}-array must be a non-empty list", *context)
    out = []
    for v in value:
        if isinstance(v, bool) or not isinstance(v, int):
            raise ParseError(f"non-integer {axis} coordinate {v!r}", *context)
        if not 0 <= v <= COORD_MAX:
            raise ParseError(f"{axis} coordinate {v} outside [0, {COORD_MAX}]", *context)
        out.append(v)
    return out


def parse_ndjson_line(text: str, source=None, line_number=None) -> LabeledDrawing:
    """Parse one ndjson line into a LabeledDrawing on the 256x256 canvas.

    Raises ParseError (carrying source/line context) on malformed JSON,
    missing or mistyped fields, mismatched x/y lengths, or out-of-range
    coordinates.
    """
    context = (source, line_number)
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"malformed JSON: {e.msg}", *context) from e
    if not isinstance(obj, dict):
        raise ParseError("line is not a JSON object", *context)

    for name in ("word", "recognized", "drawing"):
        if name not in obj:
            raise ParseError(f"missing field {name!r}", *context)
    word = obj["word"]
    if not isinstance(word, str) or not canonical_word(word):
        raise ParseError("field 'word' must be a non-empty string", *context)
    recognized = obj["recognized"]
    if not isinstance(recognized, bool):
        raise ParseError("field 'recognized' must be a boolean", *context)
    raw = obj["drawing"]
    if not isinstance(raw, list) or not raw:
        raise ParseError("field 'drawing' must be a non-empty list of strokes", *context)

    strokes = []
    for stroke in raw:
        if not isinstance(stroke, list) or len(stroke) != 2:
            raise ParseError("stroke must be a [xs, ys] pair", *context)
        xs = _coord_list(stroke[0], "x", context)
        ys = _coord_list(stroke[1], "y", context)
        if len(xs) != len(ys):
            raise ParseError(
                f"x/y length mismatch ({len(xs)} vs {len(ys)})", *context)
        strokes.append(Stroke([(float(x), float(y)) for x, y in zip(xs, ys)]))

    drawing = Drawing(strokes, width=CANVAS_SIZE, height=CANVAS_SIZE)
    return LabeledDrawing(canonical_word(word), drawing, recognized)


def load_dataset(
    paths: Iterable[str | Path],
    per_category_cap: int | None = None,
    require_recognized: bool = True,
    lenient: bool = False,
    categories: Iterable[str] | None = None,
) -> Dataset:
    """Load ndjson files into a Dataset.

    Keeps at most per_category_cap examples per category, in file order.
    With lenient=True unparseable lines are skipped and counted; otherwise
    the first bad line raises. A `categories` filter restricts the load and
    any requested category that ends up empty raises DatasetError.
    """
    if per_category_cap is not None and per_category_cap < 1:
        raise ValueError("per_category_cap must be >= 1")
    wanted = None if categories is None else {canonical_word(c) for c in categories}
    ds = Dataset()
    for path in paths:
        path = Path(path)
        with open(path, encoding="utf-8") as fh:
            for line_number, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    ex = parse_ndjson_line(line, source=str(path),
                                           line_number=line_number)
                except ParseError:
                    if lenient:
                        ds.skipped += 1
                        continue
                    raise
                if require_recognized and not ex.recognized:
                    continue
                if wanted is not None and ex.word not in wanted:
                    continue
                if per_category_cap is not None and ds.count(ex.word) >= per_category_cap:
                    continue
                ds.add(ex)
    if wanted is not None:
        for word in sorted(wanted):
            if ds.count(word) == 0:
                raise DatasetError(f"no usable examples for category {word!r}")
    if ds.count() == 0:
        raise DatasetError("no usable examples in any input file")
    return ds


@dataclass
class InkBudgetTable:
    """Per-category ink budgets: multiplier x mean stroke length over the
    category's examples."""

    mean_lengths: dict[str, float]
    multiplier: float

    def __post_init__(self):
        if self.multiplier <= 0:
            raise ValueError("multiplier must be > 0")

    def budget(self, word: str) -> float:
        return self.multiplier * self.mean_lengths[canonical_word(word)]

    def words(self) -> list[str]:
        return list(self.mean_lengths)

    def as_dict(self) -> dict[str, float]:
        return {w: self.budget(w) for w in self.mean_lengths}


def compute_ink_budgets(ds: Dataset, multiplier: float = 1.5) -> InkBudgetTable:
    """Budget per category = multiplier x mean path length of its examples."""
    if multiplier <= 0:
        raise ValueError("multiplier must be > 0")
    means = {}
    for word in ds.categories:
        examples = ds.examples[word]
        if not examples:
            raise ValueError(f"category {word!r} has no examples")
        means[word] = sum(path_length(ex.drawing) for ex in examples) / len(examples)
    return InkBudgetTable(means, multiplier)
