"""Streaming sketch classifier: nearest-neighbor scoring over drawing
features, with masking of rejected categories and threshold-gated guesses.

The index is immutable after build and safe to share across rooms. Scores
are plain dicts keyed by category in index order; that order is the
deterministic tie-break everywhere.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .dataset import Dataset, canonical_word
from .errors import PhaseError
from .geometry import (
    Drawing,
    Stroke,
    bounding_box,
    normalize_drawing,
    path_length,
    resample_stroke,
)

FEATURE_POINTS = 64          # resample count for the flattened stroke sequence
STROKE_COUNT_CAP = 16
LENGTH_CAP = 20.0            # path length cap on the unit canvas
WEIGHT_EPSILON = 1e-6
DEFAULT_K = 9

ScoreDistribution = dict[str, float]
GuessLedger = set[str]

SNAPSHOT_VERSION = 1


class NnGuess(NamedTuple):
    word: str
    confidence: float


def extract_features(d: Drawing) -> np.ndarray:
    """Deterministic, scale-invariant feature vector of a drawing.

    Normalizes to the unit canvas first, then concatenates: the 64-point
    equal-arc-length resample of the flattened stroke sequence (128 values),
    the capped stroke count, the capped path length, and the bounding-box
    aspect ratio. Dimension is fixed at 131.
    """
    if not d.strokes:
        raise ValueError("cannot extract features from an empty drawing")
    nd = normalize_drawing(d)

    flat = Stroke(nd.all_points())
    contour = resample_stroke(flat, FEATURE_POINTS)

    min_x, min_y, max_x, max_y = bounding_box(nd)
    w, h = max_x - min_x, max_y - min_y
    aspect = min(w, h) / max(w, h) if max(w, h) > 0 else 1.0

    out = np.empty(2 * FEATURE_POINTS + 3, dtype=np.float64)
    for i, (x, y) in enumerate(contour.points):
        out[2 * i] = x
        out[2 * i + 1] = y
    out[-3] = min(len(nd.strokes), STROKE_COUNT_CAP) / STROKE_COUNT_CAP
    out[-2] = min(path_length(nd), LENGTH_CAP) / LENGTH_CAP
    out[-1] = aspect
    return out


FEATURE_DIM = 2 * FEATURE_POINTS + 3


class ClassifierIndex:
    """Immutable nearest-neighbor index over labeled drawing features."""

    def __init__(self, categories: list[str], features: np.ndarray,
                 labels: np.ndarray, k: int):
        if k < 1:
            raise ValueError("k must be >= 1")
        if len(features) == 0:
            raise ValueError("index needs at least one point")
        if k > len(features):
            raise ValueError(f"k={k} exceeds index size {len(features)}")
        if features.shape[1] != FEATURE_DIM:
            raise ValueError(f"feature dimension {features.shape[1]} != {FEATURE_DIM}")
        if labels.min() < 0 or labels.max() >= len(categories):
            raise ValueError("label out of range")
        self.categories = list(categories)
        self.features = np.ascontiguousarray(features, dtype=np.float64)
        self.labels = np.asarray(labels, dtype=np.int32)
        self.k = int(k)

    @property
    def dim(self) -> int:
        return self.features.shape[1]

    def __len__(self) -> int:
        return len(self.features)


def build_index(ds: Dataset, k: int = DEFAULT_K) -> ClassifierIndex:
    """One feature point per dataset example; categories in dataset order."""
    if k < 1:
        raise ValueError("k must be >= 1")
    total = ds.count()
    if total == 0:
        raise ValueError("dataset is empty")
    if k > total:
        raise ValueError(f"k={k} exceeds example count {total}")
    features = np.empty((total, FEATURE_DIM), dtype=np.float64)
    labels = np.empty(total, dtype=np.int32)
    cat_index = {w: i for i, w in enumerate(ds.categories)}
    row = 0
    for ex in ds.all_examples():
        features[row] = extract_features(ex.drawing)
        labels[row] = cat_index[ex.word]
        row += 1
    return ClassifierIndex(ds.categories, features, labels, k)


def score_features(ix: ClassifierIndex, q: np.ndarray) -> ScoreDistribution:
    """Confidence per category from the k nearest neighbors of a feature
    vector.

    Neighbor weight is 1/(epsilon + distance); confidence(c) is the share
    of total neighbor weight carried by neighbors labeled c. The returned
    dict covers every category (zeros included) in index order and sums
    to 1 within float rounding. Distance ties keep index order.
    """
    dist = np.sqrt(((ix.features - q) ** 2).sum(axis=1))
    order = np.argsort(dist, kind="stable")[: ix.k]

    weight_by_cat: dict[int, float] = {}
    total = 0.0
    for i in order:
        w = 1.0 / (WEIGHT_EPSILON + float(dist[i]))
        label = int(ix.labels[i])
        weight_by_cat[label] = weight_by_cat.get(label, 0.0) + w
        total += w
    return {c: weight_by_cat.get(i, 0.0) / total
            for i, c in enumerate(ix.categories)}


def predict(ix: ClassifierIndex, d: Drawing) -> ScoreDistribution:
    """Score a drawing: extract features, then k-nearest-neighbor scoring."""
    return score_features(ix, extract_features(d))


def masked_distribution(dist: ScoreDistribution,
                        ledger: GuessLedger) -> ScoreDistribution:
    """Remove rejected categories and renormalize the survivors to 1.

    Survivors keep their relative proportions. If every surviving category
    has zero confidence the mass is spread uniformly (the limit of
    epsilon-smoothing), so the result still sums to 1. Raises PhaseError
    when the ledger masks everything; in a legal game the code word is
    never masked, so that cannot happen.
    """
    survivors = {w: c for w, c in dist.items() if w not in ledger}
    if not survivors:
        raise PhaseError("every category is masked")
    total = sum(survivors.values())
    if total == 0.0:
        share = 1.0 / len(survivors)
        return {w: share for w in survivors}
    return {w: c / total for w, c in survivors.items()}


def top_category(dist: ScoreDistribution) -> tuple[str, float]:
    """Highest-confidence entry; exact ties fall to the earliest category."""
    best_word = None
    best_conf = -1.0
    for w, c in dist.items():
        if c > best_conf:
            best_word, best_conf = w, c
    return best_word, best_conf


def masked_guess(dist: ScoreDistribution, ledger: GuessLedger,
                 threshold: float) -> NnGuess | None:
    """The gated public guess: the masked, renormalized top category when
    its confidence reaches the threshold, else None."""
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must be in [0, 1], got {threshold}")
    word, conf = top_category(masked_distribution(dist, ledger))
    if conf >= threshold:
        return NnGuess(word, conf)
    return None


def save_index(ix: ClassifierIndex, path,
               mean_lengths: dict[str, float] | None = None) -> None:
    """Write a versioned snapshot (.npz) that round-trips bit-exactly.

    Optionally embeds per-category mean path lengths so `serve` can derive
    ink budgets without re-ingesting the corpus.
    """
    arrays = {
        "version": np.array([SNAPSHOT_VERSION], dtype=np.int64),
        "categories": np.array(ix.categories, dtype=str),
        "features": ix.features,
        "labels": ix.labels,
        "k": np.array([ix.k], dtype=np.int64),
    }
    if mean_lengths is not None:
        arrays["mean_lengths"] = np.array(
            [mean_lengths[canonical_word(c)] for c in ix.categories],
            dtype=np.float64)
    with open(path, "wb") as fh:
        np.savez(fh, **arrays)


def load_index(path) -> tuple[ClassifierIndex, dict[str, float] | None]:
    """Load a snapshot; returns (index, mean_lengths or None)."""
    with np.load(path, allow_pickle=False) as data:
        version = int(data["version"][0])
        if version != SNAPSHOT_VERSION:
            raise ValueError(f"unsupported index snapshot version {version}")
        categories = [str(c) for c in data["categories"]]
        ix = ClassifierIndex(categories, data["features"], data["labels"],
                             int(data["k"][0]))
        means = None
        if "mean_lengths" in data:
            means = {c: float(v) for c, v in zip(categories, data["mean_lengths"])}
    return ix, means
