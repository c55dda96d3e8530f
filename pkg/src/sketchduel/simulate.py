"""Headless strategy harness: replay corpus drawings stroke by stroke
against the classifier and record when it would first emit the true label.

Strategies mirror what sketchers do against the guesser: clean replay,
crosshatch noise within the ink budget, and a prefix replay standing in
for sequential-image openings.
"""

from __future__ import annotations

import json
import random
import statistics
from dataclasses import dataclass, field

from .classifier import ClassifierIndex, masked_distribution, predict, top_category
from .dataset import Dataset, InkBudgetTable, LabeledDrawing
from .geometry import Drawing, Stroke, stroke_length, truncate_stroke
from .synth import crosshatch_strokes

STRATEGIES = ("clean", "noise", "rebus-prefix")


@dataclass
class Emission:
    stroke: int
    word: str
    confidence: float
    correct: bool


@dataclass
class TrialRecord:
    trial: int
    word: str
    strategy: str
    strokes_replayed: int
    strokes_to_result: int          # first-correct stroke, else strokes_replayed
    got_correct: bool
    ink_exhausted: bool
    final_top1: str | None
    trajectory: list[float] = field(default_factory=list)
    emissions: list[Emission] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "trial": self.trial,
            "word": self.word,
            "strategy": self.strategy,
            "strokes_replayed": self.strokes_replayed,
            "strokes_to_result": self.strokes_to_result,
            "got_correct": self.got_correct,
            "ink_exhausted": self.ink_exhausted,
            "final_top1": self.final_top1,
            "trajectory": self.trajectory,
            "emissions": [[e.stroke, e.word, e.confidence, e.correct]
                          for e in self.emissions],
        }


@dataclass
class SimulationReport:
    records: list[TrialRecord]

    def by_strategy(self) -> dict[str, list[TrialRecord]]:
        out: dict[str, list[TrialRecord]] = {}
        for r in self.records:
            out.setdefault(r.strategy, []).append(r)
        return out

    def median_strokes(self) -> dict[str, float]:
        return {s: statistics.median(r.strokes_to_result for r in rs)
                for s, rs in self.by_strategy().items()}

    def correct_rate(self) -> dict[str, float]:
        return {s: sum(r.got_correct for r in rs) / len(rs)
                for s, rs in self.by_strategy().items()}

    def summary(self) -> str:
        lines = [f"{'strategy':<14}{'trials':>7}{'correct':>9}"
                 f"{'median strokes':>16}"]
        medians = self.median_strokes()
        rates = self.correct_rate()
        for s, rs in self.by_strategy().items():
            lines.append(f"{s:<14}{len(rs):>7}{rates[s]:>9.2f}"
                         f"{medians[s]:>16.1f}")
        return "\n".join(lines)


def apply_strategy(strategy: str, strokes: list[Stroke], rng: random.Random,
                   noise_length: float) -> list[Stroke]:
    """Transform a stroke sequence per the named strategy."""
    if strategy == "clean":
        return list(strokes)
    if strategy == "rebus-prefix":
        half = max(1, (len(strokes) + 1) // 2)
        return list(strokes[:half])
    if strategy == "noise":
        noise = crosshatch_strokes(rng, noise_length)
        out: list[Stroke] = list(noise[:2])                 # open with noise
        remaining = noise[2:]
        for i, s in enumerate(strokes):
            out.append(s)
            if remaining and i % 2 == 1:                    # interleave the rest
                out.append(remaining.pop(0))
        out.extend(remaining)
        return out
    raise ValueError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")


def run_trial(ix: ClassifierIndex, example: LabeledDrawing, strategy: str,
              trial: int, rng: random.Random, threshold: float,
              budget: float, mask_wrong_guesses: bool = True) -> TrialRecord:
    """Replay one example against the classifier with game semantics:
    ink truncation at the budget, ledger masking, gated emissions."""
    noise_length = max(0.0, budget - sum(stroke_length(s)
                                         for s in example.drawing.strokes))
    strokes = apply_strategy(strategy, example.drawing.strokes, rng, noise_length)

    record = TrialRecord(trial=trial, word=example.word, strategy=strategy,
                         strokes_replayed=0, strokes_to_result=0,
                         got_correct=False, ink_exhausted=False,
                         final_top1=None)
    drawing = Drawing()
    ledger: set[str] = set()
    ink_used = 0.0
    for s in strokes:
        remaining = budget - ink_used
        length = stroke_length(s)
        if length <= remaining:
            accepted = s
            ink_used += length
        else:
            accepted = truncate_stroke(s, remaining)
            ink_used = budget
            record.ink_exhausted = True
            if accepted is None:
                break
        drawing.strokes.append(accepted)
        record.strokes_replayed += 1

        dist = predict(ix, drawing)
        word, conf = top_category(masked_distribution(dist, ledger))
        record.trajectory.append(conf)
        record.final_top1 = word
        if conf >= threshold:
            correct = word == example.word
            record.emissions.append(Emission(record.strokes_replayed, word,
                                             conf, correct))
            if correct:
                record.got_correct = True
                record.strokes_to_result = record.strokes_replayed
                return record
            if mask_wrong_guesses and word != example.word:
                ledger.add(word)
        if record.ink_exhausted:
            break
    record.strokes_to_result = record.strokes_replayed
    return record


def run_simulation(ix: ClassifierIndex, ds: Dataset, budgets: InkBudgetTable,
                   strategies: list[str], trials: int, seed: int,
                   threshold: float = 0.5,
                   mask_wrong_guesses: bool = True) -> SimulationReport:
    """Paired trials: the same sampled examples are replayed under every
    requested strategy, with per-trial seeds so noise is reproducible."""
    for s in strategies:
        if s not in STRATEGIES:
            raise ValueError(f"unknown strategy {s!r}; choose from {STRATEGIES}")
    usable = [ex for ex in ds.all_examples() if ex.word in set(ix.categories)]
    if trials > 0 and not usable:
        raise ValueError("corpus has no examples in the index's categories")
    rng = random.Random(seed)
    picked = [usable[rng.randrange(len(usable))] for _ in range(trials)]
    records = []
    for strategy in strategies:
        for i, ex in enumerate(picked):
            trial_rng = random.Random(seed * 1_000_003 + i)
            records.append(run_trial(ix, ex, strategy, i, trial_rng, threshold,
                                     budgets.budget(ex.word),
                                     mask_wrong_guesses))
    return SimulationReport(records)


def write_report(report: SimulationReport, path) -> None:
    """Line-delimited JSON, one trial per line, in trial order."""
    with open(path, "w", encoding="utf-8") as fh:
        for r in report.records:
            fh.write(json.dumps(r.as_dict(), separators=(",", ":")) + "\n")
