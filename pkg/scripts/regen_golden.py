#!/usr/bin/env python3
"""Regenerate the golden protocol trace after an intentional wire change.

Run from the repository root:  python scripts/regen_golden.py
"""

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from trace_utils import play_scripted_match  # noqa: E402

from sketchduel import classifier, dataset, synth  # noqa: E402

TINY_CATEGORIES = ["line", "circle", "square", "tshape"]
TINY_SEED = 1234


def main() -> None:
    ds = synth.synth_dataset(TINY_CATEGORIES, 30, TINY_SEED)
    ix = classifier.build_index(ds, k=5)
    budgets = dataset.compute_ink_budgets(ds, 1.5)
    harness, _ = play_scripted_match(ix, budgets, ds)
    out = ROOT / "tests" / "golden" / "trace_two_humans.log"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(harness.log_lines(), encoding="utf-8")
    print(f"wrote {len(harness.log)} outbound frames to {out}")


if __name__ == "__main__":
    main()
