"""Operator command line: corpus tools, index build, server launch, and the
headless strategy simulator.

Exit codes: 0 success, 2 usage error, 1 runtime failure.
"""

from __future__ import annotations

import functools
import json
from pathlib import Path

import click

from . import classifier, dataset, simulate, synth
from .errors import SketchDuelError
from .game import MatchConfig

CONFIG_KEYS = ("rounds_to_play", "round_seconds", "confidence_threshold",
               "ink_multiplier", "category_words", "rng_seed")


def runtime_errors(f):
    """Map domain failures to exit code 1 with a one-line message."""
    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except (SketchDuelError, OSError, ValueError) as e:
            raise click.ClickException(str(e)) from e
    return wrapper


def load_config(path: str | None) -> dict:
    """Read match settings from a JSON key-value file (documented keys
    only)."""
    if path is None:
        return {}
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    unknown = set(raw) - set(CONFIG_KEYS)
    if unknown:
        raise click.UsageError(f"unknown config keys: {sorted(unknown)}")
    return raw


@click.group()
def cli() -> None:
    """Toolchain for the drawing-duel game server."""


@cli.command()
@click.argument("paths", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False))
@click.option("--cap", type=click.IntRange(min=1), default=None,
              help="Keep at most this many examples per category.")
@click.option("--lenient", is_flag=True,
              help="Skip and count malformed lines instead of failing.")
@click.option("--all-drawings", is_flag=True,
              help="Keep drawings the source flagged as unrecognized too.")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Re-export the parsed corpus as canonical ndjson.")
@runtime_errors
def ingest(paths, cap, lenient, all_drawings, out) -> None:
    """Parse ndjson drawing files and print per-category counts."""
    ds = dataset.load_dataset(paths, per_category_cap=cap,
                              require_recognized=not all_drawings,
                              lenient=lenient)
    click.echo(f"{'category':<20}{'examples':>9}")
    for word in ds.categories:
        click.echo(f"{word:<20}{ds.count(word):>9}")
    click.echo(f"{'total':<20}{ds.count():>9}")
    if ds.skipped:
        click.echo(f"skipped {ds.skipped} malformed line(s)")
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            for ex in ds.all_examples():
                strokes = [[[int(x) for x, _ in s.points],
                            [int(y) for _, y in s.points]]
                           for s in ex.drawing.strokes]
                fh.write(json.dumps(
                    {"word": ex.word, "recognized": ex.recognized,
                     "drawing": strokes}, separators=(",", ":")) + "\n")
        click.echo(f"re-exported {ds.count()} drawings to {out}")


@cli.command("synth")
@click.option("--categories", default=",".join(sorted(synth.SHAPES)),
              show_default=True, help="Comma-separated shape names.")
@click.option("--per-category", type=click.IntRange(min=1), default=200,
              show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@runtime_errors
def synth_cmd(categories, per_category, seed, out) -> None:
    """Generate a synthetic shape corpus in the ingest ndjson format."""
    names = [c.strip() for c in categories.split(",") if c.strip()]
    unknown = [c for c in names if c not in synth.SHAPES]
    if unknown:
        raise click.UsageError(
            f"unknown synthetic categories {unknown}; "
            f"available: {sorted(synth.SHAPES)}")
    count = synth.write_corpus(out, names, per_category, seed)
    click.echo(f"wrote {count} drawings ({len(names)} categories) to {out}")


@cli.command()
@click.argument("paths", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False))
@click.option("--cap", type=click.IntRange(min=1), default=None)
@click.option("--ink-multiplier", type=float, default=1.5, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Also write the table as JSON.")
@runtime_errors
def budgets(paths, cap, ink_multiplier, out) -> None:
    """Compute per-category ink budgets from corpus average path lengths."""
    ds = dataset.load_dataset(paths, per_category_cap=cap)
    table = dataset.compute_ink_budgets(ds, ink_multiplier)
    click.echo(f"{'category':<20}{'examples':>9}{'mean length':>13}{'budget':>11}")
    for word in ds.categories:
        click.echo(f"{word:<20}{ds.count(word):>9}"
                   f"{table.mean_lengths[word]:>13.1f}{table.budget(word):>11.1f}")
    if out:
        Path(out).write_text(json.dumps(
            {"multiplier": table.multiplier,
             "budgets": {w: table.budget(w) for w in ds.categories}},
            indent=2) + "\n", encoding="utf-8")
        click.echo(f"wrote budget table to {out}")


@cli.command("build-index")
@click.argument("paths", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False))
@click.option("--cap", type=click.IntRange(min=1), default=None)
@click.option("--k", type=click.IntRange(min=1), default=classifier.DEFAULT_K,
              show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@runtime_errors
def build_index(paths, cap, k, out) -> None:
    """Build the classifier index from ndjson corpora and snapshot it."""
    ds = dataset.load_dataset(paths, per_category_cap=cap)
    ix = classifier.build_index(ds, k=k)
    table = dataset.compute_ink_budgets(ds, multiplier=1.0)
    classifier.save_index(ix, out, mean_lengths=table.mean_lengths)
    click.echo(f"indexed {len(ix)} drawings, {len(ix.categories)} categories, "
               f"k={ix.k}, dim={ix.dim} -> {out}")


@cli.command()
@click.option("--bind", default="127.0.0.1:8000", show_default=True,
              help="host:port to listen on.")
@click.option("--index", "index_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Index snapshot from build-index.")
@click.option("--threshold", type=click.FloatRange(0.0, 1.0), default=0.5,
              show_default=True, help="Guess emission confidence gate.")
@click.option("--ink-multiplier", type=float, default=1.5, show_default=True)
@click.option("--config", "config_path", type=click.Path(exists=True),
              default=None, help="JSON file with match settings.")
@click.option("--seed", type=int, default=None,
              help="Seed room codes and match seeds (testing).")
@click.option("--static", "static_dir", type=click.Path(file_okay=False),
              default=None, help="Directory with built web client assets.")
@runtime_errors
def serve(bind, index_path, threshold, ink_multiplier, config_path, seed,
          static_dir) -> None:
    """Run the multiplayer game server."""
    import uvicorn

    from .rooms import LobbyService
    from .service import create_app

    host, _, port = bind.rpartition(":")
    if not host or not port.isdigit():
        raise click.UsageError(f"--bind must be host:port, got {bind!r}")

    ix, means = classifier.load_index(index_path)
    if means is None:
        raise click.UsageError(
            f"{index_path} carries no per-category mean lengths; "
            "rebuild it with build-index")
    table = dataset.InkBudgetTable(means, ink_multiplier)
    overrides = load_config(config_path)
    overrides.setdefault("confidence_threshold", threshold)
    overrides.setdefault("ink_multiplier", ink_multiplier)
    overrides.setdefault("category_words", list(ix.categories))
    defaults = MatchConfig(**overrides)
    service = LobbyService(ix, table, defaults, rng_seed=seed)

    if static_dir is None:
        bundled = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        static_dir = bundled if bundled.is_dir() else None
    app = create_app(service, static_dir=static_dir)
    uvicorn.run(app, host=host, port=int(port), log_level="info")


@cli.command("simulate")
@click.option("--index", "index_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--data", "data_paths", multiple=True, required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="ndjson corpus the trials replay from.")
@click.option("--strategy", "strategies", multiple=True,
              type=click.Choice(simulate.STRATEGIES),
              default=list(simulate.STRATEGIES), show_default=True)
@click.option("--trials", type=click.IntRange(min=0), default=200,
              show_default=True, help="Trials per strategy.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--threshold", type=click.FloatRange(0.0, 1.0), default=None,
              help="Guess emission gate [default: 0.5].")
@click.option("--ink-multiplier", type=float, default=None,
              help="Budget multiplier [default: 1.5].")
@click.option("--config", "config_path", type=click.Path(exists=True),
              default=None, help="JSON file with match settings.")
@click.option("--cap", type=click.IntRange(min=1), default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write the per-trial report as line-delimited JSON.")
@runtime_errors
def simulate_cmd(index_path, data_paths, strategies, trials, seed, threshold,
                 ink_multiplier, config_path, cap, out) -> None:
    """Replay corpus drawings against the classifier per strategy."""
    settings = load_config(config_path)
    if threshold is None:
        threshold = settings.get("confidence_threshold", 0.5)
    if ink_multiplier is None:
        ink_multiplier = settings.get("ink_multiplier", 1.5)
    ix, _ = classifier.load_index(index_path)
    ds = dataset.load_dataset(data_paths, per_category_cap=cap)
    table = dataset.compute_ink_budgets(ds, ink_multiplier)
    report = simulate.run_simulation(ix, ds, table, list(strategies), trials,
                                     seed, threshold)
    if report.records:
        click.echo(report.summary())
    else:
        click.echo("no trials requested")
    if out:
        simulate.write_report(report, out)
        click.echo(f"wrote {len(report.records)} trial records to {out}")


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
