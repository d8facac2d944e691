"""Command-line interface: serve the API, run metrics, analyze logs."""

from __future__ import annotations

import csv
import json
import sys
from pathlib import Path

import click

from pictutor.core.types import Language
from pictutor.metrics.elo import JudgeRecord, Winner, elo_ratings, win_rates
from pictutor.metrics.mos import RatingSample, mos_summary
from pictutor.metrics.rates import cer, wer
from pictutor.metrics.scaffolds import build_report, labels_from_logs, load_cohort_csv


def _emit(payload: dict) -> None:
    click.echo(json.dumps(payload, indent=2, ensure_ascii=False, sort_keys=True))


@click.group()
def main() -> None:
    """Picture-description tutoring engine."""


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="KEY=VALUE configuration file.")
@click.option("--demo", is_flag=True, help="Mock adapters and bundled fixture scenes.")
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
@click.option("--data-dir", type=click.Path(), default=None,
              help="Session log directory (demo mode).")
@click.option("--ui-dir", type=click.Path(exists=True), default=None,
              help="Static directory to serve as the web UI.")
def serve(config_path, demo, host, port, data_dir, ui_dir) -> None:
    """Start the session service."""
    import dataclasses

    import uvicorn

    from pictutor.service.app import create_app
    from pictutor.service.config import demo_config, load_config

    if demo:
        config = demo_config(data_dir or "./demo-data")
    else:
        config = load_config(config_path)
        if data_dir:
            config = dataclasses.replace(config, data_dir=Path(data_dir))
    if ui_dir:
        config = dataclasses.replace(config, ui_dir=Path(ui_dir))
    if host:
        config = dataclasses.replace(config, host=host)
    if port:
        config = dataclasses.replace(config, port=port)
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port)


@main.group(name="eval")
def eval_group() -> None:
    """Speech and dialogue evaluation metrics."""


def _read_lines(path: str) -> list[str]:
    return Path(path).read_text(encoding="utf-8").splitlines()


@eval_group.command(name="wer")
@click.option("--ref", "ref_path", required=True, type=click.Path(exists=True))
@click.option("--hyp", "hyp_path", required=True, type=click.Path(exists=True))
@click.option("--lang", default="EN", type=click.Choice([l.value for l in Language]))
def eval_wer(ref_path, hyp_path, lang) -> None:
    """Word error rate between parallel reference/hypothesis files."""
    language = Language(lang)
    refs, hyps = _read_lines(ref_path), _read_lines(hyp_path)
    if len(refs) != len(hyps):
        raise click.ClickException(
            f"line counts differ: {len(refs)} references vs {len(hyps)} hypotheses"
        )
    from pictutor.langeval.tokens import tokenize
    from pictutor.metrics.distance import edit_distance

    per_line = []
    total_distance = 0
    total_ref = 0
    for ref, hyp in zip(refs, hyps):
        ref_tokens = tokenize(ref, language)
        if not ref_tokens:
            raise click.ClickException(f"empty reference line: {ref!r}")
        distance = edit_distance(ref_tokens, tokenize(hyp, language))
        per_line.append(distance / len(ref_tokens))
        total_distance += distance
        total_ref += len(ref_tokens)
    _emit({
        "metric": "wer",
        "language": lang,
        "pairs": len(refs),
        "wer": total_distance / total_ref,
        "per_line": per_line,
    })


@eval_group.command(name="cer")
@click.option("--ref", "ref_path", required=True, type=click.Path(exists=True))
@click.option("--hyp", "hyp_path", required=True, type=click.Path(exists=True))
def eval_cer(ref_path, hyp_path) -> None:
    """Character error rate between parallel reference/hypothesis files."""
    refs, hyps = _read_lines(ref_path), _read_lines(hyp_path)
    if len(refs) != len(hyps):
        raise click.ClickException(
            f"line counts differ: {len(refs)} references vs {len(hyps)} hypotheses"
        )
    per_line = [cer(ref, hyp) for ref, hyp in zip(refs, hyps)]
    joined = cer(" ".join(refs), " ".join(hyps)) if refs else 0.0
    _emit({
        "metric": "cer",
        "pairs": len(refs),
        "cer": joined,
        "per_line": per_line,
    })


@eval_group.command(name="mos")
@click.option("--ratings", "ratings_path", required=True, type=click.Path(exists=True),
              help="CSV with item_id,score columns.")
def eval_mos(ratings_path) -> None:
    """Mean opinion score with a 95% confidence interval."""
    with open(ratings_path, newline="", encoding="utf-8") as handle:
        samples = [
            RatingSample(row["item_id"], float(row["score"]))
            for row in csv.DictReader(handle)
        ]
    mean, ci_low, ci_high = mos_summary(samples)
    _emit({
        "metric": "mos",
        "n": len(samples),
        "mean": mean,
        "ci_low": ci_low,
        "ci_high": ci_high,
    })


@eval_group.command(name="elo")
@click.option("--records", "records_path", required=True, type=click.Path(exists=True),
              help="JSONL with model_a, model_b, winner fields.")
@click.option("--k", default=32.0, type=float)
@click.option("--initial", default=1500.0, type=float)
def eval_elo(records_path, k, initial) -> None:
    """Sequential Elo ratings plus raw win rates from pairwise judgments."""
    records = []
    for line in _read_lines(records_path):
        if not line.strip():
            continue
        raw = json.loads(line)
        records.append(JudgeRecord(raw["model_a"], raw["model_b"], Winner(raw["winner"])))
    _emit({
        "metric": "elo",
        "k": k,
        "initial": initial,
        "n_records": len(records),
        "ratings": elo_ratings(records, k=k, initial=initial),
        "win_rates": win_rates(records),
    })


@main.group()
def analyze() -> None:
    """Analytics over persisted session logs."""


@analyze.command()
@click.option("--logs", "logs_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--cohorts", "cohorts_path", type=click.Path(exists=True), default=None,
              help="session_id,cohort CSV; defaults to <logs>/cohorts.csv.")
def scaffolds(logs_dir, cohorts_path) -> None:
    """Scaffolding-type distribution per cohort (percentages and counts)."""
    cohorts_file = Path(cohorts_path) if cohorts_path else Path(logs_dir) / "cohorts.csv"
    if not cohorts_file.is_file():
        raise click.ClickException(f"cohort CSV not found: {cohorts_file}")
    cohorts = load_cohort_csv(cohorts_file)
    labels, skipped = labels_from_logs(logs_dir, cohorts)
    _emit(build_report(labels, skipped))


@main.command()
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
@click.option("--sessions", default=10, type=int, help="Sessions per cohort.")
@click.option("--seed", default=7, type=int)
@click.option("--scene", "scene_id", default="pool")
@click.option("--max-turns", default=10, type=int)
def simulate(out_dir, sessions, seed, scene_id, max_turns) -> None:
    """Generate mock-student session logs plus a cohort CSV."""
    from pictutor.service.config import demo_config
    from pictutor.service.engine import TutorEngine
    from pictutor.sim import simulate_cohorts, write_cohort_csv

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    engine = TutorEngine(demo_config(out))
    results = simulate_cohorts(engine, sessions, seed=seed, scene_id=scene_id,
                               max_turns=max_turns)
    write_cohort_csv(results, out / "cohorts.csv")
    click.echo(
        f"wrote {len(results)} session logs and cohorts.csv to {out}", err=True
    )


if __name__ == "__main__":
    sys.exit(main())
