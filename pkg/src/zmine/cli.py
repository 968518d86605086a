"""Command-line pipeline: ingest news, score sentiment and ratios, build
the dataset, train and evaluate models, score companies, serve and report.

Every command accepts --config/--data-root/--seed and finishes by
printing a single JSON summary line for scripting.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import click

from . import corpus as corpus_mod
from .config import load_config, resolve_data_root
from .dataset import (
    build_dataset,
    map_sectors,
    read_dataset_csv,
    sector_code_frequencies,
    write_dataset_csv,
)
from .evaluation import ExperimentConfig, run_cross_year, run_experiment
from .models import TrainingConfig, load_model, save_model, train
from .ratios import Exclusion, read_records_csv, score_record
from .report import render_report
from .scoring import score_companies, write_score_table
from .sentiment import load_lexicon, score_corpus, write_sentiment_csv
from .service import load_artifacts
from .smote import rebalance_to_fraction
from .synthetic import write_demo_world
from .textprep import preprocess_text

ARTICLES_DIR = "articles"
FINANCIALS_FILE = "financials.csv"
LEXICON_FILE = "lexicon.csv"
SENTIMENT_FILE = "sentiment.csv"
ZSCORES_FILE = "zscores.csv"
EXCLUSIONS_FILE = "exclusions.csv"
MAPPING_FILE = "mapping.json"
DATASET_FILE = "dataset.csv"
MODEL_FILE = "model.json"
EXPERIMENT_JSON = "experiment.json"
EXPERIMENT_TEXT = "experiment.txt"
SCORES_FILE = "scores.json"
REPORT_DIR = "report"


def _summary(command: str, **fields) -> None:
    click.echo(json.dumps({"command": command, **fields}, sort_keys=True))


def _fail(exc: Exception) -> None:
    raise click.ClickException(str(exc))


common_options = [
    click.option("--config", "config_path", type=click.Path(), default=None,
                 help="YAML config file."),
    click.option("--data-root", default=None,
                 help="Artifact directory (overrides config and environment)."),
    click.option("--seed", type=int, default=0, show_default=True,
                 help="Seed for every random choice in the command."),
]


def with_common_options(fn):
    for option in reversed(common_options):
        fn = option(fn)
    return fn


@click.group()
def main() -> None:
    """Bankruptcy risk scoring from financial ratios and news sentiment."""


@main.command()
@with_common_options
@click.option("--companies", type=int, default=60, show_default=True,
              help="Companies per sector-year.")
@click.option("--articles", type=int, default=25, show_default=True,
              help="Articles per sector-year.")
def demo(config_path, data_root, seed, companies, articles):
    """Generate a synthetic demo world under the data root."""
    config = load_config(config_path)
    root = resolve_data_root(data_root, config)
    info = write_demo_world(
        root, config.mapping.keywords, seed,
        companies_per_sector_year=companies, articles_per_group=articles,
    )
    _summary("demo", data_root=str(root), seed=seed, **info)


@main.command()
@with_common_options
@click.option("--source", default=None,
              help="Article directory or URL template with {sector}/{year}.")
def ingest(config_path, data_root, seed, source):
    """Fetch articles for every sector-year and store them deduplicated."""
    config = load_config(config_path)
    root = resolve_data_root(data_root, config)
    source = source or config.fetcher.root or config.fetcher.url_template
    if source is None:
        _fail(ValueError("no article source: pass --source or configure fetcher"))
    if "://" in source:
        fetcher = corpus_mod.HttpFetcher(
            source,
            delay_seconds=config.fetcher.delay_seconds,
            max_retries=config.fetcher.max_retries,
        )
    else:
        fetcher = corpus_mod.DirectoryFetcher(source)
    try:
        counts = corpus_mod.ingest(fetcher, root / ARTICLES_DIR,
                                   sectors=config.mapping.keywords)
    except corpus_mod.FetchError as exc:
        _fail(exc)
    _summary("ingest", data_root=str(root), seed=seed, **counts)


@main.command()
@with_common_options
@click.option("--lexicon", "lexicon_path", default=None,
              help="Lexicon CSV (defaults to config, then data root).")
def sentiment(config_path, data_root, seed, lexicon_path):
    """Score every sector-year corpus against the lexicon."""
    config = load_config(config_path)
    root = resolve_data_root(data_root, config)
    lexicon_path = lexicon_path or config.lexicon_path or str(root / LEXICON_FILE)
    try:
        lexicon = load_lexicon(lexicon_path)
        corpus = corpus_mod.load_corpus(root / ARTICLES_DIR)
        scores = []
        for (sector, year), articles in sorted(corpus.groups.items()):
            terms = []
            for article in articles:
                terms.extend(preprocess_text(article.text()))
            scores.append(score_corpus(terms, lexicon, sector, year))
        write_sentiment_csv(root / SENTIMENT_FILE, scores)
    except (ValueError, corpus_mod.FetchError, corpus_mod.CorpusError) as exc:
        _fail(exc)
    _summary(
        "sentiment", data_root=str(root), seed=seed,
        lexicon=str(lexicon_path), lexicon_entries=len(lexicon),
        groups=len(scores), articles=len(corpus),
        output=str(root / SENTIMENT_FILE),
    )


@main.command()
@with_common_options
@click.option("--financials", default=None, help="Input financial CSV.")
def ratios(config_path, data_root, seed, financials):
    """Compute Altman ratios and scores for every record."""
    config = load_config(config_path)
    root = resolve_data_root(data_root, config)
    financials = Path(financials) if financials else root / FINANCIALS_FILE
    try:
        records = read_records_csv(financials)
    except (OSError, ValueError) as exc:
        _fail(exc)
    scored, exclusions = [], []
    for record in records:
        result = score_record(record)
        (exclusions if isinstance(result, Exclusion) else scored).append(result)
    zscores_path = root / ZSCORES_FILE
    zscores_path.parent.mkdir(parents=True, exist_ok=True)
    with zscores_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([
            "company_id", "year", "sector_code", "a", "b", "c", "d",
            "d_prime", "e", "z", "z_prime", "selected_model", "zone",
        ])
        for item in scored:
            r, v, s = item.record, item.ratios, item.scores
            writer.writerow([
                r.company_id, r.year, r.sector_code,
                repr(v.a), repr(v.b), repr(v.c),
                "" if v.d is None else repr(v.d), repr(v.d_prime), repr(v.e),
                "" if s.z is None else repr(s.z), repr(s.z_prime),
                s.selected_model.value, s.zone.value,
            ])
    with (root / EXCLUSIONS_FILE).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["company_id", "year", "reason"])
        for e in exclusions:
            writer.writerow([e.company_id, e.year, e.reason])
    _summary(
        "ratios", data_root=str(root), seed=seed,
        records=len(records), scored=len(scored), excluded=len(exclusions),
        output=str(zscores_path),
    )


@main.command()
@with_common_options
@click.option("--financials", default=None, help="Input financial CSV.")
def build(config_path, data_root, seed, financials):
    """Join financial scores with sentiment into the model dataset."""
    config = load_config(config_path)
    root = resolve_data_root(data_root, config)
    financials = Path(financials) if financials else root / FINANCIALS_FILE
    try:
        records = read_records_csv(financials)
        from .sentiment import read_sentiment_csv

        sentiment_scores = read_sentiment_csv(root / SENTIMENT_FILE)
        scored, exclusions = [], []
        for record in records:
            result = score_record(record)
            (exclusions if isinstance(result, Exclusion) else scored).append(result)
        mapping = map_sectors(
            sector_code_frequencies(records),
            config.mapping.keywords,
            seed,
            explicit=config.mapping.explicit,
        )
        dataset = build_dataset(scored, exclusions, mapping, sentiment_scores)
        write_dataset_csv(root / DATASET_FILE, dataset)
        (root / MAPPING_FILE).write_text(
            json.dumps({
                "pairs": mapping.pairs,
                "seed": mapping.seed,
                "source": mapping.source.value,
            }, indent=2),
            encoding="utf-8",
        )
    except (OSError, ValueError) as exc:
        _fail(exc)
    _summary(
        "build", data_root=str(root), seed=seed,
        records=len(records), rows=len(dataset),
        exclusions=dataset.exclusion_count, drops=dataset.drop_warnings,
        imbalance={str(y): v for y, v in sorted(dataset.imbalance.items())},
        output=str(root / DATASET_FILE),
    )


@main.command(name="train")
@with_common_options
@click.option("--model", "model_kind", default=None,
              type=click.Choice(["logistic", "gbm", "mlp"]),
              help="Classifier to train (default from config).")
@click.option("--year", type=int, default=None,
              help="Restrict training to one year's rows.")
def train_cmd(config_path, data_root, seed, model_kind, year):
    """Train a classifier on the built dataset and save it."""
    config = load_config(config_path)
    root = resolve_data_root(data_root, config)
    model_kind = model_kind or config.model.kind
    try:
        dataset = read_dataset_csv(root / DATASET_FILE)
        rows = dataset.rows_for_year(year) if year else list(dataset.rows)
        if model_kind in ("gbm", "mlp"):
            rows = rebalance_to_fraction(
                rows,
                config.smote.target_fraction,
                k=config.smote.k,
                seed=seed,
                scale=config.smote.scale,
            )
        training_config = TrainingConfig(
            class_weights=dict(config.model.class_weights),
            learning_rate=config.model.learning_rate,
            epochs=config.model.epochs,
            seed=seed,
            sentiment_variables=config.model.sentiment_variables,
            standardize=config.model.standardize,
        )
        model = train(model_kind, rows, training_config)
        save_model(root / MODEL_FILE, model)
    except (OSError, ValueError, RuntimeError) as exc:
        _fail(exc)
    _summary(
        "train", data_root=str(root), seed=seed,
        model=model_kind, rows=len(rows), final_loss=model.final_loss
        if hasattr(model, "final_loss") else model.training_loss[-1],
        output=str(root / MODEL_FILE),
    )


@main.command()
@with_common_options
@click.option("--years", default=None,
              help="Comma-separated years (default: all in the dataset).")
@click.option("--models", "model_kinds", default="logistic,gbm,mlp",
              show_default=True, help="Comma-separated model kinds.")
@click.option("--sentiment-sets", default="all", show_default=True,
              help="Comma-separated sentiment variable sets.")
@click.option("--cross-year", nargs=2, type=int, default=None,
              help="Train on one year, test on another (train test).")
@click.option("--format", "output_format", default="json",
              type=click.Choice(["json", "table"]), show_default=True)
def evaluate(config_path, data_root, seed, years, model_kinds, sentiment_sets,
             cross_year, output_format):
    """Run the (year x model x sentiment set) experiment grid."""
    config = load_config(config_path)
    root = resolve_data_root(data_root, config)
    try:
        dataset = read_dataset_csv(root / DATASET_FILE)
        year_list = (
            tuple(int(y) for y in years.split(",")) if years
            else tuple(dataset.years())
        )
        experiment_config = ExperimentConfig(
            years=year_list,
            models=tuple(model_kinds.split(",")),
            sentiment_sets=tuple(sentiment_sets.split(",")),
            train_fraction=config.split.train_fraction,
            seed=seed,
            smote_k=config.smote.k,
            smote_target_fraction=config.smote.target_fraction,
            smote_scale=config.smote.scale,
            class_weights=dict(config.model.class_weights),
            standardize=config.model.standardize,
        )
        if cross_year:
            report = run_cross_year(dataset, cross_year[0], cross_year[1],
                                    experiment_config)
        else:
            report = run_experiment(dataset, experiment_config)
        (root / EXPERIMENT_JSON).write_text(report.to_json(), encoding="utf-8")
        from .evaluation import render_tables

        (root / EXPERIMENT_TEXT).write_text(render_tables(report), encoding="utf-8")
    except (OSError, ValueError) as exc:
        _fail(exc)
    if output_format == "table":
        click.echo(render_tables(report))
    failed = sum(1 for cell in report.grid.values() if cell.get("status") != "ok")
    _summary(
        "evaluate", data_root=str(root), seed=seed,
        cells=len(report.grid), failed=failed,
        output=str(root / EXPERIMENT_JSON),
    )


@main.command()
@with_common_options
@click.option("--threshold", type=float, default=None,
              help="Flag threshold (default from config).")
def score(config_path, data_root, seed, threshold):
    """Score every company-year with the saved model and apply the flag."""
    config = load_config(config_path)
    root = resolve_data_root(data_root, config)
    threshold = config.threshold if threshold is None else threshold
    try:
        model = load_model(root / MODEL_FILE)
        dataset = read_dataset_csv(root / DATASET_FILE)
        table = score_companies(model, dataset, threshold)
        write_score_table(root / SCORES_FILE, table)
    except (OSError, ValueError) as exc:
        _fail(exc)
    _summary(
        "score", data_root=str(root), seed=seed,
        entries=len(table.entries), flagged=len(table.flagged_entries()),
        threshold=threshold, model_version=table.model_version,
        output=str(root / SCORES_FILE),
    )


@main.command()
@with_common_options
@click.option("--host", default=None, help="Bind host (default from config).")
@click.option("--port", type=int, default=None, help="Bind port (default from config).")
def serve(config_path, data_root, seed, host, port):
    """Serve the scored artifacts over the read-only JSON API."""
    import uvicorn

    from .service import create_app

    config = load_config(config_path)
    root = resolve_data_root(data_root, config)
    try:
        artifacts = load_artifacts(root)
    except (OSError, ValueError) as exc:
        _fail(exc)
    host = host or config.server.host
    port = config.server.port if port is None else port
    _summary(
        "serve", data_root=str(root), seed=seed,
        host=host, port=port,
        companies=len(artifacts.dataset.rows),
        scores=len(artifacts.scores.entries),
    )
    uvicorn.run(create_app(artifacts), host=host, port=port, log_level="warning")


@main.command(name="report")
@with_common_options
@click.option("--out", "out_dir", default=None,
              help="Output directory (default <data-root>/report).")
def report_cmd(config_path, data_root, seed, out_dir):
    """Render delimited summaries and their figures from the artifacts."""
    config = load_config(config_path)
    root = resolve_data_root(data_root, config)
    out = Path(out_dir) if out_dir else root / REPORT_DIR
    try:
        artifacts = load_artifacts(root)
        experiment = None
        experiment_path = root / EXPERIMENT_JSON
        if experiment_path.is_file():
            from .evaluation import ExperimentReport

            raw = json.loads(experiment_path.read_text(encoding="utf-8"))
            grid = {}
            for key, cell in raw["grid"].items():
                year, model_kind, sset = key.split("/")
                grid[(int(year), model_kind, sset)] = cell
            experiment = ExperimentReport(
                grid=grid,
                config=ExperimentConfig(
                    years=tuple(raw["config"]["years"]),
                    models=tuple(raw["config"]["models"]),
                    sentiment_sets=tuple(raw["config"]["sentiment_sets"]),
                    train_fraction=raw["config"]["train_fraction"],
                    seed=raw["config"]["seed"],
                ),
                seed=raw["seed"],
            )
        written = render_report(artifacts, out, experiment)
    except (OSError, ValueError) as exc:
        _fail(exc)
    _summary("report", data_root=str(root), seed=seed, out=str(out), files=written)


if __name__ == "__main__":
    main()
