"""Batch report: delimited summaries with matching rendered figures.

Each summary is written twice into the output directory: once as a CSV
for downstream tools and once as a PNG chart for people. The figure and
the CSV for a given summary always share a basename.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .evaluation import ExperimentReport, render_tables
from .service import Artifacts


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _bankruptcy_by_year(artifacts: Artifacts) -> list[list]:
    by_year: dict[int, list[float]] = {}
    for entry in artifacts.scores.entries:
        by_year.setdefault(entry.year, []).append(entry.probability)
    return [
        [year, sum(ps) / len(ps), len(ps)] for year, ps in sorted(by_year.items())
    ]


def _sentiment_by_year(artifacts: Artifacts) -> list[list]:
    return [
        [s.sector, s.year, s.positive_pct, s.negative_pct,
         "" if s.pos_to_neg is None else s.pos_to_neg]
        for s in sorted(artifacts.sentiment, key=lambda s: (s.sector, s.year))
    ]


def _flag_counts(artifacts: Artifacts) -> list[list]:
    by_group: dict[tuple[str, int], int] = {}
    for entry in artifacts.scores.entries:
        if entry.flagged:
            key = (entry.sector, entry.year)
            by_group[key] = by_group.get(key, 0) + 1
    return [[sector, year, count] for (sector, year), count in sorted(by_group.items())]


def render_report(
    artifacts: Artifacts,
    out_dir: str | Path,
    experiment: ExperimentReport | None = None,
) -> dict[str, str]:
    """Write every summary CSV and its figure; returns name -> path."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: dict[str, str] = {}

    mean_rows = _bankruptcy_by_year(artifacts)
    path = out_dir / "bankruptcy_by_year.csv"
    _write_csv(path, ["year", "mean_probability", "companies"], mean_rows)
    written["bankruptcy_by_year_csv"] = str(path)

    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot([r[0] for r in mean_rows], [r[1] for r in mean_rows], marker="o")
    ax.set_xlabel("year")
    ax.set_ylabel("mean bankruptcy probability")
    ax.set_title("Mean bankruptcy score by year")
    ax.set_xticks([r[0] for r in mean_rows])
    ax.grid(True, alpha=0.3)
    fig_path = out_dir / "bankruptcy_by_year.png"
    fig.savefig(fig_path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    written["bankruptcy_by_year_png"] = str(fig_path)

    sentiment_rows = _sentiment_by_year(artifacts)
    path = out_dir / "sentiment_by_year.csv"
    _write_csv(
        path,
        ["sector", "year", "positive_pct", "negative_pct", "pos_to_neg"],
        sentiment_rows,
    )
    written["sentiment_by_year_csv"] = str(path)

    fig, ax = plt.subplots(figsize=(7, 4))
    sectors = sorted({row[0] for row in sentiment_rows})
    for sector in sectors:
        points = [(row[1], row[3]) for row in sentiment_rows if row[0] == sector]
        ax.plot(
            [p[0] for p in points], [p[1] for p in points],
            marker="o", label=sector,
        )
    ax.set_xlabel("year")
    ax.set_ylabel("negative terms (%)")
    ax.set_title("Negative sentiment by sector and year")
    if sectors:
        ax.legend()
    ax.grid(True, alpha=0.3)
    fig_path = out_dir / "sentiment_by_year.png"
    fig.savefig(fig_path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    written["sentiment_by_year_png"] = str(fig_path)

    flag_rows = _flag_counts(artifacts)
    path = out_dir / "flags.csv"
    _write_csv(path, ["sector", "year", "flagged_count"], flag_rows)
    written["flags_csv"] = str(path)

    fig, ax = plt.subplots(figsize=(7, 4))
    labels = [f"{sector} {year}" for sector, year, _ in flag_rows]
    ax.bar(range(len(flag_rows)), [count for _, _, count in flag_rows])
    ax.set_xticks(range(len(flag_rows)))
    ax.set_xticklabels(labels, rotation=45, ha="right")
    ax.set_ylabel("flagged companies")
    ax.set_title("Flagged companies by sector and year")
    fig_path = out_dir / "flags.png"
    fig.savefig(fig_path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    written["flags_png"] = str(fig_path)

    if experiment is not None:
        written.update(render_experiment_outputs(experiment, out_dir))
    return written


def render_experiment_outputs(
    report: ExperimentReport, out_dir: str | Path
) -> dict[str, str]:
    """Grid metrics as CSV, aligned text, and an accuracy-by-year chart."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: dict[str, str] = {}

    rows = []
    for (year, model, sset), cell in sorted(report.grid.items()):
        if cell.get("status") == "ok":
            rows.append([
                year, model, sset,
                cell["accuracy"], cell["type_i_error"], cell["false_alarm_rate"],
            ])
        else:
            rows.append([year, model, sset, "", "", ""])
    path = out_dir / "experiment_grid.csv"
    _write_csv(
        path,
        ["year", "model", "sentiment_set", "accuracy", "type_i_error",
         "false_alarm_rate"],
        rows,
    )
    written["experiment_grid_csv"] = str(path)

    text_path = out_dir / "experiment_grid.txt"
    text_path.write_text(render_tables(report), encoding="utf-8")
    written["experiment_grid_txt"] = str(text_path)

    fig, ax = plt.subplots(figsize=(7, 4))
    for model in report.config.models:
        for sset in report.config.sentiment_sets:
            points = [
                (year, report.grid[(year, model, sset)]["accuracy"])
                for year in report.config.years
                if report.grid.get((year, model, sset), {}).get("status") == "ok"
            ]
            if points:
                ax.plot(
                    [p[0] for p in points], [p[1] for p in points],
                    marker="o", label=f"{model} [{sset}]",
                )
    ax.set_xlabel("year")
    ax.set_ylabel("accuracy")
    ax.set_title("Test accuracy by year")
    ax.set_xticks(list(report.config.years))
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig_path = out_dir / "experiment_grid.png"
    fig.savefig(fig_path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    written["experiment_grid_png"] = str(fig_path)
    return written
