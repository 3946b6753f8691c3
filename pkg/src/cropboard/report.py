"""CSV tables and figure rendering for fronts, rankings, and comparisons.

Figures are written straight to files with the non-interactive backend,
so these helpers work in headless runs.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from cropboard.group import GroupRanking, RankingComparison
from cropboard.pareto import ParetoSet


def write_front_csv(front: ParetoSet, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["label", "profit", "waste", "unmet"])
        for label, _, triple in front.solutions:
            writer.writerow([label, triple.profit, triple.waste, triple.unmet])


def write_ranking_csv(ranking: GroupRanking, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["alternative", "points", "rank"])
        for entry in ranking.entries:
            writer.writerow([entry.alternative, entry.points, entry.rank])


def write_comparison_csv(comparison: RankingComparison, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["position", "first", "second", "delta_profit", "delta_waste", "delta_unmet"]
        )
        for row in comparison.rows:
            writer.writerow(
                [
                    row.position,
                    row.first,
                    row.second,
                    row.delta_profit,
                    row.delta_waste,
                    row.delta_unmet,
                ]
            )


def render_front(front: ParetoSet, path: str | Path) -> None:
    """Three scatter panels: each objective pair, points labeled."""
    triples = [triple for _, _, triple in front.solutions]
    labels = front.labels()
    panels = [
        ("waste (kg)", "profit", [t.waste for t in triples], [t.profit for t in triples]),
        ("unmet demand (kg)", "profit", [t.unmet for t in triples], [t.profit for t in triples]),
        ("waste (kg)", "unmet demand (kg)", [t.waste for t in triples], [t.unmet for t in triples]),
    ]
    fig, axes = plt.subplots(1, 3, figsize=(15, 4.5))
    for ax, (xlabel, ylabel, xs, ys) in zip(axes, panels):
        ax.scatter(xs, ys, color="#2a7f4f", zorder=3)
        for label, x, y in zip(labels, xs, ys):
            ax.annotate(label, (x, y), textcoords="offset points", xytext=(5, 4))
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        ax.grid(True, linewidth=0.3, alpha=0.6)
    fig.suptitle(f"non-dominated solutions ({len(labels)})")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_ranking(ranking: GroupRanking, path: str | Path) -> None:
    """Horizontal point bars, best rank on top, ties marked ex aequo."""
    entries = list(ranking.entries)
    names = [e.alternative for e in entries]
    points = [e.points for e in entries]
    rank_counts: dict[int, int] = {}
    for e in entries:
        rank_counts[e.rank] = rank_counts.get(e.rank, 0) + 1
    tags = [
        f"rank {e.rank}" + (" ex aequo" if rank_counts[e.rank] > 1 else "")
        for e in entries
    ]
    fig, ax = plt.subplots(figsize=(8, 0.5 * len(entries) + 1.5))
    positions = range(len(entries))
    ax.barh(positions, points, color="#3566a5")
    ax.set_yticks(list(positions), names)
    ax.invert_yaxis()
    ax.set_xlabel("points")
    span = max(points) if points and max(points) > 0 else 1.0
    for y, (value, tag) in enumerate(zip(points, tags)):
        ax.text(value + 0.01 * span, y, tag, va="center", fontsize=8)
    ax.set_xlim(0, span * 1.22)
    ax.set_title("group ranking")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_comparison(comparison: RankingComparison, path: str | Path) -> None:
    """Per-position objective deltas, one panel per objective."""
    rows = list(comparison.rows)
    positions = [r.position for r in rows]
    pair_labels = [f"{r.first}/{r.second}" for r in rows]
    series = [
        ("profit difference", [r.delta_profit for r in rows], "#3566a5"),
        ("waste difference", [r.delta_waste for r in rows], "#b0672c"),
        ("unmet difference", [r.delta_unmet for r in rows], "#8246a5"),
    ]
    fig, axes = plt.subplots(3, 1, figsize=(9, 9), sharex=True)
    for ax, (title, values, color) in zip(axes, series):
        ax.bar(positions, values, color=color)
        ax.axhline(0.0, color="black", linewidth=0.8)
        ax.set_ylabel(title)
        ax.grid(True, axis="y", linewidth=0.3, alpha=0.6)
    axes[-1].set_xticks(positions, pair_labels, rotation=45, ha="right")
    axes[-1].set_xlabel("rank position (first/second)")
    axes[0].set_title("ranking comparison by position")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
